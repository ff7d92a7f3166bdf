//! Intersection-over-union for oriented 3D boxes and axis-aligned 2D boxes.

use super::polygon::{clip_convex, polygon_area};
use crate::types::{BBox2D, ObjectLabel};

/// Clipped polygons below this area (m²) are numerical noise, not overlap.
const AREA_NOISE_FLOOR: f64 = 1e-12;

/// Ground-plane footprint of a KITTI box: four (x, z) corners in
/// counter-clockwise order. The box is yaw-only (heading about the camera
/// Y axis), per the KITTI convention.
pub fn ground_corners(label: &ObjectLabel) -> [(f64, f64); 4] {
    let (_h, w, l) = label.dims;
    let (s, c) = label.rotation_y.sin_cos();
    let (cx, cz) = (label.location.x, label.location.z);
    // local x spans the length, local z the width
    let local = [
        (l / 2.0, w / 2.0),
        (-l / 2.0, w / 2.0),
        (-l / 2.0, -w / 2.0),
        (l / 2.0, -w / 2.0),
    ];
    local.map(|(x, z)| (c * x + s * z + cx, -s * x + c * z + cz))
}

fn vertical_overlap(a: &ObjectLabel, b: &ObjectLabel) -> f64 {
    // location.y is the box bottom; camera y points down, so the box spans
    // [y − h, y].
    let (top_a, bot_a) = (a.location.y - a.dims.0, a.location.y);
    let (top_b, bot_b) = (b.location.y - b.dims.0, b.location.y);
    (bot_a.min(bot_b) - top_a.max(top_b)).max(0.0)
}

/// Volume IOU of two yaw-oriented boxes: rotated ground-rectangle overlap
/// via convex polygon clipping, times the vertical interval overlap, over
/// the union of volumes.
///
/// Volumes take the same shoelace route as the intersection, so identical
/// boxes land on exactly 1.
pub fn box_iou_3d(a: &ObjectLabel, b: &ObjectLabel) -> f64 {
    let corners_a = ground_corners(a);
    let corners_b = ground_corners(b);
    let clipped = clip_convex(&corners_a, &corners_b);
    let mut ground = polygon_area(&clipped);
    if ground < AREA_NOISE_FLOOR {
        ground = 0.0;
    }
    let intersection = ground * vertical_overlap(a, b);
    let volume_a = polygon_area(&corners_a) * a.dims.0;
    let volume_b = polygon_area(&corners_b) * b.dims.0;
    let union = volume_a + volume_b - intersection;
    if union <= 0.0 {
        return 0.0;
    }
    (intersection / union).clamp(0.0, 1.0)
}

/// IOU of axis-aligned 2D boxes (continuous pixel coordinates).
pub fn box_iou_2d(a: &BBox2D, b: &BBox2D) -> f64 {
    let iw = (a.right.min(b.right) - a.left.max(b.left)).max(0.0);
    let ih = (a.bottom.min(b.bottom) - a.top.max(b.top)).max(0.0);
    let intersection = iw * ih;
    let union = a.area() + b.area() - intersection;
    if union <= 0.0 {
        return 0.0;
    }
    (intersection / union).clamp(0.0, 1.0)
}
