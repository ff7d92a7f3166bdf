//! Convex polygon clipping (Sutherland–Hodgman) and signed area.

/// Shoelace area of a simple polygon. Vertices in counter-clockwise order
/// give a positive value; the absolute value is returned.
pub fn polygon_area(vertices: &[(f64, f64)]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..vertices.len() {
        let (x0, y0) = vertices[i];
        let (x1, y1) = vertices[(i + 1) % vertices.len()];
        twice += x0 * y1 - x1 * y0;
    }
    twice.abs() / 2.0
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn line_intersection(
    a: (f64, f64),
    b: (f64, f64),
    p: (f64, f64),
    q: (f64, f64),
) -> (f64, f64) {
    // Intersection of the infinite lines AB and PQ. Callers only invoke this
    // when the segment PQ straddles AB, so the denominator is nonzero.
    let r = (b.0 - a.0, b.1 - a.1);
    let s = (q.0 - p.0, q.1 - p.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    let t = ((p.0 - a.0) * s.1 - (p.1 - a.1) * s.0) / denom;
    (a.0 + t * r.0, a.1 + t * r.1)
}

/// Clips `subject` against convex `clip` (both counter-clockwise) and
/// returns the intersection polygon, possibly empty.
pub fn clip_convex(subject: &[(f64, f64)], clip: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut output: Vec<(f64, f64)> = subject.to_vec();
    for i in 0..clip.len() {
        if output.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % clip.len()];
        let input = std::mem::take(&mut output);
        for j in 0..input.len() {
            let current = input[j];
            let previous = input[(j + input.len() - 1) % input.len()];
            let current_in = cross(a, b, current) >= 0.0;
            let previous_in = cross(a, b, previous) >= 0.0;
            if current_in {
                if !previous_in {
                    output.push(line_intersection(a, b, previous, current));
                }
                output.push(current);
            } else if previous_in {
                output.push(line_intersection(a, b, previous, current));
            }
        }
    }
    output
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_square() -> Vec<(f64, f64)> {
        vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    }

    #[test]
    fn clip_by_self_is_identity() {
        let sq = unit_square();
        let out = clip_convex(&sq, &sq);
        assert_abs_diff_eq!(polygon_area(&out), 1.0);
    }

    #[test]
    fn clip_disjoint_is_empty() {
        let sq = unit_square();
        let far: Vec<_> = sq.iter().map(|&(x, y)| (x + 5.0, y)).collect();
        let out = clip_convex(&sq, &far);
        assert_abs_diff_eq!(polygon_area(&out), 0.0);
    }

    #[test]
    fn clip_half_overlap() {
        let sq = unit_square();
        let shifted: Vec<_> = sq.iter().map(|&(x, y)| (x + 0.5, y)).collect();
        let out = clip_convex(&sq, &shifted);
        assert_abs_diff_eq!(polygon_area(&out), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rotated_diamond_inside_square() {
        let sq = unit_square();
        let diamond = vec![(0.5, 0.1), (0.9, 0.5), (0.5, 0.9), (0.1, 0.5)];
        let out = clip_convex(&diamond, &sq);
        assert_abs_diff_eq!(polygon_area(&out), polygon_area(&diamond), epsilon = 1e-12);
    }
}
