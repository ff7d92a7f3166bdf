//! Depth maps as single-channel 16-bit PNGs: depth_m = raw / 256, raw 0
//! means "no ground truth".

use std::fs;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{DynamicImage, ExtendedColorType, ImageEncoder};

use crate::error::{Error, Result};
use crate::types::DepthMap;

pub fn decode_depth_png(bytes: &[u8]) -> Result<DepthMap> {
    let decoded = image::load_from_memory(bytes)?;
    match decoded {
        DynamicImage::ImageLuma16(img) => {
            let (width, height) = (img.width(), img.height());
            DepthMap::from_raw(width, height, &img.into_raw())
        }
        other => Err(Error::DepthBitDepth {
            found: format!("{:?}", other.color()),
        }),
    }
}

pub fn load_depth_map(path: impl AsRef<Path>) -> Result<DepthMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_depth_png(&bytes)
}

pub fn encode_depth_png(map: &DepthMap) -> Result<Vec<u8>> {
    let raw = map.to_raw()?;
    // the encoder takes 16-bit samples in native byte order
    let mut bytes = Vec::with_capacity(raw.len() * 2);
    for v in raw {
        bytes.extend_from_slice(&v.to_ne_bytes());
    }
    let mut out = Vec::new();
    PngEncoder::new(&mut out).write_image(&bytes, map.width, map.height, ExtendedColorType::L16)?;
    Ok(out)
}

pub fn write_depth_map(map: &DepthMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_depth_png(map)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
