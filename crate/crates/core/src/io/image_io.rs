//! 8-bit RGB PNG camera frames.

use std::fs;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{DynamicImage, ExtendedColorType, ImageEncoder};

use crate::error::{Error, Result};
use crate::types::ImageBuffer;

pub fn decode_image_png(bytes: &[u8]) -> Result<ImageBuffer> {
    let decoded = image::load_from_memory(bytes)?;
    match decoded {
        DynamicImage::ImageRgb8(img) => {
            let (width, height) = (img.width(), img.height());
            ImageBuffer::new(width, height, img.into_raw())
        }
        other => Err(Error::ImageFormat {
            found: format!("{:?}", other.color()),
        }),
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image_png(&bytes)
}

pub fn encode_image_png(img: &ImageBuffer) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out).write_image(
        &img.pixels,
        img.width,
        img.height,
        ExtendedColorType::Rgb8,
    )?;
    Ok(out)
}

pub fn write_image(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_image_png(img)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
