//! 8-bit RGB PNG read/write. Palette images are expanded to RGB; other
//! colour types and bit depths are rejected.

use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;

pub fn read_png(bytes: &[u8]) -> Result<Image> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| Error::Png(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Png("image too large".into()))?;
    let mut buf = vec![0; size];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Png(e.to_string()))?;
    if frame.color_type != png::ColorType::Rgb || frame.bit_depth != png::BitDepth::Eight {
        return Err(Error::Png(format!(
            "unsupported pixel format {:?}/{:?}, expected 8-bit RGB",
            frame.color_type, frame.bit_depth
        )));
    }
    let (w, h) = (frame.width as usize, frame.height as usize);
    let stride = frame.line_size;
    let mut data = Vec::with_capacity(w * h * 3);
    for row in buf.chunks(stride).take(h) {
        data.extend_from_slice(&row[..w * 3]);
    }
    Image::new(w, h, data)
}

pub fn write_png(img: &Image) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let width = u32::try_from(img.width()).map_err(|_| Error::Png("width too large".into()))?;
        let height =
            u32::try_from(img.height()).map_err(|_| Error::Png("height too large".into()))?;
        let mut encoder = png::Encoder::new(&mut out, width, height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Png(e.to_string()))?;
        writer
            .write_image_data(img.as_bytes())
            .map_err(|e| Error::Png(e.to_string()))?;
        writer.finish().map_err(|e| Error::Png(e.to_string()))?;
    }
    Ok(out)
}

pub fn load(path: impl AsRef<Path>) -> Result<Image> {
    read_png(&std::fs::read(path)?)
}

pub fn save(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_png(img)?)?;
    Ok(())
}
