//! Binary PPM (P6) codec, 8-bit RGB only.
//!
//! The writer always emits the canonical header `P6\n<w> <h>\n255\n` with no
//! comments. The reader additionally accepts `#` comments and arbitrary
//! whitespace between header tokens.

use std::io::Write;
use std::path::Path;

use crate::error::{PpmError, Result};
use crate::image::Image;

/// Parsed P6 header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixmapHeader {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&c) = self.buf.get(self.pos) {
            if c == b'#' {
                while let Some(&c) = self.buf.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &'static str) -> Result<u64, PpmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.buf.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let digits = &self.buf[start..self.pos];
        if digits.is_empty() {
            return match self.buf.get(self.pos) {
                None => Err(PpmError::MissingField(field)),
                Some(_) => Err(PpmError::InvalidField {
                    field,
                    value: token_at(self.buf, start),
                }),
            };
        }
        // digits only, so parse fails solely on overflow
        std::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PpmError::InvalidField {
                field,
                value: String::from_utf8_lossy(digits).into_owned(),
            })
    }
}

fn token_at(buf: &[u8], start: usize) -> String {
    let end = buf[start..]
        .iter()
        .position(u8::is_ascii_whitespace)
        .map_or(buf.len(), |n| start + n)
        .min(start + 16);
    String::from_utf8_lossy(&buf[start..end]).into_owned()
}

/// Parses the header and returns it with the payload offset.
pub fn read_header(bytes: &[u8]) -> Result<(PixmapHeader, usize), PpmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(PpmError::BadMagic);
    }
    let mut cur = Cursor { buf: bytes, pos: 2 };
    if !cur
        .buf
        .get(2)
        .is_some_and(|c| c.is_ascii_whitespace() || *c == b'#')
    {
        return Err(PpmError::BadMagic);
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 {
        return Err(PpmError::InvalidField {
            field: "width",
            value: "0".into(),
        });
    }
    if height == 0 {
        return Err(PpmError::InvalidField {
            field: "height",
            value: "0".into(),
        });
    }
    if maxval != 255 {
        return Err(PpmError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates maxval from the raster
    match cur.buf.get(cur.pos) {
        Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
        Some(_) => {
            return Err(PpmError::InvalidField {
                field: "maxval",
                value: token_at(bytes, cur.pos),
            })
        }
        None => {
            return Err(PpmError::Truncated {
                expected: 1,
                actual: 0,
            })
        }
    }
    let (w, h) = match (usize::try_from(width), usize::try_from(height)) {
        (Ok(w), Ok(h)) if w.checked_mul(h).and_then(|n| n.checked_mul(3)).is_some() => (w, h),
        _ => return Err(PpmError::DimensionOverflow { width, height }),
    };
    Ok((
        PixmapHeader {
            width: w,
            height: h,
            maxval: 255,
        },
        cur.pos,
    ))
}

pub fn read_ppm(bytes: &[u8]) -> Result<Image> {
    let (header, offset) = read_header(bytes)?;
    let expected = header.width * header.height * 3;
    let payload = &bytes[offset..];
    if payload.len() < expected {
        return Err(PpmError::Truncated {
            expected,
            actual: payload.len(),
        }
        .into());
    }
    if payload.len() > expected {
        return Err(PpmError::TrailingData(payload.len() - expected).into());
    }
    Image::new(header.width, header.height, payload.to_vec())
}

pub fn write_ppm(img: &Image) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.as_bytes().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.as_bytes());
    out
}

pub fn load(path: impl AsRef<Path>) -> Result<Image> {
    read_ppm(&std::fs::read(path)?)
}

pub fn save(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(&write_ppm(img))?;
    f.flush()?;
    Ok(())
}
