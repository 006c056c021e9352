//! Deterministic synthetic images.
//!
//! `Noise` fills the raster from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, which is value-stable across platforms.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Uniform([u8; 3]),
    /// `(x*255/(w-1), y*255/(h-1), (x+y)*255/(w+h-2))`, divisors clamped to 1.
    Gradient,
    Checker {
        cell_size: usize,
        a: [u8; 3],
        b: [u8; 3],
    },
    Noise {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternSpec {
    pub kind: PatternKind,
    pub width: usize,
    pub height: usize,
}

impl PatternSpec {
    pub fn new(kind: PatternKind, width: usize, height: usize) -> Self {
        PatternSpec {
            kind,
            width,
            height,
        }
    }
}

pub fn generate(spec: &PatternSpec) -> Result<Image> {
    let (w, h) = (spec.width, spec.height);
    if w == 0 {
        return Err(Error::param("width", "must be positive"));
    }
    if h == 0 {
        return Err(Error::param("height", "must be positive"));
    }
    let len = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| Error::param("width", format!("{w}x{h} is too large")))?;

    let data = match spec.kind {
        PatternKind::Uniform(rgb) => return Image::filled(w, h, rgb),
        PatternKind::Gradient => {
            let dx = (w - 1).max(1);
            let dy = (h - 1).max(1);
            let dxy = (w + h - 2).max(1);
            let mut data = Vec::with_capacity(len);
            for y in 0..h {
                for x in 0..w {
                    data.push((x * 255 / dx) as u8);
                    data.push((y * 255 / dy) as u8);
                    data.push(((x + y) * 255 / dxy) as u8);
                }
            }
            data
        }
        PatternKind::Checker { cell_size, a, b } => {
            if cell_size == 0 {
                return Err(Error::param("cell_size", "must be positive"));
            }
            let mut data = Vec::with_capacity(len);
            for y in 0..h {
                for x in 0..w {
                    let rgb = if (x / cell_size + y / cell_size) % 2 == 0 {
                        a
                    } else {
                        b
                    };
                    data.extend_from_slice(&rgb);
                }
            }
            data
        }
        PatternKind::Noise { seed } => {
            let mut data = vec![0; len];
            ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut data);
            data
        }
    };
    Image::new(w, h, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform() {
        let img = generate(&PatternSpec::new(PatternKind::Uniform([7, 7, 7]), 4, 4)).unwrap();
        assert_eq!(img.as_bytes(), &[7u8; 48][..]);
    }

    #[test]
    fn gradient_2x2() {
        let img = generate(&PatternSpec::new(PatternKind::Gradient, 2, 2)).unwrap();
        assert_eq!(
            img.as_bytes(),
            &[0, 0, 0, 255, 0, 127, 0, 255, 127, 255, 255, 255]
        );
    }

    #[test]
    fn gradient_single_pixel() {
        let img = generate(&PatternSpec::new(PatternKind::Gradient, 1, 1)).unwrap();
        assert_eq!(img.as_bytes(), &[0, 0, 0]);
    }

    #[test]
    fn checker_cells() {
        let kind = PatternKind::Checker {
            cell_size: 2,
            a: [1, 1, 1],
            b: [9, 9, 9],
        };
        let img = generate(&PatternSpec::new(kind, 4, 4)).unwrap();
        assert_eq!(img.pixel(1, 1), [1, 1, 1]);
        assert_eq!(img.pixel(2, 1), [9, 9, 9]);
        assert_eq!(img.pixel(2, 2), [1, 1, 1]);
        let bad = PatternKind::Checker {
            cell_size: 0,
            a: [0; 3],
            b: [0; 3],
        };
        assert!(generate(&PatternSpec::new(bad, 4, 4)).is_err());
    }

    #[test]
    fn noise_is_reproducible() {
        let spec = PatternSpec::new(PatternKind::Noise { seed: 42 }, 33, 17);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        let other = PatternSpec::new(PatternKind::Noise { seed: 43 }, 33, 17);
        assert_ne!(a, generate(&other).unwrap());
    }

    #[test]
    fn zero_dimension() {
        let err = generate(&PatternSpec::new(PatternKind::Gradient, 0, 3)).unwrap_err();
        assert!(err.is_param_error());
        assert!(generate(&PatternSpec::new(PatternKind::Gradient, 3, 0)).is_err());
    }
}
