#![allow(dead_code, clippy::needless_range_loop)]

use oilpaint::{BorderPolicy, Image};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force oil-paint filter in the style of a plain C loop:
/// signed offsets, a floating-point bin formula and fixed 256-entry tables
/// (so bin L, reachable only by pure white, has a slot and takes part in the
/// max search).
pub fn oracle(
    src: &[u8],
    width: usize,
    height: usize,
    levels: u32,
    radius: usize,
    zero_fill: bool,
) -> Vec<u8> {
    let mut out = if zero_fill {
        vec![0u8; src.len()]
    } else {
        src.to_vec()
    };
    let (w, h, rad) = (width as i64, height as i64, radius as i64);
    let mut col = rad;
    while col < h - rad {
        let mut row = rad;
        while row < w - rad {
            let mut count = [0i64; 256];
            let mut sum_r = [0i64; 256];
            let mut sum_g = [0i64; 256];
            let mut sum_b = [0i64; 256];
            for y in -rad..=rad {
                for x in -rad..=rad {
                    let index = (((col + y) * w * 3) + ((row + x) * 3)) as usize;
                    let r = src[index] as i64;
                    let g = src[index + 1] as i64;
                    let b = src[index + 2] as i64;
                    let cur = (((r + g + b) as f64 * levels as f64 / 3.0) / 255.0) as usize;
                    count[cur] += 1;
                    sum_r[cur] += r;
                    sum_g[cur] += g;
                    sum_b[cur] += b;
                }
            }
            let mut max_index = 0;
            let mut cur_max = count[0];
            for i in 0..=levels as usize {
                if count[i] > cur_max {
                    cur_max = count[i];
                    max_index = i;
                }
            }
            let index = ((col * w * 3) + (row * 3)) as usize;
            assert!(cur_max > 0);
            out[index] = (sum_r[max_index] / cur_max) as u8;
            out[index + 1] = (sum_g[max_index] / cur_max) as u8;
            out[index + 2] = (sum_b[max_index] / cur_max) as u8;
            row += 1;
        }
        col += 1;
    }
    out
}

pub fn oracle_image(img: &Image, levels: u32, radius: usize, border: BorderPolicy) -> Vec<u8> {
    oracle(
        img.as_bytes(),
        img.width(),
        img.height(),
        levels,
        radius,
        border == BorderPolicy::ZeroFill,
    )
}

/// Random image whose pixels are drawn from a small palette, so neighbourhoods
/// have repeated bins and ties instead of all-singleton histograms.
pub fn random_image(rng: &mut ChaCha8Rng, width: usize, height: usize) -> Image {
    let palette_len = 1 + (rng.next_u32() % 8) as usize;
    let mut palette = vec![[0u8; 3]; palette_len];
    for c in &mut palette {
        rng.fill_bytes(c);
    }
    // occasionally force the extremes
    if rng.next_u32().is_multiple_of(4) {
        palette[0] = [255, 255, 255];
    }
    if rng.next_u32().is_multiple_of(4) {
        palette[palette_len - 1] = [0, 0, 0];
    }
    let full_noise = rng.next_u32().is_multiple_of(5);
    let mut data = Vec::with_capacity(width * height * 3);
    for _ in 0..width * height {
        if full_noise {
            let mut px = [0u8; 3];
            rng.fill_bytes(&mut px);
            data.extend_from_slice(&px);
        } else {
            let c = palette[(rng.next_u32() as usize) % palette_len];
            data.extend_from_slice(&c);
        }
    }
    Image::new(width, height, data).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}
