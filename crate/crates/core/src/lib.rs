//! Histogram-based oil-paint filter.
//!
//! Every output pixel is the channel-wise average of the neighbourhood pixels
//! that fall into the most populated intensity bin. Two engines compute the
//! same bytes: [`apply_sequential`] and the row-banded [`apply_parallel`].
//! The crate also carries a lossless PPM codec, a deterministic test pattern
//! generator and the timing harness used to compare the engines.

pub mod bench;
mod error;
pub mod filter;
mod image;
pub mod parallel;
#[cfg(feature = "png")]
pub mod png;
pub mod ppm;
pub mod testgen;

pub use error::{Error, PpmError, Result};
pub use filter::{
    apply_sequential, filter_pixel, intensity_bin, BorderPolicy, FilterParams,
    HistogramAccumulator, DEFAULT_INTENSITY_LEVELS,
};
pub use image::Image;
pub use parallel::{apply_parallel, ParallelConfig, ParallelEngine, WorkerCount};
pub use testgen::{generate, PatternKind, PatternSpec};
