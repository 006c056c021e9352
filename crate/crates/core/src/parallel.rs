//! Row-parallel engine.
//!
//! Interior rows are cut into contiguous bands. Each band is a task on a
//! private rayon pool; a task reads the shared input, owns its own histogram
//! and writes only the output rows of its band. The result is byte-identical
//! to [`apply_sequential`](crate::apply_sequential) for every configuration.

use std::num::NonZeroUsize;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::{filter_row, init_output, FilterParams, HistogramAccumulator};
use crate::image::Image;

/// Overrides [`WorkerCount::Auto`] when set to a positive integer.
pub const THREADS_ENV: &str = "OILBENCH_THREADS";

/// Bands per worker targeted by [`plan_bands`].
const BANDS_PER_WORKER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WorkerCount {
    /// `OILBENCH_THREADS` if valid, otherwise hardware concurrency.
    #[default]
    Auto,
    Fixed(NonZeroUsize),
}

impl WorkerCount {
    pub fn fixed(n: usize) -> Result<Self> {
        NonZeroUsize::new(n)
            .map(WorkerCount::Fixed)
            .ok_or_else(|| Error::param("worker_count", "must be at least 1"))
    }

    pub fn resolve(self) -> usize {
        match self {
            WorkerCount::Fixed(n) => n.get(),
            WorkerCount::Auto => auto_workers(std::env::var(THREADS_ENV).ok().as_deref()),
        }
    }
}

/// Worker count for `Auto` given the raw value of `OILBENCH_THREADS`.
pub fn auto_workers(env_value: Option<&str>) -> usize {
    env_value
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(hardware_threads)
}

pub fn hardware_threads() -> usize {
    std::thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParallelConfig {
    pub worker_count: WorkerCount,
    /// Smallest band handed to a task.
    pub min_rows_per_task: NonZeroUsize,
}

impl ParallelConfig {
    pub fn new(worker_count: WorkerCount, min_rows_per_task: usize) -> Result<Self> {
        let min_rows_per_task = NonZeroUsize::new(min_rows_per_task)
            .ok_or_else(|| Error::param("min_rows_per_task", "must be at least 1"))?;
        Ok(ParallelConfig {
            worker_count,
            min_rows_per_task,
        })
    }

    pub fn with_workers(workers: usize) -> Result<Self> {
        Ok(ParallelConfig {
            worker_count: WorkerCount::fixed(workers)?,
            ..Default::default()
        })
    }
}

impl Default for ParallelConfig {
    fn default() -> Self {
        ParallelConfig {
            worker_count: WorkerCount::Auto,
            min_rows_per_task: NonZeroUsize::MIN,
        }
    }
}

/// Splits `rows` into contiguous, disjoint, ordered bands covering every row.
///
/// Bands hold at least `min_rows` rows (except possibly the last) and aim for
/// about four bands per worker so stealing can even out imbalance.
pub fn plan_bands(rows: Range<usize>, workers: usize, min_rows: usize) -> Vec<Range<usize>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let target = workers.max(1) * BANDS_PER_WORKER;
    let band = n.div_ceil(target).max(min_rows.max(1));
    (rows.start..rows.end)
        .step_by(band)
        .map(|start| start..(start + band).min(rows.end))
        .collect()
}

/// A parallel filter engine owning its worker pool.
pub struct ParallelEngine {
    pool: rayon::ThreadPool,
    workers: usize,
    min_rows: usize,
}

impl ParallelEngine {
    pub fn new(cfg: &ParallelConfig) -> Result<Self> {
        let workers = cfg.worker_count.resolve();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("oilpaint-{i}"))
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?;
        Ok(ParallelEngine {
            pool,
            workers,
            min_rows: cfg.min_rows_per_task.get(),
        })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn apply(&self, img: &Image, params: &FilterParams) -> Result<Image> {
        params.check_image(img)?;
        let r = params.radius();
        let stride = img.stride();
        let mut out = init_output(img, params);
        let bands = plan_bands(r..img.height() - r, self.workers, self.min_rows);

        let mut tasks = Vec::with_capacity(bands.len());
        let mut rest = &mut out[r * stride..(img.height() - r) * stride];
        for band in bands {
            let (head, tail) = rest.split_at_mut(band.len() * stride);
            tasks.push((band, head));
            rest = tail;
        }

        self.pool.install(|| {
            tasks.into_par_iter().for_each(|(band, buf)| {
                let mut hist = HistogramAccumulator::new(params.intensity_levels());
                for (y, out_row) in band.zip(buf.chunks_exact_mut(stride)) {
                    filter_row(img, y, r, &mut hist, out_row);
                }
            });
        });
        Ok(Image::from_parts_unchecked(img.width(), img.height(), out))
    }
}

impl std::fmt::Debug for ParallelEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParallelEngine")
            .field("workers", &self.workers)
            .field("min_rows", &self.min_rows)
            .finish()
    }
}

/// Builds an engine for `cfg` and applies the filter with it.
pub fn apply_parallel(img: &Image, params: &FilterParams, cfg: &ParallelConfig) -> Result<Image> {
    ParallelEngine::new(cfg)?.apply(img, params)
}
