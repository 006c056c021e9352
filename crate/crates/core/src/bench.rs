//! Size × radius timing sweep for both engines.
//!
//! For every (size, radius) cell the workload image is generated once, each
//! engine gets one untimed warm-up call, then `reps` timed calls. Only the
//! filter call sits inside the timer. Improvement rows compare the sequential
//! and parallel medians.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::filter::{apply_sequential, BorderPolicy, FilterParams, DEFAULT_INTENSITY_LEVELS};
use crate::image::Image;
use crate::parallel::{ParallelConfig, ParallelEngine};
use crate::testgen::{generate, PatternKind, PatternSpec};

pub const DEFAULT_REPS: usize = 5;
pub const DEFAULT_WARMUP: usize = 1;
pub const STANDARD_RADII: [usize; 4] = [2, 4, 6, 8];
/// Seed of the noise workload used by sweeps.
pub const WORKLOAD_SEED: u64 = 1;

pub const RECORD_HEADER: &str =
    "label,width,height,radius,levels,engine,reps,median_ms,min_ms,max_ms";
pub const PAIR_HEADER: &str = "label,radius,t1_ms,t2_ms,improvement_pct";

/// Named image size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeSpec {
    pub label: String,
    pub width: usize,
    pub height: usize,
}

const NAMED_SIZES: [(&str, usize, usize); 5] = [
    ("VGA", 640, 480),
    ("SVGA", 800, 600),
    ("XGA", 1024, 768),
    ("FHD", 1920, 1080),
    ("WQXGA", 2560, 1600),
];

impl SizeSpec {
    pub fn new(label: impl Into<String>, width: usize, height: usize) -> Self {
        SizeSpec {
            label: label.into(),
            width,
            height,
        }
    }

    /// The five display resolutions of the reference sweep, smallest first.
    pub fn standard() -> Vec<SizeSpec> {
        NAMED_SIZES
            .iter()
            .map(|&(l, w, h)| SizeSpec::new(l, w, h))
            .collect()
    }

    /// Accepts `vga`, `svga`, `xga`, `fhd`, `wqxga` (any case) or `<w>x<h>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(&(l, w, h)) = NAMED_SIZES
            .iter()
            .find(|(l, _, _)| l.eq_ignore_ascii_case(s))
        {
            return Ok(SizeSpec::new(l, w, h));
        }
        let bad = || Error::param("sizes", format!("unknown size {s:?}"));
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let w: usize = w.parse().map_err(|_| bad())?;
        let h: usize = h.parse().map_err(|_| bad())?;
        if w == 0 || h == 0 {
            return Err(bad());
        }
        Ok(SizeSpec::new(format!("{w}x{h}"), w, h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Sequential,
    Parallel,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Sequential => "sequential",
            Engine::Parallel => "parallel",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sequential" => Some(Engine::Sequential),
            "parallel" => Some(Engine::Parallel),
            _ => None,
        }
    }
}

/// One (size, radius, engine) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub label: String,
    pub width: usize,
    pub height: usize,
    pub radius: usize,
    pub intensity_levels: u32,
    pub engine: Engine,
    pub reps: usize,
    pub times_ms: Vec<f64>,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
}

impl BenchRecord {
    /// Panics if `times_ms` is empty.
    pub fn from_times(
        size: &SizeSpec,
        params: &FilterParams,
        engine: Engine,
        times_ms: Vec<f64>,
    ) -> Self {
        let stats = TimeStats::of(&times_ms);
        BenchRecord {
            label: size.label.clone(),
            width: size.width,
            height: size.height,
            radius: params.radius(),
            intensity_levels: params.intensity_levels(),
            engine,
            reps: times_ms.len(),
            times_ms,
            median_ms: stats.median,
            min_ms: stats.min,
            max_ms: stats.max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStats {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl TimeStats {
    /// Lower median, minimum and maximum. Panics on an empty slice.
    pub fn of(times: &[f64]) -> Self {
        assert!(!times.is_empty(), "no timings");
        let mut sorted = times.to_vec();
        sorted.sort_by(f64::total_cmp);
        TimeStats {
            median: sorted[(sorted.len() - 1) / 2],
            min: sorted[0],
            max: sorted[sorted.len() - 1],
        }
    }
}

/// Sequential/parallel comparison for one (size, radius) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchPair {
    pub label: String,
    pub radius: usize,
    pub t1_ms: f64,
    pub t2_ms: f64,
    pub improvement_pct: f64,
}

impl BenchPair {
    pub fn new(label: impl Into<String>, radius: usize, t1_ms: f64, t2_ms: f64) -> Result<Self> {
        Ok(BenchPair {
            label: label.into(),
            radius,
            t1_ms,
            t2_ms,
            improvement_pct: improvement_pct(t1_ms, t2_ms)?,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub pairs: Vec<BenchPair>,
}

/// `100 * (t1 - t2) / t1`.
pub fn improvement_pct(t1: f64, t2: f64) -> Result<f64> {
    if t1.is_nan() || t1 <= 0.0 {
        return Err(Error::param("t1", format!("must be positive, got {t1}")));
    }
    Ok(100.0 * (t1 - t2) / t1)
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub sizes: Vec<SizeSpec>,
    pub radii: Vec<usize>,
    pub intensity_levels: u32,
    pub reps: usize,
    pub warmup: usize,
    pub border: BorderPolicy,
    pub parallel: ParallelConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sizes: SizeSpec::standard(),
            radii: STANDARD_RADII.to_vec(),
            intensity_levels: DEFAULT_INTENSITY_LEVELS,
            reps: DEFAULT_REPS,
            warmup: DEFAULT_WARMUP,
            border: BorderPolicy::default(),
            parallel: ParallelConfig::default(),
        }
    }
}

/// Runs the filter `warmup` times untimed and then `reps` times timed.
pub fn time_runs(
    reps: usize,
    warmup: usize,
    mut run: impl FnMut() -> Result<Image>,
) -> Result<Vec<f64>> {
    if reps == 0 {
        return Err(Error::param("reps", "must be at least 1"));
    }
    for _ in 0..warmup {
        std::hint::black_box(run()?);
    }
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let out = run()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
        std::hint::black_box(out);
    }
    Ok(times)
}

/// Timings of the sequential engine on `img`.
pub fn time_sequential(
    img: &Image,
    params: &FilterParams,
    reps: usize,
    warmup: usize,
) -> Result<Vec<f64>> {
    time_runs(reps, warmup, || apply_sequential(img, params))
}

/// Timings of `engine` on `img`.
pub fn time_parallel(
    engine: &ParallelEngine,
    img: &Image,
    params: &FilterParams,
    reps: usize,
    warmup: usize,
) -> Result<Vec<f64>> {
    time_runs(reps, warmup, || engine.apply(img, params))
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<BenchReport> {
    run_sweep_with(cfg, |_| {})
}

/// Like [`run_sweep`], calling `progress` after each record.
pub fn run_sweep_with(
    cfg: &SweepConfig,
    mut progress: impl FnMut(&BenchRecord),
) -> Result<BenchReport> {
    if cfg.reps == 0 {
        return Err(Error::param("reps", "must be at least 1"));
    }
    // validate the whole grid before spending time on any of it
    let mut grid = Vec::with_capacity(cfg.sizes.len() * cfg.radii.len());
    for size in &cfg.sizes {
        for &radius in &cfg.radii {
            let params = FilterParams::new(radius, cfg.intensity_levels)?.with_border(cfg.border);
            if radius.saturating_mul(2) >= size.width.min(size.height) {
                return Err(Error::param(
                    "radius",
                    format!("radius {radius} leaves no interior in {}", size.label),
                ));
            }
            grid.push((size, params));
        }
    }

    let engine = ParallelEngine::new(&cfg.parallel)?;
    let mut report = BenchReport::default();
    let mut current: Option<(&SizeSpec, Image)> = None;
    for (size, params) in grid {
        if current.as_ref().is_none_or(|(s, _)| *s != size) {
            let spec = PatternSpec::new(
                PatternKind::Noise {
                    seed: WORKLOAD_SEED,
                },
                size.width,
                size.height,
            );
            current = Some((size, generate(&spec)?));
        }
        let img = &current.as_ref().expect("workload").1;

        let seq = time_sequential(img, &params, cfg.reps, cfg.warmup)?;
        let seq = BenchRecord::from_times(size, &params, Engine::Sequential, seq);
        progress(&seq);
        let par = time_parallel(&engine, img, &params, cfg.reps, cfg.warmup)?;
        let par = BenchRecord::from_times(size, &params, Engine::Parallel, par);
        progress(&par);

        report.pairs.push(BenchPair::new(
            size.label.clone(),
            params.radius(),
            seq.median_ms,
            par.median_ms,
        )?);
        report.records.push(seq);
        report.records.push(par);
    }
    Ok(report)
}

/// Serialises a report. Millisecond values use the shortest representation
/// that parses back to the same `f64`; improvement is fixed at 6 decimals.
pub fn write_csv(report: &BenchReport) -> Vec<u8> {
    let mut s = String::new();
    s.push_str(RECORD_HEADER);
    s.push('\n');
    for r in &report.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.label,
            r.width,
            r.height,
            r.radius,
            r.intensity_levels,
            r.engine.as_str(),
            r.reps,
            r.median_ms,
            r.min_ms,
            r.max_ms
        );
    }
    s.push('\n');
    s.push_str(PAIR_HEADER);
    s.push('\n');
    for p in &report.pairs {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.6}",
            p.label, p.radius, p.t1_ms, p.t2_ms, p.improvement_pct
        );
    }
    s.into_bytes()
}

/// A record row as stored in the CSV (raw timings are not serialised).
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub label: String,
    pub width: usize,
    pub height: usize,
    pub radius: usize,
    pub intensity_levels: u32,
    pub engine: Engine,
    pub reps: usize,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
}

impl From<&BenchRecord> for RecordRow {
    fn from(r: &BenchRecord) -> Self {
        RecordRow {
            label: r.label.clone(),
            width: r.width,
            height: r.height,
            radius: r.radius,
            intensity_levels: r.intensity_levels,
            engine: r.engine,
            reps: r.reps,
            median_ms: r.median_ms,
            min_ms: r.min_ms,
            max_ms: r.max_ms,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTables {
    pub records: Vec<RecordRow>,
    pub pairs: Vec<BenchPair>,
}

/// Parses the output of [`write_csv`].
pub fn parse_csv(bytes: &[u8]) -> Result<CsvTables> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);
    let mut tables = CsvTables::default();
    let mut in_pairs = false;
    let mut seen_header = false;
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Csv(e.to_string()))?;
        let joined = row.iter().collect::<Vec<_>>().join(",");
        if joined == RECORD_HEADER && !seen_header {
            seen_header = true;
            continue;
        }
        if joined == PAIR_HEADER {
            in_pairs = true;
            continue;
        }
        if !seen_header {
            return Err(Error::Csv("missing record header".into()));
        }
        let bad = |what: &str| Error::Csv(format!("row {}: bad {what}", line + 1));
        let field = |i: usize| row.get(i).ok_or_else(|| bad("column count"));
        if in_pairs {
            if row.len() != 5 {
                return Err(bad("column count"));
            }
            tables.pairs.push(BenchPair {
                label: field(0)?.to_string(),
                radius: field(1)?.parse().map_err(|_| bad("radius"))?,
                t1_ms: field(2)?.parse().map_err(|_| bad("t1_ms"))?,
                t2_ms: field(3)?.parse().map_err(|_| bad("t2_ms"))?,
                improvement_pct: field(4)?.parse().map_err(|_| bad("improvement_pct"))?,
            });
        } else {
            if row.len() != 10 {
                return Err(bad("column count"));
            }
            tables.records.push(RecordRow {
                label: field(0)?.to_string(),
                width: field(1)?.parse().map_err(|_| bad("width"))?,
                height: field(2)?.parse().map_err(|_| bad("height"))?,
                radius: field(3)?.parse().map_err(|_| bad("radius"))?,
                intensity_levels: field(4)?.parse().map_err(|_| bad("levels"))?,
                engine: Engine::parse(field(5)?).ok_or_else(|| bad("engine"))?,
                reps: field(6)?.parse().map_err(|_| bad("reps"))?,
                median_ms: field(7)?.parse().map_err(|_| bad("median_ms"))?,
                min_ms: field(8)?.parse().map_err(|_| bad("min_ms"))?,
                max_ms: field(9)?.parse().map_err(|_| bad("max_ms"))?,
            });
        }
    }
    if !in_pairs {
        return Err(Error::Csv("missing pair header".into()));
    }
    Ok(tables)
}
