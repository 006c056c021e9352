//! `oilbench` command-line frontend.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 filter
//! parameter error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oilpaint::bench::{self, SizeSpec, SweepConfig};
use oilpaint::{
    apply_sequential, generate, BorderPolicy, Error, FilterParams, Image, ParallelConfig,
    ParallelEngine, PatternKind, PatternSpec, WorkerCount,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PARAM: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "oilbench",
    version,
    about = "Oil-paint filter and benchmark tool"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter an image file.
    Apply(ApplyArgs),
    /// Write a synthetic test image.
    Gen(GenArgs),
    /// Time both engines over a size x radius grid and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Seq,
    Par,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BorderArg {
    Copy,
    Zero,
}

impl From<BorderArg> for BorderPolicy {
    fn from(b: BorderArg) -> Self {
        match b {
            BorderArg::Copy => BorderPolicy::CopyInput,
            BorderArg::Zero => BorderPolicy::ZeroFill,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    Uniform,
    Gradient,
    Checker,
    Noise,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub radius: usize,
    #[arg(long, default_value_t = oilpaint::DEFAULT_INTENSITY_LEVELS,
          value_parser = clap::value_parser!(u32).range(1..=255), allow_hyphen_values = true)]
    pub levels: u32,
    #[arg(long, value_enum, default_value = "seq")]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value = "copy")]
    pub border: BorderArg,
    /// Worker threads for the parallel engine (default: OILBENCH_THREADS or all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_hyphen_values = true)]
    pub threads: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub pattern: PatternArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_hyphen_values = true)]
    pub width: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_hyphen_values = true)]
    pub height: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Colour for `uniform`, and first colour for `checker`, as R,G,B.
    #[arg(long, value_parser = parse_rgb, default_value = "128,128,128")]
    pub color: [u8; 3],
    /// Second colour for `checker`.
    #[arg(long, value_parser = parse_rgb, default_value = "0,0,0")]
    pub color2: [u8; 3],
    /// Cell size for `checker`.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub cell: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated sizes: vga, svga, xga, fhd, wqxga or WxH.
    #[arg(long, value_delimiter = ',', default_value = "vga,svga,xga,fhd,wqxga")]
    pub sizes: Vec<String>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "2,4,6,8",
        allow_hyphen_values = true
    )]
    pub radii: Vec<usize>,
    #[arg(long, default_value_t = oilpaint::DEFAULT_INTENSITY_LEVELS,
          value_parser = clap::value_parser!(u32).range(1..=255), allow_hyphen_values = true)]
    pub levels: u32,
    #[arg(long, default_value_t = bench::DEFAULT_REPS as u64,
          value_parser = clap::value_parser!(u64).range(1..), allow_hyphen_values = true)]
    pub reps: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_hyphen_values = true)]
    pub threads: Option<u64>,
}

fn parse_rgb(s: &str) -> Result<[u8; 3], String> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected R,G,B, got {s:?}"));
    }
    let mut rgb = [0u8; 3];
    for (c, p) in rgb.iter_mut().zip(parts) {
        *c = p.parse().map_err(|_| format!("bad channel value {p:?}"))?;
    }
    Ok(rgb)
}

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    fn from_core(context: &str, err: Error) -> Self {
        let code = if err.is_param_error() {
            EXIT_PARAM
        } else {
            EXIT_IO
        };
        Failure {
            code,
            message: format!("{context}: {err}"),
        }
    }
}

fn parallel_config(threads: Option<u64>) -> Result<ParallelConfig, Failure> {
    let worker_count = match threads {
        None => WorkerCount::Auto,
        Some(n) => {
            WorkerCount::fixed(n as usize).map_err(|e| Failure::from_core("--threads", e))?
        }
    };
    Ok(ParallelConfig {
        worker_count,
        ..Default::default()
    })
}

fn is_png(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

fn load_image(path: &Path) -> Result<Image, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::io(path, e))?;
    let img = if is_png(path) {
        oilpaint::png::read_png(&bytes)
    } else {
        oilpaint::ppm::read_ppm(&bytes)
    };
    img.map_err(|e| Failure::io(path, e))
}

fn save_image(img: &Image, path: &Path) -> Result<(), Failure> {
    let bytes = if is_png(path) {
        oilpaint::png::write_png(img).map_err(|e| Failure::io(path, e))?
    } else {
        oilpaint::ppm::write_ppm(img)
    };
    std::fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn apply(args: &ApplyArgs, diag: &mut dyn Write) -> Result<(), Failure> {
    let params = FilterParams::new(args.radius, args.levels)
        .map_err(|e| Failure::from_core("--levels", e))?
        .with_border(args.border.into());
    let img = load_image(&args.input)?;
    params
        .check_image(&img)
        .map_err(|e| Failure::from_core("--radius", e))?;

    let engine = match args.engine {
        EngineArg::Seq => None,
        EngineArg::Par => Some(
            ParallelEngine::new(&parallel_config(args.threads)?)
                .map_err(|e| Failure::from_core("parallel engine", e))?,
        ),
    };
    let start = Instant::now();
    let out = match &engine {
        None => apply_sequential(&img, &params),
        Some(engine) => engine.apply(&img, &params),
    }
    .map_err(|e| Failure::from_core("filter", e))?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    save_image(&out, &args.output)?;
    let _ = writeln!(
        diag,
        "width={} height={} time_process_ms={elapsed_ms:.3}",
        img.width(),
        img.height()
    );
    Ok(())
}

fn gen(args: &GenArgs) -> Result<(), Failure> {
    let kind = match args.pattern {
        PatternArg::Uniform => PatternKind::Uniform(args.color),
        PatternArg::Gradient => PatternKind::Gradient,
        PatternArg::Checker => PatternKind::Checker {
            cell_size: args.cell as usize,
            a: args.color,
            b: args.color2,
        },
        PatternArg::Noise => PatternKind::Noise { seed: args.seed },
    };
    let spec = PatternSpec::new(kind, args.width as usize, args.height as usize);
    let img = generate(&spec).map_err(|e| Failure::from_core("gen", e))?;
    save_image(&img, &args.output)
}

fn run_bench(args: &BenchArgs, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), Failure> {
    let sizes = args
        .sizes
        .iter()
        .map(|s| SizeSpec::parse(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("--sizes: {e}"),
        })?;
    let cfg = SweepConfig {
        sizes,
        radii: args.radii.clone(),
        intensity_levels: args.levels,
        reps: args.reps as usize,
        parallel: parallel_config(args.threads)?,
        ..Default::default()
    };
    let report = bench::run_sweep_with(&cfg, |r| {
        let _ = writeln!(
            diag,
            "{} r={} {}: median {:.3} ms",
            r.label,
            r.radius,
            r.engine.as_str(),
            r.median_ms
        );
    })
    .map_err(|e| Failure::from_core("bench", e))?;
    let csv = bench::write_csv(&report);
    match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Failure::io(path, e)),
        None => out
            .write_all(&csv)
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

/// Usage text of the subcommand named by `name`, or of the whole tool.
fn usage_for(name: Option<&OsString>) -> String {
    use clap::CommandFactory;
    let mut cmd = Cli::command();
    cmd.build();
    let sub = name
        .and_then(|n| n.to_str())
        .and_then(|n| cmd.find_subcommand(n).cloned());
    match sub {
        Some(mut sub) => sub.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let rendered = e.render().to_string();
                    let _ = write!(diag, "{rendered}");
                    if !rendered.contains("Usage:") {
                        let _ = write!(diag, "\n{}", usage_for(argv.get(1)));
                    }
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Apply(args) => apply(args, diag),
        Command::Gen(args) => gen(args),
        Command::Bench(args) => run_bench(args, out, diag),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(diag, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
