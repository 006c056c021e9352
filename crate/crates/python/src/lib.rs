//! Python bindings for the oil-paint filter.
//!
//! ```python
//! import oilpaint_py as op
//! img = op.generate("noise", 64, 48, seed=1)
//! out = op.apply_parallel(img, op.FilterParams(radius=2), threads=4)
//! ```

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use oilpaint::bench::{self, SizeSpec, SweepConfig};
use oilpaint::{BorderPolicy, ParallelConfig, PatternKind, PatternSpec, WorkerCount};

fn to_py_err(err: oilpaint::Error) -> PyErr {
    use oilpaint::Error;
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::Resource(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_border(border: &str) -> PyResult<BorderPolicy> {
    match border {
        "copy" => Ok(BorderPolicy::CopyInput),
        "zero" => Ok(BorderPolicy::ZeroFill),
        other => Err(PyValueError::new_err(format!(
            "border must be 'copy' or 'zero', got {other:?}"
        ))),
    }
}

fn border_name(border: BorderPolicy) -> &'static str {
    match border {
        BorderPolicy::CopyInput => "copy",
        BorderPolicy::ZeroFill => "zero",
    }
}

fn parallel_config(threads: Option<usize>, min_rows: usize) -> PyResult<ParallelConfig> {
    let workers = match threads {
        None => WorkerCount::Auto,
        Some(n) => WorkerCount::fixed(n).map_err(to_py_err)?,
    };
    ParallelConfig::new(workers, min_rows).map_err(to_py_err)
}

/// RGB8 raster with interleaved, row-major pixel bytes.
#[pyclass(module = "oilpaint_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Image {
    inner: oilpaint::Image,
}

#[pymethods]
impl Image {
    #[new]
    fn new(width: usize, height: usize, data: Vec<u8>) -> PyResult<Self> {
        oilpaint::Image::new(width, height, data)
            .map(|inner| Image { inner })
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn filled(width: usize, height: usize, rgb: [u8; 3]) -> PyResult<Self> {
        oilpaint::Image::filled(width, height, rgb)
            .map(|inner| Image { inner })
            .map_err(to_py_err)
    }

    /// Parses binary PPM (P6) bytes.
    #[staticmethod]
    fn from_ppm(data: &[u8]) -> PyResult<Self> {
        oilpaint::ppm::read_ppm(data)
            .map(|inner| Image { inner })
            .map_err(to_py_err)
    }

    fn to_ppm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &oilpaint::ppm::write_ppm(&self.inner))
    }

    /// Reads a `.ppm` or `.png` file.
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let inner = if has_png_extension(&path) {
            oilpaint::png::load(&path)
        } else {
            oilpaint::ppm::load(&path)
        };
        inner.map(|inner| Image { inner }).map_err(to_py_err)
    }

    /// Writes a `.ppm` or `.png` file.
    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        if has_png_extension(&path) {
            oilpaint::png::save(&self.inner, &path)
        } else {
            oilpaint::ppm::save(&self.inner, &path)
        }
        .map_err(to_py_err)
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn data<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.inner.as_bytes())
    }

    fn pixel(&self, x: usize, y: usize) -> PyResult<(u8, u8, u8)> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyValueError::new_err(format!(
                "pixel ({x}, {y}) out of bounds"
            )));
        }
        let [r, g, b] = self.inner.pixel(x, y);
        Ok((r, g, b))
    }

    fn __repr__(&self) -> String {
        format!("Image({}x{})", self.inner.width(), self.inner.height())
    }
}

fn has_png_extension(path: &std::path::Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

/// Radius, intensity levels and border policy of one filter run.
#[pyclass(module = "oilpaint_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct FilterParams {
    inner: oilpaint::FilterParams,
}

#[pymethods]
impl FilterParams {
    #[new]
    #[pyo3(signature = (radius, levels = oilpaint::DEFAULT_INTENSITY_LEVELS, border = "copy"))]
    fn new(radius: usize, levels: u32, border: &str) -> PyResult<Self> {
        let inner = oilpaint::FilterParams::new(radius, levels)
            .map_err(to_py_err)?
            .with_border(parse_border(border)?);
        Ok(FilterParams { inner })
    }

    #[getter]
    fn radius(&self) -> usize {
        self.inner.radius()
    }

    #[getter]
    fn levels(&self) -> u32 {
        self.inner.intensity_levels()
    }

    #[getter]
    fn border(&self) -> &'static str {
        border_name(self.inner.border())
    }

    fn __repr__(&self) -> String {
        format!(
            "FilterParams(radius={}, levels={}, border={:?})",
            self.inner.radius(),
            self.inner.intensity_levels(),
            self.border()
        )
    }
}

#[pyfunction]
fn intensity_bin(r: u8, g: u8, b: u8, levels: u32) -> PyResult<usize> {
    if !(1..=255).contains(&levels) {
        return Err(PyValueError::new_err("levels must be in 1..=255"));
    }
    Ok(oilpaint::intensity_bin(r, g, b, levels))
}

#[pyfunction]
fn filter_pixel(img: &Image, x: usize, y: usize, params: &FilterParams) -> PyResult<(u8, u8, u8)> {
    let [r, g, b] = oilpaint::filter_pixel(&img.inner, x, y, &params.inner).map_err(to_py_err)?;
    Ok((r, g, b))
}

#[pyfunction]
fn apply_sequential(py: Python<'_>, img: &Image, params: &FilterParams) -> PyResult<Image> {
    let (src, p) = (&img.inner, params.inner);
    py.detach(|| oilpaint::apply_sequential(src, &p))
        .map(|inner| Image { inner })
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (img, params, threads = None, min_rows = 1))]
fn apply_parallel(
    py: Python<'_>,
    img: &Image,
    params: &FilterParams,
    threads: Option<usize>,
    min_rows: usize,
) -> PyResult<Image> {
    let cfg = parallel_config(threads, min_rows)?;
    let (src, p) = (&img.inner, params.inner);
    py.detach(|| oilpaint::apply_parallel(src, &p, &cfg))
        .map(|inner| Image { inner })
        .map_err(to_py_err)
}

/// Synthetic image: `uniform`, `gradient`, `checker` or `noise`.
#[pyfunction]
#[pyo3(signature = (pattern, width, height, seed = 0, color = [128, 128, 128], color2 = [0, 0, 0], cell = 8))]
fn generate(
    pattern: &str,
    width: usize,
    height: usize,
    seed: u64,
    color: [u8; 3],
    color2: [u8; 3],
    cell: usize,
) -> PyResult<Image> {
    let kind = match pattern {
        "uniform" => PatternKind::Uniform(color),
        "gradient" => PatternKind::Gradient,
        "checker" => PatternKind::Checker {
            cell_size: cell,
            a: color,
            b: color2,
        },
        "noise" => PatternKind::Noise { seed },
        other => return Err(PyValueError::new_err(format!("unknown pattern {other:?}"))),
    };
    oilpaint::generate(&PatternSpec::new(kind, width, height))
        .map(|inner| Image { inner })
        .map_err(to_py_err)
}

#[pyfunction]
fn improvement_pct(t1: f64, t2: f64) -> PyResult<f64> {
    bench::improvement_pct(t1, t2).map_err(to_py_err)
}

/// Result of a timing sweep.
#[pyclass(module = "oilpaint_py", frozen)]
pub struct BenchReport {
    inner: bench::BenchReport,
}

#[pymethods]
impl BenchReport {
    #[getter]
    fn records<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .records
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("label", &r.label)?;
                d.set_item("width", r.width)?;
                d.set_item("height", r.height)?;
                d.set_item("radius", r.radius)?;
                d.set_item("levels", r.intensity_levels)?;
                d.set_item("engine", r.engine.as_str())?;
                d.set_item("reps", r.reps)?;
                d.set_item("times_ms", r.times_ms.clone())?;
                d.set_item("median_ms", r.median_ms)?;
                d.set_item("min_ms", r.min_ms)?;
                d.set_item("max_ms", r.max_ms)?;
                Ok(d)
            })
            .collect()
    }

    #[getter]
    fn pairs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .pairs
            .iter()
            .map(|p| {
                let d = PyDict::new(py);
                d.set_item("label", &p.label)?;
                d.set_item("radius", p.radius)?;
                d.set_item("t1_ms", p.t1_ms)?;
                d.set_item("t2_ms", p.t2_ms)?;
                d.set_item("improvement_pct", p.improvement_pct)?;
                Ok(d)
            })
            .collect()
    }

    fn to_csv(&self) -> String {
        String::from_utf8(bench::write_csv(&self.inner)).expect("csv is ascii")
    }
}

/// Times both engines over `sizes` x `radii`. Sizes are keywords
/// (`vga` .. `wqxga`) or `WxH` strings.
#[pyfunction]
#[pyo3(signature = (sizes, radii, levels = oilpaint::DEFAULT_INTENSITY_LEVELS, reps = bench::DEFAULT_REPS, threads = None))]
fn run_sweep(
    py: Python<'_>,
    sizes: Vec<String>,
    radii: Vec<usize>,
    levels: u32,
    reps: usize,
    threads: Option<usize>,
) -> PyResult<BenchReport> {
    let sizes = sizes
        .iter()
        .map(|s| SizeSpec::parse(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py_err)?;
    let cfg = SweepConfig {
        sizes,
        radii,
        intensity_levels: levels,
        reps,
        parallel: parallel_config(threads, 1)?,
        ..Default::default()
    };
    py.detach(|| bench::run_sweep(&cfg))
        .map(|inner| BenchReport { inner })
        .map_err(to_py_err)
}

#[pymodule]
fn oilpaint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Image>()?;
    m.add_class::<FilterParams>()?;
    m.add_class::<BenchReport>()?;
    m.add_function(wrap_pyfunction!(intensity_bin, m)?)?;
    m.add_function(wrap_pyfunction!(filter_pixel, m)?)?;
    m.add_function(wrap_pyfunction!(apply_sequential, m)?)?;
    m.add_function(wrap_pyfunction!(apply_parallel, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(improvement_pct, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
