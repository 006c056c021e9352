//! Sequential reference engine.
//!
//! For a pixel at `(x, y)` the `(2r+1)²` neighbourhood is binned by intensity
//! `floor((r+g+b) * L / 765)`, which lands in `0..=L`. The bin with the highest
//! count (lowest index on ties) wins and the output is the truncated channel
//! average of the pixels in that bin. Only the interior
//! `[r, w-r) × [r, h-r)` is filtered; the frame around it follows the
//! [`BorderPolicy`].

use crate::error::{Error, Result};
use crate::image::Image;

pub const DEFAULT_INTENSITY_LEVELS: u32 = 20;
pub const MAX_INTENSITY_LEVELS: u32 = 255;

/// What happens to the radius-wide frame the interior loop never visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderPolicy {
    /// Frame pixels are copied from the input.
    #[default]
    CopyInput,
    /// Frame pixels are black, as with a zero-initialised output buffer.
    ZeroFill,
}

/// Full description of one filter invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterParams {
    radius: usize,
    intensity_levels: u32,
    border: BorderPolicy,
}

impl FilterParams {
    pub fn new(radius: usize, intensity_levels: u32) -> Result<Self> {
        if !(1..=MAX_INTENSITY_LEVELS).contains(&intensity_levels) {
            return Err(Error::param(
                "intensity_levels",
                format!("{intensity_levels} is outside 1..=255"),
            ));
        }
        Ok(FilterParams {
            radius,
            intensity_levels,
            border: BorderPolicy::default(),
        })
    }

    pub fn with_border(mut self, border: BorderPolicy) -> Self {
        self.border = border;
        self
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    #[inline]
    pub fn intensity_levels(&self) -> u32 {
        self.intensity_levels
    }

    #[inline]
    pub fn border(&self) -> BorderPolicy {
        self.border
    }

    /// Number of histogram slots, `L + 1`.
    #[inline]
    pub fn bin_count(&self) -> usize {
        self.intensity_levels as usize + 1
    }

    /// Checks that `img` has a non-empty interior for this radius.
    pub fn check_image(&self, img: &Image) -> Result<()> {
        let min_side = img.width().min(img.height());
        if self.radius.saturating_mul(2) >= min_side {
            return Err(Error::param(
                "radius",
                format!(
                    "radius {} leaves no interior in a {}x{} image (need 2*radius < {})",
                    self.radius,
                    img.width(),
                    img.height(),
                    min_side
                ),
            ));
        }
        Ok(())
    }
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            radius: 2,
            intensity_levels: DEFAULT_INTENSITY_LEVELS,
            border: BorderPolicy::default(),
        }
    }
}

/// Intensity class of one pixel: `floor((r+g+b) * levels / 765)`, in `0..=levels`.
#[inline]
pub fn intensity_bin(r: u8, g: u8, b: u8, levels: u32) -> usize {
    let sum = u32::from(r) + u32::from(g) + u32::from(b);
    (sum * levels / 765) as usize
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Bin {
    pub count: u32,
    pub sums: [u64; 3],
}

/// Per-bin pixel counts and channel sums for a single neighbourhood scan.
#[derive(Debug, Clone)]
pub struct HistogramAccumulator {
    levels: u32,
    bins: Vec<Bin>,
}

impl HistogramAccumulator {
    pub fn new(intensity_levels: u32) -> Self {
        HistogramAccumulator {
            levels: intensity_levels,
            bins: vec![Bin::default(); intensity_levels as usize + 1],
        }
    }

    #[inline]
    pub fn reset(&mut self) {
        self.bins.fill(Bin::default());
    }

    /// Bins `rgb` by intensity and adds it.
    #[inline]
    pub fn accumulate(&mut self, rgb: [u8; 3]) {
        let bin = intensity_bin(rgb[0], rgb[1], rgb[2], self.levels);
        self.push(bin, rgb);
    }

    /// Adds `rgb` to an explicit bin. Panics if `bin > levels`.
    #[inline]
    pub fn push(&mut self, bin: usize, rgb: [u8; 3]) {
        let slot = &mut self.bins[bin];
        slot.count += 1;
        slot.sums[0] += u64::from(rgb[0]);
        slot.sums[1] += u64::from(rgb[1]);
        slot.sums[2] += u64::from(rgb[2]);
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn total_count(&self) -> u64 {
        self.bins.iter().map(|b| u64::from(b.count)).sum()
    }

    /// Lowest-index bin holding the maximal count, with that count.
    ///
    /// Panics on an empty histogram: the caller never scanned a neighbourhood.
    #[inline]
    pub fn select_max_bin(&self) -> (usize, u32) {
        let mut best = 0;
        let mut best_count = self.bins[0].count;
        for (i, bin) in self.bins.iter().enumerate().skip(1) {
            if bin.count > best_count {
                best = i;
                best_count = bin.count;
            }
        }
        assert!(best_count > 0, "select_max_bin on an empty histogram");
        (best, best_count)
    }

    /// Truncated channel average of the winning bin.
    #[inline]
    pub fn mode_color(&self) -> [u8; 3] {
        let (idx, count) = self.select_max_bin();
        let bin = &self.bins[idx];
        let n = u64::from(count);
        [
            (bin.sums[0] / n) as u8,
            (bin.sums[1] / n) as u8,
            (bin.sums[2] / n) as u8,
        ]
    }

    /// Histogram of the neighbourhood of interior pixel `(x, y)`.
    pub fn of_neighborhood(img: &Image, x: usize, y: usize, params: &FilterParams) -> Result<Self> {
        let r = params.radius();
        if x < r || y < r || x + r >= img.width() || y + r >= img.height() {
            return Err(Error::param(
                "coordinates",
                format!(
                    "({x}, {y}) is outside the interior of a {}x{} image at radius {r}",
                    img.width(),
                    img.height()
                ),
            ));
        }
        let mut hist = HistogramAccumulator::new(params.intensity_levels());
        hist.scan(img, x, y, r);
        Ok(hist)
    }

    /// Scans the neighbourhood of `(x, y)`. The caller guarantees it lies inside `img`.
    #[inline]
    pub(crate) fn scan(&mut self, img: &Image, x: usize, y: usize, radius: usize) {
        self.reset();
        let span = (2 * radius + 1) * 3;
        let left = (x - radius) * 3;
        for ny in y - radius..=y + radius {
            let row = &img.row(ny)[left..left + span];
            for px in row.chunks_exact(3) {
                self.accumulate([px[0], px[1], px[2]]);
            }
        }
    }
}

/// Filters a single interior pixel.
pub fn filter_pixel(img: &Image, x: usize, y: usize, params: &FilterParams) -> Result<[u8; 3]> {
    Ok(HistogramAccumulator::of_neighborhood(img, x, y, params)?.mode_color())
}

/// Output buffer with the frame already set according to the border policy.
pub(crate) fn init_output(img: &Image, params: &FilterParams) -> Vec<u8> {
    match params.border() {
        BorderPolicy::CopyInput => img.as_bytes().to_vec(),
        BorderPolicy::ZeroFill => vec![0; img.as_bytes().len()],
    }
}

/// Writes the interior pixels of row `y` into `out_row`, a full output row.
#[inline]
pub(crate) fn filter_row(
    img: &Image,
    y: usize,
    radius: usize,
    hist: &mut HistogramAccumulator,
    out_row: &mut [u8],
) {
    for x in radius..img.width() - radius {
        hist.scan(img, x, y, radius);
        let rgb = hist.mode_color();
        out_row[x * 3..x * 3 + 3].copy_from_slice(&rgb);
    }
}

/// Applies the filter on the calling thread.
pub fn apply_sequential(img: &Image, params: &FilterParams) -> Result<Image> {
    params.check_image(img)?;
    let r = params.radius();
    let stride = img.stride();
    let mut out = init_output(img, params);
    let mut hist = HistogramAccumulator::new(params.intensity_levels());
    for y in r..img.height() - r {
        filter_row(img, y, r, &mut hist, &mut out[y * stride..(y + 1) * stride]);
    }
    Ok(Image::from_parts_unchecked(img.width(), img.height(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_examples() {
        assert_eq!(intensity_bin(0, 0, 0, 20), 0);
        assert_eq!(intensity_bin(255, 255, 255, 20), 20);
        assert_eq!(intensity_bin(100, 150, 200, 20), 11);
    }

    #[test]
    fn bin_reaches_levels_only_for_white() {
        for levels in 1..=255u32 {
            for sum in 0..765u32 {
                assert!((sum * levels / 765) < levels);
            }
            assert_eq!(intensity_bin(255, 255, 255, levels), levels as usize);
        }
    }

    #[test]
    fn bin_matches_float_formula() {
        for levels in 1..=255u32 {
            for sum in 0..=765u32 {
                let float = ((f64::from(sum) * f64::from(levels) / 3.0) / 255.0) as usize;
                assert_eq!((sum * levels / 765) as usize, float, "sum {sum} L {levels}");
            }
        }
    }

    fn with_counts(counts: &[u32]) -> HistogramAccumulator {
        let mut h = HistogramAccumulator::new(counts.len() as u32 - 1);
        for (bin, &n) in counts.iter().enumerate() {
            for _ in 0..n {
                h.push(bin, [1, 1, 1]);
            }
        }
        h
    }

    #[test]
    fn max_bin_examples() {
        let mut counts = vec![0; 21];
        counts[0] = 5;
        counts[1] = 4;
        assert_eq!(with_counts(&counts).select_max_bin(), (0, 5));
        assert_eq!(with_counts(&[2; 21]).select_max_bin(), (0, 2));
        let mut counts = vec![0; 21];
        counts[2] = 7;
        assert_eq!(with_counts(&counts).select_max_bin(), (2, 7));
    }

    #[test]
    fn white_bin_can_win() {
        let mut counts = vec![0; 256];
        counts[255] = 3;
        counts[0] = 1;
        assert_eq!(with_counts(&counts).select_max_bin(), (255, 3));
    }

    #[test]
    #[should_panic(expected = "empty histogram")]
    fn max_bin_of_empty_histogram_panics() {
        HistogramAccumulator::new(20).select_max_bin();
    }

    #[test]
    fn levels_out_of_range() {
        assert!(FilterParams::new(1, 0).unwrap_err().is_param_error());
        assert!(FilterParams::new(1, 256).is_err());
        assert!(FilterParams::new(1, 255).is_ok());
    }

    #[test]
    fn pixel_majority_bin() {
        // five dark pixels, four mid pixels
        let dark = [10u8, 20, 30];
        let mid = [200u8, 100, 50];
        let order = [dark, mid, dark, mid, dark, mid, dark, mid, dark];
        let data: Vec<u8> = order.iter().flatten().copied().collect();
        let img = Image::new(3, 3, data).unwrap();
        let params = FilterParams::new(1, 10).unwrap();
        assert_eq!(filter_pixel(&img, 1, 1, &params).unwrap(), dark);
    }

    #[test]
    fn pixel_averages_winning_bin() {
        // three pixels at intensity 240 in the same bin win against six singletons
        let winners = [[250u8, 240, 230], [240, 240, 240], [230, 240, 250]];
        let others = [
            [0u8, 0, 0],
            [60, 60, 60],
            [90, 90, 90],
            [120, 120, 120],
            [150, 150, 150],
            [30, 30, 30],
        ];
        let mut px = Vec::new();
        px.extend_from_slice(&winners[..2]);
        px.push(others[0]);
        px.push(others[1]);
        px.push(others[2]);
        px.push(winners[2]);
        px.extend_from_slice(&others[3..]);
        let data: Vec<u8> = px.iter().flatten().copied().collect();
        let img = Image::new(3, 3, data).unwrap();
        let params = FilterParams::new(1, 20).unwrap();
        assert_eq!(filter_pixel(&img, 1, 1, &params).unwrap(), [240, 240, 240]);
    }

    #[test]
    fn pixel_outside_interior() {
        let img = Image::filled(5, 5, [1, 2, 3]).unwrap();
        let params = FilterParams::new(2, 20).unwrap();
        assert!(filter_pixel(&img, 1, 2, &params).is_err());
        assert!(filter_pixel(&img, 2, 3, &params).is_err());
        assert_eq!(filter_pixel(&img, 2, 2, &params).unwrap(), [1, 2, 3]);
    }

    #[test]
    fn empty_interior_is_param_error() {
        let img = Image::filled(4, 9, [0, 0, 0]).unwrap();
        let err = apply_sequential(&img, &FilterParams::new(2, 20).unwrap()).unwrap_err();
        assert!(err.is_param_error());
        assert!(apply_sequential(&img, &FilterParams::new(1, 20).unwrap()).is_ok());
    }

    #[test]
    fn zero_radius_is_identity() {
        let data: Vec<u8> = (0..5 * 4 * 3).map(|i| (i * 37 % 256) as u8).collect();
        let img = Image::new(5, 4, data).unwrap();
        for border in [BorderPolicy::CopyInput, BorderPolicy::ZeroFill] {
            let params = FilterParams::new(0, 7).unwrap().with_border(border);
            assert_eq!(apply_sequential(&img, &params).unwrap(), img);
        }
    }

    #[test]
    fn zero_fill_frame() {
        let img = Image::filled(6, 6, [9, 9, 9]).unwrap();
        let params = FilterParams::new(1, 20)
            .unwrap()
            .with_border(BorderPolicy::ZeroFill);
        let out = apply_sequential(&img, &params).unwrap();
        assert_eq!(out.pixel(0, 0), [0, 0, 0]);
        assert_eq!(out.pixel(5, 3), [0, 0, 0]);
        assert_eq!(out.pixel(1, 1), [9, 9, 9]);
        assert_eq!(out.pixel(4, 4), [9, 9, 9]);
    }
}
