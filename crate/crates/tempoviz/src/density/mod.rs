//! Tempo distribution estimators.
//!
//! Two estimators are provided. [`spline_pdf`] smooths the *cumulative*
//! distribution: jitter the observations, histogram them, evaluate the
//! empirical CDF at the bin centres, interpolate it with a zero-end-slope
//! cubic spline, and differentiate that spline analytically. Because the
//! CDF is pinned to 0 and 1 just outside the data range, the resulting
//! density cannot leak mass beyond the observed tempo range the way a
//! kernel estimate does. [`gaussian_kde`] is the conventional fixed-
//! bandwidth Gaussian kernel estimate, used where overlapping full-support
//! curves are wanted.

mod spline;

pub use spline::{fit_clamped_spline, ClampedSpline};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Below this many observations the spline estimate is flagged as
/// unreliable (a warning, not an error).
pub const MIN_RELIABLE_OBSERVATIONS: usize = 50;

/// Equal-width histogram of BPM observations.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramResult {
    /// K+1 ascending bin edges.
    pub edges: Vec<f64>,
    /// K per-bin counts; the rightmost bin is closed on both sides.
    pub counts: Vec<u64>,
    /// K bin centres, midpoints of adjacent edges.
    pub centres: Vec<f64>,
}

impl HistogramResult {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_width(&self) -> f64 {
        (self.edges[self.edges.len() - 1] - self.edges[0]) / self.counts.len() as f64
    }
}

/// Empirical CDF evaluated at bin centres, extended with boundary points
/// pinning it to 0 and 1 just outside the data range.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfResult {
    /// K+2 ascending evaluation points.
    pub xs: Vec<f64>,
    /// Cumulative fractions: first 0, last 1, non-decreasing.
    pub fs: Vec<f64>,
}

/// Density curve obtained by differentiating the spline-smoothed CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct SplinePdf {
    /// Ascending grid spanning the histogram's edge range.
    pub grid: Vec<f64>,
    /// Per-BPM density, clamped at 0 and not renormalized.
    pub density: Vec<f64>,
}

/// Fixed-bandwidth Gaussian kernel density estimate.
///
/// Mathematically the density is strictly positive everywhere; in f64 it
/// underflows to 0 several hundred bandwidths away from the data.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    /// Kernel bandwidth in BPM.
    pub bandwidth: f64,
}

/// Parameters for [`spline_pdf`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplinePdfParams {
    pub n_bins: usize,
    pub grid_points: usize,
    /// Offset of the CDF boundary points outside the edge range, BPM.
    pub epsilon: f64,
    /// Half-width of the uniform jitter applied before binning, BPM.
    pub jitter_amplitude: f64,
    pub seed: u64,
}

impl Default for SplinePdfParams {
    fn default() -> Self {
        SplinePdfParams {
            n_bins: 28,
            grid_points: 400,
            epsilon: 1e-3,
            jitter_amplitude: 0.5,
            seed: 0,
        }
    }
}

/// Default bandwidth factor for [`gaussian_kde`]: bandwidth = factor x
/// population std of the data.
pub const KDE_BANDWIDTH_FACTOR: f64 = 0.07;

/// Perturb each value by an independent uniform draw in
/// [−amplitude, +amplitude]. Deterministic for a fixed seed; amplitude 0
/// returns the input unchanged.
pub fn jitter(data: &[f64], amplitude: f64, seed: u64) -> Result<Vec<f64>> {
    if !amplitude.is_finite() || amplitude < 0.0 {
        return Err(Error::invalid(format!(
            "jitter amplitude must be non-negative and finite (got {amplitude})"
        )));
    }
    if amplitude == 0.0 {
        return Ok(data.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(data
        .iter()
        .map(|&v| {
            // Top 53 bits of a u64 give a uniform draw in [0, 1).
            let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            v + (2.0 * unit - 1.0) * amplitude
        })
        .collect())
}

/// Equal-width histogram over [min(data), max(data)]. All-equal data is
/// handled by widening the range symmetrically by max(0.5, |value|x1e-6).
pub fn histogram(data: &[f64], n_bins: usize) -> Result<HistogramResult> {
    if data.is_empty() {
        return Err(Error::invalid("histogram needs at least one observation"));
    }
    if n_bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("histogram observations must be finite"));
    }
    let mut lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        let w = (lo.abs() * 1e-6).max(0.5);
        lo -= w;
        hi += w;
    }
    let edges = linspace(lo, hi, n_bins + 1);
    let mut counts = vec![0u64; n_bins];
    for &v in data {
        let idx = ((v - lo) / (hi - lo) * n_bins as f64) as usize;
        counts[idx.min(n_bins - 1)] += 1;
    }
    let centres = edges.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    Ok(HistogramResult {
        edges,
        counts,
        centres,
    })
}

/// Empirical CDF at the bin centres, cumulative count through bin k over
/// the total, with boundary points (edges[0]−ε, 0) and (edges[K]+ε, 1)
/// prepended and appended.
pub fn empirical_cdf(hist: &HistogramResult, epsilon: f64) -> Result<EcdfResult> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::invalid(format!(
            "epsilon must be positive and finite (got {epsilon})"
        )));
    }
    let total = hist.total_count();
    if total == 0 {
        return Err(Error::invalid("empirical CDF of an empty histogram"));
    }
    let k = hist.n_bins();
    let mut xs = Vec::with_capacity(k + 2);
    let mut fs = Vec::with_capacity(k + 2);
    xs.push(hist.edges[0] - epsilon);
    fs.push(0.0);
    let mut cumulative = 0u64;
    for (count, centre) in hist.counts.iter().zip(&hist.centres) {
        cumulative += count;
        xs.push(*centre);
        fs.push(cumulative as f64 / total as f64);
    }
    xs.push(hist.edges[k] + epsilon);
    fs.push(1.0);
    debug_assert!(fs.windows(2).all(|w| w[1] >= w[0]));
    Ok(EcdfResult { xs, fs })
}

/// Analytic first derivative of the spline at each grid point. Grid points
/// must lie within the knot range.
pub fn eval_spline_derivative(spline: &ClampedSpline, grid: &[f64]) -> Result<Vec<f64>> {
    let (lo, hi) = spline.domain();
    if let Some(bad) = grid.iter().find(|&&x| x < lo || x > hi) {
        return Err(Error::invalid(format!(
            "grid point {bad} outside knot range [{lo}, {hi}]"
        )));
    }
    Ok(grid.iter().map(|&x| spline.derivative(x)).collect())
}

/// The full spline-CDF density pipeline: jitter, histogram, empirical CDF,
/// clamped spline fit, analytic differentiation, clamp at 0.
///
/// Returns the histogram of the *jittered* data (what a caller would draw
/// under the curve) alongside the density. The density is not renormalized
/// after clamping, so its mass can fall slightly below 1.
pub fn spline_pdf(data: &[f64], params: &SplinePdfParams) -> Result<(HistogramResult, SplinePdf)> {
    if params.grid_points < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points (got {})",
            params.grid_points
        )));
    }
    if data.len() < MIN_RELIABLE_OBSERVATIONS {
        log::warn!(
            "spline PDF over {} observations (fewer than {}); the estimate may be unreliable",
            data.len(),
            MIN_RELIABLE_OBSERVATIONS
        );
    }
    let jittered = jitter(data, params.jitter_amplitude, params.seed)?;
    let hist = histogram(&jittered, params.n_bins)?;
    let ecdf = empirical_cdf(&hist, params.epsilon)?;
    let spline = fit_clamped_spline(&ecdf.xs, &ecdf.fs)?;
    let grid = linspace(hist.edges[0], hist.edges[hist.n_bins()], params.grid_points);
    let density = eval_spline_derivative(&spline, &grid)?
        .into_iter()
        .map(|d| d.max(0.0))
        .collect();
    Ok((hist, SplinePdf { grid, density }))
}

/// Fixed-bandwidth Gaussian KDE with bandwidth = `bandwidth_factor` x
/// population std of the data, evaluated on an equispaced grid.
pub fn gaussian_kde(
    data: &[f64],
    bandwidth_factor: f64,
    grid_min: f64,
    grid_max: f64,
    grid_points: usize,
) -> Result<KdeCurve> {
    if data.len() < 2 {
        return Err(Error::invalid(format!(
            "KDE needs at least 2 observations (got {})",
            data.len()
        )));
    }
    if !bandwidth_factor.is_finite() || bandwidth_factor <= 0.0 {
        return Err(Error::invalid(format!(
            "bandwidth factor must be positive and finite (got {bandwidth_factor})"
        )));
    }
    if !grid_min.is_finite() || !grid_max.is_finite() || grid_min >= grid_max {
        return Err(Error::invalid(format!(
            "grid range [{grid_min}, {grid_max}] is empty"
        )));
    }
    if grid_points < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points (got {})",
            grid_points
        )));
    }
    let spread = population_std(data);
    if spread == 0.0 {
        return Err(Error::invalid(
            "KDE bandwidth undefined for zero-variance data",
        ));
    }
    let bandwidth = bandwidth_factor * spread;
    let grid = linspace(grid_min, grid_max, grid_points);
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * bandwidth * data.len() as f64);
    let density = grid
        .iter()
        .map(|&x| {
            norm * data
                .iter()
                .map(|&d| (-0.5 * ((x - d) / bandwidth).powi(2)).exp())
                .sum::<f64>()
        })
        .collect();
    Ok(KdeCurve {
        grid,
        density,
        bandwidth,
    })
}

/// `n` equispaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * step })
        .collect()
}

/// Population (divide-by-N) standard deviation.
pub fn population_std(data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    (data.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Trapezoid-rule integral of `ys` over `xs`.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
        .sum()
}
