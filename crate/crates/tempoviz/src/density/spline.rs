//! Cubic spline interpolation with zero-slope (clamped) end conditions.
//!
//! The fitter solves the standard tridiagonal system for the spline's
//! second derivatives at the knots, with the two boundary rows pinning the
//! first derivative to zero at each end. Coefficients are stored per
//! segment in the local variable t = x − knot[i]:
//!
//! ```text
//! S(x) = a + b·t + c·t² + d·t³
//! ```

use crate::error::{Error, Result};

/// A cubic interpolating spline whose first derivative is zero at both end
/// knots.
#[derive(Debug, Clone, PartialEq)]
pub struct ClampedSpline {
    knots: Vec<f64>,
    /// `[a, b, c, d]` for each of the `knots.len() - 1` segments.
    coeffs: Vec<[f64; 4]>,
}

/// Fit a clamped cubic spline through `(xs, ys)` with S'(xs[0]) =
/// S'(xs[last]) = 0. Requires at least 3 strictly increasing knots.
pub fn fit_clamped_spline(xs: &[f64], ys: &[f64]) -> Result<ClampedSpline> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!(
            "knot positions ({}) and values ({}) differ in length",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::invalid(format!(
            "spline needs at least 3 knots, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::invalid("spline knots must be finite"));
    }
    for pair in xs.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid(format!(
                "knot positions must be strictly increasing ({} then {})",
                pair[0], pair[1]
            )));
        }
    }

    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    // Tridiagonal system for the second derivatives sigma[0..n]. Boundary
    // rows encode S' = 0 at each end; interior rows are the usual
    // C2-continuity conditions. The matrix is diagonally dominant, so the
    // Thomas algorithm needs no pivoting.
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    rhs[0] = 6.0 * slope[0];
    for i in 1..n - 1 {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
    }
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];
    rhs[n - 1] = -6.0 * slope[n - 2];
    let sigma = solve_tridiagonal(&sub, &diag, &sup, &rhs);

    let coeffs = (0..n - 1)
        .map(|i| {
            let a = ys[i];
            let b = slope[i] - h[i] * (2.0 * sigma[i] + sigma[i + 1]) / 6.0;
            let c = sigma[i] / 2.0;
            let d = (sigma[i + 1] - sigma[i]) / (6.0 * h[i]);
            [a, b, c, d]
        })
        .collect();
    Ok(ClampedSpline {
        knots: xs.to_vec(),
        coeffs,
    })
}

impl ClampedSpline {
    /// Spline value at `x`. Outside the knot range the boundary segment's
    /// cubic is extended.
    pub fn eval(&self, x: f64) -> f64 {
        let (t, [a, b, c, d]) = self.local(x);
        a + t * (b + t * (c + t * d))
    }

    /// Analytic first derivative at `x`.
    pub fn derivative(&self, x: f64) -> f64 {
        let (t, [_, b, c, d]) = self.local(x);
        b + t * (2.0 * c + t * 3.0 * d)
    }

    /// Analytic second derivative at `x`.
    pub fn second_derivative(&self, x: f64) -> f64 {
        let (t, [_, _, c, d]) = self.local(x);
        2.0 * c + 6.0 * d * t
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Per-segment `[a, b, c, d]` coefficients in the local variable
    /// t = x − knots[i].
    pub fn coefficients(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    /// Knot range `(first, last)`.
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    fn local(&self, x: f64) -> (f64, [f64; 4]) {
        let i = self.knots.partition_point(|&k| k <= x);
        let seg = i.saturating_sub(1).min(self.coeffs.len() - 1);
        (x - self.knots[seg], self.coeffs[seg])
    }
}

/// Thomas algorithm. `sub[i]`, `diag[i]`, `sup[i]` are the coefficients of
/// row i; `sub[0]` and `sup[last]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_data_gives_zero_function() {
        let s = fit_clamped_spline(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]).unwrap();
        for i in 0..=20 {
            let x = i as f64 * 0.1;
            assert_relative_eq!(s.eval(x), 0.0);
            assert_relative_eq!(s.derivative(x), 0.0);
        }
    }

    #[test]
    fn interpolates_knots_exactly() {
        let xs = [0.0, 0.7, 1.1, 2.9, 4.0];
        let ys = [0.0, 0.2, 0.55, 0.9, 1.0];
        let s = fit_clamped_spline(&xs, &ys).unwrap();
        for (&x, &y) in xs.iter().zip(&ys) {
            assert!((s.eval(x) - y).abs() < 1e-9, "residual at {x}");
        }
    }

    #[test]
    fn endpoint_slopes_are_zero() {
        let xs = [0.0, 1.0, 2.0, 4.0, 5.0];
        let ys = [0.0, 0.1, 0.5, 0.9, 1.0];
        let s = fit_clamped_spline(&xs, &ys).unwrap();
        assert!(s.derivative(0.0).abs() < 1e-9);
        assert!(s.derivative(5.0).abs() < 1e-9);
        // Centered finite difference agrees at one step inside each end.
        let h = 1e-6;
        let fd_left = (s.eval(h) - s.eval(0.0)) / h;
        let fd_right = (s.eval(5.0) - s.eval(5.0 - h)) / h;
        assert!(fd_left.abs() < 1e-4, "{fd_left}");
        assert!(fd_right.abs() < 1e-4, "{fd_right}");
    }

    #[test]
    fn c2_continuity_at_interior_knots() {
        let xs = [0.0, 1.0, 2.0, 4.0, 5.0];
        let ys = [0.0, 0.1, 0.5, 0.9, 1.0];
        let s = fit_clamped_spline(&xs, &ys).unwrap();
        let coeffs = s.coefficients();
        for i in 0..coeffs.len() - 1 {
            let t = xs[i + 1] - xs[i];
            let [a, b, c, d] = coeffs[i];
            let [a2, b2, c2, _] = coeffs[i + 1];
            let value_left = a + t * (b + t * (c + t * d));
            let deriv_left = b + t * (2.0 * c + t * 3.0 * d);
            let second_left = 2.0 * c + 6.0 * d * t;
            assert!((value_left - a2).abs() < 1e-7, "value jump at knot {}", i + 1);
            assert!((deriv_left - b2).abs() < 1e-7, "slope jump at knot {}", i + 1);
            assert!((second_left - 2.0 * c2).abs() < 1e-7, "curvature jump at knot {}", i + 1);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(fit_clamped_spline(&[0.0, 1.0], &[0.0, 1.0]).is_err());
        assert!(fit_clamped_spline(&[0.0, 1.0, 1.0], &[0.0, 0.5, 1.0]).is_err());
        assert!(fit_clamped_spline(&[0.0, 2.0, 1.0], &[0.0, 0.5, 1.0]).is_err());
        assert!(fit_clamped_spline(&[0.0, 1.0, 2.0], &[0.0, 0.5]).is_err());
        assert!(fit_clamped_spline(&[0.0, f64::NAN, 2.0], &[0.0, 0.5, 1.0]).is_err());
    }
}
