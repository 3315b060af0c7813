// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Least-squares line fits used by the rate classifiers and scaling studies.

use crate::scalar::Float;

/// Result of an ordinary least-squares line fit y ≈ slope·x + intercept.
#[derive(Clone, Copy, Debug)]
pub struct LineFit<T: Float> {
    pub slope: T,
    pub intercept: T,
    /// Sum of squared residuals.
    pub residual_sq: T,
}

/// Fit a straight line through (xs, ys). `None` when fewer than two distinct
/// abscissae are available.
pub fn linear_fit<T: Float>(xs: &[T], ys: &[T]) -> Option<LineFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = T::from_usize(xs.len()).unwrap();
    let mean_x = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut residual_sq = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (slope * x + intercept);
        residual_sq += r * r;
    }
    Some(LineFit { slope, intercept, residual_sq })
}

/// Fit log|y| vs log x, skipping points with non-positive x or |y| below
/// `floor`. Returns the fit in log-log coordinates (slope = power-law
/// exponent).
pub fn log_log_fit<T: Float>(xs: &[T], ys: &[T], floor: T) -> Option<LineFit<T>> {
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        if x > T::zero() && y.abs() > floor {
            lx.push(x.ln());
            ly.push(y.abs().ln());
        }
    }
    linear_fit(&lx, &ly)
}

/// Fit log|y| vs x (exponential model), with the same floor convention.
pub fn log_linear_fit<T: Float>(xs: &[T], ys: &[T], floor: T) -> Option<LineFit<T>> {
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        if y.abs() > floor {
            lx.push(x);
            ly.push(y.abs().ln());
        }
    }
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 2.5).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!(fit.residual_sq < 1e-20);
    }

    #[test]
    fn log_log_recovers_power_law() {
        let xs: Vec<f64> = (1..20).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.7 * x.powi(3)).collect();
        let fit = log_log_fit(&xs, &ys, 1e-300).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_input_gives_none() {
        assert!(linear_fit::<f64>(&[1.0], &[2.0]).is_none());
        assert!(linear_fit::<f64>(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }
}
