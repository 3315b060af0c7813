// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Standard Gaussian wave packets and the closed form of their overlap.
//!
//! A packet is parameterized by {x_l, p_l, (Δx_l)², T_l}: center, mean
//! momentum, initial position variance, and free-evolution time. Free
//! spreading enters through β_l = ħT_l/(2m) as the complex variance
//! s_l = Δ_l² + iβ_l:
//!
//!   φ_l(x) = (2π)^{−1/4} √(Δ_l/s_l) · exp(−(x−x_l)²/(4 s_l) + i p_l (x−x_l)/ħ)

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::scalar::{C, Float, Units};

/// Characteristic parameters {x_l, p_l, (Δx_l)², T_l} of a standard Gaussian
/// wave packet.
#[derive(Clone, Copy, Debug)]
pub struct GaussianPacketParams<T: Float> {
    /// Packet center x_l.
    pub center: T,
    /// Mean momentum p_l.
    pub momentum: T,
    /// Initial position variance (Δx_l)².
    pub variance: T,
    /// Free-evolution time T_l.
    pub time: T,
}

impl<T: Float> GaussianPacketParams<T> {
    /// Spreading parameter β_l = ħT_l/(2m).
    pub fn beta(&self, units: &Units<T>) -> T {
        units.hbar * self.time / (T::lit(2.0) * units.mass)
    }

    /// Complex variance s_l = Δ_l² + iβ_l.
    pub fn complex_variance(&self, units: &Units<T>) -> C<T> {
        C::new(self.variance, self.beta(units))
    }

    /// Amplitude φ_l(x).
    pub fn sample(&self, x: T, units: &Units<T>) -> C<T> {
        let s = self.complex_variance(units);
        let delta = self.variance.sqrt();
        let two_pi_root = T::lit((2.0 * std::f64::consts::PI).powf(-0.25));
        let norm = ComplexField::sqrt(C::new(delta, T::zero()) / s) * C::new(two_pi_root, T::zero());
        let dx = x - self.center;
        let quad = -C::new(dx * dx, T::zero()) / (s * C::new(T::lit(4.0), T::zero()));
        let phase = C::new(T::zero(), self.momentum * dx / units.hbar);
        norm * ComplexField::exp(quad + phase)
    }
}

/// Absolute overlap |ρ₁₂| = |∫ φ₁*(x) φ₂(x) dx| of two standard Gaussian
/// packets, in closed form:
///
///   |ρ₁₂| = (4Δ₁²Δ₂² / ((Δ₁²+Δ₂²)² + β₁₂²))^{1/4} · exp(D′ / ((Δ₁²+Δ₂²)² + β₁₂²))
///
/// with p₁₂ = p₁−p₂, x₁₂ = x₁−x₂, β₁₂ = β₁−β₂ and
///
///   D′ = −p₁₂²Δ₁²Δ₂²(Δ₁²+Δ₂²)/ħ² − ¼Δ₁²(x₁₂ − 2p₁₂β₂/ħ)² − ¼Δ₂²(x₁₂ − 2p₁₂β₁/ħ)².
pub fn gaussian_overlap<T: Float>(
    p1: &GaussianPacketParams<T>,
    p2: &GaussianPacketParams<T>,
    units: &Units<T>,
) -> Result<T> {
    for p in [p1, p2] {
        if p.variance <= T::zero() {
            return Err(Error::NonPositiveVariance { value: p.variance.as_f64() });
        }
    }
    let (d1, d2) = (p1.variance, p2.variance);
    let (b1, b2) = (p1.beta(units), p2.beta(units));
    let p12 = p1.momentum - p2.momentum;
    let x12 = p1.center - p2.center;
    let b12 = b1 - b2;
    let hbar = units.hbar;

    let denom = (d1 + d2) * (d1 + d2) + b12 * b12;
    let prefactor = (T::lit(4.0) * d1 * d2 / denom).powf(T::lit(0.25));
    let quarter = T::lit(0.25);
    let two = T::lit(2.0);
    let t1 = -p12 * p12 * d1 * d2 * (d1 + d2) / (hbar * hbar);
    let r2 = x12 - two * p12 * b2 / hbar;
    let r3 = x12 - two * p12 * b1 / hbar;
    let d_prime = t1 - quarter * d1 * r2 * r2 - quarter * d2 * r3 * r3;
    Ok(prefactor * (d_prime / denom).exp())
}
