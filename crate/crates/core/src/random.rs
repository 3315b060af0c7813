// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic random fixtures.
//!
//! All randomness flows through a counter-based ChaCha12 stream seeded from a
//! single `u64`, so identical seeds give identical fixtures on every platform.

use nalgebra::{ComplexField, DMatrix, DVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::hilbert::{BasisTag, HermitianGenerator, StateVector, UnitaryMatrix};
use crate::scalar::{C, Float};

/// Seeded ChaCha12 stream.
pub struct SeededRng(ChaCha12Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha12Rng::seed_from_u64(seed))
    }

    /// Uniform sample in [0, 1) with 53 bits of resolution.
    pub fn uniform<T: Float>(&mut self) -> T {
        let u = (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        T::lit(u)
    }

    /// Standard normal sample (Box-Muller).
    pub fn normal<T: Float>(&mut self) -> T {
        let u1: T = T::one() - self.uniform::<T>(); // (0, 1]
        let u2: T = self.uniform();
        (-T::lit(2.0) * u1.ln()).sqrt() * (T::two_pi() * u2).cos()
    }

    pub fn complex_normal<T: Float>(&mut self) -> C<T> {
        C::new(self.normal(), self.normal())
    }
}

/// Normalized state with i.i.d. complex Gaussian amplitudes.
pub fn random_state<T: Float>(tag: BasisTag<T>, rng: &mut SeededRng) -> StateVector<T> {
    let dim = tag.dim();
    let amps = DVector::from_fn(dim, |_, _| rng.complex_normal::<T>());
    StateVector::new(tag, amps).expect("dimension fixed by tag").normalize()
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase fixed.
pub fn random_unitary<T: Float>(dim: usize, rng: &mut SeededRng) -> UnitaryMatrix<T> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.complex_normal::<T>());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.modulus() > T::zero() {
            d / C::new(d.modulus(), T::zero())
        } else {
            C::new(T::one(), T::zero())
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q).expect("QR factor is unitary")
}

/// GUE-style Hermitian matrix, entries O(1).
pub fn random_hermitian<T: Float>(dim: usize, rng: &mut SeededRng) -> HermitianGenerator<T> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.complex_normal::<T>());
    let h = (&g + g.adjoint()) * C::new(T::lit(0.5), T::zero());
    HermitianGenerator::new(h).expect("symmetrized matrix is Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_reproduces_fixtures() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        let ua = random_unitary::<f64>(4, &mut a);
        let ub = random_unitary::<f64>(4, &mut b);
        assert_eq!(ua.matrix(), ub.matrix());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = SeededRng::new(3);
        for dim in [2usize, 5, 16] {
            let u = random_unitary::<f64>(dim, &mut rng);
            assert!(u.unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn random_state_is_normalized() {
        let mut rng = SeededRng::new(9);
        let s = random_state::<f64>(BasisTag::Levels { count: 10 }, &mut rng);
        assert!(s.is_normalized(1e-12));
    }
}
