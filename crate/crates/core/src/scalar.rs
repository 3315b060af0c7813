// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! The real scalar type everything is generic over.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar for all numerics: `f32` or `f64`.
///
/// The crate root exposes `f64` aliases for every public type; the
/// double-precision tolerances quoted throughout assume that instantiation.
pub trait Float: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Lift an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Convert to `f64`, e.g. for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not convertible to f64")
    }
}

impl Float for f32 {}
impl Float for f64 {}

/// Complex number over the generic real scalar.
pub type C<T> = num_complex::Complex<T>;

/// Default validation tolerances (meaningful for `f64`).
pub mod tol {
    /// `‖M − M†‖` bound accepted as Hermitian.
    pub const HERMITICITY: f64 = 1e-12;
    /// `‖U†U − I‖` bound accepted as unitary.
    pub const UNITARITY: f64 = 1e-10;
    /// `| ‖ψ‖ − 1 |` bound accepted as normalized.
    pub const NORMALIZATION: f64 = 1e-12;
}

/// Validation tolerances, overridable per experiment.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances<T: Float> {
    pub hermiticity: T,
    pub unitarity: T,
    pub normalization: T,
}

impl<T: Float> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            hermiticity: T::lit(tol::HERMITICITY),
            unitarity: T::lit(tol::UNITARITY),
            normalization: T::lit(tol::NORMALIZATION),
        }
    }
}

/// Physical constants of an experiment. Internal units default to ħ = m = 1.
#[derive(Clone, Copy, Debug)]
pub struct Units<T: Float> {
    pub hbar: T,
    pub mass: T,
}

impl<T: Float> Default for Units<T> {
    fn default() -> Self {
        Self { hbar: T::one(), mass: T::one() }
    }
}

#[cfg(test)]
mod tests {
    use nalgebra::DVector;

    use crate::hilbert::{BasisTag, HermitianGenerator, StateVector, expm_generator, inner_product};
    use crate::scalar::C;

    // the whole core instantiates at f32 too; single precision only buys
    // ~1e-6 accuracy, so the quoted 1e-10/1e-12 tolerances assume f64
    #[test]
    fn single_precision_instantiation_works_at_its_own_accuracy() {
        let h = HermitianGenerator::<f32>::from_real_diagonal(&[0.5, -0.5]);
        let u = expm_generator(&h, std::f32::consts::PI);
        assert!((u.matrix()[(0, 0)] - C::new(0.0f32, -1.0)).norm() < 1e-6);
        assert!(u.unitarity_defect() < 1e-6);

        let s = 1.0f32 / 2.0f32.sqrt();
        let psi = StateVector::<f32>::new(
            BasisTag::qubits(1),
            DVector::from_vec(vec![C::new(s, 0.0), C::new(0.0, s)]),
        )
        .unwrap();
        let ip = inner_product(&psi, &psi).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-6 && ip.im.abs() < 1e-6);
    }
}
