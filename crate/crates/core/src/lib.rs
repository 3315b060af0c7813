// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense-matrix laboratory for information-carrying (IC) unitaries and
//! quantum-state-difference (QSD) amplification processes.
//!
//! The crate builds oracle selective diagonal operators over qubit/qutrit
//! registers, runs QUANSDAM/UNIDYSLOCK branch evolutions with their QSD rate
//! metrics, implements phase-based QUANSDAM on box-normalized momentum bases
//! with eigenfunction-expansion propagation, checks Boolean-oracle
//! decomposition identities, and synthesizes IC momentum-displacement
//! propagators from group-commutator (BCH-type) products with Trotter
//! repetition.
//!
//! All core math is generic over the real scalar (`scalar::Float`); the
//! aliases below fix the `f64` instantiation that every quoted tolerance
//! refers to.

pub mod bch;
pub mod boolean;
pub mod continuum;
pub mod error;
pub mod fitting;
pub mod gaussian;
pub mod hilbert;
pub mod oracle;
pub mod quansdam;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Float, Tolerances, Units};

/// Complex double.
pub type C64 = num_complex::Complex<f64>;

/// `f64` instantiations of the core types.
pub type BasisTag64 = hilbert::BasisTag<f64>;
pub type StateVector64 = hilbert::StateVector<f64>;
pub type HermitianGenerator64 = hilbert::HermitianGenerator<f64>;
pub type UnitaryMatrix64 = hilbert::UnitaryMatrix<f64>;
pub type Units64 = scalar::Units<f64>;
pub type LogicalVector = oracle::LogicalVector;
pub type BasicIcUnitary64 = oracle::BasicIcUnitary<f64>;
pub type IcStep64 = quansdam::IcStep<f64>;
pub type QuansdamSchedule64 = quansdam::QuansdamSchedule<f64>;
pub type BranchPairTrace64 = quansdam::BranchPairTrace<f64>;
pub type QsdRateReport64 = quansdam::QsdRateReport<f64>;
pub type GaussianPacketParams64 = gaussian::GaussianPacketParams<f64>;
pub type GridSpec64 = continuum::GridSpec<f64>;
pub type GridWavefunction64 = continuum::GridWavefunction<f64>;
pub type EnergyBasis64 = continuum::EnergyBasis<f64>;
pub type EigenbasisExpansion64 = continuum::EigenbasisExpansion<f64>;
pub type IcPropagatorSpec64 = continuum::IcPropagatorSpec<f64>;
pub type UseqStep64 = continuum::UseqStep<f64>;
pub type CommutatorScenario64 = bch::CommutatorScenario<f64>;
