// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands live on different bases")]
    BasisMismatch,

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("logical value {value} is not legal for arity {arity}")]
    InvalidLogicalValue { value: i8, arity: u8 },

    #[error("logical vector must have at least one entry")]
    EmptyLogicalVector,

    #[error("cannot parse logical value token {token:?}")]
    InvalidLogicalToken { token: String },

    #[error("target site {target} out of range for {sites}-site register")]
    TargetOutOfRange { target: usize, sites: usize },

    #[error("schedule layout invalid: {qm} QM operators for {ic} IC steps (need qm = ic + 1)")]
    ScheduleLayout { qm: usize, ic: usize },

    #[error("at least one logical branch value is required")]
    EmptyBranchSet,

    #[error("trace has {len} overlap points; need at least 2")]
    TraceTooShort { len: usize },

    #[error("Gaussian packet variance must be positive (got {value})")]
    NonPositiveVariance { value: f64 },

    #[error("momentum quantum number {k} violates the Nyquist bound for {points} grid points")]
    NyquistViolation { k: i64, points: usize },

    #[error("grid needs at least {min} points, got {points}")]
    GridTooCoarse { points: usize, min: usize },

    #[error("internal spin eigenvalue m_z must be nonzero")]
    ZeroInternalEigenvalue,

    #[error("internal state must be an S_z eigenstate")]
    InternalNotSzEigenstate,

    #[error("wavefunction must carry the internal ground state |0>")]
    InternalStateNotGround,

    #[error("step count must be at least 1")]
    StepCountTooSmall,

    #[error("generator is not diagonal in the expansion basis (off-diagonal weight {defect:e})")]
    NotDiagonalInBasis { defect: f64 },

    #[error("register of {sites} sites exceeds the exhaustive-mode limit of {max}")]
    RegisterTooLarge { sites: usize, max: usize },

    #[error("solution index {x0} out of range for a search space of dimension {dim}")]
    SolutionOutOfRange { x0: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
