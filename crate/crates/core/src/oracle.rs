// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Oracle selective diagonal operators, candidate solution states, index
//! maps, and the basic information-carrying (IC) unitary for qubit and
//! qutrit registers.
//!
//! A candidate solution state is encoded by a logical vector {a_1,…,a_n}
//! with a_k = ±1 (qubits) or +1/0/−1 (qutrits). The selective diagonal
//! operator D_S is the rank-1 projector onto that candidate basis state,
//! assembled as a tensor product of single-site diagonal factors; the
//! selective phase operator is C_S(θ) = exp(−iθ D_S).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{BasisTag, HermitianGenerator, StateVector, UnitaryMatrix, expm_generator};
use crate::scalar::{C, Float};

/// Local dimension of a register site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Two,
    Three,
}

impl Arity {
    pub fn dim(self) -> usize {
        match self {
            Arity::Two => 2,
            Arity::Three => 3,
        }
    }

    pub fn as_u8(self) -> u8 {
        self.dim() as u8
    }

    /// Legal logical values for one site.
    pub fn legal_values(self) -> &'static [i8] {
        match self {
            Arity::Two => &[1, -1],
            Arity::Three => &[1, 0, -1],
        }
    }
}

/// Unit-number vector {a_1,…,a_n}: ±1 per site, with 0 allowed for qutrits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalVector {
    arity: Arity,
    values: Vec<i8>,
}

impl LogicalVector {
    pub fn new(arity: Arity, values: Vec<i8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyLogicalVector);
        }
        for &v in &values {
            if !arity.legal_values().contains(&v) {
                return Err(Error::InvalidLogicalValue { value: v, arity: arity.as_u8() });
            }
        }
        Ok(Self { arity, values })
    }

    /// Parse the comma-separated text form, e.g. `"+1,-1,+1"`.
    pub fn parse(arity: Arity, text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for token in text.split(',') {
            let t = token.trim();
            let v: i8 = match t {
                "+1" | "1" => 1,
                "-1" => -1,
                "0" => 0,
                _ => return Err(Error::InvalidLogicalToken { token: t.to_string() }),
            };
            values.push(v);
        }
        Self::new(arity, values)
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Basis index S of the encoded candidate state: each site contributes a
    /// base-`arity` digit (1−a)/2 for qubits or (1−a) for qutrits, site 1
    /// most significant.
    pub fn index(&self) -> usize {
        let base = self.arity.dim();
        self.values.iter().fold(0usize, |acc, &a| {
            let digit = match self.arity {
                Arity::Two => ((1 - a as isize) / 2) as usize,
                Arity::Three => (1 - a as isize) as usize,
            };
            acc * base + digit
        })
    }

    /// Inverse of [`LogicalVector::index`] for an `n`-site register.
    pub fn from_index(arity: Arity, sites: usize, mut index: usize) -> Result<Self> {
        let base = arity.dim();
        if sites == 0 {
            return Err(Error::EmptyLogicalVector);
        }
        let mut digits = vec![0usize; sites];
        for slot in (0..sites).rev() {
            digits[slot] = index % base;
            index /= base;
        }
        let values = digits
            .into_iter()
            .map(|d| match arity {
                Arity::Two => 1 - 2 * d as i8,
                Arity::Three => 1 - d as i8,
            })
            .collect();
        Self::new(arity, values)
    }

    pub fn register_tag<T: Float>(&self) -> BasisTag<T> {
        BasisTag::Register { arity: self.arity.as_u8(), sites: self.len() }
    }
}

impl fmt::Display for LogicalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|&v| match v {
                1 => "+1".to_string(),
                0 => "0".to_string(),
                _ => "-1".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for LogicalVector {
    type Err = Error;

    /// Parses as a qubit vector unless a `0` token forces arity 3.
    fn from_str(s: &str) -> Result<Self> {
        let arity = if s.split(',').any(|t| t.trim() == "0") { Arity::Three } else { Arity::Two };
        Self::parse(arity, s)
    }
}

/// Candidate solution state |S⟩ together with its logical encoding and index.
#[derive(Clone, Debug)]
pub struct CandidateState<T: Float> {
    pub logical: LogicalVector,
    pub state: StateVector<T>,
    pub index: usize,
}

/// Single-site diagonal factor of D_S.
fn projector_factor<T: Float>(arity: Arity, a: i8) -> Vec<T> {
    let af = T::lit(a as f64);
    match arity {
        // E/2 + a I_z with I_z = diag(1/2, −1/2)
        Arity::Two => vec![
            T::lit(0.5) + af * T::lit(0.5),
            T::lit(0.5) - af * T::lit(0.5),
        ],
        // (1−|a|) E + (a/2) I_z + (−1 + 3|a|/2) I_z², spin-1 diagonals
        Arity::Three => {
            let abs = T::lit(a.unsigned_abs() as f64);
            let c_e = T::one() - abs;
            let c_z = af * T::lit(0.5);
            let c_z2 = -T::one() + T::lit(1.5) * abs;
            let e = [T::one(), T::one(), T::one()];
            let iz = [T::one(), T::zero(), -T::one()];
            let iz2 = [T::one(), T::zero(), T::one()];
            (0..3).map(|k| c_e * e[k] + c_z * iz[k] + c_z2 * iz2[k]).collect()
        }
    }
}

/// Single-site factor of the candidate state expansion (left unnormalized on
/// purpose: the component sums collapse to exact unit basis vectors).
fn candidate_factor<T: Float>(arity: Arity, a: i8) -> Vec<T> {
    let af = T::lit(a as f64);
    match arity {
        // |T⟩/2 + a|S⟩ with |T⟩ = |0⟩+|1⟩ and |S⟩ = (|0⟩−|1⟩)/2
        Arity::Two => vec![
            T::lit(0.5) + af * T::lit(0.5),
            T::lit(0.5) - af * T::lit(0.5),
        ],
        // (1−|a|)|T_{+1}⟩ + (a/2)|T_0⟩ + (−1 + 3|a|/2)|T_{−1}⟩
        Arity::Three => {
            let abs = T::lit(a.unsigned_abs() as f64);
            let c_p = T::one() - abs;
            let c_0 = af * T::lit(0.5);
            let c_m = -T::one() + T::lit(1.5) * abs;
            let t_p = [T::one(), T::one(), T::one()];
            let t_0 = [T::one(), T::zero(), -T::one()];
            let t_m = [T::one(), T::zero(), T::one()];
            (0..3).map(|k| c_p * t_p[k] + c_0 * t_0[k] + c_m * t_m[k]).collect()
        }
    }
}

/// Oracle selective diagonal operator D_S: tensor product of single-site
/// diagonal factors; a rank-1 projector onto the candidate basis state.
pub fn oracle_projector<T: Float>(l: &LogicalVector) -> HermitianGenerator<T> {
    let mut diag: Vec<T> = vec![T::one()];
    for &a in l.values() {
        let factor = projector_factor::<T>(l.arity(), a);
        let mut next = Vec::with_capacity(diag.len() * factor.len());
        for &d in &diag {
            for &f in &factor {
                next.push(d * f);
            }
        }
        diag = next;
    }
    HermitianGenerator::from_real_diagonal(&diag)
}

/// Selective phase operator C_S(θ) = exp(−iθ D_S): e^{−iθ} on the candidate
/// index, 1 elsewhere.
pub fn selective_phase<T: Float>(l: &LogicalVector, theta: T) -> UnitaryMatrix<T> {
    let dim = l.arity().dim().pow(l.len() as u32);
    let s = l.index();
    let mut phases = vec![T::zero(); dim];
    phases[s] = theta;
    UnitaryMatrix::from_phases(&phases)
}

/// Evaluate the candidate-state tensor expansion literally and check that it
/// collapses to the basis state selected by the index map.
pub fn candidate_state<T: Float>(l: &LogicalVector) -> CandidateState<T> {
    let mut amps: Vec<T> = vec![T::one()];
    for &a in l.values() {
        let factor = candidate_factor::<T>(l.arity(), a);
        let mut next = Vec::with_capacity(amps.len() * factor.len());
        for &c in &amps {
            for &f in &factor {
                next.push(c * f);
            }
        }
        amps = next;
    }
    let index = l.index();
    for (i, &c) in amps.iter().enumerate() {
        let expect = if i == index { T::one() } else { T::zero() };
        debug_assert!(
            (c - expect).abs() <= T::lit(1e-14),
            "candidate expansion failed to collapse at entry {i}"
        );
    }
    let vec = DVector::from_iterator(amps.len(), amps.into_iter().map(|c| C::new(c, T::zero())));
    let state = StateVector::new(l.register_tag(), vec).expect("dimension fixed by register");
    CandidateState { logical: l.clone(), state, index }
}

/// Rotation axis λ of a spin operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::InvalidLogicalToken { token: s.to_string() }),
        }
    }
}

/// How the single-site spin operator is embedded into the register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// Full one-site rotation: I ⊗ … ⊗ I_λ ⊗ … ⊗ I.
    Spin,
    /// Pseudospin operator |0⟩⟨0| ⊗ … ⊗ I_λ ⊗ … ⊗ |0⟩⟨0|: the register is
    /// assumed prepared in |0⟩ everywhere except the target site.
    Pseudospin,
}

/// Single-site spin operator I_λ: spin-1/2 (I_λ = σ_λ/2) or spin-1.
pub fn spin_operator<T: Float>(arity: Arity, axis: Axis) -> DMatrix<C<T>> {
    let z = T::zero();
    let h = T::lit(0.5);
    let o = T::one();
    match arity {
        Arity::Two => match axis {
            Axis::X => DMatrix::from_row_slice(2, 2, &[
                C::new(z, z), C::new(h, z),
                C::new(h, z), C::new(z, z),
            ]),
            Axis::Y => DMatrix::from_row_slice(2, 2, &[
                C::new(z, z), C::new(z, -h),
                C::new(z, h), C::new(z, z),
            ]),
            Axis::Z => DMatrix::from_row_slice(2, 2, &[
                C::new(h, z), C::new(z, z),
                C::new(z, z), C::new(-h, z),
            ]),
        },
        Arity::Three => {
            let r = T::one() / T::lit(2.0).sqrt();
            match axis {
                Axis::X => DMatrix::from_row_slice(3, 3, &[
                    C::new(z, z), C::new(r, z), C::new(z, z),
                    C::new(r, z), C::new(z, z), C::new(r, z),
                    C::new(z, z), C::new(r, z), C::new(z, z),
                ]),
                Axis::Y => DMatrix::from_row_slice(3, 3, &[
                    C::new(z, z), C::new(z, -r), C::new(z, z),
                    C::new(z, r), C::new(z, z), C::new(z, -r),
                    C::new(z, z), C::new(z, r), C::new(z, z),
                ]),
                Axis::Z => DMatrix::from_row_slice(3, 3, &[
                    C::new(o, z), C::new(z, z), C::new(z, z),
                    C::new(z, z), C::new(z, z), C::new(z, z),
                    C::new(z, z), C::new(z, z), C::new(-o, z),
                ]),
            }
        }
    }
}

/// Parameters of a basic IC unitary exp(−i a θ I_λ) on one register site.
#[derive(Clone, Debug)]
pub struct BasicIcUnitary<T: Float> {
    pub axis: Axis,
    pub angle: T,
    /// Logical value a: ±1, or +1/0/−1 on qutrit registers.
    pub logical_value: i8,
    /// Target site m (0-based).
    pub target: usize,
    pub embedding: Embedding,
}

/// Embedded generator I_{mλ} of the basic IC unitary on an `n`-site register.
pub fn ic_generator<T: Float>(
    axis: Axis,
    target: usize,
    embedding: Embedding,
    arity: Arity,
    sites: usize,
) -> Result<HermitianGenerator<T>> {
    if target >= sites {
        return Err(Error::TargetOutOfRange { target, sites });
    }
    let local = spin_operator::<T>(arity, axis);
    let d = arity.dim();
    let mut ground = DMatrix::<C<T>>::zeros(d, d);
    ground[(0, 0)] = C::new(T::one(), T::zero());
    let identity = DMatrix::<C<T>>::identity(d, d);

    let mut m = DMatrix::<C<T>>::identity(1, 1);
    for site in 0..sites {
        let factor = if site == target {
            &local
        } else {
            match embedding {
                Embedding::Spin => &identity,
                Embedding::Pseudospin => &ground,
            }
        };
        m = m.kronecker(factor);
    }
    HermitianGenerator::new(m)
}

/// Realize the basic IC unitary exp(−i a θ I_{mλ}).
pub fn basic_ic_unitary<T: Float>(
    spec: &BasicIcUnitary<T>,
    arity: Arity,
    sites: usize,
) -> Result<UnitaryMatrix<T>> {
    if !arity.legal_values().contains(&spec.logical_value) {
        return Err(Error::InvalidLogicalValue {
            value: spec.logical_value,
            arity: arity.as_u8(),
        });
    }
    let generator = ic_generator::<T>(spec.axis, spec.target, spec.embedding, arity, sites)?;
    let a = T::lit(spec.logical_value as f64);
    Ok(expm_generator(&generator, a * spec.angle))
}
