// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reversible Boolean oracle semantics for single-marked-item search.
//!
//! The Boolean functional operation U_f flips a functional qubit on the
//! marked item. Sandwiched as BFSEQ = V₀ U_f V(θ) U_f V₀ with two ancilla
//! qubits prepared in |0⟩|0⟩ it realizes the selective phase e^{−iθ} on the
//! marked state while returning the ancillas to |0⟩|0⟩. On the main register
//! BFSEQ, its selective decomposition factors, the usual oracle U_o(θ), and
//! the selective diagonal operator C_S(θ) all generate the same unitary.
//!
//! Register layout is big-endian: |main⟩ ⊗ |func⟩ ⊗ |aux⟩.

use std::str::FromStr;

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::hilbert::{TensorProduct, UnitaryMatrix, max_abs_entry};
use crate::oracle::{Arity, LogicalVector, selective_phase};
use crate::scalar::{C, Float};

/// Exhaustive-mode limit for operations that multiply 2ⁿ factors.
pub const EXHAUSTIVE_LIMIT: usize = 6;

/// Search oracle over n qubits with hidden solution index x0:
/// f(x) = 1 iff x = x0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOracleSpec {
    pub n: usize,
    pub x0: usize,
}

impl SearchOracleSpec {
    pub fn new(n: usize, x0: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyLogicalVector);
        }
        let dim = 1usize << n;
        if x0 >= dim {
            return Err(Error::SolutionOutOfRange { x0, dim });
        }
        Ok(Self { n, x0 })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// The realized Boolean function.
    pub fn f(&self, x: usize) -> u8 {
        (x == self.x0) as u8
    }
}

impl FromStr for SearchOracleSpec {
    type Err = Error;

    /// Text form `"n=4,x0=11"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut x0 = None;
        for token in s.split(',') {
            let t = token.trim();
            let bad = || Error::InvalidLogicalToken { token: t.to_string() };
            let (key, value) = t.split_once('=').ok_or_else(bad)?;
            let parsed: usize = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "n" => n = Some(parsed),
                "x0" => x0 = Some(parsed),
                _ => return Err(bad()),
            }
        }
        let missing = || Error::InvalidLogicalToken { token: s.to_string() };
        Self::new(n.ok_or_else(missing)?, x0.ok_or_else(missing)?)
    }
}

/// Register layout of the function-operational sequence: `n` main qubits,
/// one functional qubit, one auxiliary qubit, ancillas prepared in |0⟩|0⟩.
/// Big-endian index: |x⟩|f⟩|aux⟩ sits at 4x + 2f + aux.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AncillaRegisterLayout {
    pub main_qubits: usize,
}

impl AncillaRegisterLayout {
    pub fn new(main_qubits: usize) -> Self {
        Self { main_qubits }
    }

    pub fn main_dim(&self) -> usize {
        1 << self.main_qubits
    }

    pub fn full_dim(&self) -> usize {
        self.main_dim() * 4
    }

    /// Index of the basis input |x⟩|0⟩|0⟩.
    pub fn prepared_index(&self, x: usize) -> usize {
        x * 4
    }

    /// Whether a full-register index lies in the |·⟩|0⟩|0⟩ sector.
    pub fn in_restored_sector(&self, index: usize) -> bool {
        index.is_multiple_of(4)
    }
}

/// Boolean functional operation U_f on main ⊗ func:
/// |x⟩|y⟩ → |x⟩|y ⊕ f(x)⟩. A permutation matrix, and an involution.
pub fn u_f<T: Float>(spec: &SearchOracleSpec) -> UnitaryMatrix<T> {
    let dim = spec.dim() * 2;
    let mut m = DMatrix::<C<T>>::zeros(dim, dim);
    for x in 0..spec.dim() {
        for y in 0..2usize {
            let col = x * 2 + y;
            let row = x * 2 + (y ^ spec.f(x) as usize);
            m[(row, col)] = C::new(T::one(), T::zero());
        }
    }
    UnitaryMatrix::new(m).expect("permutation matrix is unitary")
}

/// Ancilla preparation V₀ = e^{−iπ/2} e^{iπ I_x}: exactly the bit flip
/// [[0,1],[1,0]] (the global phase cancels the rotation's −i).
pub fn v0<T: Float>() -> UnitaryMatrix<T> {
    let z = C::new(T::zero(), T::zero());
    let o = C::new(T::one(), T::zero());
    UnitaryMatrix::new(DMatrix::from_row_slice(2, 2, &[z, o, o, z]))
        .expect("bit flip is unitary")
}

/// Two-qubit phase V(θ) = Diag(1, 1, 1, e^{−iθ}) on func ⊗ aux: the phase
/// fires only on |f = 1⟩|aux = 1⟩.
pub fn v_theta<T: Float>(theta: T) -> UnitaryMatrix<T> {
    UnitaryMatrix::from_phases(&[T::zero(), T::zero(), T::zero(), theta])
}

/// The five-step sequence BFSEQ = V₀ U_f V(θ) U_f V₀ on main ⊗ func ⊗ aux.
pub fn bfseq<T: Float>(spec: &SearchOracleSpec, theta: T) -> UnitaryMatrix<T> {
    let main_dim = spec.dim();
    let id_main = UnitaryMatrix::<T>::identity(main_dim);
    let id_mf = UnitaryMatrix::<T>::identity(main_dim * 2);
    let id2 = UnitaryMatrix::<T>::identity(2);

    let v0_full = id_mf.tensor(&v0::<T>());
    let uf_full = u_f::<T>(spec).tensor(&id2);
    let vt_full = id_main.tensor(&v_theta(theta));

    // rightmost acts first
    v0_full
        .compose(&uf_full)
        .and_then(|m| m.compose(&vt_full))
        .and_then(|m| m.compose(&uf_full))
        .and_then(|m| m.compose(&v0_full))
        .expect("dimensions agree by construction")
}

/// Main-register reduction of a main ⊗ func ⊗ aux operator on the |0⟩|0⟩
/// ancilla sector, plus the largest amplitude it leaks outside that sector.
pub fn reduce_to_main<T: Float>(
    full: &UnitaryMatrix<T>,
    n: usize,
) -> (UnitaryMatrix<T>, T) {
    let layout = AncillaRegisterLayout::new(n);
    assert_eq!(full.dim(), layout.full_dim(), "expected two ancilla qubits");
    let m = full.matrix();
    let mut reduced = DMatrix::<C<T>>::zeros(layout.main_dim(), layout.main_dim());
    let mut leak = T::zero();
    for x in 0..layout.main_dim() {
        let col = layout.prepared_index(x);
        for row in 0..full.dim() {
            let amp = m[(row, col)];
            if layout.in_restored_sector(row) {
                reduced[(row / 4, x)] = amp;
            } else {
                leak = leak.max(amp.modulus());
            }
        }
    }
    (
        UnitaryMatrix::new(reduced).expect("ancilla-restoring operator reduces unitarily"),
        leak,
    )
}

/// Usual oracle operation U_o(θ): e^{−iθ} on the solution state, identity on
/// every other basis state.
pub fn usual_oracle<T: Float>(spec: &SearchOracleSpec, theta: T) -> UnitaryMatrix<T> {
    let mut phases = vec![T::zero(); spec.dim()];
    phases[spec.x0] = theta;
    UnitaryMatrix::from_phases(&phases)
}

/// Selective reversible functional operation V_{f(x₁)} on main ⊗ func:
/// |x₁⟩|y⟩ → |x₁⟩|y ⊕ f(x₁)⟩ and identity elsewhere.
pub fn selective_v_f<T: Float>(spec: &SearchOracleSpec, x1: usize) -> UnitaryMatrix<T> {
    let dim = spec.dim() * 2;
    let mut m = DMatrix::<C<T>>::zeros(dim, dim);
    for x in 0..spec.dim() {
        for y in 0..2usize {
            let col = x * 2 + y;
            let row = if x == x1 { x * 2 + (y ^ spec.f(x) as usize) } else { col };
            m[(row, col)] = C::new(T::one(), T::zero());
        }
    }
    UnitaryMatrix::new(m).expect("permutation matrix is unitary")
}

/// Selective black-box functional operation BFSEQ(y, θ) on the main
/// register: the phase e^{−iθ δ(y − x₀)} on |x₀⟩, i.e. a unit operator
/// whenever y ≠ x₀.
pub fn bfseq_selective<T: Float>(
    spec: &SearchOracleSpec,
    y: usize,
    theta: T,
) -> UnitaryMatrix<T> {
    let mut phases = vec![T::zero(); spec.dim()];
    if y == spec.x0 {
        phases[spec.x0] = theta;
    }
    UnitaryMatrix::from_phases(&phases)
}

/// Deviations collected by [`parallel_decomposition_check`].
#[derive(Clone, Copy, Debug)]
pub struct DecompositionReport<T: Float> {
    /// ‖Π_y BFSEQ(y,θ) − reduced BFSEQ‖ (max entry).
    pub selective_product_vs_bfseq: T,
    /// ‖Π_x V_{f(x)} − U_f‖ (max entry).
    pub vf_product_vs_uf: T,
    /// ‖forward product − reversed product‖ for the selective factors.
    pub ordering_sensitivity: T,
    /// Largest ancilla leakage of the full BFSEQ.
    pub ancilla_leak: T,
}

impl<T: Float> DecompositionReport<T> {
    pub fn max_deviation(&self) -> T {
        self.selective_product_vs_bfseq
            .max(self.vf_product_vs_uf)
            .max(self.ordering_sensitivity)
            .max(self.ancilla_leak)
    }
}

/// Verify that the quantum-parallel operations decompose into ordered
/// products of their selective single operations: Π_y BFSEQ(y,θ) equals the
/// main-register action of BFSEQ, and Π_x V_{f(x)} equals U_f.
pub fn parallel_decomposition_check<T: Float>(
    spec: &SearchOracleSpec,
    theta: T,
) -> Result<DecompositionReport<T>> {
    if spec.n > EXHAUSTIVE_LIMIT {
        return Err(Error::RegisterTooLarge { sites: spec.n, max: EXHAUSTIVE_LIMIT });
    }
    let (reduced, ancilla_leak) = reduce_to_main(&bfseq(spec, theta), spec.n);

    let mut forward = UnitaryMatrix::<T>::identity(spec.dim());
    let mut reversed = UnitaryMatrix::<T>::identity(spec.dim());
    for y in 0..spec.dim() {
        forward = bfseq_selective(spec, y, theta).compose(&forward)?;
        let y_rev = spec.dim() - 1 - y;
        reversed = bfseq_selective(spec, y_rev, theta).compose(&reversed)?;
    }
    let selective_product_vs_bfseq = max_abs_entry(&(forward.matrix() - reduced.matrix()));
    let ordering_sensitivity = max_abs_entry(&(forward.matrix() - reversed.matrix()));

    let mut vf_product = UnitaryMatrix::<T>::identity(spec.dim() * 2);
    for x in 0..spec.dim() {
        vf_product = selective_v_f(spec, x).compose(&vf_product)?;
    }
    let vf_product_vs_uf = max_abs_entry(&(vf_product.matrix() - u_f::<T>(spec).matrix()));

    Ok(DecompositionReport {
        selective_product_vs_bfseq,
        vf_product_vs_uf,
        ordering_sensitivity,
        ancilla_leak,
    })
}

/// Pairwise deviations of the four equivalent oracle realizations on the
/// main register: reduced BFSEQ, BFSEQ(x₀,θ), U_o(θ), and C_S(θ).
#[derive(Clone, Copy, Debug)]
pub struct EquivalenceReport<T: Float> {
    pub bfseq_vs_uo: T,
    pub bfseq_x0_vs_uo: T,
    pub cs_vs_uo: T,
    pub ancilla_leak: T,
}

impl<T: Float> EquivalenceReport<T> {
    pub fn max_deviation(&self) -> T {
        self.bfseq_vs_uo.max(self.bfseq_x0_vs_uo).max(self.cs_vs_uo).max(self.ancilla_leak)
    }
}

/// Compare all four oracle realizations entrywise.
pub fn four_way_equivalence<T: Float>(
    spec: &SearchOracleSpec,
    theta: T,
) -> EquivalenceReport<T> {
    let (reduced, ancilla_leak) = reduce_to_main(&bfseq(spec, theta), spec.n);
    let uo = usual_oracle(spec, theta);
    let sel = bfseq_selective(spec, spec.x0, theta);
    let logical = LogicalVector::from_index(Arity::Two, spec.n, spec.x0)
        .expect("x0 < 2^n by construction");
    let cs = selective_phase::<T>(&logical, theta);
    EquivalenceReport {
        bfseq_vs_uo: max_abs_entry(&(reduced.matrix() - uo.matrix())),
        bfseq_x0_vs_uo: max_abs_entry(&(sel.matrix() - uo.matrix())),
        cs_vs_uo: max_abs_entry(&(cs.matrix() - uo.matrix())),
        ancilla_leak,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{BasisTag, StateVector, apply_unitary};
    use crate::random::SeededRng;
    use nalgebra::DVector;

    type T = f64;
    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn u_f_flips_functional_qubit_only_on_solution() {
        let spec = SearchOracleSpec::new(2, 3).unwrap();
        let uf = u_f::<T>(&spec);
        // |3⟩|0⟩ → |3⟩|1⟩
        assert_eq!(uf.matrix()[(3 * 2 + 1, 3 * 2)], C::new(1.0, 0.0));
        // |2⟩|0⟩ → |2⟩|0⟩
        assert_eq!(uf.matrix()[(2 * 2, 2 * 2)], C::new(1.0, 0.0));
    }

    #[test]
    fn u_f_is_an_involution() {
        for n in 1..=5usize {
            let spec = SearchOracleSpec::new(n, (1 << n) - 1).unwrap();
            let uf = u_f::<T>(&spec);
            let sq = uf.compose(&uf).unwrap();
            let id = DMatrix::<C<T>>::identity(sq.dim(), sq.dim());
            assert!(max_abs_entry(&(sq.matrix() - id)) == 0.0);
        }
    }

    #[test]
    fn u_f_is_a_permutation() {
        let spec = SearchOracleSpec::new(3, 5).unwrap();
        let uf = u_f::<T>(&spec);
        for col in 0..uf.dim() {
            let nonzero = (0..uf.dim()).filter(|&row| uf.matrix()[(row, col)].norm() > 0.0).count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn v0_is_the_literal_bit_flip_and_matches_its_exponential_form() {
        let direct = v0::<T>();
        assert_eq!(direct.matrix()[(0, 1)], C::new(1.0, 0.0));
        assert_eq!(direct.matrix()[(1, 0)], C::new(1.0, 0.0));
        assert_eq!(direct.matrix()[(0, 0)], C::new(0.0, 0.0));
        // e^{−iπ/2} exp(iπ I_x) with I_x = σ_x/2
        let ix = crate::oracle::spin_operator::<T>(crate::oracle::Arity::Two, crate::oracle::Axis::X);
        let gen = crate::hilbert::HermitianGenerator::new(ix).unwrap();
        let rotated = crate::hilbert::expm_generator(&gen, -PI).scaled_by_phase(PI / 2.0);
        assert!(max_abs_entry(&(rotated.matrix() - direct.matrix())) <= 1e-15);
    }

    #[test]
    fn bfseq_at_zero_angle_is_identity() {
        let spec = SearchOracleSpec::new(2, 1).unwrap();
        let b = bfseq::<T>(&spec, 0.0);
        let id = DMatrix::<C<T>>::identity(b.dim(), b.dim());
        assert!(max_abs_entry(&(b.matrix() - id)) == 0.0);
    }

    #[test]
    fn bfseq_reduction_carries_minus_one_at_solution() {
        let spec = SearchOracleSpec::new(3, 5).unwrap();
        let (reduced, leak) = reduce_to_main(&bfseq::<T>(&spec, PI), 3);
        assert!(leak == 0.0);
        for x in 0..8usize {
            let expect = if x == 5 { -1.0 } else { 1.0 };
            assert!((reduced.matrix()[(x, x)] - C::new(expect, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn bfseq_restores_ancillas_for_every_basis_input() {
        let spec = SearchOracleSpec::new(3, 2).unwrap();
        let b = bfseq::<T>(&spec, 0.77);
        let (_, leak) = reduce_to_main(&b, 3);
        assert!(leak == 0.0, "ancillas must return to |0>|0> exactly");
    }

    #[test]
    fn bfseq_acts_on_superpositions_by_phasing_the_solution_term() {
        let spec = SearchOracleSpec::new(3, 6).unwrap();
        let theta = 1.03;
        let b = bfseq::<T>(&spec, theta);
        let mut rng = SeededRng::new(12);
        let main = crate::random::random_state(BasisTag::qubits(3), &mut rng);
        // embed |main⟩|0⟩|0⟩
        let mut full = DVector::<C<T>>::zeros(32);
        for x in 0..8 {
            full[x * 4] = main.amplitudes()[x];
        }
        let state = StateVector::new(BasisTag::qubits(5), full).unwrap();
        let out = apply_unitary(&b, &state).unwrap();
        let phase = C::new(0.0, -theta).exp();
        for x in 0..8usize {
            let expect =
                if x == 6 { main.amplitudes()[x] * phase } else { main.amplitudes()[x] };
            assert!((out.amplitudes()[x * 4] - expect).norm() <= 1e-12);
            for rem in 1..4 {
                assert!(out.amplitudes()[x * 4 + rem].norm() == 0.0);
            }
        }
    }

    #[test]
    fn bfseq_composes_to_identity_with_opposite_angle() {
        let spec = SearchOracleSpec::new(2, 0).unwrap();
        let theta = 0.63;
        let prod = bfseq::<T>(&spec, theta).compose(&bfseq::<T>(&spec, -theta)).unwrap();
        let id = DMatrix::<C<T>>::identity(prod.dim(), prod.dim());
        assert!(max_abs_entry(&(prod.matrix() - id)) <= 1e-15);
    }

    #[test]
    fn usual_oracle_small_case() {
        let spec = SearchOracleSpec::new(1, 0).unwrap();
        let uo = usual_oracle::<T>(&spec, PI);
        assert!((uo.matrix()[(0, 0)] - C::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((uo.matrix()[(1, 1)] - C::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn four_way_equivalence_holds_exhaustively_small() {
        for n in 1..=3usize {
            for x0 in 0..(1usize << n) {
                let spec = SearchOracleSpec::new(n, x0).unwrap();
                for theta in [PI / 7.0, PI / 2.0, PI] {
                    let report = four_way_equivalence::<T>(&spec, theta);
                    assert!(report.max_deviation() <= 1e-12, "n={n} x0={x0} theta={theta}");
                }
            }
        }
    }

    #[test]
    fn single_qubit_selective_product_reproduces_usual_oracle() {
        let spec = SearchOracleSpec::new(1, 1).unwrap();
        let theta = 0.9;
        let prod = bfseq_selective::<T>(&spec, 0, theta)
            .compose(&bfseq_selective::<T>(&spec, 1, theta))
            .unwrap();
        let uo = usual_oracle::<T>(&spec, theta);
        assert!(max_abs_entry(&(prod.matrix() - uo.matrix())) <= 1e-15);
    }

    #[test]
    fn non_solution_selective_operations_are_unit_operators() {
        let spec = SearchOracleSpec::new(3, 4).unwrap();
        for y in 0..8usize {
            if y == 4 {
                continue;
            }
            let sel = bfseq_selective::<T>(&spec, y, 1.2);
            let id = DMatrix::<C<T>>::identity(8, 8);
            assert!(max_abs_entry(&(sel.matrix() - id)) == 0.0);
        }
    }

    #[test]
    fn decomposition_check_passes_and_orderings_commute() {
        for n in 1..=4usize {
            let spec = SearchOracleSpec::new(n, n % (1 << n)).unwrap();
            let report = parallel_decomposition_check::<T>(&spec, PI / 3.0).unwrap();
            assert!(report.max_deviation() <= 1e-12, "n={n}");
        }
    }

    #[test]
    fn decomposition_check_rejects_large_registers() {
        let spec = SearchOracleSpec::new(7, 0).unwrap();
        assert!(matches!(
            parallel_decomposition_check::<T>(&spec, 0.3),
            Err(Error::RegisterTooLarge { sites: 7, max: EXHAUSTIVE_LIMIT })
        ));
    }

    #[test]
    fn selective_supports_of_distinct_candidates_are_disjoint() {
        // operators for two candidate solutions differ on exactly two
        // diagonal entries
        let theta = 0.8;
        let n = 3usize;
        let a = LogicalVector::from_index(Arity::Two, n, 2).unwrap();
        let b = LogicalVector::from_index(Arity::Two, n, 5).unwrap();
        let ca = selective_phase::<T>(&a, theta);
        let cb = selective_phase::<T>(&b, theta);
        let diff = ca.matrix() - cb.matrix();
        let mut nonzero = 0;
        for i in 0..8usize {
            for j in 0..8usize {
                if diff[(i, j)].norm() > 1e-15 {
                    assert_eq!(i, j);
                    nonzero += 1;
                }
            }
        }
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn spec_parsing_round_trips_and_rejects_garbage() {
        let spec: SearchOracleSpec = "n=4,x0=11".parse().unwrap();
        assert_eq!(spec, SearchOracleSpec::new(4, 11).unwrap());
        assert!(matches!(
            "n=4,x0=banana".parse::<SearchOracleSpec>(),
            Err(Error::InvalidLogicalToken { .. })
        ));
        assert!(matches!(
            "n=2,x0=4".parse::<SearchOracleSpec>(),
            Err(Error::SolutionOutOfRange { x0: 4, dim: 4 })
        ));
        assert!(matches!(
            "m=4".parse::<SearchOracleSpec>(),
            Err(Error::InvalidLogicalToken { .. })
        ));
    }
}
