// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! QUANSDAM / UNIDYSLOCK processes as parallel candidate-branch evolutions,
//! with the quantum-state-difference (QSD) rate metrics.
//!
//! A schedule alternates purely quantum-mechanical (QM) unitaries U_k with
//! information-carrying (IC) steps V_k(a) = exp(−i a s_k G_k), one branch per
//! logical value a. The branch overlap ρ₁₂(k) after k IC steps is the
//! process's characteristic quantity: QM steps never change it, IC steps do.

use nalgebra::{ComplexField, DVector};

use crate::error::{Error, Result};
use crate::fitting::{log_linear_fit, log_log_fit};
use crate::hilbert::{
    HermitianGenerator, SpectralDecomp, StateVector, UnitaryMatrix, apply_unitary, inner_product,
};
use crate::oracle::{Arity, Axis, spin_operator};
use crate::scalar::{C, Float};

/// One IC step: branch with logical value a applies exp(−i a scale G).
#[derive(Clone, Debug)]
pub struct IcStep<T: Float> {
    generator: HermitianGenerator<T>,
    scale: T,
    spectral: SpectralDecomp<T>,
}

impl<T: Float> IcStep<T> {
    pub fn new(generator: HermitianGenerator<T>, scale: T) -> Self {
        let spectral = generator.spectral();
        Self { generator, scale, spectral }
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn generator(&self) -> &HermitianGenerator<T> {
        &self.generator
    }

    /// Unitary for logical value `a`.
    pub fn realize(&self, a: i8) -> UnitaryMatrix<T> {
        self.spectral.propagator(T::lit(a as f64) * self.scale)
    }

    /// Inverse step (exp(+i a scale G)).
    pub fn inverted(&self) -> Self {
        Self { generator: self.generator.clone(), scale: -self.scale, spectral: self.spectral.clone() }
    }
}

/// Ordered alternation U_K V_K(a) U_{K−1} … U_1 V_1(a) U_0 applied to a fixed
/// initial state.
#[derive(Clone, Debug)]
pub struct QuansdamSchedule<T: Float> {
    qm_ops: Vec<UnitaryMatrix<T>>,
    ic_steps: Vec<IcStep<T>>,
    initial: StateVector<T>,
}

impl<T: Float> QuansdamSchedule<T> {
    /// `qm_ops` must hold K+1 operators for K IC steps, all matching the
    /// initial state's dimension.
    pub fn new(
        qm_ops: Vec<UnitaryMatrix<T>>,
        ic_steps: Vec<IcStep<T>>,
        initial: StateVector<T>,
    ) -> Result<Self> {
        if qm_ops.len() != ic_steps.len() + 1 {
            return Err(Error::ScheduleLayout { qm: qm_ops.len(), ic: ic_steps.len() });
        }
        let dim = initial.dim();
        for u in &qm_ops {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: u.dim() });
            }
        }
        for s in &ic_steps {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: s.dim() });
            }
        }
        Ok(Self { qm_ops, ic_steps, initial })
    }

    /// All-identity QM operators around the given IC steps.
    pub fn without_qm_ops(ic_steps: Vec<IcStep<T>>, initial: StateVector<T>) -> Result<Self> {
        let dim = initial.dim();
        let qm_ops = vec![UnitaryMatrix::identity(dim); ic_steps.len() + 1];
        Self::new(qm_ops, ic_steps, initial)
    }

    pub fn steps(&self) -> usize {
        self.ic_steps.len()
    }

    pub fn initial(&self) -> &StateVector<T> {
        &self.initial
    }

    /// Time-reversed schedule (the UNIDYSLOCK direction), started from a new
    /// initial state: every operator is replaced by its inverse and the order
    /// is reversed.
    pub fn inverted(&self, initial: StateVector<T>) -> Result<Self> {
        let qm_ops: Vec<_> = self.qm_ops.iter().rev().map(UnitaryMatrix::adjoint).collect();
        let ic_steps: Vec<_> = self.ic_steps.iter().rev().map(IcStep::inverted).collect();
        Self::new(qm_ops, ic_steps, initial)
    }

    fn evolve_branch(&self, a: i8, initial: &StateVector<T>) -> Result<Vec<StateVector<T>>> {
        let mut history = Vec::with_capacity(self.steps() + 1);
        let mut state = apply_unitary(&self.qm_ops[0], initial)?;
        history.push(state.clone());
        for (k, ic) in self.ic_steps.iter().enumerate() {
            state = apply_unitary(&ic.realize(a), &state)?;
            state = apply_unitary(&self.qm_ops[k + 1], &state)?;
            history.push(state.clone());
        }
        Ok(history)
    }

    /// Evolve one branch per logical value from the shared initial state.
    pub fn run(&self, logical_values: &[i8]) -> Result<BranchPairTrace<T>> {
        let branches: Vec<(i8, StateVector<T>)> = logical_values
            .iter()
            .map(|&a| (a, self.initial.clone()))
            .collect();
        self.run_with_initials(&branches)
    }

    /// Evolve branches from per-branch initial states (used for the inverse
    /// process and for IC-dependent initial states).
    pub fn run_with_initials(&self, branches: &[(i8, StateVector<T>)]) -> Result<BranchPairTrace<T>> {
        if branches.is_empty() {
            return Err(Error::EmptyBranchSet);
        }
        let mut labels = Vec::with_capacity(branches.len());
        let mut histories = Vec::with_capacity(branches.len());
        for (a, initial) in branches {
            labels.push(*a);
            histories.push(self.evolve_branch(*a, initial)?);
        }
        BranchPairTrace::new(labels, histories)
    }
}

/// Evolve one state history per logical value and record the overlap series
/// ρ₁₂(k) between the first two branches.
pub fn run_branches<T: Float>(
    schedule: &QuansdamSchedule<T>,
    logical_values: &[i8],
) -> Result<BranchPairTrace<T>> {
    schedule.run(logical_values)
}

/// Per-branch state histories plus the overlap series ρ₁₂(k).
#[derive(Clone, Debug)]
pub struct BranchPairTrace<T: Float> {
    labels: Vec<i8>,
    branches: Vec<Vec<StateVector<T>>>,
    overlaps: Vec<C<T>>,
    /// Index of the branch bookkept as the one realized in the quantum
    /// system; the remaining branches live in the math space of the search
    /// problem. Pure labeling: all branches evolve by the same algebra.
    physical: usize,
}

impl<T: Float> BranchPairTrace<T> {
    pub fn new(labels: Vec<i8>, branches: Vec<Vec<StateVector<T>>>) -> Result<Self> {
        assert_eq!(labels.len(), branches.len());
        let tol = T::lit(1e-10);
        for history in &branches {
            for s in history {
                if !s.is_normalized(tol) {
                    return Err(Error::NotNormalized { norm: s.norm().as_f64() });
                }
            }
        }
        let overlaps = if branches.len() >= 2 {
            pairwise_overlaps(&branches[0], &branches[1])?
        } else {
            vec![C::new(T::one(), T::zero()); branches[0].len()]
        };
        Ok(Self { labels, branches, overlaps, physical: 0 })
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    /// Number of IC steps K (histories hold K+1 states).
    pub fn steps(&self) -> usize {
        self.branches[0].len() - 1
    }

    pub fn branch(&self, label: i8) -> Option<&[StateVector<T>]> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.branches[i].as_slice())
    }

    pub fn final_state(&self, label: i8) -> Option<&StateVector<T>> {
        self.branch(label).map(|h| h.last().unwrap())
    }

    /// ρ₁₂(k) series between the first two branches, k = 0…K.
    pub fn overlaps(&self) -> &[C<T>] {
        &self.overlaps
    }

    pub fn final_overlap(&self) -> C<T> {
        *self.overlaps.last().unwrap()
    }

    /// Overlap series between two branches picked by label.
    pub fn overlap_series(&self, label_a: i8, label_b: i8) -> Result<Vec<C<T>>> {
        let ia = self.labels.iter().position(|&l| l == label_a);
        let ib = self.labels.iter().position(|&l| l == label_b);
        match (ia, ib) {
            (Some(i), Some(j)) => pairwise_overlaps(&self.branches[i], &self.branches[j]),
            _ => Err(Error::EmptyBranchSet),
        }
    }

    pub fn physical_branch(&self) -> i8 {
        self.labels[self.physical]
    }

    pub fn tag_physical(&mut self, label: i8) {
        if let Some(i) = self.labels.iter().position(|&l| l == label) {
            self.physical = i;
        }
    }
}

fn pairwise_overlaps<T: Float>(
    a: &[StateVector<T>],
    b: &[StateVector<T>],
) -> Result<Vec<C<T>>> {
    a.iter().zip(b).map(|(x, y)| inner_product(x, y)).collect()
}

/// Shape of the QSD varying-rate series Δρ₁₂(k+1) as a function of k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateClass {
    Linear,
    Square,
    Cubic,
    Polynomial,
    Exponential,
    Indeterminate,
}

impl std::fmt::Display for RateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RateClass::Linear => "linear",
            RateClass::Square => "square",
            RateClass::Cubic => "cubic",
            RateClass::Polynomial => "polynomial",
            RateClass::Exponential => "exponential",
            RateClass::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// Options for the rate classifier.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions<T: Float> {
    /// Fit window as a fraction of the step range.
    pub window: (T, T),
    /// Accepted deviation of the fitted log-log slope from 1, 2, 3.
    pub band: T,
    /// Magnitudes below this are treated as exactly zero.
    pub floor: T,
}

impl<T: Float> Default for ClassifyOptions<T> {
    fn default() -> Self {
        Self { window: (T::lit(0.2), T::lit(0.8)), band: T::lit(0.15), floor: T::lit(1e-14) }
    }
}

/// QSD varying rates of a branch trace.
#[derive(Clone, Debug)]
pub struct QsdRateReport<T: Float> {
    /// Δρ₁₂(k+1) = |ρ₁₂(k+1)| − |ρ₁₂(k)|, k = 0…K−1.
    pub delta_rho: Vec<T>,
    /// Δρ₁₂²(k+1) = |ρ₁₂(k+1)|² − |ρ₁₂(k)|², k = 0…K−1.
    pub delta_rho_sq: Vec<T>,
    /// (|ρ₁₂(k)| − |ρ₁₂(0)|)/k, k = 1…K.
    pub avg_rate: Vec<T>,
    /// Δρ₁₂(k+1)/k with the k = 0 entry set to Δρ₁₂(1).
    pub per_step_rate: Vec<T>,
    pub classification: RateClass,
}

/// Compute all QSD rate series and classify the per-step law.
pub fn qsd_rates<T: Float>(trace: &BranchPairTrace<T>) -> Result<QsdRateReport<T>> {
    qsd_rates_with(trace, ClassifyOptions::default())
}

pub fn qsd_rates_with<T: Float>(
    trace: &BranchPairTrace<T>,
    opts: ClassifyOptions<T>,
) -> Result<QsdRateReport<T>> {
    let rho = trace.overlaps();
    if rho.len() < 2 {
        return Err(Error::TraceTooShort { len: rho.len() });
    }
    let mags: Vec<T> = rho.iter().map(|z| z.modulus()).collect();
    let kmax = mags.len() - 1;
    let delta_rho: Vec<T> = (0..kmax).map(|k| mags[k + 1] - mags[k]).collect();
    let delta_rho_sq: Vec<T> =
        (0..kmax).map(|k| mags[k + 1] * mags[k + 1] - mags[k] * mags[k]).collect();
    let avg_rate: Vec<T> =
        (1..=kmax).map(|k| (mags[k] - mags[0]) / T::from_usize(k).unwrap()).collect();
    let per_step_rate: Vec<T> = delta_rho
        .iter()
        .enumerate()
        .map(|(k, &d)| if k == 0 { d } else { d / T::from_usize(k).unwrap() })
        .collect();
    let classification = classify_rate_series(&delta_rho, opts);
    Ok(QsdRateReport { delta_rho, delta_rho_sq, avg_rate, per_step_rate, classification })
}

/// Log-log slope fit of |series(k)| vs k over the middle window; slopes near
/// 1/2/3 label the law, otherwise a power-law fit competes with an
/// exponential fit by residual.
pub fn classify_rate_series<T: Float>(series: &[T], opts: ClassifyOptions<T>) -> RateClass {
    if series.iter().all(|d| d.abs() <= opts.floor) {
        return RateClass::Indeterminate;
    }
    let n = series.len();
    let lo = (opts.window.0 * T::from_usize(n).unwrap()).as_f64().floor() as usize;
    let hi = ((opts.window.1 * T::from_usize(n).unwrap()).as_f64().ceil() as usize).min(n);
    let window = &series[lo..hi];
    let ks: Vec<T> = (lo..hi).map(|k| T::from_usize(k).unwrap()).collect();
    let Some(power) = log_log_fit(&ks, window, opts.floor) else {
        return RateClass::Indeterminate;
    };
    for (slope, class) in [
        (T::one(), RateClass::Linear),
        (T::lit(2.0), RateClass::Square),
        (T::lit(3.0), RateClass::Cubic),
    ] {
        if (power.slope - slope).abs() <= opts.band {
            return class;
        }
    }
    match log_linear_fit(&ks, window, opts.floor) {
        Some(expo) if expo.residual_sq < power.residual_sq => RateClass::Exponential,
        _ => RateClass::Polynomial,
    }
}

/// Fitted log-log slope of |Δρ₁₂(k+1)/k| vs k, the figure of merit for an
/// appropriate QM operator.
pub fn per_step_rate_slope<T: Float>(report: &QsdRateReport<T>) -> Option<T> {
    let ks: Vec<T> = (0..report.per_step_rate.len()).map(|k| T::from_usize(k).unwrap()).collect();
    log_log_fit(&ks, &report.per_step_rate, T::lit(1e-14)).map(|f| f.slope)
}

/// A QM operator is "appropriate" when the per-step rate grows at least
/// quadratically; the threshold (default 2 − 0.15) is configurable.
pub fn appropriate_qm_check<T: Float>(report: &QsdRateReport<T>, threshold: T) -> bool {
    per_step_rate_slope(report).is_some_and(|s| s >= threshold)
}

/// Analytic per-step rate of the reference process,
/// Δρ₁₂(k+1) = −2 sin((k+½)θ) sin(θ/2), valid while (k+1)|θ| ≤ π/2.
pub fn reference_delta_rho<T: Float>(theta: T, k: usize) -> T {
    let kf = T::from_usize(k).unwrap();
    -T::lit(2.0) * ((kf + T::lit(0.5)) * theta).sin() * (theta * T::lit(0.5)).sin()
}

/// Reference process: K basic IC steps exp(−i a θ I_λ) on a single spin with
/// no interleaved QM operators.
pub fn reference_process<T: Float>(
    theta_m: T,
    k_steps: usize,
    initial: &StateVector<T>,
    axis: Axis,
) -> Result<BranchPairTrace<T>> {
    let schedule = reference_schedule(theta_m, k_steps, initial.clone(), axis)?;
    schedule.run(&[1, -1])
}

/// The all-identity-QM schedule of the reference process.
pub fn reference_schedule<T: Float>(
    theta_m: T,
    k_steps: usize,
    initial: StateVector<T>,
    axis: Axis,
) -> Result<QuansdamSchedule<T>> {
    if initial.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: initial.dim() });
    }
    let gen = HermitianGenerator::new(spin_operator::<T>(Arity::Two, axis))?;
    let ic = IcStep::new(gen, theta_m);
    QuansdamSchedule::without_qm_ops(vec![ic; k_steps], initial)
}

/// Split of the two branch finals into the common and information-carrying
/// parts, Ψ_a ± Ψ_b.
#[derive(Clone, Debug)]
pub struct AmplitudeSplit<T: Float> {
    pub psi_a: StateVector<T>,
    pub psi_b: StateVector<T>,
    /// ‖Ψ_a‖² + ‖Ψ_b‖², which is 1 for normalized branches.
    pub norm_split: T,
    /// Ψ_a†Ψ_b + Ψ_b†Ψ_a, which vanishes for normalized branches.
    pub cross_term: T,
    /// 1 − 2‖Ψ_b‖² − 2Ψ_a†Ψ_b: the branch overlap expressed through the split.
    pub orthogonality_functional: C<T>,
}

/// Decompose the final branch pair as Ψ_{±1} = Ψ_a ± Ψ_b and evaluate the
/// normalization and orthogonality conditions.
pub fn amplitude_decomposition<T: Float>(
    plus: &StateVector<T>,
    minus: &StateVector<T>,
) -> Result<AmplitudeSplit<T>> {
    if plus.dim() != minus.dim() {
        return Err(Error::DimensionMismatch { expected: plus.dim(), got: minus.dim() });
    }
    if plus.tag() != minus.tag() {
        return Err(Error::BasisMismatch);
    }
    let half = C::new(T::lit(0.5), T::zero());
    let a_amps: DVector<C<T>> = (plus.amplitudes() + minus.amplitudes()) * half;
    let b_amps: DVector<C<T>> = (plus.amplitudes() - minus.amplitudes()) * half;
    let psi_a = StateVector::new(plus.tag().clone(), a_amps)?;
    let psi_b = StateVector::new(plus.tag().clone(), b_amps)?;
    let na2 = psi_a.norm() * psi_a.norm();
    let nb2 = psi_b.norm() * psi_b.norm();
    let ab = inner_product(&psi_a, &psi_b)?;
    let two = T::lit(2.0);
    let orthogonality_functional =
        C::new(T::one() - two * nb2, T::zero()) - ab * C::new(two, T::zero());
    Ok(AmplitudeSplit {
        psi_a,
        psi_b,
        norm_split: na2 + nb2,
        cross_term: two * ab.re,
        orthogonality_functional,
    })
}

/// Maximum success probability of unambiguous discrimination of the branch
/// pair, P = 1 − |ρ₁₂(K)|, clamped to [0, 1].
pub fn discrimination_probability<T: Float>(overlap: C<T>) -> T {
    (T::one() - overlap.modulus()).max(T::zero()).min(T::one())
}

/// Render the trace and its rates as CSV (columns: k, re/im/|ρ₁₂|, Δρ₁₂,
/// Δρ₁₂², average rate). Cells that are undefined at a given k stay empty.
pub fn qsd_csv<T: Float>(trace: &BranchPairTrace<T>, report: &QsdRateReport<T>) -> String {
    let mut out = String::from("k,rho12_re,rho12_im,rho12_abs,delta_rho,delta_rho_sq,avg_rate\n");
    for (k, z) in trace.overlaps().iter().enumerate() {
        let delta = report.delta_rho.get(k).map(|d| format!("{:e}", d.as_f64())).unwrap_or_default();
        let delta_sq =
            report.delta_rho_sq.get(k).map(|d| format!("{:e}", d.as_f64())).unwrap_or_default();
        let avg = if k >= 1 {
            report.avg_rate.get(k - 1).map(|d| format!("{:e}", d.as_f64())).unwrap_or_default()
        } else {
            String::new()
        };
        out.push_str(&format!(
            "{},{:e},{:e},{:e},{},{},{}\n",
            k,
            z.re.as_f64(),
            z.im.as_f64(),
            z.modulus().as_f64(),
            delta,
            delta_sq,
            avg
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::BasisTag;
    use crate::random::{SeededRng, random_state, random_unitary};

    type T = f64;
    const PI: f64 = std::f64::consts::PI;

    fn ground() -> StateVector<T> {
        StateVector::basis_state(BasisTag::qubits(1), 0)
    }

    fn x_step(theta: T) -> IcStep<T> {
        IcStep::new(
            HermitianGenerator::new(spin_operator::<T>(Arity::Two, Axis::X)).unwrap(),
            theta,
        )
    }

    #[test]
    fn identity_qm_schedule_gives_cos_k_theta_overlap() {
        let theta = PI / 48.0;
        let k = 17usize;
        let trace = reference_process(theta, k, &ground(), Axis::X).unwrap();
        for (step, z) in trace.overlaps().iter().enumerate() {
            let expect = (step as f64 * theta).cos();
            assert!((z.re - expect).abs() < 1e-12, "step {step}");
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_step_schedule_keeps_branches_identical() {
        let schedule = QuansdamSchedule::without_qm_ops(vec![], ground()).unwrap();
        let trace = schedule.run(&[1, -1]).unwrap();
        assert_eq!(trace.steps(), 0);
        assert!((trace.final_overlap() - C::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_angle_ic_steps_leave_overlap_at_one() {
        let mut rng = SeededRng::new(17);
        let qm: Vec<_> = (0..5).map(|_| random_unitary::<T>(2, &mut rng)).collect();
        let ic = vec![x_step(0.0); 4];
        let schedule = QuansdamSchedule::new(qm, ic, ground()).unwrap();
        let trace = schedule.run(&[1, -1]).unwrap();
        for z in trace.overlaps() {
            assert!((z - C::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn qm_steps_do_not_affect_the_current_overlap() {
        // applying U_k identically on both branches leaves rho12(k) as it
        // was right after the k-th IC step (it may well change rho12(k+1))
        let theta = 0.11;
        let steps = 6usize;
        let mut rng = SeededRng::new(31);
        let ic = x_step(theta);
        let mut plus = ground();
        let mut minus = ground();
        for _ in 0..steps {
            plus = apply_unitary(&ic.realize(1), &plus).unwrap();
            minus = apply_unitary(&ic.realize(-1), &minus).unwrap();
            let before = inner_product(&plus, &minus).unwrap();
            let u = random_unitary::<T>(2, &mut rng);
            plus = apply_unitary(&u, &plus).unwrap();
            minus = apply_unitary(&u, &minus).unwrap();
            let after = inner_product(&plus, &minus).unwrap();
            assert!((after - before).norm() <= 1e-12);
        }
    }

    #[test]
    fn co_evolving_overlaps_within_one_branch_are_invariant() {
        let mut rng = SeededRng::new(47);
        let qm: Vec<_> = (0..6).map(|_| random_unitary::<T>(4, &mut rng)).collect();
        let gen = crate::random::random_hermitian(4, &mut rng);
        let ic = vec![IcStep::new(gen, 0.2); 5];
        let schedule = QuansdamSchedule::new(qm, ic, random_state(BasisTag::qubits(2), &mut rng))
            .unwrap();

        let psi = random_state(BasisTag::qubits(2), &mut rng);
        let phi = random_state(BasisTag::qubits(2), &mut rng);
        let before = inner_product(&psi, &phi).unwrap();
        let run = schedule.run_with_initials(&[(1, psi), (1, phi)]).unwrap();
        for z in run.overlaps() {
            assert!((z - before).norm() <= 1e-10);
        }
    }

    #[test]
    fn reference_process_reaches_orthogonality_at_half_pi_over_theta() {
        let theta = PI / 64.0;
        let k = 32usize; // K = pi / (2 theta)
        let trace = reference_process(theta, k, &ground(), Axis::X).unwrap();
        assert!(trace.final_overlap().norm() <= 1e-10);
    }

    #[test]
    fn reference_process_with_one_step_reduces_to_simple_process() {
        let theta = 0.73;
        let trace = reference_process(theta, 1, &ground(), Axis::X).unwrap();
        assert!((trace.final_overlap().re - theta.cos()).abs() < 1e-12);
        let plus = trace.final_state(1).unwrap();
        assert!((plus.amplitudes()[0].re - (theta / 2.0).cos()).abs() < 1e-12);
        assert!((plus.amplitudes()[1].im + (theta / 2.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn unidyslock_restores_overlap_from_zero_to_one() {
        let theta = PI / 40.0;
        let k = 20usize;
        let schedule = reference_schedule(theta, k, ground(), Axis::X).unwrap();
        let forward = schedule.run(&[1, -1]).unwrap();
        assert!(forward.final_overlap().norm() <= 1e-10);

        let inverse = schedule.inverted(ground()).unwrap();
        let back = inverse
            .run_with_initials(&[
                (1, forward.final_state(1).unwrap().clone()),
                (-1, forward.final_state(-1).unwrap().clone()),
            ])
            .unwrap();
        assert!((back.final_overlap().norm() - 1.0).abs() <= 1e-10);
        // and the branches really returned to the shared initial state
        let restored = back.final_state(1).unwrap();
        assert!((restored.amplitudes()[0].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qutrit_ic_step_produces_three_branches() {
        let theta = 0.3;
        let gen = HermitianGenerator::new(spin_operator::<T>(Arity::Three, Axis::X)).unwrap();
        let schedule = QuansdamSchedule::without_qm_ops(
            vec![IcStep::new(gen, theta); 2],
            StateVector::basis_state(BasisTag::qutrits(1), 0),
        )
        .unwrap();
        let trace = schedule.run(&[1, 0, -1]).unwrap();
        assert_eq!(trace.labels().len(), 3);
        // the a = 0 branch never moves
        let still = trace.final_state(0).unwrap();
        assert!((still.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        // +1 and −1 branches drift apart
        let pm = trace.overlap_series(1, -1).unwrap();
        assert!(pm.last().unwrap().norm() < 1.0 - 1e-6);
    }

    #[test]
    fn delta_rho_matches_analytic_reference_formula() {
        let theta = PI / 64.0;
        let k = 32usize;
        let trace = reference_process(theta, k, &ground(), Axis::X).unwrap();
        let report = qsd_rates(&trace).unwrap();
        let mut last = 0.0f64;
        for (step, &d) in report.delta_rho.iter().enumerate() {
            assert!((d - reference_delta_rho(theta, step)).abs() <= 1e-12, "step {step}");
            // |delta rho| grows monotonically while (k+1)|theta| <= pi/2
            assert!(d.abs() > last, "step {step} broke monotone growth");
            last = d.abs();
        }
    }

    #[test]
    fn small_angle_rate_approximations_hold() {
        // Delta rho(k+1) ≈ −(pi/4)|θ|(2k+1)/K with K = pi/(2|θ|)
        let theta = 1e-3;
        let k_total = (0.5 * PI / theta).round() as usize;
        let trace = reference_process(theta, 40, &ground(), Axis::X).unwrap();
        let report = qsd_rates(&trace).unwrap();
        for (step, &d) in report.delta_rho.iter().enumerate() {
            let approx = -0.25 * PI * theta * (2.0 * step as f64 + 1.0) / k_total as f64;
            assert!((d - approx).abs() <= 1e-3 * d.abs().max(1e-12), "step {step}");
        }
        // and the average rate (cos(kθ) − 1)/k ≈ −(pi/4)|θ| k/K
        for (i, &avg) in report.avg_rate.iter().enumerate() {
            let k = i + 1;
            let approx = -0.25 * PI * theta * k as f64 / k_total as f64;
            assert!((avg - approx).abs() <= 1e-3 * avg.abs(), "k {k}");
        }
    }

    #[test]
    fn whole_process_average_rate_is_minus_one_over_k() {
        let theta = PI / 64.0;
        let k = 32usize;
        let trace = reference_process(theta, k, &ground(), Axis::X).unwrap();
        let report = qsd_rates(&trace).unwrap();
        let avg = report.avg_rate.last().unwrap();
        assert!((avg + 1.0 / k as f64).abs() <= 1e-12);
    }

    #[test]
    fn constant_overlap_trace_classifies_indeterminate() {
        let schedule =
            QuansdamSchedule::without_qm_ops(vec![x_step(0.0); 8], ground()).unwrap();
        let trace = schedule.run(&[1, -1]).unwrap();
        let report = qsd_rates(&trace).unwrap();
        assert!(report.delta_rho.iter().all(|d| d.abs() < 1e-14));
        assert!(report.avg_rate.iter().all(|d| d.abs() < 1e-14));
        assert_eq!(report.classification, RateClass::Indeterminate);
    }

    #[test]
    fn rates_require_at_least_two_overlap_points() {
        let schedule = QuansdamSchedule::without_qm_ops(vec![], ground()).unwrap();
        let trace = schedule.run(&[1, -1]).unwrap();
        assert!(matches!(qsd_rates(&trace), Err(Error::TraceTooShort { len: 1 })));
    }

    #[test]
    fn reference_process_classifies_linear_in_small_angle_regime() {
        let theta = 1e-3;
        let trace = reference_process(theta, 100, &ground(), Axis::X).unwrap();
        let report = qsd_rates(&trace).unwrap();
        assert_eq!(report.classification, RateClass::Linear);
    }

    #[test]
    fn extended_reference_delta_rho_sq_is_linear_in_k() {
        // arbitrary initial state instead of the ground state, small-angle
        // regime: |delta rho squared| grows linearly with the step count
        let theta = 1e-3;
        let k = 60usize;
        let mut rng = SeededRng::new(91);
        let initial = random_state(BasisTag::qubits(1), &mut rng);
        let trace = reference_process(theta, k, &initial, Axis::X).unwrap();
        let report = qsd_rates(&trace).unwrap();
        let ks: Vec<f64> = (0..report.delta_rho_sq.len()).map(|i| i as f64).collect();
        let fit = crate::fitting::log_log_fit(&ks, &report.delta_rho_sq, 1e-14).unwrap();
        assert!((fit.slope - 1.0).abs() <= 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn amplitude_split_of_identical_branches_has_zero_ic_part() {
        let psi = ground();
        let split = amplitude_decomposition(&psi, &psi).unwrap();
        assert!(split.psi_b.norm() < 1e-15);
        assert!((split.orthogonality_functional.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_split_verifies_conditions_on_reference_finals() {
        let theta = PI / 64.0;
        let trace = reference_process(theta, 32, &ground(), Axis::X).unwrap();
        let split = amplitude_decomposition(
            trace.final_state(1).unwrap(),
            trace.final_state(-1).unwrap(),
        )
        .unwrap();
        assert!((split.norm_split - 1.0).abs() <= 1e-10);
        assert!(split.cross_term.abs() <= 1e-10);
        assert!(split.orthogonality_functional.norm() <= 1e-10);
    }

    #[test]
    fn orthogonality_functional_equals_direct_inner_product() {
        let mut rng = SeededRng::new(53);
        for _ in 0..10 {
            let a = random_state::<T>(BasisTag::qubits(2), &mut rng);
            let b = random_state::<T>(BasisTag::qubits(2), &mut rng);
            let split = amplitude_decomposition(&a, &b).unwrap();
            let direct = inner_product(&a, &b).unwrap();
            assert!((split.orthogonality_functional - direct).norm() <= 1e-12);
        }
    }

    #[test]
    fn discrimination_probability_endpoints() {
        assert_eq!(discrimination_probability(C::<T>::new(0.0, 0.0)), 1.0);
        assert_eq!(discrimination_probability(C::<T>::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn discrimination_probability_quarter_turn() {
        let theta = PI / 64.0;
        let k = 16usize; // K|θ| = pi/4
        let trace = reference_process(theta, k, &ground(), Axis::X).unwrap();
        let p = discrimination_probability(trace.final_overlap());
        assert!((p - (1.0 - (PI / 4.0).cos())).abs() < 1e-12);
    }

    #[test]
    fn csv_export_has_expected_header_and_rows() {
        let trace = reference_process(0.1, 4, &ground(), Axis::X).unwrap();
        let report = qsd_rates(&trace).unwrap();
        let csv = qsd_csv(&trace, &report);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "k,rho12_re,rho12_im,rho12_abs,delta_rho,delta_rho_sq,avg_rate"
        );
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn schedule_layout_is_validated() {
        let r = QuansdamSchedule::new(vec![UnitaryMatrix::identity(2)], vec![x_step(0.1)], ground());
        assert!(matches!(r, Err(Error::ScheduleLayout { qm: 1, ic: 1 })));
    }

    #[test]
    fn classifier_recognizes_power_laws_and_exponentials() {
        let opts = ClassifyOptions::default();
        let ks = 1..60usize;
        let series = |f: &dyn Fn(f64) -> f64| -> Vec<f64> {
            std::iter::once(0.0).chain(ks.clone().map(|k| -f(k as f64))).collect()
        };
        assert_eq!(classify_rate_series(&series(&|k| 1e-4 * k), opts), RateClass::Linear);
        assert_eq!(classify_rate_series(&series(&|k| 1e-5 * k * k), opts), RateClass::Square);
        assert_eq!(classify_rate_series(&series(&|k| 1e-6 * k.powi(3)), opts), RateClass::Cubic);
        assert_eq!(
            classify_rate_series(&series(&|k| 1e-7 * k.powf(4.6)), opts),
            RateClass::Polynomial
        );
        assert_eq!(
            classify_rate_series(&series(&|k| 1e-9 * (0.5 * k).exp()), opts),
            RateClass::Exponential
        );
    }

    /// Trace with prescribed overlap magnitudes, built from explicit qubit
    /// pairs at the matching angle.
    fn trace_with_overlaps(mags: &[f64]) -> BranchPairTrace<T> {
        let tag = BasisTag::qubits(1);
        let plus: Vec<StateVector<T>> =
            mags.iter().map(|_| StateVector::basis_state(tag.clone(), 0)).collect();
        let minus: Vec<StateVector<T>> = mags
            .iter()
            .map(|&m| {
                let angle = m.clamp(-1.0, 1.0).acos();
                StateVector::new(
                    tag.clone(),
                    DVector::from_vec(vec![
                        C::new(angle.cos(), 0.0),
                        C::new(angle.sin(), 0.0),
                    ]),
                )
                .unwrap()
            })
            .collect();
        BranchPairTrace::new(vec![1, -1], vec![plus, minus]).unwrap()
    }

    #[test]
    fn appropriate_qm_check_separates_super_square_from_linear() {
        // per-step rate |delta rho / k| growing like k^2 (cubic delta rho)
        let c = 1e-7;
        let mut mags = vec![1.0];
        for k in 0..50usize {
            mags.push(mags[k] - c * (k as f64).powi(3) - 1e-9);
        }
        let fast = qsd_rates(&trace_with_overlaps(&mags)).unwrap();
        assert!(appropriate_qm_check(&fast, 1.85));

        let slow = reference_process(1e-3, 50, &ground(), Axis::X).unwrap();
        let slow_report = qsd_rates(&slow).unwrap();
        assert!(!appropriate_qm_check(&slow_report, 1.85));
    }
}
