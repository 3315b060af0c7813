// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Group-commutator (BCH-type) synthesis of the information-carrying
//! momentum-displacement propagator, with Trotter repetition.
//!
//! The operator identity
//!
//!   exp(−iAτ) exp(−iBτ) exp(+iAτ) exp(+iBτ) = exp(−τ²[A,B]) + O(τ³)
//!
//! turns a basic IC rotation A = a θ_m I_y/τ of the atomic internal motion
//! and the atom Hamiltonian B = H_A/ħ (with coupling H_I = −K x I_x) into
//! the IC propagator exp(−i a θ_m τ (K/ħ) x I_z): on the internal ground
//! state this displaces the COM momentum by −a p₀ with p₀ = ½Kτθ_m.
//! Repeating the commutator n² times at τ/n drives the defect down as 1/n.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::continuum::{GridSpec, GridWavefunction, kinetic_matrix, position_matrix};
use crate::error::{Error, Result};
use crate::hilbert::{
    HermitianGenerator, TensorProduct, UnitaryMatrix, expm_generator, spectral_norm,
};
use crate::oracle::{Arity, Axis, spin_operator};
use crate::quansdam::BranchPairTrace;
use crate::scalar::{C, Float, Units};

/// Extra oscillator levels (as a fraction) kept while building operators, so
/// truncation-edge rows stay outside the reported window.
pub const OSCILLATOR_PADDING: f64 = 0.25;

/// COM representation of the single-atom scenario.
#[derive(Clone, Copy, Debug)]
pub enum ScenarioSpace<T: Float> {
    /// Truncated oscillator eigenbasis with this many reported levels.
    Oscillator { levels: usize },
    /// Periodic position grid.
    Grid(GridSpec<T>),
}

/// Kind of single-atom system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioCase {
    FreeAtom,
    HarmonicTrap,
}

/// Appendix scenario: a single atom (free or harmonically trapped) whose
/// internal motion couples to the COM through H_I = −K x I_x.
#[derive(Clone, Debug)]
pub struct CommutatorScenario<T: Float> {
    pub case: ScenarioCase,
    /// Coupling strength K.
    pub coupling: T,
    /// Trap frequency ω (harmonic case only).
    pub omega: T,
    pub theta_m: T,
    pub tau: T,
    pub space: ScenarioSpace<T>,
    pub units: Units<T>,
}

impl<T: Float> CommutatorScenario<T> {
    pub fn free_atom(coupling: T, theta_m: T, tau: T, grid: GridSpec<T>, units: Units<T>) -> Self {
        Self {
            case: ScenarioCase::FreeAtom,
            coupling,
            omega: T::zero(),
            theta_m,
            tau,
            space: ScenarioSpace::Grid(grid),
            units,
        }
    }

    pub fn harmonic_trap(
        coupling: T,
        omega: T,
        theta_m: T,
        tau: T,
        levels: usize,
        units: Units<T>,
    ) -> Self {
        Self {
            case: ScenarioCase::HarmonicTrap,
            coupling,
            omega,
            theta_m,
            tau,
            space: ScenarioSpace::Oscillator { levels },
            units,
        }
    }

    /// COM dimension including padding.
    pub fn com_dim(&self) -> usize {
        match self.space {
            ScenarioSpace::Oscillator { levels } => {
                levels + (OSCILLATOR_PADDING * levels as f64).ceil() as usize
            }
            ScenarioSpace::Grid(g) => g.points,
        }
    }

    /// COM dimension of the reported (unpadded) window.
    pub fn window_dim(&self) -> usize {
        match self.space {
            ScenarioSpace::Oscillator { levels } => levels,
            ScenarioSpace::Grid(g) => g.points,
        }
    }

    /// Full dimension: COM ⊗ internal qubit.
    pub fn dim(&self) -> usize {
        self.com_dim() * 2
    }

    fn ladder(&self) -> DMatrix<C<T>> {
        let n = self.com_dim();
        let mut a = DMatrix::<C<T>>::zeros(n, n);
        for k in 1..n {
            a[(k - 1, k)] = C::new(T::from_usize(k).unwrap().sqrt(), T::zero());
        }
        a
    }

    /// Position operator x on the COM space.
    pub fn x_operator(&self) -> HermitianGenerator<T> {
        match self.space {
            ScenarioSpace::Grid(g) => position_matrix(g),
            ScenarioSpace::Oscillator { .. } => {
                let a = self.ladder();
                let scale = (self.units.hbar / (T::lit(2.0) * self.units.mass * self.omega)).sqrt();
                let m = (&a + a.adjoint()) * C::new(scale, T::zero());
                HermitianGenerator::new(m).expect("x is Hermitian")
            }
        }
    }

    /// Kinetic energy p²/2m on the COM space.
    pub fn kinetic_operator(&self) -> HermitianGenerator<T> {
        match self.space {
            ScenarioSpace::Grid(g) => kinetic_matrix(g, &self.units),
            ScenarioSpace::Oscillator { .. } => {
                let a = self.ladder();
                let diff = a.adjoint() - &a;
                let m = &diff * &diff * C::new(-self.units.hbar * self.omega * T::lit(0.25), T::zero());
                HermitianGenerator::new(m).expect("p^2/2m is Hermitian")
            }
        }
    }

    /// A = a θ_m I_y / τ on COM ⊗ internal.
    pub fn a_generator(&self, a: i8) -> HermitianGenerator<T> {
        let iy = HermitianGenerator::new(spin_operator::<T>(Arity::Two, Axis::Y))
            .expect("spin operator is Hermitian");
        let id_com = HermitianGenerator::from_real_diagonal(&vec![T::one(); self.com_dim()]);
        let embedded = id_com.tensor(&iy);
        let scale = T::lit(a as f64) * self.theta_m / self.tau;
        HermitianGenerator::new(embedded.matrix() * C::new(scale, T::zero()))
            .expect("scaled Hermitian stays Hermitian")
    }

    /// B = H_A/ħ with H_A = p²/2m (+ ½mω²x²) − K x I_x.
    pub fn b_generator(&self) -> HermitianGenerator<T> {
        let id2 = HermitianGenerator::from_real_diagonal(&[T::one(), T::one()]);
        let ix = HermitianGenerator::new(spin_operator::<T>(Arity::Two, Axis::X))
            .expect("spin operator is Hermitian");
        let mut com = self.kinetic_operator().into_matrix();
        if self.case == ScenarioCase::HarmonicTrap {
            let x = self.x_operator();
            let half_m_w2 = T::lit(0.5) * self.units.mass * self.omega * self.omega;
            com += x.matrix() * x.matrix() * C::new(half_m_w2, T::zero());
        }
        let com_part = HermitianGenerator::with_tolerance(com, T::lit(1e-9))
            .expect("COM Hamiltonian is Hermitian")
            .tensor(&id2);
        let interaction = self.x_operator().tensor(&ix);
        let h = com_part.matrix() - interaction.matrix() * C::new(self.coupling, T::zero());
        HermitianGenerator::with_tolerance(h / C::new(self.units.hbar, T::zero()), T::lit(1e-9))
            .expect("H_A is Hermitian")
    }

    /// Analytic commutator [A, B] = (i a θ_m/τ)(K/ħ) x I_z (anti-Hermitian).
    pub fn analytic_commutator(&self, a: i8) -> DMatrix<C<T>> {
        let iz = HermitianGenerator::new(spin_operator::<T>(Arity::Two, Axis::Z))
            .expect("spin operator is Hermitian");
        let xiz = self.x_operator().tensor(&iz);
        let scale = T::lit(a as f64) * self.theta_m / self.tau * self.coupling / self.units.hbar;
        xiz.matrix() * C::new(T::zero(), scale)
    }

    /// Exact target exp(−τ²[A,B]) = exp(−i a θ_m τ (K/ħ) x I_z).
    pub fn target(&self, a: i8) -> UnitaryMatrix<T> {
        let iz = HermitianGenerator::new(spin_operator::<T>(Arity::Two, Axis::Z))
            .expect("spin operator is Hermitian");
        let gen = self.x_operator().tensor(&iz);
        let angle = T::lit(a as f64) * self.theta_m * self.tau * self.coupling / self.units.hbar;
        expm_generator(&gen, angle)
    }

    /// Momentum kick p₀ = ½ K τ θ_m imparted on the internal |0⟩ sector
    /// (m_z = ½).
    pub fn p0(&self) -> T {
        T::lit(0.5) * self.coupling * self.tau * self.theta_m
    }

    /// Projector onto the reported window ⊗ internal (identity on grids).
    fn window_projector(&self) -> Option<DMatrix<C<T>>> {
        match self.space {
            ScenarioSpace::Grid(_) => None,
            ScenarioSpace::Oscillator { levels } => {
                let dim = self.dim();
                let mut p = DMatrix::<C<T>>::zeros(dim, dim);
                for k in 0..levels * 2 {
                    p[(k, k)] = C::new(T::one(), T::zero());
                }
                Some(p)
            }
        }
    }

    /// Defect of `approx` against `target`, restricted to the reported
    /// window (spectral norm).
    pub fn windowed_defect(&self, approx: &UnitaryMatrix<T>, target: &UnitaryMatrix<T>) -> T {
        let diff = approx.matrix() - target.matrix();
        match self.window_projector() {
            None => spectral_norm(&diff),
            Some(p) => spectral_norm(&(&p * diff * &p)),
        }
    }
}

/// Outcome of one group-commutator evaluation.
#[derive(Clone, Debug)]
pub struct BchReport<T: Float> {
    pub lhs: UnitaryMatrix<T>,
    pub target: UnitaryMatrix<T>,
    /// Spectral-norm distance ‖lhs − target‖₂.
    pub defect: T,
}

fn commutator<T: Float>(a: &HermitianGenerator<T>, b: &HermitianGenerator<T>) -> DMatrix<C<T>> {
    a.matrix() * b.matrix() - b.matrix() * a.matrix()
}

/// exp(−τ²[A,B]): the commutator of Hermitian operators is anti-Hermitian,
/// so the exponential is unitary. Asserted numerically via the Hermiticity
/// check on i·(−τ²[A,B]).
pub fn commutator_group_element<T: Float>(
    a: &HermitianGenerator<T>,
    b: &HermitianGenerator<T>,
    tau: T,
) -> Result<UnitaryMatrix<T>> {
    let m = commutator(a, b) * C::new(-tau * tau, T::zero());
    let hermitian = HermitianGenerator::with_tolerance(
        m * C::new(T::zero(), T::one()),
        T::lit(1e-9),
    )?;
    Ok(expm_generator(&hermitian, T::one()))
}

/// One group commutator exp(−iAτ)exp(−iBτ)exp(+iAτ)exp(+iBτ) against its
/// target exp(−τ²[A,B]).
pub fn bch_group_commutator<T: Float>(
    a: &HermitianGenerator<T>,
    b: &HermitianGenerator<T>,
    tau: T,
) -> Result<BchReport<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let lhs = group_commutator_product(a, b, tau)?;
    let target = commutator_group_element(a, b, tau)?;
    let defect = spectral_norm(&(lhs.matrix() - target.matrix()));
    Ok(BchReport { lhs, target, defect })
}

fn group_commutator_product<T: Float>(
    a: &HermitianGenerator<T>,
    b: &HermitianGenerator<T>,
    tau: T,
) -> Result<UnitaryMatrix<T>> {
    let ua = expm_generator(a, tau);
    let ub = expm_generator(b, tau);
    ua.compose(&ub)?.compose(&ua.adjoint())?.compose(&ub.adjoint())
}

fn matrix_power<T: Float>(u: &UnitaryMatrix<T>, mut exp: usize) -> UnitaryMatrix<T> {
    let mut base = u.clone();
    let mut acc = UnitaryMatrix::identity(u.dim());
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.compose(&base).expect("same dimension");
        }
        exp >>= 1;
        if exp > 0 {
            base = base.compose(&base).expect("same dimension");
        }
    }
    acc
}

/// Trotter repetition: the group commutator at τ/n raised to the n²-th
/// power, with defect O(τ³/n) against the same target exp(−τ²[A,B]).
pub fn trotter_repeat<T: Float>(
    a: &HermitianGenerator<T>,
    b: &HermitianGenerator<T>,
    tau: T,
    n: usize,
) -> Result<BchReport<T>> {
    if n == 0 {
        return Err(Error::StepCountTooSmall);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let slice = group_commutator_product(a, b, tau / T::from_usize(n).unwrap())?;
    let lhs = matrix_power(&slice, n * n);
    let target = commutator_group_element(a, b, tau)?;
    let defect = spectral_norm(&(lhs.matrix() - target.matrix()));
    Ok(BchReport { lhs, target, defect })
}

/// One synthesized branch of the IC momentum-displacement propagator.
#[derive(Clone, Debug)]
pub struct SynthesisBranch<T: Float> {
    pub logical_value: i8,
    pub approx: UnitaryMatrix<T>,
    pub target: UnitaryMatrix<T>,
    /// Windowed spectral-norm defect ‖approx − target‖.
    pub defect: T,
}

/// Synthesize exp(−i a θ_m τ (K/ħ) x I_z) for both logical values by Trotter
/// repetition of the scenario's group commutator.
pub fn synthesize_ic_momentum_propagator<T: Float>(
    sc: &CommutatorScenario<T>,
    n: usize,
) -> Result<Vec<SynthesisBranch<T>>> {
    if n == 0 {
        return Err(Error::StepCountTooSmall);
    }
    let b = sc.b_generator();
    let mut out = Vec::with_capacity(2);
    for a in [1i8, -1] {
        let a_gen = sc.a_generator(a);
        let slice = group_commutator_product(&a_gen, &b, sc.tau / T::from_usize(n).unwrap())?;
        let approx = matrix_power(&slice, n * n);
        let target = sc.target(a);
        let defect = sc.windowed_defect(&approx, &target);
        out.push(SynthesisBranch { logical_value: a, approx, target, defect });
    }
    Ok(out)
}

fn appendix_initial_state<T: Float>(
    sc: &CommutatorScenario<T>,
    initial: &GridWavefunction<T>,
) -> Result<crate::hilbert::StateVector<T>> {
    let ScenarioSpace::Grid(grid) = sc.space else {
        return Err(Error::BasisMismatch);
    };
    if initial.grid != grid {
        return Err(Error::BasisMismatch);
    }
    match &initial.internal {
        Some(chi)
            if chi[1].modulus() <= T::lit(1e-12)
                && (chi[0].modulus() - T::one()).abs() <= T::lit(1e-10) => {}
        _ => return Err(Error::InternalStateNotGround),
    }
    Ok(initial.to_state_vector())
}

/// Run the synthesized propagator once on both branches of |Ψ⟩|0⟩.
pub fn appendix_quansdam_run<T: Float>(
    sc: &CommutatorScenario<T>,
    n: usize,
    initial: &GridWavefunction<T>,
) -> Result<BranchPairTrace<T>> {
    let flat = appendix_initial_state(sc, initial)?;
    let branches = synthesize_ic_momentum_propagator(sc, n)?;
    trace_from_branch_unitaries(&flat, &branches.iter().map(|b| (b.logical_value, b.approx.clone())).collect::<Vec<_>>())
}

/// Run the exact target propagator once on both branches of |Ψ⟩|0⟩.
pub fn appendix_quansdam_run_exact<T: Float>(
    sc: &CommutatorScenario<T>,
    initial: &GridWavefunction<T>,
) -> Result<BranchPairTrace<T>> {
    let flat = appendix_initial_state(sc, initial)?;
    let branch_ops: Vec<(i8, UnitaryMatrix<T>)> =
        [1i8, -1].into_iter().map(|a| (a, sc.target(a))).collect();
    trace_from_branch_unitaries(&flat, &branch_ops)
}

fn trace_from_branch_unitaries<T: Float>(
    initial: &crate::hilbert::StateVector<T>,
    branch_ops: &[(i8, UnitaryMatrix<T>)],
) -> Result<BranchPairTrace<T>> {
    let mut labels = Vec::new();
    let mut histories = Vec::new();
    for (a, u) in branch_ops {
        labels.push(*a);
        let out = crate::hilbert::apply_unitary(u, initial)?;
        histories.push(vec![initial.clone(), out]);
    }
    BranchPairTrace::new(labels, histories)
}

/// Gaussian packet sampled on the scenario grid and tensored with the
/// internal ground state.
pub fn gaussian_initial<T: Float>(
    grid: GridSpec<T>,
    packet: &crate::gaussian::GaussianPacketParams<T>,
    units: &Units<T>,
) -> GridWavefunction<T> {
    let amps = DVector::from_fn(grid.points, |j, _| packet.sample(grid.x(j), units));
    GridWavefunction::new(grid, amps)
        .expect("dimension fixed by grid")
        .normalize()
        .with_internal_ground()
}
