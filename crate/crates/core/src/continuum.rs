// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-atom continuum machinery on a periodic box: momentum
//! eigenfunctions, phase-based QUANSDAM steps, energy-eigenfunction
//! expansions with truncation errors, and USEQ operator sequences.
//!
//! The box of length L is sampled on N_g uniform points of (−L/2, L/2];
//! scalar products carry the quadrature weight Δx = L/N_g. Box momenta are
//! p_k = 2πħk/L.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{
    BasisTag, HermitianGenerator, StateVector, UnitaryMatrix, expm_generator, max_abs_entry,
    op_norm_inf,
};
use crate::scalar::{C, Float, Units};

/// Uniform periodic grid on a box centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T: Float> {
    pub length: T,
    pub points: usize,
}

impl<T: Float> GridSpec<T> {
    pub fn new(length: T, points: usize) -> Result<Self> {
        if points < 16 {
            return Err(Error::GridTooCoarse { points, min: 16 });
        }
        Ok(Self { length, points })
    }

    pub fn dx(&self) -> T {
        self.length / T::from_usize(self.points).unwrap()
    }

    /// Sample positions on (−L/2, L/2].
    pub fn x(&self, j: usize) -> T {
        -self.length * T::lit(0.5) + T::from_usize(j + 1).unwrap() * self.dx()
    }

    pub fn tag(&self) -> BasisTag<T> {
        BasisTag::Grid { length: self.length, points: self.points }
    }

    /// Box momentum p_k = 2πħk/L.
    pub fn momentum(&self, k: i64, units: &Units<T>) -> T {
        T::two_pi() * units.hbar * T::lit(k as f64) / self.length
    }

    /// Momentum quantum numbers resolvable on this grid.
    pub fn momentum_quanta(&self) -> impl Iterator<Item = i64> {
        let n = self.points as i64;
        (-n / 2)..(n - n / 2)
    }
}

/// Sampled wavefunction on a grid, with an optional internal qubit factor
/// (product form ψ(x) ⊗ χ).
#[derive(Clone, Debug)]
pub struct GridWavefunction<T: Float> {
    pub grid: GridSpec<T>,
    pub amps: DVector<C<T>>,
    pub internal: Option<DVector<C<T>>>,
}

impl<T: Float> GridWavefunction<T> {
    pub fn new(grid: GridSpec<T>, amps: DVector<C<T>>) -> Result<Self> {
        if amps.len() != grid.points {
            return Err(Error::DimensionMismatch { expected: grid.points, got: amps.len() });
        }
        Ok(Self { grid, amps, internal: None })
    }

    /// Attach an internal qubit factor (length-2 amplitude vector).
    pub fn with_internal(mut self, internal: DVector<C<T>>) -> Result<Self> {
        if internal.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: internal.len() });
        }
        self.internal = Some(internal);
        Ok(self)
    }

    /// ψ(x) ⊗ |0⟩.
    pub fn with_internal_ground(self) -> Self {
        let internal = DVector::from_vec(vec![C::new(T::one(), T::zero()), C::new(T::zero(), T::zero())]);
        Self { internal: Some(internal), ..self }
    }

    /// Quadrature norm of the full product state.
    pub fn norm(&self) -> T {
        let com = (self.amps.norm_squared() * self.grid.dx()).sqrt();
        match &self.internal {
            Some(chi) => com * chi.norm(),
            None => com,
        }
    }

    pub fn normalize(&self) -> Self {
        let n = self.norm();
        Self {
            grid: self.grid,
            amps: self.amps.clone() / C::new(n, T::zero()),
            internal: self.internal.clone(),
        }
    }

    /// Overlap ⟨self|other⟩ including the internal factor.
    pub fn overlap(&self, other: &Self) -> Result<C<T>> {
        if self.grid != other.grid {
            return Err(Error::BasisMismatch);
        }
        let com = self.amps.dotc(&other.amps) * C::new(self.grid.dx(), T::zero());
        match (&self.internal, &other.internal) {
            (None, None) => Ok(com),
            (Some(a), Some(b)) => Ok(com * a.dotc(b)),
            _ => Err(Error::BasisMismatch),
        }
    }

    /// Flatten to a labeled state vector (COM factor most significant).
    pub fn to_state_vector(&self) -> StateVector<T> {
        match &self.internal {
            None => StateVector::new(self.grid.tag(), self.amps.clone()).unwrap(),
            Some(chi) => {
                let tag = self.grid.tag().product(&BasisTag::Levels { count: 2 });
                let flat = DVector::from_vec(self.amps.kronecker(chi).as_slice().to_vec());
                StateVector::new(tag, flat).unwrap()
            }
        }
    }

    /// Per-point amplitude moduli of the COM factor.
    pub fn moduli(&self) -> Vec<T> {
        self.amps.iter().map(|z| z.modulus()).collect()
    }
}

/// Box-normalized momentum eigenfunction Ψ_k(x) = e^{i p_k x/ħ}/√L, sampled.
pub fn momentum_eigenfunction<T: Float>(
    grid: GridSpec<T>,
    k: i64,
    units: &Units<T>,
) -> Result<GridWavefunction<T>> {
    let n = grid.points as i64;
    if 2 * k.abs() >= n {
        return Err(Error::NyquistViolation { k, points: grid.points });
    }
    let p_k = grid.momentum(k, units);
    let norm = T::one() / grid.length.sqrt();
    let amps = DVector::from_fn(grid.points, |j, _| {
        let phi = p_k * grid.x(j) / units.hbar;
        C::new(phi.cos() * norm, phi.sin() * norm)
    });
    GridWavefunction::new(grid, amps)
}

/// Coefficients of ψ in the box momentum basis, marginalized over an
/// internal factor of dimension `internal_dim` (1 for none). Returns
/// (quantum number, probability weight) pairs.
pub fn momentum_spectrum<T: Float>(
    grid: GridSpec<T>,
    flat: &DVector<C<T>>,
    internal_dim: usize,
    units: &Units<T>,
) -> Result<Vec<(i64, T)>> {
    if flat.len() != grid.points * internal_dim {
        return Err(Error::DimensionMismatch {
            expected: grid.points * internal_dim,
            got: flat.len(),
        });
    }
    let w = grid.dx();
    let norm = T::one() / grid.length.sqrt();
    let mut out = Vec::new();
    for q in grid.momentum_quanta() {
        let p_q = grid.momentum(q, units);
        let mut weight = T::zero();
        for s in 0..internal_dim {
            let mut c = C::new(T::zero(), T::zero());
            for j in 0..grid.points {
                let phi = p_q * grid.x(j) / units.hbar;
                let conj_wave = C::new(phi.cos() * norm, -phi.sin() * norm);
                c += conj_wave * flat[j * internal_dim + s];
            }
            c *= C::new(w, T::zero());
            weight += c.modulus_squared();
        }
        out.push((q, weight));
    }
    Ok(out)
}

/// Mean momentum ⟨p⟩ from the box momentum spectrum.
pub fn momentum_centroid<T: Float>(
    grid: GridSpec<T>,
    flat: &DVector<C<T>>,
    internal_dim: usize,
    units: &Units<T>,
) -> Result<T> {
    let spectrum = momentum_spectrum(grid, flat, internal_dim, units)?;
    let mut num = T::zero();
    let mut den = T::zero();
    for (q, weight) in spectrum {
        num += grid.momentum(q, units) * weight;
        den += weight;
    }
    Ok(num / den)
}

/// One phase-based QUANSDAM step: multiply by exp(−i a p₀′ m_z x/ħ)
/// pointwise, displacing the branch momentum by −a m_z p₀′.
pub fn phase_quansdam_step<T: Float>(
    psi: &GridWavefunction<T>,
    p0_prime: T,
    a: i8,
    m_z: T,
    units: &Units<T>,
) -> Result<GridWavefunction<T>> {
    if m_z == T::zero() {
        return Err(Error::ZeroInternalEigenvalue);
    }
    if let Some(chi) = &psi.internal {
        // the internal factor must be an S_z eigenstate matching m_z's sign
        let expect_index = if m_z > T::zero() { 0 } else { 1 };
        let other = 1 - expect_index;
        if chi[other].modulus() > T::lit(1e-12) || chi[expect_index].modulus() <= T::lit(1e-12) {
            return Err(Error::InternalNotSzEigenstate);
        }
    }
    let shift = T::lit(a as f64) * p0_prime * m_z;
    let amps = DVector::from_fn(psi.grid.points, |j, _| {
        let phi = -shift * psi.grid.x(j) / units.hbar;
        psi.amps[j] * C::new(phi.cos(), phi.sin())
    });
    Ok(GridWavefunction { grid: psi.grid, amps, internal: psi.internal.clone() })
}

/// Closed form of the box integral (1/L)∫ e^{iqx/ħ} dx over (−L/2, L/2]:
/// sinc(qL/(2ħ)). Oracle for plane-wave branch overlaps.
pub fn box_plane_wave_overlap<T: Float>(grid: GridSpec<T>, q: T, units: &Units<T>) -> T {
    let z = q * grid.length / (T::lit(2.0) * units.hbar);
    if z.abs() < T::lit(1e-30) {
        T::one()
    } else {
        z.sin() / z
    }
}

/// Orthonormal energy eigenbasis sampled on some space (grid columns or
/// abstract levels), with its eigenvalues and the quadrature weight.
#[derive(Clone, Debug)]
pub struct EnergyBasis<T: Float> {
    /// Column k holds u_k.
    pub vectors: DMatrix<C<T>>,
    pub energies: DVector<T>,
    /// Quadrature weight of the underlying space (Δx on grids, 1 on levels).
    pub weight: T,
}

impl<T: Float> EnergyBasis<T> {
    /// Eigenbasis of a Hermitian generator, columns sorted by eigenvalue.
    pub fn from_hermitian(h: &HermitianGenerator<T>, weight: T) -> Self {
        let eig = nalgebra::SymmetricEigen::new(h.matrix().clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
        let n = h.dim();
        let mut vectors = DMatrix::zeros(n, n);
        let mut energies = DVector::zeros(n);
        for (slot, &src) in order.iter().enumerate() {
            energies[slot] = eig.eigenvalues[src];
            vectors.set_column(slot, &eig.eigenvectors.column(src));
        }
        // eigenvectors come out unit in the plain 2-norm; rescale to unit
        // quadrature norm
        let scale = C::new(T::one() / weight.sqrt(), T::zero());
        Self { vectors: vectors * scale, energies, weight }
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn space_dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Largest deviation of ⟨u_j|u_k⟩ from δ_jk under the quadrature weight.
    pub fn orthonormality_defect(&self) -> T {
        let gram = self.vectors.adjoint() * &self.vectors * C::new(self.weight, T::zero());
        let id = DMatrix::<C<T>>::identity(self.len(), self.len());
        max_abs_entry(&(gram - id))
    }

    /// Truncate to the first `m` eigenfunctions.
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.min(self.len());
        Self {
            vectors: self.vectors.columns(0, m).into_owned(),
            energies: DVector::from_fn(m, |k, _| self.energies[k]),
            weight: self.weight,
        }
    }
}

/// Harmonic-oscillator eigenbasis via the normalized Hermite-function
/// recurrence, sampled on a grid.
pub fn oscillator_basis<T: Float>(
    grid: GridSpec<T>,
    m_max: usize,
    omega: T,
    units: &Units<T>,
) -> EnergyBasis<T> {
    let n = grid.points;
    let alpha = (units.mass * omega / units.hbar).sqrt(); // ξ = αx
    let norm0 = alpha.sqrt() * T::lit(std::f64::consts::PI.powf(-0.25));
    let mut vectors = DMatrix::<C<T>>::zeros(n, m_max);
    let mut prev: Vec<T> = vec![T::zero(); n];
    let mut cur: Vec<T> = (0..n)
        .map(|j| {
            let xi = alpha * grid.x(j);
            norm0 * (-xi * xi * T::lit(0.5)).exp()
        })
        .collect();
    for k in 0..m_max {
        for j in 0..n {
            vectors[(j, k)] = C::new(cur[j], T::zero());
        }
        let kf = T::from_usize(k).unwrap();
        let c1 = (T::lit(2.0) / (kf + T::one())).sqrt();
        let c2 = (kf / (kf + T::one())).sqrt();
        let next: Vec<T> = (0..n)
            .map(|j| {
                let xi = alpha * grid.x(j);
                c1 * xi * cur[j] - c2 * prev[j]
            })
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }
    let energies =
        DVector::from_fn(m_max, |k, _| units.hbar * omega * (T::from_usize(k).unwrap() + T::lit(0.5)));
    EnergyBasis { vectors, energies, weight: grid.dx() }
}

/// Expansion of a state over an energy eigenbasis: Ψ = Σ A_k u_k.
#[derive(Clone, Debug)]
pub struct EigenbasisExpansion<T: Float> {
    pub basis: EnergyBasis<T>,
    pub coeffs: DVector<C<T>>,
    /// Squared norm of the analyzed state's component outside the basis
    /// span, measured directly as a residual; zero for synthetic expansions.
    pub span_deficit_sq: T,
}

impl<T: Float> EigenbasisExpansion<T> {
    /// Project a sampled state onto the basis: A_k = ⟨u_k|Ψ⟩. The weight the
    /// basis fails to capture is recorded as an explicit residual norm.
    pub fn analyze(basis: EnergyBasis<T>, amps: &DVector<C<T>>) -> Result<Self> {
        if amps.len() != basis.space_dim() {
            return Err(Error::DimensionMismatch { expected: basis.space_dim(), got: amps.len() });
        }
        let w = C::new(basis.weight, T::zero());
        let coeffs = basis.vectors.adjoint() * amps * w;
        let residual = amps - &basis.vectors * &coeffs;
        let span_deficit_sq = residual.norm_squared() * basis.weight;
        Ok(Self { basis, coeffs, span_deficit_sq })
    }

    /// Expansion from explicit coefficients (nothing outside the span).
    pub fn from_coefficients(basis: EnergyBasis<T>, coeffs: DVector<C<T>>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: coeffs.len() });
        }
        Ok(Self { basis, coeffs, span_deficit_sq: T::zero() })
    }

    /// ‖Ψ‖² of the represented state: Σ|A_k|² plus the span deficit.
    pub fn total_norm_sq(&self) -> T {
        self.coeffs.norm_squared() + self.span_deficit_sq
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// Reconstruct the sampled state Σ A_k u_k.
    pub fn synthesize(&self) -> DVector<C<T>> {
        &self.basis.vectors * &self.coeffs
    }

    /// Time evolution: A_k → A_k exp(−i E_k t/ħ).
    pub fn propagate(&self, t: T, units: &Units<T>) -> Self {
        self.phased(T::one(), t, units)
    }

    fn phased(&self, a: T, t: T, units: &Units<T>) -> Self {
        let coeffs = DVector::from_fn(self.coeffs.len(), |k, _| {
            let phi = -a * self.basis.energies[k] * t / units.hbar;
            self.coeffs[k] * C::new(phi.cos(), phi.sin())
        });
        Self { basis: self.basis.clone(), coeffs, span_deficit_sq: self.span_deficit_sq }
    }

    /// Per-branch solution-information propagation:
    /// A_k → A_k exp(−i a E_k t_m/ħ) for each logical value.
    ///
    /// The propagator's generator must be diagonal in the expansion basis,
    /// H u_k = E_k u_k with the basis energies.
    pub fn ic_propagate(
        &self,
        spec: &IcPropagatorSpec<T>,
        logical_values: &[i8],
        units: &Units<T>,
    ) -> Result<Vec<(i8, Self)>> {
        if spec.generator.dim() != self.basis.space_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.space_dim(),
                got: spec.generator.dim(),
            });
        }
        let hb = spec.generator.matrix() * &self.basis.vectors;
        let mut scaled = self.basis.vectors.clone();
        for k in 0..self.basis.len() {
            let e = C::new(self.basis.energies[k], T::zero());
            for j in 0..self.basis.space_dim() {
                scaled[(j, k)] *= e;
            }
        }
        let defect = max_abs_entry(&(hb - scaled));
        if defect > T::lit(1e-8) {
            return Err(Error::NotDiagonalInBasis { defect: defect.as_f64() });
        }
        Ok(logical_values
            .iter()
            .map(|&a| (a, self.phased(T::lit(a as f64), spec.t_m, units)))
            .collect())
    }

    /// Double-side truncation error
    /// ε(L, M) = √(Σ_{k<L}|A_k|² + Σ_{k≥L+M}|A_k|²), with the weight beyond
    /// the stored coefficients charged through the span deficit.
    pub fn truncation_error(&self, l: usize, m: usize) -> T {
        let hi = l.saturating_add(m).min(self.coeffs.len());
        let lo = l.min(self.coeffs.len());
        let mut outside = self.span_deficit_sq;
        for k in (0..lo).chain(hi..self.coeffs.len()) {
            outside += self.coeffs[k].modulus_squared();
        }
        outside.max(T::zero()).sqrt()
    }

    /// Search for the smallest window width M ≤ `poly_bound` (then smallest
    /// start L) with ε(L, M) < eps.
    pub fn fast_convergence_check(&self, eps: T, poly_bound: usize) -> Option<(usize, usize)> {
        for m in 1..=poly_bound {
            for l in 0..self.coeffs.len() {
                if self.truncation_error(l, m) < eps {
                    return Some((l, m));
                }
            }
        }
        None
    }

    /// CSV rows (k, E_k, re A_k, im A_k).
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("k,energy,coeff_re,coeff_im\n");
        for k in 0..self.coeffs.len() {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                k,
                self.basis.energies[k].as_f64(),
                self.coeffs[k].re.as_f64(),
                self.coeffs[k].im.as_f64()
            ));
        }
        out
    }
}

/// IC unitary propagator spec: exp(−i a H t_m/ħ).
#[derive(Clone, Debug)]
pub struct IcPropagatorSpec<T: Float> {
    pub generator: HermitianGenerator<T>,
    pub t_m: T,
}

impl<T: Float> IcPropagatorSpec<T> {
    /// Realize the propagator for logical value `a`.
    pub fn realize(&self, a: i8, units: &Units<T>) -> UnitaryMatrix<T> {
        expm_generator(&self.generator, T::lit(a as f64) * self.t_m / units.hbar)
    }
}

/// One factor of a USEQ sequence: either a QM unitary V_l or a basic IC
/// factor exp(−i a scale G).
#[derive(Clone, Debug)]
pub enum UseqStep<T: Float> {
    Qm(UnitaryMatrix<T>),
    Ic { generator: HermitianGenerator<T>, scale: T },
}

impl<T: Float> UseqStep<T> {
    fn dim(&self) -> usize {
        match self {
            UseqStep::Qm(u) => u.dim(),
            UseqStep::Ic { generator, .. } => generator.dim(),
        }
    }

    fn realize(&self, a: i8) -> UnitaryMatrix<T> {
        match self {
            UseqStep::Qm(u) => u.clone(),
            UseqStep::Ic { generator, scale } => {
                expm_generator(generator, T::lit(a as f64) * *scale)
            }
        }
    }
}

/// Ordered product of USEQ factors for logical value `a`; `steps[0]` acts
/// first.
pub fn useq_assemble<T: Float>(steps: &[UseqStep<T>], a: i8) -> Result<UnitaryMatrix<T>> {
    let dim = steps.first().map(UseqStep::dim).unwrap_or(1);
    let mut acc = UnitaryMatrix::identity(dim);
    for step in steps {
        if step.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: step.dim() });
        }
        acc = step.realize(a).compose(&acc)?;
    }
    Ok(acc)
}

/// Defect ‖USEQ(a) − exp(−i a H t_m/ħ)‖ for both logical values.
#[derive(Clone, Debug)]
pub struct UseqDefectReport<T: Float> {
    pub defect_plus: T,
    pub defect_minus: T,
}

pub fn useq_defect<T: Float>(
    steps: &[UseqStep<T>],
    target: &IcPropagatorSpec<T>,
    units: &Units<T>,
) -> Result<UseqDefectReport<T>> {
    let mut defects = [T::zero(); 2];
    for (slot, a) in [1i8, -1].into_iter().enumerate() {
        let seq = useq_assemble(steps, a)?;
        let want = target.realize(a, units);
        if seq.dim() != want.dim() {
            return Err(Error::DimensionMismatch { expected: want.dim(), got: seq.dim() });
        }
        defects[slot] = op_norm_inf(&(seq.matrix() - want.matrix()));
    }
    Ok(UseqDefectReport { defect_plus: defects[0], defect_minus: defects[1] })
}

/// Kinetic energy p²/2m as a dense grid matrix, assembled in the box
/// momentum basis.
pub fn kinetic_matrix<T: Float>(grid: GridSpec<T>, units: &Units<T>) -> HermitianGenerator<T> {
    let n = grid.points;
    let mut m = DMatrix::<C<T>>::zeros(n, n);
    let w = grid.dx() / grid.length;
    for q in grid.momentum_quanta() {
        let p_q = grid.momentum(q, units);
        let e_q = p_q * p_q / (T::lit(2.0) * units.mass);
        for j in 0..n {
            for jp in 0..n {
                let phi = p_q * (grid.x(j) - grid.x(jp)) / units.hbar;
                m[(j, jp)] += C::new(phi.cos() * e_q * w, phi.sin() * e_q * w);
            }
        }
    }
    // symmetrize away rounding noise
    let sym = (&m + m.adjoint()) * C::new(T::lit(0.5), T::zero());
    HermitianGenerator::new(sym).expect("momentum-basis assembly is Hermitian")
}

/// Position operator as a diagonal grid matrix.
pub fn position_matrix<T: Float>(grid: GridSpec<T>) -> HermitianGenerator<T> {
    let diag: Vec<T> = (0..grid.points).map(|j| grid.x(j)).collect();
    HermitianGenerator::from_real_diagonal(&diag)
}

/// Grid samples as CSV rows (x, re, im).
pub fn grid_csv<T: Float>(psi: &GridWavefunction<T>) -> String {
    let mut out = String::from("x,re,im\n");
    for j in 0..psi.grid.points {
        out.push_str(&format!(
            "{:e},{:e},{:e}\n",
            psi.grid.x(j).as_f64(),
            psi.amps[j].re.as_f64(),
            psi.amps[j].im.as_f64()
        ));
    }
    out
}
