// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! The experiment runners behind each subcommand.
//!
//! Every runner consumes a typed key-value config (all keys optional with
//! documented defaults, unknown keys rejected), drives the core library, and
//! emits a deterministic table: same config and seed, same bytes.

use nalgebra::DVector;

use qsdlab_core::bch::{
    CommutatorScenario, ScenarioSpace, bch_group_commutator, trotter_repeat,
};
use qsdlab_core::continuum::{
    EigenbasisExpansion, GridSpec, IcPropagatorSpec, UseqStep, box_plane_wave_overlap,
    momentum_eigenfunction, oscillator_basis, phase_quansdam_step, useq_defect,
};
use qsdlab_core::fitting::log_log_fit;
use qsdlab_core::gaussian::{GaussianPacketParams, gaussian_overlap};
use qsdlab_core::hilbert::{BasisTag, HermitianGenerator, StateVector, UnitaryMatrix};
use qsdlab_core::oracle::{Arity, Axis, spin_operator};
use qsdlab_core::quansdam::{
    IcStep, QuansdamSchedule, qsd_rates, reference_delta_rho, reference_process,
};
use qsdlab_core::random::{SeededRng, random_unitary};
use qsdlab_core::{C64, Units};

use crate::config::{Config, ConfigError};
use crate::output::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration; exit code 2.
    Config(String),
    /// A built-in numerical tolerance was violated; exit code 3.
    Tolerance(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Tolerance(m) => write!(f, "numerical-tolerance failure: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<qsdlab_core::Error> for CliError {
    fn from(e: qsdlab_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

const PI: f64 = std::f64::consts::PI;

fn parse_axis(s: &str) -> Result<Axis> {
    s.parse::<Axis>().map_err(|_| CliError::Config(format!("key 'axis': unknown axis {s:?}")))
}

fn ground_qubit() -> StateVector<f64> {
    StateVector::basis_state(BasisTag::qubits(1), 0)
}

/// Rotation angle: explicit `theta_m`, or the exponentially small
/// `c / 2^n` when a register size `n` is given (scale constant c, default 1).
fn resolve_theta(cfg: &mut Config, default: f64) -> Result<f64> {
    let n = cfg.usize_or("n", 0)?;
    let c = cfg.f64_or("c", 1.0)?;
    if n > 0 {
        if cfg.contains("theta_m") {
            return Err(CliError::Config("give either theta_m or n, not both".into()));
        }
        if n > 52 {
            return Err(CliError::Config("n must be <= 52 so c/2^n stays representable".into()));
        }
        Ok(c / (1u64 << n) as f64)
    } else {
        Ok(cfg.f64_or("theta_m", default)?)
    }
}

/// `reference-sweep`: the no-QM-operator process at angle θ_m for K steps,
/// against the analytic per-step rate −2 sin((k+½)θ) sin(θ/2).
pub fn reference_sweep(cfg: &mut Config) -> Result<Table> {
    let theta_m = resolve_theta(cfg, PI / 64.0)?;
    let steps = cfg.usize_or("steps", 32)?;
    let axis = parse_axis(&cfg.string_or("axis", "x")?)?;
    if steps == 0 {
        return Err(CliError::Config("K must be >= 1".into()));
    }
    let trace = reference_process(theta_m, steps, &ground_qubit(), axis)?;
    let report = qsd_rates(&trace)?;
    let mut table = Table::new(&[
        "k",
        "rho12_re",
        "rho12_im",
        "rho12_abs",
        "delta_rho",
        "delta_rho_analytic_2sin",
        "deviation",
    ]);
    for (k, z) in trace.overlaps().iter().enumerate() {
        let (delta, analytic, dev) = match report.delta_rho.get(k) {
            Some(&d) => {
                let a = reference_delta_rho(theta_m, k);
                (Cell::Float(d), Cell::Float(a), Cell::Float((d - a).abs()))
            }
            None => (Cell::Empty, Cell::Empty, Cell::Empty),
        };
        table.push(vec![
            Cell::Int(k as i64),
            Cell::Float(z.re),
            Cell::Float(z.im),
            Cell::Float(z.norm()),
            delta,
            analytic,
            dev,
        ]);
    }
    table.summarize("final_abs_overlap", Cell::Float(trace.final_overlap().norm()));
    table.summarize(
        "whole_process_avg_rate",
        Cell::Float(*report.avg_rate.last().expect("steps >= 1")),
    );
    Ok(table)
}

/// `qsd-sweep`: amplitude-based process with identity or seeded Haar-random
/// QM operators, all rate series, and the rate-law classification.
pub fn qsd_sweep(cfg: &mut Config) -> Result<Table> {
    let theta_m = resolve_theta(cfg, PI / 64.0)?;
    let steps = cfg.usize_or("steps", 32)?;
    let axis = parse_axis(&cfg.string_or("axis", "x")?)?;
    let qm_kind = cfg.string_or("qm", "identity")?;
    let seed = cfg.u64_or("seed", 0)?;
    if steps == 0 {
        return Err(CliError::Config("K must be >= 1".into()));
    }
    let mut rng = SeededRng::new(seed);
    let qm_ops: Vec<UnitaryMatrix<f64>> = match qm_kind.as_str() {
        "identity" => vec![UnitaryMatrix::identity(2); steps + 1],
        "haar" => (0..=steps).map(|_| random_unitary(2, &mut rng)).collect(),
        other => return Err(CliError::Config(format!("key 'qm': unknown kind {other:?}"))),
    };
    let gen = HermitianGenerator::new(spin_operator::<f64>(Arity::Two, axis))?;
    let schedule =
        QuansdamSchedule::new(qm_ops, vec![IcStep::new(gen, theta_m); steps], ground_qubit())?;
    let trace = schedule.run(&[1, -1])?;
    let report = qsd_rates(&trace)?;

    let mut table = Table::new(&[
        "k",
        "rho12_re",
        "rho12_im",
        "rho12_abs",
        "delta_rho",
        "delta_rho_sq",
        "avg_rate",
        "per_step_rate",
    ]);
    for (k, z) in trace.overlaps().iter().enumerate() {
        let get = |v: &Vec<f64>, i: usize| v.get(i).map(|&x| Cell::Float(x)).unwrap_or(Cell::Empty);
        let avg = if k >= 1 { get(&report.avg_rate, k - 1) } else { Cell::Empty };
        table.push(vec![
            Cell::Int(k as i64),
            Cell::Float(z.re),
            Cell::Float(z.im),
            Cell::Float(z.norm()),
            get(&report.delta_rho, k),
            get(&report.delta_rho_sq, k),
            avg,
            get(&report.per_step_rate, k),
        ]);
    }
    table.summarize("classification", Cell::Text(report.classification.to_string()));
    table.summarize("final_abs_overlap", Cell::Float(trace.final_overlap().norm()));
    // both complexity counts, neither privileged
    table.summarize("ic_operator_count", Cell::Int(steps as i64));
    table.summarize("qm_operator_count", Cell::Int(steps as i64 + 1));
    Ok(table)
}

/// `oracle-equiv`: exhaustive four-way oracle comparison over all solution
/// indices at one phase angle.
pub fn oracle_equiv(cfg: &mut Config) -> Result<Table> {
    let n = cfg.usize_or("n", 3)?;
    let theta = cfg.f64_or("theta", PI / 3.0)?;
    let tolerance = cfg.f64_or("tolerance", 1e-12)?;
    if n == 0 || n > 5 {
        return Err(CliError::Config("n must lie in 1..=5 for exhaustive mode".into()));
    }
    let mut table = Table::new(&[
        "x0",
        "dev_bfseq_vs_uo",
        "dev_bfseq_x0_vs_uo",
        "dev_cs_vs_uo",
        "ancilla_leak",
        "max_deviation",
    ]);
    let mut worst = 0.0f64;
    for x0 in 0..(1usize << n) {
        let spec = qsdlab_core::boolean::SearchOracleSpec::new(n, x0)?;
        let report = qsdlab_core::boolean::four_way_equivalence::<f64>(&spec, theta);
        worst = worst.max(report.max_deviation());
        table.push(vec![
            Cell::Int(x0 as i64),
            Cell::Float(report.bfseq_vs_uo),
            Cell::Float(report.bfseq_x0_vs_uo),
            Cell::Float(report.cs_vs_uo),
            Cell::Float(report.ancilla_leak),
            Cell::Float(report.max_deviation()),
        ]);
    }
    table.summarize("n", Cell::Int(n as i64));
    table.summarize("theta", Cell::Float(theta));
    table.summarize("max_deviation", Cell::Float(worst));
    if worst > tolerance {
        return Err(CliError::Tolerance(format!(
            "oracle equivalence deviation {worst:e} exceeds {tolerance:e}"
        )));
    }
    Ok(table)
}

/// `phase-quansdam`: branch overlap of the momentum-displacement process
/// under box doubling at fixed grid spacing.
pub fn phase_quansdam(cfg: &mut Config) -> Result<Table> {
    let box_length = cfg.f64_or("box_length", 10.0)?;
    let points = cfg.usize_or("points", 128)?;
    let momentum_quantum = cfg.f64_or("momentum_quantum", 0.0)?;
    let p0_prime = cfg.f64_or("p0_prime", 0.1)?;
    let m_z = cfg.f64_or("m_z", 0.5)?;
    let doublings = cfg.usize_or("doublings", 4)?;
    let units = Units::default();
    if momentum_quantum.fract() != 0.0 {
        return Err(CliError::Config("momentum_quantum must be an integer".into()));
    }
    let k = momentum_quantum as i64;

    let mut table = Table::new(&[
        "box_length",
        "points",
        "overlap_re",
        "overlap_im",
        "overlap_abs",
        "box_integral_sinc",
        "modulus_drift",
    ]);
    for d in 0..doublings.max(1) {
        let scale = 1usize << d;
        let grid = GridSpec::new(box_length * scale as f64, points * scale)?;
        let psi = momentum_eigenfunction(grid, k, &units)?.with_internal_ground();
        let plus = phase_quansdam_step(&psi, p0_prime, 1, m_z, &units)?;
        let minus = phase_quansdam_step(&psi, p0_prime, -1, m_z, &units)?;
        let overlap = plus.overlap(&minus)?;
        let drift = psi
            .moduli()
            .iter()
            .zip(plus.moduli())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let oracle = box_plane_wave_overlap(grid, 2.0 * m_z * p0_prime, &units);
        table.push(vec![
            Cell::Float(grid.length),
            Cell::Int(grid.points as i64),
            Cell::Float(overlap.re),
            Cell::Float(overlap.im),
            Cell::Float(overlap.norm()),
            Cell::Float(oracle.abs()),
            Cell::Float(drift),
        ]);
    }
    Ok(table)
}

/// `truncation`: ε(0, M) truncation-error curve of an oscillator-basis
/// expansion, plus the fast-convergence witness window.
pub fn truncation(cfg: &mut Config) -> Result<Table> {
    let mode = cfg.string_or("mode", "gaussian")?;
    let index = cfg.usize_or("index", 0)?;
    let displacement = cfg.f64_or("displacement", 1.0)?;
    let m_max = cfg.usize_or("m_max", 64)?;
    let box_length = cfg.f64_or("box_length", 24.0)?;
    let points = cfg.usize_or("points", 256)?;
    let omega = cfg.f64_or("omega", 1.0)?;
    let eps = cfg.f64_or("eps", 1e-3)?;
    let units = Units::default();

    let grid = GridSpec::new(box_length, points)?;
    let basis = oscillator_basis(grid, m_max, omega, &units);
    let expansion = match mode.as_str() {
        "eigenstate" => {
            if index >= m_max {
                return Err(CliError::Config("index must be below m_max".into()));
            }
            let mut coeffs = DVector::<C64>::zeros(m_max);
            coeffs[index] = C64::new(1.0, 0.0);
            EigenbasisExpansion::from_coefficients(basis, coeffs)?
        }
        "gaussian" => {
            let packet = GaussianPacketParams {
                center: displacement,
                momentum: 0.0,
                variance: 0.5 * units.hbar / (units.mass * omega),
                time: 0.0,
            };
            let amps = DVector::from_fn(grid.points, |j, _| packet.sample(grid.x(j), &units));
            let norm = (amps.norm_squared() * grid.dx()).sqrt();
            EigenbasisExpansion::analyze(basis, &(amps / C64::new(norm, 0.0)))?
        }
        other => return Err(CliError::Config(format!("key 'mode': unknown mode {other:?}"))),
    };

    let mut table = Table::new(&["m", "eps_zero_m"]);
    for m in 1..=m_max {
        table.push(vec![Cell::Int(m as i64), Cell::Float(expansion.truncation_error(0, m))]);
    }
    match expansion.fast_convergence_check(eps, m_max) {
        Some((l, m)) => {
            table.summarize("witness_window_start", Cell::Int(l as i64));
            table.summarize("witness_window_width", Cell::Int(m as i64));
        }
        None => table.summarize("witness_window_width", Cell::Empty),
    }
    Ok(table)
}

type GeneratorPair = (HermitianGenerator<f64>, HermitianGenerator<f64>);

fn scaling_generators(cfg: &mut Config) -> Result<(String, Option<GeneratorPair>)> {
    let case = cfg.string_or("case", "harmonic")?;
    match case.as_str() {
        "commuting" => {
            let a = HermitianGenerator::from_real_diagonal(&[0.3, -0.2, 0.9, 0.1]);
            let b = HermitianGenerator::from_real_diagonal(&[1.0, 0.5, -0.4, 0.2]);
            Ok((case, Some((a, b))))
        }
        // fixed random Hermitian pair: defect follows the generic cubic law
        "random" => {
            let seed = cfg.u64_or("seed", 0)?;
            let dim = cfg.usize_or("dim", 4)?;
            let mut rng = SeededRng::new(seed);
            let a = qsdlab_core::random::random_hermitian(dim, &mut rng);
            let b = qsdlab_core::random::random_hermitian(dim, &mut rng);
            Ok((case, Some((a, b))))
        }
        // scenario generators carry 1/tau in the IC factor, so their defect
        // scales linearly in tau rather than cubically
        "harmonic" | "free" => Ok((case, None)),
        other => Err(CliError::Config(format!("key 'case': unknown case {other:?}"))),
    }
}

/// `bch-scaling`: group-commutator defect over a (τ, n) sweep with the
/// fitted defect-vs-τ slope per repetition count.
pub fn bch_scaling(cfg: &mut Config) -> Result<Table> {
    let (case, fixed) = scaling_generators(cfg)?;
    let coupling = cfg.f64_or("coupling", 0.8)?;
    let omega = cfg.f64_or("omega", 1.0)?;
    let theta_m = cfg.f64_or("theta_m", 0.21)?;
    let tau0 = cfg.f64_or("tau", 0.01)?;
    let tau_halvings = cfg.usize_or("tau_halvings", 3)?;
    let n_doublings = cfg.usize_or("n_doublings", 5)?;
    let levels = cfg.usize_or("levels", 16)?;
    let box_length = cfg.f64_or("box_length", 24.0)?;
    let points = cfg.usize_or("points", 64)?;
    let units = Units::default();

    let taus: Vec<f64> = (0..tau_halvings.max(1)).map(|j| tau0 / (1u64 << j) as f64).collect();
    let ns: Vec<usize> = (0..n_doublings.max(1)).map(|j| 1usize << j).collect();

    // defect[(n_idx, tau_idx)]
    let mut defects = vec![vec![0.0f64; taus.len()]; ns.len()];
    for (ti, &tau) in taus.iter().enumerate() {
        let (a, b) = match &fixed {
            Some((a, b)) => (a.clone(), b.clone()),
            None => {
                let sc = if case == "harmonic" {
                    CommutatorScenario::harmonic_trap(coupling, omega, theta_m, tau, levels, units)
                } else {
                    let grid = GridSpec::new(box_length, points)?;
                    CommutatorScenario::free_atom(coupling, theta_m, tau, grid, units)
                };
                (sc.a_generator(1), sc.b_generator())
            }
        };
        for (ni, &n) in ns.iter().enumerate() {
            let report = if n == 1 {
                bch_group_commutator(&a, &b, tau)?
            } else {
                trotter_repeat(&a, &b, tau, n)?
            };
            defects[ni][ti] = report.defect;
        }
    }

    let mut table = Table::new(&["tau", "n", "defect", "fitted_slope_vs_tau"]);
    for (ni, &n) in ns.iter().enumerate() {
        let slope = log_log_fit(&taus, &defects[ni], 1e-14).map(|f| f.slope);
        for (ti, &tau) in taus.iter().enumerate() {
            table.push(vec![
                Cell::Float(tau),
                Cell::Int(n as i64),
                Cell::Float(defects[ni][ti]),
                slope.map(Cell::Float).unwrap_or(Cell::Empty),
            ]);
        }
    }
    table.summarize("case", Cell::Text(case));
    Ok(table)
}

/// Trapezoid quadrature of |∫ φ₁* φ₂ dx| on ±8σ, the independent oracle for
/// the closed-form overlap.
fn packet_overlap_quadrature(
    p1: &GaussianPacketParams<f64>,
    p2: &GaussianPacketParams<f64>,
    units: &Units<f64>,
) -> f64 {
    let spread = |p: &GaussianPacketParams<f64>| {
        let b = p.beta(units);
        (p.variance + b * b / p.variance).sqrt()
    };
    let sigma = spread(p1).max(spread(p2));
    let lo = p1.center.min(p2.center) - 8.0 * sigma;
    let hi = p1.center.max(p2.center) + 8.0 * sigma;
    let n = 40_000usize;
    let h = (hi - lo) / n as f64;
    let f = |x: f64| p1.sample(x, units).conj() * p2.sample(x, units);
    let mut acc = (f(lo) + f(hi)) * C64::new(0.5, 0.0);
    for j in 1..n {
        acc += f(lo + j as f64 * h);
    }
    (acc * C64::new(h, 0.0)).norm()
}

/// `gaussian-overlap-check`: closed-form packet overlaps against the
/// quadrature oracle on seeded random parameter pairs.
pub fn gaussian_overlap_check(cfg: &mut Config) -> Result<Table> {
    let count = cfg.usize_or("count", 10)?;
    let seed = cfg.u64_or("seed", 0)?;
    let tolerance = cfg.f64_or("tolerance", 1e-6)?;
    let units = Units::default();
    let mut rng = SeededRng::new(seed);
    let mut draw = |lo: f64, hi: f64| lo + (hi - lo) * rng.uniform::<f64>();

    let mut table = Table::new(&[
        "case",
        "x1",
        "p1",
        "var1",
        "t1",
        "x2",
        "p2",
        "var2",
        "t2",
        "closed_form",
        "quadrature",
        "abs_diff",
    ]);
    let mut worst = 0.0f64;
    for case in 0..count {
        let p1 = GaussianPacketParams {
            center: draw(-1.0, 1.0),
            momentum: draw(-2.0, 2.0),
            variance: draw(0.3, 2.0),
            time: draw(-1.0, 1.0),
        };
        let p2 = GaussianPacketParams {
            center: draw(-1.0, 1.0),
            momentum: draw(-2.0, 2.0),
            variance: draw(0.3, 2.0),
            time: draw(-1.0, 1.0),
        };
        let closed = gaussian_overlap(&p1, &p2, &units)?;
        let quad = packet_overlap_quadrature(&p1, &p2, &units);
        let diff = (closed - quad).abs();
        worst = worst.max(diff);
        table.push(vec![
            Cell::Int(case as i64),
            Cell::Float(p1.center),
            Cell::Float(p1.momentum),
            Cell::Float(p1.variance),
            Cell::Float(p1.time),
            Cell::Float(p2.center),
            Cell::Float(p2.momentum),
            Cell::Float(p2.variance),
            Cell::Float(p2.time),
            Cell::Float(closed),
            Cell::Float(quad),
            Cell::Float(diff),
        ]);
    }
    table.summarize("max_abs_diff", Cell::Float(worst));
    if worst > tolerance {
        return Err(CliError::Tolerance(format!(
            "closed form deviates from quadrature by {worst:e} (> {tolerance:e})"
        )));
    }
    Ok(table)
}

/// `useq-defect`: ‖USEQ(K) − exp(−i a H t_m/ħ)‖ for the exact diagonal
/// synthesis or a Trotterized factor sequence.
pub fn useq_defect_cmd(cfg: &mut Config) -> Result<Table> {
    let mode = cfg.string_or("mode", "diagonal")?;
    let units = Units::default();
    match mode.as_str() {
        "diagonal" => {
            let levels = cfg.usize_or("levels", 4)?;
            let omega = cfg.f64_or("omega", 1.0)?;
            let t_m = cfg.f64_or("t_m", 0.37)?;
            let tolerance = cfg.f64_or("tolerance", 1e-12)?;
            if levels < 2 {
                return Err(CliError::Config("levels must be >= 2".into()));
            }
            // zero-mean equally spaced spectrum
            let energies: Vec<f64> =
                (0..levels).map(|k| omega * (k as f64 - (levels as f64 - 1.0) / 2.0)).collect();
            let target = IcPropagatorSpec {
                generator: HermitianGenerator::from_real_diagonal(&energies),
                t_m,
            };
            let mut steps = vec![UseqStep::Qm(UnitaryMatrix::identity(levels))];
            let mut carry = 0.0f64;
            for j in 0..levels - 1 {
                let x = 2.0 * energies[j] * t_m + carry;
                let mut d = vec![0.0f64; levels];
                d[j] = 0.5;
                d[j + 1] = -0.5;
                steps.push(UseqStep::Ic {
                    generator: HermitianGenerator::from_real_diagonal(&d),
                    scale: x,
                });
                steps.push(UseqStep::Qm(UnitaryMatrix::identity(levels)));
                carry = x;
            }
            let report = useq_defect(&steps, &target, &units)?;
            let mut table = Table::new(&["logical_value", "defect"]);
            table.push(vec![Cell::Int(1), Cell::Float(report.defect_plus)]);
            table.push(vec![Cell::Int(-1), Cell::Float(report.defect_minus)]);
            let worst = report.defect_plus.max(report.defect_minus);
            table.summarize("max_defect", Cell::Float(worst));
            if worst > tolerance {
                return Err(CliError::Tolerance(format!(
                    "exact diagonal synthesis defect {worst:e} exceeds {tolerance:e}"
                )));
            }
            Ok(table)
        }
        "trotter" => {
            let coupling = cfg.f64_or("coupling", 0.8)?;
            let omega = cfg.f64_or("omega", 1.0)?;
            let theta_m = cfg.f64_or("theta_m", 0.21)?;
            let tau = cfg.f64_or("tau", 0.01)?;
            let levels = cfg.usize_or("levels", 16)?;
            let n_doublings = cfg.usize_or("n_doublings", 4)?;
            use qsdlab_core::hilbert::TensorProduct;
            let sc = CommutatorScenario::harmonic_trap(coupling, omega, theta_m, tau, levels, units);
            let ScenarioSpace::Oscillator { .. } = sc.space else { unreachable!() };
            let b = sc.b_generator();
            let com_dim = sc.com_dim();
            let id_com = HermitianGenerator::from_real_diagonal(&vec![1.0; com_dim]);
            let spin = |axis| {
                HermitianGenerator::new(spin_operator::<f64>(Arity::Two, axis))
                    .expect("spin operator is Hermitian")
            };
            let iy_embedded = id_com.tensor(&spin(Axis::Y));
            // target exp(−i a θ τ (K/ħ) x I_z): generator K·x I_z, t_m = θτ
            let xiz = sc.x_operator().tensor(&spin(Axis::Z));
            let target = IcPropagatorSpec {
                generator: HermitianGenerator::with_tolerance(
                    xiz.matrix() * C64::new(coupling, 0.0),
                    1e-9,
                )?,
                t_m: theta_m * tau,
            };
            let mut table = Table::new(&["n", "defect_plus", "defect_minus"]);
            for d in 0..n_doublings.max(1) {
                let n = 1usize << d;
                let tau_n = tau / n as f64;
                // one group-commutator slice as USEQ factors, applied right
                // to left: exp(+iBτ/n), exp(+iAτ/n), exp(−iBτ/n), exp(−iAτ/n)
                let slice = [
                    UseqStep::Qm(qsdlab_core::hilbert::expm_generator(&b, -tau_n)),
                    UseqStep::Ic { generator: iy_embedded.clone(), scale: -theta_m / n as f64 },
                    UseqStep::Qm(qsdlab_core::hilbert::expm_generator(&b, tau_n)),
                    UseqStep::Ic { generator: iy_embedded.clone(), scale: theta_m / n as f64 },
                ];
                let mut steps = Vec::with_capacity(4 * n * n);
                for _ in 0..n * n {
                    steps.extend(slice.iter().cloned());
                }
                let report = useq_defect(&steps, &target, &units)?;
                table.push(vec![
                    Cell::Int(n as i64),
                    Cell::Float(report.defect_plus),
                    Cell::Float(report.defect_minus),
                ]);
            }
            Ok(table)
        }
        other => Err(CliError::Config(format!("key 'mode': unknown mode {other:?}"))),
    }
}
