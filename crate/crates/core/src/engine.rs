//! Protocol execution and efficiency bounds.
//!
//! A protocol is a sequence of [`ProtocolStep`]s acting on a pair
//! `(ρ, H)`. Unitary steps and quenches exchange work, thermal contacts
//! exchange heat. [`run_cycle`] iterates a cyclic protocol to its steady
//! cycle and reports work, heats and efficiency `η = W/|Q_h|`.
//!
//! The bounds compare the four corner Hamiltonians `H_A … H_D` of a
//! Carnot-like protocol:
//!
//! ```text
//! η ≤ 1 − (T_c/T_h) (ΔS^{B,D} + D_U) / (ΔS^{B,D} − D_V)
//! D_U = min_U D(U ω_h^B U† ‖ ω_c^C),  D_V = min_V D(V ω_c^D V† ‖ ω_h^A)
//! ```

use serde::Serialize;

use crate::control::ControlClass;
use crate::hamiltonians::{Hamiltonian, MATCH_TOL};
use crate::linalg::{self, CMatrix};
use crate::thermo::{self, DensityState, InverseTemperaturePair, UnitaryClass};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bath {
    Hot,
    Cold,
}

impl Bath {
    pub fn beta(self, betas: &InverseTemperaturePair) -> f64 {
        match self {
            Bath::Hot => betas.beta_h,
            Bath::Cold => betas.beta_c,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProtocolStep {
    /// `(ρ, H) ↦ (UρU†, H_next)`.
    Unitary { unitary: CMatrix, next: Hamiltonian },
    /// `(ρ, H) ↦ (ρ, H_next)`.
    Quench(Hamiltonian),
    /// `(ρ, H) ↦ (ω(H, β_bath), H)`.
    ThermalContact(Bath),
}

impl ProtocolStep {
    pub fn kind(&self) -> StepKind {
        match self {
            ProtocolStep::Unitary { .. } => StepKind::Unitary,
            ProtocolStep::Quench(_) => StepKind::Quench,
            ProtocolStep::ThermalContact(b) => StepKind::Contact(*b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    Unitary,
    Quench,
    Contact(Bath),
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub state: DensityState,
    pub hamiltonian: Hamiltonian,
    /// Extracted work `Tr(ρH) − Tr(ρ'H')`.
    pub work: f64,
    /// Heat drawn from the bath.
    pub heat: f64,
}

fn check_next(current: &Hamiltonian, next: &Hamiltonian) -> Result<()> {
    if next.dim() != current.dim() {
        return Err(Error::DimensionMismatch { expected: current.dim(), got: next.dim() });
    }
    if !current.shares_interaction(next) {
        return Err(Error::InteractionMismatch);
    }
    Ok(())
}

/// Applies one step and returns the new pair with its work and heat.
pub fn apply_step(
    state: &DensityState,
    current: &Hamiltonian,
    step: &ProtocolStep,
    betas: &InverseTemperaturePair,
) -> Result<StepOutcome> {
    if state.dim() != current.dim() {
        return Err(Error::DimensionMismatch { expected: current.dim(), got: state.dim() });
    }
    let before = state.energy(current)?;
    match step {
        ProtocolStep::Unitary { unitary, next } => {
            check_next(current, next)?;
            let moved = state.conjugate(unitary)?;
            let work = before - moved.energy(next)?;
            Ok(StepOutcome { state: moved, hamiltonian: next.clone(), work, heat: 0.0 })
        }
        ProtocolStep::Quench(next) => {
            check_next(current, next)?;
            let work = before - state.energy(next)?;
            Ok(StepOutcome { state: state.clone(), hamiltonian: next.clone(), work, heat: 0.0 })
        }
        ProtocolStep::ThermalContact(bath) => {
            let omega = thermo::gibbs(current, bath.beta(betas))?;
            let heat = omega.energy(current)? - before;
            Ok(StepOutcome { state: omega, hamiltonian: current.clone(), work: 0.0, heat })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub kind: StepKind,
    pub work: f64,
    pub heat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleReport {
    pub total_work: f64,
    pub heat_hot: f64,
    pub heat_cold: f64,
    /// `W/|Q_h|`.
    pub efficiency: f64,
    pub per_step: Vec<StepRecord>,
    pub bound_value: Option<f64>,
    /// Whether the state returned to itself within [`CYCLE_TOL`] in trace distance.
    pub converged: bool,
    pub iterations: usize,
    /// `W − (Q_h + Q_c)` over the reported pass.
    pub first_law_residual: f64,
}

pub const CYCLE_TOL: f64 = 1e-10;
pub const MAX_CYCLE_ITERATIONS: usize = 100;

/// Runs a cyclic protocol starting from the cold thermal state of `h0`.
pub fn run_cycle(h0: &Hamiltonian, steps: &[ProtocolStep], betas: &InverseTemperaturePair) -> Result<CycleReport> {
    let start = thermo::gibbs(h0, betas.beta_c)?;
    run_cycle_from(start, h0, steps, betas)
}

/// Runs a cyclic protocol from a given initial state, repeating it until the
/// state at the end of a pass matches the state at its start.
pub fn run_cycle_from(
    initial: DensityState,
    h0: &Hamiltonian,
    steps: &[ProtocolStep],
    betas: &InverseTemperaturePair,
) -> Result<CycleReport> {
    if !steps.iter().any(|s| matches!(s, ProtocolStep::ThermalContact(Bath::Hot))) {
        return Err(Error::NoHotContact);
    }
    let last = steps.iter().rev().find_map(|s| match s {
        ProtocolStep::Unitary { next, .. } | ProtocolStep::Quench(next) => Some(next),
        ProtocolStep::ThermalContact(_) => None,
    });
    if let Some(h_end) = last {
        let dev = h_end.distance(h0);
        if !(dev <= MATCH_TOL * h0.to_dense().iter().fold(1.0_f64, |a, z| a.max(z.norm()))) {
            return Err(Error::NotCyclic(dev));
        }
    }

    let mut state = initial;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut h = h0.clone();
        let mut rho = state.clone();
        let mut per_step = Vec::with_capacity(steps.len());
        let (mut work, mut q_hot, mut q_cold) = (0.0, 0.0, 0.0);
        for (index, step) in steps.iter().enumerate() {
            let out = apply_step(&rho, &h, step, betas)?;
            work += out.work;
            match step {
                ProtocolStep::ThermalContact(Bath::Hot) => q_hot += out.heat,
                ProtocolStep::ThermalContact(Bath::Cold) => q_cold += out.heat,
                _ => {}
            }
            per_step.push(StepRecord { index, kind: step.kind(), work: out.work, heat: out.heat });
            rho = out.state;
            h = out.hamiltonian;
        }
        let drift = rho.trace_distance(&state)?;
        let converged = drift < CYCLE_TOL;
        if converged || iterations >= MAX_CYCLE_ITERATIONS {
            return Ok(CycleReport {
                total_work: work,
                heat_hot: q_hot,
                heat_cold: q_cold,
                efficiency: work / q_hot.abs(),
                per_step,
                bound_value: None,
                converged,
                iterations,
                first_law_residual: work - (q_hot + q_cold),
            });
        }
        state = rho;
    }
}

/// Quench–contact staircase approximating an isothermal path from `from` to
/// `to` along the straight line between them.
pub fn isothermal_staircase(from: &Hamiltonian, to: &Hamiltonian, bath: Bath, micro_steps: usize) -> Result<Vec<ProtocolStep>> {
    if micro_steps == 0 {
        return Err(Error::InvalidParameter("staircase needs at least one micro-step".into()));
    }
    let mut steps = Vec::with_capacity(2 * micro_steps);
    for k in 1..=micro_steps {
        let h = if k == micro_steps { to.clone() } else { from.lerp(to, k as f64 / micro_steps as f64)? };
        steps.push(ProtocolStep::Quench(h));
        steps.push(ProtocolStep::ThermalContact(bath));
    }
    Ok(steps)
}

/// Default staircase resolution.
pub const DEFAULT_MICRO_STEPS: usize = 1000;

/// The four corner Hamiltonians of a Carnot-like protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct Corners {
    pub h_a: Hamiltonian,
    pub h_b: Hamiltonian,
    pub h_c: Hamiltonian,
    pub h_d: Hamiltonian,
}

/// Carnot-like protocol starting at `H_D`: adiabatic `V` to `H_A`, hot
/// contact, hot staircase to `H_B`, adiabatic `U` to `H_C`, cold contact,
/// cold staircase back to `H_D`. `None` unitaries are quenches.
pub fn carnot_like_protocol(
    corners: &Corners,
    micro_steps: usize,
    v: Option<&CMatrix>,
    u: Option<&CMatrix>,
) -> Result<Vec<ProtocolStep>> {
    let adiabatic = |m: Option<&CMatrix>, next: &Hamiltonian| match m {
        Some(unitary) => ProtocolStep::Unitary { unitary: unitary.clone(), next: next.clone() },
        None => ProtocolStep::Quench(next.clone()),
    };
    let mut steps = vec![adiabatic(v, &corners.h_a), ProtocolStep::ThermalContact(Bath::Hot)];
    steps.extend(isothermal_staircase(&corners.h_a, &corners.h_b, Bath::Hot, micro_steps)?);
    steps.push(adiabatic(u, &corners.h_c));
    steps.push(ProtocolStep::ThermalContact(Bath::Cold));
    steps.extend(isothermal_staircase(&corners.h_c, &corners.h_d, Bath::Cold, micro_steps)?);
    Ok(steps)
}

/// How the minimisation over `U` (or `V`) in the bound is resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitaryChoice {
    Class(UnitaryClass),
    Identity,
    /// A caller-supplied unitary, used verbatim.
    Explicit(CMatrix),
}

impl UnitaryChoice {
    /// Maps a controllability classification to the matching choice.
    /// Intermediate Lie algebras have no closed-form minimiser.
    pub fn for_class(class: ControlClass) -> Result<Self> {
        match class {
            ControlClass::Full => Ok(UnitaryChoice::Class(UnitaryClass::Full)),
            ControlClass::Commuting => Ok(UnitaryChoice::Class(UnitaryClass::Commuting)),
            ControlClass::Intermediate(dim) => Err(Error::UnsupportedUnitaryClass(dim)),
        }
    }

    /// Dissipation term `min D(XρX†‖σ)` for this choice.
    pub fn penalty(&self, rho: &DensityState, sigma: &DensityState) -> Result<f64> {
        match self {
            UnitaryChoice::Class(class) => thermo::min_relative_entropy_over_unitaries(rho, sigma, *class),
            UnitaryChoice::Identity => thermo::relative_entropy(rho, sigma),
            UnitaryChoice::Explicit(u) => {
                linalg::check_unitary(u)?;
                thermo::relative_entropy(&rho.conjugate(u)?, sigma)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundInputs {
    pub corners: Corners,
    pub betas: InverseTemperaturePair,
    pub u: UnitaryChoice,
    pub v: UnitaryChoice,
}

impl BoundInputs {
    fn validate(&self) -> Result<()> {
        let c = &self.corners;
        for h in [&c.h_b, &c.h_c, &c.h_d] {
            if h.dim() != c.h_a.dim() {
                return Err(Error::DimensionMismatch { expected: c.h_a.dim(), got: h.dim() });
            }
            if !c.h_a.shares_interaction(h) {
                return Err(Error::InteractionMismatch);
            }
        }
        Ok(())
    }
}

/// The pieces entering the efficiency bound, all in nats.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundTerms {
    /// `S(ω_h^B) − S(ω_c^D)`.
    pub entropy_gain: f64,
    /// `D_U`, dissipation on switching from the hot to the cold bath.
    pub penalty_hot_to_cold: f64,
    /// `D_V`, dissipation on switching from the cold to the hot bath.
    pub penalty_cold_to_hot: f64,
}

pub fn bound_terms(inputs: &BoundInputs) -> Result<BoundTerms> {
    inputs.validate()?;
    let c = &inputs.corners;
    let b = &inputs.betas;
    let w_hb = thermo::gibbs(&c.h_b, b.beta_h)?;
    let w_cc = thermo::gibbs(&c.h_c, b.beta_c)?;
    let w_cd = thermo::gibbs(&c.h_d, b.beta_c)?;
    let w_ha = thermo::gibbs(&c.h_a, b.beta_h)?;
    Ok(BoundTerms {
        entropy_gain: thermo::von_neumann_entropy(&w_hb) - thermo::von_neumann_entropy(&w_cd),
        penalty_hot_to_cold: inputs.u.penalty(&w_hb, &w_cc)?,
        penalty_cold_to_hot: inputs.v.penalty(&w_cd, &w_ha)?,
    })
}

/// Upper bound on the efficiency of every protocol with these corners.
///
/// Returns `−∞` when the hot-to-cold penalty is infinite and
/// [`Error::BoundUndefined`] when `ΔS − D_V ≤ 0`.
pub fn efficiency_bound(inputs: &BoundInputs) -> Result<f64> {
    let t = bound_terms(inputs)?;
    let denominator = t.entropy_gain - t.penalty_cold_to_hot;
    if !(denominator > 0.0) {
        return Err(Error::BoundUndefined(denominator));
    }
    if t.penalty_hot_to_cold == f64::INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let ratio = inputs.betas.beta_h / inputs.betas.beta_c;
    Ok(1.0 - ratio * (t.entropy_gain + t.penalty_hot_to_cold) / denominator)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WorkHeatBound {
    pub work_max: f64,
    pub heat_min: f64,
}

/// Best work and least hot-bath heat for the hot half of a Carnot-like
/// protocol: start in `ω_c^D` at `H_D`, apply `V` into `H_A`, then follow a
/// reversible hot isotherm to `H_B`.
///
/// `heat_min = T_h (ΔS^{B,D} − D(Vω_c^D V†‖ω_h^A))` and, by the first law,
/// `work_max = heat_min + Tr(ω_c^D H_D) − Tr(ω_h^B H_B)`.
pub fn carnot_like_work_bound(
    h_d: &Hamiltonian,
    h_a: &Hamiltonian,
    h_b: &Hamiltonian,
    betas: &InverseTemperaturePair,
    v: &UnitaryChoice,
) -> Result<WorkHeatBound> {
    for h in [h_a, h_b] {
        check_next(h_d, h)?;
    }
    let w_cd = thermo::gibbs(h_d, betas.beta_c)?;
    let w_ha = thermo::gibbs(h_a, betas.beta_h)?;
    let w_hb = thermo::gibbs(h_b, betas.beta_h)?;
    let entropy_gain = thermo::von_neumann_entropy(&w_hb) - thermo::von_neumann_entropy(&w_cd);
    let penalty = v.penalty(&w_cd, &w_ha)?;
    let heat_min = betas.t_hot() * (entropy_gain - penalty);
    let work_max = heat_min + w_cd.energy(h_d)? - w_hb.energy(h_b)?;
    Ok(WorkHeatBound { work_max, heat_min })
}
