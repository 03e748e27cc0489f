//! Carnot-like protocols on the Ising chain: work density, efficiency, and the
//! search for the work-maximising fields.

use serde::Serialize;

use super::chain::{corner_entropy, entropy_density, relative_entropy_density, Field};
use super::finite::LevelTable;
use crate::optimize::{golden_min, grid_then_golden_max};
use crate::thermo::InverseTemperaturePair;
use crate::{Error, Result};

/// Fields at the four protocol corners. Only the zero-entropy corners `A`
/// and `D` may sit at `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProtocolFields {
    pub h_a: Field,
    pub h_b: f64,
    pub h_c: f64,
    pub h_d: Field,
}

impl ProtocolFields {
    /// `h_A = h_D = +∞`, `h_B = h_C = h`.
    pub fn polarised(h: f64) -> Self {
        Self { h_a: Field::PlusInfinity, h_b: h, h_c: h, h_d: Field::PlusInfinity }
    }

    fn validate(&self) -> Result<()> {
        let finite = |f: Field| match f {
            Field::Finite(h) => h.is_finite(),
            Field::PlusInfinity => true,
        };
        if !self.h_b.is_finite() || !self.h_c.is_finite() || !finite(self.h_a) || !finite(self.h_d) {
            return Err(Error::NonFinite("protocol field"));
        }
        Ok(())
    }
}

/// Per-site pieces of the bound for one field configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProtocolTerms {
    /// `s(β_h, h_B) − s(β_c, h_D)`.
    pub entropy_gain: f64,
    /// `d(ω_c^D ‖ ω_h^A)`.
    pub penalty_cold_to_hot: f64,
    /// `d(ω_h^B ‖ ω_c^C)`.
    pub penalty_hot_to_cold: f64,
}

pub fn protocol_terms(j: f64, fields: &ProtocolFields, betas: &InverseTemperaturePair) -> Result<ProtocolTerms> {
    fields.validate()?;
    let (bh, bc) = (betas.beta_h, betas.beta_c);
    Ok(ProtocolTerms {
        entropy_gain: entropy_density(bh, j, fields.h_b)? - corner_entropy(bc, j, fields.h_d)?,
        penalty_cold_to_hot: relative_entropy_density(bc, bh, j, fields.h_d, fields.h_a)?,
        penalty_hot_to_cold: relative_entropy_density(bh, bc, j, Field::Finite(fields.h_b), Field::Finite(fields.h_c))?,
    })
}

fn work_from(t: &ProtocolTerms, betas: &InverseTemperaturePair) -> f64 {
    (betas.t_hot() - betas.t_cold()) * t.entropy_gain
        - betas.t_hot() * t.penalty_cold_to_hot
        - betas.t_cold() * t.penalty_hot_to_cold
}

fn efficiency_from(t: &ProtocolTerms, betas: &InverseTemperaturePair) -> Result<f64> {
    let denominator = betas.t_hot() * (t.entropy_gain - t.penalty_cold_to_hot);
    if !(denominator > 0.0) {
        return Err(Error::EfficiencyUndefined(denominator));
    }
    Ok(work_from(t, betas) / denominator)
}

/// Work per site `(T_h − T_c)Δs − T_h d(D→A) − T_c d(B→C)`.
pub fn work_density(j: f64, fields: &ProtocolFields, betas: &InverseTemperaturePair) -> Result<f64> {
    Ok(work_from(&protocol_terms(j, fields, betas)?, betas))
}

/// Efficiency `w / (T_h (Δs − d(D→A)))`; [`Error::EfficiencyUndefined`]
/// when the heat drawn from the hot bath is not positive.
pub fn efficiency_thermo_limit(j: f64, fields: &ProtocolFields, betas: &InverseTemperaturePair) -> Result<f64> {
    efficiency_from(&protocol_terms(j, fields, betas)?, betas)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SweepMode {
    /// `h_A = h_D = +∞`, `h_C = h_B`, maximise over `h_B ≥ 0`.
    Tied,
    /// As [`SweepMode::Tied`] but `h_C` minimises the hot-to-cold penalty for each `h_B`.
    Free,
    /// The given fields, independent of `J`.
    Fixed(ProtocolFields),
}

impl SweepMode {
    pub fn name(&self) -> &'static str {
        match self {
            SweepMode::Tied => "paper",
            SweepMode::Free => "free",
            SweepMode::Fixed(_) => "fixed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub j: f64,
    pub h_opt: f64,
    pub work_density: f64,
    pub efficiency: f64,
}

const GRID_STEP: f64 = 1e-2;
const GOLDEN_TOL: f64 = 1e-8;

fn field_range(j: f64) -> f64 {
    4.0 * j.abs().max(1.0)
}

/// Cold-corner field minimising `d(ω_{β_h}(h_B) ‖ ω_{β_c}(h_C))`.
pub fn best_cold_field(j: f64, h_b: f64, betas: &InverseTemperaturePair) -> Result<(f64, f64)> {
    let (lo, hi) = if h_b >= 0.0 { (0.0, field_range(j)) } else { (-field_range(j), 0.0) };
    let penalty = |h_c: f64| {
        relative_entropy_density(betas.beta_h, betas.beta_c, j, Field::Finite(h_b), Field::Finite(h_c))
            .unwrap_or(f64::INFINITY)
    };
    Ok(golden_min(penalty, lo, hi, 1e-10))
}

fn fields_for(mode: &SweepMode, j: f64, h_b: f64, betas: &InverseTemperaturePair) -> Result<ProtocolFields> {
    match mode {
        SweepMode::Tied => Ok(ProtocolFields::polarised(h_b)),
        SweepMode::Free => {
            let (h_c, _) = best_cold_field(j, h_b, betas)?;
            Ok(ProtocolFields { h_c, ..ProtocolFields::polarised(h_b) })
        }
        SweepMode::Fixed(f) => Ok(*f),
    }
}

/// Efficiency of the protocol that maximises the work density at coupling `J`.
///
/// A non-positive efficiency denominator is reported as efficiency `0`.
pub fn efficiency_at_max_work(j: f64, betas: &InverseTemperaturePair, mode: SweepMode) -> Result<SweepPoint> {
    if !j.is_finite() {
        return Err(Error::NonFinite("J"));
    }
    let fields = match mode {
        SweepMode::Fixed(f) => f,
        _ => {
            let w = |h: f64| {
                fields_for(&mode, j, h, betas)
                    .and_then(|f| work_density(j, &f, betas))
                    .unwrap_or(f64::NEG_INFINITY)
            };
            let (mut h, mut best) = grid_then_golden_max(w, 0.0, field_range(j), GRID_STEP, GOLDEN_TOL);
            let at_zero = w(0.0);
            if at_zero >= best {
                h = 0.0;
                best = at_zero;
            }
            debug_assert!(best.is_finite());
            fields_for(&mode, j, h, betas)?
        }
    };
    let terms = protocol_terms(j, &fields, betas)?;
    let efficiency = match efficiency_from(&terms, betas) {
        Ok(e) => e,
        Err(Error::EfficiencyUndefined(_)) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(SweepPoint { j, h_opt: fields.h_b, work_density: work_from(&terms, betas), efficiency })
}

/// `J_i = j_min + i·step` for every `J_i ≤ j_max`, rounded to 12 decimals.
pub fn j_grid(j_min: f64, j_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(j_min.is_finite() && j_max.is_finite() && step.is_finite()) {
        return Err(Error::NonFinite("J range"));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("J step must be positive, got {step}")));
    }
    if j_max < j_min {
        return Err(Error::InvalidParameter(format!("empty J range [{j_min}, {j_max}]")));
    }
    let count = ((j_max - j_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let x = ((j_min + i as f64 * step) * 1e12).round() / 1e12;
            if x == 0.0 {
                0.0
            } else {
                x
            }
        })
        .collect())
}

/// The coupling closest to zero, on the anti-ferromagnetic side, at which
/// the optimal field first leaves zero.
pub fn locate_j_star(points: &[SweepPoint]) -> Option<f64> {
    let mut negative: Vec<&SweepPoint> = points.iter().filter(|p| p.j < 0.0).collect();
    negative.sort_by(|a, b| b.j.total_cmp(&a.j));
    negative.into_iter().find(|p| p.h_opt > 1e-6).map(|p| p.j)
}

/// Finite chain with imprecise fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrecisionPoint {
    pub j: f64,
    pub epsilon: f64,
    pub h_opt: f64,
    pub work: f64,
    pub efficiency: f64,
}

/// Largest chain accepted by [`precision_efficiency`].
pub const MAX_PRECISION_SITES: usize = 12;

/// Efficiency at maximum work of a finite chain with `h_A = h_D = +∞` and
/// `h_B = h_C = h`, `h ≥ ε`.
pub fn precision_efficiency(table: &LevelTable, j: f64, epsilon: f64, betas: &InverseTemperaturePair) -> Result<PrecisionPoint> {
    if table.n_sites > MAX_PRECISION_SITES {
        return Err(Error::TooLarge { what: "N", value: table.n_sites, limit: MAX_PRECISION_SITES });
    }
    if !j.is_finite() || !epsilon.is_finite() {
        return Err(Error::NonFinite("precision parameters"));
    }
    if epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let (bh, bc) = (betas.beta_h, betas.beta_c);
    let terms = |h: f64| {
        let s = table.entropy(bh, j, h);
        let d = table.relative_entropy(bh, h, bc, h, j);
        (s, d)
    };
    let work = |h: f64| {
        let (s, d) = terms(h);
        (betas.t_hot() - betas.t_cold()) * s - betas.t_cold() * d
    };
    let (mut h, mut best) = grid_then_golden_max(work, epsilon, epsilon + field_range(j), GRID_STEP, GOLDEN_TOL);
    let at_eps = work(epsilon);
    if at_eps >= best {
        h = epsilon;
        best = at_eps;
    }
    let (s, _) = terms(h);
    let efficiency = if s > 0.0 { best / (betas.t_hot() * s) } else { 0.0 };
    Ok(PrecisionPoint { j, epsilon, h_opt: h, work: best, efficiency })
}
