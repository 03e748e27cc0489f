//! Strong-coupling limits: precision-limited ferromagnetic efficiency and
//! entropy ratios along scaled Hamiltonians.

use serde::Serialize;

use crate::hamiltonians::Hamiltonian;
use crate::thermo::{self, InverseTemperaturePair};
use crate::{Error, Result};

/// `log log(1 + e^{−x})` for `x ≥ 0`.
fn log_log1p_exp_neg(x: f64) -> f64 {
    if x > 30.0 {
        -x
    } else {
        (-x).exp().ln_1p().ln()
    }
}

/// `(ΔT/T_h) · log(1 + e^{−β_c εN}) / log(1 + e^{−β_h εN})`.
pub fn ferro_efficiency_limit(epsilon: f64, n: usize, betas: &InverseTemperaturePair) -> Result<f64> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be finite and non-negative, got {epsilon}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let x = epsilon * n as f64;
    let ratio = (log_log1p_exp_neg(betas.beta_c * x) - log_log1p_exp_neg(betas.beta_h * x)).exp();
    Ok(betas.carnot() * ratio)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyRatio {
    pub j: f64,
    pub entropy_cold: f64,
    pub entropy_hot: f64,
    /// `S(ω_c)/S(ω_h)`.
    pub ratio: f64,
}

/// `S(ω_{β_c}(H_J))/S(ω_{β_h}(H_J))` along a family of Hamiltonians.
pub fn entropy_ratio_along<F>(family: F, betas: &InverseTemperaturePair, j_grid: &[f64]) -> Result<Vec<EntropyRatio>>
where
    F: Fn(f64) -> Result<Hamiltonian>,
{
    j_grid
        .iter()
        .map(|&j| {
            let h = family(j)?;
            let entropy_hot = thermo::von_neumann_entropy(&thermo::gibbs(&h, betas.beta_h)?);
            let entropy_cold = thermo::von_neumann_entropy(&thermo::gibbs(&h, betas.beta_c)?);
            if entropy_hot == 0.0 {
                return Err(Error::UndefinedRatio(j));
            }
            Ok(EntropyRatio { j, entropy_cold, entropy_hot, ratio: entropy_cold / entropy_hot })
        })
        .collect()
}

/// Entropy ratios along `J·H`. The ratio tends to `0` for a unique ground
/// state and to `1` for a degenerate one.
pub fn entropy_ratio_limit_check(h: &Hamiltonian, betas: &InverseTemperaturePair, j_grid: &[f64]) -> Result<Vec<EntropyRatio>> {
    let levels = thermo::spectrum(h)?.eigenvalues;
    let spread = levels.last().copied().unwrap_or(0.0) - levels.first().copied().unwrap_or(0.0);
    if !(spread > 0.0) {
        return Err(Error::InvalidParameter("need at least two distinct energy levels".into()));
    }
    entropy_ratio_along(|j| Ok(h.scaled(j)), betas, j_grid)
}
