//! Finite periodic chains: transfer-matrix partition functions, exhaustive
//! enumeration and level tables.

use std::collections::BTreeMap;

use serde::Serialize;

use super::chain::{check_beta, check_couplings, Parts};
use crate::hamiltonians::{spin_sums, MAX_TABULATED_SITES};
use crate::linalg::log_sum_exp;
use crate::{Error, Result};

fn check_len(n: usize, limit: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("periodic chain needs N >= 2, got {n}")));
    }
    if n > limit {
        return Err(Error::TooLarge { what: "N", value: n, limit });
    }
    Ok(())
}

/// `log(λ₊^N + λ₋^N)` for a periodic chain of `N` sites.
#[allow(non_snake_case)]
pub fn transfer_matrix_logZ(n: usize, j: f64, h: f64, beta: f64) -> Result<f64> {
    check_len(n, usize::MAX)?;
    check_beta(beta)?;
    check_couplings(j, h)?;
    let p = Parts::new(beta, j, h);
    // |λ₋/λ₊| = (1 − y)/(1 + y), y = min/max of (cosh b, D)
    let log_cosh = p.abs_b + (-2.0 * p.abs_b).exp().ln_1p() - std::f64::consts::LN_2;
    let y = (-(log_cosh - p.log_d).abs()).exp();
    let t = n as f64 * (-2.0 * y.atanh());
    let negative = p.a < 0.0 && n % 2 == 1;
    let tail = if negative { (-t.exp_m1()).ln() } else { t.exp().ln_1p() };
    Ok(n as f64 * p.log_lambda() + tail)
}

/// `log Σ_c e^{−βE(c)}` by summing over all `2^N` configurations.
pub fn enumerated_log_z(n: usize, j: f64, h: f64, beta: f64) -> Result<f64> {
    check_len(n, MAX_TABULATED_SITES)?;
    check_couplings(j, h)?;
    let exponents: Vec<f64> = (0..1usize << n)
        .map(|c| {
            let (m, bonds) = spin_sums(c, n);
            beta * (h * m + j * bonds)
        })
        .collect();
    Ok(log_sum_exp(&exponents))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GroundState {
    pub g0: u64,
    pub e0: f64,
}

/// Ground energy and its multiplicity by exhaustive enumeration.
pub fn ground_state_degeneracy(n: usize, j: f64, h: f64) -> Result<GroundState> {
    check_len(n, MAX_TABULATED_SITES)?;
    check_couplings(j, h)?;
    let tol = 1e-9 * 1f64.max(j.abs()).max(h.abs());
    let mut best = GroundState { g0: 0, e0: f64::INFINITY };
    for c in 0..1usize << n {
        let (m, bonds) = spin_sums(c, n);
        let e = -h * m - j * bonds;
        if e < best.e0 - tol {
            best = GroundState { g0: 1, e0: e };
        } else if (e - best.e0).abs() <= tol {
            best.g0 += 1;
        }
    }
    Ok(best)
}

/// Configurations grouped by magnetisation `M = Σσ` and bond sum `K = Σσσ`;
/// every configuration in a class has energy `−hM − JK`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelTable {
    pub n_sites: usize,
    /// `(M, K, multiplicity)`, sorted by `(M, K)`.
    pub classes: Vec<(i32, i32, u64)>,
}

impl LevelTable {
    pub fn new(n: usize) -> Result<Self> {
        check_len(n, MAX_TABULATED_SITES)?;
        let mut counts: BTreeMap<(i32, i32), u64> = BTreeMap::new();
        for c in 0..1usize << n {
            let (m, bonds) = spin_sums(c, n);
            *counts.entry((m as i32, bonds as i32)).or_default() += 1;
        }
        Ok(Self { n_sites: n, classes: counts.into_iter().map(|((m, k), n)| (m, k, n)).collect() })
    }

    /// Log class weights `log(n_c e^{−βE_c}/Z)`.
    pub fn log_weights(&self, beta: f64, j: f64, h: f64) -> Vec<f64> {
        let raw: Vec<f64> = self
            .classes
            .iter()
            .map(|&(m, k, n)| (n as f64).ln() + beta * (h * m as f64 + j * k as f64))
            .collect();
        let log_z = log_sum_exp(&raw);
        raw.into_iter().map(|x| x - log_z).collect()
    }

    pub fn log_z(&self, beta: f64, j: f64, h: f64) -> f64 {
        let raw: Vec<f64> = self
            .classes
            .iter()
            .map(|&(m, k, n)| (n as f64).ln() + beta * (h * m as f64 + j * k as f64))
            .collect();
        log_sum_exp(&raw)
    }

    /// Entropy of the thermal state, in nats.
    pub fn entropy(&self, beta: f64, j: f64, h: f64) -> f64 {
        let lw = self.log_weights(beta, j, h);
        let s: f64 = self
            .classes
            .iter()
            .zip(&lw)
            .filter(|(_, &l)| l > f64::NEG_INFINITY)
            .map(|(&(_, _, n), &l)| -l.exp() * (l - (n as f64).ln()))
            .sum();
        s.max(0.0)
    }

    pub fn energy(&self, beta: f64, j: f64, h: f64) -> f64 {
        let lw = self.log_weights(beta, j, h);
        self.classes.iter().zip(&lw).map(|(&(m, k, _), &l)| l.exp() * (-h * m as f64 - j * k as f64)).sum()
    }

    /// Relative entropy between two thermal states of the same coupling.
    pub fn relative_entropy(&self, beta_state: f64, h_state: f64, beta_ref: f64, h_ref: f64, j: f64) -> f64 {
        let ls = self.log_weights(beta_state, j, h_state);
        let lr = self.log_weights(beta_ref, j, h_ref);
        let mut d = 0.0;
        for (&a, &b) in ls.iter().zip(&lr) {
            if a == f64::NEG_INFINITY {
                continue;
            }
            if b == f64::NEG_INFINITY {
                return f64::INFINITY;
            }
            d += a.exp() * (a - b);
        }
        d.max(0.0)
    }
}
