//! Thermodynamic-limit densities of the periodic chain
//! `H = −h Σ σ_j − J Σ σ_j σ_{j+1}`.
//!
//! With `a = βJ`, `b = βh` the largest transfer-matrix eigenvalue is
//! `λ₊ = e^a (cosh b + D)`, `D = (sinh² b + e^{−4a})^{1/2}`. Everything below
//! is evaluated through logarithms of `D`, `sinh|b|` and
//! `δ = D − sinh|b| = e^{−4a}/(D + sinh|b|)`, so `|a|, |b|` in the thousands
//! do not overflow.

use serde::Serialize;

use crate::linalg::{log_add_exp, softplus};
use crate::optimize::bisect;
use crate::{Error, Result};

/// A corner field: finite, or `+∞` (fully polarised, zero entropy).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Field {
    Finite(f64),
    PlusInfinity,
}

impl From<f64> for Field {
    fn from(h: f64) -> Self {
        Field::Finite(h)
    }
}

/// Free energy, entropy and internal energy per site.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoDensities {
    pub f: f64,
    pub s: f64,
    pub u: f64,
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    if beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

pub(crate) fn check_couplings(j: f64, h: f64) -> Result<()> {
    if !j.is_finite() || !h.is_finite() {
        return Err(Error::NonFinite("Ising couplings"));
    }
    Ok(())
}

/// `log sinh x` for `x ≥ 0`.
fn log_sinh(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
    }
}

/// `log cosh x` for `x ≥ 0`.
fn log_cosh(x: f64) -> f64 {
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

/// Shared intermediate quantities at one `(β, J, h)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Parts {
    pub a: f64,
    pub b: f64,
    /// `|b|`.
    pub abs_b: f64,
    pub log_sinh_b: f64,
    pub log_d: f64,
    /// `log(cosh|b| + D) − |b| = log(1 + δ e^{−|b|})`.
    pub g: f64,
    /// `δ/D = 1 − sinh|b|/D`.
    pub r: f64,
    /// `1 − ⟨σ_j σ_{j+1}⟩`.
    pub kappa: f64,
}

impl Parts {
    pub fn new(beta: f64, j: f64, h: f64) -> Self {
        let (a, b) = (beta * j, beta * h);
        let abs_b = b.abs();
        let log_sinh_b = log_sinh(abs_b);
        let log_d = 0.5 * log_add_exp(2.0 * log_sinh_b, -4.0 * a);
        let log_delta = -4.0 * a - log_add_exp(log_d, log_sinh_b);
        let g = softplus(log_delta - abs_b);
        let r = (log_delta - log_d).exp();
        let kappa = (std::f64::consts::LN_2 - 4.0 * a - log_d - abs_b - g).exp();
        Self { a, b, abs_b, log_sinh_b, log_d, g, r, kappa }
    }

    /// `log λ₊`.
    pub fn log_lambda(&self) -> f64 {
        self.a + self.abs_b + self.g
    }

    pub fn sign_b(&self) -> f64 {
        if self.b < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// `s = log λ₊ − β ∂_β log λ₊`.
    ///
    /// Where the coupling dominates an anti-ferromagnet (`a < 0`, `|b| < −2a`)
    /// the terms `g` and `aκ` nearly cancel, so the entropy is rewritten with
    /// `v = e^{2a} cosh b`, `u = e^{2a} sinh|b|`, `w = (1 + u²)^{1/2}` as
    /// `log(v + w) + (w P + u Q)/(w(v + w))`, whose leading terms are all positive.
    pub fn entropy(&self) -> f64 {
        let (a, abs_b) = (self.a, self.abs_b);
        if a >= 0.0 || abs_b >= -2.0 * a {
            return (self.g + a * self.kappa + abs_b * self.r).max(0.0);
        }
        let c = -2.0 * a;
        let v = (log_cosh(abs_b) + 2.0 * a).exp();
        let u = (self.log_sinh_b + 2.0 * a).exp();
        let w = u.hypot(1.0);
        let log_vw = (v + u * u / (1.0 + w)).ln_1p();
        let up = (c - abs_b) * (abs_b + 2.0 * a).exp();
        let down = (c + abs_b) * (2.0 * a - abs_b).exp();
        let p = 0.5 * (up + down);
        let q = 0.5 * (up - down);
        (log_vw + (w * p + u * q) / (w * (v + w))).max(0.0)
    }

    pub fn magnetization(&self) -> f64 {
        if self.b == 0.0 {
            0.0
        } else {
            self.sign_b() * (self.log_sinh_b - self.log_d).exp()
        }
    }

    pub fn correlation(&self) -> f64 {
        1.0 - self.kappa
    }
}

fn parts(beta: f64, j: f64, h: f64) -> Result<Parts> {
    check_beta(beta)?;
    check_couplings(j, h)?;
    Ok(Parts::new(beta, j, h))
}

/// `f = −T log λ₊`.
pub fn free_energy_density(beta: f64, j: f64, h: f64) -> Result<f64> {
    Ok(-parts(beta, j, h)?.log_lambda() / beta)
}

/// `s = −∂f/∂T`, in nats per site.
pub fn entropy_density(beta: f64, j: f64, h: f64) -> Result<f64> {
    Ok(parts(beta, j, h)?.entropy())
}

/// `u = −J⟨σσ⟩ − h⟨σ⟩ = f + Ts`.
pub fn internal_energy_density(beta: f64, j: f64, h: f64) -> Result<f64> {
    let p = parts(beta, j, h)?;
    Ok(-j * p.correlation() - h * p.magnetization())
}

/// `m = −∂f/∂h`.
pub fn magnetization(beta: f64, j: f64, h: f64) -> Result<f64> {
    Ok(parts(beta, j, h)?.magnetization())
}

/// `⟨σ_j σ_{j+1}⟩ = −∂f/∂J`.
pub fn nn_correlation(beta: f64, j: f64, h: f64) -> Result<f64> {
    Ok(parts(beta, j, h)?.correlation())
}

pub fn densities(beta: f64, j: f64, h: f64) -> Result<ThermoDensities> {
    let p = parts(beta, j, h)?;
    Ok(ThermoDensities {
        f: -p.log_lambda() / beta,
        s: p.entropy(),
        u: -j * p.correlation() - h * p.magnetization(),
    })
}

/// `∂s/∂h = −β² e^{βJ}(h cosh βh + 2J sinh βh) / ((e^{−2βJ} + e^{2βJ} sinh² βh)^{1/2} (1 + e^{4βJ} sinh² βh))`.
///
/// The denominator equals `e^{5βJ} D³`, which is how it is evaluated.
pub fn entropy_density_dh(beta: f64, j: f64, h: f64) -> Result<f64> {
    let p = parts(beta, j, h)?;
    // h cosh b + 2J sinh b = cosh b · (h + 2J tanh b)
    let z = h + 2.0 * j * p.b.tanh();
    if z == 0.0 {
        return Ok(0.0);
    }
    let magnitude = (log_cosh(p.abs_b) - 4.0 * p.a - 3.0 * p.log_d + z.abs().ln()).exp();
    Ok(-beta * beta * z.signum() * magnitude)
}

/// Entropy-maximising field at fixed `(β, J)`: the positive root of
/// `h = 2|J| tanh(βh)` when `J < 0` and `2|J|β > 1`, otherwise `0`.
pub fn optimal_field(beta: f64, j: f64) -> Result<f64> {
    check_beta(beta)?;
    check_couplings(j, 0.0)?;
    if j >= 0.0 || 2.0 * j.abs() * beta <= 1.0 {
        return Ok(0.0);
    }
    let k = 2.0 * j.abs();
    Ok(bisect(|h| h - k * (beta * h).tanh(), 1e-12, k, 1e-12).unwrap_or(k))
}

/// Relative entropy per site `d(ω_{β_s}(h_s) ‖ ω_{β_r}(h_r))` between two
/// thermal states of chains sharing the coupling `J`.
///
/// `+∞` fields denote the fully polarised state.
pub fn relative_entropy_density(beta_state: f64, beta_ref: f64, j: f64, h_state: Field, h_ref: Field) -> Result<f64> {
    check_beta(beta_state)?;
    check_beta(beta_ref)?;
    check_couplings(j, 0.0)?;
    match (h_state, h_ref) {
        (Field::PlusInfinity, Field::PlusInfinity) => Ok(0.0),
        (Field::Finite(h), Field::PlusInfinity) => {
            check_couplings(j, h)?;
            Ok(f64::INFINITY)
        }
        (Field::PlusInfinity, Field::Finite(h)) => {
            check_couplings(j, h)?;
            // −log of the all-up weight: log λ₊ − a − b
            let p = Parts::new(beta_ref, j, h);
            Ok((p.abs_b - p.b + p.g).max(0.0))
        }
        (Field::Finite(h1), Field::Finite(h2)) => {
            check_couplings(j, h1)?;
            check_couplings(j, h2)?;
            let s = Parts::new(beta_state, j, h1);
            let r = Parts::new(beta_ref, j, h2);
            let sigma = s.sign_b();
            let d = (r.abs_b - sigma * r.b) + (r.g - s.g)
                - sigma * (s.b - r.b) * s.r
                - (s.a - r.a) * s.kappa;
            Ok(d.max(0.0))
        }
    }
}

/// Entropy density of a corner; zero for the polarised `+∞` corner.
pub fn corner_entropy(beta: f64, j: f64, h: Field) -> Result<f64> {
    match h {
        Field::Finite(h) => entropy_density(beta, j, h),
        Field::PlusInfinity => {
            check_beta(beta)?;
            check_couplings(j, 0.0)?;
            Ok(0.0)
        }
    }
}
