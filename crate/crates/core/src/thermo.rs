//! Spectral representation of states and the thermodynamic functionals built on it:
//! Gibbs states, partition functions, von Neumann entropy, relative entropy and
//! its ordered variant `D↓`.
//!
//! States are stored as populations plus an orthonormal basis. Diagonal
//! Hamiltonians keep a permutation basis so that thermal states of classical
//! chains never materialise a `2^N × 2^N` matrix.
//!
//! An infinite relative entropy (support violation) is returned as
//! `f64::INFINITY`, not as an error.

use std::cmp::Ordering;

use serde::Serialize;

use crate::hamiltonians::{Hamiltonian, Operator};
use crate::linalg::{self, CMatrix, C64};
use crate::{Error, Result};

/// Populations below this are rounding noise when a state is built from a matrix.
pub const ZERO_POPULATION_TOL: f64 = 1e-14;
const NORMALIZATION_TOL: f64 = 1e-12;
/// Overlap weight below which a zero-population direction is not counted as support.
const SUPPORT_WEIGHT_TOL: f64 = 1e-14;

/// Orthonormal basis stored column-wise.
#[derive(Clone, Debug, PartialEq)]
pub enum Basis {
    /// Column `k` is the computational basis vector `e_{perm[k]}`.
    Permutation(Vec<usize>),
    Dense(CMatrix),
}

impl Basis {
    pub fn identity(d: usize) -> Self {
        Basis::Permutation((0..d).collect())
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Permutation(p) => p.len(),
            Basis::Dense(m) => m.nrows(),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Basis::Permutation(p) => {
                let d = p.len();
                let mut m = CMatrix::zeros(d, d);
                for (k, &i) in p.iter().enumerate() {
                    m[(i, k)] = C64::new(1.0, 0.0);
                }
                m
            }
            Basis::Dense(m) => m.clone(),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            Basis::Permutation(p) => {
                let mut seen = vec![false; p.len()];
                for &i in p {
                    if i >= p.len() || std::mem::replace(&mut seen[i], true) {
                        return Err(Error::InvalidState("permutation basis is not a permutation".into()));
                    }
                }
                Ok(())
            }
            Basis::Dense(m) => linalg::check_unitary(m),
        }
    }
}

/// Ascending eigenvalues with their eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Basis,
}

/// Stable ascending order of `values`; ties keep their original index order.
fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigendecompose(h: &CMatrix) -> Result<Spectrum> {
    linalg::check_hermitian(h)?;
    let eig = h.clone().symmetric_eigen();
    let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = ascending_order(&raw);
    let d = raw.len();
    let mut basis = CMatrix::zeros(d, d);
    for (k, &i) in order.iter().enumerate() {
        basis.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok(Spectrum { eigenvalues: order.iter().map(|&i| raw[i]).collect(), eigenvectors: Basis::Dense(basis) })
}

/// Spectrum of a working-medium Hamiltonian; diagonal ones are only sorted.
pub fn spectrum(h: &Hamiltonian) -> Result<Spectrum> {
    match h.operator() {
        Operator::Diagonal(e) => {
            let order = ascending_order(e);
            Ok(Spectrum { eigenvalues: order.iter().map(|&i| e[i]).collect(), eigenvectors: Basis::Permutation(order) })
        }
        Operator::Dense(m) => eigendecompose(m),
    }
}

/// Where a state came from, when it is a thermal state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub beta: f64,
    pub hamiltonian: Option<String>,
}

/// Mixed state `ρ = Σ_k p_k |b_k⟩⟨b_k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    populations: Vec<f64>,
    basis: Basis,
    provenance: Option<Provenance>,
}

impl DensityState {
    pub fn new(populations: Vec<f64>, basis: Basis) -> Result<Self> {
        if populations.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: populations.len() });
        }
        if populations.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("populations"));
        }
        if let Some(p) = populations.iter().find(|&&p| p < 0.0) {
            return Err(Error::InvalidState(format!("negative population {p}")));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!("populations sum to {total}")));
        }
        basis.check()?;
        Ok(Self { populations, basis, provenance: None })
    }

    /// State diagonal in the computational basis.
    pub fn diagonal(populations: Vec<f64>) -> Result<Self> {
        let d = populations.len();
        Self::new(populations, Basis::identity(d))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { populations: vec![1.0 / d as f64; d], basis: Basis::identity(d), provenance: None }
    }

    /// Builds a state from a density matrix; eigenvalues within
    /// [`ZERO_POPULATION_TOL`] of zero are set to zero.
    pub fn from_matrix(rho: &CMatrix) -> Result<Self> {
        let spec = eigendecompose(rho)?;
        let mut pops = spec.eigenvalues;
        for p in pops.iter_mut() {
            if p.abs() < ZERO_POPULATION_TOL {
                *p = 0.0;
            }
        }
        let total: f64 = pops.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {total} != 1")));
        }
        pops.iter_mut().for_each(|p| *p /= total);
        Self::new(pops, spec.eigenvectors)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.populations.len()
    }

    /// Diagonal in the computational basis.
    pub fn is_classical(&self) -> bool {
        matches!(self.basis, Basis::Permutation(_))
    }

    pub fn to_matrix(&self) -> CMatrix {
        let b = self.basis.to_dense();
        let mut scaled = b.clone();
        for (k, &p) in self.populations.iter().enumerate() {
            scaled.column_mut(k).scale_mut(p);
        }
        scaled * b.adjoint()
    }

    /// `Tr(ρ H)`.
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: h.dim() });
        }
        let p = &self.populations;
        let value = match (&self.basis, h.operator()) {
            (Basis::Permutation(perm), Operator::Diagonal(e)) => perm.iter().zip(p).map(|(&i, &pk)| pk * e[i]).sum(),
            (Basis::Permutation(perm), Operator::Dense(m)) => perm.iter().zip(p).map(|(&i, &pk)| pk * m[(i, i)].re).sum(),
            (Basis::Dense(b), Operator::Diagonal(e)) => (0..self.dim())
                .map(|k| p[k] * b.column(k).iter().zip(e).map(|(z, ei)| z.norm_sqr() * ei).sum::<f64>())
                .sum(),
            (Basis::Dense(b), Operator::Dense(m)) => {
                let hb = m * b;
                (0..self.dim()).map(|k| p[k] * b.column(k).dotc(&hb.column(k)).re).sum()
            }
        };
        Ok(value)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.nrows() });
        }
        linalg::check_unitary(u)?;
        let basis = match &self.basis {
            Basis::Dense(b) => u * b,
            Basis::Permutation(perm) => {
                let mut m = CMatrix::zeros(self.dim(), self.dim());
                for (k, &i) in perm.iter().enumerate() {
                    m.set_column(k, &u.column(i));
                }
                m
            }
        };
        Ok(Self { populations: self.populations.clone(), basis: Basis::Dense(basis), provenance: None })
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        if let (Basis::Permutation(a), Basis::Permutation(b)) = (&self.basis, &other.basis) {
            let mut diff = vec![0.0; self.dim()];
            for (k, &i) in a.iter().enumerate() {
                diff[i] += self.populations[k];
            }
            for (k, &i) in b.iter().enumerate() {
                diff[i] -= other.populations[k];
            }
            return Ok(0.5 * diff.iter().map(|x| x.abs()).sum::<f64>());
        }
        let delta = self.to_matrix() - other.to_matrix();
        let delta = (&delta + delta.adjoint()) * C64::new(0.5, 0.0);
        Ok(0.5 * delta.symmetric_eigenvalues().iter().map(|x| x.abs()).sum::<f64>())
    }
}

/// Hot and cold bath inverse temperatures, `0 < β_h < β_c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InverseTemperaturePair {
    pub beta_h: f64,
    pub beta_c: f64,
}

impl InverseTemperaturePair {
    pub fn new(beta_h: f64, beta_c: f64) -> Result<Self> {
        if !beta_h.is_finite() || !beta_c.is_finite() {
            return Err(Error::NonFinite("inverse temperature"));
        }
        if !(beta_h > 0.0 && beta_h < beta_c) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < beta_h < beta_c, got beta_h = {beta_h}, beta_c = {beta_c}"
            )));
        }
        Ok(Self { beta_h, beta_c })
    }

    pub fn t_hot(&self) -> f64 {
        1.0 / self.beta_h
    }

    pub fn t_cold(&self) -> f64 {
        1.0 / self.beta_c
    }

    /// `1 − T_c/T_h`.
    pub fn carnot(&self) -> f64 {
        1.0 - self.beta_h / self.beta_c
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    if beta < 0.0 {
        return Err(Error::InvalidParameter(format!("beta must be non-negative, got {beta}")));
    }
    Ok(())
}

/// Thermal state `exp(−βH)/Z`, evaluated with energies shifted by the ground energy.
pub fn gibbs(h: &Hamiltonian, beta: f64) -> Result<DensityState> {
    check_beta(beta)?;
    let spec = spectrum(h)?;
    let e0 = spec.eigenvalues[0];
    let weights: Vec<f64> = spec.eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let populations = weights.into_iter().map(|w| w / z).collect();
    Ok(DensityState {
        populations,
        basis: spec.eigenvectors,
        provenance: Some(Provenance { beta, hamiltonian: h.label().map(str::to_owned) }),
    })
}

/// `log Tr exp(−βH)` via log-sum-exp.
pub fn log_partition(h: &Hamiltonian, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let spec = spectrum(h)?;
    let exponents: Vec<f64> = spec.eigenvalues.iter().map(|e| -beta * e).collect();
    Ok(linalg::log_sum_exp(&exponents))
}

/// `S(ρ) = −Σ p log p`, in nats.
pub fn von_neumann_entropy(rho: &DensityState) -> f64 {
    -rho.populations.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

fn same_dim(rho: &DensityState, sigma: &DensityState) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    Ok(())
}

/// `D(ρ‖σ) = Tr ρ(log ρ − log σ)`; `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    same_dim(rho, sigma)?;
    let neg_entropy: f64 = rho.populations.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum();
    let mut cross = 0.0;
    match (&rho.basis, &sigma.basis) {
        (Basis::Permutation(a), Basis::Permutation(b)) => {
            let mut sigma_at = vec![0.0; b.len()];
            for (k, &i) in b.iter().enumerate() {
                sigma_at[i] = sigma.populations[k];
            }
            for (k, &p) in rho.populations.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let q = sigma_at[a[k]];
                if q == 0.0 {
                    return Ok(f64::INFINITY);
                }
                cross += p * q.ln();
            }
        }
        _ => {
            let overlap = rho.basis.to_dense().adjoint() * sigma.basis.to_dense();
            for (i, &p) in rho.populations.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (j, &q) in sigma.populations.iter().enumerate() {
                    let w = p * overlap[(i, j)].norm_sqr();
                    if q == 0.0 {
                        if w > SUPPORT_WEIGHT_TOL {
                            return Ok(f64::INFINITY);
                        }
                        continue;
                    }
                    cross += w * q.ln();
                }
            }
        }
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// Populations sorted non-increasing; ties keep their original order.
fn sorted_descending(p: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].partial_cmp(&p[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    order.into_iter().map(|i| p[i]).collect()
}

/// `D↓(ρ‖σ) = Σ_m ρ_m log(ρ_m/σ_m)` with both spectra sorted non-increasing.
/// This is the minimum of `D(UρU†‖σ)` over all unitaries.
pub fn relative_entropy_down(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    same_dim(rho, sigma)?;
    let (p, q) = (sorted_descending(&rho.populations), sorted_descending(&sigma.populations));
    let mut total = 0.0;
    for (&pm, &qm) in p.iter().zip(&q) {
        if pm == 0.0 {
            continue;
        }
        if qm == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += pm * (pm / qm).ln();
    }
    Ok(total.max(0.0))
}

/// Unitaries reachable by the driving.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnitaryClass {
    /// Every global unitary.
    Full,
    /// Only unitaries commuting with all Hamiltonians involved; the minimiser is the identity.
    Commuting,
}

/// `min_U D(UρU†‖σ)` over a unitary class.
pub fn min_relative_entropy_over_unitaries(rho: &DensityState, sigma: &DensityState, class: UnitaryClass) -> Result<f64> {
    match class {
        UnitaryClass::Full => relative_entropy_down(rho, sigma),
        UnitaryClass::Commuting => relative_entropy(rho, sigma),
    }
}
