//! Dense complex linear algebra helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance in max-norm for exact assemblies.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Unitarity tolerance in max-norm.
pub const UNITARY_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Places `op` on `site` of an `n_sites` register of dimension `local_dim` each.
/// Site 0 is the most significant tensor factor.
pub fn embed(op: &CMatrix, site: usize, n_sites: usize, local_dim: usize) -> CMatrix {
    let left = local_dim.pow(site as u32);
    let right = local_dim.pow((n_sites - site - 1) as u32);
    kron(&kron(&identity(left), op), &identity(right))
}

/// Embeds a two-site operator acting on `(i, j)` with `i != j`; the operator is
/// given in the ordering `site_i ⊗ site_j`.
pub fn embed_pair(op: &CMatrix, i: usize, j: usize, n_sites: usize, local_dim: usize) -> CMatrix {
    assert!(i != j && i < n_sites && j < n_sites);
    let dim = local_dim.pow(n_sites as u32);
    let mut out = CMatrix::zeros(dim, dim);
    let digit = |x: usize, site: usize| (x / local_dim.pow((n_sites - site - 1) as u32)) % local_dim;
    let stride = |site: usize| local_dim.pow((n_sites - site - 1) as u32);
    for col in 0..dim {
        let (ci, cj) = (digit(col, i), digit(col, j));
        let base = col - ci * stride(i) - cj * stride(j);
        for ri in 0..local_dim {
            for rj in 0..local_dim {
                let v = op[(ri * local_dim + rj, ci * local_dim + cj)];
                if v != C64::new(0.0, 0.0) {
                    out[(base + ri * stride(i) + rj * stride(j), col)] += v;
                }
            }
        }
    }
    out
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Max-norm of `m - m†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !all_finite(m) {
        return Err(Error::NonFinite("matrix"));
    }
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Max-norm of `U†U - 1`.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn check_unitary(u: &CMatrix) -> Result<()> {
    let dev = unitary_deviation(u);
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// Commutator `[a, b]`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Samples a matrix with i.i.d. standard complex Gaussian entries.
pub fn random_ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random Hermitian matrix from the Gaussian unitary ensemble.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = random_ginibre(rng, d);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal pushed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = random_ginibre(rng, d).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random probability vector (uniform on the simplex).
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Numerically stable `log(exp(x) + exp(y))`.
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let m = x.max(y);
    m + (-(x - y).abs()).exp().ln_1p()
}

/// Numerically stable `log Σ exp(x_i)`; `-∞` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `log(1 + exp(x))` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn paulis_anticommute() {
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        let xy = &x * &y;
        assert!(max_abs(&(xy - &z * c(0.0, 1.0))) < 1e-15);
        assert!(max_abs(&(&x * &z + &z * &x)) < 1e-15);
    }

    #[test]
    fn embed_pair_matches_kron_for_adjacent_sites() {
        let zz = kron(&pauli_z(), &pauli_x());
        let direct = kron(&kron(&identity(2), &zz), &identity(2));
        assert!(max_abs(&(embed_pair(&zz, 1, 2, 4, 2) - direct)) < 1e-15);
        // reversed order swaps the tensor factors
        let swapped = kron(&kron(&identity(2), &kron(&pauli_x(), &pauli_z())), &identity(2));
        assert!(max_abs(&(embed_pair(&zz, 2, 1, 4, 2) - swapped)) < 1e-15);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for d in [1, 2, 5, 8] {
            assert!(unitary_deviation(&random_unitary(&mut rng, d)) < 1e-12);
        }
    }

    #[test]
    fn log_sum_exp_handles_large_arguments() {
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_add_exp(-1e4, 0.0)).abs() < 1e-300);
        assert!((softplus(800.0) - 800.0).abs() < 1e-12);
    }
}
