//! Controllability of a drift plus local controls via the dimension of the
//! dynamical Lie algebra they generate.
//!
//! Generators are Hermitian matrices `H`; the algebra is the real span of the
//! `iH` closed under commutators. Working with Hermitian representatives the
//! bracket is `i[A, B]`, which is again Hermitian. The identity component is
//! projected out since it only contributes a global phase, so the full
//! algebra `su(d)` has dimension `d² − 1`.

use rand::Rng;
use serde::Serialize;

use crate::linalg::{self, c, CMatrix};
use crate::{Error, Result};

/// Largest Hilbert-space dimension the closure accepts.
pub const MAX_CONTROL_DIM: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    drift: Option<CMatrix>,
    controls: Vec<CMatrix>,
    dim: usize,
}

fn traceless(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let shift = linalg::trace(m) / c(d as f64, 0.0);
    m - CMatrix::identity(d, d) * shift
}

impl GeneratorSet {
    pub fn new(drift: Option<CMatrix>, controls: Vec<CMatrix>) -> Result<Self> {
        let dim = drift.as_ref().or(controls.first()).map(|m| m.nrows()).ok_or_else(|| {
            Error::InvalidParameter("generator set needs a drift or at least one control".into())
        })?;
        if dim > MAX_CONTROL_DIM {
            return Err(Error::TooLarge { what: "Hilbert dimension", value: dim, limit: MAX_CONTROL_DIM });
        }
        for m in drift.iter().chain(&controls) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
            }
            linalg::check_hermitian(m)?;
        }
        Ok(Self { drift: drift.as_ref().map(traceless), controls: controls.iter().map(traceless).collect(), dim })
    }

    pub fn drift(&self) -> Option<&CMatrix> {
        self.drift.as_ref()
    }

    pub fn controls(&self) -> &[CMatrix] {
        &self.controls
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn all(&self) -> impl Iterator<Item = &CMatrix> {
        self.drift.iter().chain(&self.controls)
    }
}

/// Real coordinates of a Hermitian matrix in which the Euclidean inner
/// product equals `Tr(AB)`.
fn vectorise(m: &CMatrix) -> Vec<f64> {
    let d = m.nrows();
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d {
        v.push(m[(i, i)].re);
        for j in i + 1..d {
            v.push(std::f64::consts::SQRT_2 * m[(i, j)].re);
            v.push(std::f64::consts::SQRT_2 * m[(i, j)].im);
        }
    }
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of a real span, grown one candidate at a time.
struct Span {
    vectors: Vec<Vec<f64>>,
    tol: f64,
}

impl Span {
    /// Adds `v` if its component outside the span has norm above `tol`.
    /// Candidates are built from unit-scale operators, so an absolute
    /// threshold keeps rounding noise of near-cancelling brackets out.
    fn insert(&mut self, v: &[f64]) -> bool {
        let mut r = v.to_vec();
        // classical Gram–Schmidt, applied twice
        for _ in 0..2 {
            for b in &self.vectors {
                let p = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = norm(&r);
        if n <= self.tol {
            return false;
        }
        r.iter_mut().for_each(|x| *x /= n);
        self.vectors.push(r);
        true
    }
}

fn unit_scale(m: &CMatrix) -> Option<CMatrix> {
    let scale = linalg::max_abs(m);
    (scale > 0.0).then(|| m * c(1.0 / scale, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LieClosure {
    pub dim: usize,
    /// `false` when the depth limit was reached while the span was still growing.
    pub stabilized: bool,
    pub depth: usize,
}

/// Default commutator depth `2d²`.
pub fn default_max_depth(d: usize) -> usize {
    2 * d * d
}

/// Dimension of the Lie algebra generated by the drift and controls, by
/// breadth-first closure under commutators.
pub fn lie_algebra_dimension(gens: &GeneratorSet, max_depth: usize, tol: f64) -> LieClosure {
    let full = gens.dim * gens.dim - 1;
    let mut span = Span { vectors: Vec::new(), tol };
    let mut elements: Vec<CMatrix> = Vec::new();
    let mut frontier: Vec<CMatrix> = Vec::new();
    for g in gens.all().filter_map(unit_scale) {
        if span.insert(&vectorise(&g)) {
            elements.push(g.clone());
            frontier.push(g);
        }
    }
    let mut depth = 0;
    while !frontier.is_empty() && span.vectors.len() < full {
        if depth >= max_depth {
            return LieClosure { dim: span.vectors.len(), stabilized: false, depth };
        }
        depth += 1;
        let mut next = Vec::new();
        'grow: for a in &frontier {
            let mut k = 0;
            while k < elements.len() {
                let bracket = linalg::commutator(a, &elements[k]) * c(0.0, 1.0);
                if span.insert(&vectorise(&bracket)) {
                    let b = unit_scale(&bracket).expect("inserted brackets are nonzero");
                    elements.push(b.clone());
                    next.push(b);
                    if span.vectors.len() == full {
                        break 'grow;
                    }
                }
                k += 1;
            }
        }
        frontier = next;
    }
    LieClosure { dim: span.vectors.len(), stabilized: true, depth }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ControlClass {
    /// Every unitary is reachable.
    Full,
    /// The controls all commute with each other and with the drift.
    Commuting,
    /// Anything else, with its Lie algebra dimension.
    Intermediate(usize),
}

impl ControlClass {
    pub fn name(&self) -> &'static str {
        match self {
            ControlClass::Full => "FULL",
            ControlClass::Commuting => "COMMUTING",
            ControlClass::Intermediate(_) => "INTERMEDIATE",
        }
    }
}

/// Classifies with the default depth and tolerance; see [`classify_with`].
pub fn classify_unitary_class(gens: &GeneratorSet) -> Result<(ControlClass, LieClosure)> {
    classify_with(gens, default_max_depth(gens.dim), DEFAULT_TOL)
}

/// `Full` iff the closure has dimension `d² − 1`; `Commuting` iff at least
/// one control is present and all pairwise commutators vanish within `tol`.
pub fn classify_with(gens: &GeneratorSet, max_depth: usize, tol: f64) -> Result<(ControlClass, LieClosure)> {
    let closure = lie_algebra_dimension(gens, max_depth, tol);
    if !closure.stabilized {
        return Err(Error::ClosureNotStabilized { dim: closure.dim });
    }
    if closure.dim == gens.dim * gens.dim - 1 {
        return Ok((ControlClass::Full, closure));
    }
    let all: Vec<&CMatrix> = gens.all().collect();
    let scale = all.iter().map(|m| linalg::max_abs(m)).fold(1.0_f64, f64::max);
    let commuting = all
        .iter()
        .enumerate()
        .all(|(i, a)| all[i + 1..].iter().all(|b| linalg::max_abs(&linalg::commutator(a, b)) <= tol * scale * scale));
    if commuting && !gens.controls.is_empty() {
        Ok((ControlClass::Commuting, closure))
    } else {
        Ok((ControlClass::Intermediate(closure.dim), closure))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::X => linalg::pauli_x(),
            Pauli::Y => linalg::pauli_y(),
            Pauli::Z => linalg::pauli_z(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "x" | "X" => Some(Pauli::X),
            "y" | "Y" => Some(Pauli::Y),
            "z" | "Z" => Some(Pauli::Z),
            _ => None,
        }
    }
}

fn check_chain(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain needs at least 2 sites, got {n}")));
    }
    if 1usize << n > MAX_CONTROL_DIM {
        return Err(Error::TooLarge { what: "Hilbert dimension", value: 1 << n, limit: MAX_CONTROL_DIM });
    }
    Ok(())
}

/// Nearest-neighbour bonds of a periodic chain; two sites share one bond.
fn bonds(n: usize) -> Vec<(usize, usize)> {
    if n == 2 {
        vec![(0, 1)]
    } else {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }
}

/// `Σ (XX + YY + ZZ)` over the bonds.
pub fn heisenberg_drift(n: usize) -> Result<CMatrix> {
    check_chain(n)?;
    let d = 1 << n;
    let mut h = CMatrix::zeros(d, d);
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        let pp = linalg::kron(&p.matrix(), &p.matrix());
        for (i, j) in bonds(n) {
            h += linalg::embed_pair(&pp, i, j, n, 2);
        }
    }
    Ok(h)
}

/// `Σ ZZ` over the bonds.
pub fn ising_drift(n: usize) -> Result<CMatrix> {
    check_chain(n)?;
    let d = 1 << n;
    let zz = linalg::kron(&linalg::pauli_z(), &linalg::pauli_z());
    let mut h = CMatrix::zeros(d, d);
    for (i, j) in bonds(n) {
        h += linalg::embed_pair(&zz, i, j, n, 2);
    }
    Ok(h)
}

/// A random Hermitian two-site term on each bond.
pub fn random_two_local_drift<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CMatrix> {
    check_chain(n)?;
    let d = 1 << n;
    let mut h = CMatrix::zeros(d, d);
    for (i, j) in bonds(n) {
        h += linalg::embed_pair(&linalg::random_hermitian(rng, 4), i, j, n, 2);
    }
    Ok(h)
}

/// Pauli controls acting on one site of an `n`-site register.
pub fn site_controls(n: usize, site: usize, paulis: &[Pauli]) -> Result<Vec<CMatrix>> {
    if site >= n {
        return Err(Error::InvalidParameter(format!("site {site} outside a chain of {n}")));
    }
    Ok(paulis.iter().map(|p| linalg::embed(&p.matrix(), site, n, 2)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dim_of(gens: &GeneratorSet) -> usize {
        let closure = lie_algebra_dimension(gens, default_max_depth(gens.dim()), DEFAULT_TOL);
        assert!(closure.stabilized);
        closure.dim
    }

    #[test]
    fn single_spin_su2() {
        let g = GeneratorSet::new(None, vec![linalg::pauli_x(), linalg::pauli_z()]).unwrap();
        assert_eq!(dim_of(&g), 3);
        assert_eq!(classify_unitary_class(&g).unwrap().0, ControlClass::Full);
    }

    #[test]
    fn diagonal_family_is_abelian() {
        let g = GeneratorSet::new(Some(ising_drift(2).unwrap()), site_controls(2, 0, &[Pauli::Z]).unwrap().into_iter()
            .chain(site_controls(2, 1, &[Pauli::Z]).unwrap())
            .collect())
        .unwrap();
        assert_eq!(dim_of(&g), 3);
        assert_eq!(classify_unitary_class(&g).unwrap().0, ControlClass::Commuting);
    }

    #[test]
    fn heisenberg_pair_with_one_controlled_site() {
        let g = GeneratorSet::new(Some(heisenberg_drift(2).unwrap()), site_controls(2, 0, &[Pauli::X, Pauli::Z]).unwrap())
            .unwrap();
        assert_eq!(dim_of(&g), 15);
    }

    #[test]
    fn random_two_local_three_chain_is_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let drift = random_two_local_drift(&mut rng, 3).unwrap();
        let g = GeneratorSet::new(Some(drift), site_controls(3, 0, &[Pauli::X, Pauli::Z]).unwrap()).unwrap();
        let (class, closure) = classify_unitary_class(&g).unwrap();
        assert_eq!(closure.dim, 63);
        assert_eq!(class, ControlClass::Full);
    }

    #[test]
    fn drift_alone_is_one_dimensional() {
        let g = GeneratorSet::new(Some(heisenberg_drift(3).unwrap()), vec![]).unwrap();
        assert_eq!(classify_unitary_class(&g).unwrap().0, ControlClass::Intermediate(1));
    }

    #[test]
    fn identity_components_are_dropped() {
        let g = GeneratorSet::new(None, vec![linalg::identity(2), linalg::pauli_z() + linalg::identity(2)]).unwrap();
        assert_eq!(dim_of(&g), 1);
    }

    #[test]
    fn basis_change_and_monotonicity() {
        let drift = heisenberg_drift(2).unwrap();
        let x0 = linalg::embed(&linalg::pauli_x(), 0, 2, 2);
        let z1 = linalg::embed(&linalg::pauli_z(), 1, 2, 2);
        let base = GeneratorSet::new(Some(drift.clone()), vec![z1.clone()]).unwrap();
        let mixed = GeneratorSet::new(Some(&drift + &z1 * c(2.0, 0.0)), vec![&z1 * c(-0.5, 0.0)]).unwrap();
        assert_eq!(dim_of(&base), dim_of(&mixed));
        let more = GeneratorSet::new(Some(drift), vec![z1, x0]).unwrap();
        assert!(dim_of(&more) >= dim_of(&base));
        assert!(dim_of(&more) <= 15);
    }

    #[test]
    fn depth_limit_reports_partial_result() {
        let g = GeneratorSet::new(Some(heisenberg_drift(2).unwrap()), site_controls(2, 0, &[Pauli::X, Pauli::Z]).unwrap())
            .unwrap();
        let closure = lie_algebra_dimension(&g, 1, DEFAULT_TOL);
        assert!(!closure.stabilized && closure.dim < 15);
        assert!(matches!(classify_with(&g, 1, DEFAULT_TOL), Err(Error::ClosureNotStabilized { .. })));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(GeneratorSet::new(None, vec![]).is_err());
        let mut bad = linalg::pauli_x();
        bad[(0, 1)] = c(2.0, 0.0);
        assert!(matches!(GeneratorSet::new(None, vec![bad]), Err(Error::NotHermitian(_))));
        assert!(GeneratorSet::new(Some(linalg::identity(4)), vec![linalg::pauli_x()]).is_err());
        assert!(heisenberg_drift(7).is_err());
    }
}
