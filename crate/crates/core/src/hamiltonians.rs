//! Working-medium Hamiltonians `H = H_ext + H_int`.
//!
//! Only the external (on-site) part may change during a protocol; the
//! interaction is carried along with every [`Hamiltonian`] so that the engine
//! can refuse sequences that would silently modify it.

use serde::Serialize;

use crate::linalg::{self, CMatrix, C64};
use crate::{Error, Result};

/// Matrix representation of an energy operator.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    /// Diagonal in the computational basis.
    Diagonal(Vec<f64>),
    Dense(CMatrix),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Diagonal(e) => e.len(),
            Operator::Dense(m) => m.nrows(),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Operator::Diagonal(e) => {
                CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(e.len(), e.iter().map(|&x| C64::new(x, 0.0))))
            }
            Operator::Dense(m) => m.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Operator::Diagonal(e) => e.iter().fold(0.0_f64, |a, x| a.max(x.abs())),
            Operator::Dense(m) => linalg::max_abs(m),
        }
    }

    /// Max-norm distance between two operators of equal dimension.
    pub fn distance(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => {
                a.iter().zip(b).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
            }
            _ => linalg::max_abs(&(self.to_dense() - other.to_dense())),
        }
    }

    fn scaled(&self, f: f64) -> Operator {
        match self {
            Operator::Diagonal(e) => Operator::Diagonal(e.iter().map(|x| x * f).collect()),
            Operator::Dense(m) => Operator::Dense(m * C64::new(f, 0.0)),
        }
    }

    /// `(1 - t)·self + t·other`.
    fn lerp(&self, other: &Operator, t: f64) -> Operator {
        match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => {
                Operator::Diagonal(a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect())
            }
            _ => Operator::Dense(self.to_dense() * C64::new(1.0 - t, 0.0) + other.to_dense() * C64::new(t, 0.0)),
        }
    }
}

/// A working-medium Hamiltonian, optionally tagged with its interaction term.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    operator: Operator,
    interaction: Option<Operator>,
    label: Option<String>,
}

/// Tolerance used when comparing interaction terms and cyclic returns.
pub const MATCH_TOL: f64 = 1e-10;

impl Hamiltonian {
    pub fn dense(m: CMatrix) -> Result<Self> {
        linalg::check_hermitian(&m)?;
        Ok(Self { operator: Operator::Dense(m), interaction: None, label: None })
    }

    pub fn diagonal(energies: Vec<f64>) -> Result<Self> {
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("energies"));
        }
        if energies.is_empty() {
            return Err(Error::InvalidParameter("empty energy table".into()));
        }
        Ok(Self { operator: Operator::Diagonal(energies), interaction: None, label: None })
    }

    /// Attaches the fixed interaction term this Hamiltonian contains.
    pub fn with_interaction(mut self, interaction: Operator) -> Result<Self> {
        if interaction.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: interaction.dim() });
        }
        self.interaction = Some(interaction);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn interaction(&self) -> Option<&Operator> {
        self.interaction.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.operator, Operator::Diagonal(_))
    }

    /// Energy table when the Hamiltonian is diagonal.
    pub fn energies(&self) -> Option<&[f64]> {
        match &self.operator {
            Operator::Diagonal(e) => Some(e),
            Operator::Dense(_) => None,
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        self.operator.to_dense()
    }

    /// True unless both carry interaction terms that differ.
    pub fn shares_interaction(&self, other: &Hamiltonian) -> bool {
        match (&self.interaction, &other.interaction) {
            (Some(a), Some(b)) => a.distance(b) <= MATCH_TOL * a.max_abs().max(1.0),
            _ => true,
        }
    }

    /// Max-norm distance between the full operators.
    pub fn distance(&self, other: &Hamiltonian) -> f64 {
        self.operator.distance(&other.operator)
    }

    /// `c·H`, interaction included.
    pub fn scaled(&self, factor: f64) -> Hamiltonian {
        Hamiltonian {
            operator: self.operator.scaled(factor),
            interaction: self.interaction.as_ref().map(|i| i.scaled(factor)),
            label: None,
        }
    }

    /// Straight-line interpolation `(1 - t)·self + t·other` between two
    /// Hamiltonians that share their interaction.
    pub fn lerp(&self, other: &Hamiltonian, t: f64) -> Result<Hamiltonian> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        if !self.shares_interaction(other) {
            return Err(Error::InteractionMismatch);
        }
        Ok(Hamiltonian {
            operator: self.operator.lerp(&other.operator, t),
            interaction: self.interaction.clone().or_else(|| other.interaction.clone()),
            label: None,
        })
    }
}

/// An on-site term `h^(j)` acting on a single site.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalField {
    pub site: usize,
    pub operator: CMatrix,
}

impl LocalField {
    pub fn new(site: usize, operator: CMatrix) -> Result<Self> {
        linalg::check_hermitian(&operator)?;
        Ok(Self { site, operator })
    }
}

/// `H = Σ_j embed(h^(j)) + H_int` assembled as a dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeHamiltonian {
    pub n_sites: usize,
    pub local_dim: usize,
    pub external: Vec<LocalField>,
    pub interaction: CMatrix,
    pub dense: CMatrix,
}

impl From<CompositeHamiltonian> for Hamiltonian {
    fn from(h: CompositeHamiltonian) -> Self {
        Hamiltonian {
            operator: Operator::Dense(h.dense),
            interaction: Some(Operator::Dense(h.interaction)),
            label: None,
        }
    }
}

/// Sums the embedded local fields and the fixed interaction.
///
/// The local dimension is taken from the fields (2 when there are none) and
/// the number of sites from the interaction's dimension.
pub fn compose(locals: Vec<LocalField>, interaction: CMatrix) -> Result<CompositeHamiltonian> {
    linalg::check_hermitian(&interaction)?;
    let local_dim = locals.first().map_or(2, |f| f.operator.nrows());
    if local_dim < 2 {
        return Err(Error::InvalidParameter("local dimension must be at least 2".into()));
    }
    for f in &locals {
        if f.operator.nrows() != local_dim {
            return Err(Error::DimensionMismatch { expected: local_dim, got: f.operator.nrows() });
        }
        linalg::check_hermitian(&f.operator)?;
    }
    let dim = interaction.nrows();
    let mut n_sites = 0;
    let mut acc = 1;
    while acc < dim {
        acc *= local_dim;
        n_sites += 1;
    }
    if acc != dim || n_sites == 0 {
        return Err(Error::DimensionMismatch { expected: acc.max(local_dim), got: dim });
    }
    let mut dense = interaction.clone();
    for f in &locals {
        if f.site >= n_sites {
            return Err(Error::InvalidParameter(format!("site {} outside a {}-site register", f.site, n_sites)));
        }
        dense += linalg::embed(&f.operator, f.site, n_sites, local_dim);
    }
    Ok(CompositeHamiltonian { n_sites, local_dim, external: locals, interaction, dense })
}

/// Length of a periodic chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ChainLength {
    Finite(usize),
    ThermodynamicLimit,
}

/// Periodic nearest-neighbour Ising chain
/// `H = -h Σ_j σ_z^(j) - J Σ_j σ_z^(j) σ_z^(j+1)`, `σ^(N+1) = σ^(1)`.
/// `J > 0` is ferromagnetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsingParams {
    pub n_sites: ChainLength,
    pub coupling_j: f64,
    pub field_h: f64,
}

impl IsingParams {
    pub fn finite(n_sites: usize, coupling_j: f64, field_h: f64) -> Result<Self> {
        let p = Self { n_sites: ChainLength::Finite(n_sites), coupling_j, field_h };
        p.validate()?;
        Ok(p)
    }

    pub fn thermodynamic_limit(coupling_j: f64, field_h: f64) -> Self {
        Self { n_sites: ChainLength::ThermodynamicLimit, coupling_j, field_h }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.coupling_j.is_finite() || !self.field_h.is_finite() {
            return Err(Error::NonFinite("Ising couplings"));
        }
        if let ChainLength::Finite(n) = self.n_sites {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("periodic chain needs N >= 2, got {n}")));
            }
        }
        Ok(())
    }

    fn finite_len(&self) -> Result<usize> {
        self.validate()?;
        match self.n_sites {
            ChainLength::Finite(n) => Ok(n),
            ChainLength::ThermodynamicLimit => Err(Error::ThermodynamicLimit),
        }
    }
}

/// Largest chain the dense or tabulated constructors accept.
pub const MAX_TABULATED_SITES: usize = 24;

/// `σ^(site)` of a configuration bitmask; bit set means spin down.
#[inline]
pub fn spin(config: usize, site: usize) -> f64 {
    if (config >> site) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Sum of spins and sum of periodic nearest-neighbour products of a configuration.
#[inline]
pub fn spin_sums(config: usize, n_sites: usize) -> (f64, f64) {
    let mut m = 0.0;
    let mut bonds = 0.0;
    for j in 0..n_sites {
        let s = spin(config, j);
        m += s;
        bonds += s * spin(config, (j + 1) % n_sites);
    }
    (m, bonds)
}

/// Classical energy table of an Ising chain.
///
/// Configuration 0 is the all-up state.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalHamiltonian {
    pub n_sites: usize,
    pub energies: Vec<f64>,
    interaction: Vec<f64>,
}

impl DiagonalHamiltonian {
    /// Energies of the `-J Σ σσ` part alone.
    pub fn interaction_energies(&self) -> &[f64] {
        &self.interaction
    }
}

impl From<DiagonalHamiltonian> for Hamiltonian {
    fn from(h: DiagonalHamiltonian) -> Self {
        Hamiltonian {
            operator: Operator::Diagonal(h.energies),
            interaction: Some(Operator::Diagonal(h.interaction)),
            label: None,
        }
    }
}

pub fn ising_diagonal(params: &IsingParams) -> Result<DiagonalHamiltonian> {
    let n = params.finite_len()?;
    if n > MAX_TABULATED_SITES {
        return Err(Error::TooLarge { what: "N", value: n, limit: MAX_TABULATED_SITES });
    }
    let (j, h) = (params.coupling_j, params.field_h);
    let dim = 1usize << n;
    let mut energies = Vec::with_capacity(dim);
    let mut interaction = Vec::with_capacity(dim);
    for config in 0..dim {
        let (m, bonds) = spin_sums(config, n);
        interaction.push(-j * bonds);
        energies.push(-h * m - j * bonds);
    }
    Ok(DiagonalHamiltonian { n_sites: n, energies, interaction })
}

/// Convenience: the diagonal Ising Hamiltonian as a [`Hamiltonian`].
pub fn ising_hamiltonian(n_sites: usize, coupling_j: f64, field_h: f64) -> Result<Hamiltonian> {
    Ok(ising_diagonal(&IsingParams::finite(n_sites, coupling_j, field_h)?)?.into())
}

/// The same chain assembled densely from `-h σ_z` fields and the `-J σ_z σ_z` bonds.
pub fn ising_composite(params: &IsingParams) -> Result<CompositeHamiltonian> {
    let n = params.finite_len()?;
    if n > 12 {
        return Err(Error::TooLarge { what: "N", value: n, limit: 12 });
    }
    let (j, h) = (params.coupling_j, params.field_h);
    let z = linalg::pauli_z();
    let locals = (0..n)
        .map(|site| LocalField::new(site, &z * C64::new(-h, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let zz = linalg::kron(&z, &z);
    let dim = 1usize << n;
    let mut interaction = CMatrix::zeros(dim, dim);
    for site in 0..n {
        interaction += linalg::embed_pair(&zz, site, (site + 1) % n, n, 2) * C64::new(-j, 0.0);
    }
    compose(locals, interaction)
}
