//! Work extraction with interacting spin systems as working media when only
//! the on-site fields can be driven.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Pauli operators, random test ensembles.
//! - [`hamiltonians`]: working-medium Hamiltonians `H = H_ext + H_int`, dense or diagonal.
//! - [`thermo`]: spectra, Gibbs states, entropies and relative entropies.
//! - [`engine`]: protocol execution with work/heat accounting and the efficiency bounds.
//! - [`ising`]: exact and thermodynamic-limit analytics for the periodic 1D Ising chain.
//! - [`control`]: dynamical Lie algebra closure, used to decide which unitary class applies.
//! - [`optimize`]: small deterministic scalar searches (bisection, golden section, grids).
//!
//! Units: `k_B = ħ = 1`, temperatures are `T = 1/β`, entropies are in nats.

pub mod control;
pub mod engine;
pub mod hamiltonians;
pub mod ising;
pub mod linalg;
pub mod optimize;
pub mod thermo;

pub use control::{classify_unitary_class, lie_algebra_dimension, ControlClass, GeneratorSet};
pub use engine::{
    apply_step, carnot_like_work_bound, efficiency_bound, run_cycle, Bath, BoundInputs, CycleReport,
    ProtocolStep, UnitaryChoice,
};
pub use hamiltonians::{compose, ising_diagonal, Hamiltonian, IsingParams};
pub use thermo::{gibbs, log_partition, relative_entropy, relative_entropy_down, von_neumann_entropy};
pub use thermo::{DensityState, InverseTemperaturePair, Spectrum, UnitaryClass};

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("the thermodynamic-limit chain has no finite matrix representation")]
    ThermodynamicLimit,

    #[error("Hamiltonians do not share the fixed interaction term")]
    InteractionMismatch,

    #[error("protocol does not return to its initial Hamiltonian (deviation {0:e})")]
    NotCyclic(f64),

    #[error("protocol has no contact with the hot bath")]
    NoHotContact,

    #[error("efficiency bound undefined: heat denominator {0} is not positive")]
    BoundUndefined(f64),

    #[error("efficiency undefined: heat denominator {0} is not positive")]
    EfficiencyUndefined(f64),

    #[error("entropy ratio undefined: hot-state entropy vanishes at scale {0}")]
    UndefinedRatio(f64),

    #[error("no bound formula for an intermediate unitary class (Lie dimension {0})")]
    UnsupportedUnitaryClass(usize),

    #[error("Lie closure did not stabilise within the depth limit (dimension reached {dim})")]
    ClosureNotStabilized { dim: usize },

    #[error("system too large: {what} = {value} exceeds {limit}")]
    TooLarge { what: &'static str, value: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
