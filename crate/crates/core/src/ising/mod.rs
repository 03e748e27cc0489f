//! The periodic one-dimensional Ising chain, exactly and in the
//! thermodynamic limit.

pub mod chain;
pub mod finite;
pub mod limits;
pub mod protocol;

pub use chain::{
    corner_entropy, densities, entropy_density, entropy_density_dh, free_energy_density, internal_energy_density,
    magnetization, nn_correlation, optimal_field, relative_entropy_density, Field, ThermoDensities,
};
pub use finite::{enumerated_log_z, ground_state_degeneracy, transfer_matrix_logZ, GroundState, LevelTable};
pub use limits::{entropy_ratio_along, entropy_ratio_limit_check, ferro_efficiency_limit, EntropyRatio};
pub use protocol::{
    best_cold_field, efficiency_at_max_work, efficiency_thermo_limit, j_grid, locate_j_star, precision_efficiency,
    protocol_terms, work_density, PrecisionPoint, ProtocolFields, ProtocolTerms, SweepMode, SweepPoint,
    MAX_PRECISION_SITES,
};
