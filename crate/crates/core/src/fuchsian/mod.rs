//! Cocompact Fuchsian groups and group-invariant potentials.

mod group;
mod potential;

pub use group::{
    build_octagon_group, cyclic_test_group, FuchsianGroup, FundamentalDomain, Word,
    DEFAULT_ORBIT_BUDGET, DEFAULT_REDUCTION_BUDGET, RELATOR_TOLERANCE,
};
pub use potential::{EquivariantPotential, PotentialSpec};
