//! Structural data behind the invariable-generation criteria: conjugacy
//! classes, the subgroup lattice with its maximal subgroups and Frattini
//! subgroup, and explicitly enumerated automorphism groups.

mod aut;
mod classes;
mod lattice;

pub use aut::{automorphism_group, is_automorphism, tuple_orbit_canonical, AutGroup, DEFAULT_AUT_BUDGET};
pub use classes::{center, conjugacy_classes, derived_subgroup, normal_closure, ConjClass, ConjClassTable};
pub use lattice::{all_subgroups, frattini, SubgroupLattice, SubgroupRecord, DEFAULT_LATTICE_BUDGET};
