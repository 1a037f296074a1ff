//! Invariable generation of finite permutation groups.
//!
//! A subset `S` of a finite group `G` invariably generates `G` when every
//! choice of conjugates `s^{g(s)}` still generates `G`; equivalently, no
//! maximal subgroup `M` has a conjugate of every element of `S`. This crate
//! decides that property with replayable certificates, computes the
//! invariable generation number `d_I(G)`, and analyses direct powers `T^m`
//! of nonabelian simple groups.

pub mod catalog;
pub mod chain;
pub mod error;
pub mod group;
pub mod invgen;
pub mod mask;
pub mod perm;
pub mod power;
pub mod structure;
pub mod suite;

pub use error::{Error, Result};
pub use group::{
    coset_action, direct_power, group_from_generators, quotient, DirectPower, ElementTable, GroupHom, PermGroup,
};
pub use mask::ElementMask;
pub use perm::{compose, Permutation};
