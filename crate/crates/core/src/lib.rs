//! Finite-group engine for the group-theoretic side of toric rational towers.
//!
//! Everything is carried as an explicit permutation group with enumerated
//! elements ([`FiniteGroup`]); matrix groups, cocycle groups and quotients are
//! converted into that form, so one arithmetic backs every search.

pub mod abelian;
pub mod arith;
pub mod catalog;
pub mod error;
pub mod extensions;
pub mod fqlin;
pub mod group;
pub mod limits;
pub mod monomial;
pub mod perm;
pub mod products;
pub mod special;
pub mod tower;

pub use error::{GroupError, Result};
pub use group::{close_group, FiniteGroup, GroupHom, GroupRef, Subgroup};
pub use limits::Limits;
pub use perm::Permutation;
