//! Exact entangling power of permutation operators on `C^d (x) C^d`.
//!
//! A permutation of the grid `[d] x [d]` acts on product basis states as
//! `P |i>|j> = |k_ij>|l_ij>`. Its entangling power is computed exactly from
//! rectangle counts in `K` and `L` ([`entangle`]), cross-checked against a
//! dense linear-entropy oracle ([`oracle`]), maximized by superimposed
//! orthogonal Latin squares ([`latin`]), and tabulated over all permutations
//! ([`classify`]).

// `!(x <= tol)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtins;
pub mod classify;
pub mod entangle;
pub mod error;
pub mod latin;
pub mod oracle;
pub mod perm;
pub mod rational;
pub mod tolerance;
pub mod verify;

pub use entangle::{entangling_power, PowerReport};
pub use error::{Error, Result};
pub use perm::{BiPerm, FlatPerm};
pub use rational::Rational;
