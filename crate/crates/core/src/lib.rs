//! Weak logics and their algebraic semantics at desk scale.
//!
//! The crate is `no_std` and needs only `alloc`. It covers formulas and
//! substitutions ([`syntax`]), finite algebras with operation tables
//! ([`algebra`]), expanded algebras carrying a core predicate
//! ([`expanded`]), Heyting algebras of upsets and Medvedev frames
//! ([`heyting`]), team-semantics oracles for inquisitive and dependence
//! logics ([`team`]), Hilbert systems and normal forms ([`proofsys`]),
//! algebraizability checks ([`algz`]) and bimatrices ([`bimatrix`]).
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod algz;
pub mod bimatrix;
pub mod error;
pub mod expanded;
pub mod heyting;
pub mod proofsys;
pub mod syntax;
pub mod team;

pub use error::{Error, Result};
