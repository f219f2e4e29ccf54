//! Exact computer algebra for simply connected Sullivan minimal models over ℚ.
//!
//! The centerpiece is the construction of a generating class of the differential
//! Ext group of a finitely generated elliptic model `(ΛV, d)`, carried out in
//! three stages:
//!
//! 1. a direct generator for the associated homogeneous pure model ([`pure`]),
//! 2. a lift through the word-length filtration of the pure differential ([`lift`]),
//! 3. a lift through the odd-degree filtration back to the full differential ([`lift`]).
//!
//! From the final generator the pipeline ([`invariants`]) reads off the Toomer
//! invariant `e0` (= rational LS category `cat0` for elliptic spaces, and the
//! Gorenstein-type invariant `R0`) together with the spectral-sequence step
//! counts `t` and `l` (`L0 = l0 = t - 1`). Every number is produced by exact
//! rational arithmetic and cross-checked by an independent brute-force linear
//! algebra [`oracle`].
//!
//! Models enter through a small text format ([`dsl`]) and results leave as
//! deterministic JSON ([`invariants::InvariantReport`]); the `sullivan` binary
//! wires both to a command line ([`cli`]).

pub mod basis;
pub mod cli;
pub mod closure;
pub mod dsl;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod gens;
pub mod hom;
pub mod invariants;
pub mod lift;
pub mod linalg;
pub mod model;
pub mod monomial;
pub mod oracle;
pub mod param;
pub mod poly;
pub mod pure;
pub mod scalar;
