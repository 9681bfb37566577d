//! Exact-arithmetic model of finite-dimensional Hilbert spaces and linear
//! contractions.
//!
//! * [`scalars`]: ℚ(i), disk scalars and a binary approximate real type.
//! * [`fcon`]: matrices, contraction certificates, kernels, factorisations, dilations.
//! * [`localisation`]: fractions `f/a` inverting nonzero scalars.
//! * [`semifield`]: positive-scalar semifields, limits and order decisions.
//! * [`reconstruct`]: ψ, the field order and complexification from a positive cone.
//! * [`colimits`]: sequential colimits of epis and of bounded monos.
//! * [`axioms`]: the axiom verifier and its broken models.
//! * [`cli`]: the `fcon` binary.

pub mod axioms;
pub mod cli;
pub mod colimits;
pub mod error;
pub mod fcon;
pub mod json;
pub mod localisation;
pub mod reconstruct;
pub mod report;
pub mod scalars;
pub mod semifield;

pub use error::{Error, Result};
