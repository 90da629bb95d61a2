//! Exact-arithmetic toolkit for strongly homotopy hom-associative (HA-infinity)
//! and hom-Lie (HL-infinity) algebras on finite-dimensional graded vector
//! spaces: identity verification, coderivation calculus, Hochschild and
//! Chevalley-Eilenberg cohomology, homotopy transfer, skew-symmetrization,
//! 2-term and categorified structures, and formal deformations.
//!
//! All arithmetic is over arbitrary-precision rationals; every check is exact.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classical;
pub mod coder;
pub mod error;
pub mod graded;
pub mod hainf;
pub mod hlinf;
pub mod hochschild;
pub mod linalg;
pub mod multiop;
pub mod rational;
pub mod transfer;
pub mod twoterm;

pub mod fixtures;

pub use error::{Error, Result};
pub use rational::Rat;
