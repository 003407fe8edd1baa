//! Homology of dihedral powers of spheres and bouquets over GF(2), closed-form
//! lower bounds for periodic billiard trajectories, and a numerical orbit finder.

pub mod billiards;
pub mod bounds;
pub mod cells;
pub mod chain;
pub mod dold;
pub mod error;
pub mod gf2;
pub mod power;
pub mod reproduce;

pub use chain::{direct_sum, BettiVector, ChainComplex, ChainComplexDoc, Violation};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, KernelBasis};
