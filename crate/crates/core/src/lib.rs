//! Subgroup eigenbases of the Laplace-Beltrami operator on the upper sheet
//! of the two-sheeted hyperboloid, their interbasis expansion coefficients,
//! numerical verification of the associated identities, and the contraction
//! to the Euclidean plane.

pub mod bases;
pub mod cli;
pub mod contraction;
pub mod error;
pub mod geometry;
pub mod interbasis;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
