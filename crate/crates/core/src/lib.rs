//! Enumeration and verification of group-invariant single-hidden-layer ReLU
//! networks, classified by pairs of subgroups `K ≤ H` with `|H:K| ≤ 2`.

pub mod architect;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod linalg;
pub mod morphisms;
pub mod reps;
pub mod scalar;
pub mod table;
pub mod verify;

pub use error::{GsnnError, Result};
pub use num_rational::BigRational;
pub use scalar::{Entry, Scalar, Tolerances};
