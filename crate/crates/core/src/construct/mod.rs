//! Builders: exact and amalgamated transversal signatures, the
//! decomposed-and-reunited construction, and the general aperiodic
//! construction with its stored form and fast factorization.

mod dr;
mod general;
mod transversal;

pub use dr::*;
pub use general::*;
pub use transversal::*;
