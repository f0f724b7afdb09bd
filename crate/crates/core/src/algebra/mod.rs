//! Bit-level arithmetic: the group `2^n` as `n`-bit vectors under XOR, its
//! subgroups and transversals, and the finite field `F_{2^n}`.

mod field;
mod gvec;
mod subgroup;

pub use field::{frobenius_order, modulus, FieldElem, MAX_DEGREE, MIN_DEGREE};
pub use gvec::{GVec, MAX_DIM};
pub use subgroup::{coset_rep, Subgroup, Transversal};
