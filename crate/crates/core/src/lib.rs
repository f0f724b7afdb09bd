//! Logarithmic signatures over elementary abelian 2-groups.

pub mod algebra;
pub mod construct;
pub mod error;
pub mod format;
pub mod mst3;
pub mod periodicity;
pub mod signature;

pub use algebra::{FieldElem, GVec, Subgroup, Transversal};
pub use error::{Error, Result};
pub use signature::{Block, IndexTuple, LogSig, Target};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups-and-fields.md")]
    mod groups_and_fields {}
    #[doc = include_str!("../../../book/src/signatures.md")]
    mod signatures {}
    #[doc = include_str!("../../../book/src/periodicity.md")]
    mod periodicity {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/factorization.md")]
    mod factorization {}
    #[doc = include_str!("../../../book/src/mst3.md")]
    mod mst3 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/file-formats.md")]
    mod file_formats {}
}
