//! Mod-2 higher string topology operations of classifying spaces.
//!
//! The crate computes the operations `α^G_k` and `Φ^G(S_n/BΣ_n)` over F2 for
//! `G` an elementary abelian 2-group, a dihedral group of order `4n+2`, a
//! torus, `SU(2)`, or a product of these. Closed forms are cross-checked
//! against independent finite-group and chain-level oracles, and the
//! [`certify`] module turns nonzero operations into certificates of nonzero
//! classes in the homology of holomorphs, automorphism groups and affine
//! groups.

pub mod f2core;
pub mod gradedalg;
pub mod symhomology;
pub mod operations;
pub mod oracle;
pub mod certify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/symmetric.md")]
    mod symmetric {}
    #[doc = include_str!("../../../book/src/operations.md")]
    mod operations {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
