//! Vacuum expectations of creation/annihilation words on the `(q,2)`-Fock
//! space, computed two ways: by direct operator simulation ([`fock`]) and
//! as a `q^{c(θ)}`-weighted sum over a distinguished family of pair
//! partitions ([`pset`]). The [`verify`] module cross-checks the two routes
//! and the supporting pair-partition identities exhaustively at small size.

pub mod error;
pub mod fock;
pub mod norm;
pub mod partition;
pub mod poly;
pub mod pset;
pub mod sign;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{
    apply_annihilation, apply_creation, apply_word, lambda_inner, vacuum_expectation,
    vacuum_expectation_operator, vacuum_expectation_with_labels, ElementaryTensor, FockVector,
    GramSource, NumericGram, SymbolicGram,
};
pub use partition::{
    enumerate_pp, enumerate_pp_bounded, glue, ncpp_counterpart, pp_with_sign,
    pp_with_sign_by_filter, PairPartition,
};
pub use poly::{Monomial, MultiPoly};
pub use pset::{build_p_set, PSet};
pub use sign::{
    enumerate_positive_signs, enumerate_positive_signs_bounded, Label, Sign, SignClass,
    SignSequence,
};
