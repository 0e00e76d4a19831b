//! The infinite-index direction: `ψ` into the `c`-nilpotent wreath
//! product of a free nilpotent group with `G = F/L`, and witnesses that a
//! given finite `Y` does not normally generate `[M, N]`.
//!
//! Every backend computes with some quotient `G′ = F/L′` of `F` with
//! `L ⊆ L′`. All claims are then relative to `L′`. A witness stays sound
//! for `L`, because `omega ∈ [M, N]` by construction and `omega ∉ ncl(Y)` is
//! shown through a homomorphism of `F`.

mod oracle;
mod psi;
mod witness;

use thiserror::Error;

pub use oracle::{Abelianized, AnyElem, AnyOracle, Enumeration, FiniteIndex, FreeImage, GroupOracle, Verdict};
pub use psi::{
    dedup, find_shift, gamma_membership, lemma2_certify, psi_expand, tail_trivial, z_from, BiLetter,
    Lemma2Report, Shift, VarTable, WreathImage, ZSet,
};
pub use witness::{
    psi_class, recheck, theorem1_witness, CheckItem, RecheckReport, Side, Source, Witness, WitnessConfig,
    WitnessFile,
};

use crate::coset::CosetError;
use crate::nilpotent::NilpotentError;
use crate::words::WordError;

#[derive(Debug, Error)]
pub enum WreathError {
    #[error("backend: {0}")]
    Backend(String),
    #[error("backend is not exact")]
    NotExact,
    #[error("backend answered `unknown` to an equality query")]
    OracleUnknown,
    #[error("Y[{index}] is not in γ_{{c+1}}(L) for c = {c}")]
    NotInGamma { index: usize, c: usize },
    #[error("empty support: a factor has trivial ψ-tail")]
    EmptySupport,
    #[error("no separating shift among the first {budget} elements")]
    BudgetExhausted { budget: usize },
    #[error("backend group is finite; witnesses need an infinite quotient")]
    FiniteGroup,
    #[error("`{0}` does not map to the identity of G")]
    NotInKernel(String),
    #[error("every word on the {0:?} side has trivial ψ-tail at class c")]
    TrivialSide(Side),
    #[error("hypothesis check failed: {0}")]
    Hypothesis(String),
    #[error("backend cannot produce a preimage word")]
    NoPreimage,
    #[error("presentation: {0}")]
    Presentation(String),
    #[error(transparent)]
    Class(#[from] NilpotentError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Word(#[from] WordError),
}
