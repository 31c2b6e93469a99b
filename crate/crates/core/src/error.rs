use thiserror::Error;

use crate::perm::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("code entries must be nonnegative, got {0}")]
    NegativeCode(Weight),
    #[error("weight {0} is not in Lambda_{1}")]
    NotInLambda(Weight, usize),
    #[error("permutation {0} does not lie in S_inf^({1})")]
    NotInSInfinity(String, usize),
    #[error("rank mismatch: expected n = {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid index {index} for {what}")]
    InvalidIndex { what: &'static str, index: usize },
    #[error("subspace is not closed under the action of e_{0}_{1}")]
    NotSubmodule(usize, usize),
    #[error("module has no standard filtration (layer at weight {0} fails)")]
    NotStandardlyFiltered(Weight),
    #[error("module violates {0}")]
    InvalidModule(String),
    #[error("length condition l(x t_{p}{q}) = l(x) + 1 fails")]
    LengthCondition { p: usize, q: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
