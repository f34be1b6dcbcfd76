//! Verification of instantiated systems: grounding to a place/transition
//! net, place and transition invariants, and bounded state exploration.

mod explore;
mod ground;
mod linalg;
mod predicate;

pub use explore::{explore, Limits, ReachabilityGraph, TransitionSystem};
pub use ground::{ground, ground_with, GroundedNet, DEFAULT_BINDING_CAP};
pub use linalg::{in_span, left_null_space, null_space, rank};
pub use predicate::{parse_predicate, CmpOp, Predicate};

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::TermError;
use crate::net::NetError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("place `{0}` has no sort and cannot be grounded")]
    UnsortedPlace(String),
    #[error("transition `{transition}` has more than {cap} candidate bindings")]
    BindingCap { transition: String, cap: usize },
    #[error("initial token {value} on `{place}` lies outside the grounded places")]
    InitialOutsideDomain { place: String, value: String },
    #[error("predicate: {0}")]
    Predicate(String),
}

/// Place invariants: a basis of integer vectors `i` with `iᵀC = 0`.
pub fn place_invariants(g: &GroundedNet) -> Vec<Vec<BigInt>> {
    let basis = left_null_space(&g.incidence(), g.places.len());
    debug_assert!(basis.iter().all(|i| g.is_place_invariant(i)));
    basis
}

/// Transition invariants: a basis of integer vectors `j` with `Cj = 0`.
pub fn transition_invariants(g: &GroundedNet) -> Vec<Vec<BigInt>> {
    let basis = null_space(&g.incidence(), g.transitions.len());
    debug_assert!(basis.iter().all(|j| g.is_transition_invariant(j)));
    basis
}
