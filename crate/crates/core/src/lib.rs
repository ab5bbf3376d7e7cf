//! Exact-arithmetic toolkit for finite real reflection groups: root systems
//! over ℚ and ℚ(√5), circuits (minimal linear dependences) of roots and their
//! acuteness-obtuseness graphs, signed-graph encodings for the classical
//! types, orbit classification of bases and full circuits, and the Hurwitz
//! action on reflection factorizations (orbit search, standard form, weight
//! reduction of lifted dependences, dihedral triple reduction).
//!
//! All arithmetic is exact. Floating point appears only in tests, as a
//! cross-check oracle for scalar signs.
//!
//! Conventions used throughout (documented once, relied on everywhere):
//!
//! * `compose(g, h)` means "first `h`, then `g`"; products of factorizations
//!   multiply left-to-right, so `product(t1, …, tm)` applies `tm` first.
//! * Conjugation is `a^b = b⁻¹ a b`, hence `s_α^w = s_{w⁻¹(α)}`.
//! * A reflection is identified with the *line* (positive-root index)
//!   spanned by its root. Roots are indexed `0..2N` with `N..2N` the
//!   negatives: `root[i + N] = −root[i]`.
//! * Hurwitz moves: `σ_i: (t_i, t_{i+1}) ↦ (t_{i+1}, t_i^{t_{i+1}})` and
//!   `σ_i⁻¹: (t_i, t_{i+1}) ↦ (t_{i+1}^{t_i⁻¹}, t_i)`; both preserve the
//!   product and the multiset of conjugacy classes.

#![forbid(unsafe_code)]

pub mod circuits;
pub mod classify;
pub mod cli;
pub mod dihedral;
pub mod hurwitz;
pub mod rootsys;
pub mod scalar;

use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank for type {family}: {rank}")]
    InvalidRank { family: &'static str, rank: usize },

    #[error("mixed scalar fields: {0}")]
    MixedField(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not an algebraic integer in the relevant ring: {0}")]
    NotIntegral(String),

    #[error("budget exceeded: {visited} states visited, budget {budget}")]
    BudgetExceeded { visited: usize, budget: usize },

    #[error("set is linearly independent")]
    Independent,

    #[error("set is dependent but not a circuit (kernel dimension {kernel_dim})")]
    NotCircuit { kernel_dim: usize },

    #[error("operation requires a classical type (B, C or D): got {0}")]
    NotClassicalType(String),

    #[error("operation requires coordinate-backed roots: {0}")]
    NoCoordinates(String),

    #[error("no perfect matching")]
    NoPerfectMatching,

    #[error("perfect matching is not unique")]
    MatchingNotUnique,

    #[error("invariant violation (this is a bug): {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
