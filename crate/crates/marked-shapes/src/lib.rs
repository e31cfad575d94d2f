//! Finite combinatorics of marked cubical and marked simplicial sets.
//!
//! The library models two flavours of finite presheaf — marked simplicial
//! complexes and marked cubical complexes — presented by their non-degenerate
//! cells with Eilenberg–Zilber-normalized boundary data, together with the
//! operator calculus that acts on them:
//!
//! * [`box_ops`] — the box category: faces, degeneracies, connections,
//!   semantic composition, normal forms of face maps, and involutions;
//! * [`simplicial_core`] — finite marked simplicial sets: standard objects,
//!   pushouts, joins, the Gray tensor, trivialization, and lifting checks;
//! * [`cubical_core`] — finite marked cubical sets: standard cubes, comical
//!   marking predicates, open boxes, the lax Gray tensor, pushout products;
//! * [`triangulation`] — the string model for triangulated cubes and the
//!   triangulation functor from cubical to simplicial complexes;
//! * [`cones_q`] — cone quotients of cubes, the cubification functor with its
//!   right adjoint, and the retraction/section/homotopy string maps;
//! * [`lemma_harness`] — a registry of exhaustive, deterministic verifications
//!   of the combinatorial facts the library is built around.
//!
//! All values are immutable after construction and safe to share across
//! threads; every operation is pure.

pub mod box_ops;
pub mod cones_q;
pub mod cubical_core;
pub mod lemma_harness;
pub mod simplicial_core;
pub mod triangulation;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Two objects that had to agree in dimension did not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A generator or coordinate index outside its legal range.
    #[error("index out of range: {0}")]
    IndexRange(String),
    /// A morphism that was required to be a face map is not one.
    #[error("not a face map: {0}")]
    NotAFace(String),
    /// An epimorphism that should have been a composite of degeneracies and
    /// connections could not be peeled into generators.
    #[error("not a generated epimorphism: {0}")]
    NotGenerated(String),
    /// A named object was requested with parameters outside its range.
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    /// A simplex string was expected to be essential (interior and
    /// non-degenerate) but is not.
    #[error("not an essential simplex: {0}")]
    NotEssential(String),
    /// A simplex string does not belong to the class an operation requires.
    #[error("wrong class: {0}")]
    WrongClass(String),
    /// A verification id that is not in the registry.
    #[error("unknown lemma: {0}")]
    UnknownLemma(String),
    /// An enumeration exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A cell assignment does not define a map of complexes.
    #[error("invalid map: {0}")]
    InvalidMap(String),
    /// A textual descriptor or literal failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
