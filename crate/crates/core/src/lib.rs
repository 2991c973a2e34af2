//! Monotone factor decomposition over finite posets.
//!
//! Any map between finite posets splits into a nested chain of monotone
//! factors joined by a difference-like connective, with no more difference
//! applications than the longest increasing chain of the domain. This crate
//! builds those chains, verifies the axiom systems the connectives must
//! satisfy, specialises the construction to rank-block theta factors, and
//! applies it in two directions:
//!
//! - [`boolinf`]: implicative normal forms of boolean functions, with an
//!   exhaustive minimality oracle at small arity;
//! - [`lefebvre`]: the Lefebvre choice model, from probability ensembles
//!   and the readiness function to the golden-section realist construction
//!   and the three-stage choice walk.
//!
//! [`io`] holds the JSON exchange formats used by the command-line tool.

pub mod algebra;
pub mod boolinf;
pub mod decompose;
pub mod io;
pub mod lefebvre;
pub mod map;
pub mod poset;

pub use algebra::{verify_axioms, AxiomReport, AxiomSystem, ConnectiveSet, Orientation};
pub use boolinf::{
    inf_eval, inf_synthesize, is_monotone_tt, minimal_inf_length, InfChain, TruthTable,
};
pub use decompose::{
    decompose, decompose_dual, support, theta_decompose, FactorChain, ThetaFunction,
};
pub use map::{EvalMap, NonMonotonicityReport};
pub use poset::Poset;
