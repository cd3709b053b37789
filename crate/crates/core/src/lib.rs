//! Boolean MinSAT / Weighted MinSAT workbench.
//!
//! The crate bundles a classifier for the FPT / W[1]-hard dichotomy of
//! Boolean constraint languages, two complete solving pipelines built on a
//! flow-augmentation layer (generalized digraph pair cut and clause cut),
//! hardness-instance generators, and exhaustive oracles that double-check
//! everything at desk scale.

pub mod bundledcut;
pub mod classifier;
pub mod clause;
pub mod clausecut;
pub mod config;
pub mod error;
pub mod flow;
pub mod formula;
pub mod gdpc;
pub mod graph;
pub mod hardness;
pub mod language;
pub mod oracle;
pub mod relation;
pub mod twosat;

pub use config::SolveConfig;
pub use error::{CoreError, Outcome};
pub use formula::{Assignment, Constraint, CostReport, Formula, Weight};
pub use language::Language;
pub use relation::BooleanRelation;
