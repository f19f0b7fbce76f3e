//! Computational toolkit for the left-factorial divisibility question
//! and its determinant strengthening: exact and modular derangement /
//! Bell sequences, the Kurepa determinant family with several
//! independent evaluation paths, checkpointable range scanners, and the
//! log-log heuristic estimators.

pub mod arith;
pub mod determinants;
pub mod heuristics;
pub mod identities;
pub mod scanner;
pub mod sequences;

pub use arith::{FactoredInteger, Residue};
pub use scanner::{ScanConfig, ScanKind, ScanOutcome, ScanRecord};
