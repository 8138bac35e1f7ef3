//! Companion crate to `scaled-homology`: file formats, built-in sampled
//! systems, the experiment harness (entropy-bound verdicts and the axiom
//! suite), machine-readable reports, and the command-line interface.

pub mod builtins;
pub mod config;
pub mod harness;
pub mod io;
pub mod report;

pub use builtins::{builtin_system, BuiltinSystem};
pub use config::ExperimentConfig;
pub use harness::{axiom_suite, verify_entropy_bound, AxiomSuiteReport, BoundVerdict};
