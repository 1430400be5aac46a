//! Certified lower bounds on entanglement measures from witness data.
//!
//! Measuring the expectation value of an entanglement witness proves that a
//! state is entangled; this crate turns such expectation values into
//! quantitative statements: certified lower bounds on negativity,
//! entanglement of formation, concurrence and robustness measures. Each
//! bound comes with the certificate data needed to re-verify it from
//! scratch.
//!
//! Start with the runnable examples (`cargo run --example ...`); each one
//! walks through a single capability end to end. The `entcert` binary
//! exposes the same pipeline on the command line.

pub mod bound;
pub mod catalog;
pub mod concurrence;
pub mod conjugate;
pub mod error;
pub mod formation;
pub mod formats;
pub mod negativity;
pub mod operator;
pub mod oracle;
pub mod optimize;
pub mod pauli;
pub mod report;
pub mod robustness;
pub mod simplex;

pub use error::{Error, Result};
