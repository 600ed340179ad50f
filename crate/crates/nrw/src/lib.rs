//! Gaussian-state dynamics of one or two Brownian particles under a
//! non-rotating-wave master equation in the high-temperature Ohmic limit.
//!
//! Closed forms live in [`single`], [`bipartite_free`] and [`bipartite_harmonic`];
//! [`oracle`] re-derives the same quantities numerically; [`cli`] drives them from
//! the command line.

pub mod bipartite_free;
pub mod bipartite_harmonic;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod mode;
pub mod oracle;
pub mod single;

pub use error::{Error, Result};
