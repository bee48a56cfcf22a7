//! Punctured LDPC secure coding for the two-user Gaussian multiple-access
//! wiretap channel.
//!
//! The crate covers the whole chain: degree-distribution and rate algebra
//! ([`ensembles`]), finite-length graphs and systematic encoding
//! ([`codegraph`]), secret puncturing ([`secure`]), the superposition
//! channel ([`channel`]), joint two-user belief propagation ([`decoder`]),
//! EXIT analysis of punctured ensembles ([`exit`]), puncturing design by
//! linear programming ([`optimizer`]) and Monte Carlo experiments
//! ([`harness`]).

pub mod channel;
pub mod codegraph;
pub mod decoder;
pub mod ensembles;
pub mod error;
pub mod exit;
pub mod harness;
pub mod optimizer;
pub mod rng;
pub mod secure;

pub use error::{Error, Result};
