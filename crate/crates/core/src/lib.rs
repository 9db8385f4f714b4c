//! Spectral clustering under edge local differential privacy.
//!
//! The crate contains graph tooling ([`graph`]), synthetic block-model
//! generators ([`generators`]), the non-private spectral reference
//! ([`spectral`]), a simulator of the private power iteration protocol
//! ([`protocol`]) and the randomized-response baseline ([`rr`]).
//!
//! All randomness flows from a [`Seed`], so every run is reproducible.

pub mod error;
pub mod generators;
pub mod graph;
pub mod protocol;
pub mod rr;
pub mod seed;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Cut, Graph};
pub use seed::{Purpose, Seed};
