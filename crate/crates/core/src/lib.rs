//! Efficient hypergraph containers: exact degree measures, the single-round
//! fingerprint algorithm, the multi-round construction and the packaged
//! container tree, with application generators and brute-force oracles.
//!
//! All quantities are exact: multiplicities are [`num_bigint::BigUint`] and every
//! measure is a [`rational::Rational`].

pub mod accumulator;
pub mod engine;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod hypergraph;
pub mod io;
pub mod measures;
pub mod oracle;
pub mod packaged;
pub mod prune;
pub mod rational;
pub mod round;

pub use error::{Error, Result};
pub use hypergraph::{Multihypergraph, Vertex, VertexSet};
pub use measures::AlphaWeights;
pub use rational::Rational;
