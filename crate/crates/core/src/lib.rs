//! Exact analysis of the Undirected Connections (UC) and Undirected Bounded
//! Budget Connections (UBBC) network formation games.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds strategy profiles, the graphs they induce and the graph
//!   primitives (distances, diameter, neighbourhoods, bridges).
//! * [`games`] defines the two game instances and their cost functions.
//! * [`equilibria`] computes exact best responses, verifies Nash equilibria and
//!   enumerates equilibrium sets by brute force.
//! * [`constructions`] generates the named equilibrium profiles together with
//!   their closed-form cost predictions.
//! * [`metrics`] computes inequality measures and the closed-form bounds.
//!
//! All costs are exact rationals; disconnected pairs are at distance
//! [`Extended::Infinite`].

pub mod constructions;
pub mod equilibria;
mod error;
mod extended;
pub mod games;
pub mod graph;
pub mod metrics;

pub use error::{Error, Result};
pub use extended::Extended;

/// Exact rational used for α, costs and ratios.
pub type Rational = num_rational::Rational64;
