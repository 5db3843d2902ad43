//! Exact-arithmetic analysis of cognitive Gaussian interference networks.
//!
//! Everything that decides a bound is computed over the rationals: channel
//! coefficients, cancelation witnesses, degradedness constraints and the
//! linear program that combines them. Floating point appears only where a
//! logarithm or an operator norm is printed for a human.

pub mod analyze;
pub mod cancel;
pub mod classify;
pub mod fixture;
pub mod lift;
pub mod linalg;
pub mod lp;
pub mod network;
pub mod upper;

pub use linalg::{Mat, Rat};
pub use network::Network;
