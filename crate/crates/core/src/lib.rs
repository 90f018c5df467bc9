//! Numerics for the fractional Ornstein-Uhlenbeck process composed with an
//! inverse subordinator: variance machinery, subordination kernels, Laplace
//! transform plumbing, a Monte Carlo oracle, and the operator layer of the
//! generalized Fokker-Planck equation. Everything computable is computed at
//! least twice, by independent routes, and the acceptance suite compares the
//! routes at pinned tolerances.

pub mod bernstein;
pub mod dd;
pub mod error;
pub mod fou;
pub mod laplace;
pub mod quad;
pub mod special;
pub mod stable;

pub use error::{Error, Result};
