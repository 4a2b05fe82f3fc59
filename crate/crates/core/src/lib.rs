//! Regularity analysis for one-parameter families of monic polynomials.
//!
//! A [`curves::MonicCurve`] has coefficients given by piecewise sums of
//! rational powers. The library certifies hyperbolicity through the
//! Bezoutiant, builds reduction trees of the roots at each critical point,
//! folds them into differentiability budgets, and produces sampled root
//! trajectories with numeric smoothness probes.

pub mod error;
pub mod scalar;
pub mod config;
pub mod curves;
pub mod symmetric;
pub mod upoly;
pub mod locate;
pub mod critical;
pub mod multiplicity;
pub mod reduction;
pub mod regularity;
pub mod arrangement;
pub mod desing;
pub mod selfcheck;
pub mod cli;

pub use error::{Error, Result};
pub use scalar::{CRational, Rational};
