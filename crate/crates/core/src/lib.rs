//! Exact and numeric machinery for the single-valued generating series behind
//! the zig-zag periods.
//!
//! Layers, bottom up: [`word`] (shuffle Hopf algebra on two letters), [`mzv`]
//! (exact coefficient ring), [`series`] (truncated noncommutative series),
//! [`sv`] (the series S, Ŝ, the associator families, V and the identity
//! checks), [`polylog`] (numeric polylogarithms and KZ transport),
//! [`periods`] and [`feynman`].

pub mod error;
pub mod feynman;
pub mod mzv;
pub mod periods;
pub mod polylog;
pub mod series;
pub mod sv;
pub mod word;

pub use error::{Error, Result};
