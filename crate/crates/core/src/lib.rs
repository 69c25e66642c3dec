//! Exact Parikh counting functions of bounded context-free languages.
//!
//! The counting function of a non-negative Diophantine system is built as a
//! piecewise quasi-polynomial over the regions of a central hyperplane
//! arrangement. Bounded context-free languages reduce to finitely many such
//! systems through a semi-simple decomposition of their index sets.

pub mod error;
pub mod exactmath;

pub use error::{Error, Result};
pub mod quasipoly;
pub mod chambers;
pub mod partition;
pub mod oracle;
pub mod langfront;
pub mod semilinear;
pub mod series;
pub mod cli;
