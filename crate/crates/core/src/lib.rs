//! Cellular resolutions of transversal monomial ideals.
//!
//! The ideal `I_{n,t}` is the sum of all products of `t` distinct block
//! ideals `P_j = (x[j,1], ..., x[j,b_j])`. [`gamma::gamma`] builds a labeled
//! polyhedral complex whose cellular chain complex is its minimal free
//! resolution; [`resolution`] certifies that, and [`oracle`] recomputes the
//! Betti numbers from the ideal alone.

pub mod complex;
pub mod error;
pub mod gamma;
pub mod io;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod resolution;
pub mod veronese;

pub use complex::{Cell, LabeledComplex};
pub use error::{Error, Result};
pub use gamma::{gamma, gamma_closed};
pub use linalg::{Backend, Prime};
pub use monomial::{transversal_generators, BlockConfig, Monomial, MonomialIdeal, VarId};
pub use oracle::betti_oracle;
pub use resolution::{betti_table, certify, BettiTable, Certificate};
