//! Self-adjoint extensions of the Dirac-Kähler operator `D = d + δ` on an
//! interval and on the punctured plane, discretized by collocation.

pub mod boundary;
pub mod cli;
mod dense;
pub mod error;
pub mod exterior;
pub mod fields;
pub mod forms;
pub mod grids;
pub mod modes;
pub mod sobolev;
pub mod spectral;

pub use error::{Error, Result};
