//! Numerics on the logarithmic surface: mixed generalized power series, the
//! Stirling function and its Binet integral, level curves of the Gamma
//! function and domain-coloured rendering.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod error;
pub mod gamma;
pub mod genseries;
pub mod quadrature;
pub mod render;
pub mod stirling;
pub mod surface;

pub use error::{Error, Result};
