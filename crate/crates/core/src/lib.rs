//! Recurrence coefficients of the polynomials orthonormal on `[-1, 1]` with
//! respect to `w(x) = log(2k/(1-x))`, `k > 1`, together with the auxiliary
//! functions of their Riemann–Hilbert asymptotics: the map `φ`, the Szegő
//! function, and the Bessel parametrix near `+1`.
//!
//! Everything is computed in `rug` (MPFR) arbitrary precision.

// `!(x > 0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod moments;
pub mod numeric;
pub mod parametrix;
pub mod quadrature;
pub mod recurrence;
pub mod szego;
pub mod table_io;
pub mod weights;

pub use error::{Error, Result};
pub use weights::{BoundaryValuePair, WeightKind, WeightSpec};
