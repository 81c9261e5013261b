//! Higher-order Schwarzian derivatives via diagonal Padé approximation,
//! with Pick-class certification, matrix-monotonicity testing, a
//! generalized Koebe bound checker, and an interval-dynamics harness that
//! scans inverse branches of first-return maps for Schwarzian positivity.

pub mod dynamics;
pub mod error;
pub mod gen;
pub mod jets;
pub mod koebe;
pub mod linalg;
pub mod pade;
pub mod pickclass;
pub mod poly;
pub mod scalar;
pub mod selftest;
pub mod schwarzian;

pub use error::{Error, Result};
pub use jets::{Jet, JetSource};
pub use dynamics::IntervalMap;
pub use pade::{HankelMatrix, RationalMap, Value};
pub use scalar::{Rational, Scalar};
pub use schwarzian::{ContinuedFractionRep, SchwarzianSequence};
