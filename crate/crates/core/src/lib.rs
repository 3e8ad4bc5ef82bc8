//! Exact bivariate polynomial maps of `C^2`, fiber solving, characteristic
//! domains and the multiplicity-weighted volume metric between maps.

pub mod asymptotics;
pub mod dense;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod fiber;
pub mod io;
pub mod laurent;
pub mod map;
pub mod metric;
pub mod poly;
pub mod roots;
pub mod sampling;
pub mod scalar;
pub mod semigroup;

pub use error::{AsymptoticsError, DomainError, FiberError, MapError, MetricError, ParseError, RunError};
pub use map::{ExactMap, FloatMap, PolyMap};
pub use poly::{BivarPoly, ExactPoly, FloatPoly};
pub use scalar::{Coeff, GaussianRational};
