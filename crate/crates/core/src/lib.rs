//! Exact computation of the affine Laumon partition function.

pub mod affine;
pub mod calogero;
pub mod conventions;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod verma;

pub use error::{Error, Result};
pub use scalar::ExactScalar;
pub use series::{OffsetSeries, TruncatedSeries};
