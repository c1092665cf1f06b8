//! Exact series expansions of sigma functions of telescopic curves.
pub mod bilinear;
mod coeff;
pub mod curve;
pub mod error;
pub mod expansion;
pub mod integrality;
pub mod json;
pub mod lambda;
pub mod pipeline;
pub mod schur;
pub mod semigroup;
pub mod series;
pub mod sigma;
pub mod useries;
pub use error::{Error, Result, ValidationError};
pub use lambda::{LambdaPolynomial, Monomial, Rational, Symbol, LP};
pub use semigroup::{ExponentVector, LambdaIndex, TelescopicData};
pub use series::{BiSeries, TSeries};
pub use useries::USeries;
