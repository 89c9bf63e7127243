pub mod error;
pub mod exactnum;
pub mod expr;

pub use error::{Error, Result};
pub use exactnum::{FieldElem, LaurentScalar, Rational};
pub mod forms;
pub mod linalg;
pub mod poisson;
pub mod canon;
pub mod contract;
