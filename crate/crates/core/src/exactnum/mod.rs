//! Exact scalars: the field Q(i, √2, √3) and Laurent polynomials in ε.

mod field;
mod laurent;

pub use field::{field_inv, field_mul, field_to_float, FieldElem, Rational};
pub use laurent::{laurent_limit, LaurentScalar, LAURENT_BOUND};
