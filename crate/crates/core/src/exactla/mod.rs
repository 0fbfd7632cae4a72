//! Prime-field arithmetic, dense elimination and binary forms.

mod field;
mod form;
mod matrix;

pub use field::{is_prime, PrimeField, DEFAULT_PRIME};
pub use form::{form_gcd, min_syzygy_degree, BinaryForm};
pub use matrix::FpMatrix;
