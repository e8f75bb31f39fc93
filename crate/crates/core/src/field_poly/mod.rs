//! Prime fields, monomials, polynomials and graded free modules.

pub mod field;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod polynomial;

pub use field::{FieldElement, PrimeField, DEFAULT_PRIME};
pub use module::{compose, GradedFreeModule, GradedMap};
pub use monomial::{Monomial, MAX_VARS};
pub use parse::{parse_matrix, parse_polynomial, parse_polynomial_list};
pub use polynomial::{poly_arith, PolyOp, Polynomial, Ring};
