//! Exact multivariate polynomials over the rationals, prime fields and
//! simple algebraic extensions.

pub mod field;
pub mod monomial;
pub mod polynomial;
pub mod text;

pub use field::{Coeff, Field};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{PolyRing, Polynomial};
pub use text::{parse_polynomial, Fraction};
