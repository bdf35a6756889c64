pub mod algebra;
pub mod approx;
pub mod error;
pub mod execution;
pub mod gnd;
pub mod ideal;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod series;
pub mod smooth;

pub use error::{Error, ErrorClass, Result};
pub use execution::Execution;
pub use poly::{Coeff, Field, Monomial, MonomialOrder, PolyRing, Polynomial};
