//! Exact arithmetic: finite fields, polynomials, rational functions and
//! matrices over them.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod ratfunc;

pub use field::{Fe, Field};
pub use matrix::{charpoly_berkowitz, FieldLike, Mat, MatRF, Ring};
pub use poly::{find_irreducible, roots_in_field, Poly};
pub use ratfunc::{in_frobenius_subfield, sqrt_ratfunc, RatFunc};
