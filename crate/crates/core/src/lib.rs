//! Complete flags of connections and level-m differential modules on curves
//! in characteristic `p`, computed exactly over finite fields.
//!
//! * [`algebra`]: `F_{p^k}`, polynomials, rational functions, matrices.
//! * [`pone`]: split bundles on the projective line, p-curvature, Cartier
//!   descent, Frobenius pullback and flag construction.
//! * [`elliptic`]: Atiyah's filtration calculus on a genus-one curve.
//! * [`hitchin`]: chart-level p-curvature characteristic polynomials and
//!   rank-2 no-flag certificates.
//! * [`json`]: the shared JSON encodings.
//! * [`sample`]: seeded random instances.

pub mod algebra;
pub mod connection;
pub mod elliptic;
pub mod error;
pub mod hitchin;
pub mod json;
pub mod pone;
pub mod sample;

pub use error::{Error, Result};
