use super::{internal, p_curvature, BundleP1, Conn0};
use crate::algebra::matrix::inverse;
use crate::algebra::{Field, Mat, MatRF};
use crate::connection;
use crate::error::{precondition, Error, Result};

/// Result of Cartier descent: the bundle on the Frobenius twist and a frame
/// of horizontal sections.
#[derive(Clone, Debug, PartialEq)]
pub struct Descent {
    /// Descended degrees `d_i / p`, in the basis order of the input.
    pub degrees: Vec<i64>,
    /// Columns are horizontal sections forming a basis over `F_q(x)`.
    pub frame: MatRF,
}

impl Descent {
    pub fn bundle(&self) -> BundleP1 {
        BundleP1::new(self.degrees.clone()).expect("rank >= 1")
    }
}

/// Descend a connection with vanishing p-curvature to the twist.
pub fn cartier_descent(c: &Conn0) -> Result<Descent> {
    if !p_curvature(c)?.is_zero() {
        return precondition("p-curvature is nonzero; the connection does not descend");
    }
    let a = c.matrix_rf();
    let sols = connection::horizontal_basis(&c.field, &a);
    if sols.len() < c.rank() {
        return Err(Error::NeedsExtension(format!(
            "found {} horizontal sections over {:?}, need {}",
            sols.len(),
            c.field,
            c.rank()
        )));
    }
    let frame = Mat::from_cols(&sols);
    if inverse(&frame).is_none() {
        return Err(internal("horizontal sections are dependent over F_q(x)"));
    }
    if !sols.iter().all(|v| connection::is_horizontal(&a, v)) {
        return Err(internal("frame column failed the horizontality re-check"));
    }
    let p = c.field.p() as i64;
    Ok(Descent {
        degrees: c.degrees.iter().map(|d| d / p).collect(),
        frame,
    })
}

/// Pull the descended bundle back with its canonical connection (`A = 0`
/// on degrees `p d_i`, horizontal frame `e_i`) and express the result in the
/// frame in which the horizontal sections are the columns of `frame`:
/// `-H' H^{-1}`.
pub fn reconstruct_from_frame(field: &Field, descent: &Descent) -> Result<MatRF> {
    let p = field.p() as i64;
    let pulled = Conn0::trivial(field, descent.degrees.iter().map(|d| d * p).collect())?;
    let h_inv = inverse(&descent.frame).ok_or_else(|| internal("frame is not invertible"))?;
    connection::gauge(&pulled.matrix_rf(), &h_inv)
}
