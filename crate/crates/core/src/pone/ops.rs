use super::Conn0;
use crate::algebra::{Mat, Poly};
use crate::error::{precondition, Result};

/// Stable descending sort; returns the `new -> old` index map.
fn descending_perm(degrees: &[i64]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..degrees.len()).collect();
    perm.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]));
    perm
}

fn sorted(c: &Conn0, degrees: Vec<i64>, a: Mat<Poly>) -> Result<(Conn0, Vec<usize>)> {
    let perm = descending_perm(&degrees);
    let degrees = perm.iter().map(|&i| degrees[i]).collect();
    Ok((Conn0::new(&c.field, degrees, a.permute(&perm))?, perm))
}

/// `nabla (x) nabla'` on `E (x) E'`, with `A (x) I + I (x) B`. The basis
/// `e_i (x) f_j` (index `i * rank(E') + j`) is re-sorted by descending
/// degree; the returned map sends new indices to old ones.
pub fn tensor(a: &Conn0, b: &Conn0) -> Result<(Conn0, Vec<usize>)> {
    if a.field != b.field {
        return precondition("tensor of connections over different fields");
    }
    let zero = Poly::zero(&a.field);
    let ia = Mat::identity(&zero, a.rank());
    let ib = Mat::identity(&zero, b.rank());
    let m = a.a.kronecker(&ib).add(&ia.kronecker(&b.a));
    let degrees = a
        .degrees
        .iter()
        .flat_map(|da| b.degrees.iter().map(move |db| da + db))
        .collect();
    sorted(a, degrees, m)
}

/// The dual connection `-A^T` on `E^v`, re-sorted by descending degree.
pub fn dual(c: &Conn0) -> Result<(Conn0, Vec<usize>)> {
    let m = c.a.transpose().neg();
    sorted(c, c.degrees.iter().map(|d| -d).collect(), m)
}
