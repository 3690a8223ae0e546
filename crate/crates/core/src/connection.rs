//! Connections `d + A dx` on a trivialized chart, acting on column vectors
//! of rational functions by `T(v) = v' + A v`.

use crate::algebra::matrix::{echelon_basis, inverse, kernel, Mat, MatRF};
use crate::algebra::{Field, RatFunc};
use crate::error::{Error, Result};

/// `T(v) = v' + A v`.
pub fn apply(a: &MatRF, v: &[RatFunc]) -> Vec<RatFunc> {
    let av = a.mul_vec(v);
    v.iter()
        .zip(av)
        .map(|(vi, avi)| &vi.derivative() + &avi)
        .collect()
}

/// `T^n(v)`.
pub fn apply_n(a: &MatRF, v: &[RatFunc], n: u32) -> Vec<RatFunc> {
    let mut cur = v.to_vec();
    for _ in 0..n {
        cur = apply(a, &cur);
    }
    cur
}

fn basis_vector(field: &Field, r: usize, i: usize) -> Vec<RatFunc> {
    (0..r)
        .map(|j| {
            if i == j {
                RatFunc::one(field)
            } else {
                RatFunc::zero(field)
            }
        })
        .collect()
}

/// Matrix of the p-curvature `(nabla_d/dx)^p` in the chart basis: column
/// `i` is `T^p(e_i)`. The `nabla_{(d/dx)^p}` term vanishes since
/// `(d/dx)^p = 0` in characteristic `p`.
pub fn p_curvature(field: &Field, a: &MatRF) -> MatRF {
    let r = a.rows();
    let p = field.p();
    let cols: Vec<Vec<RatFunc>> = (0..r)
        .map(|i| apply_n(a, &basis_vector(field, r, i), p))
        .collect();
    Mat::from_cols(&cols)
}

/// Scalar p-curvature `a^{(p-1)} + a^p` of `d + a dx` (Jacobson's formula).
pub fn scalar_p_curvature(a: &RatFunc) -> RatFunc {
    let p = a.field().p();
    let mut d = a.clone();
    for _ in 0..p - 1 {
        d = d.derivative();
    }
    &d + &a.pow(p as u64)
}

/// Connection matrix in the frame `e G`: `G^{-1} A G + G^{-1} G'`.
pub fn gauge(a: &MatRF, g: &MatRF) -> Result<MatRF> {
    let g_inv =
        inverse(g).ok_or_else(|| Error::Precondition("gauge matrix is not invertible".into()))?;
    Ok(g_inv.mul(&a.mul(g)).add(&g_inv.mul(&g.derivative())))
}

/// A basis of the horizontal sections `{v : T(v) = 0}` in `F_q(x)^r`,
/// computed as the kernel of `T` viewed as an `F_q(x^p)`-linear map on the
/// `rp`-dimensional space with basis `x^j e_l`.
///
/// The basis is canonical: it is the reduced echelon basis of the solution
/// space in the coordinates `(j, l)` ordered by `j` first. When the `x^0`
/// component of the solutions is invertible this normalizes it to the
/// identity.
pub fn horizontal_basis(field: &Field, a: &MatRF) -> Vec<Vec<RatFunc>> {
    let r = a.rows();
    let p = field.p() as usize;
    let n = r * p;
    let x = RatFunc::x(field);
    // column (j, l) holds the components of T(x^j e_l)
    let mut columns = Vec::with_capacity(n);
    for j in 0..p {
        for l in 0..r {
            let mut v = basis_vector(field, r, l);
            v[l] = x.pow(j as u64);
            let tv = apply(a, &v);
            let mut col = vec![RatFunc::zero(field); n];
            for (coord, entry) in tv.iter().enumerate() {
                for (jj, comp) in entry.frobenius_components().into_iter().enumerate() {
                    col[jj * r + coord] = comp;
                }
            }
            columns.push(col);
        }
    }
    let system = Mat::from_cols(&columns);
    let sols = echelon_basis(&kernel(&system));
    sols.into_iter()
        .map(|u| {
            (0..r)
                .map(|l| {
                    let parts: Vec<RatFunc> = (0..p).map(|j| u[j * r + l].clone()).collect();
                    RatFunc::from_frobenius_components(&parts)
                })
                .collect()
        })
        .collect()
}

pub fn is_horizontal(a: &MatRF, v: &[RatFunc]) -> bool {
    apply(a, v).iter().all(RatFunc::is_zero)
}
