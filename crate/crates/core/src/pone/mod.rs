//! Connections and level-`m` differential modules on the projective line.
//!
//! Bundles are split: `E = O(d_1) + ... + O(d_r)` with the standard frame
//! `e_i` on the chart `U_0 = {x != oo}` and transition `diag(x^{d_i})` to the
//! chart at infinity. A connection is `d + A dx` on `U_0` with `A` a matrix
//! of polynomials; `A[j][i]` is the `e_j`-component of `nabla(e_i)`.
//!
//! A level-`m` module is stored as a level-0 connection on the `m`-th
//! Frobenius twist (coordinate `y`, with `y = x^{p^m}`); its underlying
//! bundle on the curve has degrees `p^m` times the stored ones.

mod descent;
mod flag;
mod ops;

pub use descent::{cartier_descent, reconstruct_from_frame, Descent};
pub use flag::{complete_flag, complete_flag_dm, verify_flag, FlagP1};
pub use ops::{dual, tensor};

use crate::algebra::{Field, Mat, MatRF, Poly, RatFunc};
use crate::connection;
use crate::error::{precondition, Error, Result};

/// Splitting type of a bundle on the projective line, degrees descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleP1 {
    degrees: Vec<i64>,
}

impl BundleP1 {
    pub fn new(mut degrees: Vec<i64>) -> Result<BundleP1> {
        if degrees.is_empty() {
            return precondition("a bundle needs at least one summand");
        }
        degrees.sort_by(|a, b| b.cmp(a));
        Ok(BundleP1 { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

/// A connection on `O(d_1) + ... + O(d_r)`; the degree list is in basis
/// order and need not be sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Conn0 {
    field: Field,
    degrees: Vec<i64>,
    a: Mat<Poly>,
}

/// A `D^(m)`-bundle represented on the `m`-th twist.
#[derive(Clone, Debug, PartialEq)]
pub struct DmBundle {
    pub m: u32,
    pub base: Conn0,
}

/// An entry of the connection matrix that fails to extend over infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    /// Order of the pole of the chart-at-infinity entry at `y = 0`.
    pub pole_order: u64,
}

impl Conn0 {
    pub fn new(field: &Field, degrees: Vec<i64>, a: Mat<Poly>) -> Result<Conn0> {
        let r = degrees.len();
        if r == 0 {
            return precondition("a connection needs rank >= 1");
        }
        if a.rows() != r || a.cols() != r {
            return precondition(format!(
                "connection matrix is {}x{}, expected {r}x{r}",
                a.rows(),
                a.cols()
            ));
        }
        if a.entries().any(|e| e.field() != field) {
            return precondition("matrix entries live over a different field");
        }
        Ok(Conn0 {
            field: field.clone(),
            degrees,
            a,
        })
    }

    /// `A = 0` on the given degrees (in basis order).
    pub fn trivial(field: &Field, degrees: Vec<i64>) -> Result<Conn0> {
        let r = degrees.len();
        Conn0::new(field, degrees, Mat::zeros(&Poly::zero(field), r, r))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn matrix(&self) -> &Mat<Poly> {
        &self.a
    }

    pub fn matrix_rf(&self) -> MatRF {
        self.a.map(|e| RatFunc::from(e.clone()))
    }

    pub fn bundle(&self) -> BundleP1 {
        BundleP1::new(self.degrees.clone()).expect("rank >= 1")
    }

    pub fn is_canonical(&self) -> bool {
        self.a.is_zero()
    }
}

impl DmBundle {
    pub fn new(m: u32, base: Conn0) -> DmBundle {
        DmBundle { m, base }
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    /// Degrees of the represented bundle on the curve, in basis order.
    pub fn underlying_degrees(&self) -> Vec<i64> {
        let scale = (self.field().p() as i64).pow(self.m);
        self.base.degrees.iter().map(|d| d * scale).collect()
    }
}

fn pow_i64(p: u32, e: u32) -> i64 {
    (p as i64).pow(e)
}

/// Whether `b` carries a level-`m` structure: every degree divisible by
/// `p^{m+1}`.
pub fn admits_level(b: &BundleP1, p: u32, m: u32) -> bool {
    let q = pow_i64(p, m + 1);
    b.degrees.iter().all(|d| d % q == 0)
}

/// The canonical structure on `F^{(m+1)*}(O(d_1/p^{m+1}) + ...)`, stored as
/// the zero connection on degrees `d_i / p^m` of the `m`-th twist.
pub fn canonical_connection(field: &Field, b: &BundleP1, m: u32) -> Result<DmBundle> {
    let p = field.p();
    let q = pow_i64(p, m + 1);
    if let Some(bad) = b.degrees.iter().find(|&&d| d % q != 0) {
        return precondition(format!("degree {bad} is not divisible by {p}^{}", m + 1));
    }
    let shrink = pow_i64(p, m);
    let base = Conn0::trivial(field, b.degrees.iter().map(|d| d / shrink).collect())?;
    Ok(DmBundle::new(m, base))
}

/// The connection matrix in the frame at infinity, as a function of
/// `y = 1/x`: `-y^{-2} [diag(d_i / x) + G^{-1} A G](x = 1/y)` with
/// `G = diag(x^{d_i})`.
pub fn matrix_at_infinity(c: &Conn0) -> MatRF {
    let f = &c.field;
    let x = RatFunc::x(f);
    let x_inv = x.inv().unwrap();
    let x_pow = |e: i64| {
        if e >= 0 {
            x.pow(e as u64)
        } else {
            x_inv.pow((-e) as u64)
        }
    };
    let y = RatFunc::x(f);
    let factor = -&y.pow(2).inv().unwrap();
    let r = c.rank();
    Mat::from_fn(r, r, |i, j| {
        let mut e = &RatFunc::from(c.a.get(i, j).clone()) * &x_pow(c.degrees[j] - c.degrees[i]);
        if i == j {
            e = &e + &(&RatFunc::constant(f, f.from_i64(c.degrees[i])) * &x_inv);
        }
        &factor * &e.subst_reciprocal()
    })
}

/// Every entry of [`matrix_at_infinity`] with a pole at `y = 0`; empty iff
/// `c` is a connection on the whole projective line.
pub fn validate(c: &Conn0) -> Vec<Violation> {
    let inf = matrix_at_infinity(c);
    let r = c.rank();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if let Some(v) = inf.get(i, j).valuation_at_zero() {
                if v < 0 {
                    out.push(Violation {
                        row: i,
                        col: j,
                        pole_order: (-v) as u64,
                    });
                }
            }
        }
    }
    out
}

/// The entry-bound form of validity: `p | d_i`, `A_ii = 0`, and
/// `A_ji != 0` only when `deg A_ji <= d_j - d_i - 2`.
pub fn satisfies_entry_bounds(c: &Conn0) -> bool {
    let p = c.field.p() as i64;
    if c.degrees.iter().any(|d| d % p != 0) {
        return false;
    }
    let r = c.rank();
    (0..r).all(|j| {
        (0..r).all(|i| match c.a.get(j, i).degree() {
            None => true,
            Some(deg) => i != j && (deg as i64) <= c.degrees[j] - c.degrees[i] - 2,
        })
    })
}

fn require_valid(c: &Conn0) -> Result<()> {
    let v = validate(c);
    if v.is_empty() {
        Ok(())
    } else {
        precondition(format!("not a connection on the projective line: {v:?}"))
    }
}

/// p-curvature of a level-0 connection, in the standard basis.
pub fn p_curvature(c: &Conn0) -> Result<MatRF> {
    require_valid(c)?;
    Ok(connection::p_curvature(&c.field, &c.matrix_rf()))
}

/// `p^{m+1}`-curvature: the base p-curvature pulled back along `y = x^{p^m}`.
pub fn pm1_curvature(d: &DmBundle) -> Result<MatRF> {
    let psi = p_curvature(&d.base)?;
    Ok(psi.subst_pow(pow_i64(d.field().p(), d.m) as usize))
}

/// Pullback along the `s`-th relative Frobenius: same base, level `m + s`.
pub fn frobenius_pullback(d: &DmBundle, s: u32) -> Result<DmBundle> {
    if s == 0 {
        return precondition("pullback needs s >= 1");
    }
    Ok(DmBundle::new(d.m + s, d.base.clone()))
}

/// `psi^r == 0`.
pub fn is_nilpotent(psi: &MatRF) -> bool {
    let r = psi.rows() as u32;
    psi.pow(r).is_zero()
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fe;

    pub(crate) fn c_example(f: &Field, degrees: Vec<i64>, top_right: &[i64]) -> Conn0 {
        let r = degrees.len();
        let mut a = Mat::zeros(&Poly::zero(f), r, r);
        a.set(0, r - 1, Poly::from_ints(f, top_right));
        Conn0::new(f, degrees, a).unwrap()
    }

    #[test]
    fn admits_level_examples() {
        let b = BundleP1::new(vec![6, 3, 0]).unwrap();
        assert!(admits_level(&b, 3, 0));
        assert!(!admits_level(&b, 3, 1));
        let z = BundleP1::new(vec![0, 0]).unwrap();
        for p in [2, 3, 5] {
            for m in 0..3 {
                assert!(admits_level(&z, p, m));
            }
        }
        assert!(!admits_level(&BundleP1::new(vec![2, 0]).unwrap(), 3, 0));
        assert!(BundleP1::new(vec![]).is_err());
    }

    #[test]
    fn canonical_connection_examples() {
        let f2 = Field::prime(2).unwrap();
        let d = canonical_connection(&f2, &BundleP1::new(vec![4, 2]).unwrap(), 0).unwrap();
        assert_eq!(d.base.degrees(), &[4, 2]);
        assert!(d.base.is_canonical());
        let d = canonical_connection(&f2, &BundleP1::new(vec![4, 0]).unwrap(), 1).unwrap();
        assert_eq!((d.m, d.base.degrees()), (1, &[2, 0][..]));
        assert_eq!(d.underlying_degrees(), vec![4, 0]);
        let f3 = Field::prime(3).unwrap();
        let err = canonical_connection(&f3, &BundleP1::new(vec![2, 0]).unwrap(), 0).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("degree 2")));
    }

    #[test]
    fn validate_examples() {
        let f2 = Field::prime(2).unwrap();
        assert!(validate(&c_example(&f2, vec![2, 0], &[1])).is_empty());
        let mut a = Mat::zeros(&Poly::zero(&f2), 2, 2);
        a.set(1, 0, Poly::one(&f2));
        let bad = Conn0::new(&f2, vec![2, 0], a).unwrap();
        assert_eq!(
            validate(&bad),
            vec![Violation {
                row: 1,
                col: 0,
                pole_order: 4
            }]
        );
        let f5 = Field::prime(5).unwrap();
        assert!(validate(&Conn0::trivial(&f5, vec![10, -5, 0, 5]).unwrap()).is_empty());
        // degree not divisible by p: pole of order 1 on the diagonal
        let odd = Conn0::trivial(&f5, vec![3]).unwrap();
        assert_eq!(
            validate(&odd),
            vec![Violation {
                row: 0,
                col: 0,
                pole_order: 1
            }]
        );
    }

    #[test]
    fn p_curvature_examples() {
        let f2 = Field::prime(2).unwrap();
        assert!(p_curvature(&Conn0::trivial(&f2, vec![4, 2, 0]).unwrap())
            .unwrap()
            .is_zero());
        assert!(p_curvature(&c_example(&f2, vec![2, 0], &[1]))
            .unwrap()
            .is_zero());
        let f4 = Field::new(2, 2).unwrap();
        let mut a = Mat::zeros(&Poly::zero(&f4), 2, 2);
        a.set(0, 1, Poly::new(&f4, vec![Fe(2), Fe(3), Fe(1)]));
        let c = Conn0::new(&f4, vec![4, 0], a).unwrap();
        let psi = p_curvature(&c).unwrap();
        assert_eq!(psi.get(0, 1), &RatFunc::constant(&f4, Fe(3)));
        assert!(psi.get(0, 0).is_zero() && psi.get(1, 0).is_zero() && psi.get(1, 1).is_zero());
    }

    #[test]
    fn pm1_and_pullback() {
        let f2 = Field::prime(2).unwrap();
        let d = DmBundle::new(1, c_example(&f2, vec![4, 0], &[1, 1, 1]));
        let psi = pm1_curvature(&d).unwrap();
        assert_eq!(psi.get(0, 1), &RatFunc::one(&f2));
        // a base p-curvature entry x^2 becomes x^4 at level 1
        let f2 = Field::prime(2).unwrap();
        let mut a = Mat::zeros(&Poly::zero(&f2), 2, 2);
        a.set(0, 1, Poly::from_ints(&f2, &[0, 0, 0, 1]));
        let base = Conn0::new(&f2, vec![6, 0], a).unwrap();
        let lvl0 = pm1_curvature(&DmBundle::new(0, base.clone())).unwrap();
        assert_eq!(lvl0.get(0, 1), &RatFunc::from_ints(&f2, &[0, 0, 1]));
        let lvl1 = pm1_curvature(&DmBundle::new(1, base.clone())).unwrap();
        assert_eq!(lvl1.get(0, 1), &RatFunc::from_ints(&f2, &[0, 0, 0, 0, 1]));
        let pulled = frobenius_pullback(&DmBundle::new(0, base), 1).unwrap();
        assert_eq!(pulled.m, 1);
        assert_eq!(pm1_curvature(&pulled).unwrap(), lvl1);

        let small = DmBundle::new(0, c_example(&f2, vec![2, 0], &[1]));
        let up = frobenius_pullback(&small, 1).unwrap();
        assert_eq!(up.underlying_degrees(), vec![4, 0]);
        let canon = canonical_connection(&f2, &BundleP1::new(vec![4, 0]).unwrap(), 0).unwrap();
        let up2 = frobenius_pullback(&canon, 2).unwrap();
        assert_eq!(up2.m, 2);
        assert!(up2.base.is_canonical());
        assert!(pm1_curvature(&up2).unwrap().is_zero());
        assert!(frobenius_pullback(&canon, 0).is_err());
    }

    #[test]
    fn invalid_connection_has_no_curvature() {
        let f2 = Field::prime(2).unwrap();
        let mut a = Mat::zeros(&Poly::zero(&f2), 2, 2);
        a.set(1, 0, Poly::one(&f2));
        let bad = Conn0::new(&f2, vec![2, 0], a).unwrap();
        assert!(matches!(p_curvature(&bad), Err(Error::Precondition(_))));
        assert!(!satisfies_entry_bounds(&bad));
    }
}
