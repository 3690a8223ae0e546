//! p-curvature on a trivialized chart of an arbitrary curve: characteristic
//! polynomials and their descent, the Hitchin base count, rank-2 no-flag
//! certificates and flags of connections with nilpotent p-curvature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::matrix::{charpoly_berkowitz, echelon_basis, kernel, Ring};
use crate::algebra::{in_frobenius_subfield, sqrt_ratfunc, Fe, Field, Mat, MatRF, Poly, RatFunc};
use crate::connection;
use crate::error::{precondition, Error, Result};
use crate::pone::Conn0;

/// `d + A dx` on a chart, with no global condition on `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartConn {
    pub field: Field,
    pub a: MatRF,
}

impl ChartConn {
    pub fn new(field: &Field, a: MatRF) -> Result<ChartConn> {
        if !a.is_square() || a.rows() == 0 {
            return precondition(format!("connection matrix is {}x{}", a.rows(), a.cols()));
        }
        if a.entries().any(|e| e.field() != field) {
            return precondition("matrix entries live over a different field");
        }
        Ok(ChartConn {
            field: field.clone(),
            a,
        })
    }

    /// The chart `x != oo` of a connection on the projective line.
    pub fn embed(c: &Conn0) -> ChartConn {
        ChartConn {
            field: c.field().clone(),
            a: c.matrix_rf(),
        }
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }
}

/// `det(t - psi) = t^r + a_{r-1} t^{r-1} + .. + a_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyP {
    /// `a_0 .. a_{r-1}`.
    pub coeffs: Vec<RatFunc>,
    pub descent_ok: bool,
}

const LINEARITY_SEED: u64 = 0x70_6c_69_6e;

fn random_poly(field: &Field, rng: &mut ChaCha8Rng, deg: usize) -> Poly {
    let q = field.order();
    Poly::new(field, (0..=deg).map(|_| Fe(rng.gen_range(0..q))).collect())
}

/// `psi = T^p` on the basis, checked for `F_q(x)`-linearity on one
/// pseudo-random section `f v`.
pub fn p_curvature_chart(c: &ChartConn) -> Result<MatRF> {
    let psi = connection::p_curvature(&c.field, &c.a);
    let mut rng = ChaCha8Rng::seed_from_u64(LINEARITY_SEED);
    let f = RatFunc::from(&random_poly(&c.field, &mut rng, 2) + &Poly::x(&c.field));
    let v: Vec<RatFunc> = (0..c.rank())
        .map(|_| RatFunc::from(random_poly(&c.field, &mut rng, 2)))
        .collect();
    let fv: Vec<RatFunc> = v.iter().map(|e| &f * e).collect();
    let lhs = connection::apply_n(&c.a, &fv, c.field.p());
    let rhs: Vec<RatFunc> = psi.mul_vec(&v).iter().map(|e| &f * e).collect();
    if lhs != rhs {
        return Err(Error::Internal(
            "p-curvature failed the linearity check".into(),
        ));
    }
    Ok(psi)
}

pub fn char_poly_psi(c: &ChartConn) -> Result<CharPolyP> {
    let psi = p_curvature_chart(c)?;
    let mut coeffs = charpoly_berkowitz(&psi)?;
    coeffs.pop();
    let descent_ok = coeffs.iter().all(|a| in_frobenius_subfield(a, 1));
    Ok(CharPolyP { coeffs, descent_ok })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HitchinDims {
    pub dim_b: i64,
    pub dim_d: i64,
    pub gamma_nondominant: bool,
}

/// `dim B = sum_{i=1}^r h^0(Omega^i) = g + (r^2 - 1)(g - 1)` against
/// `dim D = r g` for the coefficients that descend to the twist.
pub fn hitchin_dims(g: i64, r: i64) -> Result<HitchinDims> {
    if g < 2 {
        return precondition(format!("genus {g} < 2"));
    }
    if r < 1 {
        return precondition(format!("rank {r} must be >= 1"));
    }
    let dim_b = g + (r * r - 1) * (g - 1);
    let dim_d = r * g;
    Ok(HitchinDims {
        dim_b,
        dim_d,
        gamma_nondominant: dim_b > dim_d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `Char` is irreducible over `F_q(x)`: no psi-stable line on the chart.
    Certified,
    /// `Char` has a root in `F_q(x)`.
    NotCertified,
    /// Characteristic 2 with nonzero trace.
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// `value` (the discriminant, or `q` in characteristic 2) is not a square.
    NonSquare {
        value: RatFunc,
    },
    /// `root^2 = value`.
    SquareRoot {
        value: RatFunc,
        root: RatFunc,
    },
    TraceNonzeroChar2 {
        trace: RatFunc,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub charpoly: CharPolyP,
    pub verdict: Verdict,
    pub witness: Witness,
}

fn square_test(value: RatFunc) -> (Verdict, Witness) {
    match sqrt_ratfunc(&value) {
        Some(root) => (Verdict::NotCertified, Witness::SquareRoot { value, root }),
        None => (Verdict::Certified, Witness::NonSquare { value }),
    }
}

/// Decide whether the rank-2 `Char = t^2 - s t + q` is irreducible over
/// `F_q(x)`.
pub fn no_flag_certificate_rank2(c: &ChartConn) -> Result<Certificate> {
    if c.rank() != 2 {
        return precondition(format!("certificate needs rank 2, got {}", c.rank()));
    }
    let charpoly = char_poly_psi(c)?;
    let q = charpoly.coeffs[0].clone();
    let s = -&charpoly.coeffs[1];
    let (verdict, witness) = if c.field.p() != 2 {
        let four_q = q.scale(c.field.from_i64(4));
        square_test(&(&s * &s) - &four_q)
    } else if s.is_zero() {
        square_test(q)
    } else {
        (Verdict::Unknown, Witness::TraceNonzeroChar2 { trace: s })
    };
    Ok(Certificate {
        charpoly,
        verdict,
        witness,
    })
}

/// Output of [`nilpotent_flag_chart`]: in the frame `e G` the connection
/// matrix `transformed` is strictly upper triangular, so the flag is spanned
/// by the leading columns of `gauge`, in the order `perm`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartFlag {
    pub gauge: MatRF,
    pub transformed: MatRF,
    pub perm: Vec<usize>,
}

fn block_diag_one(g2: &MatRF) -> MatRF {
    let n = g2.rows() + 1;
    let like = g2.get(0, 0);
    Mat::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => like.one_like(),
        (0, _) | (_, 0) => like.zero_like(),
        _ => g2.get(i - 1, j - 1).clone(),
    })
}

/// One step: a horizontal section inside `ker psi`, completed by standard
/// basis vectors; then recurse on the quotient.
fn triangularize(field: &Field, a: &MatRF) -> Result<MatRF> {
    let r = a.rows();
    let psi = connection::p_curvature(field, a);
    let k = echelon_basis(&kernel(&psi));
    if k.is_empty() {
        return Err(Error::Internal(
            "p-curvature of a nilpotent quotient is injective".into(),
        ));
    }
    // echelon basis: a vector in the span has its coefficients at the pivots
    let pivots: Vec<usize> = k
        .iter()
        .map(|v| v.iter().position(|e| !e.is_zero()).expect("nonzero"))
        .collect();
    let tk: Vec<Vec<RatFunc>> = k.iter().map(|v| connection::apply(a, v)).collect();
    let b = Mat::from_fn(k.len(), k.len(), |i, j| tk[j][pivots[i]].clone());
    let kmat = Mat::from_cols(&k);
    if kmat.mul(&b) != Mat::from_cols(&tk) {
        return Err(Error::Internal(
            "kernel of psi is not stable under the connection".into(),
        ));
    }
    let w = connection::horizontal_basis(field, &b)
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::NeedsExtension(format!("no horizontal section in ker psi over {field:?}"))
        })?;
    let v = kmat.mul_vec(&w);
    let lead = v
        .iter()
        .position(|e| !e.is_zero())
        .expect("nonzero horizontal vector");
    let mut cols = vec![v];
    for i in (0..r).filter(|&i| i != lead) {
        cols.push(
            (0..r)
                .map(|j| {
                    if i == j {
                        RatFunc::one(field)
                    } else {
                        RatFunc::zero(field)
                    }
                })
                .collect(),
        );
    }
    let g = Mat::from_cols(&cols);
    if r == 1 {
        return Ok(g);
    }
    let a1 = connection::gauge(a, &g)?;
    if !a1.col(0).iter().all(RatFunc::is_zero) {
        return Err(Error::Internal(
            "first frame vector is not horizontal".into(),
        ));
    }
    let a22 = Mat::from_fn(r - 1, r - 1, |i, j| a1.get(i + 1, j + 1).clone());
    let g2 = triangularize(field, &a22)?;
    Ok(g.mul(&block_diag_one(&g2)))
}

/// Complete flag of a chart connection whose p-curvature is nilpotent.
pub fn nilpotent_flag_chart(c: &ChartConn) -> Result<ChartFlag> {
    let psi = p_curvature_chart(c)?;
    if !psi.pow(c.rank() as u32).is_zero() {
        return precondition("p-curvature is not nilpotent");
    }
    let gauge = triangularize(&c.field, &c.a)?;
    let transformed = connection::gauge(&c.a, &gauge)?;
    if !transformed.is_strictly_upper() {
        return Err(Error::Internal(
            "gauge did not triangularize the connection".into(),
        ));
    }
    Ok(ChartFlag {
        gauge,
        transformed,
        perm: (0..c.rank()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::inverse;

    fn chart(f: &Field, rows: Vec<Vec<Vec<i64>>>) -> ChartConn {
        let a = Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|c| RatFunc::from_ints(f, &c)).collect())
                .collect(),
        )
        .unwrap();
        ChartConn::new(f, a).unwrap()
    }

    fn fixture(f: &Field) -> ChartConn {
        chart(f, vec![vec![vec![], vec![1]], vec![vec![0, 1], vec![]]])
    }

    #[test]
    fn curvature_examples() {
        let f2 = Field::prime(2).unwrap();
        let c = chart(&f2, vec![vec![vec![0, 1]]]);
        assert_eq!(
            *p_curvature_chart(&c).unwrap().get(0, 0),
            RatFunc::from_ints(&f2, &[1, 0, 1])
        );
        let cp = char_poly_psi(&c).unwrap();
        // t - (1 + x^2), and -1 = 1 in characteristic 2
        assert_eq!(cp.coeffs, vec![RatFunc::from_ints(&f2, &[1, 0, 1])]);
        assert!(cp.descent_ok);

        let f3 = Field::prime(3).unwrap();
        let psi = p_curvature_chart(&fixture(&f3)).unwrap();
        let expect = chart(
            &f3,
            vec![vec![vec![2], vec![0, 1]], vec![vec![0, 0, 1], vec![1]]],
        )
        .a;
        assert_eq!(psi, expect);
        let cp = char_poly_psi(&fixture(&f3)).unwrap();
        assert_eq!(
            cp.coeffs,
            vec![RatFunc::from_ints(&f3, &[2, 0, 0, 2]), RatFunc::zero(&f3)]
        );
        assert!(cp.descent_ok);

        let zero = chart(&f3, vec![vec![vec![], vec![]], vec![vec![], vec![]]]);
        let cp = char_poly_psi(&zero).unwrap();
        assert!(cp.coeffs.iter().all(RatFunc::is_zero));
    }

    #[test]
    fn dims() {
        let d = hitchin_dims(2, 2).unwrap();
        assert_eq!((d.dim_b, d.dim_d, d.gamma_nondominant), (5, 4, true));
        let d = hitchin_dims(2, 1).unwrap();
        assert_eq!((d.dim_b, d.dim_d, d.gamma_nondominant), (2, 2, false));
        let d = hitchin_dims(3, 2).unwrap();
        assert_eq!((d.dim_b, d.dim_d), (9, 6));
        assert!(hitchin_dims(1, 2).is_err());
        // sum of h^0(Omega^i): g for i = 1, (2i - 1)(g - 1) above
        for g in 2..8 {
            for r in 1..7 {
                let sum: i64 = g + (2..=r).map(|i| (2 * i - 1) * (g - 1)).sum::<i64>();
                assert_eq!(hitchin_dims(g, r).unwrap().dim_b, sum);
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let f3 = Field::prime(3).unwrap();
        let cert = no_flag_certificate_rank2(&fixture(&f3)).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        // s = 0, so the discriminant is -4q = x^3 + 1 = (x + 1)^3
        let disc = RatFunc::from_ints(&f3, &[1, 0, 0, 1]);
        assert_eq!(cert.witness, Witness::NonSquare { value: disc });

        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            let c = chart(&f, vec![vec![vec![], vec![1]], vec![vec![], vec![]]]);
            assert_eq!(
                no_flag_certificate_rank2(&c).unwrap().verdict,
                Verdict::NotCertified
            );
        }
        let c = chart(&f3, vec![vec![vec![0, 1]]]);
        assert!(matches!(
            no_flag_certificate_rank2(&c),
            Err(Error::Precondition(_))
        ));

        // characteristic 2, trace zero: Char = t^2 + x^2 + .. decided by a square test
        let f2 = Field::prime(2).unwrap();
        let c = chart(&f2, vec![vec![vec![], vec![1]], vec![vec![0, 1], vec![]]]);
        let cert = no_flag_certificate_rank2(&c).unwrap();
        assert_ne!(cert.verdict, Verdict::Unknown);
    }

    #[test]
    fn nilflag_examples() {
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            let c = chart(&f, vec![vec![vec![], vec![1]], vec![vec![], vec![]]]);
            let out = nilpotent_flag_chart(&c).unwrap();
            assert_eq!(out.gauge, Mat::identity(&RatFunc::one(&f), 2));
            assert_eq!(out.perm, vec![0, 1]);
        }
        let f2 = Field::prime(2).unwrap();
        let c = chart(&f2, vec![vec![vec![], vec![0, 1]], vec![vec![], vec![]]]);
        let psi = p_curvature_chart(&c).unwrap();
        assert_eq!(
            psi,
            chart(&f2, vec![vec![vec![], vec![1]], vec![vec![], vec![]]]).a
        );
        let out = nilpotent_flag_chart(&c).unwrap();
        assert_eq!(out.gauge, Mat::identity(&RatFunc::one(&f2), 2));

        let f3 = Field::prime(3).unwrap();
        assert!(matches!(
            nilpotent_flag_chart(&fixture(&f3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn nilflag_on_conjugated_triangular() {
        let f3 = Field::prime(3).unwrap();
        let n = chart(
            &f3,
            vec![
                vec![vec![], vec![1, 1], vec![0, 2]],
                vec![vec![], vec![], vec![0, 0, 1]],
                vec![vec![], vec![], vec![]],
            ],
        );
        let g = chart(
            &f3,
            vec![
                vec![vec![1], vec![], vec![]],
                vec![vec![0, 1], vec![1], vec![]],
                vec![vec![2], vec![1, 1], vec![1]],
            ],
        )
        .a;
        let a = connection::gauge(&n.a, &g).unwrap();
        let c = ChartConn::new(&f3, a).unwrap();
        let out = nilpotent_flag_chart(&c).unwrap();
        assert!(out.transformed.is_strictly_upper());
        assert!(inverse(&out.gauge).is_some());
        assert_eq!(
            connection::gauge(&c.a, &out.gauge).unwrap(),
            out.transformed
        );
        assert!(out.transformed.get(0, 0).is_zero());
    }
}
