//! Seeded random instances for property tests and the self-test.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::matrix::inverse;
use crate::algebra::{Fe, Field, Mat, MatRF, Poly, RatFunc};
use crate::connection;
use crate::elliptic::{admits_connection, AtiyahAtom, Pic0Group};
use crate::hitchin::ChartConn;
use crate::pone::{Conn0, DmBundle};

pub fn element<R: Rng>(f: &Field, rng: &mut R) -> Fe {
    Fe(rng.gen_range(0..f.order()))
}

pub fn nonzero_element<R: Rng>(f: &Field, rng: &mut R) -> Fe {
    Fe(rng.gen_range(1..f.order()))
}

/// Degree at most `deg`; roughly a third of the coefficients are zero.
pub fn poly<R: Rng>(f: &Field, rng: &mut R, deg: usize) -> Poly {
    let cs = (0..=deg)
        .map(|_| {
            if rng.gen_bool(1.0 / 3.0) {
                Fe::ZERO
            } else {
                element(f, rng)
            }
        })
        .collect();
    Poly::new(f, cs)
}

pub fn monic<R: Rng>(f: &Field, rng: &mut R, deg: usize) -> Poly {
    let mut cs: Vec<Fe> = (0..deg).map(|_| element(f, rng)).collect();
    cs.push(Fe::ONE);
    Poly::new(f, cs)
}

/// A polynomial, or with probability `1/4` a quotient by a monic
/// polynomial of degree 1 or 2.
pub fn ratfunc<R: Rng>(f: &Field, rng: &mut R, deg: usize) -> RatFunc {
    let num = poly(f, rng, deg);
    if rng.gen_bool(0.25) {
        let den_deg = rng.gen_range(1..=2);
        RatFunc::new(num, monic(f, rng, den_deg)).expect("monic denominator")
    } else {
        RatFunc::from(num)
    }
}

pub fn prime<R: Rng>(rng: &mut R, primes: &[u32]) -> Field {
    Field::prime(*primes.choose(rng).expect("nonempty")).expect("prime")
}

/// Degrees `p * t` with `|t| <= span`, in random basis order.
pub fn divisible_degrees<R: Rng>(p: u32, rng: &mut R, r: usize, span: i64) -> Vec<i64> {
    (0..r)
        .map(|_| p as i64 * rng.gen_range(-span..=span))
        .collect()
}

/// A valid level-0 connection: `p | d_i`, and `A[j][i]` random of degree
/// at most `d_j - d_i - 2`.
pub fn valid_conn0<R: Rng>(f: &Field, rng: &mut R, r: usize, span: i64) -> Conn0 {
    let degrees = divisible_degrees(f.p(), rng, r, span);
    let a = Mat::from_fn(r, r, |j, i| {
        let gap = degrees[j] - degrees[i] - 2;
        if gap < 0 {
            Poly::zero(f)
        } else {
            poly(f, rng, gap as usize)
        }
    });
    Conn0::new(f, degrees, a).expect("square")
}

/// A bundle automorphism: with the basis sorted by descending degree it is
/// unitriangular, `G[j][i]` of degree at most `d_j - d_i` for `j` before `i`.
pub fn unipotent_automorphism<R: Rng>(f: &Field, rng: &mut R, degrees: &[i64]) -> Mat<Poly> {
    let r = degrees.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]));
    let rank_of: Vec<usize> = {
        let mut pos = vec![0; r];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        pos
    };
    Mat::from_fn(r, r, |j, i| {
        if i == j {
            Poly::one(f)
        } else if rank_of[j] < rank_of[i] {
            poly(f, rng, (degrees[j] - degrees[i]) as usize)
        } else {
            Poly::zero(f)
        }
    })
}

/// A valid connection with vanishing p-curvature: the trivial connection
/// in the frame of a random bundle automorphism, `G^{-1} G'`.
pub fn flat_conn0<R: Rng>(f: &Field, rng: &mut R, r: usize, span: i64) -> Conn0 {
    let degrees = divisible_degrees(f.p(), rng, r, span);
    let g = unipotent_automorphism(f, rng, &degrees).map(|e| RatFunc::from(e.clone()));
    let zero = Mat::zeros(&RatFunc::zero(f), r, r);
    let a = connection::gauge(&zero, &g).expect("unipotent");
    let a = a.map(|e| e.as_poly().expect("polynomial inverse").clone());
    Conn0::new(f, degrees, a).expect("square")
}

pub fn dm_bundle<R: Rng>(f: &Field, rng: &mut R, r: usize, span: i64, max_level: u32) -> DmBundle {
    DmBundle::new(rng.gen_range(0..=max_level), valid_conn0(f, rng, r, span))
}

pub fn chart<R: Rng>(f: &Field, rng: &mut R, r: usize, deg: usize) -> ChartConn {
    let a = Mat::from_fn(r, r, |_, _| ratfunc(f, rng, deg));
    ChartConn::new(f, a).expect("square")
}

/// `L D U` with unitriangular polynomial `L`, `U` and a constant diagonal
/// `D`: invertible, with polynomial inverse.
pub fn polynomial_gauge<R: Rng>(f: &Field, rng: &mut R, r: usize, deg: usize) -> MatRF {
    let tri = |rng: &mut R, lower: bool| {
        Mat::from_fn(r, r, |i, j| {
            if i == j {
                RatFunc::one(f)
            } else if (i > j) == lower {
                RatFunc::from(poly(f, rng, deg))
            } else {
                RatFunc::zero(f)
            }
        })
    };
    let l = tri(rng, true);
    let u = tri(rng, false);
    let d = Mat::from_fn(r, r, |i, j| {
        if i == j {
            RatFunc::constant(f, nonzero_element(f, rng))
        } else {
            RatFunc::zero(f)
        }
    });
    let g = l.mul(&d).mul(&u);
    debug_assert!(inverse(&g).is_some());
    g
}

/// A strictly upper triangular connection moved by a random polynomial
/// gauge; its p-curvature is nilpotent.
pub fn nilpotent_chart<R: Rng>(f: &Field, rng: &mut R, r: usize, deg: usize) -> ChartConn {
    let n = Mat::from_fn(r, r, |i, j| {
        if i < j {
            ratfunc(f, rng, deg)
        } else {
            RatFunc::zero(f)
        }
    });
    let g = polynomial_gauge(f, rng, r, deg);
    ChartConn::new(f, connection::gauge(&n, &g).expect("invertible")).expect("square")
}

pub fn group<R: Rng>(rng: &mut R) -> Pic0Group {
    let t = rng.gen_range(0..=2);
    Pic0Group::new((0..t).map(|_| rng.gen_range(1..=12)).collect()).expect("positive factors")
}

pub fn atom<R: Rng>(g: &Pic0Group, rng: &mut R, max_r: i64, max_d: i64) -> AtiyahAtom {
    let lam: Vec<i64> = g.factors().iter().map(|&n| rng.gen_range(0..n)).collect();
    AtiyahAtom::new(
        g,
        rng.gen_range(1..=max_r),
        rng.gen_range(-max_d..=max_d),
        &lam,
    )
    .expect("rank >= 1")
}

/// An atom carrying a connection: rejection sampling over random atoms,
/// falling back to `(r, r p t)`, whose filtration degrees all equal `p t`.
pub fn admissible_atom<R: Rng>(g: &Pic0Group, rng: &mut R, p: u32, max_r: i64) -> AtiyahAtom {
    for _ in 0..64 {
        let a = atom(g, rng, max_r, 2 * p as i64 * max_r);
        if admits_connection(&a, p).expect("rank >= 1") {
            return a;
        }
    }
    let lam: Vec<i64> = g.factors().iter().map(|&n| rng.gen_range(0..n)).collect();
    let r = rng.gen_range(1..=max_r);
    AtiyahAtom::new(g, r, r * p as i64 * rng.gen_range(-3..=3), &lam).expect("rank >= 1")
}
