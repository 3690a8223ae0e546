//! Rational functions in one variable over `F_q`, kept in canonical form:
//! coprime numerator and denominator, denominator monic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::{Fe, Field};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl From<Poly> for RatFunc {
    fn from(num: Poly) -> RatFunc {
        let den = Poly::one(num.field());
        RatFunc { num, den }
    }
}

impl RatFunc {
    /// `num / den` brought to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Precondition(
                "rational function with zero denominator".into(),
            ));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero(num.field());
        }
        if den.is_one() {
            return RatFunc { num, den };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.lead();
        if lc == Fe::ONE {
            return RatFunc { num, den };
        }
        let inv = den.field().inv(lc).unwrap();
        RatFunc {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::from(Poly::one(field))
    }

    pub fn constant(field: &Field, c: Fe) -> RatFunc {
        RatFunc::from(Poly::constant(field, c))
    }

    pub fn x(field: &Field) -> RatFunc {
        RatFunc::from(Poly::x(field))
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> RatFunc {
        RatFunc::from(Poly::from_ints(field, coeffs))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: Fe) -> RatFunc {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        // coprimality survives powers
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// d/dx by the quotient rule.
    pub fn derivative(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from(self.num.derivative());
        }
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalize(top, &self.den * &self.den)
    }

    /// `f(x^n)`; canonical form is preserved.
    pub fn subst_pow(&self, n: usize) -> RatFunc {
        RatFunc {
            num: self.num.subst_pow(n),
            den: self.den.subst_pow(n),
        }
    }

    pub fn map_coeffs(&self, mut g: impl FnMut(Fe) -> Fe) -> RatFunc {
        Self::normalize(self.num.map_coeffs(&mut g), self.den.map_coeffs(&mut g))
    }

    /// `f(1/y)` as a rational function of `y`.
    pub fn subst_reciprocal(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let (num, den) = if dd >= dn {
            (self.num.reversed().shift(dd - dn), self.den.reversed())
        } else {
            (self.num.reversed(), self.den.reversed().shift(dn - dd))
        };
        Self::normalize(num, den)
    }

    /// Order of vanishing at `x = 0` (negative for a pole), `None` for zero.
    pub fn valuation_at_zero(&self) -> Option<i64> {
        let vn = self.num.valuation_at_zero()? as i64;
        let vd = self.den.valuation_at_zero().unwrap() as i64;
        Some(vn - vd)
    }

    pub fn eval(&self, x: Fe) -> Option<Fe> {
        let f = self.field();
        f.inv(self.den.eval(x)).map(|d| f.mul(self.num.eval(x), d))
    }

    /// Components `g_0..g_{p-1}` with `self = sum_j x^j g_j(x^p)`, each `g_j`
    /// returned as a function of `y = x^p`.
    pub fn frobenius_components(&self) -> Vec<RatFunc> {
        let f = self.field().clone();
        let p = f.p() as usize;
        // den^p = D(x^p) with D = den with Frobenius-twisted coefficients
        let big_den = self.den.map_coeffs(|c| f.frobenius(c));
        let top = &self.num * &self.den.pow(p as u64 - 1);
        (0..p)
            .map(|j| {
                let coeffs: Vec<Fe> = top.coeffs().iter().skip(j).step_by(p).copied().collect();
                Self::normalize(Poly::new(&f, coeffs), big_den.clone())
            })
            .collect()
    }

    /// Inverse of [`RatFunc::frobenius_components`].
    pub fn from_frobenius_components(parts: &[RatFunc]) -> RatFunc {
        let f = parts[0].field().clone();
        let p = f.p() as usize;
        let x = RatFunc::x(&f);
        let mut acc = RatFunc::zero(&f);
        for (j, g) in parts.iter().enumerate() {
            acc = &acc + &(&g.subst_pow(p) * &x.pow(j as u64));
        }
        acc
    }

    /// `f = g^p` with `g` returned; `None` when `f` is not in `F_q(x^p)`.
    pub fn frobenius_root(&self) -> Option<RatFunc> {
        if !self.derivative().is_zero() {
            return None;
        }
        let f = self.field().clone();
        let p = f.p() as usize;
        let shrink = |a: &Poly| {
            let coeffs = a
                .coeffs()
                .iter()
                .step_by(p)
                .map(|&c| f.pth_root(c))
                .collect();
            Poly::new(&f, coeffs)
        };
        Some(RatFunc {
            num: shrink(&self.num),
            den: shrink(&self.den),
        })
    }
}

/// Membership in `F_q(x^{p^s})` for `s >= 1`: a derivative test, then
/// `x^p -> x` with `p`-th roots of coefficients, repeated `s` times.
pub fn in_frobenius_subfield(f: &RatFunc, s: u32) -> bool {
    let mut cur = f.clone();
    for _ in 0..s {
        match cur.frobenius_root() {
            Some(next) => cur = next,
            None => return false,
        }
    }
    true
}

fn sqrt_poly(a: &Poly) -> Option<Poly> {
    let f = a.field().clone();
    if a.is_zero() {
        return Some(a.clone());
    }
    let deg = a.degree().unwrap();
    if deg % 2 == 1 {
        return None;
    }
    let half = deg / 2;
    let root = if f.p() == 2 {
        // squares are exactly the elements of F_q(x^2)
        if a.coeffs().iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        let coeffs = a
            .coeffs()
            .iter()
            .step_by(2)
            .map(|&c| f.pth_root(c))
            .collect();
        Poly::new(&f, coeffs)
    } else {
        // match coefficients from the top, as a power series in 1/x
        let rev: Vec<Fe> = a.coeffs().iter().rev().copied().collect();
        let g0 = f.sqrt(rev[0])?;
        let two_g0_inv = f.inv(f.add(g0, g0)).unwrap();
        let mut g = vec![g0];
        for i in 1..=half {
            let mut acc = rev[i];
            for j in 1..i {
                acc = f.sub(acc, f.mul(g[j], g[i - j]));
            }
            g.push(f.mul(acc, two_g0_inv));
        }
        g.reverse();
        Poly::new(&f, g)
    };
    (&root * &root == *a).then_some(root)
}

/// Square root in `F_q(x)`, `None` when `f` is not a square.
pub fn sqrt_ratfunc(f: &RatFunc) -> Option<RatFunc> {
    // canonical form with monic denominator: f = g^2 forces num and den squares
    let n = sqrt_poly(f.num())?;
    let d = sqrt_poly(f.den())?;
    RatFunc::new(n, d).ok()
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::normalize(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from(&self.num * &rhs.num);
        }
        RatFunc::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero.
    fn div(self, rhs: &'a RatFunc) -> RatFunc {
        self * &rhs.inv().expect("division by zero rational function")
    }
}
