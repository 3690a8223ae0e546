//! Dense univariate polynomials over a finite field, ascending coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{self, Fe, Field};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if self.field.k() == 1 {
                c.0.to_string()
            } else {
                format!("{:?}", self.field.digits(*c))
            };
            match i {
                0 => write!(f, "{cs}")?,
                1 if c.0 == 1 => write!(f, "x")?,
                1 => write!(f, "{cs}x")?,
                _ if c.0 == 1 => write!(f, "x^{i}")?,
                _ => write!(f, "{cs}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`
/// over `F_p` (see [`field::smallest_irreducible`] for the ordering).
pub fn find_irreducible(p: u32, k: u32) -> Result<Poly> {
    let coeffs = field::smallest_irreducible(p, k)?;
    let fp = Field::prime(p)?;
    Ok(Poly::new(&fp, coeffs.into_iter().map(Fe).collect()))
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `c * x^n`
    pub fn monomial(field: &Field, c: Fe, n: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    /// Integer coefficients reduced into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_i64(i as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    /// `f(x^n)`
    pub fn subst_pow(&self, n: usize) -> Poly {
        if self.is_zero() || n == 1 {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; (self.coeffs.len() - 1) * n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * n] = c;
        }
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// `x^deg f(1/x)` for a nonzero `f`.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(&self.field, c)
    }

    /// Multiplicity of `x` as a factor.
    pub fn valuation_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Apply a coefficient map, e.g. Frobenius or its inverse.
    pub fn map_coeffs(&self, mut g: impl FnMut(Fe) -> Fe) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&c| g(c)).collect())
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Errors on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = d
            .degree()
            .ok_or_else(|| Error::Precondition("division by the zero polynomial".into()))?;
        let inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let t = &mut rem[i - dd + j];
                *t = f.sub(*t, f.mul(c, dj));
            }
        }
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{d:?} does not divide {self:?}")));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

/// All roots of `f` in its coefficient field, with multiplicity, ascending
/// by encoding. Exhaustive evaluation followed by repeated division.
pub fn roots_in_field(f: &Poly) -> Result<Vec<Fe>> {
    if f.is_zero() {
        return Err(Error::Precondition("roots of the zero polynomial".into()));
    }
    let field = f.field().clone();
    let mut out = Vec::new();
    for a in field.elements() {
        if !f.eval(a).is_zero() {
            continue;
        }
        let lin = Poly::new(&field, vec![field.neg(a), Fe::ONE]);
        let mut g = f.clone();
        loop {
            let (q, r) = g.div_rem(&lin)?;
            if !r.is_zero() {
                break;
            }
            out.push(a);
            g = q;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_irreducible_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(find_irreducible(3, 1).unwrap(), Poly::x(&f3));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(
            find_irreducible(2, 2).unwrap(),
            Poly::from_ints(&f2, &[1, 1, 1])
        );
        assert_eq!(
            find_irreducible(2, 3).unwrap(),
            Poly::from_ints(&f2, &[1, 1, 0, 1])
        );
        assert!(matches!(
            find_irreducible(9, 2),
            Err(Error::InvalidField(_))
        ));
    }

    #[test]
    fn roots_examples() {
        let f5 = Field::prime(5).unwrap();
        let roots = roots_in_field(&Poly::from_ints(&f5, &[-1, 0, 1])).unwrap();
        assert_eq!(roots, vec![Fe(1), Fe(4)]);
        let f2 = Field::prime(2).unwrap();
        assert!(roots_in_field(&Poly::from_ints(&f2, &[1, 1, 1]))
            .unwrap()
            .is_empty());
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(roots_in_field(&Poly::x(&f4)).unwrap(), vec![Fe::ZERO]);
        assert!(roots_in_field(&Poly::zero(&f5)).is_err());
        // (x-2)^3 (x-1)
        let lin2 = Poly::from_ints(&f5, &[-2, 1]);
        let lin1 = Poly::from_ints(&f5, &[-1, 1]);
        let f = &lin2.pow(3) * &lin1;
        assert_eq!(
            roots_in_field(&f).unwrap(),
            vec![Fe(1), Fe(2), Fe(2), Fe(2)]
        );
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = Field::new(3, 2).unwrap();
        let a = Poly::new(&f, vec![Fe(4), Fe(0), Fe(7), Fe(2), Fe(5)]);
        let b = Poly::new(&f, vec![Fe(1), Fe(3), Fe(8)]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(a.gcd(&Poly::zero(&f)), a.monic());
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let f = Field::prime(3).unwrap();
        let a = Poly::from_ints(&f, &[1, 2, 0, 1]);
        assert!(a.pow(3).derivative().is_zero());
        // coefficients in F_3 are Frobenius-fixed
        assert_eq!(a.pow(3), a.subst_pow(3));
    }
}
