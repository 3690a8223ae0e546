//! Finite fields `F_{p^k}` at desk scale.
//!
//! An element is encoded as the integer `sum c_i p^i` where `c_0..c_{k-1}`
//! are its residues in the power basis of the modulus root. Multiplication
//! goes through discrete log tables built once per field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_ORDER: u64 = 1 << 20;

/// An element of some `F_{p^k}`; only meaningful together with its [`Field`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over `F_p`, ascending; `[0, 1]` for the prime field.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
}

/// Shared handle on a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[mod {:?}]", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomial helpers over F_p used for modulus search and table setup.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    trim(&mut a);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p) as u64;
    while a.len() > dm {
        let top = a.len() - 1;
        let c = (a[top] as u64 * lead_inv) % p as u64;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c * mi as u64) % p as u64;
            a[shift + i] = ((a[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut a);
    }
    a
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    fp_rem(&out, m, p)
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a monic polynomial over `F_p`.
pub(crate) fn is_irreducible_fp(f: &[u32], p: u32) -> bool {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..n / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u32];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        let g = fp_gcd(&diff, f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `k` over `F_p`, where the
/// candidates are enumerated as integers whose base-`p` digits are the
/// coefficients from the constant term upward (constant = least significant).
pub(crate) fn smallest_irreducible(p: u32, k: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidField("extension degree must be >= 1".into()));
    }
    let count = (p as u64)
        .checked_pow(k)
        .filter(|&c| c <= MAX_ORDER)
        .ok_or_else(|| Error::InvalidField(format!("order {p}^{k} exceeds {MAX_ORDER}")))?;
    for n in 0..count {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut t = n;
        for _ in 0..k {
            coeffs.push((t % p as u64) as u32);
            t /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible_fp(&coeffs, p) {
            return Ok(coeffs);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible polynomial of degree {k} over F_{p}"
    )))
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// `F_{p^k}` built on the smallest monic irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        let modulus = smallest_irreducible(p, k)?;
        Field::build(p, modulus)
    }

    /// `F_{p^k}` on a caller-chosen modulus (ascending, monic, irreducible).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut m = modulus;
        trim(&mut m);
        if m.len() < 2 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus {m:?} must be monic of degree >= 1 with residues mod {p}"
            )));
        }
        if !is_irreducible_fp(&m, p) {
            return Err(Error::InvalidField(format!(
                "modulus {m:?} is reducible over F_{p}"
            )));
        }
        if m.len() == 2 {
            // every degree-1 modulus gives the prime field; normalize
            m = vec![0, 1];
        }
        Field::build(p, m)
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Field> {
        let k = (modulus.len() - 1) as u32;
        let q64 = (p as u64).pow(k);
        if q64 > MAX_ORDER {
            return Err(Error::InvalidField(format!(
                "order {q64} exceeds {MAX_ORDER}"
            )));
        }
        let q = q64 as u32;
        let to_digits = |mut a: u32| -> Vec<u32> {
            let mut d = Vec::with_capacity(k as usize);
            for _ in 0..k {
                d.push(a % p);
                a /= p;
            }
            d
        };
        let from_digits = |d: &[u32]| -> u32 { d.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let mut r = fp_mulmod(&to_digits(a), &to_digits(b), &modulus, p);
            r.resize(k as usize, 0);
            from_digits(&r)
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let (mut acc, mut base) = (1u32, a);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let gen = (1..q)
            .find(|&g| factors.iter().all(|&l| slow_pow(g, order / l) != 1))
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, gen);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Ok(Field(Arc::new(Inner {
            p,
            k,
            q,
            modulus,
            exp,
            log,
        })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let mut a = a.0;
        (0..self.0.k)
            .map(|_| {
                let d = a % self.0.p;
                a /= self.0.p;
                d
            })
            .collect()
    }

    /// Element from residues (ascending); missing residues are zero.
    pub fn from_digits(&self, d: &[u32]) -> Result<Fe> {
        if d.len() > self.0.k as usize {
            return Err(Error::Parse(format!(
                "element has {} residues, field degree is {}",
                d.len(),
                self.0.k
            )));
        }
        let mut v = 0u32;
        for &c in d.iter().rev() {
            v = v * self.0.p + c % self.0.p;
        }
        Ok(Fe(v))
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.0.k {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        for _ in 0..self.0.k {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let i = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Fe(self.0.exp[i as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Some(Fe(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Fe(self.0.exp[((l * (e % n)) % n) as usize])
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    /// The unique `b` with `b^p = a` (the field is perfect).
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    /// Some `b` with `b^2 = a`, if `a` is a square.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(Fe::ZERO);
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        if self.0.p == 2 {
            // squaring is bijective; halve the log modulo an odd order
            let half = if l % 2 == 0 { l / 2 } else { (l + n) / 2 };
            return Some(Fe(self.0.exp[half as usize]));
        }
        if l % 2 == 1 {
            return None;
        }
        Some(Fe(self.0.exp[(l / 2) as usize]))
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.sqrt(a).is_some()
    }
}
