//! Dense matrices over exact commutative rings, Berkowitz characteristic
//! polynomials, and Gaussian elimination over fields.

use std::fmt;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Exact commutative ring elements that carry their own context.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

pub trait FieldLike: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Poly::one(self.field())
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl FieldLike for RatFunc {
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatRF = Mat<RatFunc>;

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows.iter().take(self.rows)).finish()
    }
}

impl<T: Ring> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Mat<T>> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Mat<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zeros(like: &T, rows: usize, cols: usize) -> Mat<T> {
        Mat {
            rows,
            cols,
            data: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn identity(like: &T, n: usize) -> Mat<T> {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                like.one_like()
            } else {
                like.zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn from_cols(cols: &[Vec<T>]) -> Mat<T> {
        let r = cols.first().map_or(0, Vec::len);
        Mat::from_fn(r, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Mat<T> {
        self.map(Ring::neg)
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows);
        let zero = self
            .data
            .first()
            .or(rhs.data.first())
            .expect("nonempty")
            .zero_like();
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = rhs.get(k, j);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (k, vk) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !vk.is_zero() {
                        acc = acc.add(&a.mul(vk));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Mat<T> {
        let mut acc = Mat::identity(&self.data[0], self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product; row `(i, j)` of the result is `i * rhs.rows + j`.
    pub fn kronecker(&self, rhs: &Mat<T>) -> Mat<T> {
        Mat::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let (a, b) = (i / rhs.rows, i % rhs.rows);
            let (c, d) = (j / rhs.cols, j % rhs.cols);
            self.get(a, c).mul(rhs.get(b, d))
        })
    }

    /// `P^T M P` for the permutation with `new index -> old index` map
    /// `perm`, i.e. entry `(i, j)` of the result is `M[perm[i]][perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.get(perm[i], perm[j]).clone()
        })
    }

    /// Strictly upper-triangular test.
    pub fn is_strictly_upper(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i + 1)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }
}

/// Coefficients `[c_0, .., c_{n-1}, 1]` (ascending) of `det(t I - M)`,
/// computed with Berkowitz's division-free recurrence.
pub fn charpoly_berkowitz<T: Ring>(m: &Mat<T>) -> Result<Vec<T>> {
    if !m.is_square() {
        return Err(Error::Precondition(format!(
            "charpoly of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Err(Error::Precondition("charpoly of an empty matrix".into()));
    }
    let zero = m.get(0, 0).zero_like();
    let one = m.get(0, 0).one_like();
    // descending coefficient vector of the leading k x k block
    let mut vec_desc = vec![one.clone()];
    for k in 0..n {
        // column of the Toeplitz matrix: 1, -a_kk, -R C, -R A C, ...
        let mut col = Vec::with_capacity(k + 2);
        col.push(one.clone());
        col.push(m.get(k, k).neg());
        let r: Vec<T> = (0..k).map(|j| m.get(k, j).clone()).collect();
        let mut c: Vec<T> = (0..k).map(|i| m.get(i, k).clone()).collect();
        for _ in 0..k {
            let dot = r
                .iter()
                .zip(&c)
                .fold(zero.clone(), |acc, (a, b)| acc.add(&a.mul(b)));
            col.push(dot.neg());
            // c <- A_k c with A_k the leading k x k block
            c = (0..k)
                .map(|i| (0..k).fold(zero.clone(), |acc, j| acc.add(&m.get(i, j).mul(&c[j]))))
                .collect();
        }
        // Toeplitz (k+2) x (k+1) lower-triangular product with vec_desc
        let next: Vec<T> = (0..k + 2)
            .map(|i| {
                let mut acc = zero.clone();
                for (j, v) in vec_desc.iter().enumerate() {
                    if i >= j {
                        acc = acc.add(&col[i - j].mul(v));
                    }
                }
                acc
            })
            .collect();
        vec_desc = next;
    }
    vec_desc.reverse();
    Ok(vec_desc)
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<T: FieldLike>(m: &mut Mat<T>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(piv) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        if piv != row {
            for j in 0..m.cols {
                m.data.swap(piv * m.cols + j, row * m.cols + j);
            }
        }
        let inv = m.get(row, col).inv().expect("nonzero pivot");
        for j in col..m.cols {
            let v = m.get(row, j).mul(&inv);
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i == row || m.get(i, col).is_zero() {
                continue;
            }
            let factor = m.get(i, col).clone();
            for j in col..m.cols {
                let v = m.get(i, j).sub(&factor.mul(m.get(row, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<T: FieldLike>(m: &Mat<T>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column,
/// read off the reduced row echelon form.
pub fn kernel<T: FieldLike>(m: &Mat<T>) -> Vec<Vec<T>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let zero = m.data.first().expect("nonempty").zero_like();
    let one = zero.one_like();
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); m.cols];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = a.get(row, free).neg();
        }
        basis.push(v);
    }
    basis
}

/// Canonical basis of the span of `vectors`: the nonzero rows of the
/// reduced row echelon form of the matrix whose rows are the vectors.
pub fn echelon_basis<T: FieldLike>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut a = Mat::from_rows(vectors.to_vec()).expect("equal lengths");
    let r = rref(&mut a).len();
    (0..r).map(|i| a.row(i).to_vec()).collect()
}

pub fn inverse<T: FieldLike>(m: &Mat<T>) -> Option<Mat<T>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let id = Mat::identity(m.get(0, 0), n);
    let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else {
            id.get(i, j - n).clone()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(Mat::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
}

pub fn det<T: Ring>(m: &Mat<T>) -> Result<T> {
    let cp = charpoly_berkowitz(m)?;
    let c0 = cp[0].clone();
    Ok(if m.rows % 2 == 0 { c0 } else { c0.neg() })
}

impl MatRF {
    pub fn derivative(&self) -> MatRF {
        self.map(RatFunc::derivative)
    }

    pub fn subst_pow(&self, n: usize) -> MatRF {
        self.map(|a| a.subst_pow(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;

    fn cofactor_det(m: &Mat<Poly>) -> Poly {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = m.get(0, 0).zero_like();
        for j in 0..n {
            let minor = Mat::from_fn(n - 1, n - 1, |a, b| {
                m.get(a + 1, if b < j { b } else { b + 1 }).clone()
            });
            let term = m.get(0, j).mul(&cofactor_det(&minor));
            acc = if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    #[test]
    fn berkowitz_small_examples() {
        let f = Field::prime(3).unwrap();
        let id = Mat::identity(&RatFunc::one(&f), 2);
        let cp = charpoly_berkowitz(&id).unwrap();
        assert_eq!(
            cp,
            vec![
                RatFunc::one(&f),
                RatFunc::from_ints(&f, &[-2]),
                RatFunc::one(&f)
            ]
        );

        let x = RatFunc::x(&f);
        let m = Mat::from_rows(vec![
            vec![RatFunc::zero(&f), x.clone()],
            vec![RatFunc::one(&f), RatFunc::zero(&f)],
        ])
        .unwrap();
        let cp = charpoly_berkowitz(&m).unwrap();
        assert_eq!(cp[0], -&x);
        assert!(cp[1].is_zero());

        let m = Mat::from_rows(vec![
            vec![RatFunc::from_ints(&f, &[2]), x.clone()],
            vec![x.pow(2), RatFunc::one(&f)],
        ])
        .unwrap();
        let cp = charpoly_berkowitz(&m).unwrap();
        assert_eq!(cp[0], RatFunc::from_ints(&f, &[2, 0, 0, 2]));
        assert!(cp[1].is_zero());
    }

    #[test]
    fn berkowitz_matches_cofactor_on_polynomial_matrices() {
        // det(cI - M) by cofactor expansion for every c in F_3; two monic
        // polynomials in t of degree <= 3 agreeing at 3 points are equal
        use rand::{Rng, SeedableRng};
        let f = Field::prime(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let m = Mat::from_fn(n, n, |_, _| {
                let c: Vec<i64> = (0..3).map(|_| rng.gen_range(0..3)).collect();
                Poly::from_ints(&f, &c)
            });
            let cp = charpoly_berkowitz(&m).unwrap();
            assert_eq!(cp.len(), n + 1);
            assert!(cp[n].is_one());
            // compare det(c I - M) for constant c in F_3 plus the top coefficient
            for c in 0..3 {
                let tc = Poly::from_ints(&f, &[c]);
                let shifted = Mat::from_fn(n, n, |i, j| {
                    let e = m.get(i, j).neg();
                    if i == j {
                        e.add(&tc)
                    } else {
                        e
                    }
                });
                let direct = cofactor_det(&shifted);
                let mut horner = Poly::zero(&f);
                for coeff in cp.iter().rev() {
                    horner = horner.mul(&tc).add(coeff);
                }
                assert_eq!(direct, horner);
            }
            // trace check on the subleading coefficient
            let tr = (0..n).fold(Poly::zero(&f), |acc, i| acc.add(m.get(i, i)));
            assert_eq!(cp[n - 1], tr.neg());
        }
    }

    #[test]
    fn inverse_and_kernel() {
        let f = Field::prime(5).unwrap();
        let x = RatFunc::x(&f);
        let one = RatFunc::one(&f);
        let m = Mat::from_rows(vec![
            vec![x.clone(), one.clone()],
            vec![one.clone(), x.clone()],
        ])
        .unwrap();
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(&one, 2));
        let sing = Mat::from_rows(vec![
            vec![x.clone(), x.pow(2)],
            vec![one.clone(), x.clone()],
        ])
        .unwrap();
        assert!(inverse(&sing).is_none());
        let k = kernel(&sing);
        assert_eq!(k.len(), 1);
        assert!(sing.mul_vec(&k[0]).iter().all(RatFunc::is_zero));
        assert_eq!(det(&sing).unwrap(), RatFunc::zero(&f));
    }
}
