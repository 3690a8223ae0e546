use super::{internal, require_valid, Conn0, DmBundle};
use crate::error::Result;

/// A coordinate flag `E^j = span(e_{perm[0]}, .., e_{perm[j-1]})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagP1 {
    pub perm: Vec<usize>,
}

impl FlagP1 {
    pub fn identity(r: usize) -> FlagP1 {
        FlagP1 {
            perm: (0..r).collect(),
        }
    }

    /// Degrees of the line bundles `E^j / E^{j-1}`.
    pub fn graded_degrees(&self, degrees: &[i64]) -> Vec<i64> {
        self.perm.iter().map(|&i| degrees[i]).collect()
    }

    fn is_permutation(&self, r: usize) -> bool {
        let mut seen = vec![false; r];
        self.perm.len() == r
            && self
                .perm
                .iter()
                .all(|&i| i < r && !std::mem::replace(&mut seen[i], true))
    }
}

/// Whether every step of `f` is preserved by the connection. Coordinate
/// spans are direct summands of the split bundle, so stability is the only
/// condition: no `A[i][s]` with `s` inside a prefix and `i` outside it.
pub fn verify_flag(c: &Conn0, f: &FlagP1) -> bool {
    let r = c.rank();
    if !f.is_permutation(r) {
        return false;
    }
    (0..r).all(|b| (b + 1..r).all(|a| c.a.get(f.perm[a], f.perm[b]).is_zero()))
}

/// A complete flag of a level-0 connection: sort the summands by descending
/// degree (stable on ties). `nabla` only moves `e_i` into summands of degree
/// at least `d_i + 2`, so every prefix is stable.
pub fn complete_flag(c: &Conn0) -> Result<FlagP1> {
    require_valid(c)?;
    let mut perm: Vec<usize> = (0..c.rank()).collect();
    perm.sort_by(|&a, &b| c.degrees[b].cmp(&c.degrees[a]));
    let flag = FlagP1 { perm };
    if !verify_flag(c, &flag) {
        return Err(internal(format!(
            "sorted flag {:?} is not stable",
            flag.perm
        )));
    }
    Ok(flag)
}

/// A complete flag of a level-`m` module: computed on the base connection
/// on the `m`-th twist and pulled back (same permutation; graded degrees
/// scale by `p^m`).
pub fn complete_flag_dm(d: &DmBundle) -> Result<FlagP1> {
    complete_flag(&d.base)
}

#[cfg(test)]
mod tests {
    use super::super::tests::c_example;
    use super::*;
    use crate::algebra::{Field, Mat, Poly};

    #[test]
    fn canonical_flags() {
        let f3 = Field::prime(3).unwrap();
        let c = Conn0::trivial(&f3, vec![0, 6, -3, 6]).unwrap();
        let f = complete_flag(&c).unwrap();
        assert_eq!(f.perm, vec![1, 3, 0, 2]);
        assert_eq!(f.graded_degrees(c.degrees()), vec![6, 6, 0, -3]);
        // with A = 0 every ordering is stable
        assert!(verify_flag(
            &c,
            &FlagP1 {
                perm: vec![2, 0, 3, 1]
            }
        ));
        assert!(!verify_flag(
            &c,
            &FlagP1 {
                perm: vec![0, 0, 1, 2]
            }
        ));
        assert!(!verify_flag(&c, &FlagP1 { perm: vec![0, 1] }));
    }

    #[test]
    fn example_flags() {
        let f2 = Field::prime(2).unwrap();
        let c = c_example(&f2, vec![2, 0], &[1]);
        assert_eq!(complete_flag(&c).unwrap(), FlagP1::identity(2));
        assert!(!verify_flag(&c, &FlagP1 { perm: vec![1, 0] }));
        let c = c_example(&f2, vec![4, 0], &[1, 1, 1]);
        assert_eq!(complete_flag(&c).unwrap(), FlagP1::identity(2));
        let d = DmBundle::new(2, c);
        let f = complete_flag_dm(&d).unwrap();
        assert_eq!(f.graded_degrees(&d.underlying_degrees()), vec![16, 0]);
    }

    #[test]
    fn invalid_input_rejected() {
        let f2 = Field::prime(2).unwrap();
        let mut a = Mat::zeros(&Poly::zero(&f2), 2, 2);
        a.set(1, 0, Poly::one(&f2));
        let bad = Conn0::new(&f2, vec![2, 0], a).unwrap();
        assert!(complete_flag(&bad).is_err());
    }
}
