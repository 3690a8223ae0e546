//! Atiyah's canonical filtration on indecomposable bundles over a genus-one
//! curve, reduced to integer and class-group data.
//!
//! Degree-zero line bundle classes are modeled by a finite abelian group
//! `Z/n_1 x ... x Z/n_t` fixed by the caller; the marked point is the zero
//! class, so `O(c sigma)` is `(c, 0)`.

use std::collections::BTreeMap;

use crate::error::{precondition, Error, Result};

/// Invariant factors of the finite group standing in for `Pic^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pic0Group {
    factors: Vec<i64>,
}

impl Pic0Group {
    pub fn new(factors: Vec<i64>) -> Result<Pic0Group> {
        if let Some(bad) = factors.iter().find(|&&n| n < 1) {
            return precondition(format!("invariant factor {bad} must be >= 1"));
        }
        Ok(Pic0Group { factors })
    }

    pub fn trivial() -> Pic0Group {
        Pic0Group {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn reduce(&self, tor: &[i64]) -> Result<Vec<i64>> {
        if tor.len() != self.factors.len() {
            return Err(Error::Parse(format!(
                "torsion vector {tor:?} has {} components, group has {}",
                tor.len(),
                self.factors.len()
            )));
        }
        Ok(tor
            .iter()
            .zip(&self.factors)
            .map(|(t, n)| t.rem_euclid(*n))
            .collect())
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }
}

/// A line bundle class: degree plus a reduced element of the `Pic^0` model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PicClass {
    pub degree: i64,
    pub tor: Vec<i64>,
}

/// Indecomposable bundle of rank `r`, degree `d`, with `lam` the degree-zero
/// part of the terminal line bundle of its filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtiyahAtom {
    pub r: i64,
    pub d: i64,
    pub lam: Vec<i64>,
}

impl AtiyahAtom {
    pub fn new(group: &Pic0Group, r: i64, d: i64, lam: &[i64]) -> Result<AtiyahAtom> {
        if r < 1 {
            return precondition(format!("rank {r} must be >= 1"));
        }
        Ok(AtiyahAtom {
            r,
            d,
            lam: group.reduce(lam)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtiyahProfile {
    /// `(r_j, d_j)` for `j = 0..=m`.
    pub pairs: Vec<(i64, i64)>,
    /// `deg L_1 .. deg L_l`.
    pub deg_l: Vec<i64>,
    pub m: usize,
    pub ell: usize,
    pub h: i64,
    /// Ranks of `Fil^j / Fil^{j-1}` for `j = 1..=l`.
    pub gr_ranks: Vec<i64>,
}

/// Run the filtration recursion on `(r, d)`.
pub fn atiyah_profile(r: i64, d: i64) -> Result<AtiyahProfile> {
    if r < 1 {
        return precondition(format!("rank {r} must be >= 1"));
    }
    let mut pairs = vec![(r, d)];
    let mut deg_l = Vec::new();
    let mut gr_ranks = Vec::new();
    let (mut rj, mut dj) = (r, d);
    while dj.rem_euclid(rj) != 0 {
        let fl = dj.div_euclid(rj);
        let rem = dj - rj * fl;
        deg_l.push(fl);
        gr_ranks.push(rem);
        (rj, dj) = (rj - rem, dj - fl * rem);
        pairs.push((rj, dj));
    }
    let m = deg_l.len();
    let tail = dj / rj;
    deg_l.extend(std::iter::repeat_n(tail, rj as usize));
    gr_ranks.extend(std::iter::repeat_n(1, rj as usize));
    Ok(AtiyahProfile {
        pairs,
        deg_l,
        m,
        ell: m + rj as usize,
        h: rj,
        gr_ranks,
    })
}

/// `L(E) = (L_1, .., L_l)`: `O(deg L_j sigma)` up to `m`, then the terminal
/// class of degree `d_m / h` twisted by `lam`.
pub fn line_classes(a: &AtiyahAtom) -> Result<Vec<PicClass>> {
    let prof = atiyah_profile(a.r, a.d)?;
    Ok(prof
        .deg_l
        .iter()
        .enumerate()
        .map(|(j, &deg)| PicClass {
            degree: deg,
            tor: if j < prof.m {
                vec![0; a.lam.len()]
            } else {
                a.lam.clone()
            },
        })
        .collect())
}

/// An atom carries a connection iff `p | deg L_j` for every `j`.
pub fn admits_connection(a: &AtiyahAtom, p: u32) -> Result<bool> {
    Ok(first_obstruction(a, p)?.is_none())
}

fn first_obstruction(a: &AtiyahAtom, p: u32) -> Result<Option<(usize, i64)>> {
    let prof = atiyah_profile(a.r, a.d)?;
    Ok(prof
        .deg_l
        .iter()
        .enumerate()
        .find(|(_, &deg)| deg % p as i64 != 0)
        .map(|(j, &deg)| (j + 1, deg)))
}

/// A direct sum carries a connection iff every summand does.
pub fn bundle_admits_connection(atoms: &[AtiyahAtom], p: u32) -> Result<bool> {
    for a in atoms {
        if !admits_connection(a, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Graded line classes, with multiplicity, of a complete flag refining the
/// canonical filtrations of all summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSkeleton {
    /// Sorted by `(degree, tor)`.
    pub entries: Vec<(PicClass, i64)>,
}

impl FlagSkeleton {
    pub fn total_multiplicity(&self) -> i64 {
        self.entries.iter().map(|(_, n)| n).sum()
    }

    pub fn degree_sum(&self) -> i64 {
        self.entries.iter().map(|(c, n)| c.degree * n).sum()
    }
}

pub fn flag_skeleton(atoms: &[AtiyahAtom], p: u32) -> Result<FlagSkeleton> {
    let mut counts: BTreeMap<PicClass, i64> = BTreeMap::new();
    for a in atoms {
        if let Some((j, deg)) = first_obstruction(a, p)? {
            return precondition(format!(
                "atom (r={}, d={}) has deg L_{j} = {deg}, not divisible by {p}",
                a.r, a.d
            ));
        }
        let prof = atiyah_profile(a.r, a.d)?;
        for (class, n) in line_classes(a)?.into_iter().zip(prof.gr_ranks) {
            *counts.entry(class).or_insert(0) += n;
        }
    }
    Ok(FlagSkeleton {
        entries: counts.into_iter().collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomConstraint {
    /// Every morphism maps `Fil^1(src)` into `Fil^1(dst)`.
    PreservesFil1,
    /// Every morphism kills `Fil^1(src)`.
    ForcesZeroOnFil1,
    NoConstraint,
}

fn first_class(a: &AtiyahAtom) -> Result<PicClass> {
    Ok(line_classes(a)?.swap_remove(0))
}

/// What the first line classes say about morphisms `src -> dst`.
pub fn hom_constraint(src: &AtiyahAtom, dst: &AtiyahAtom) -> Result<HomConstraint> {
    let l1 = first_class(src)?;
    let l1p = first_class(dst)?;
    Ok(if l1.degree > l1p.degree {
        HomConstraint::ForcesZeroOnFil1
    } else if l1 == l1p {
        HomConstraint::PreservesFil1
    } else {
        HomConstraint::NoConstraint
    })
}

/// Distinct first line classes of the summands, by descending degree; on
/// ties the torsion-free class `O(d sigma)` comes first and the rest follow
/// in lexicographic torsion order.
pub fn peel_order(atoms: &[AtiyahAtom]) -> Result<Vec<PicClass>> {
    let mut classes = atoms.iter().map(first_class).collect::<Result<Vec<_>>>()?;
    classes.sort_by(|a, b| {
        let a_plain = a.tor.iter().all(|&t| t == 0);
        let b_plain = b.tor.iter().all(|&t| t == 0);
        b.degree
            .cmp(&a.degree)
            .then(b_plain.cmp(&a_plain))
            .then(a.tor.cmp(&b.tor))
    });
    classes.dedup();
    Ok(classes)
}
