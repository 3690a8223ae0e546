use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pflag::elliptic::{
    atiyah_profile, flag_skeleton, hom_constraint, line_classes, peel_order, AtiyahAtom,
    HomConstraint,
};
use pflag::sample;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn profile_invariants(r in 1i64..=400, d in -20_000i64..=20_000) {
        let p = atiyah_profile(r, d).unwrap();
        prop_assert_eq!(p.pairs[0], (r, d));
        prop_assert_eq!(p.pairs.len(), p.m + 1);
        let (rm, dm) = p.pairs[p.m];
        prop_assert_eq!(dm % rm, 0);
        prop_assert_eq!(p.h, rm);
        prop_assert_eq!(p.gr_ranks.iter().sum::<i64>(), r);
        prop_assert_eq!(p.gr_ranks.iter().zip(&p.deg_l).map(|(g, l)| g * l).sum::<i64>(), d);
        prop_assert!(p.gr_ranks.iter().all(|&g| g >= 1));
        // ranks strictly drop, and the graded slopes never decrease
        prop_assert!(p.pairs.windows(2).all(|w| w[1].0 < w[0].0));
        prop_assert!(p.deg_l.windows(2).all(|w| w[0] <= w[1]));
        // the first step is the floor of the slope
        prop_assert_eq!(p.deg_l[0], (d as f64 / r as f64).floor() as i64);
    }

    #[test]
    fn classes_and_skeleton(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let g = sample::group(&mut rng);
        let atoms: Vec<AtiyahAtom> =
            (0..rng.gen_range(1..=5)).map(|_| sample::admissible_atom(&g, &mut rng, p, 10)).collect();
        for a in &atoms {
            let prof = atiyah_profile(a.r, a.d).unwrap();
            let classes = line_classes(a).unwrap();
            prop_assert_eq!(classes.len(), prof.ell);
            for (j, c) in classes.iter().enumerate() {
                if j < prof.m {
                    prop_assert!(c.tor.iter().all(|&t| t == 0));
                } else {
                    prop_assert_eq!(&c.tor, &a.lam);
                }
            }
        }
        let s = flag_skeleton(&atoms, p).unwrap();
        prop_assert_eq!(s.total_multiplicity(), atoms.iter().map(|a| a.r).sum::<i64>());
        prop_assert_eq!(s.degree_sum(), atoms.iter().map(|a| a.d).sum::<i64>());
        prop_assert!(s.entries.windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(s.entries.iter().all(|(c, n)| *n > 0 && c.degree % p as i64 == 0));
        // torsion parts: each atom contributes h copies of lam
        for (k, &n) in g.factors().iter().enumerate() {
            let got: i64 = s.entries.iter().map(|(c, m)| c.tor[k] * m).sum();
            let want: i64 = atoms
                .iter()
                .map(|a| atiyah_profile(a.r, a.d).unwrap().h * a.lam[k])
                .sum();
            prop_assert_eq!(got.rem_euclid(n), want.rem_euclid(n));
        }
    }

    #[test]
    fn hom_and_peel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample::group(&mut rng);
        let atoms: Vec<AtiyahAtom> =
            (0..rng.gen_range(1..=6)).map(|_| sample::atom(&g, &mut rng, 6, 12)).collect();
        for a in &atoms {
            prop_assert_eq!(hom_constraint(a, a).unwrap(), HomConstraint::PreservesFil1);
            for b in &atoms {
                if hom_constraint(a, b).unwrap() == HomConstraint::ForcesZeroOnFil1 {
                    prop_assert_ne!(hom_constraint(b, a).unwrap(), HomConstraint::ForcesZeroOnFil1);
                }
            }
        }
        let order = peel_order(&atoms).unwrap();
        prop_assert!(order.windows(2).all(|w| w[0].degree >= w[1].degree && w[0] != w[1]));
        for a in &atoms {
            prop_assert!(order.contains(&line_classes(a).unwrap()[0]));
        }
        let mut distinct: Vec<_> = atoms.iter().map(|a| line_classes(a).unwrap()[0].clone()).collect();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(order.len(), distinct.len());
    }
}
