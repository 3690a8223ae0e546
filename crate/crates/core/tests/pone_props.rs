use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pflag::algebra::{Mat, Poly, RatFunc};
use pflag::connection;
use pflag::pone::{
    cartier_descent, complete_flag, dual, is_nilpotent, p_curvature, reconstruct_from_frame,
    satisfies_entry_bounds, tensor, validate, verify_flag, Conn0,
};
use pflag::sample;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Arbitrary degrees and entries straddling the bound `d_j - d_i - 2`.
fn arbitrary_conn0(seed: u64) -> Conn0 {
    let mut rng = rng(seed);
    let f = sample::prime(&mut rng, &[2, 3, 5]);
    let r = rng.gen_range(1..=4);
    let degrees: Vec<i64> = (0..r)
        .map(|_| {
            if rng.gen_bool(0.6) {
                f.p() as i64 * rng.gen_range(-2..=2)
            } else {
                rng.gen_range(-6..=6)
            }
        })
        .collect();
    let a = Mat::from_fn(r, r, |j, i| {
        let bound = degrees[j] - degrees[i] - 2;
        let deg = rng.gen_range(-1..=bound.max(-1) + 1);
        if deg < 0 || rng.gen_bool(0.4) {
            Poly::zero(&f)
        } else {
            let mut p = sample::poly(&f, &mut rng, deg as usize);
            if rng.gen_bool(0.5) {
                // force the top coefficient so the degree is exact
                p = &p + &Poly::monomial(&f, sample::nonzero_element(&f, &mut rng), deg as usize);
            }
            p
        }
    });
    Conn0::new(&f, degrees, a).unwrap()
}

fn valid(seed: u64, r_max: usize) -> Conn0 {
    let mut rng = rng(seed);
    let f = sample::prime(&mut rng, &[2, 3, 5]);
    let r = rng.gen_range(1..=r_max);
    sample::valid_conn0(&f, &mut rng, r, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn validators_agree(seed in any::<u64>()) {
        let c = arbitrary_conn0(seed);
        prop_assert_eq!(validate(&c).is_empty(), satisfies_entry_bounds(&c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn curvature_is_linear_and_nilpotent(seed in any::<u64>()) {
        let c = valid(seed, 4);
        let psi = p_curvature(&c).unwrap();
        prop_assert!(is_nilpotent(&psi));
        let mut rng = rng(seed ^ 1);
        let f = c.field().clone();
        let g = sample::ratfunc(&f, &mut rng, 3);
        let v: Vec<RatFunc> = (0..c.rank()).map(|_| sample::ratfunc(&f, &mut rng, 2)).collect();
        let gv: Vec<RatFunc> = v.iter().map(|e| &g * e).collect();
        let lhs = connection::apply_n(&c.matrix_rf(), &gv, f.p());
        let rhs: Vec<RatFunc> = psi.mul_vec(&v).iter().map(|e| &g * e).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn flags_are_stable_and_sorted(seed in any::<u64>()) {
        let c = valid(seed, 4);
        let flag = complete_flag(&c).unwrap();
        prop_assert!(verify_flag(&c, &flag));
        let graded = flag.graded_degrees(c.degrees());
        prop_assert!(graded.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn automorphism_gauge_keeps_validity(seed in any::<u64>()) {
        let c = valid(seed, 4);
        let mut rng = rng(seed ^ 2);
        let g = sample::unipotent_automorphism(c.field(), &mut rng, c.degrees());
        let moved = connection::gauge(&c.matrix_rf(), &g.map(|e| RatFunc::from(e.clone()))).unwrap();
        let moved = moved.map(|e| e.as_poly().expect("polynomial").clone());
        let c2 = Conn0::new(c.field(), c.degrees().to_vec(), moved).unwrap();
        prop_assert!(validate(&c2).is_empty());
        prop_assert!(verify_flag(&c2, &complete_flag(&c2).unwrap()));
    }

    #[test]
    fn descent_round_trip(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let r = rng.gen_range(1..=4);
        let c = sample::flat_conn0(&f, &mut rng, r, 2);
        let d = cartier_descent(&c).unwrap();
        prop_assert!(d.frame.cols() == r);
        for j in 0..r {
            prop_assert!(connection::is_horizontal(&c.matrix_rf(), &d.frame.col(j)));
        }
        prop_assert_eq!(reconstruct_from_frame(&f, &d).unwrap(), c.matrix_rf());
    }

    /// `psi` of `A (x) 1 + 1 (x) B` is `psi_A (x) 1 + 1 (x) psi_B`; of `-A^T`
    /// it is `-psi_A^T`.
    #[test]
    fn tensor_and_dual(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let (ra, rb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a = sample::valid_conn0(&f, &mut rng, ra, 2);
        let b = sample::valid_conn0(&f, &mut rng, rb, 2);
        let (t, perm) = tensor(&a, &b).unwrap();
        prop_assert!(validate(&t).is_empty());
        let (pa, pb) = (p_curvature(&a).unwrap(), p_curvature(&b).unwrap());
        let one = RatFunc::one(&f);
        let expect = pa
            .kronecker(&Mat::identity(&one, rb))
            .add(&Mat::identity(&one, ra).kronecker(&pb))
            .permute(&perm);
        prop_assert_eq!(p_curvature(&t).unwrap(), expect);

        let (d, perm) = dual(&a).unwrap();
        prop_assert!(validate(&d).is_empty());
        prop_assert_eq!(p_curvature(&d).unwrap(), pa.transpose().neg().permute(&perm));
    }
}

#[test]
fn arbitrary_generator_covers_both_outcomes() {
    let valid_count = (0..500u64)
        .filter(|&s| validate(&arbitrary_conn0(s)).is_empty())
        .count();
    assert!(
        valid_count > 50 && valid_count < 450,
        "{valid_count} of 500 valid"
    );
}
