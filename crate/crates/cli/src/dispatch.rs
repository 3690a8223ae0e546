//! Subcommand implementations. Every command takes a JSON input plus a map
//! of numeric flags and returns a result payload together with the named
//! invariants it checked.

use serde_json::{json, Map, Value};

use pflag::algebra::{
    charpoly_berkowitz, find_irreducible, in_frobenius_subfield, roots_in_field, sqrt_ratfunc,
    Field, MatRF, RatFunc,
};
use pflag::elliptic::{
    admits_connection, atiyah_profile, bundle_admits_connection, flag_skeleton, hom_constraint,
    line_classes, peel_order, AtiyahAtom, HomConstraint, Pic0Group,
};
use pflag::hitchin::{
    char_poly_psi, hitchin_dims, nilpotent_flag_chart, no_flag_certificate_rank2,
    p_curvature_chart, ChartConn, Verdict, Witness,
};
use pflag::json::*;
use pflag::pone::{
    admits_level, canonical_connection, cartier_descent, complete_flag_dm, dual,
    frobenius_pullback, is_nilpotent, p_curvature, pm1_curvature, reconstruct_from_frame,
    satisfies_entry_bounds, tensor, validate, verify_flag, BundleP1,
};
use pflag::{connection, Error, Result};

/// Subcommands exposed on the command line.
pub const PUBLIC: &[&str] = &[
    "pone-check",
    "pone-pcurv",
    "pone-flag",
    "pone-descend",
    "pone-pullback",
    "ell-profile",
    "ell-classes",
    "ell-admits",
    "ell-skeleton",
    "ell-peel",
    "hit-charpoly",
    "hit-dims",
    "hit-cert",
    "hit-nilflag",
];

/// Extra operations reachable only from fixtures.
pub const INTERNAL: &[&str] = &[
    "alg-irreducible",
    "alg-charpoly",
    "alg-sqrt",
    "alg-frobenius",
    "alg-roots",
    "pone-admits",
    "pone-canonical",
    "pone-tensor",
    "pone-dual",
    "pone-verify-flag",
    "ell-hom",
];

pub struct Outcome {
    pub result: Value,
    pub checks: Vec<(String, bool)>,
}

impl Outcome {
    fn new(result: Value) -> Outcome {
        Outcome {
            result,
            checks: Vec::new(),
        }
    }

    fn check(mut self, name: &str, ok: bool) -> Outcome {
        self.checks.push((name.to_string(), ok));
        self
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Look a key up in the flags first, then in the input object.
fn lookup<'a>(args: &'a Map<String, Value>, input: &'a Value, key: &str) -> Result<&'a Value> {
    match args.get(key) {
        Some(v) => Ok(v),
        None => get(input, key),
    }
}

fn lookup_or(args: &Map<String, Value>, input: &Value, key: &str, default: i64) -> Result<i64> {
    match args.get(key).or_else(|| input.get(key)) {
        Some(v) => as_i64(v),
        None => Ok(default),
    }
}

fn group(input: &Value) -> Result<Pic0Group> {
    match input.get("group") {
        Some(g) => group_from_json(g),
        None => Ok(Pic0Group::trivial()),
    }
}

fn atoms(g: &Pic0Group, input: &Value) -> Result<Vec<AtiyahAtom>> {
    as_array(get(input, "atoms")?)?
        .iter()
        .map(|a| atom_from_json(g, a))
        .collect()
}

fn prime_arg(args: &Map<String, Value>, input: &Value) -> Result<u32> {
    as_u32(lookup(args, input, "p")?)
}

fn matrf_of(field: &Field, v: &Value) -> Result<MatRF> {
    matrf_from_json(field, v)
}

pub fn run(cmd: &str, input: &Value, args: &Map<String, Value>) -> Result<Outcome> {
    match cmd {
        "pone-check" => {
            let d = dm_from_json(input)?;
            let vs = validate(&d.base);
            let agree = vs.is_empty() == satisfies_entry_bounds(&d.base);
            Ok(Outcome::new(json!({
                "valid": vs.is_empty(),
                "violations": violations_to_json(&vs),
                "level": d.m,
                "underlying_degrees": d.underlying_degrees(),
            }))
            .check("validators_agree", agree)
            .check("extends_over_infinity", vs.is_empty()))
        }
        "pone-pcurv" => {
            let d = dm_from_json(input)?;
            let psi = pm1_curvature(&d)?;
            let chart = p_curvature_chart(&ChartConn::embed(&d.base))?;
            let agree = chart == p_curvature(&d.base)?;
            Ok(Outcome::new(json!({
                "level": d.m,
                "curvature": matrf_to_json(&psi),
                "zero": psi.is_zero(),
                "nilpotent": is_nilpotent(&psi),
            }))
            .check("nilpotent", is_nilpotent(&psi))
            .check("chart_curvature_agrees", agree))
        }
        "pone-flag" => {
            let d = dm_from_json(input)?;
            let flag = complete_flag_dm(&d)?;
            let graded = flag.graded_degrees(&d.underlying_degrees());
            Ok(Outcome::new(json!({
                "flag": flag_to_json(&flag),
                "graded_degrees": graded,
            }))
            .check("flag_stable", verify_flag(&d.base, &flag))
            .check(
                "graded_non_increasing",
                graded.windows(2).all(|w| w[0] >= w[1]),
            ))
        }
        "pone-descend" => {
            let c = conn0_from_json(input)?;
            let desc = cartier_descent(&c)?;
            let a = c.matrix_rf();
            let horizontal =
                (0..desc.frame.cols()).all(|j| connection::is_horizontal(&a, &desc.frame.col(j)));
            let rebuilt = reconstruct_from_frame(c.field(), &desc)? == a;
            Ok(Outcome::new(json!({ "descent": descent_to_json(&desc) }))
                .check("frame_horizontal", horizontal)
                .check("reconstruction_matches", rebuilt))
        }
        "pone-pullback" => {
            let d = dm_from_json(input)?;
            let s = lookup_or(args, input, "s", 1)?;
            let s: u32 = s
                .try_into()
                .map_err(|_| Error::Precondition(format!("pullback needs s >= 1, got {s}")))?;
            let pb = frobenius_pullback(&d, s)?;
            let p = d.field().p() as usize;
            let substituted = pm1_curvature(&pb)? == pm1_curvature(&d)?.subst_pow(p.pow(s));
            Ok(Outcome::new(json!({
                "pullback": conn_to_json(&pb),
                "underlying_degrees": pb.underlying_degrees(),
            }))
            .check("curvature_substitution", substituted))
        }
        "ell-profile" => {
            let r = as_i64(lookup(args, input, "r")?)?;
            let d = as_i64(lookup(args, input, "d")?)?;
            let prof = atiyah_profile(r, d)?;
            let (rm, dm) = prof.pairs[prof.m];
            let rank_sum = prof.gr_ranks.iter().sum::<i64>() == r;
            let deg_sum = prof
                .gr_ranks
                .iter()
                .zip(&prof.deg_l)
                .map(|(g, l)| g * l)
                .sum::<i64>()
                == d;
            Ok(Outcome::new(profile_to_json(&prof))
                .check("rank_sum", rank_sum)
                .check("degree_sum", deg_sum)
                .check("terminal_step_divisible", dm % rm == 0 && prof.h == rm))
        }
        "ell-classes" => {
            let g = group(input)?;
            let a = atom_from_json(&g, get(input, "atom")?)?;
            let classes = line_classes(&a)?;
            let prof = atiyah_profile(a.r, a.d)?;
            Ok(Outcome::new(json!({
                "classes": classes.iter().map(class_to_json).collect::<Vec<_>>(),
                "profile": profile_to_json(&prof),
            }))
            .check("length_is_ell", classes.len() == prof.ell))
        }
        "ell-admits" => {
            let g = group(input)?;
            let atoms = atoms(&g, input)?;
            let p = prime_arg(args, input)?;
            let each = atoms
                .iter()
                .map(|a| admits_connection(a, p))
                .collect::<Result<Vec<_>>>()?;
            let all = bundle_admits_connection(&atoms, p)?;
            Ok(Outcome::new(json!({ "admits": all, "per_atom": each }))
                .check("conjunction", all == each.iter().all(|&b| b)))
        }
        "ell-skeleton" => {
            let g = group(input)?;
            let atoms = atoms(&g, input)?;
            let p = prime_arg(args, input)?;
            let s = flag_skeleton(&atoms, p)?;
            Ok(Outcome::new(json!({ "skeleton": skeleton_to_json(&s) }))
                .check(
                    "rank_conservation",
                    s.total_multiplicity() == atoms.iter().map(|a| a.r).sum::<i64>(),
                )
                .check(
                    "degree_conservation",
                    s.degree_sum() == atoms.iter().map(|a| a.d).sum::<i64>(),
                ))
        }
        "ell-peel" => {
            let g = group(input)?;
            let atoms = atoms(&g, input)?;
            let order = peel_order(&atoms)?;
            let hom = atoms
                .iter()
                .map(|a| {
                    atoms
                        .iter()
                        .map(|b| hom_constraint(a, b))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let diagonal = (0..atoms.len()).all(|i| hom[i][i] == HomConstraint::PreservesFil1);
            let hom_json: Vec<Vec<Value>> = hom
                .iter()
                .map(|row| row.iter().map(|&h| hom_constraint_to_json(h)).collect())
                .collect();
            Ok(Outcome::new(json!({
                "order": order.iter().map(class_to_json).collect::<Vec<_>>(),
                "hom": hom_json,
            }))
            .check("hom_diagonal_preserves", diagonal)
            .check(
                "order_descending",
                order.windows(2).all(|w| w[0].degree >= w[1].degree),
            ))
        }
        "hit-charpoly" => {
            let c = chart_from_json(input)?;
            let psi = p_curvature_chart(&c)?;
            let cp = char_poly_psi(&c)?;
            Ok(Outcome::new(json!({
                "psi": matrf_to_json(&psi),
                "charpoly": charpoly_to_json(&cp),
            }))
            .check("descent", cp.descent_ok))
        }
        "hit-dims" => {
            let g = as_i64(lookup(args, input, "g")?)?;
            let r = as_i64(lookup(args, input, "r")?)?;
            let dims = hitchin_dims(g, r)?;
            // dim H^0(Omega) = g and dim H^0(Omega^i) = (2i - 1)(g - 1) for i >= 2
            let summed = g + (2..=r).map(|i| (2 * i - 1) * (g - 1)).sum::<i64>();
            Ok(Outcome::new(dims_to_json(&dims))
                .check("sum_of_sections", summed == dims.dim_b)
                .check("base_dimension", dims.dim_d == r * g))
        }
        "hit-cert" => {
            let c = chart_from_json(input)?;
            let cert = no_flag_certificate_rank2(&c)?;
            let consistent = match (&cert.witness, cert.verdict) {
                (Witness::NonSquare { value }, Verdict::Certified) => sqrt_ratfunc(value).is_none(),
                (Witness::SquareRoot { value, root }, Verdict::NotCertified) => {
                    &(root * root) == value
                }
                (Witness::TraceNonzeroChar2 { trace }, Verdict::Unknown) => !trace.is_zero(),
                _ => false,
            };
            Ok(Outcome::new(certificate_to_json(&cert))
                .check("witness_consistent", consistent)
                .check("descent", cert.charpoly.descent_ok))
        }
        "hit-nilflag" => {
            let c = chart_from_json(input)?;
            let flag = nilpotent_flag_chart(&c)?;
            let recomputed = connection::gauge(&c.a, &flag.gauge)? == flag.transformed;
            Ok(Outcome::new(chart_flag_to_json(&flag))
                .check("gauge_recomputed", recomputed)
                .check("upper_triangular", flag.transformed.is_upper()))
        }
        _ => run_internal(cmd, input, args),
    }
}

fn field_of(input: &Value) -> Result<Field> {
    field_from_json(get(input, "field")?)
}

fn run_internal(cmd: &str, input: &Value, args: &Map<String, Value>) -> Result<Outcome> {
    match cmd {
        "alg-irreducible" => {
            let p = prime_arg(args, input)?;
            let k = as_u32(lookup(args, input, "k")?)?;
            let m = find_irreducible(p, k)?;
            Ok(Outcome::new(json!({ "modulus": poly_to_json(&m) })).check("monic", m.is_monic()))
        }
        "alg-charpoly" => {
            let f = field_of(input)?;
            let m = matrf_of(&f, get(input, "M")?)?;
            let chi = charpoly_berkowitz(&m)?;
            let monic = chi.last() == Some(&RatFunc::one(&f));
            Ok(Outcome::new(
                json!({ "coeffs": chi.iter().map(ratfunc_to_json).collect::<Vec<_>>() }),
            )
            .check("monic", monic))
        }
        "alg-sqrt" => {
            let f = field_of(input)?;
            let a = ratfunc_from_json(&f, get(input, "f")?)?;
            let root = sqrt_ratfunc(&a);
            let ok = root.as_ref().is_none_or(|h| h * h == a);
            Ok(
                Outcome::new(json!({ "root": root.as_ref().map(ratfunc_to_json) }))
                    .check("root_squares_back", ok),
            )
        }
        "alg-frobenius" => {
            let f = field_of(input)?;
            let a = ratfunc_from_json(&f, get(input, "f")?)?;
            let s = lookup_or(args, input, "s", 1)? as u32;
            let member = in_frobenius_subfield(&a, s);
            let ok = s != 1 || member == a.derivative().is_zero();
            Ok(Outcome::new(json!({ "member": member })).check("derivative_test", ok))
        }
        "alg-roots" => {
            let f = field_of(input)?;
            let g = poly_from_json(&f, get(input, "f")?)?;
            let mut roots = roots_in_field(&g)?;
            roots.sort();
            roots.dedup();
            let ok = f
                .elements()
                .all(|a| g.eval(a).is_zero() == roots.contains(&a));
            Ok(Outcome::new(
                json!({ "roots": roots.iter().map(|&a| fe_to_json(&f, a)).collect::<Vec<_>>() }),
            )
            .check("matches_evaluation", ok))
        }
        "pone-admits" => {
            let p = prime_arg(args, input)?;
            let m = as_u32(lookup(args, input, "m")?)?;
            let b = BundleP1::new(i64_list(get(input, "degrees")?)?)?;
            Ok(Outcome::new(json!({ "admits": admits_level(&b, p, m) })))
        }
        "pone-canonical" => {
            let f = field_of(input)?;
            let m = as_u32(lookup(args, input, "m")?)?;
            let b = BundleP1::new(i64_list(get(input, "degrees")?)?)?;
            let d = canonical_connection(&f, &b, m)?;
            Ok(Outcome::new(json!({ "connection": conn_to_json(&d) }))
                .check("canonical", d.base.is_canonical())
                .check("curvature_zero", pm1_curvature(&d)?.is_zero()))
        }
        "pone-tensor" => {
            let a = conn0_from_json(get(input, "a")?)?;
            let b = conn0_from_json(get(input, "b")?)?;
            let (t, perm) = tensor(&a, &b)?;
            Ok(
                Outcome::new(json!({ "connection": conn0_to_json(&t), "perm": perm }))
                    .check("valid", validate(&t).is_empty()),
            )
        }
        "pone-dual" => {
            let a = conn0_from_json(get(input, "connection")?)?;
            let (t, perm) = dual(&a)?;
            Ok(
                Outcome::new(json!({ "connection": conn0_to_json(&t), "perm": perm }))
                    .check("valid", validate(&t).is_empty()),
            )
        }
        "pone-verify-flag" => {
            let c = conn0_from_json(get(input, "connection")?)?;
            let flag = flag_from_json(get(input, "flag")?)?;
            Ok(Outcome::new(json!({ "stable": verify_flag(&c, &flag) })))
        }
        "ell-hom" => {
            let g = group(input)?;
            let src = atom_from_json(&g, get(input, "src")?)?;
            let dst = atom_from_json(&g, get(input, "dst")?)?;
            Ok(Outcome::new(
                json!({ "constraint": hom_constraint_to_json(hom_constraint(&src, &dst)?) }),
            ))
        }
        other => Err(Error::Parse(format!("unknown subcommand {other:?}"))),
    }
}

/// Module a command belongs to, for selftest filtering.
pub fn module_of(cmd: &str) -> &'static str {
    match cmd.split('-').next() {
        Some("alg") => "algebra",
        Some("pone") => "pone",
        Some("ell") => "elliptic",
        Some("hit") => "hitchin",
        _ => "cli",
    }
}
