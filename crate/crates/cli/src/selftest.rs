//! Fixture corpus and fast property suites.
//!
//! A fixture is `{"name", "command", "input", "args"?, "expect": {"exit_code",
//! "result"?, "error_contains"?}}`. The expected result is matched as a
//! subset: every key it lists must be present and equal, arrays must match
//! elementwise.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use pflag::algebra::matrix::{charpoly_berkowitz, inverse};
use pflag::algebra::{Mat, RatFunc};
use pflag::elliptic::{atiyah_profile, flag_skeleton, line_classes, AtiyahAtom};
use pflag::hitchin::{
    char_poly_psi, nilpotent_flag_chart, no_flag_certificate_rank2, ChartConn, Verdict,
};
use pflag::pone::{
    cartier_descent, complete_flag, frobenius_pullback, is_nilpotent, p_curvature, pm1_curvature,
    reconstruct_from_frame, verify_flag, DmBundle,
};
use pflag::{connection, sample, Error};

use crate::dispatch;
use crate::report;

const CORPUS: &str = include_str!("../fixtures/corpus.json");

pub struct Item {
    pub name: String,
    pub module: String,
    pub kind: &'static str,
    pub failure: Option<String>,
}

impl Item {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("module".into(), json!(self.module));
        m.insert("kind".into(), json!(self.kind));
        m.insert("ok".into(), json!(self.failure.is_none()));
        if let Some(f) = &self.failure {
            m.insert("detail".into(), json!(f));
        }
        Value::Object(m)
    }
}

fn selected(filter: Option<&str>, module: &str, name: &str) -> bool {
    filter.is_none_or(|f| f == module || name.contains(f))
}

/// Whether `want` is contained in `got`; on mismatch, the path to it.
pub fn subset(want: &Value, got: &Value, path: &str) -> Result<(), String> {
    match (want, got) {
        (Value::Object(w), Value::Object(g)) => {
            for (k, wv) in w {
                let p = format!("{path}.{k}");
                match g.get(k) {
                    Some(gv) => subset(wv, gv, &p)?,
                    None => return Err(format!("{p} missing")),
                }
            }
            Ok(())
        }
        (Value::Array(w), Value::Array(g)) => {
            if w.len() != g.len() {
                return Err(format!(
                    "{path}: length {} != expected {}",
                    g.len(),
                    w.len()
                ));
            }
            for (i, (wv, gv)) in w.iter().zip(g).enumerate() {
                subset(wv, gv, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        _ if want == got => Ok(()),
        _ => Err(format!("{path}: got {got}, expected {want}")),
    }
}

fn run_fixture(fx: &Value) -> Result<(), String> {
    let command = fx["command"].as_str().ok_or("fixture has no command")?;
    if !dispatch::PUBLIC.contains(&command) && !dispatch::INTERNAL.contains(&command) {
        return Err(format!("unknown command {command:?}"));
    }
    let empty = Map::new();
    let args = fx.get("args").and_then(Value::as_object).unwrap_or(&empty);
    let input = fx.get("input").cloned().unwrap_or(json!({}));
    let expect = &fx["expect"];
    let want_code = expect["exit_code"]
        .as_i64()
        .ok_or("fixture has no expect.exit_code")?;
    let res = dispatch::run(command, &input, args);
    let code = report::exit_code(&res) as i64;
    if code != want_code {
        let why = match &res {
            Ok(o) => format!("checks {:?}", o.checks),
            Err(e) => e.to_string(),
        };
        return Err(format!("exit code {code}, expected {want_code} ({why})"));
    }
    if let Some(want) = expect.get("result") {
        match &res {
            Ok(o) => subset(want, &o.result, "result")?,
            Err(e) => return Err(format!("expected a result, got error: {e}")),
        }
    }
    if let Some(frag) = expect.get("error_contains").and_then(Value::as_str) {
        match &res {
            Err(e) if e.to_string().contains(frag) => {}
            Err(e) => return Err(format!("error {e:?} does not mention {frag:?}")),
            Ok(_) => return Err(format!("expected an error mentioning {frag:?}")),
        }
    }
    Ok(())
}

fn load_corpus(path: Option<&Path>) -> pflag::Result<(String, Vec<Value>)> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Parse(format!("reading {}: {e}", p.display())))?,
        None => CORPUS.to_string(),
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("corpus: {e}")))?;
    let fixtures = v
        .get("fixtures")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("corpus: expected {\"fixtures\": [...]}".into()))?
        .clone();
    Ok((text, fixtures))
}

pub fn run(
    corpus: Option<&Path>,
    filter: Option<&str>,
    seed: u64,
) -> pflag::Result<(String, Vec<Item>)> {
    let (text, fixtures) = load_corpus(corpus)?;
    let mut items = Vec::new();
    for fx in &fixtures {
        let name = fx["name"].as_str().unwrap_or("<unnamed>").to_string();
        let module = dispatch::module_of(fx["command"].as_str().unwrap_or("")).to_string();
        if !selected(filter, &module, &name) {
            continue;
        }
        let failure = run_fixture(fx).err();
        items.push(Item {
            name,
            module,
            kind: "fixture",
            failure,
        });
    }
    for (name, suite) in SUITES {
        let module = name.split('.').next().unwrap_or("");
        if !selected(filter, module, name) {
            continue;
        }
        let failure = suite(seed).err();
        items.push(Item {
            name: name.to_string(),
            module: module.to_string(),
            kind: "property",
            failure,
        });
    }
    Ok((text, items))
}

pub fn report(corpus: Option<&Path>, filter: Option<&str>, seed: u64) -> Value {
    let canonical = json!({
        "corpus": corpus.map(|p| p.display().to_string()),
        "filter": filter,
        "seed": seed,
    });
    let res = run(corpus, filter, seed).map(|(text, items)| {
        let passed = items.iter().filter(|i| i.failure.is_none()).count();
        let result = json!({
            "corpus_digest": report::digest(&json!(text)),
            "filter": filter,
            "seed": seed,
            "items": items.iter().map(Item::to_json).collect::<Vec<_>>(),
            "passed": passed,
            "failed": items.len() - passed,
        });
        let checks = items
            .iter()
            .map(|i| (i.name.clone(), i.failure.is_none()))
            .collect();
        dispatch::Outcome { result, checks }
    });
    report::build("selftest", &canonical, &res)
}

// property suites

type Suite = fn(u64) -> Result<(), String>;

const SUITES: &[(&str, Suite)] = &[
    ("algebra.cayley_hamilton", cayley_hamilton),
    ("pone.flags_and_nilpotence", flags_and_nilpotence),
    ("pone.descent_round_trip", descent_round_trip),
    ("pone.pullback_substitution", pullback_substitution),
    ("elliptic.profile_invariants", profile_invariants),
    ("elliptic.skeleton_conservation", skeleton_conservation),
    ("hitchin.charpoly_descends", charpoly_descends),
    ("hitchin.embedded_never_certified", embedded_never_certified),
    ("hitchin.nilpotent_flags", nilpotent_flags),
];

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: pflag::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn cayley_hamilton(seed: u64) -> Result<(), String> {
    for case in 0..30 {
        let mut rng = rng(seed, case);
        let f = sample::prime(&mut rng, &[2, 3, 5, 7]);
        let r = rng.gen_range(1..=4);
        let m = Mat::from_fn(r, r, |_, _| RatFunc::from(sample::poly(&f, &mut rng, 2)));
        let chi = lib(charpoly_berkowitz(&m))?;
        let one = RatFunc::one(&f);
        let mut acc = Mat::zeros(&one, r, r);
        let mut power = Mat::identity(&one, r);
        for c in &chi {
            acc = acc.add(&power.scale(c));
            power = power.mul(&m);
        }
        ensure!(
            acc.is_zero(),
            "case {case}: charpoly does not kill the matrix"
        );
        if let Some(inv) = inverse(&m) {
            ensure!(
                m.mul(&inv) == Mat::identity(&one, r),
                "case {case}: bad inverse"
            );
        }
    }
    Ok(())
}

fn flags_and_nilpotence(seed: u64) -> Result<(), String> {
    for case in 0..30 {
        let mut rng = rng(seed, 100 + case);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let r = rng.gen_range(1..=4);
        let c = sample::valid_conn0(&f, &mut rng, r, 2);
        ensure!(
            is_nilpotent(&lib(p_curvature(&c))?),
            "case {case}: p-curvature not nilpotent"
        );
        let flag = lib(complete_flag(&c))?;
        ensure!(verify_flag(&c, &flag), "case {case}: flag not stable");
    }
    Ok(())
}

fn descent_round_trip(seed: u64) -> Result<(), String> {
    for case in 0..15 {
        let mut rng = rng(seed, 200 + case);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let r = rng.gen_range(1..=3);
        let c = sample::flat_conn0(&f, &mut rng, r, 2);
        let d = lib(cartier_descent(&c))?;
        let a = c.matrix_rf();
        for j in 0..r {
            ensure!(
                connection::is_horizontal(&a, &d.frame.col(j)),
                "case {case}: column {j} not horizontal"
            );
        }
        ensure!(
            lib(reconstruct_from_frame(&f, &d))? == a,
            "case {case}: reconstruction differs"
        );
    }
    Ok(())
}

fn pullback_substitution(seed: u64) -> Result<(), String> {
    for case in 0..15 {
        let mut rng = rng(seed, 300 + case);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let r = rng.gen_range(1..=3);
        let d = DmBundle::new(
            rng.gen_range(0..=1),
            sample::valid_conn0(&f, &mut rng, r, 2),
        );
        let s = rng.gen_range(1..=2);
        let lhs = lib(pm1_curvature(&lib(frobenius_pullback(&d, s))?))?;
        let rhs = lib(pm1_curvature(&d))?.subst_pow((f.p() as usize).pow(s));
        ensure!(
            lhs == rhs,
            "case {case}: pullback curvature differs from substitution"
        );
    }
    Ok(())
}

fn profile_invariants(_seed: u64) -> Result<(), String> {
    for r in 1..=40i64 {
        for d in -60..=60i64 {
            let p = lib(atiyah_profile(r, d))?;
            let g = gcd(r, d);
            ensure!(
                p.pairs.iter().all(|&(rj, dj)| gcd(rj, dj) == g),
                "({r},{d}): gcd changes"
            );
            ensure!(p.gr_ranks.iter().sum::<i64>() == r, "({r},{d}): rank sum");
            let deg: i64 = p.gr_ranks.iter().zip(&p.deg_l).map(|(a, b)| a * b).sum();
            ensure!(deg == d, "({r},{d}): degree sum {deg}");
        }
    }
    Ok(())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn skeleton_conservation(seed: u64) -> Result<(), String> {
    for case in 0..50 {
        let mut rng = rng(seed, 400 + case);
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let g = sample::group(&mut rng);
        let atoms: Vec<AtiyahAtom> = (0..rng.gen_range(1..=4))
            .map(|_| sample::admissible_atom(&g, &mut rng, p, 8))
            .collect();
        for a in &atoms {
            let prof = lib(atiyah_profile(a.r, a.d))?;
            ensure!(
                lib(line_classes(a))?.len() == prof.ell,
                "case {case}: class count"
            );
        }
        let s = lib(flag_skeleton(&atoms, p))?;
        ensure!(
            s.total_multiplicity() == atoms.iter().map(|a| a.r).sum::<i64>(),
            "case {case}: rank"
        );
        ensure!(
            s.degree_sum() == atoms.iter().map(|a| a.d).sum::<i64>(),
            "case {case}: degree"
        );
    }
    Ok(())
}

fn charpoly_descends(seed: u64) -> Result<(), String> {
    for case in 0..30 {
        let mut rng = rng(seed, 500 + case);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let r = rng.gen_range(1..=3);
        let c = sample::chart(&f, &mut rng, r, 2);
        let cp = lib(char_poly_psi(&c))?;
        ensure!(cp.descent_ok, "case {case}: coefficients do not descend");
    }
    Ok(())
}

fn embedded_never_certified(seed: u64) -> Result<(), String> {
    for case in 0..30 {
        let mut rng = rng(seed, 600 + case);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let c = sample::valid_conn0(&f, &mut rng, 2, 3);
        let cert = lib(no_flag_certificate_rank2(&ChartConn::embed(&c)))?;
        ensure!(
            cert.verdict != Verdict::Certified,
            "case {case}: embedded connection certified"
        );
    }
    Ok(())
}

fn nilpotent_flags(seed: u64) -> Result<(), String> {
    for case in 0..15 {
        let mut rng = rng(seed, 700 + case);
        let f = sample::prime(&mut rng, &[2, 3, 5]);
        let r = rng.gen_range(1..=3);
        let c = sample::nilpotent_chart(&f, &mut rng, r, 2);
        let out = lib(nilpotent_flag_chart(&c))?;
        ensure!(out.transformed.is_upper(), "case {case}: not triangular");
        ensure!(
            lib(connection::gauge(&c.a, &out.gauge))? == out.transformed,
            "case {case}: gauge mismatch"
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_matching() {
        let got = json!({ "a": [1, { "b": 2, "c": 3 }], "d": null });
        assert!(subset(&json!({ "a": [1, { "b": 2 }] }), &got, "r").is_ok());
        assert!(subset(&json!({ "d": null }), &got, "r").is_ok());
        let e = subset(&json!({ "a": [1, { "b": 5 }] }), &got, "r").unwrap_err();
        assert!(e.starts_with("r.a[1].b"), "{e}");
        assert!(subset(&json!({ "a": [1] }), &got, "r").is_err());
        assert!(subset(&json!({ "x": 1 }), &got, "r").is_err());
    }

    #[test]
    fn builtin_corpus_names_are_unique() {
        let (_, fixtures) = load_corpus(None).unwrap();
        let mut names: Vec<&str> = fixtures
            .iter()
            .map(|f| f["name"].as_str().unwrap())
            .collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }
}
