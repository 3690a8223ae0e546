//! JSON encodings shared by the library and the command-line tool.
//!
//! Field elements are an integer when `k = 1` and an ascending residue
//! array otherwise; polynomials are ascending coefficient arrays; rational
//! functions are `{"num", "den"}` (a bare array is accepted on input);
//! matrices are row-major nested arrays. Integers are reduced mod `p` on
//! input. Each `*_to_json` has a matching `*_from_json`, and decoding what
//! was encoded gives back an equal value.

use serde_json::{json, Map, Value};

use crate::algebra::{Fe, Field, Mat, MatRF, Poly, RatFunc};
use crate::elliptic::{
    AtiyahAtom, AtiyahProfile, FlagSkeleton, HomConstraint, Pic0Group, PicClass,
};
use crate::error::{Error, Result};
use crate::hitchin::{Certificate, CharPolyP, ChartConn, ChartFlag, HitchinDims, Verdict, Witness};
use crate::pone::{Conn0, Descent, DmBundle, FlagP1, Violation};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    match v {
        Value::Object(m) => m
            .get(key)
            .ok_or_else(|| Error::Parse(format!("missing key {key:?}"))),
        _ => parse_err(format!("expected an object with key {key:?}")),
    }
}

pub fn as_i64(v: &Value) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("expected an integer, got {v}")))
}

pub fn as_u32(v: &Value) -> Result<u32> {
    as_i64(v)?
        .try_into()
        .map_err(|_| Error::Parse(format!("expected a small non-negative integer, got {v}")))
}

pub fn as_usize(v: &Value) -> Result<usize> {
    as_i64(v)?
        .try_into()
        .map_err(|_| Error::Parse(format!("expected a non-negative integer, got {v}")))
}

pub fn as_bool(v: &Value) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| Error::Parse(format!("expected a boolean, got {v}")))
}

pub fn as_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array, got {v}")))
}

pub fn as_str(v: &Value) -> Result<&str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("expected a string, got {v}")))
}

pub fn i64_list(v: &Value) -> Result<Vec<i64>> {
    as_array(v)?.iter().map(as_i64).collect()
}

pub fn usize_list(v: &Value) -> Result<Vec<usize>> {
    as_array(v)?.iter().map(as_usize).collect()
}

// algebra

pub fn field_to_json(f: &Field) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(f.p()));
    m.insert("k".into(), json!(f.k()));
    if f.k() > 1 {
        m.insert("modulus".into(), json!(f.modulus()));
    }
    Value::Object(m)
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = as_u32(get(v, "p")?)?;
    let k = match v.get("k") {
        Some(k) => as_u32(k)?,
        None => 1,
    };
    match v.get("modulus") {
        Some(m) => {
            let modulus: Vec<u32> = as_array(m)?.iter().map(as_u32).collect::<Result<_>>()?;
            if modulus.len() != k as usize + 1 {
                return Err(Error::InvalidField(format!(
                    "modulus of degree {} for k = {k}",
                    modulus.len().saturating_sub(1)
                )));
            }
            Field::with_modulus(p, modulus)
        }
        None => Field::new(p, k),
    }
}

pub fn fe_to_json(f: &Field, a: Fe) -> Value {
    if f.k() == 1 {
        json!(a.0)
    } else {
        json!(f.digits(a))
    }
}

pub fn fe_from_json(f: &Field, v: &Value) -> Result<Fe> {
    match v {
        Value::Array(ds) => {
            let ds: Vec<i64> = ds.iter().map(as_i64).collect::<Result<_>>()?;
            let reduced: Vec<u32> = ds.iter().map(|&d| f.from_i64(d).0).collect();
            f.from_digits(&reduced)
        }
        _ => Ok(f.from_i64(as_i64(v)?)),
    }
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|&c| fe_to_json(p.field(), c))
            .collect(),
    )
}

pub fn poly_from_json(f: &Field, v: &Value) -> Result<Poly> {
    let cs = as_array(v)?
        .iter()
        .map(|c| fe_from_json(f, c))
        .collect::<Result<_>>()?;
    Ok(Poly::new(f, cs))
}

pub fn ratfunc_to_json(r: &RatFunc) -> Value {
    json!({ "num": poly_to_json(r.num()), "den": poly_to_json(r.den()) })
}

pub fn ratfunc_from_json(f: &Field, v: &Value) -> Result<RatFunc> {
    match v {
        Value::Array(_) => Ok(RatFunc::from(poly_from_json(f, v)?)),
        _ => {
            let num = poly_from_json(f, get(v, "num")?)?;
            let den = poly_from_json(f, get(v, "den")?)?;
            RatFunc::new(num, den).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

pub fn mat_to_json<T>(m: &Mat<T>, enc: impl Fn(&T) -> Value) -> Value
where
    T: crate::algebra::Ring,
{
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(&enc).collect()))
            .collect(),
    )
}

pub fn mat_from_json<T>(v: &Value, dec: impl Fn(&Value) -> Result<T>) -> Result<Mat<T>>
where
    T: crate::algebra::Ring,
{
    let rows = as_array(v)?;
    if rows.is_empty() {
        return parse_err("empty matrix");
    }
    let rows = rows
        .iter()
        .map(|r| as_array(r)?.iter().map(&dec).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrf_to_json(m: &MatRF) -> Value {
    mat_to_json(m, ratfunc_to_json)
}

pub fn matrf_from_json(f: &Field, v: &Value) -> Result<MatRF> {
    mat_from_json(v, |e| ratfunc_from_json(f, e))
}

// pone

pub fn conn_to_json(d: &DmBundle) -> Value {
    json!({
        "field": field_to_json(d.field()),
        "level": d.m,
        "twist_degrees": d.base.degrees(),
        "A": mat_to_json(d.base.matrix(), poly_to_json),
    })
}

pub fn dm_from_json(v: &Value) -> Result<DmBundle> {
    let field = field_from_json(get(v, "field")?)?;
    let m = match v.get("level") {
        Some(l) => as_u32(l)?,
        None => 0,
    };
    let degrees = i64_list(get(v, "twist_degrees")?)?;
    let a = mat_from_json(get(v, "A")?, |e| poly_from_json(&field, e))?;
    Ok(DmBundle::new(m, Conn0::new(&field, degrees, a)?))
}

pub fn conn0_to_json(c: &Conn0) -> Value {
    conn_to_json(&DmBundle::new(0, c.clone()))
}

/// A level-0 connection; other levels are rejected as a precondition.
pub fn conn0_from_json(v: &Value) -> Result<Conn0> {
    let d = dm_from_json(v)?;
    if d.m != 0 {
        return Err(Error::Precondition(format!(
            "expected a level-0 connection, got level {}",
            d.m
        )));
    }
    Ok(d.base)
}

pub fn flag_to_json(f: &FlagP1) -> Value {
    json!({ "perm": f.perm })
}

pub fn flag_from_json(v: &Value) -> Result<FlagP1> {
    Ok(FlagP1 {
        perm: usize_list(get(v, "perm")?)?,
    })
}

pub fn violations_to_json(vs: &[Violation]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| json!({ "row": v.row, "col": v.col, "pole_order": v.pole_order }))
            .collect(),
    )
}

pub fn violations_from_json(v: &Value) -> Result<Vec<Violation>> {
    as_array(v)?
        .iter()
        .map(|e| {
            Ok(Violation {
                row: as_usize(get(e, "row")?)?,
                col: as_usize(get(e, "col")?)?,
                pole_order: as_i64(get(e, "pole_order")?)? as u64,
            })
        })
        .collect()
}

pub fn descent_to_json(d: &Descent) -> Value {
    json!({ "degrees": d.degrees, "frame": matrf_to_json(&d.frame) })
}

pub fn descent_from_json(f: &Field, v: &Value) -> Result<Descent> {
    Ok(Descent {
        degrees: i64_list(get(v, "degrees")?)?,
        frame: matrf_from_json(f, get(v, "frame")?)?,
    })
}

// elliptic

pub fn group_to_json(g: &Pic0Group) -> Value {
    json!({ "factors": g.factors() })
}

pub fn group_from_json(v: &Value) -> Result<Pic0Group> {
    Pic0Group::new(i64_list(get(v, "factors")?)?)
}

pub fn atom_to_json(a: &AtiyahAtom) -> Value {
    json!({ "r": a.r, "d": a.d, "lam": a.lam })
}

/// `lam` defaults to the zero class when absent.
pub fn atom_from_json(g: &Pic0Group, v: &Value) -> Result<AtiyahAtom> {
    let lam = match v.get("lam") {
        Some(l) => i64_list(l)?,
        None => g.zero(),
    };
    AtiyahAtom::new(g, as_i64(get(v, "r")?)?, as_i64(get(v, "d")?)?, &lam)
}

pub fn class_to_json(c: &PicClass) -> Value {
    json!({ "degree": c.degree, "tor": c.tor })
}

pub fn class_from_json(v: &Value) -> Result<PicClass> {
    Ok(PicClass {
        degree: as_i64(get(v, "degree")?)?,
        tor: i64_list(get(v, "tor")?)?,
    })
}

pub fn profile_to_json(p: &AtiyahProfile) -> Value {
    json!({
        "pairs": p.pairs.iter().map(|(r, d)| json!([r, d])).collect::<Vec<_>>(),
        "degL": p.deg_l,
        "m": p.m,
        "ell": p.ell,
        "h": p.h,
        "grRanks": p.gr_ranks,
    })
}

pub fn profile_from_json(v: &Value) -> Result<AtiyahProfile> {
    let pairs = as_array(get(v, "pairs")?)?
        .iter()
        .map(|pr| match i64_list(pr)?.as_slice() {
            [r, d] => Ok((*r, *d)),
            _ => parse_err(format!("expected an [r, d] pair, got {pr}")),
        })
        .collect::<Result<_>>()?;
    Ok(AtiyahProfile {
        pairs,
        deg_l: i64_list(get(v, "degL")?)?,
        m: as_usize(get(v, "m")?)?,
        ell: as_usize(get(v, "ell")?)?,
        h: as_i64(get(v, "h")?)?,
        gr_ranks: i64_list(get(v, "grRanks")?)?,
    })
}

pub fn skeleton_to_json(s: &FlagSkeleton) -> Value {
    Value::Array(
        s.entries
            .iter()
            .map(|(c, n)| json!({ "degree": c.degree, "tor": c.tor, "mult": n }))
            .collect(),
    )
}

pub fn skeleton_from_json(v: &Value) -> Result<FlagSkeleton> {
    let entries = as_array(v)?
        .iter()
        .map(|e| Ok((class_from_json(e)?, as_i64(get(e, "mult")?)?)))
        .collect::<Result<_>>()?;
    Ok(FlagSkeleton { entries })
}

pub fn hom_constraint_to_json(h: HomConstraint) -> Value {
    json!(match h {
        HomConstraint::PreservesFil1 => "preserves_fil1",
        HomConstraint::ForcesZeroOnFil1 => "forces_zero_on_fil1",
        HomConstraint::NoConstraint => "no_constraint",
    })
}

pub fn hom_constraint_from_json(v: &Value) -> Result<HomConstraint> {
    match as_str(v)? {
        "preserves_fil1" => Ok(HomConstraint::PreservesFil1),
        "forces_zero_on_fil1" => Ok(HomConstraint::ForcesZeroOnFil1),
        "no_constraint" => Ok(HomConstraint::NoConstraint),
        other => parse_err(format!("unknown hom constraint {other:?}")),
    }
}

// hitchin

pub fn chart_to_json(c: &ChartConn) -> Value {
    json!({ "field": field_to_json(&c.field), "r": c.rank(), "A": matrf_to_json(&c.a) })
}

pub fn chart_from_json(v: &Value) -> Result<ChartConn> {
    let field = field_from_json(get(v, "field")?)?;
    let a = matrf_from_json(&field, get(v, "A")?)?;
    if let Some(r) = v.get("r") {
        let r = as_usize(r)?;
        if r != a.rows() || r != a.cols() {
            return parse_err(format!("r = {r} but A is {}x{}", a.rows(), a.cols()));
        }
    }
    ChartConn::new(&field, a)
}

pub fn charpoly_to_json(c: &CharPolyP) -> Value {
    json!({
        "coeffs": c.coeffs.iter().map(ratfunc_to_json).collect::<Vec<_>>(),
        "descent_ok": c.descent_ok,
    })
}

pub fn charpoly_from_json(f: &Field, v: &Value) -> Result<CharPolyP> {
    Ok(CharPolyP {
        coeffs: as_array(get(v, "coeffs")?)?
            .iter()
            .map(|c| ratfunc_from_json(f, c))
            .collect::<Result<_>>()?,
        descent_ok: as_bool(get(v, "descent_ok")?)?,
    })
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Certified => "certified",
        Verdict::NotCertified => "not_certified",
        Verdict::Unknown => "unknown",
    }
}

pub fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::NonSquare { value } => {
            json!({ "kind": "non_square", "value": ratfunc_to_json(value) })
        }
        Witness::SquareRoot { value, root } => json!({
            "kind": "square_root",
            "value": ratfunc_to_json(value),
            "root": ratfunc_to_json(root),
        }),
        Witness::TraceNonzeroChar2 { trace } => {
            json!({ "kind": "trace_nonzero_char2", "trace": ratfunc_to_json(trace) })
        }
    }
}

pub fn witness_from_json(f: &Field, v: &Value) -> Result<Witness> {
    let rf = |key| ratfunc_from_json(f, get(v, key)?);
    match as_str(get(v, "kind")?)? {
        "non_square" => Ok(Witness::NonSquare {
            value: rf("value")?,
        }),
        "square_root" => Ok(Witness::SquareRoot {
            value: rf("value")?,
            root: rf("root")?,
        }),
        "trace_nonzero_char2" => Ok(Witness::TraceNonzeroChar2 {
            trace: rf("trace")?,
        }),
        other => parse_err(format!("unknown witness kind {other:?}")),
    }
}

/// `charpoly` lists `a_0 .. a_{r-1}` of the monic characteristic polynomial.
pub fn certificate_to_json(c: &Certificate) -> Value {
    json!({
        "charpoly": c.charpoly.coeffs.iter().map(ratfunc_to_json).collect::<Vec<_>>(),
        "descent_ok": c.charpoly.descent_ok,
        "verdict": verdict_str(c.verdict),
        "witness": witness_to_json(&c.witness),
    })
}

pub fn certificate_from_json(f: &Field, v: &Value) -> Result<Certificate> {
    let coeffs = as_array(get(v, "charpoly")?)?
        .iter()
        .map(|c| ratfunc_from_json(f, c))
        .collect::<Result<_>>()?;
    let verdict = match as_str(get(v, "verdict")?)? {
        "certified" => Verdict::Certified,
        "not_certified" => Verdict::NotCertified,
        "unknown" => Verdict::Unknown,
        other => return parse_err(format!("unknown verdict {other:?}")),
    };
    Ok(Certificate {
        charpoly: CharPolyP {
            coeffs,
            descent_ok: as_bool(get(v, "descent_ok")?)?,
        },
        verdict,
        witness: witness_from_json(f, get(v, "witness")?)?,
    })
}

pub fn dims_to_json(d: &HitchinDims) -> Value {
    json!({ "dimB": d.dim_b, "dimD": d.dim_d, "gamma_nondominant": d.gamma_nondominant })
}

pub fn dims_from_json(v: &Value) -> Result<HitchinDims> {
    Ok(HitchinDims {
        dim_b: as_i64(get(v, "dimB")?)?,
        dim_d: as_i64(get(v, "dimD")?)?,
        gamma_nondominant: as_bool(get(v, "gamma_nondominant")?)?,
    })
}

pub fn chart_flag_to_json(f: &ChartFlag) -> Value {
    json!({
        "gauge": matrf_to_json(&f.gauge),
        "transformed": matrf_to_json(&f.transformed),
        "perm": f.perm,
    })
}

pub fn chart_flag_from_json(field: &Field, v: &Value) -> Result<ChartFlag> {
    Ok(ChartFlag {
        gauge: matrf_from_json(field, get(v, "gauge")?)?,
        transformed: matrf_from_json(field, get(v, "transformed")?)?,
        perm: usize_list(get(v, "perm")?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitchin::no_flag_certificate_rank2;

    #[test]
    fn element_encodings() {
        let f9 = Field::new(3, 2).unwrap();
        let a = f9.from_digits(&[2, 1]).unwrap();
        assert_eq!(fe_to_json(&f9, a), json!([2, 1]));
        assert_eq!(fe_from_json(&f9, &json!([2, 1])).unwrap(), a);
        assert_eq!(fe_from_json(&f9, &json!([-1, 4])).unwrap(), a);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(fe_from_json(&f5, &json!(-1)).unwrap(), Fe(4));
        assert_eq!(fe_to_json(&f5, Fe(4)), json!(4));
        assert_eq!(
            field_to_json(&f9),
            json!({"p": 3, "k": 2, "modulus": [1, 0, 1]})
        );
        assert_eq!(field_from_json(&field_to_json(&f9)).unwrap(), f9);
        assert!(matches!(
            field_from_json(&json!({"p": 4})),
            Err(Error::InvalidField(_))
        ));
    }

    #[test]
    fn ratfunc_and_matrix() {
        let f3 = Field::prime(3).unwrap();
        let r = ratfunc_from_json(&f3, &json!({"num": [0, 2], "den": [2, 2]})).unwrap();
        assert_eq!(ratfunc_to_json(&r), json!({"num": [0, 1], "den": [1, 1]}));
        assert_eq!(
            ratfunc_from_json(&f3, &json!([1, 1])).unwrap(),
            RatFunc::from_ints(&f3, &[1, 1])
        );
        assert!(ratfunc_from_json(&f3, &json!({"num": [1], "den": []})).is_err());
        let m = matrf_from_json(&f3, &json!([[[0], [1]], [[0, 1], []]])).unwrap();
        assert_eq!(matrf_from_json(&f3, &matrf_to_json(&m)).unwrap(), m);
        assert!(matrf_from_json(&f3, &json!([[[1]], [[1], [2]]])).is_err());
        assert!(matrf_from_json(&f3, &json!([])).is_err());
    }

    #[test]
    fn structured_round_trips() {
        let conn = json!({
            "field": {"p": 2, "k": 1},
            "level": 1,
            "twist_degrees": [2, 0],
            "A": [[[], [1]], [[], []]],
        });
        let d = dm_from_json(&conn).unwrap();
        assert_eq!(conn_to_json(&d), conn);
        assert!(matches!(
            conn0_from_json(&conn),
            Err(Error::Precondition(_))
        ));

        let g = group_from_json(&json!({"factors": [5]})).unwrap();
        let a = atom_from_json(&g, &json!({"r": 5, "d": 3, "lam": [7]})).unwrap();
        assert_eq!(atom_to_json(&a), json!({"r": 5, "d": 3, "lam": [2]}));
        let p = crate::elliptic::atiyah_profile(5, 3).unwrap();
        assert_eq!(profile_from_json(&profile_to_json(&p)).unwrap(), p);
        let b = atom_from_json(&g, &json!({"r": 2, "d": 0, "lam": [3]})).unwrap();
        let s = crate::elliptic::flag_skeleton(&[b.clone(), b], 2).unwrap();
        assert_eq!(skeleton_from_json(&skeleton_to_json(&s)).unwrap(), s);

        let f3 = Field::prime(3).unwrap();
        let c =
            chart_from_json(&json!({"field": {"p": 3}, "r": 2, "A": [[[], [1]], [[0, 1], []]]}))
                .unwrap();
        assert_eq!(chart_from_json(&chart_to_json(&c)).unwrap(), c);
        let cert = no_flag_certificate_rank2(&c).unwrap();
        let v = certificate_to_json(&cert);
        assert_eq!(v["verdict"], json!("certified"));
        assert_eq!(certificate_from_json(&f3, &v).unwrap(), cert);
        assert!(chart_from_json(&json!({"field": {"p": 3}, "r": 3, "A": [[[1]]]})).is_err());
    }
}
