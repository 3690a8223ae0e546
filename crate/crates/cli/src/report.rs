//! Report assembly, exit codes and text rendering.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use pflag::Error;

use crate::dispatch::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

/// sha256 of the canonical (sorted-key, compact) serialization.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("json values serialize");
    let hash = Sha256::digest(&bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn error_class(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Parse(_) => ("parse_error", EXIT_PARSE),
        Error::Precondition(_) | Error::InvalidField(_) | Error::NeedsExtension(_) => {
            ("precondition_failed", EXIT_PRECONDITION)
        }
        Error::Internal(_) => ("internal_error", EXIT_INVARIANT),
    }
}

pub fn exit_code(res: &pflag::Result<Outcome>) -> i32 {
    match res {
        Ok(o) if o.all_ok() => EXIT_OK,
        Ok(_) => EXIT_INVARIANT,
        Err(e) => error_class(e).1,
    }
}

pub fn build(subcommand: &str, canonical_input: &Value, res: &pflag::Result<Outcome>) -> Value {
    let mut m = Map::new();
    m.insert("subcommand".into(), json!(subcommand));
    m.insert("inputs_digest".into(), json!(digest(canonical_input)));
    let code = exit_code(res);
    match res {
        Ok(o) => {
            m.insert("result".into(), o.result.clone());
            m.insert("invariants_checked".into(), checks_json(&o.checks));
            let status = if code == EXIT_OK {
                "ok"
            } else {
                "invariant_failed"
            };
            m.insert("status".into(), json!(status));
            if code != EXIT_OK {
                let failed: Vec<&str> = o
                    .checks
                    .iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(n, _)| n.as_str())
                    .collect();
                m.insert(
                    "error".into(),
                    json!(format!("failed: {}", failed.join(", "))),
                );
            }
        }
        Err(e) => {
            m.insert("result".into(), Value::Null);
            m.insert("invariants_checked".into(), json!([]));
            m.insert("status".into(), json!(error_class(e).0));
            m.insert("error".into(), json!(e.to_string()));
        }
    }
    m.insert("exit_code".into(), json!(code));
    Value::Object(m)
}

fn checks_json(checks: &[(String, bool)]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|(n, ok)| json!({ "name": n, "ok": ok }))
            .collect(),
    )
}

pub fn to_json_string(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("json values serialize");
    s.push('\n');
    s
}

/// One line per top-level result field, then the invariants.
pub fn to_text(report: &Value) -> String {
    let mut out = format!(
        "{}: {} (exit {})\n",
        report["subcommand"].as_str().unwrap_or("?"),
        report["status"].as_str().unwrap_or("?"),
        report["exit_code"]
    );
    if let Some(e) = report.get("error").and_then(Value::as_str) {
        out.push_str(&format!("  error: {e}\n"));
    }
    if let Some(items) = report["result"]["items"].as_array() {
        for it in items {
            let tag = if it["ok"] == json!(true) {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!("  {tag} {}", it["name"].as_str().unwrap_or("?")));
            if let Some(d) = it.get("detail").and_then(Value::as_str) {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "  passed {}, failed {}\n",
            report["result"]["passed"], report["result"]["failed"]
        ));
        return out;
    }
    if let Some(fields) = report["result"].as_object() {
        for (k, v) in fields {
            out.push_str(&format!("  {k}: {}\n", render(v)));
        }
    }
    if let Some(checks) = report["invariants_checked"].as_array() {
        if !checks.is_empty() {
            let list: Vec<String> = checks
                .iter()
                .map(|c| {
                    format!(
                        "{} {}",
                        c["name"].as_str().unwrap_or("?"),
                        if c["ok"] == json!(true) {
                            "ok"
                        } else {
                            "FAILED"
                        }
                    )
                })
                .collect();
            out.push_str(&format!("  invariants: {}\n", list.join(", ")));
        }
    }
    out
}

fn render(v: &Value) -> String {
    if let Some(s) = pretty_ratfunc(v) {
        return s;
    }
    match v {
        Value::Array(xs) => format!("[{}]", xs.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => format!(
            "{{{}}}",
            m.iter()
                .map(|(k, x)| format!("{k}: {}", render(x)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

/// `{"num", "den"}` over a prime field, printed as a quotient in `x`.
fn pretty_ratfunc(v: &Value) -> Option<String> {
    let m = v.as_object()?;
    if m.len() != 2 {
        return None;
    }
    let num = pretty_poly(m.get("num")?)?;
    let den = pretty_poly(m.get("den")?)?;
    Some(if den == "1" {
        num
    } else {
        format!("({num})/({den})")
    })
}

fn pretty_poly(v: &Value) -> Option<String> {
    let cs: Vec<i64> = v
        .as_array()?
        .iter()
        .map(Value::as_i64)
        .collect::<Option<_>>()?;
    let terms: Vec<String> = cs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    Some(if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    })
}
