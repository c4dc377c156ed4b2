//! Deterministic report serialisation: canonical JSON (sorted keys, exact
//! rationals as "num/den" strings) and CSV tables.

use crate::factorization::{FactorisationTable, SweepReport, VerificationReport};
use crate::geometry::Multijoints;
use crate::linalg::{rational_to_string, Rational};
use crate::search::SearchOutcome;
use crate::tableau::Handicap;
use serde_json::{json, Map, Value};

pub fn rational_value(r: &Rational) -> Value {
    Value::String(rational_to_string(r))
}

pub fn handicap_value(alpha: &Handicap) -> Value {
    let mut map = Map::new();
    for (p, v) in alpha.iter() {
        map.insert(p.key(), json!(v));
    }
    Value::Object(map)
}

pub fn multijoints_value(mj: &Multijoints) -> Value {
    let points: Vec<Value> = mj.points.iter().map(|p| Value::String(p.key())).collect();
    let witnesses: Vec<Value> = mj
        .witnesses
        .iter()
        .map(|ws| json!(ws))
        .collect();
    json!({ "points": points, "witnesses": witnesses })
}

pub fn table_value(table: &FactorisationTable) -> Value {
    let mut families = Vec::new();
    for fam in &table.rows {
        let mut fmap = Map::new();
        for (&i, row) in fam {
            let mut rmap = Map::new();
            for (p, c, s) in row {
                rmap.insert(p.key(), json!({ "tilde_s": c, "s": rational_to_string(s) }));
            }
            fmap.insert(i.to_string(), Value::Object(rmap));
        }
        families.push(Value::Object(fmap));
    }
    let mut out = Map::new();
    out.insert("lambda".into(), json!(table.lambda));
    out.insert("handicap".into(), handicap_value(&table.alpha));
    if let Some(gap) = &table.gap {
        out.insert("gap".into(), rational_value(gap));
    }
    out.insert("families".into(), Value::Array(families));
    Value::Object(out)
}

pub fn search_value(outcome: &SearchOutcome) -> Value {
    json!({
        "handicap": handicap_value(&outcome.alpha),
        "gap": rational_to_string(&outcome.gap),
        "h": rational_to_string(&outcome.h),
        "h_prime_support": rational_to_string(&outcome.h_prime_support),
        "h_prime_j": rational_to_string(&outcome.h_prime_j),
        "converged": outcome.converged,
        "evaluations": outcome.evaluations,
        "moves": outcome.moves.len(),
    })
}

pub fn verification_value(report: &VerificationReport) -> Value {
    json!({
        "c_emp": report.c_emp.as_ref().map(rational_to_string),
        "zero_factor": report.zero_factor,
        "row_sums_ok": report.row_sums_ok,
        "max_normalised_w": report.max_normalised_w.as_ref().map(rational_to_string),
        "lower_bound_ok": report.lower_bound_ok,
        "witnesses_checked": report.margins.len(),
    })
}

pub fn sweep_value(sweep: &SweepReport) -> Value {
    let stages: Vec<Value> = sweep
        .stages
        .iter()
        .map(|st| {
            json!({
                "lambda": st.lambda,
                "search": search_value(&st.search),
                "verification": verification_value(&st.report),
            })
        })
        .collect();
    let cauchy: Vec<Value> = sweep.cauchy.iter().map(rational_value).collect();
    json!({ "stages": stages, "cauchy": cauchy })
}

/// Canonical JSON text: serde_json's map is ordered, keys already sorted.
pub fn emit_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialise");
    s.push('\n');
    s
}

/// CSV rows for the tilde S / s tables.
pub fn emit_csv(table: &FactorisationTable) -> String {
    let mut out = String::from("lambda,family,plane,point,tilde_s,s\n");
    for (j, fam) in table.rows.iter().enumerate() {
        for (&i, row) in fam {
            for (p, c, s) in row {
                out.push_str(&format!(
                    "{},{},{},\"{}\",{},{}\n",
                    table.lambda,
                    j,
                    i,
                    p.key(),
                    c,
                    rational_to_string(s)
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn rationals_serialise_as_strings() {
        assert_eq!(rational_value(&rat(3, 5)), Value::String("3/5".into()));
        assert_eq!(rational_value(&rat(-2, 4)), Value::String("-1/2".into()));
        assert_eq!(rational_value(&rat(7, 1)), Value::String("7/1".into()));
    }

    #[test]
    fn json_keys_are_sorted() {
        let v = json!({"zebra": 1, "apple": 2, "mango": 3});
        let s = emit_json(&v);
        let a = s.find("apple").unwrap();
        let m = s.find("mango").unwrap();
        let z = s.find("zebra").unwrap();
        assert!(a < m && m < z);
    }

    #[test]
    fn emit_is_deterministic() {
        let v = json!({"b": [1, 2], "a": {"y": "3/5", "x": null}});
        assert_eq!(emit_json(&v), emit_json(&v));
    }
}
