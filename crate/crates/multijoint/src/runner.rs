//! Command dispatch: resolve a run configuration, execute one of the
//! pipeline commands, and emit a deterministic report with a POSIX exit
//! code (0 pass, 1 error, 2 budget exhausted).

use crate::config::{PlaneSpec, RunConfig, WeightSpec};
use crate::error::Result;
use crate::factorization::{
    build_s, counting_certificate, extend_to_grassmannian, lambda_sweep, vanishing_certificate,
    verify_factorisation, GrassmannMode,
};
use crate::geometry::connected_components;
use crate::linalg::rational_to_string;
use crate::report::{
    emit_csv, emit_json, handicap_value, multijoints_value, search_value, sweep_value,
    table_value, verification_value,
};
use crate::search::{brute_force_handicap_oracle, search_good_handicap};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Detect,
    Factorize,
    Verify,
    Sweep,
    Certify,
    Oracle,
    Grassmann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;

/// The configuration as a canonical JSON document; parsing it again yields
/// an equivalent configuration.
pub fn config_echo(rc: &RunConfig) -> Value {
    let families: Vec<Value> = rc
        .k_list
        .iter()
        .zip(&rc.families)
        .map(|(&k, spec)| match spec {
            PlaneSpec::All => json!({ "k": k, "planes": "all" }),
            PlaneSpec::List(planes) => {
                let list: Vec<Value> = planes
                    .iter()
                    .map(|pl| {
                        json!({
                            "base": pl.base().0,
                            "directions": pl.direction().basis(),
                        })
                    })
                    .collect();
                json!({ "k": k, "planes": list })
            }
        })
        .collect();
    let weights = match &rc.weights {
        WeightSpec::Uniform => Value::String("uniform".into()),
        WeightSpec::Explicit(sigma) => {
            let mut map = Map::new();
            for (p, r) in sigma {
                map.insert(p.key(), Value::String(rational_to_string(r)));
            }
            Value::Object(map)
        }
    };
    json!({
        "prime": rc.field.modulus(),
        "n": rc.n,
        "families": families,
        "weights": weights,
        "lambdas": rc.lambdas,
        "budget": rc.budget,
        "seed": rc.seed,
        "plane_cap": rc.plane_cap as u64,
        "oracle_box": rc.oracle_box,
    })
}

pub fn run_command(cmd: Command, rc: &RunConfig, format: Format) -> Result<(String, i32)> {
    let (cfg, mj, weights) = rc.resolve()?;
    let lambda = *rc.lambdas.iter().max().expect("validated non-empty");
    let mut report = Map::new();
    report.insert("config".into(), config_echo(rc));
    let mut exit = EXIT_PASS;

    match cmd {
        Command::Detect => {
            report.insert("multijoints".into(), multijoints_value(&mj));
            let comps: Vec<Vec<usize>> = connected_components(&mj);
            report.insert("components".into(), json!(comps));
        }
        Command::Factorize => {
            let search = search_good_handicap(&weights, &cfg, &mj, lambda, rc.budget)?;
            if !search.converged {
                exit = EXIT_EXHAUSTED;
            }
            let mut table = build_s(&search.alpha, &cfg, &mj, lambda)?;
            table.gap = Some(search.gap.clone());
            if format == Format::Csv {
                return Ok((emit_csv(&table), exit));
            }
            report.insert("search".into(), search_value(&search));
            report.insert("table".into(), table_value(&table));
        }
        Command::Verify => {
            let search = search_good_handicap(&weights, &cfg, &mj, lambda, rc.budget)?;
            if !search.converged {
                exit = EXIT_EXHAUSTED;
            }
            let mut table = build_s(&search.alpha, &cfg, &mj, lambda)?;
            table.gap = Some(search.gap.clone());
            let ver = verify_factorisation(&table, &weights, &cfg, &mj)?;
            if !(ver.row_sums_ok && !ver.zero_factor && ver.lower_bound_ok) {
                exit = EXIT_ERROR;
            }
            report.insert("search".into(), search_value(&search));
            report.insert("verification".into(), verification_value(&ver));
        }
        Command::Sweep => {
            let sweep = lambda_sweep(&weights, &cfg, &mj, &rc.lambdas, rc.budget)?;
            if sweep.stages.iter().any(|st| !st.search.converged) {
                exit = EXIT_EXHAUSTED;
            } else if sweep
                .stages
                .iter()
                .any(|st| !st.report.row_sums_ok || !st.report.lower_bound_ok)
            {
                exit = EXIT_ERROR;
            }
            if format == Format::Csv {
                let mut out = String::from("lambda,family,plane,point,s\n");
                for st in &sweep.stages {
                    for ((j, i, p), s) in &st.s_values {
                        out.push_str(&format!(
                            "{},{},{},\"{}\",{}\n",
                            st.lambda,
                            j,
                            i,
                            p.key(),
                            rational_to_string(s)
                        ));
                    }
                }
                return Ok((out, exit));
            }
            report.insert("sweep".into(), sweep_value(&sweep));
        }
        Command::Certify => {
            let search = search_good_handicap(&weights, &cfg, &mj, lambda, rc.budget)?;
            if !search.converged {
                exit = EXIT_EXHAUSTED;
            }
            let (lhs, rhs, counting_ok) = counting_certificate(&search.alpha, &cfg, &mj, lambda, None)?;
            let (rank, dim, vl) = vanishing_certificate(&search.alpha, &cfg, &mj, lambda, None)?;
            if !(counting_ok && vl) {
                exit = EXIT_ERROR;
            }
            report.insert("handicap".into(), handicap_value(&search.alpha));
            report.insert(
                "counting".into(),
                json!({ "lhs": lhs as u64, "rhs": rhs as u64, "pass": counting_ok }),
            );
            report.insert(
                "vanishing".into(),
                json!({ "rank": rank, "dim": dim, "pass": vl }),
            );
        }
        Command::Oracle => {
            let search = search_good_handicap(&weights, &cfg, &mj, lambda, rc.budget)?;
            if !search.converged {
                exit = EXIT_EXHAUSTED;
            }
            let (alpha, profile) =
                brute_force_handicap_oracle(&weights, &cfg, &mj, lambda, rc.oracle_box)?;
            let agree = search.profile.sorted_values() == profile.sorted_values();
            if exit == EXIT_PASS && !agree {
                exit = EXIT_ERROR;
            }
            report.insert("search".into(), search_value(&search));
            report.insert(
                "oracle".into(),
                json!({
                    "handicap": handicap_value(&alpha),
                    "profile": profile
                        .sorted
                        .iter()
                        .map(|(p, v)| json!([p.key(), rational_to_string(v)]))
                        .collect::<Vec<Value>>(),
                    "agree": agree,
                }),
            );
        }
        Command::Grassmann => {
            let g = extend_to_grassmannian(
                &weights,
                rc.field,
                rc.n,
                &rc.k_list,
                lambda,
                rc.budget,
                GrassmannMode::Enumerate {
                    plane_cap: rc.plane_cap,
                },
            )?;
            let displays = g.verify_displays()?;
            if !displays {
                exit = EXIT_ERROR;
            }
            report.insert("table".into(), table_value(&g.table));
            report.insert("verification".into(), verification_value(&g.report));
            report.insert("displays_ok".into(), json!(displays));
        }
    }

    Ok((emit_json(&Value::Object(report)), exit))
}
