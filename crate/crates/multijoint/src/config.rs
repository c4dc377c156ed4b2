//! JSON run-configuration ingestion. Validation collects every violation
//! with a stable error code instead of stopping at the first.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{
    detect_multijoints, enumerate_planes, AffinePlane, Configuration, Multijoints, Point,
    DEFAULT_PLANE_CAP,
};
use crate::linalg::{rational_from_str, Rational};
use crate::search::WeightFunction;
use num_traits::Zero;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigViolation {
    pub code: &'static str,
    pub message: String,
}

impl std::fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// A family either lists its planes explicitly or asks for full
/// enumeration of all affine k-planes.
#[derive(Debug, Clone)]
pub enum PlaneSpec {
    All,
    List(Vec<AffinePlane>),
}

#[derive(Debug, Clone)]
pub enum WeightSpec {
    /// sigma uniform over the detected multijoints.
    Uniform,
    /// Explicit sigma values, normalised to sum 1.
    Explicit(BTreeMap<Point, Rational>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub field: PrimeField,
    pub n: usize,
    pub k_list: Vec<usize>,
    pub families: Vec<PlaneSpec>,
    pub weights: WeightSpec,
    pub lambdas: Vec<u32>,
    pub budget: u64,
    pub seed: u64,
    pub plane_cap: u128,
    pub oracle_box: i64,
}

fn as_u64(v: Option<&Value>) -> Option<u64> {
    v.and_then(Value::as_u64)
}

fn parse_point(v: &Value, n: usize, out: &mut Vec<ConfigViolation>) -> Option<Point> {
    let arr = v.as_array()?;
    if arr.len() != n {
        out.push(ConfigViolation {
            code: "CFG_SCHEMA",
            message: format!("point has {} coordinates, expected {n}", arr.len()),
        });
        return None;
    }
    let coords: Option<Vec<u64>> = arr.iter().map(Value::as_u64).collect();
    if coords.is_none() {
        out.push(ConfigViolation {
            code: "CFG_SCHEMA",
            message: "point coordinates must be non-negative integers".into(),
        });
    }
    coords.map(Point)
}

fn parse_point_key(key: &str, n: usize, out: &mut Vec<ConfigViolation>) -> Option<Point> {
    let coords: std::result::Result<Vec<u64>, _> =
        key.split(',').map(|c| c.trim().parse::<u64>()).collect();
    match coords {
        Ok(c) if c.len() == n => Some(Point(c)),
        _ => {
            out.push(ConfigViolation {
                code: "CFG_SCHEMA",
                message: format!("weight key `{key}` is not a {n}-coordinate point"),
            });
            None
        }
    }
}

/// Parse and validate; on failure every violation found is returned.
pub fn parse_config(text: &str) -> std::result::Result<RunConfig, Vec<ConfigViolation>> {
    let doc: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            return Err(vec![ConfigViolation {
                code: "CFG_JSON",
                message: e.to_string(),
            }])
        }
    };
    let mut out = Vec::new();

    let prime = as_u64(doc.get("prime")).unwrap_or(0);
    let field = match PrimeField::new(prime) {
        Ok(f) => Some(f),
        Err(_) => {
            out.push(ConfigViolation {
                code: "CFG_PRIME",
                message: format!("modulus {prime} is not prime"),
            });
            None
        }
    };
    let n = as_u64(doc.get("n")).unwrap_or(0) as usize;
    if n == 0 {
        out.push(ConfigViolation {
            code: "CFG_SCHEMA",
            message: "ambient dimension n must be a positive integer".into(),
        });
    }

    let mut k_list = Vec::new();
    let mut families = Vec::new();
    match doc.get("families").and_then(Value::as_array) {
        None => out.push(ConfigViolation {
            code: "CFG_SCHEMA",
            message: "`families` must be an array".into(),
        }),
        Some(fams) => {
            for (j, fam) in fams.iter().enumerate() {
                let k = as_u64(fam.get("k")).unwrap_or(0) as usize;
                if k == 0 || k >= n.max(1) {
                    out.push(ConfigViolation {
                        code: "CFG_SCHEMA",
                        message: format!("family {j}: k must satisfy 1 <= k < n"),
                    });
                }
                k_list.push(k);
                match fam.get("planes") {
                    Some(Value::String(s)) if s == "all" => families.push(PlaneSpec::All),
                    Some(Value::Array(list)) => {
                        let mut planes = Vec::new();
                        for pv in list {
                            let base = pv
                                .get("base")
                                .and_then(|b| parse_point(b, n, &mut out));
                            let dirs: Option<Vec<Vec<u64>>> = pv
                                .get("directions")
                                .and_then(Value::as_array)
                                .map(|rows| {
                                    rows.iter()
                                        .filter_map(|r| {
                                            r.as_array().map(|xs| {
                                                xs.iter()
                                                    .filter_map(Value::as_u64)
                                                    .collect::<Vec<u64>>()
                                            })
                                        })
                                        .collect()
                                });
                            match (field, base, dirs) {
                                (Some(f), Some(b), Some(d)) => {
                                    match AffinePlane::canonicalize(f, &b, &d) {
                                        Ok(plane) => planes.push(plane),
                                        Err(e) => out.push(ConfigViolation {
                                            code: "CFG_PLANE",
                                            message: format!("family {j}: {e}"),
                                        }),
                                    }
                                }
                                _ => out.push(ConfigViolation {
                                    code: "CFG_SCHEMA",
                                    message: format!(
                                        "family {j}: plane needs `base` and `directions`"
                                    ),
                                }),
                            }
                        }
                        families.push(PlaneSpec::List(planes));
                    }
                    _ => {
                        out.push(ConfigViolation {
                            code: "CFG_SCHEMA",
                            message: format!("family {j}: `planes` must be a list or \"all\""),
                        });
                        families.push(PlaneSpec::List(Vec::new()));
                    }
                }
            }
        }
    }
    if k_list.len() < 2 {
        out.push(ConfigViolation {
            code: "CFG_KSUM",
            message: "at least two families are required".into(),
        });
    } else if k_list.iter().sum::<usize>() != n {
        out.push(ConfigViolation {
            code: "CFG_KSUM",
            message: format!(
                "sum of family dimensions is {}, expected n = {n}",
                k_list.iter().sum::<usize>()
            ),
        });
    }

    let weights = match doc.get("weights") {
        None | Some(Value::String(_)) => {
            match doc.get("weights").and_then(Value::as_str) {
                None | Some("uniform") => WeightSpec::Uniform,
                Some(other) => {
                    out.push(ConfigViolation {
                        code: "CFG_SCHEMA",
                        message: format!("unknown weights mode `{other}`"),
                    });
                    WeightSpec::Uniform
                }
            }
        }
        Some(Value::Object(map)) => {
            let mut sigma = BTreeMap::new();
            for (key, val) in map {
                let point = parse_point_key(key, n, &mut out);
                let rat = match val.as_str() {
                    Some(s) => match rational_from_str(s) {
                        Ok(r) => Some(r),
                        Err(_) => {
                            out.push(ConfigViolation {
                                code: "CFG_RAT",
                                message: format!("weight `{s}` at `{key}` is not a rational"),
                            });
                            None
                        }
                    },
                    None => {
                        out.push(ConfigViolation {
                            code: "CFG_RAT",
                            message: format!("weight at `{key}` must be a \"num/den\" string"),
                        });
                        None
                    }
                };
                if let (Some(p), Some(r)) = (point, rat) {
                    if r < Rational::zero() {
                        out.push(ConfigViolation {
                            code: "CFG_NEGW",
                            message: format!("negative weight at `{key}`"),
                        });
                    } else {
                        sigma.insert(p, r);
                    }
                }
            }
            WeightSpec::Explicit(sigma)
        }
        Some(_) => {
            out.push(ConfigViolation {
                code: "CFG_SCHEMA",
                message: "`weights` must be \"uniform\" or a point -> rational map".into(),
            });
            WeightSpec::Uniform
        }
    };

    let lambdas: Vec<u32> = doc
        .get("lambdas")
        .and_then(Value::as_array)
        .map(|xs| xs.iter().filter_map(Value::as_u64).map(|v| v as u32).collect())
        .unwrap_or_else(|| vec![2]);
    if lambdas.is_empty() {
        out.push(ConfigViolation {
            code: "CFG_SCHEMA",
            message: "`lambdas` must contain at least one value".into(),
        });
    }
    if lambdas.windows(2).any(|w| w[0] > w[1]) {
        out.push(ConfigViolation {
            code: "CFG_SCHEMA",
            message: "`lambdas` must be ascending".into(),
        });
    }

    let budget = as_u64(doc.get("budget")).unwrap_or(10_000);
    let seed = as_u64(doc.get("seed")).unwrap_or(0);
    let plane_cap = as_u64(doc.get("plane_cap"))
        .map(u128::from)
        .unwrap_or(DEFAULT_PLANE_CAP);
    let oracle_box = doc
        .get("oracle_box")
        .and_then(Value::as_i64)
        .unwrap_or(3);

    if !out.is_empty() {
        return Err(out);
    }
    Ok(RunConfig {
        field: field.expect("validated"),
        n,
        k_list,
        families,
        weights,
        lambdas,
        budget,
        seed,
        plane_cap,
        oracle_box,
    })
}

impl RunConfig {
    /// Expand plane specs, detect multijoints, and resolve weights.
    pub fn resolve(&self) -> Result<(Configuration, Multijoints, WeightFunction)> {
        let families = self
            .k_list
            .iter()
            .zip(&self.families)
            .map(|(&k, spec)| match spec {
                PlaneSpec::All => enumerate_planes(self.field, self.n, k, self.plane_cap),
                PlaneSpec::List(planes) => Ok(planes.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = Configuration::new(self.field, self.n, self.k_list.clone(), families)?;
        let mj = detect_multijoints(&cfg)?;
        let weights = match &self.weights {
            WeightSpec::Uniform => WeightFunction::uniform(&mj.points),
            WeightSpec::Explicit(sigma) => {
                for p in sigma.keys() {
                    if mj.index_of(p).is_none() {
                        return Err(Error::SupportOffJoints(p.key()));
                    }
                }
                WeightFunction::normalised(sigma.clone())?
            }
        };
        Ok((cfg, mj, weights))
    }
}
