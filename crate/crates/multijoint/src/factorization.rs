//! Factorising functions s, verification reports, certificates, the
//! lambda sweep, the Grassmannian extension, and the Hölder chain.
//!
//! The core stays exact rational; floating point appears only in the
//! d-th-root links of the Hölder verifier.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{
    enumerate_planes, AffinePlane, Configuration, GrassmannElement, Multijoints, Point, Witness,
};
use crate::linalg::{IncrementalBasis, Rational};
use crate::poly::{lift_and_compose, monomial_basis, MultiIndex};
use crate::search::{
    compute_w, normalisation_constant, search_good_handicap, tableaux_for, SearchOutcome,
    WeightFunction,
};
use crate::tableau::{dual_dim, Handicap, Tableau};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// The per-family tables s(p, plane) = tilde S(p, plane) / binom(lambda+k, k).
#[derive(Debug, Clone)]
pub struct FactorisationTable {
    pub lambda: u32,
    pub alpha: Handicap,
    /// Interval width of the handicap search, when one was run.
    pub gap: Option<Rational>,
    /// Per family: plane index -> (point, tilde S, s) rows over the points
    /// of J on the plane. Planes disjoint from J have empty rows.
    pub rows: Vec<BTreeMap<usize, Vec<(Point, u64, Rational)>>>,
}

impl FactorisationTable {
    pub fn count(&self, family: usize, plane: usize, p: &Point) -> u64 {
        self.rows[family]
            .get(&plane)
            .and_then(|row| row.iter().find(|(q, _, _)| q == p))
            .map_or(0, |(_, c, _)| *c)
    }

    /// s(p, plane); zero when p is off the plane.
    pub fn s(&self, family: usize, plane: usize, p: &Point) -> Rational {
        self.rows[family]
            .get(&plane)
            .and_then(|row| row.iter().find(|(q, _, _)| q == p))
            .map_or_else(Rational::zero, |(_, _, s)| s.clone())
    }

    pub fn row_sum(&self, family: usize, plane: usize) -> Rational {
        self.rows[family]
            .get(&plane)
            .map_or_else(Rational::zero, |row| {
                row.iter().map(|(_, _, s)| s.clone()).sum()
            })
    }

    /// Every non-empty row sums to exactly 1.
    pub fn row_sums_exact(&self) -> bool {
        self.rows.iter().enumerate().all(|(j, fam)| {
            fam.iter()
                .all(|(&i, row)| row.is_empty() || self.row_sum(j, i).is_one())
        })
    }
}

/// Build the factorisation table: one tableau per plane, in parallel,
/// assembled in deterministic (family, plane) order.
pub fn build_s(
    alpha: &Handicap,
    cfg: &Configuration,
    mj: &Multijoints,
    lambda: u32,
) -> Result<FactorisationTable> {
    let jobs: Vec<(usize, usize)> = cfg
        .families
        .iter()
        .enumerate()
        .flat_map(|(j, fam)| (0..fam.len()).map(move |i| (j, i)))
        .collect();
    let built: Vec<Result<(usize, usize, Vec<(Point, u64, Rational)>)>> = jobs
        .par_iter()
        .map(|&(j, i)| {
            let plane = cfg.plane(j, i);
            let points: Vec<Point> = mj
                .points
                .iter()
                .filter(|p| plane.contains(cfg.field, p))
                .cloned()
                .collect();
            if points.is_empty() {
                return Ok((j, i, Vec::new()));
            }
            let tab = crate::tableau::build_tableau(cfg.field, plane, lambda, &points, alpha)?;
            let denom = Rational::from_integer(dual_dim(lambda, plane.dim()).into());
            let row = tab
                .points
                .iter()
                .zip(&tab.counts)
                .map(|(p, &c)| {
                    (
                        p.clone(),
                        c,
                        Rational::from_integer(c.into()) / &denom,
                    )
                })
                .collect();
            Ok((j, i, row))
        })
        .collect();
    let mut rows: Vec<BTreeMap<usize, Vec<(Point, u64, Rational)>>> =
        vec![BTreeMap::new(); cfg.d()];
    for item in built {
        let (j, i, row) = item?;
        rows[j].insert(i, row);
    }
    Ok(FactorisationTable {
        lambda,
        alpha: alpha.clone(),
        gap: None,
        rows,
    })
}

/// Outcome of checking the factorisation displays against a table.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// max over support points and witness tuples of sigma_p / prod_j s;
    /// `None` when a zero s-factor makes the ratio infinite (flagged).
    pub c_emp: Option<Rational>,
    pub zero_factor: bool,
    pub row_sums_ok: bool,
    /// (point, witness, margin); margin absent where a factor vanished.
    pub margins: Vec<(Point, Witness, Option<Rational>)>,
    /// max over the support of the normalised weight w_p.
    pub max_normalised_w: Option<Rational>,
    /// max normalised w >= binom(lambda+n, n) / prod_j binom(lambda+k_j, k_j).
    pub lower_bound_ok: bool,
}

pub fn verify_factorisation(
    table: &FactorisationTable,
    weights: &WeightFunction,
    cfg: &Configuration,
    mj: &Multijoints,
) -> Result<VerificationReport> {
    let support = weights.support();
    let mut margins = Vec::new();
    let mut c_emp: Option<Rational> = None;
    let mut zero_factor = false;
    for p in &support {
        let pi = mj
            .index_of(p)
            .ok_or_else(|| Error::SupportOffJoints(p.key()))?;
        let sigma = weights.sigma(p);
        for w in &mj.witnesses[pi] {
            let mut prod = Rational::one();
            let mut vanished = false;
            for (j, &i) in w.iter().enumerate() {
                let s = table.s(j, i, p);
                if s.is_zero() {
                    vanished = true;
                    break;
                }
                prod *= s;
            }
            if vanished {
                zero_factor = true;
                margins.push((p.clone(), w.clone(), None));
                continue;
            }
            let margin = &sigma / &prod;
            if c_emp.as_ref().map_or(true, |c| c < &margin) {
                c_emp = Some(margin.clone());
            }
            margins.push((p.clone(), w.clone(), Some(margin)));
        }
    }
    if zero_factor {
        c_emp = None;
    }
    let (max_normalised_w, lower_bound_ok) = if support.is_empty() {
        (None, true)
    } else {
        let profile = compute_w(&table.alpha, weights, cfg, mj, table.lambda)?;
        let max_w = profile.sorted[0].1.clone();
        let bound = Rational::from_integer(
            dual_dim(table.lambda, cfg.n).into(),
        ) / normalisation_constant(&cfg.k_list, table.lambda);
        let ok = max_w >= bound;
        (Some(max_w), ok)
    };
    Ok(VerificationReport {
        c_emp,
        zero_factor,
        row_sums_ok: table.row_sums_exact(),
        margins,
        max_normalised_w,
        lower_bound_ok,
    })
}

/// Pick, for each point of J, the witness tuple minimising the count
/// product under the given tableaux.
fn minimising_tuples(
    mj: &Multijoints,
    tableaux: &BTreeMap<(usize, usize), Tableau>,
) -> Vec<usize> {
    (0..mj.len())
        .map(|pi| {
            let p = &mj.points[pi];
            let mut best = (0usize, u128::MAX);
            for (wi, w) in mj.witnesses[pi].iter().enumerate() {
                let prod: u128 = w
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| tableaux.get(&(j, i)).map_or(0, |t| t.count_for(p)) as u128)
                    .product();
                if prod < best.1 {
                    best = (wi, prod);
                }
            }
            best.0
        })
        .collect()
}

/// Sum over J of the product of per-plane counts at a chosen witness tuple,
/// against the ambient dimension binom(lambda+n, n).
pub fn counting_certificate(
    alpha: &Handicap,
    cfg: &Configuration,
    mj: &Multijoints,
    lambda: u32,
    tuple_choice: Option<&[usize]>,
) -> Result<(u128, u128, bool)> {
    let tableaux = tableaux_for(cfg, mj, alpha, lambda)?;
    let default = tuple_choice
        .is_none()
        .then(|| minimising_tuples(mj, &tableaux));
    let choice = tuple_choice.unwrap_or_else(|| default.as_ref().expect("computed above"));
    let mut lhs: u128 = 0;
    for (pi, p) in mj.points.iter().enumerate() {
        let w = &mj.witnesses[pi][choice[pi]];
        lhs += w
            .iter()
            .enumerate()
            .map(|(j, &i)| tableaux.get(&(j, i)).map_or(0, |t| t.count_for(p)) as u128)
            .product::<u128>();
    }
    let rhs = dual_dim(lambda, cfg.n) as u128;
    Ok((lhs, rhs, lhs >= rhs))
}

/// Joint rank of the lifted composed functionals against the full ambient
/// dual dimension.
pub fn vanishing_certificate(
    alpha: &Handicap,
    cfg: &Configuration,
    mj: &Multijoints,
    lambda: u32,
    tuple_choice: Option<&[usize]>,
) -> Result<(usize, usize, bool)> {
    let tableaux = tableaux_for(cfg, mj, alpha, lambda)?;
    let default = tuple_choice
        .is_none()
        .then(|| minimising_tuples(mj, &tableaux));
    let choice = tuple_choice.unwrap_or_else(|| default.as_ref().expect("computed above"));
    let ambient = monomial_basis(cfg.n, lambda);

    // per point: every combination of attributed derivative multi-indices
    // across the chosen planes, lifted to ambient functionals
    let lifted: Vec<Result<Vec<Vec<u64>>>> = (0..mj.len())
        .into_par_iter()
        .map(|pi| {
            let p = &mj.points[pi];
            let w = &mj.witnesses[pi][choice[pi]];
            let planes: Vec<&AffinePlane> =
                w.iter().enumerate().map(|(j, &i)| cfg.plane(j, i)).collect();
            let betas_per_plane: Vec<Vec<MultiIndex>> = w
                .iter()
                .enumerate()
                .map(|(j, &i)| {
                    let tab = &tableaux[&(j, i)];
                    let idx = tab
                        .points
                        .iter()
                        .position(|q| q == p)
                        .expect("witness plane contains its point");
                    tab.accepted
                        .iter()
                        .filter(|(pt, _)| *pt == idx)
                        .map(|(_, beta)| beta.clone())
                        .collect()
                })
                .collect();
            let mut combos: Vec<Vec<MultiIndex>> = vec![Vec::new()];
            for betas in &betas_per_plane {
                let mut next = Vec::new();
                for prefix in &combos {
                    for beta in betas {
                        let mut ext = prefix.clone();
                        ext.push(beta.clone());
                        next.push(ext);
                    }
                }
                combos = next;
            }
            let mut out = Vec::new();
            for combo in combos {
                let per_plane: Vec<Vec<(MultiIndex, u64)>> =
                    combo.into_iter().map(|b| vec![(b, 1u64)]).collect();
                let phi = lift_and_compose(cfg.field, p, &planes, &per_plane, &ambient)?;
                out.push(phi.coeffs);
            }
            Ok(out)
        })
        .collect();

    let mut acc: IncrementalBasis<usize> = IncrementalBasis::new(cfg.field, ambient.dim());
    let mut tag = 0usize;
    for group in lifted {
        for coeffs in group? {
            acc.try_extend(&coeffs, tag)?;
            tag += 1;
        }
    }
    let dim = ambient.dim();
    Ok((acc.rank(), dim, acc.rank() == dim))
}

/// One stage of the lambda sweep.
#[derive(Debug, Clone)]
pub struct SweepStage {
    pub lambda: u32,
    pub search: SearchOutcome,
    pub report: VerificationReport,
    /// (family, plane, point) -> s value.
    pub s_values: BTreeMap<(usize, usize, Point), Rational>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub stages: Vec<SweepStage>,
    /// Max |s - s_prev| over shared keys, per successive stage pair.
    pub cauchy: Vec<Rational>,
}

fn stage_err(lambda: u32) -> impl FnOnce(Error) -> Error {
    move |e| Error::Stage {
        lambda,
        source: Box::new(e),
    }
}

/// Search, build, and verify at each lambda; report gap and s-value series
/// with a successive-difference convergence diagnostic.
pub fn lambda_sweep(
    weights: &WeightFunction,
    cfg: &Configuration,
    mj: &Multijoints,
    lambdas: &[u32],
    budget: u64,
) -> Result<SweepReport> {
    let mut stages: Vec<SweepStage> = Vec::new();
    let mut cauchy = Vec::new();
    for &lambda in lambdas {
        let search =
            search_good_handicap(weights, cfg, mj, lambda, budget).map_err(stage_err(lambda))?;
        let mut table =
            build_s(&search.alpha, cfg, mj, lambda).map_err(stage_err(lambda))?;
        table.gap = Some(search.gap.clone());
        let report =
            verify_factorisation(&table, weights, cfg, mj).map_err(stage_err(lambda))?;
        let mut s_values = BTreeMap::new();
        for (j, fam) in table.rows.iter().enumerate() {
            for (&i, row) in fam {
                for (p, _, s) in row {
                    s_values.insert((j, i, p.clone()), s.clone());
                }
            }
        }
        if let Some(prev) = stages.last() {
            let mut worst = Rational::zero();
            for (key, s) in &s_values {
                let old = prev
                    .s_values
                    .get(key)
                    .cloned()
                    .unwrap_or_else(Rational::zero);
                let diff = if s >= &old { s - &old } else { old - s };
                if diff > worst {
                    worst = diff;
                }
            }
            cauchy.push(worst);
        }
        stages.push(SweepStage {
            lambda,
            search,
            report,
            s_values,
        });
    }
    Ok(SweepReport { stages, cauchy })
}

/// How the Grassmannian-indexed factorisation obtains its plane families.
pub enum GrassmannMode<'a> {
    /// Enumerate every affine k_j-plane of the finite ambient space.
    Enumerate { plane_cap: u128 },
    /// Caller-supplied families expected to realise every trace class on
    /// the support; queries for unrealised traces fail explicitly.
    Representatives(&'a Configuration),
}

/// s indexed by (point, direction space), derived from a plane table via
/// trace-class representatives.
pub struct GrassmannFactorisation {
    pub lambda: u32,
    pub cfg: Configuration,
    pub mj: Multijoints,
    pub table: FactorisationTable,
    pub report: VerificationReport,
    /// Per family: trace key (sorted support points on the plane) ->
    /// representative plane index.
    reps: Vec<BTreeMap<String, usize>>,
    support: Vec<Point>,
    weights_sigma: BTreeMap<Point, Rational>,
}

fn trace_key(field: PrimeField, plane: &AffinePlane, support: &[Point]) -> String {
    let keys: Vec<String> = support
        .iter()
        .filter(|p| plane.contains(field, p))
        .map(|p| p.key())
        .collect();
    keys.join(";")
}

impl GrassmannFactorisation {
    /// s(p, V) for a support point: the table value at the representative
    /// plane whose support trace matches p + V. Zero off the support.
    pub fn s(&self, p: &Point, family: usize, v: &GrassmannElement) -> Result<Rational> {
        if !self.support.contains(p) {
            return Ok(Rational::zero());
        }
        let plane = AffinePlane::through(self.cfg.field, p, v.clone());
        let key = trace_key(self.cfg.field, &plane, &self.support);
        let rep = self.reps[family]
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MissingTrace(format!("family {family}: [{key}]")))?;
        Ok(self.table.s(family, rep, p))
    }

    pub fn support(&self) -> &[Point] {
        &self.support
    }

    /// Both factorisation displays, exhausted over the finite ambient
    /// space: every enumerated plane row sums to 1, and for every support
    /// point and every spanning direction tuple the product dominates.
    pub fn verify_displays(&self) -> Result<bool> {
        if !self.table.row_sums_exact() {
            return Ok(false);
        }
        let c_emp = match &self.report.c_emp {
            Some(c) => c.clone(),
            None => return Ok(false),
        };
        let field = self.cfg.field;
        let spaces: Vec<Vec<GrassmannElement>> = self
            .cfg
            .k_list
            .iter()
            .map(|&k| crate::geometry::enumerate_grassmann(field, self.cfg.n, k))
            .collect();
        for p in &self.support {
            let sigma_bound = |prod: &Rational| prod * &c_emp;
            let mut tuple = vec![0usize; self.cfg.d()];
            'tuples: loop {
                let chosen: Vec<&GrassmannElement> =
                    tuple.iter().enumerate().map(|(j, &i)| &spaces[j][i]).collect();
                if crate::geometry::wedge(field, &chosen)? {
                    let mut prod = Rational::one();
                    for (j, v) in chosen.iter().enumerate() {
                        prod *= self.s(p, j, v)?;
                    }
                    // sigma_p <= C_emp * prod_j s(p, V_j)
                    let sigma = self.sigma(p);
                    if sigma > sigma_bound(&prod) {
                        return Ok(false);
                    }
                }
                let mut pos = 0;
                loop {
                    if pos == tuple.len() {
                        break 'tuples;
                    }
                    tuple[pos] += 1;
                    if tuple[pos] < spaces[pos].len() {
                        break;
                    }
                    tuple[pos] = 0;
                    pos += 1;
                }
            }
        }
        Ok(true)
    }

    fn sigma(&self, p: &Point) -> Rational {
        self.weights_sigma
            .get(p)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

pub fn extend_to_grassmannian(
    weights: &WeightFunction,
    field: PrimeField,
    n: usize,
    k_list: &[usize],
    lambda: u32,
    budget: u64,
    mode: GrassmannMode,
) -> Result<GrassmannFactorisation> {
    let cfg = match mode {
        GrassmannMode::Enumerate { plane_cap } => {
            let families = k_list
                .iter()
                .map(|&k| enumerate_planes(field, n, k, plane_cap))
                .collect::<Result<Vec<_>>>()?;
            Configuration::new(field, n, k_list.to_vec(), families)?
        }
        GrassmannMode::Representatives(base) => base.clone(),
    };
    let mj = crate::geometry::detect_multijoints(&cfg)?;
    let support = weights.support();
    for p in &support {
        if mj.index_of(p).is_none() {
            return Err(Error::SupportOffJoints(p.key()));
        }
    }
    let search = search_good_handicap(weights, &cfg, &mj, lambda, budget)?;
    let mut table = build_s(&search.alpha, &cfg, &mj, lambda)?;
    table.gap = Some(search.gap.clone());
    let report = verify_factorisation(&table, weights, &cfg, &mj)?;

    // trace-class representatives; planes with equal trace must agree on
    // their s rows restricted to the support
    let mut reps: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); cfg.d()];
    for (j, fam) in cfg.families.iter().enumerate() {
        for (i, plane) in fam.iter().enumerate() {
            let key = trace_key(field, plane, &support);
            if key.is_empty() {
                continue;
            }
            match reps[j].get(&key) {
                None => {
                    reps[j].insert(key, i);
                }
                Some(&rep) => {
                    for p in &support {
                        if plane.contains(field, p) && table.s(j, i, p) != table.s(j, rep, p) {
                            return Err(Error::Invariant(format!(
                                "planes with equal support trace disagree at ({})",
                                p.key()
                            )));
                        }
                    }
                }
            }
        }
    }

    let sigma_map: BTreeMap<Point, Rational> = support
        .iter()
        .map(|p| (p.clone(), weights.sigma(p)))
        .collect();
    Ok(GrassmannFactorisation {
        lambda,
        cfg,
        mj,
        table,
        report,
        reps,
        support,
        weights_sigma: sigma_map,
    })
}

/// Result of checking the three links of the inequality chain.
#[derive(Debug, Clone)]
pub struct HolderReport {
    /// sigma_p * T[f](p) <= C_emp * prod_j T_j[f_j](p), exact, pointwise.
    pub link1_ok: bool,
    /// sum_p prod_j T_j[f_j](p)^(1/d) <= prod_j ||T_j f_j||_1^(1/d),
    /// floating point, relative tolerance 1e-9.
    pub link2_ok: bool,
    /// ||T_j f_j||_1 <= ||f_j||_1, exact, from row sums.
    pub link3_ok: bool,
    /// sum_p S(p) T[f](p)^(1/d), floating point.
    pub lhs: f64,
    /// C_emp^(1/d) * prod_j ||f_j||_1^(1/d), floating point.
    pub rhs: f64,
}

impl HolderReport {
    pub fn pass(&self) -> bool {
        self.link1_ok && self.link2_ok && self.link3_ok
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("desk-scale rationals fit in f64")
}

/// Verify the chain behind the multijoint inequality for non-negative
/// per-family plane weights f_j.
pub fn verify_multijoint_inequality(
    cfg: &Configuration,
    mj: &Multijoints,
    table: &FactorisationTable,
    weights: &WeightFunction,
    f: &[BTreeMap<usize, Rational>],
) -> Result<HolderReport> {
    if f.len() != cfg.d() {
        return Err(Error::DimensionMismatch {
            expected: cfg.d(),
            got: f.len(),
        });
    }
    for fam in f {
        for v in fam.values() {
            if v < &Rational::zero() {
                return Err(Error::Config("plane weights must be non-negative".into()));
            }
        }
    }
    let d = cfg.d();
    let fval = |j: usize, i: usize| f[j].get(&i).cloned().unwrap_or_else(Rational::zero);

    // T_j[f_j](p) = sum over planes through p of s(p, plane) f_j(plane)
    let t_j = |j: usize, p: &Point| -> Rational {
        cfg.families[j]
            .iter()
            .enumerate()
            .map(|(i, _)| table.s(j, i, p) * fval(j, i))
            .sum()
    };
    // T[f](p) = sum over witness tuples of prod_j f_j(plane_j)
    let t_all = |pi: usize| -> Rational {
        mj.witnesses[pi]
            .iter()
            .map(|w| {
                w.iter()
                    .enumerate()
                    .map(|(j, &i)| fval(j, i))
                    .product::<Rational>()
            })
            .sum()
    };

    let report = verify_factorisation(table, weights, cfg, mj)?;
    let c_emp = report.c_emp.clone().unwrap_or_else(Rational::zero);

    let mut link1_ok = true;
    for (pi, p) in mj.points.iter().enumerate() {
        let lhs = weights.sigma(p) * t_all(pi);
        let rhs: Rational =
            (0..d).map(|j| t_j(j, p)).product::<Rational>() * &c_emp;
        if lhs > rhs {
            link1_ok = false;
        }
    }

    let tol = 1e-9;
    let mut link2_lhs = 0.0f64;
    for p in &mj.points {
        let mut prod = 1.0f64;
        for j in 0..d {
            prod *= to_f64(&t_j(j, p)).powf(1.0 / d as f64);
        }
        link2_lhs += prod;
    }
    let mut link2_rhs = 1.0f64;
    let mut link3_ok = true;
    let mut f_norms = 1.0f64;
    for j in 0..d {
        let tj_norm: Rational = mj.points.iter().map(|p| t_j(j, p)).sum();
        let f_norm: Rational = f[j].values().cloned().sum();
        if tj_norm > f_norm {
            link3_ok = false;
        }
        link2_rhs *= to_f64(&tj_norm).powf(1.0 / d as f64);
        f_norms *= to_f64(&f_norm).powf(1.0 / d as f64);
    }
    let link2_ok = link2_lhs <= link2_rhs * (1.0 + tol) + tol;

    let mut lhs = 0.0f64;
    for (pi, p) in mj.points.iter().enumerate() {
        let s_p = to_f64(&weights.sigma(p)).powf(1.0 / d as f64);
        lhs += s_p * to_f64(&t_all(pi)).powf(1.0 / d as f64);
    }
    let rhs = to_f64(&c_emp).powf(1.0 / d as f64) * f_norms;

    Ok(HolderReport {
        link1_ok,
        link2_ok,
        link3_ok,
        lhs,
        rhs,
    })
}
