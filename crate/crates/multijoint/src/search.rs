//! Per-point weights w_p, the explicit continuity radius for perturbation
//! moves, lexicographic descent towards a good handicap, and a brute-force
//! oracle at tiny scale.
//!
//! All weight arithmetic is exact rational; the descent compares sorted
//! descending profiles lexicographically and only ever accepts strict
//! improvements.

use crate::error::{Error, Result};
use crate::field::binomial_exact;
use crate::geometry::{components_of, Configuration, Multijoints, Point};
use crate::linalg::{rat, Rational};
use crate::tableau::{build_tableau, Handicap, Tableau};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// The d-th powers sigma_p = S(p)^d as exact rationals.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    sigma: BTreeMap<Point, Rational>,
}

impl WeightFunction {
    /// Validates non-negativity; values are taken as given (callers that
    /// need the normalised form use [`WeightFunction::normalised`]).
    pub fn new(sigma: BTreeMap<Point, Rational>) -> Result<Self> {
        for (p, v) in &sigma {
            if v < &Rational::zero() {
                return Err(Error::Config(format!(
                    "negative weight at point ({})",
                    p.key()
                )));
            }
        }
        Ok(Self { sigma })
    }

    /// Rescale so the values sum to exactly 1.
    pub fn normalised(sigma: BTreeMap<Point, Rational>) -> Result<Self> {
        let wf = Self::new(sigma)?;
        let total: Rational = wf.sigma.values().sum();
        if total.is_zero() {
            return Err(Error::EmptySupport);
        }
        Ok(Self {
            sigma: wf
                .sigma
                .into_iter()
                .map(|(p, v)| (p, v / &total))
                .collect(),
        })
    }

    /// sigma_p = 1/N at each of the given points.
    pub fn uniform(points: &[Point]) -> Self {
        let n = points.len() as i64;
        Self {
            sigma: points
                .iter()
                .map(|p| (p.clone(), rat(1, n.max(1))))
                .collect(),
        }
    }

    pub fn sigma(&self, p: &Point) -> Rational {
        self.sigma.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.sigma.values().sum()
    }

    /// Points with strictly positive weight, in lexicographic order.
    pub fn support(&self) -> Vec<Point> {
        self.sigma
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, _)| p.clone())
            .collect()
    }
}

/// The weights w_p(alpha) at one handicap: exact minima over witness
/// tuples, raw and normalised by prod_j binom(lambda + k_j, k_j).
#[derive(Debug, Clone)]
pub struct WeightProfile {
    /// w_p over the support; off-support points of J carry 0.
    pub raw: BTreeMap<Point, Rational>,
    pub normalised: BTreeMap<Point, Rational>,
    /// Support entries in descending normalised order, ties by point.
    pub sorted: Vec<(Point, Rational)>,
    /// Whether every off-support tableau count vanished (alpha in A).
    pub in_a: bool,
}

impl WeightProfile {
    pub fn gap(&self) -> Rational {
        match (self.sorted.first(), self.sorted.last()) {
            (Some(hi), Some(lo)) => &hi.1 - &lo.1,
            _ => Rational::zero(),
        }
    }

    pub fn sorted_values(&self) -> Vec<Rational> {
        self.sorted.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Lexicographic comparison of sorted descending profiles; lower is better.
pub fn compare_profiles(a: &[Rational], b: &[Rational]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// prod_j binom(lambda + k_j, k_j).
pub fn normalisation_constant(k_list: &[usize], lambda: u32) -> Rational {
    let mut acc = Rational::one();
    for &k in k_list {
        acc *= Rational::from_integer(
            binomial_exact(lambda as u64 + k as u64, k as u64).into(),
        );
    }
    acc
}

/// Tableaux for every plane meeting J, keyed by (family, plane index).
/// Marked points on each plane are all points of J lying on it.
pub fn tableaux_for(
    cfg: &Configuration,
    mj: &Multijoints,
    alpha: &Handicap,
    lambda: u32,
) -> Result<BTreeMap<(usize, usize), Tableau>> {
    let mut out = BTreeMap::new();
    for (j, fam) in cfg.families.iter().enumerate() {
        for (i, plane) in fam.iter().enumerate() {
            let points: Vec<Point> = mj
                .points
                .iter()
                .filter(|p| plane.contains(cfg.field, p))
                .cloned()
                .collect();
            if points.is_empty() {
                continue;
            }
            out.insert((j, i), build_tableau(cfg.field, plane, lambda, &points, alpha)?);
        }
    }
    Ok(out)
}

/// Exact w_p(alpha) = min over witness tuples of (1/sigma_p) prod_j
/// tilde S(p, pi_j), over the support; also checks that every tableau
/// count at an off-support point vanishes.
pub fn compute_w(
    alpha: &Handicap,
    weights: &WeightFunction,
    cfg: &Configuration,
    mj: &Multijoints,
    lambda: u32,
) -> Result<WeightProfile> {
    let tableaux = tableaux_for(cfg, mj, alpha, lambda)?;
    let support = weights.support();
    // admissibility only concerns planes that can enter a support witness,
    // i.e. planes meeting the support
    let mut in_a = true;
    for tab in tableaux.values() {
        if !tab.points.iter().any(|p| !weights.sigma(p).is_zero()) {
            continue;
        }
        for (p, &c) in tab.points.iter().zip(&tab.counts) {
            if c > 0 && weights.sigma(p).is_zero() {
                in_a = false;
            }
        }
    }
    let mut raw = BTreeMap::new();
    for p in &mj.points {
        if weights.sigma(p).is_zero() {
            raw.insert(p.clone(), Rational::zero());
        }
    }
    for p in &support {
        let pi = mj
            .index_of(p)
            .ok_or_else(|| Error::SupportOffJoints(p.key()))?;
        let wits = &mj.witnesses[pi];
        if wits.is_empty() {
            return Err(Error::NoWitness(p.key()));
        }
        let sigma = weights.sigma(p);
        let mut best: Option<Rational> = None;
        for w in wits {
            let mut prod = Rational::one();
            for (j, &i) in w.iter().enumerate() {
                let count = tableaux
                    .get(&(j, i))
                    .map_or(0, |t| t.count_for(p));
                prod *= Rational::from_integer(count.into());
            }
            let val = prod / &sigma;
            best = Some(match best {
                Some(b) if b <= val => b,
                _ => val,
            });
        }
        raw.insert(p.clone(), best.expect("witness list nonempty"));
    }
    let norm = normalisation_constant(&cfg.k_list, lambda);
    let normalised: BTreeMap<Point, Rational> =
        raw.iter().map(|(p, v)| (p.clone(), v / &norm)).collect();
    let mut sorted: Vec<(Point, Rational)> = support
        .iter()
        .map(|p| (p.clone(), normalised[p].clone()))
        .collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(WeightProfile {
        raw,
        normalised,
        sorted,
        in_a,
    })
}

/// alpha - v: decrement the top-t support points of the current descending
/// order and every off-support point of J.
pub fn perturbation_step(
    alpha: &Handicap,
    t: usize,
    sorted_support: &[Point],
    all_points: &[Point],
) -> Result<Handicap> {
    if t == 0 || t > sorted_support.len() {
        return Err(Error::PerturbationIndex {
            t,
            max: sorted_support.len(),
        });
    }
    let mut next = alpha.clone();
    for p in &sorted_support[..t] {
        next.set(p.clone(), alpha.get(p)? - 1);
    }
    let support: std::collections::BTreeSet<&Point> = sorted_support.iter().collect();
    for p in all_points {
        if !support.contains(p) {
            next.set(p.clone(), alpha.get(p)? - 1);
        }
    }
    Ok(next)
}

/// The explicit perturbation-continuity radius h for the normalised
/// profile: |w_i(alpha) - w_i(alpha - v)| <= h / (2 lambda).
pub fn continuity_radius(
    weights: &WeightFunction,
    j_size: usize,
    cfg: &Configuration,
    lambda: u32,
) -> Result<Rational> {
    let support = weights.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let d = cfg.d();
    let j = Rational::from_integer((j_size as i64).into());
    let full: Vec<Rational> = cfg
        .k_list
        .iter()
        .map(|&k| Rational::from_integer(binomial_exact(lambda as u64 + k as u64, k as u64).into()))
        .collect();
    let slope: Vec<Rational> = cfg
        .k_list
        .iter()
        .map(|&k| {
            Rational::from_integer(
                binomial_exact(lambda as u64 + k as u64 - 1, k as u64 - 1).into(),
            )
        })
        .collect();
    let mut inner = Rational::zero();
    for mask in 1u32..(1 << d) {
        let mut term = Rational::one();
        for jdx in 0..d {
            if mask & (1 << jdx) != 0 {
                term *= &slope[jdx] * &j;
            } else {
                term *= &full[jdx];
            }
        }
        inner += term;
    }
    let denom: Rational = full.iter().product();
    let sigma_inv_max = support
        .iter()
        .map(|p| weights.sigma(p).recip())
        .max()
        .expect("support nonempty");
    Ok(rat(2 * lambda as i64, 1) * sigma_inv_max * inner / denom)
}

/// One accepted descent move.
#[derive(Debug, Clone)]
pub struct MoveRecord {
    /// Gap index the move was taken at.
    pub t: usize,
    /// Repetition count that produced the improvement.
    pub c: u64,
    /// The top-t support points before the move, as a sorted set.
    pub top_before: Vec<Point>,
    /// The same set after the move.
    pub top_after: Vec<Point>,
}

/// Result of the descent; `converged == false` means the budget or the
/// escalation cap ran out, reported distinctly rather than silently.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub alpha: Handicap,
    pub profile: WeightProfile,
    /// Normalised continuity radius h.
    pub h: Rational,
    /// Stopping target |Supp S| * h.
    pub h_prime_support: Rational,
    /// The coarser |J| * h, recorded alongside.
    pub h_prime_j: Rational,
    pub gap: Rational,
    pub converged: bool,
    /// Profile evaluations consumed.
    pub evaluations: u64,
    pub moves: Vec<MoveRecord>,
}

const ESCALATION_CAP: u64 = 1 << 20;

/// Deep-negative initial handicap off the support, forcing every tableau
/// count there to vanish and to stay vanished across perturbation moves.
pub fn initial_handicap(mj: &Multijoints, support: &[Point], lambda: u32) -> Handicap {
    let margin = -((lambda as i64 + 1) * (1 + mj.len() as i64));
    let mut alpha = Handicap::default();
    let sup: std::collections::BTreeSet<&Point> = support.iter().collect();
    for p in &mj.points {
        alpha.set(p.clone(), if sup.contains(p) { 0 } else { margin });
    }
    alpha
}

/// Lexicographic descent on the sorted profile via perturbation moves with
/// geometric escalation.
pub fn search_good_handicap(
    weights: &WeightFunction,
    cfg: &Configuration,
    mj: &Multijoints,
    lambda: u32,
    budget: u64,
) -> Result<SearchOutcome> {
    let support = weights.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let support_idx: Vec<usize> = support
        .iter()
        .map(|p| mj.index_of(p).ok_or_else(|| Error::SupportOffJoints(p.key())))
        .collect::<Result<_>>()?;
    let comps = components_of(mj, &support_idx);
    if comps.len() > 1 {
        return Err(Error::DisconnectedSupport {
            components: comps.len(),
        });
    }

    let h = continuity_radius(weights, mj.len(), cfg, lambda)?;
    let n_sup = support.len() as i64;
    let h_prime_support = &h * rat(n_sup, 1);
    let h_prime_j = &h * rat(mj.len() as i64, 1);
    let target = &h_prime_support / rat(lambda.max(1) as i64, 1);
    let step_gap = &h / rat(lambda.max(1) as i64, 1);

    let mut alpha = initial_handicap(mj, &support, lambda);
    let mut evaluations: u64 = 0;
    let mut moves = Vec::new();

    let eval = |a: &Handicap, n: &mut u64| -> Result<WeightProfile> {
        *n += 1;
        let prof = compute_w(a, weights, cfg, mj, lambda)?;
        Ok(prof)
    };

    let mut profile = eval(&alpha, &mut evaluations)?;
    if !profile.in_a {
        return Err(Error::Invariant(
            "initial handicap leaves counts off the support".into(),
        ));
    }
    loop {
        if profile.gap() <= target {
            let gap = profile.gap();
            return Ok(SearchOutcome {
                alpha,
                profile,
                h,
                h_prime_support,
                h_prime_j,
                gap,
                converged: true,
                evaluations,
                moves,
            });
        }
        // least t with a gap exceeding h/lambda; one exists whenever the
        // total spread exceeds |Supp S| * h / lambda
        let values = profile.sorted_values();
        let t = (1..values.len())
            .find(|&i| &values[i - 1] - &values[i] > step_gap)
            .ok_or_else(|| Error::Invariant("no step index despite wide gap".into()))?;
        let sorted_pts: Vec<Point> = profile.sorted.iter().map(|(p, _)| p.clone()).collect();
        let top_before: Vec<Point> = {
            let mut v = sorted_pts[..t].to_vec();
            v.sort();
            v
        };

        let mut improved = None;
        let mut c: u64 = 1;
        while c <= ESCALATION_CAP {
            let mut cand = alpha.clone();
            for _ in 0..c {
                cand = perturbation_step(&cand, t, &sorted_pts, &mj.points)?;
            }
            if evaluations >= budget {
                break;
            }
            let cand_profile = eval(&cand, &mut evaluations)?;
            if !cand_profile.in_a {
                return Err(Error::Invariant(
                    "perturbation left the admissible set".into(),
                ));
            }
            if compare_profiles(&cand_profile.sorted_values(), &values) == Ordering::Less {
                improved = Some((cand, cand_profile, c));
                break;
            }
            c *= 2;
        }
        match improved {
            Some((next, next_profile, c)) => {
                let top_after: Vec<Point> = {
                    let mut v: Vec<Point> = next_profile.sorted[..t]
                        .iter()
                        .map(|(p, _)| p.clone())
                        .collect();
                    v.sort();
                    v
                };
                moves.push(MoveRecord {
                    t,
                    c,
                    top_before,
                    top_after,
                });
                alpha = next;
                profile = next_profile;
            }
            None => {
                let gap = profile.gap();
                return Ok(SearchOutcome {
                    alpha,
                    profile,
                    h,
                    h_prime_support,
                    h_prime_j,
                    gap,
                    converged: false,
                    evaluations,
                    moves,
                });
            }
        }
    }
}

/// Exhaustive minimiser of the sorted profile over a small handicap box:
/// the first support coordinate is pinned to 0 (translation invariance),
/// the rest range over [-box, box], off-support points sit deep negative.
pub fn brute_force_handicap_oracle(
    weights: &WeightFunction,
    cfg: &Configuration,
    mj: &Multijoints,
    lambda: u32,
    bound: i64,
) -> Result<(Handicap, WeightProfile)> {
    let support = weights.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    if support.len() > 4 {
        return Err(Error::OracleGuard(format!(
            "support size {} exceeds 4",
            support.len()
        )));
    }
    if bound < 0 {
        return Err(Error::OracleGuard("negative box".into()));
    }
    let free = support.len() - 1;
    let cells = (bound.max(1) as u128).pow(free as u32);
    if cells > 1_000_000 {
        return Err(Error::OracleGuard(format!(
            "box^(|Supp S|-1) = {cells} exceeds 10^6"
        )));
    }

    let base = initial_handicap(mj, &support, lambda);
    let mut best: Option<(Handicap, WeightProfile, Vec<i64>)> = None;
    let mut assignment = vec![0i64; free];
    loop {
        let mut alpha = base.clone();
        for (i, &v) in assignment.iter().enumerate() {
            alpha.set(support[i + 1].clone(), v);
        }
        let profile = compute_w(&alpha, weights, cfg, mj, lambda)?;
        let key: Vec<i64> = std::iter::once(0).chain(assignment.iter().copied()).collect();
        let better = match &best {
            None => true,
            Some((_, bp, bk)) => {
                match compare_profiles(&profile.sorted_values(), &bp.sorted_values()) {
                    Ordering::Less => true,
                    Ordering::Equal => key < *bk,
                    Ordering::Greater => false,
                }
            }
        };
        if better {
            best = Some((alpha, profile, key));
        }
        // advance the odometer over [-bound, bound]^free
        let mut pos = 0;
        loop {
            if pos == free {
                let (a, p, _) = best.expect("at least one assignment evaluated");
                return Ok((a, p));
            }
            if assignment[pos] < bound {
                assignment[pos] += 1;
                break;
            }
            assignment[pos] = -bound;
            pos += 1;
        }
    }
}
