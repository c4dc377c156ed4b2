//! Greedy construction of handicap-ordered vanishing-condition tableaux.
//!
//! For a plane pi and degree cap lambda, the pairs (p, r) with p a marked
//! point on pi and 0 <= r <= lambda are visited in priority order keyed by
//! (r - alpha(p), p). Each pair contributes its order-r Hasse generators in
//! graded-lex order; a generator is kept exactly when it is independent of
//! everything kept so far. The count attributed to p is its kept total.

use crate::error::{Error, Result};
use crate::field::{binomial_exact, PrimeField};
use crate::geometry::{AffinePlane, Point};
use crate::linalg::IncrementalBasis;
use crate::poly::{monomial_basis, plane_functional_space, MultiIndex, PlaneChart};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// An integer handicap on a finite set of points. Points absent from the
/// map have no handicap; asking for one is an error.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Handicap {
    values: BTreeMap<Point, i64>,
}

impl Handicap {
    pub fn new(values: BTreeMap<Point, i64>) -> Self {
        Self { values }
    }

    /// Zero handicap on the given points.
    pub fn zero<'a>(points: impl IntoIterator<Item = &'a Point>) -> Self {
        Self {
            values: points.into_iter().map(|p| (p.clone(), 0)).collect(),
        }
    }

    pub fn get(&self, p: &Point) -> Result<i64> {
        self.values
            .get(p)
            .copied()
            .ok_or_else(|| Error::MissingHandicap(p.key()))
    }

    pub fn set(&mut self, p: Point, v: i64) {
        self.values.insert(p, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &i64)> {
        self.values.iter()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Shift every value by a constant.
    pub fn shifted(&self, c: i64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|(p, &v)| (p.clone(), v + c))
                .collect(),
        }
    }
}

/// Compare two (point, order) pairs under a handicap: smaller
/// (r - alpha(p)) first, ties broken by the point.
pub fn priority_compare(
    a: (&Point, u32),
    b: (&Point, u32),
    handicap: &Handicap,
) -> Result<Ordering> {
    let ka = a.1 as i64 - handicap.get(a.0)?;
    let kb = b.1 as i64 - handicap.get(b.0)?;
    Ok(ka.cmp(&kb).then_with(|| a.0.cmp(b.0)))
}

/// The result of the greedy construction on a single plane.
#[derive(Debug, Clone)]
pub struct Tableau {
    pub plane: AffinePlane,
    pub lambda: u32,
    /// Marked points, in the order given to the builder.
    pub points: Vec<Point>,
    /// Kept-generator count per marked point, aligned with `points`.
    pub counts: Vec<u64>,
    /// The kept generators: (index into `points`, derivative multi-index),
    /// in acceptance order.
    pub accepted: Vec<(usize, MultiIndex)>,
}

impl Tableau {
    pub fn count_for(&self, p: &Point) -> u64 {
        self.points
            .iter()
            .position(|q| q == p)
            .map_or(0, |i| self.counts[i])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Run the greedy construction on `plane` with degree cap `lambda`, marked
/// points `points`, and priorities from `handicap`.
///
/// The kept total always equals binom(lambda + k, k) when the marked set is
/// nonempty: a single point's derivatives up to order lambda already span
/// the dual space, and pairs stop being visited once the accumulator is
/// full.
pub fn build_tableau(
    field: PrimeField,
    plane: &AffinePlane,
    lambda: u32,
    points: &[Point],
    handicap: &Handicap,
) -> Result<Tableau> {
    let k = plane.dim();
    let chart = PlaneChart::new(field, plane);
    let basis = monomial_basis(k, lambda);

    let mut seen = BTreeSet::new();
    for p in points {
        if !plane.contains(field, p) {
            return Err(Error::PointOffPlane(p.key()));
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(p.key()));
        }
        handicap.get(p)?;
    }

    let mut pairs: Vec<(usize, u32)> = (0..points.len())
        .flat_map(|i| (0..=lambda).map(move |r| (i, r)))
        .collect();
    // sort is stable, but keys are total: (r - alpha, point)
    pairs.sort_by(|&(i, r), &(j, s)| {
        priority_compare((&points[i], r), (&points[j], s), handicap)
            .expect("handicap checked above")
    });

    let mut acc: IncrementalBasis<(usize, MultiIndex)> = IncrementalBasis::new(field, basis.dim());
    let mut counts = vec![0u64; points.len()];
    let mut accepted = Vec::new();
    let full = basis.dim();
    'outer: for (i, r) in pairs {
        for (beta, phi) in plane_functional_space(field, &chart, &points[i], r, &basis)? {
            if acc.try_extend(&phi.coeffs, (i, beta.clone()))? {
                counts[i] += 1;
                accepted.push((i, beta));
            }
            if acc.rank() == full {
                break 'outer;
            }
        }
    }
    debug_assert!(points.is_empty() || acc.rank() == full);

    Ok(Tableau {
        plane: plane.clone(),
        lambda,
        points: points.to_vec(),
        counts,
        accepted,
    })
}

/// binom(lambda + k, k) as u64; the dual-space dimension on a k-plane.
pub fn dual_dim(lambda: u32, k: usize) -> u64 {
    binomial_exact(lambda as u64 + k as u64, k as u64)
}
