//! Monomial bases of F_lambda[x_1..x_k], Hasse-derivative functionals,
//! plane charts, and lifting of per-plane derivative combinations to
//! n-variate functionals.
//!
//! Functionals are stored extensionally as coefficient vectors over the
//! monomial basis; all downstream consumers only need rank computations.

use crate::error::{Error, Result};
use crate::field::{binomial_mod_p, PrimeField};
use crate::geometry::{AffinePlane, Point};
use crate::linalg::MatrixFp;
use std::cmp::Ordering;
use std::collections::HashMap;

/// Exponent tuple of a monomial; ordered graded-lexicographically
/// (total degree first, then the exponent tuple).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise beta <= gamma.
    pub fn divides(&self, gamma: &MultiIndex) -> bool {
        self.0.iter().zip(&gamma.0).all(|(&b, &g)| b <= g)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// The monomials of F_lambda[x_1..x_k] in graded-lex order.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub k: usize,
    pub lambda: u32,
    pub monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

fn multi_indices_of_order(k: usize, r: u32) -> Vec<MultiIndex> {
    // stars and bars, emitted in lexicographic tuple order
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(cur: &mut Vec<u32>, pos: usize, rem: u32, out: &mut Vec<MultiIndex>) {
        if pos + 1 == cur.len() {
            cur[pos] = rem;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for v in 0..=rem {
            cur[pos] = v;
            rec(cur, pos + 1, rem - v, out);
        }
        cur[pos] = 0;
    }
    if k == 0 {
        if r == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(&mut cur, 0, r, &mut out);
    out
}

pub fn monomial_basis(k: usize, lambda: u32) -> MonomialBasis {
    let mut monomials = Vec::new();
    for r in 0..=lambda {
        monomials.extend(multi_indices_of_order(k, r));
    }
    let index = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    MonomialBasis {
        k,
        lambda,
        monomials,
        index,
    }
}

impl MonomialBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The multi-indices of a fixed total order r, in graded-lex order.
    pub fn of_order(&self, r: u32) -> Vec<MultiIndex> {
        multi_indices_of_order(self.k, r)
    }
}

/// A linear functional on F_lambda[x_1..x_k], as a coefficient vector over
/// the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualFunctional {
    pub coeffs: Vec<u64>,
}

impl DualFunctional {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Pair against a polynomial's coefficient vector.
    pub fn pair(&self, field: PrimeField, poly: &[u64]) -> Result<u64> {
        if poly.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: poly.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(poly)
            .fold(0u64, |acc, (&a, &b)| field.add(acc, field.mul(a, b))))
    }
}

/// f |-> D^beta f(u): the entry at monomial gamma is
/// binom(gamma, beta) * u^(gamma - beta), componentwise, zero unless
/// beta <= gamma.
pub fn hasse_functional(
    field: PrimeField,
    u: &[u64],
    beta: &MultiIndex,
    basis: &MonomialBasis,
) -> DualFunctional {
    let coeffs = basis
        .monomials
        .iter()
        .map(|gamma| {
            if !beta.divides(gamma) {
                return 0;
            }
            let mut acc = 1 % field.modulus();
            for i in 0..basis.k {
                let b = binomial_mod_p(gamma.0[i] as u64, beta.0[i] as u64, field).value();
                acc = field.mul(acc, b);
                acc = field.mul(acc, field.pow(u[i], (gamma.0[i] - beta.0[i]) as u64));
            }
            acc
        })
        .collect();
    DualFunctional { coeffs }
}

/// The affine chart t |-> base + sum t_i u_i of a plane, with its inverse
/// for points on the plane. The (u_i) are the canonical direction rows, so
/// the inverse simply reads off the pivot coordinates.
#[derive(Debug, Clone)]
pub struct PlaneChart {
    field: PrimeField,
    plane: AffinePlane,
    pivots: Vec<usize>,
}

impl PlaneChart {
    pub fn new(field: PrimeField, plane: &AffinePlane) -> Self {
        Self {
            field,
            plane: plane.clone(),
            pivots: plane.direction().pivots(),
        }
    }

    pub fn plane(&self) -> &AffinePlane {
        &self.plane
    }

    pub fn to_ambient(&self, t: &[u64]) -> Point {
        let f = self.field;
        let mut coords = self.plane.base().0.clone();
        for (i, row) in self.plane.direction().basis().iter().enumerate() {
            for (c, &rv) in row.iter().enumerate() {
                coords[c] = f.add(coords[c], f.mul(t[i] % f.modulus(), rv));
            }
        }
        Point(coords)
    }

    /// Intrinsic coordinates of a point on the plane.
    pub fn from_ambient(&self, p: &Point) -> Result<Vec<u64>> {
        if !self.plane.contains(self.field, p) {
            return Err(Error::PointOffPlane(p.key()));
        }
        let f = self.field;
        Ok(self
            .pivots
            .iter()
            .map(|&c| f.sub(p.0[c], self.plane.base().0[c]))
            .collect())
    }
}

/// The graded-lex ordered generators of B_r(p, pi, lambda): the Hasse
/// functionals of order r at the chart coordinates of p.
pub fn plane_functional_space(
    field: PrimeField,
    chart: &PlaneChart,
    p: &Point,
    r: u32,
    basis: &MonomialBasis,
) -> Result<Vec<(MultiIndex, DualFunctional)>> {
    let u = chart.from_ambient(p)?;
    Ok(basis
        .of_order(r)
        .into_iter()
        .map(|beta| {
            let f = hasse_functional(field, &u, &beta, basis);
            (beta, f)
        })
        .collect())
}

// --- dense polynomial helpers ------------------------------------------------

/// Multiply dense coefficient vectors over `basis`, dropping terms above the
/// degree cap.
pub fn poly_mul(field: PrimeField, basis: &MonomialBasis, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; basis.dim()];
    for (ia, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        let ga = &basis.monomials[ia];
        for (ib, &cb) in b.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let gb = &basis.monomials[ib];
            if ga.order() + gb.order() > basis.lambda {
                continue;
            }
            let sum = MultiIndex(
                ga.0.iter()
                    .zip(&gb.0)
                    .map(|(&x, &y)| x + y)
                    .collect(),
            );
            let idx = basis.index_of(&sum).expect("within degree cap");
            out[idx] = field.add(out[idx], field.mul(ca, cb));
        }
    }
    out
}

/// Constant-one polynomial.
pub fn poly_one(field: PrimeField, basis: &MonomialBasis) -> Vec<u64> {
    let mut v = vec![0u64; basis.dim()];
    v[0] = 1 % field.modulus();
    v
}

/// Lift per-plane derivative combinations to a single functional on
/// F_lambda[x_1..x_n].
///
/// Each `combos[j]` is a linear combination of order-homogeneous Hasse
/// generators in plane j's intrinsic coordinates, given as (beta, coeff)
/// terms. The result is the functional
/// f |-> [mixed Hasse derivative of f(p + U t) with the block multi-index,
/// at t = 0], extended linearly over the combinations, where U stacks the
/// canonical direction bases of the planes.
pub fn lift_and_compose(
    field: PrimeField,
    p: &Point,
    planes: &[&AffinePlane],
    combos: &[Vec<(MultiIndex, u64)>],
    ambient_basis: &MonomialBasis,
) -> Result<DualFunctional> {
    let n = p.dim();
    if planes.len() != combos.len() {
        return Err(Error::DimensionMismatch {
            expected: planes.len(),
            got: combos.len(),
        });
    }
    let stacked: Vec<Vec<u64>> = planes
        .iter()
        .flat_map(|pl| pl.direction().basis().iter().cloned())
        .collect();
    if stacked.len() != n || MatrixFp::new(field, n, stacked.clone())?.rank() != n {
        return Err(Error::SingularDirections);
    }
    // t-variable blocks: k_1 variables for plane 1, then k_2, ...
    let lambda = ambient_basis.lambda;
    let t_basis = monomial_basis(n, lambda);
    // linear forms (p + t U)_i as dense polynomials in t
    let linear_forms: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = vec![0u64; t_basis.dim()];
            v[0] = p.0[i] % field.modulus();
            for (m, row) in stacked.iter().enumerate() {
                let mut e = vec![0u32; n];
                e[m] = 1;
                // absent when lambda = 0: the linear part is truncated away
                if let Some(idx) = t_basis.index_of(&MultiIndex(e)) {
                    v[idx] = row[i] % field.modulus();
                }
            }
            v
        })
        .collect();
    // all block term products: cartesian product over combos
    let mut terms: Vec<(MultiIndex, u64)> = vec![(MultiIndex(Vec::new()), 1 % field.modulus())];
    for combo in combos {
        let mut next = Vec::new();
        for (prefix, coeff) in &terms {
            for (beta, c) in combo {
                let mut cat = prefix.0.clone();
                cat.extend(&beta.0);
                next.push((MultiIndex(cat), field.mul(*coeff, *c % field.modulus())));
            }
        }
        terms = next;
    }
    for (cat, _) in &terms {
        if cat.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cat.len(),
            });
        }
    }
    let coeffs = ambient_basis
        .monomials
        .iter()
        .map(|gamma| {
            // substituted monomial prod_i (p + tU)_i^{gamma_i}
            let mut subst = poly_one(field, &t_basis);
            for (i, &g) in gamma.0.iter().enumerate() {
                for _ in 0..g {
                    subst = poly_mul(field, &t_basis, &subst, &linear_forms[i]);
                }
            }
            let mut acc = 0u64;
            for (cat, coeff) in &terms {
                if let Some(idx) = t_basis.index_of(cat) {
                    acc = field.add(acc, field.mul(*coeff, subst[idx]));
                }
            }
            acc
        })
        .collect();
    Ok(DualFunctional { coeffs })
}
