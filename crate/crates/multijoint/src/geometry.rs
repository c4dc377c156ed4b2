//! Points, affine k-planes, the discrete wedge product, the multijoint
//! kernel and the connectivity structure of a configuration.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::MatrixFp;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A point of F_p^n, stored as canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub Vec<u64>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// A k-dimensional linear subspace of F_p^n, canonicalised as the reduced
/// row-echelon basis matrix. Equal subspaces compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrassmannElement {
    n: usize,
    k: usize,
    rows: Vec<Vec<u64>>,
}

impl GrassmannElement {
    pub fn from_spanning(field: PrimeField, n: usize, vectors: &[Vec<u64>]) -> Result<Self> {
        let m = MatrixFp::new(field, n, vectors.to_vec())?;
        let (ech, rank) = m.rref();
        if rank != vectors.len() {
            return Err(Error::DependentDirections);
        }
        Ok(Self {
            n,
            k: rank,
            rows: ech.rows()[..rank].to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Canonical (RREF) basis rows.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&v| v != 0).expect("nonzero row"))
            .collect()
    }

    pub fn key(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Discrete wedge product on direction subspaces: 1 iff the stacked bases
/// span the ambient space. Requires the dimensions to sum to n.
pub fn wedge(field: PrimeField, parts: &[&GrassmannElement]) -> Result<bool> {
    let n = parts
        .first()
        .map(|v| v.ambient_dim())
        .ok_or(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        })?;
    let total: usize = parts.iter().map(|v| v.dim()).sum();
    if total != n || parts.iter().any(|v| v.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: total,
        });
    }
    let rows: Vec<Vec<u64>> = parts
        .iter()
        .flat_map(|v| v.basis().iter().cloned())
        .collect();
    Ok(MatrixFp::new(field, n, rows)?.rank() == n)
}

/// An affine k-plane in canonical form: the base point is the
/// lexicographically least point on the plane and the direction basis is in
/// reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePlane {
    base: Point,
    direction: GrassmannElement,
}

impl AffinePlane {
    /// Canonicalise an arbitrary description (base point + spanning
    /// directions) of an affine plane.
    pub fn canonicalize(field: PrimeField, base: &Point, directions: &[Vec<u64>]) -> Result<Self> {
        let n = base.dim();
        let dir = GrassmannElement::from_spanning(field, n, directions)?;
        Ok(Self::through(field, base, dir))
    }

    /// The canonical plane `p + V`.
    pub fn through(field: PrimeField, p: &Point, direction: GrassmannElement) -> Self {
        // Zeroing the pivot coordinates of the base yields the
        // lexicographically least point on the plane: any other point first
        // deviates at a pivot column, where it takes a positive value.
        let mut base = p.0.clone();
        for row in direction.basis() {
            let piv = row.iter().position(|&v| v != 0).expect("nonzero row");
            let t = base[piv];
            if t != 0 {
                for (c, &rv) in row.iter().enumerate() {
                    base[c] = field.sub(base[c], field.mul(t, rv));
                }
            }
        }
        Self {
            base: Point(base),
            direction,
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn direction(&self) -> &GrassmannElement {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    pub fn contains(&self, field: PrimeField, p: &Point) -> bool {
        if p.dim() != self.ambient_dim() {
            return false;
        }
        // q - base must reproduce from the pivot coordinates
        let diff: Vec<u64> = p
            .0
            .iter()
            .zip(&self.base.0)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        let mut residue = diff.clone();
        for row in self.direction.basis() {
            let piv = row.iter().position(|&v| v != 0).expect("nonzero row");
            let t = residue[piv];
            if t != 0 {
                for (c, &rv) in row.iter().enumerate() {
                    residue[c] = field.sub(residue[c], field.mul(t, rv));
                }
            }
        }
        residue.iter().all(|&v| v == 0)
    }

    /// All p^k points of the plane, in the order induced by chart
    /// coordinates.
    pub fn points(&self, field: PrimeField) -> Vec<Point> {
        let p = field.modulus();
        let k = self.dim();
        let n = self.ambient_dim();
        let mut out = Vec::with_capacity((p as usize).pow(k as u32));
        let mut t = vec![0u64; k];
        loop {
            let mut coords = self.base.0.clone();
            for (i, row) in self.direction.basis().iter().enumerate() {
                if t[i] != 0 {
                    for c in 0..n {
                        coords[c] = field.add(coords[c], field.mul(t[i], row[c]));
                    }
                }
            }
            out.push(Point(coords));
            // increment t
            let mut i = 0;
            while i < k {
                t[i] += 1;
                if t[i] < p {
                    break;
                }
                t[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }

    pub fn key(&self) -> String {
        format!("{}|{}", self.base.key(), self.direction.key())
    }
}

/// A multijoint configuration: d families of k_j-planes with sum k_j = n.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub field: PrimeField,
    pub n: usize,
    pub k_list: Vec<usize>,
    pub families: Vec<Vec<AffinePlane>>,
}

impl Configuration {
    pub fn new(
        field: PrimeField,
        n: usize,
        k_list: Vec<usize>,
        families: Vec<Vec<AffinePlane>>,
    ) -> Result<Self> {
        if k_list.len() < 2 {
            return Err(Error::Config("configuration needs d >= 2 families".into()));
        }
        if k_list.iter().sum::<usize>() != n {
            return Err(Error::Config(format!(
                "sum of k_j must equal n = {n}, got {}",
                k_list.iter().sum::<usize>()
            )));
        }
        if families.len() != k_list.len() {
            return Err(Error::Config("one plane list per family required".into()));
        }
        for (j, (k, fam)) in k_list.iter().zip(&families).enumerate() {
            for plane in fam {
                if plane.dim() != *k || plane.ambient_dim() != n {
                    return Err(Error::Config(format!(
                        "family {j} expects {k}-planes in F^{n}, found a {}-plane in F^{}",
                        plane.dim(),
                        plane.ambient_dim()
                    )));
                }
            }
        }
        Ok(Self {
            field,
            n,
            k_list,
            families,
        })
    }

    pub fn d(&self) -> usize {
        self.k_list.len()
    }

    pub fn plane(&self, family: usize, index: usize) -> &AffinePlane {
        &self.families[family][index]
    }
}

/// Multijoint kernel: 1 iff `p` lies on every plane and the direction
/// spaces wedge to 1.
pub fn delta_kernel(field: PrimeField, p: &Point, planes: &[&AffinePlane]) -> Result<bool> {
    let dirs: Vec<&GrassmannElement> = planes.iter().map(|pl| pl.direction()).collect();
    let spanning = wedge(field, &dirs)?;
    Ok(spanning && planes.iter().all(|pl| pl.contains(field, p)))
}

/// A tuple of per-family plane indices witnessing delta = 1 at a point.
pub type Witness = Vec<usize>;

/// The multijoints of a configuration together with all witnessing tuples.
#[derive(Debug, Clone)]
pub struct Multijoints {
    /// Lexicographically sorted points of J.
    pub points: Vec<Point>,
    /// For each point of J, all witness tuples, sorted.
    pub witnesses: Vec<Vec<Witness>>,
}

impl Multijoints {
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
}

/// Exhaustively evaluate the multijoint kernel over all plane tuples.
pub fn detect_multijoints(cfg: &Configuration) -> Result<Multijoints> {
    let mut found: BTreeMap<Point, BTreeSet<Witness>> = BTreeMap::new();
    let d = cfg.d();
    if cfg.families.iter().any(|f| f.is_empty()) {
        return Ok(Multijoints {
            points: Vec::new(),
            witnesses: Vec::new(),
        });
    }
    let mut tuple = vec![0usize; d];
    loop {
        let planes: Vec<&AffinePlane> = tuple
            .iter()
            .enumerate()
            .map(|(j, &i)| cfg.plane(j, i))
            .collect();
        let dirs: Vec<&GrassmannElement> = planes.iter().map(|pl| pl.direction()).collect();
        if wedge(cfg.field, &dirs)? {
            // intersect: walk the points of the smallest plane
            let smallest = planes
                .iter()
                .enumerate()
                .min_by_key(|(_, pl)| pl.dim())
                .map(|(i, _)| i)
                .unwrap();
            for p in planes[smallest].points(cfg.field) {
                if planes
                    .iter()
                    .enumerate()
                    .all(|(i, pl)| i == smallest || pl.contains(cfg.field, &p))
                {
                    found.entry(p).or_default().insert(tuple.clone());
                }
            }
        }
        // advance tuple
        let mut j = 0;
        while j < d {
            tuple[j] += 1;
            if tuple[j] < cfg.families[j].len() {
                break;
            }
            tuple[j] = 0;
            j += 1;
        }
        if j == d {
            break;
        }
    }
    let (points, witnesses) = found
        .into_iter()
        .map(|(p, ws)| (p, ws.into_iter().collect::<Vec<_>>()))
        .unzip();
    Ok(Multijoints { points, witnesses })
}

/// Gaussian binomial [n choose k]_p.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = p as u128;
    let qpow = |e: usize| q.pow(e as u32);
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= qpow(n - i) - 1;
        den *= qpow(i + 1) - 1;
    }
    num / den
}

/// Number of affine k-planes of F_p^n.
pub fn affine_plane_count(n: usize, k: usize, p: u64) -> u128 {
    gaussian_binomial(n, k, p) * (p as u128).pow((n - k) as u32)
}

/// All elements of Gr(k, F_p^n), each as a canonical RREF basis.
pub fn enumerate_grassmann(field: PrimeField, n: usize, k: usize) -> Vec<GrassmannElement> {
    let p = field.modulus();
    let mut out = Vec::new();
    // iterate over pivot column subsets in lexicographic order
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row i, col c) with c > pivots[i] and c not a pivot
        let mut free: Vec<(usize, usize)> = Vec::new();
        for i in 0..k {
            for c in (pivots[i] + 1)..n {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let total = (p as u128).pow(free.len() as u32);
        let mut counter = 0u128;
        while counter < total {
            let mut rows = vec![vec![0u64; n]; k];
            for i in 0..k {
                rows[i][pivots[i]] = 1;
            }
            let mut rem = counter;
            for &(i, c) in &free {
                rows[i][c] = (rem % p as u128) as u64;
                rem /= p as u128;
            }
            out.push(GrassmannElement { n, k, rows });
            counter += 1;
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return {
                    out.sort();
                    out
                };
            }
            i -= 1;
            if pivots[i] < n - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub const DEFAULT_PLANE_CAP: u128 = 1_000_000;

/// All affine k-planes of F_p^n in canonical form, guarded by a cap on the
/// total count.
pub fn enumerate_planes(
    field: PrimeField,
    n: usize,
    k: usize,
    cap: u128,
) -> Result<Vec<AffinePlane>> {
    if k < 1 || k > n {
        return Err(Error::Config(format!("plane dimension {k} out of 1..={n}")));
    }
    let count = affine_plane_count(n, k, field.modulus());
    if count > cap {
        return Err(Error::PlaneCapExceeded { count, cap });
    }
    let p = field.modulus();
    let mut out = Vec::with_capacity(count as usize);
    for dir in enumerate_grassmann(field, n, k) {
        let pivots = dir.pivots();
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let total = (p as u128).pow(free_cols.len() as u32);
        let mut counter = 0u128;
        while counter < total {
            let mut base = vec![0u64; n];
            let mut rem = counter;
            for &c in &free_cols {
                base[c] = (rem % p as u128) as u64;
                rem /= p as u128;
            }
            // base has zeros at all pivot columns, hence already canonical
            out.push(AffinePlane {
                base: Point(base),
                direction: dir.clone(),
            });
            counter += 1;
        }
    }
    out.sort();
    Ok(out)
}

/// Partition of the points of J under the adjacency relation "some plane
/// contributes to both".
pub fn connected_components(mj: &Multijoints) -> Vec<Vec<usize>> {
    components_of(mj, &(0..mj.len()).collect::<Vec<_>>())
}

/// Components of an arbitrary subset of J (given as indices into
/// `mj.points`), using only planes contributing to points of the subset.
pub fn components_of(mj: &Multijoints, subset: &[usize]) -> Vec<Vec<usize>> {
    // plane (family, index) -> points of the subset it contributes to
    let mut by_plane: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &pi in subset {
        for w in &mj.witnesses[pi] {
            for (j, &i) in w.iter().enumerate() {
                by_plane.entry((j, i)).or_default().push(pi);
            }
        }
    }
    let mut parent: BTreeMap<usize, usize> = subset.iter().map(|&i| (i, i)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut root = x;
        while parent[&root] != root {
            root = parent[&root];
        }
        let mut cur = x;
        while parent[&cur] != root {
            let next = parent[&cur];
            parent.insert(cur, root);
            cur = next;
        }
        root
    }
    for pts in by_plane.values() {
        for w in pts.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in subset {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn pt(coords: &[u64]) -> Point {
        Point(coords.to_vec())
    }

    fn line(field: PrimeField, base: &[u64], dir: &[u64]) -> AffinePlane {
        AffinePlane::canonicalize(field, &pt(base), &[dir.to_vec()]).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let f3 = fp(3);
        let pl = line(f3, &[1, 0], &[0, 1]);
        assert_eq!(pl.base(), &pt(&[1, 0]));
        assert_eq!(pl.direction().basis(), &[vec![0, 1]]);

        let a = line(f3, &[1, 1], &[0, 2]);
        let b = line(f3, &[1, 0], &[0, 1]);
        assert_eq!(a, b);
    }

    #[test]
    fn canonicalize_rejects_dependent_directions() {
        let f5 = fp(5);
        let r = AffinePlane::canonicalize(f5, &pt(&[0, 0]), &[vec![1, 2], vec![2, 4]]);
        assert!(matches!(r, Err(Error::DependentDirections)));
    }

    #[test]
    fn canonical_forms_agree_with_point_sets() {
        // random-ish planes described two ways compare equal iff the
        // exhaustively enumerated point sets agree
        let f3 = fp(3);
        let descriptions = [
            (([1u64, 2], [1u64, 1]), ([2u64, 0], [2u64, 2])),
            (([0, 1], [1, 0]), ([2, 1], [2, 0])),
            (([1, 1], [1, 2]), ([0, 2], [2, 4])),
        ];
        for ((b1, d1), (b2, d2)) in descriptions {
            let p1 = line(f3, &b1, &d1);
            let p2 = line(f3, &b2, &d2);
            let mut s1 = p1.points(f3);
            let mut s2 = p2.points(f3);
            s1.sort();
            s2.sort();
            assert_eq!(s1 == s2, p1 == p2);
        }
    }

    #[test]
    fn base_is_lex_least_point() {
        let f5 = fp(5);
        for dir in [[1u64, 1], [1, 3], [2, 1], [0, 1]] {
            let pl = line(f5, &[3, 4], &dir);
            let least = pl.points(f5).into_iter().min().unwrap();
            assert_eq!(pl.base(), &least);
        }
    }

    #[test]
    fn wedge_examples() {
        let f5 = fp(5);
        let e = |i: usize| {
            let mut v = vec![0u64; 4];
            v[i] = 1;
            v
        };
        let v1 = GrassmannElement::from_spanning(f5, 4, &[e(0), e(1)]).unwrap();
        let v2 = GrassmannElement::from_spanning(f5, 4, &[e(2), e(3)]).unwrap();
        let v3 = GrassmannElement::from_spanning(f5, 4, &[e(1), e(2)]).unwrap();
        assert!(wedge(f5, &[&v1, &v2]).unwrap());
        assert!(!wedge(f5, &[&v1, &v3]).unwrap());
        // dimension mismatch
        assert!(wedge(f5, &[&v1]).is_err());
    }

    #[test]
    fn wedge_is_basis_invariant() {
        // replacing a basis by a random change of basis leaves wedge fixed
        let f3 = fp(3);
        let v1 = GrassmannElement::from_spanning(f3, 4, &[vec![1, 0, 1, 2], vec![0, 1, 1, 1]])
            .unwrap();
        let v2 = GrassmannElement::from_spanning(f3, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
            .unwrap();
        let expected = wedge(f3, &[&v1, &v2]).unwrap();
        // alternative spanning sets for the same subspaces
        let w1 = GrassmannElement::from_spanning(
            f3,
            4,
            &[vec![1, 1, 2, 0], vec![2, 1, 0, 2]], // row combos of v1's basis
        )
        .unwrap();
        assert_eq!(w1, v1);
        assert_eq!(wedge(f3, &[&w1, &v2]).unwrap(), expected);
    }

    fn axes_config(p: u64) -> Configuration {
        let f = fp(p);
        let e = |i: usize| {
            let mut v = vec![0u64; 3];
            v[i] = 1;
            v
        };
        let fams = (0..3)
            .map(|i| vec![AffinePlane::canonicalize(f, &pt(&[0, 0, 0]), &[e(i)]).unwrap()])
            .collect();
        Configuration::new(f, 3, vec![1, 1, 1], fams).unwrap()
    }

    /// All axis-parallel lines through every point, three families by axis.
    pub(crate) fn grid_config(p: u64) -> Configuration {
        let f = fp(p);
        let mut fams = Vec::new();
        for axis in 0..3usize {
            let mut dir = vec![0u64; 3];
            dir[axis] = 1;
            let mut planes = BTreeSet::new();
            for a in 0..p {
                for b in 0..p {
                    let mut base = vec![0u64; 3];
                    let others: Vec<usize> = (0..3).filter(|&i| i != axis).collect();
                    base[others[0]] = a;
                    base[others[1]] = b;
                    planes.insert(
                        AffinePlane::canonicalize(f, &pt(&base), &[dir.clone()]).unwrap(),
                    );
                }
            }
            fams.push(planes.into_iter().collect::<Vec<_>>());
        }
        Configuration::new(f, 3, vec![1, 1, 1], fams).unwrap()
    }

    #[test]
    fn delta_examples() {
        let cfg = axes_config(3);
        let planes: Vec<&AffinePlane> = (0..3).map(|j| cfg.plane(j, 0)).collect();
        assert!(delta_kernel(cfg.field, &pt(&[0, 0, 0]), &planes).unwrap());
        assert!(!delta_kernel(cfg.field, &pt(&[1, 1, 0]), &planes).unwrap());
        // degenerate directions: two copies of the same axis and one other
        let f = cfg.field;
        let l0 = cfg.plane(0, 0);
        let l1 = cfg.plane(1, 0);
        assert!(!delta_kernel(f, &pt(&[0, 0, 0]), &[l0, l0, l1]).unwrap());
    }

    #[test]
    fn detect_axes_single_joint() {
        let cfg = axes_config(3);
        let mj = detect_multijoints(&cfg).unwrap();
        assert_eq!(mj.points, vec![pt(&[0, 0, 0])]);
        assert_eq!(mj.witnesses, vec![vec![vec![0, 0, 0]]]);
    }

    #[test]
    fn detect_grid_all_points() {
        let cfg = grid_config(3);
        let mj = detect_multijoints(&cfg).unwrap();
        assert_eq!(mj.len(), 27);
        // every plane in a witness tuple of p contains p
        for (i, p) in mj.points.iter().enumerate() {
            for w in &mj.witnesses[i] {
                for (j, &idx) in w.iter().enumerate() {
                    assert!(cfg.plane(j, idx).contains(cfg.field, p));
                }
            }
        }
    }

    #[test]
    fn detect_two_transversal_points() {
        // two parallel vertical lines in one family, one horizontal line in
        // the other: exactly the two intersection points are multijoints
        let f = fp(5);
        let v0 = line(f, &[0, 0], &[0, 1]);
        let v1 = line(f, &[1, 0], &[0, 1]);
        let h = line(f, &[0, 0], &[1, 0]);
        let cfg = Configuration::new(f, 2, vec![1, 1], vec![vec![v0, v1], vec![h]]).unwrap();
        let mj = detect_multijoints(&cfg).unwrap();
        assert_eq!(mj.points, vec![pt(&[0, 0]), pt(&[1, 0])]);
    }

    #[test]
    fn enumerate_plane_counts() {
        let f2 = fp(2);
        let f3 = fp(3);
        assert_eq!(enumerate_planes(f2, 2, 1, 100).unwrap().len(), 6);
        assert_eq!(enumerate_planes(f3, 2, 1, 100).unwrap().len(), 12);
        assert_eq!(enumerate_planes(f3, 2, 2, 100).unwrap().len(), 1);
        for n in 1..=4usize {
            for k in 1..=n {
                for p in [2u64, 3] {
                    let f = fp(p);
                    let planes = enumerate_planes(f, n, k, 1_000_000).unwrap();
                    assert_eq!(planes.len() as u128, affine_plane_count(n, k, p));
                    // canonical and unique
                    let set: BTreeSet<_> = planes.iter().collect();
                    assert_eq!(set.len(), planes.len());
                }
            }
        }
    }

    #[test]
    fn enumerate_lines_matches_bruteforce_spans() {
        // over F_2, n <= 3: every pair of distinct points spans a line
        for n in 2..=3usize {
            let f2 = fp(2);
            let all_pts: Vec<Point> = {
                let mut v = Vec::new();
                for m in 0..(1u64 << n) {
                    v.push(Point((0..n).map(|i| (m >> i) & 1).collect()));
                }
                v
            };
            let mut brute: BTreeSet<AffinePlane> = BTreeSet::new();
            for a in &all_pts {
                for b in &all_pts {
                    if a != b {
                        let dir: Vec<u64> = a
                            .0
                            .iter()
                            .zip(&b.0)
                            .map(|(&x, &y)| f2.sub(y, x))
                            .collect();
                        brute.insert(AffinePlane::canonicalize(f2, a, &[dir]).unwrap());
                    }
                }
            }
            let enumerated: BTreeSet<AffinePlane> =
                enumerate_planes(f2, n, 1, 1_000_000).unwrap().into_iter().collect();
            assert_eq!(brute, enumerated);
        }
    }

    #[test]
    fn enumeration_cap_guard() {
        let f5 = fp(5);
        assert!(matches!(
            enumerate_planes(f5, 3, 1, 10),
            Err(Error::PlaneCapExceeded { .. })
        ));
    }

    #[test]
    fn components_examples() {
        let cfg = axes_config(3);
        let mj = detect_multijoints(&cfg).unwrap();
        assert_eq!(connected_components(&mj), vec![vec![0]]);

        let grid = grid_config(3);
        let gm = detect_multijoints(&grid).unwrap();
        assert_eq!(connected_components(&gm).len(), 1);
    }

    #[test]
    fn components_two_disjoint_blocks() {
        // two disjoint triple crossings in F_5^3: axis lines through the
        // origin and through (3,3,3); no mixed triple meets in a point
        let f = fp(5);
        let mut families = vec![Vec::new(), Vec::new(), Vec::new()];
        for base in [[0u64, 0, 0], [3, 3, 3]] {
            for axis in 0..3 {
                let mut dir = [0u64; 3];
                dir[axis] = 1;
                families[axis].push(line(f, &base, &dir));
            }
        }
        let cfg = Configuration::new(f, 3, vec![1, 1, 1], families).unwrap();
        let mj = detect_multijoints(&cfg).unwrap();
        assert_eq!(mj.len(), 2);
        assert_eq!(connected_components(&mj).len(), 2);
    }

    #[test]
    fn delta_symmetric_under_family_permutation() {
        let cfg = grid_config(3);
        let mj = detect_multijoints(&cfg).unwrap();
        let p = &mj.points[4];
        let w = &mj.witnesses[4][0];
        let planes: Vec<&AffinePlane> =
            w.iter().enumerate().map(|(j, &i)| cfg.plane(j, i)).collect();
        assert!(delta_kernel(cfg.field, p, &planes).unwrap());
        let perm: Vec<&AffinePlane> = vec![planes[2], planes[0], planes[1]];
        assert!(delta_kernel(cfg.field, p, &perm).unwrap());
    }
}
