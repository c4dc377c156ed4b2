//! Seeded random instances for the property suites: planes, point sets on
//! a plane, handicaps, and non-negative plane weights.

use crate::field::PrimeField;
use crate::geometry::{AffinePlane, Point};
use crate::linalg::{rat, Rational};
use crate::tableau::Handicap;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub type Generator = ChaCha8Rng;

pub fn random_point(rng: &mut Generator, field: PrimeField, n: usize) -> Point {
    Point((0..n).map(|_| rng.gen_range(0..field.modulus())).collect())
}

/// A random affine k-plane: random base point, direction rows redrawn
/// until independent.
pub fn random_plane(rng: &mut Generator, field: PrimeField, n: usize, k: usize) -> AffinePlane {
    loop {
        let base = random_point(rng, field, n);
        let dirs: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..field.modulus())).collect())
            .collect();
        if let Ok(plane) = AffinePlane::canonicalize(field, &base, &dirs) {
            return plane;
        }
    }
}

/// A random subset of the plane's points of the requested size (at most
/// the plane's cardinality), in lexicographic order.
pub fn random_points_on_plane(
    rng: &mut Generator,
    field: PrimeField,
    plane: &AffinePlane,
    count: usize,
) -> Vec<Point> {
    let mut all = plane.points(field);
    let take = count.min(all.len());
    // partial Fisher-Yates, then restore order
    for i in 0..take {
        let j = rng.gen_range(i..all.len());
        all.swap(i, j);
    }
    let mut chosen: Vec<Point> = all.into_iter().take(take).collect();
    chosen.sort();
    chosen
}

pub fn random_handicap(rng: &mut Generator, points: &[Point], bound: i64) -> Handicap {
    let mut alpha = Handicap::default();
    for p in points {
        alpha.set(p.clone(), rng.gen_range(-bound..=bound));
    }
    alpha
}

/// Non-negative rational weights with small numerators, one per plane.
pub fn random_plane_weights(
    rng: &mut Generator,
    plane_count: usize,
) -> BTreeMap<usize, Rational> {
    (0..plane_count)
        .map(|i| (i, rat(rng.gen_range(0..=5), rng.gen_range(1..=4))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let f = PrimeField::new(5).unwrap();
        let mut a = Generator::seed_from_u64(11);
        let mut b = Generator::seed_from_u64(11);
        for _ in 0..10 {
            assert_eq!(random_plane(&mut a, f, 3, 2), random_plane(&mut b, f, 3, 2));
        }
    }

    #[test]
    fn random_planes_are_valid() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = Generator::seed_from_u64(5);
        for _ in 0..50 {
            let k = rng.gen_range(1..=2);
            let plane = random_plane(&mut rng, f, 3, k);
            assert_eq!(plane.dim(), k);
            let pts = random_points_on_plane(&mut rng, f, &plane, 4);
            assert!(!pts.is_empty());
            for p in &pts {
                assert!(plane.contains(f, p));
            }
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
