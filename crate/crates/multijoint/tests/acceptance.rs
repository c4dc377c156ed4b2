//! End-to-end acceptance suite. Each test prints one pass/fail line for
//! its criterion before asserting, so a full run yields a ten-line
//! scorecard.

use multijoint::factorization::{
    build_s, counting_certificate, extend_to_grassmannian, lambda_sweep, vanishing_certificate,
    verify_multijoint_inequality, GrassmannMode,
};
use multijoint::field::binomial_exact;
use multijoint::generator::{
    random_handicap, random_plane, random_plane_weights, random_points_on_plane, Generator,
};
use multijoint::geometry::{detect_multijoints, enumerate_grassmann};
use multijoint::linalg::{rat, MatrixFp, Rational};
use multijoint::poly::{monomial_basis, plane_functional_space, PlaneChart};
use multijoint::search::{brute_force_handicap_oracle, search_good_handicap};
use multijoint::tableau::{build_tableau, dual_dim, priority_compare};
use multijoint::{
    AffinePlane, Configuration, Handicap, Multijoints, Point, PrimeField, WeightFunction,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn line(field: PrimeField, base: &[u64], dir: &[u64]) -> AffinePlane {
    AffinePlane::canonicalize(field, &Point(base.to_vec()), &[dir.to_vec()]).unwrap()
}

/// Three axis lines through the origin of F_5^3; one multijoint.
fn single_joint() -> (Configuration, Multijoints) {
    let f = fp(5);
    let fams = (0..3)
        .map(|a| {
            let mut dir = [0u64; 3];
            dir[a] = 1;
            vec![line(f, &[0, 0, 0], &dir)]
        })
        .collect();
    let cfg = Configuration::new(f, 3, vec![1, 1, 1], fams).unwrap();
    let mj = detect_multijoints(&cfg).unwrap();
    (cfg, mj)
}

/// One horizontal line crossed by two verticals in F_5^2; two multijoints
/// sharing the horizontal line.
fn two_joints() -> (Configuration, Multijoints) {
    let f = fp(5);
    let fams = vec![
        vec![line(f, &[0, 0], &[1, 0])],
        vec![line(f, &[0, 0], &[0, 1]), line(f, &[1, 0], &[0, 1])],
    ];
    let cfg = Configuration::new(f, 2, vec![1, 1], fams).unwrap();
    let mj = detect_multijoints(&cfg).unwrap();
    (cfg, mj)
}

/// All axis-parallel lines through every point of F_p^3; p^3 multijoints.
fn grid(p: u64) -> (Configuration, Multijoints) {
    let f = fp(p);
    let mut fams = vec![Vec::new(), Vec::new(), Vec::new()];
    for axis in 0..3usize {
        let mut dir = [0u64; 3];
        dir[axis] = 1;
        for a in 0..p {
            for b in 0..p {
                let mut base = [0u64; 3];
                base[(axis + 1) % 3] = a;
                base[(axis + 2) % 3] = b;
                fams[axis].push(line(f, &base, &dir));
            }
        }
    }
    let cfg = Configuration::new(f, 3, vec![1, 1, 1], fams).unwrap();
    let mj = detect_multijoints(&cfg).unwrap();
    (cfg, mj)
}

fn verdict(criterion: usize, label: &str, ok: bool) {
    println!(
        "criterion {criterion} ({label}): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} ({label}) failed");
}

/// Criterion 1: the tableau counts always sum to the dual dimension,
/// across randomized planes, point sets, handicaps, and degree caps.
#[test]
fn criterion_1_sum_identity() {
    let mut rng = Generator::seed_from_u64(0xACC1);
    let mut ok = true;
    for trial in 0..100 {
        let p = [2u64, 3, 5][trial % 3];
        let field = fp(p);
        let n = rng.gen_range(2..=3usize);
        let k = rng.gen_range(1..=2.min(n - 1).max(1));
        let lambda = rng.gen_range(0..=6u32);
        let plane = random_plane(&mut rng, field, n, k);
        let max_pts = plane.points(field).len().min(4);
        let count = rng.gen_range(1..=max_pts);
        let pts = random_points_on_plane(&mut rng, field, &plane, count);
        let alpha = random_handicap(&mut rng, &pts, lambda as i64 + 2);
        let tab = build_tableau(field, &plane, lambda, &pts, &alpha).unwrap();
        if tab.total() != dual_dim(lambda, k) {
            ok = false;
        }
    }
    verdict(1, "sum identity, 100 randomized instances", ok);
}

/// Independent check: feed the same functionals, in the same priority
/// order, into a plain row-reduction rank counter and attribute each rank
/// increment to its point.
fn rref_oracle_counts(
    field: PrimeField,
    plane: &AffinePlane,
    lambda: u32,
    pts: &[Point],
    alpha: &Handicap,
) -> Vec<u64> {
    let basis = monomial_basis(plane.dim(), lambda);
    let chart = PlaneChart::new(field, plane);
    let mut pairs: Vec<(usize, u32)> = (0..pts.len())
        .flat_map(|i| (0..=lambda).map(move |r| (i, r)))
        .collect();
    pairs.sort_by(|&(i, r), &(j, s)| {
        priority_compare((&pts[i], r), (&pts[j], s), alpha).unwrap()
    });
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rank = 0usize;
    let mut counts = vec![0u64; pts.len()];
    'outer: for (i, r) in pairs {
        for (_, phi) in plane_functional_space(field, &chart, &pts[i], r, &basis).unwrap() {
            rows.push(phi.coeffs.clone());
            let new_rank = MatrixFp::new(field, basis.dim(), rows.clone()).unwrap().rank();
            if new_rank > rank {
                rank = new_rank;
                counts[i] += 1;
            } else {
                rows.pop();
            }
            if rank == basis.dim() {
                break 'outer;
            }
        }
    }
    counts
}

/// Criterion 2: hand-checked tableaux on a two-point line and the full
/// nine-point plane, cross-checked against the row-reduction oracle.
#[test]
fn criterion_2_hand_checked_tableaux() {
    let mut ok = true;

    let f5 = fp(5);
    let x_axis = line(f5, &[0, 0], &[1, 0]);
    let pts = vec![Point(vec![0, 0]), Point(vec![1, 0])];
    let zero = Handicap::zero(&pts);
    let t0 = build_tableau(f5, &x_axis, 4, &pts, &zero).unwrap();
    ok &= t0.counts == vec![3, 2];
    ok &= rref_oracle_counts(f5, &x_axis, 4, &pts, &zero) == vec![3, 2];
    let mut shifted = Handicap::zero(&pts);
    shifted.set(pts[1].clone(), 1);
    let t1 = build_tableau(f5, &x_axis, 4, &pts, &shifted).unwrap();
    ok &= t1.counts == vec![2, 3];
    ok &= rref_oracle_counts(f5, &x_axis, 4, &pts, &shifted) == vec![2, 3];

    // whole plane F_3^2 at lambda = 1: the third lex point is collinear
    // with the first two and contributes nothing
    let f3 = fp(3);
    let whole = AffinePlane::canonicalize(f3, &Point(vec![0, 0]), &[vec![1, 0], vec![0, 1]])
        .unwrap();
    let nine = whole.points(f3);
    let zero9 = Handicap::zero(&nine);
    let t9 = build_tableau(f3, &whole, 1, &nine, &zero9).unwrap();
    ok &= t9.counts == vec![1, 1, 0, 1, 0, 0, 0, 0, 0];
    ok &= rref_oracle_counts(f3, &whole, 1, &nine, &zero9) == t9.counts;

    verdict(2, "hand-checked tableaux vs row-reduction oracle", ok);
}

/// Criterion 3: the four structural properties of the tableau counts,
/// each over at least 200 random handicap draws.
#[test]
fn criterion_3_structural_properties() {
    let mut rng = Generator::seed_from_u64(0xACC3);
    let field = fp(5);
    let mut ok = true;

    // shared instance generator: a random line or 2-plane in F_5^3 with
    // 2..=4 of its points
    let instance = |rng: &mut Generator| {
        let k = rng.gen_range(1..=2usize);
        let plane = random_plane(rng, field, 3, k);
        let count = rng.gen_range(2..=4usize);
        let pts = random_points_on_plane(rng, field, &plane, count);
        let lambda = rng.gen_range(1..=4u32);
        let alpha = random_handicap(rng, &pts, lambda as i64 + 1);
        (plane, pts, lambda, alpha)
    };

    // translation invariance: counts depend only on handicap differences
    for _ in 0..200 {
        let (plane, pts, lambda, alpha) = instance(&mut rng);
        let c = rng.gen_range(-5..=5i64);
        let a = build_tableau(field, &plane, lambda, &pts, &alpha).unwrap();
        let b = build_tableau(field, &plane, lambda, &pts, &alpha.shifted(c)).unwrap();
        ok &= a.counts == b.counts;
    }

    // uniform boundedness: a point handicapped more than lambda below
    // every other point receives no conditions
    for _ in 0..200 {
        let (plane, pts, lambda, mut alpha) = instance(&mut rng);
        let target = rng.gen_range(0..pts.len());
        let floor = pts
            .iter()
            .map(|p| alpha.get(p).unwrap())
            .min()
            .unwrap();
        alpha.set(pts[target].clone(), floor - lambda as i64 - 1);
        let tab = build_tableau(field, &plane, lambda, &pts, &alpha).unwrap();
        ok &= tab.count_for(&pts[target]) == 0;
    }

    // monotonicity: raising one point's handicap never lowers its count
    for _ in 0..200 {
        let (plane, pts, lambda, alpha) = instance(&mut rng);
        let target = rng.gen_range(0..pts.len());
        let before = build_tableau(field, &plane, lambda, &pts, &alpha).unwrap();
        let mut raised = alpha.clone();
        raised.set(
            pts[target].clone(),
            alpha.get(&pts[target]).unwrap() + rng.gen_range(1..=3i64),
        );
        let after = build_tableau(field, &plane, lambda, &pts, &raised).unwrap();
        ok &= after.count_for(&pts[target]) >= before.count_for(&pts[target]);
    }

    // continuity: a unit handicap step moves every count by at most
    // binom(lambda + k - 1, k - 1)
    for _ in 0..200 {
        let (plane, pts, lambda, alpha) = instance(&mut rng);
        let k = plane.dim();
        let bound = binomial_exact(lambda as u64 + k as u64 - 1, k as u64 - 1) as i64;
        let target = rng.gen_range(0..pts.len());
        let before = build_tableau(field, &plane, lambda, &pts, &alpha).unwrap();
        let mut stepped = alpha.clone();
        stepped.set(pts[target].clone(), alpha.get(&pts[target]).unwrap() + 1);
        let after = build_tableau(field, &plane, lambda, &pts, &stepped).unwrap();
        for (i, _) in pts.iter().enumerate() {
            let diff = after.counts[i] as i64 - before.counts[i] as i64;
            ok &= diff.abs() <= bound;
        }
    }

    verdict(3, "structural properties, 4 x 200 draws", ok);
}

/// Criterion 4: the counting lower bound sum_p prod_j tilde S >= the
/// ambient dual dimension, for random handicaps and witness choices.
#[test]
fn criterion_4_counting_lower_bound() {
    let mut rng = Generator::seed_from_u64(0xACC4);
    let mut ok = true;
    for (cfg, mj) in [single_joint(), two_joints(), grid(3)] {
        for lambda in [2u32, 3, 4] {
            ok &= {
                let rhs = dual_dim(lambda, cfg.n) as u128;
                (0..20).all(|_| {
                    let alpha = random_handicap(&mut rng, &mj.points, lambda as i64 + 1);
                    let choice: Vec<usize> = (0..mj.len())
                        .map(|pi| rng.gen_range(0..mj.witnesses[pi].len()))
                        .collect();
                    let (lhs, r, pass) =
                        counting_certificate(&alpha, &cfg, &mj, lambda, Some(&choice)).unwrap();
                    let (_, _, pass_default) =
                        counting_certificate(&alpha, &cfg, &mj, lambda, None).unwrap();
                    r == rhs && lhs >= rhs && pass && pass_default
                })
            };
        }
    }
    verdict(4, "counting lower bound over random handicaps", ok);
}

/// Criterion 5: the lifted composed functionals are jointly independent,
/// so their count meets the full ambient dual dimension.
#[test]
fn criterion_5_vanishing_rank() {
    let mut rng = Generator::seed_from_u64(0xACC5);
    let mut ok = true;
    for (cfg, mj) in [single_joint(), two_joints(), grid(3)] {
        for lambda in [1u32, 2, 3] {
            let dim = dual_dim(lambda, cfg.n) as usize;
            let zero = Handicap::zero(&mj.points);
            let (rank, full, pass) =
                vanishing_certificate(&zero, &cfg, &mj, lambda, None).unwrap();
            ok &= pass && rank == dim && full == dim;
            let alpha = random_handicap(&mut rng, &mj.points, 3);
            let (rank, _, pass) =
                vanishing_certificate(&alpha, &cfg, &mj, lambda, None).unwrap();
            ok &= pass && rank == dim;
        }
    }
    verdict(5, "vanishing rank certificates", ok);
}

/// Criterion 6: the descent reaches the continuity-radius stopping gap,
/// the gap does not grow with lambda, and on small supports the sorted
/// profile matches the brute-force oracle exactly.
#[test]
fn criterion_6_handicap_search() {
    let mut ok = true;
    for (cfg, mj) in [single_joint(), two_joints()] {
        let weights = WeightFunction::uniform(&mj.points);
        let mut gaps: Vec<Rational> = Vec::new();
        for lambda in [4u32, 8, 16] {
            let out = search_good_handicap(&weights, &cfg, &mj, lambda, 10_000).unwrap();
            let target = out.h_prime_support.clone() / rat(lambda as i64, 1);
            ok &= out.converged && out.gap <= target;
            gaps.push(out.gap.clone());
        }
        ok &= gaps.windows(2).all(|w| w[1] <= w[0]);

        for lambda in [1u32, 2, 3] {
            let out = search_good_handicap(&weights, &cfg, &mj, lambda, 10_000).unwrap();
            let (_, oracle) =
                brute_force_handicap_oracle(&weights, &cfg, &mj, lambda, 3).unwrap();
            ok &= out.profile.sorted_values() == oracle.sorted_values();
        }
    }
    verdict(6, "handicap search gap and oracle agreement", ok);
}

/// Criterion 7: factorisation verification across lambda sweeps — exact
/// row sums, no vanishing factor on support witnesses, a stable empirical
/// constant, and the normalised-weight lower bound at every stage.
#[test]
fn criterion_7_factorisation_sweeps() {
    let mut ok = true;
    let cases: Vec<((Configuration, Multijoints), Vec<u32>)> = vec![
        (single_joint(), vec![1, 2, 4]),
        (two_joints(), vec![4, 8, 16]),
        (grid(3), vec![2, 5, 8]),
    ];
    for ((cfg, mj), lambdas) in cases {
        let weights = WeightFunction::uniform(&mj.points);
        let sweep = lambda_sweep(&weights, &cfg, &mj, &lambdas, 10_000).unwrap();
        let mut cs: Vec<Rational> = Vec::new();
        for stage in &sweep.stages {
            ok &= stage.report.row_sums_ok;
            ok &= !stage.report.zero_factor;
            ok &= stage.report.lower_bound_ok;
            match &stage.report.c_emp {
                Some(c) => cs.push(c.clone()),
                None => ok = false,
            }
        }
        // non-increasing up to 10% relative slack
        ok &= cs.windows(2).all(|w| w[1].clone() <= w[0].clone() * rat(11, 10));
    }
    verdict(7, "factorisation sweeps verified", ok);
}

/// Criterion 8: the three-link inequality chain behind the multijoint
/// bound, with constant weights and random non-negative weights.
#[test]
fn criterion_8_inequality_chain() {
    let mut rng = Generator::seed_from_u64(0xACC8);
    let mut ok = true;
    for (cfg, mj) in [single_joint(), two_joints(), grid(3)] {
        let weights = WeightFunction::uniform(&mj.points);
        let lambda = 4u32;
        let out = search_good_handicap(&weights, &cfg, &mj, lambda, 10_000).unwrap();
        let table = build_s(&out.alpha, &cfg, &mj, lambda).unwrap();

        let ones: Vec<BTreeMap<usize, Rational>> = cfg
            .families
            .iter()
            .map(|fam| (0..fam.len()).map(|i| (i, Rational::one())).collect())
            .collect();
        let report = verify_multijoint_inequality(&cfg, &mj, &table, &weights, &ones).unwrap();
        ok &= report.pass();

        for _ in 0..20 {
            let f: Vec<BTreeMap<usize, Rational>> = cfg
                .families
                .iter()
                .map(|fam| random_plane_weights(&mut rng, fam.len()))
                .collect();
            let report = verify_multijoint_inequality(&cfg, &mj, &table, &weights, &f).unwrap();
            ok &= report.pass();
        }
    }
    verdict(8, "inequality chain, constant and random weights", ok);
}

/// Criterion 9: the direction-indexed factorisation over the full affine
/// line families of F_2^2 and F_3^2, with exact restriction consistency.
#[test]
fn criterion_9_grassmann_extension() {
    let mut ok = true;
    let cases: Vec<(u64, u32, Vec<Vec<u64>>)> = vec![
        (2, 1, vec![vec![0, 0]]),
        (3, 2, vec![vec![0, 0], vec![1, 1]]),
    ];
    for (p, lambda, support_coords) in cases {
        let field = fp(p);
        let support: Vec<Point> = support_coords.into_iter().map(Point).collect();
        let weights = WeightFunction::uniform(&support);
        let gf = extend_to_grassmannian(
            &weights,
            field,
            2,
            &[1, 1],
            lambda,
            10_000,
            GrassmannMode::Enumerate {
                plane_cap: 1_000_000,
            },
        )
        .unwrap();
        ok &= gf.verify_displays().unwrap();

        // restriction consistency: s at (p, V) equals the base-table value
        // for the unique plane through p with direction V
        let directions = enumerate_grassmann(field, 2, 1);
        for q in gf.support() {
            for j in 0..2 {
                for v in &directions {
                    let idx = gf
                        .cfg
                        .families[j]
                        .iter()
                        .position(|pl| {
                            pl.direction().key() == v.key() && pl.contains(field, q)
                        })
                        .unwrap();
                    ok &= gf.s(q, j, v).unwrap() == gf.table.s(j, idx, q);
                }
            }
        }

        // off the support the direction-indexed factorisation vanishes
        let off = Point(vec![0, 1]);
        assert!(!gf.support().contains(&off));
        for v in &directions {
            ok &= gf.s(&off, 0, v).unwrap() == Rational::zero();
        }
    }
    verdict(9, "full direction-indexed factorisation", ok);
}

/// Criterion 10: sweep output is byte-identical across 1, 2, and 8 worker
/// threads.
#[test]
fn criterion_10_determinism() {
    let config = r#"{
        "prime": 5,
        "n": 2,
        "families": [
            { "k": 1, "planes": [ { "base": [0, 0], "directions": [[1, 0]] } ] },
            { "k": 1, "planes": [
                { "base": [0, 0], "directions": [[0, 1]] },
                { "base": [1, 0], "directions": [[0, 1]] }
            ] }
        ],
        "weights": "uniform",
        "lambdas": [2, 4],
        "seed": 7
    }"#;
    let dir = std::env::temp_dir();
    let path = dir.join("acceptance_determinism_config.json");
    std::fs::write(&path, config).unwrap();

    let mut outputs: Vec<Vec<u8>> = Vec::new();
    let mut ok = true;
    for threads in ["1", "2", "8"] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_multijoint"))
            .args(["sweep", "--config"])
            .arg(&path)
            .args(["--threads", threads])
            .output()
            .unwrap();
        ok &= out.status.code() == Some(0);
        outputs.push(out.stdout);
    }
    ok &= outputs.windows(2).all(|w| w[0] == w[1]);
    verdict(10, "sweep byte-identical across 1/2/8 threads", ok);
}
