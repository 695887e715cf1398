use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rkgeo::gram::*;
use rkgeo::hardy::BlaschkeProduct;
use rkgeo::kernels::sample_points;
use rkgeo::numerics::{c64, determinant, singular_values, CMatrix, RankTolerance, C64};
use rkgeo::{Error, Point, PointSet, SpaceSpec};

fn set(zs: &[(f64, f64)]) -> PointSet {
    PointSet::new(zs.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

fn to_c64(zs: &[GaussRat]) -> Vec<C64> {
    zs.iter().map(gauss_rat_to_c64).collect()
}

#[test]
fn cross_gram_small_cases() {
    let g = cross_gram(&SpaceSpec::Hardy, &set(&[(0.0, 0.0)]), &set(&[(0.5, 0.0)])).unwrap();
    assert_eq!(g.k.shape(), (1, 1));
    assert!((g.k[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);

    let err = cross_gram(&SpaceSpec::Hardy, &set(&[(0.1, 0.0)]), &set(&[(0.1, 0.0), (0.2, 0.0)]));
    assert!(matches!(err, Err(Error::SetsIntersect(_))));
}

#[test]
fn verdict_none_on_cardinality_mismatch() {
    for space in [SpaceSpec::Hardy, SpaceSpec::Bergman, SpaceSpec::Bargmann] {
        let v = geodesic_verdict(
            &space,
            &set(&[(0.1, 0.2), (0.3, -0.1)]),
            &set(&[(0.5, 0.0), (-0.2, 0.4), (0.0, -0.6)]),
            RankTolerance::Standard,
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::None);
        assert!(v.det.is_none());
        // dim N(K) - dim N(K*) = |A| - |B|
        assert_eq!(v.dims.0 as i64 - v.dims.1 as i64, -1);
    }
}

#[test]
fn bargmann_degenerate_pair() {
    let tau = std::f64::consts::TAU;
    let a = set(&[(1.0, 0.0), (2.0, 0.0)]);
    let b = set(&[(3.0, 0.0), (3.0, -tau)]);
    // (a1 - a2)(conj b1 - conj b2) = (-1)(-2πi) = 2πi
    let v = geodesic_verdict(&SpaceSpec::Bargmann, &a, &b, RankTolerance::Standard).unwrap();
    assert_eq!(v.kind, VerdictKind::InfinitelyMany);
    assert_eq!(v.dims, (1, 1));
    let scale = v.singular_values[0] * v.singular_values[0];
    assert!(v.det.unwrap().norm() <= 1e-10 * scale);
}

#[test]
fn cauchy_determinant_closed_form() {
    let one = cauchy_determinant(&[c64(0.5, 0.0)], &[c64(0.2, 0.0)]).unwrap();
    assert!((one - c64(1.0 / 0.9, 0.0)).norm() < 1e-15);

    let rep = cauchy_determinant(
        &[c64(0.3, 0.1), c64(0.3, 0.1), c64(-0.2, 0.0)],
        &[c64(0.1, 0.0), c64(0.0, 0.5), c64(0.4, -0.4)],
    )
    .unwrap();
    assert_eq!(rep, c64(0.0, 0.0));

    // A zero node on the a side uses the swapped form.
    let a = [c64(0.0, 0.0), c64(0.4, -0.3)];
    let b = [c64(0.2, 0.6), c64(-0.5, 0.1)];
    let closed = cauchy_determinant(&a, &b).unwrap();
    let numeric = determinant(&szego_matrix(&a, &b).unwrap()).unwrap();
    assert!((closed - numeric).norm() < 1e-13 * numeric.norm());

    assert_eq!(
        cauchy_determinant(&[c64(0.0, 0.0)], &[c64(0.0, 0.0)]),
        Err(Error::ZeroDenominator)
    );
}

fn disk_vec(n: usize, seed: u64) -> (Vec<C64>, Vec<C64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&SpaceSpec::Hardy, 2 * n, 0.05, &[], &mut rng);
    let v: Vec<C64> = pts.iter().map(|p| p.scalar().unwrap()).collect();
    (v[..n].to_vec(), v[n..].to_vec())
}

#[test]
fn cauchy_determinant_matches_lu_n5() {
    for seed in 0..50 {
        let (a, b) = disk_vec(5, seed);
        let closed = cauchy_determinant(&a, &b).unwrap();
        let numeric = determinant(&szego_matrix(&a, &b).unwrap()).unwrap();
        assert!((closed - numeric).norm() < 1e-9 * numeric.norm(), "seed {seed}");
    }
}

#[test]
fn borchardt_small_cases() {
    let a = [c64(0.3, -0.2)];
    let b = [c64(-0.6, 0.1)];
    let chk = borchardt_check(&a, &b).unwrap();
    let want = (c64(1.0, 0.0) - a[0] * b[0].conj()).powi(-2);
    assert!((chk.lhs - want).norm() < 1e-15 && (chk.rhs - want).norm() < 1e-15);

    let (a, b) = disk_vec(2, 7);
    assert!(borchardt_check(&a, &b).unwrap().relative_error < 1e-10);

    let big = vec![c64(0.0, 0.0); 13];
    assert!(matches!(borchardt_check(&big, &big), Err(Error::TooLarge { .. })));
}

#[test]
fn borchardt_on_example_data_vanishes() {
    let b = to_c64(&example_b_points());
    let rep = bergman_counterexample_from_coeffs_exact(&example_b_points(), &example_coefficients()).unwrap();
    let chk = borchardt_check(&rep.a, &b).unwrap();
    let c = szego_matrix(&rep.a, &b).unwrap();
    let scale = c.map(|z| z * z).iter().map(|z| z.norm()).fold(0.0, f64::max).powi(3);
    assert!(chk.lhs.norm() < 1e-8 * scale);
    assert!(chk.rhs.norm() < 1e-8 * scale);
}

#[test]
fn safe_region_cases() {
    let r = (0.195f64 / 1.195).sqrt() * 0.99;
    let a = set(&[(r, 0.0), (0.0, r * 0.5), (-r * 0.7, 0.1)]);
    let b = set(&[(0.0, -r), (0.1, 0.1), (-0.2, -0.1)]);
    let rep = bergman_safe_region(&a, &b).unwrap();
    assert!(rep.guaranteed_nonzero);
    assert_eq!(rep.numeric_full_rank, Some(true));
    assert!(rep.permanent_abs.unwrap() > 0.0);

    let a = set(&[(0.8, 0.0)]);
    let b = set(&[(0.625, 0.0)]);
    let rep = bergman_safe_region(&a, &b).unwrap();
    assert!(!rep.guaranteed_nonzero);
    assert!((rep.max_product - 0.5).abs() < 1e-15);
    assert!(rep.numeric_full_rank.is_none());
}

#[test]
fn example_roots_from_exact_coefficients() {
    let rep = bergman_counterexample_from_coeffs_exact(&example_b_points(), &example_coefficients()).unwrap();
    for (z, (re, im)) in rep.a.iter().zip(EXAMPLE_ROOTS) {
        let hit = rep.a.iter().any(|w| (w.re - re).abs() < 1e-5 && (w.im - im).abs() < 1e-5);
        assert!(hit, "missing root near {re}+{im}i (got {z})");
    }
    assert!(rep.relative_smin <= 1e-8);

    // Double-precision expansion agrees.
    let float = bergman_counterexample_from_coeffs(
        &to_c64(&example_b_points()),
        &to_c64(&example_coefficients()),
    )
    .unwrap();
    for (x, y) in rep.a.iter().zip(float.a.iter()) {
        assert!((x - y).norm() < 1e-10);
    }
}

#[test]
fn single_kernel_has_no_zeros() {
    let b = to_c64(&example_b_points());
    let c = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
    assert!(matches!(
        bergman_counterexample_from_coeffs(&b, &c),
        Err(Error::InsufficientInteriorRoots { .. })
    ));
}

#[test]
fn completion_from_rational_pair() {
    let (a1, a2) = example_a1_a2();
    let rep = bergman_counterexample_complete_exact(&a1, &a2, &example_b_points()).unwrap();
    assert_eq!(rep.deflation_remainder, Some(0.0));
    assert!(rep.a[2].norm() < 1.0);
    assert!(rep.relative_smin <= 1e-8);

    let float = bergman_counterexample_complete(
        gauss_rat_to_c64(&a1),
        gauss_rat_to_c64(&a2),
        &to_c64(&example_b_points()),
    )
    .unwrap();
    assert!(float.deflation_remainder.unwrap() < 1e-10);
    assert!((float.a[2] - rep.a[2]).norm() < 1e-8);
}

#[test]
fn completion_without_interior_root() {
    // b's pushed to the boundary and a's near the center: both quadratic
    // roots leave the disk.
    let b = [c64(0.999, 0.0), c64(-0.4995, 0.865), c64(-0.4995, -0.865)];
    let res = bergman_counterexample_complete(c64(0.01, 0.0), c64(-0.01, 0.005), &b);
    assert!(matches!(res, Err(Error::NoInteriorRoot)), "{res:?}");
}

#[test]
fn search_finds_four_point_example() {
    let rep = bergman_counterexample_search(4, 11, 2000).unwrap();
    assert_eq!(rep.report.a.len(), 4);
    assert!(rep.report.relative_smin <= 1e-8);
    let again = bergman_counterexample_search(4, 11, 2000).unwrap();
    assert_eq!(rep.trials, again.trials);
    assert_eq!(rep.report.a, again.report.a);
}

#[test]
fn shift_invariant_identity_cases() {
    let theta = BlaschkeProduct::new(vec![c64(0.0, 0.0)]).unwrap();
    let a = set(&[(0.3, 0.1), (-0.2, 0.5)]);
    let b = set(&[(0.6, -0.2), (0.1, -0.7)]);
    let chk = shift_invariant_det_identity(&theta, &a, &b).unwrap();
    assert!(chk.relative_error < 1e-10);

    let a0 = set(&[(0.0, 0.0), (-0.2, 0.5)]);
    let chk = shift_invariant_det_identity(&theta, &a0, &b).unwrap();
    assert_eq!(chk.lhs, c64(0.0, 0.0));

    let theta = BlaschkeProduct::new(vec![c64(0.2, 0.3), c64(-0.5, 0.0)]).unwrap();
    let a1 = set(&[(0.1, 0.4)]);
    let b1 = set(&[(-0.3, -0.3)]);
    let chk = shift_invariant_det_identity(&theta, &a1, &b1).unwrap();
    let (a, b) = (c64(0.1, 0.4), c64(-0.3, -0.3));
    let want = theta.eval(a).unwrap() * theta.eval(b).unwrap().conj() / (c64(1.0, 0.0) - a * b.conj());
    assert!((chk.lhs - want).norm() < 1e-15);
}

#[test]
fn shift_invariant_verdict_tracks_theta_zeros() {
    let zero = c64(0.25, -0.1);
    let theta = BlaschkeProduct::new(vec![zero]).unwrap();
    let space = SpaceSpec::ShiftInvariant(theta);
    let a = set(&[(0.3, 0.1), (-0.2, 0.5)]);
    let b = set(&[(0.6, -0.2), (0.1, -0.7)]);
    let v = geodesic_verdict(&space, &a, &b, RankTolerance::Standard).unwrap();
    let h = geodesic_verdict(&SpaceSpec::Hardy, &a, &b, RankTolerance::Standard).unwrap();
    assert_eq!(v.kind, h.kind);
    let a_hit = set(&[(0.25, -0.1), (-0.2, 0.5)]);
    let v = geodesic_verdict(&space, &a_hit, &b, RankTolerance::Standard).unwrap();
    assert_eq!(v.kind, VerdictKind::InfinitelyMany);
}

fn hardy_pair(n: usize, seed: u64) -> (PointSet, PointSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&SpaceSpec::Hardy, 2 * n, 0.02, &[], &mut rng);
    (
        PointSet::new(pts[..n].to_vec()).unwrap(),
        PointSet::new(pts[n..].to_vec()).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hardy_never_infinitely_many(n in 1usize..=8, seed in any::<u64>()) {
        let (a, b) = hardy_pair(n, seed);
        let v = geodesic_verdict(&SpaceSpec::Hardy, &a, &b, RankTolerance::Standard).unwrap();
        prop_assert_ne!(v.kind, VerdictKind::InfinitelyMany);
    }

    #[test]
    fn rank_nullity_identity(na in 1usize..6, nb in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = sample_points(&SpaceSpec::Bergman, na + nb, 0.02, &[], &mut rng);
        let a = PointSet::new(pts[..na].to_vec()).unwrap();
        let b = PointSet::new(pts[na..].to_vec()).unwrap();
        let v = geodesic_verdict(&SpaceSpec::Bergman, &a, &b, RankTolerance::Standard).unwrap();
        prop_assert_eq!(v.dims.0 as i64 - v.dims.1 as i64, na as i64 - nb as i64);
    }

    #[test]
    fn borchardt_random(n in 1usize..=6, seed in any::<u64>()) {
        let (a, b) = disk_vec(n, seed);
        prop_assert!(borchardt_check(&a, &b).unwrap().relative_error < 1e-9);
    }
}

#[test]
fn smallest_singular_value_decides_vanishing() {
    // Huge but nonsingular: |det| alone would mislead.
    let k = CMatrix::from_diagonal_element(3, 3, c64(1e-120, 0.0));
    let v = verdict_from_gram(&k, RankTolerance::Standard).unwrap();
    assert_eq!(v.kind, VerdictKind::Unique);
    assert!(singular_values(&k).unwrap()[2] > 0.0);
}
