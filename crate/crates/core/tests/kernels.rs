mod common;

use common::{all_spaces, rng};
use proptest::prelude::*;
use rkgeo::hardy::BlaschkeProduct;
use rkgeo::kernels::*;
use rkgeo::metrics::MoebiusMap;
use rkgeo::numerics::{c64, hermitian_eig, C64};
use rkgeo::{Error, Point, PointSet, SpaceSpec};

fn pt(re: f64, im: f64) -> Point {
    Point::new(re, im)
}

#[test]
fn kernel_eval_examples() {
    let z = pt(0.3, -0.7);
    let k = kernel_eval(&SpaceSpec::Hardy, &pt(0.0, 0.0), &z).unwrap();
    assert_eq!(k, c64(1.0, 0.0));

    let k = kernel_eval(&SpaceSpec::Bergman, &pt(0.5, 0.0), &pt(0.5, 0.0)).unwrap();
    assert!((k - c64(16.0 / 9.0, 0.0)).norm() < 1e-15);

    let a = c64(0.4, 0.2);
    let theta = BlaschkeProduct::new(vec![a]).unwrap();
    let space = SpaceSpec::ShiftInvariant(theta);
    for z in [pt(0.1, 0.1), pt(-0.5, 0.3), pt(0.0, 0.0)] {
        assert_eq!(kernel_eval(&space, &Point::Scalar(a), &z).unwrap(), c64(0.0, 0.0));
    }
}

#[test]
fn domain_checks() {
    assert!(matches!(
        kernel_eval(&SpaceSpec::Hardy, &pt(1.0, 0.0), &pt(0.0, 0.0)),
        Err(Error::OutOfDomain(_))
    ));
    assert!(matches!(
        kernel_eval(&SpaceSpec::SobolevLine, &pt(1.0, 0.5), &pt(0.0, 0.0)),
        Err(Error::OutOfDomain(_))
    ));
    let ball = SpaceSpec::DruryArveson(2);
    let inside = Point::Vector(vec![c64(0.5, 0.0), c64(0.0, 0.5)]);
    let outside = Point::Vector(vec![c64(0.8, 0.0), c64(0.0, 0.8)]);
    assert!(kernel_eval(&ball, &inside, &inside).is_ok());
    assert!(matches!(kernel_eval(&ball, &outside, &inside), Err(Error::OutOfDomain(_))));
    // Bargmann takes any complex point.
    assert!(kernel_eval(&SpaceSpec::Bargmann, &pt(5.0, -3.0), &pt(0.0, 1.0)).is_ok());
}

#[test]
fn kernel_norm_examples() {
    assert_eq!(kernel_norm(&SpaceSpec::Hardy, &pt(0.0, 0.0)).unwrap(), 1.0);
    let w = c64(0.7, -1.1);
    let n = kernel_norm(&SpaceSpec::Bargmann, &Point::Scalar(w)).unwrap();
    assert!((n - (w.norm_sqr() / 2.0).exp()).abs() < 1e-14 * n);

    let space = SpaceSpec::WeightedHardy(Weights::power(1.0));
    let bound = std::f64::consts::PI.powi(2) / 6.0;
    for r in [0.0, 0.5, 0.9, 0.999] {
        let n = kernel_norm(&space, &pt(r, 0.0)).unwrap();
        assert!(n * n <= bound + 1e-12);
    }

    let theta = BlaschkeProduct::new(vec![c64(0.2, 0.0)]).unwrap();
    assert!(matches!(
        kernel_norm(&SpaceSpec::ShiftInvariant(theta), &pt(0.2, 0.0)),
        Err(Error::ZeroKernel(_))
    ));
}

#[test]
fn weighted_hardy_reproduces_classical_spaces() {
    let z = pt(0.3, 0.4);
    let w = pt(-0.5, 0.2);
    let hardy = SpaceSpec::WeightedHardy(Weights::power(0.0));
    let bergman = SpaceSpec::WeightedHardy(Weights::power(-0.5));
    let bargmann = SpaceSpec::WeightedHardy(Weights::factorial());
    let pairs = [
        (hardy, SpaceSpec::Hardy),
        (bergman, SpaceSpec::Bergman),
        (bargmann, SpaceSpec::Bargmann),
    ];
    for (weighted, closed) in pairs {
        let x = kernel_eval(&weighted, &w, &z).unwrap();
        let y = kernel_eval(&closed, &w, &z).unwrap();
        assert!((x - y).norm() < 1e-14 * y.norm(), "{weighted}: {x} vs {y}");
    }
}

#[test]
fn weighted_hardy_divergence() {
    let mut w = Weights::power(1.0);
    w.radius = 0.5;
    let space = SpaceSpec::WeightedHardy(w);
    assert!(matches!(
        kernel_eval(&space, &pt(0.7, 0.0), &pt(0.1, 0.0)),
        Err(Error::OutOfDomain(_))
    ));
}

#[test]
fn normalized_correlation_examples() {
    for space in all_spaces() {
        let p = sample_point(&space, &mut rng(3));
        let c = normalized_correlation(&space, &p, &p).unwrap();
        assert!((c - 1.0).abs() < 1e-12, "{space}");
    }
    let c = normalized_correlation(&SpaceSpec::Hardy, &pt(0.0, 0.0), &pt(0.6, 0.0)).unwrap();
    assert!((c - 0.8).abs() < 1e-15);

    let (a, b) = (c64(1.3, -0.4), c64(-0.2, 2.1));
    let c = normalized_correlation(&SpaceSpec::Bargmann, &a.into(), &b.into()).unwrap();
    assert!((c - (-(a - b).norm_sqr() / 2.0).exp()).abs() < 1e-14);
}

#[test]
fn boundary_decay_examples() {
    let seq: Vec<Point> = (1..=30).map(|n| Point::real(1.0 - 0.5f64.powi(n))).collect();
    let z = pt(0.0, 0.0);
    let r = boundary_decay_probe(&SpaceSpec::Hardy, &seq, &z).unwrap();
    for (ratio, w) in r.iter().zip(&seq) {
        let w = w.scalar().unwrap().re;
        assert!((ratio - (1.0 - w * w).sqrt()).abs() < 1e-12);
    }
    assert!(r.windows(2).all(|p| p[1] < p[0]));

    let weighted = SpaceSpec::WeightedHardy(Weights::power(1.0));
    let r = boundary_decay_probe(&weighted, &seq[..20], &z).unwrap();
    let floor = 6f64.sqrt() / std::f64::consts::PI;
    assert!(r.iter().all(|&x| x >= floor - 1e-12));

    let seq: Vec<Point> = (0..40).map(|n| Point::real(n as f64)).collect();
    let r = boundary_decay_probe(&SpaceSpec::Bargmann, &seq, &z).unwrap();
    for (n, ratio) in r.iter().enumerate() {
        let want = (-(n as f64).powi(2) / 2.0).exp();
        assert!((ratio - want).abs() <= 1e-14 * want.max(1e-300));
    }
}

#[test]
fn point_and_space_parsing() {
    assert_eq!("0.5,-0.25".parse::<Point>().unwrap(), pt(0.5, -0.25));
    assert_eq!("3".parse::<Point>().unwrap(), pt(3.0, 0.0));
    assert_eq!(
        "[0.1,0.2,0.3,0.4]".parse::<Point>().unwrap(),
        Point::Vector(vec![c64(0.1, 0.2), c64(0.3, 0.4)])
    );
    assert!("1,2,3".parse::<Point>().is_err());
    assert!("nan".parse::<Point>().is_err());

    for s in [
        "hardy",
        "bergman",
        "bargmann",
        "sobolev",
        "drury-arveson:3",
        "weighted-hardy:factorial",
        "weighted-hardy:p=1",
        "shift-invariant:0.5,0;0,-0.25",
    ] {
        let space: SpaceSpec = s.parse().unwrap();
        assert_eq!(space.to_string(), s);
    }
    assert!("drury-arveson:0".parse::<SpaceSpec>().is_err());
    assert!("nowhere".parse::<SpaceSpec>().is_err());
}

#[test]
fn point_sets_reject_duplicates_and_empty() {
    assert!(matches!(PointSet::new(vec![]), Err(Error::EmptySet)));
    assert!(matches!(
        PointSet::new(vec![pt(0.1, 0.0), pt(0.1, 0.0)]),
        Err(Error::DuplicatePoint(_))
    ));
    assert!(matches!(
        PointSet::new(vec![pt(0.0, 0.0), pt(-0.0, 0.0)]),
        Err(Error::DuplicatePoint(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_symmetry(seed in any::<u64>(), idx in 0usize..7) {
        let space = &all_spaces()[idx];
        let mut r = rng(seed);
        let w = sample_point(space, &mut r);
        let z = sample_point(space, &mut r);
        let x = kernel_eval(space, &w, &z).unwrap();
        let y = kernel_eval(space, &z, &w).unwrap().conj();
        prop_assert!((x - y).norm() <= 1e-13 * x.norm().max(1.0));
    }

    #[test]
    fn gram_is_positive_semidefinite(seed in any::<u64>(), idx in 0usize..7, n in 1usize..=8) {
        let space = &all_spaces()[idx];
        let pts = sample_points(space, n, 0.0, &[], &mut rng(seed));
        let g = gram_matrix(space, &pts).unwrap();
        let ev = hermitian_eig(&rkgeo::numerics::hermitian_part(&g)).unwrap().values;
        let top = ev[n - 1];
        prop_assert!(ev[0] >= -1e-10 * top);
    }

    #[test]
    fn bergman_conformal_invariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample_point(&SpaceSpec::Hardy, &mut r).scalar().unwrap();
        let w = C64::from_polar(1.0, sample_point(&SpaceSpec::SobolevLine, &mut r).scalar().unwrap().re);
        let m = MoebiusMap::new(a, w).unwrap();
        let z = sample_point(&SpaceSpec::Hardy, &mut r).scalar().unwrap();
        let v = sample_point(&SpaceSpec::Hardy, &mut r).scalar().unwrap();
        let lhs = kernel_eval(&SpaceSpec::Bergman, &v.into(), &z.into()).unwrap();
        let rhs = kernel_eval(&SpaceSpec::Bergman, &m.eval(v).unwrap().into(), &m.eval(z).unwrap().into()).unwrap()
            * m.derivative(z).unwrap()
            * m.derivative(v).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm());
    }

    #[test]
    fn shift_invariant_factorization(seed in any::<u64>()) {
        let mut r = rng(seed);
        let zeros: Vec<C64> = sample_points(&SpaceSpec::Hardy, 3, 0.01, &[], &mut r)
            .iter().map(|p| p.scalar().unwrap()).collect();
        let theta = BlaschkeProduct::new(zeros).unwrap();
        let space = SpaceSpec::ShiftInvariant(theta.clone());
        let w = sample_point(&SpaceSpec::Hardy, &mut r);
        let z = sample_point(&SpaceSpec::Hardy, &mut r);
        let (ws, zs) = (w.scalar().unwrap(), z.scalar().unwrap());
        let direct = kernel_eval(&space, &w, &z).unwrap();
        let factored = theta.eval(zs).unwrap() * theta.eval(ws).unwrap().conj()
            * kernel_eval(&SpaceSpec::Hardy, &w, &z).unwrap();
        prop_assert!((direct - factored).norm() <= 1e-14 * direct.norm().max(1.0));
    }
}
