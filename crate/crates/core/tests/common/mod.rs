#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rkgeo::hardy::BlaschkeProduct;
use rkgeo::kernels::{sample_points, Weights};
use rkgeo::numerics::c64;
use rkgeo::{PointSet, SpaceSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn all_spaces() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::Hardy,
        SpaceSpec::Bergman,
        SpaceSpec::Bargmann,
        SpaceSpec::WeightedHardy(Weights::power(1.0)),
        SpaceSpec::ShiftInvariant(BlaschkeProduct::new(vec![c64(0.0, 0.95), c64(-0.95, 0.0)]).unwrap()),
        SpaceSpec::DruryArveson(2),
        SpaceSpec::SobolevLine,
    ]
}

/// Disjoint random sets of size `n` in the space's domain.
pub fn random_pair(space: &SpaceSpec, n: usize, min_sep: f64, rng: &mut ChaCha8Rng) -> (PointSet, PointSet) {
    let pts = sample_points(space, 2 * n, min_sep, &[], rng);
    (
        PointSet::new(pts[..n].to_vec()).unwrap(),
        PointSet::new(pts[n..].to_vec()).unwrap(),
    )
}
