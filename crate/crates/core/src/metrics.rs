//! Point metrics induced by the kernel and their link to the projections
//! onto `Z_a`, `Z_b`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{generic_frame, geodesic_exponent};
use crate::kernels::{normalized_correlation, Point, PointSet, SpaceSpec};
use crate::numerics::{c64, op_norm, schatten_norm, singular_values, C64};

/// `Γ(a,b) = arccos(|<k_a,k_b>| / ‖k_a‖‖k_b‖)`.
pub fn gamma(space: &SpaceSpec, a: &Point, b: &Point) -> Result<f64> {
    Ok(normalized_correlation(space, a, b)?.acos())
}

/// Kobayashi's Fubini-Study distance. It coincides with [`gamma`].
pub fn kobayashi(space: &SpaceSpec, a: &Point, b: &Point) -> Result<f64> {
    gamma(space, a, b)
}

/// `δ(a,b) = sqrt(1 - c²)` with `c` the normalized correlation.
pub fn delta(space: &SpaceSpec, a: &Point, b: &Point) -> Result<f64> {
    let c = normalized_correlation(space, a, b)?;
    Ok(((1.0 - c) * (1.0 + c)).max(0.0).sqrt())
}

/// `δ̂(a,b) = sqrt(1 - c)`.
pub fn delta_hat(space: &SpaceSpec, a: &Point, b: &Point) -> Result<f64> {
    let c = normalized_correlation(space, a, b)?;
    Ok((1.0 - c).max(0.0).sqrt())
}

/// Pseudo-hyperbolic distance `|(a - b)/(1 - conj(a) b)|` on the disk.
pub fn rho(a: C64, b: C64) -> Result<f64> {
    if a.norm() >= 1.0 || b.norm() >= 1.0 {
        return Err(Error::OutOfDomain(format!("{a} / {b}")));
    }
    Ok(((a - b) / (c64(1.0, 0.0) - a.conj() * b)).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MetricKind {
    Gamma,
    Delta,
    DeltaHat,
    Rho,
}

impl std::str::FromStr for MetricKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" => Ok(MetricKind::Gamma),
            "delta" => Ok(MetricKind::Delta),
            "deltahat" | "delta-hat" => Ok(MetricKind::DeltaHat),
            "rho" => Ok(MetricKind::Rho),
            other => Err(Error::InvalidArgument(format!("unknown metric {other:?}"))),
        }
    }
}

pub fn metric(kind: MetricKind, space: &SpaceSpec, a: &Point, b: &Point) -> Result<f64> {
    match kind {
        MetricKind::Gamma => gamma(space, a, b),
        MetricKind::Delta => delta(space, a, b),
        MetricKind::DeltaHat => delta_hat(space, a, b),
        MetricKind::Rho => {
            let bad = |p: &Point| Error::OutOfDomain(p.to_string());
            rho(a.scalar().ok_or_else(|| bad(a))?, b.scalar().ok_or_else(|| bad(b))?)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionNormReport {
    pub delta: f64,
    /// `‖P - Q‖`
    pub op_norm: f64,
    /// `(p, ‖P - Q‖_p)` for `p = 1, 2, 4`.
    pub schatten: Vec<(f64, f64)>,
    pub singular_values: Vec<f64>,
    /// Largest of `|‖P-Q‖ - δ|` and `|2^{-1/p}‖P-Q‖_p - δ|`.
    pub max_residual: f64,
}

/// `‖P_{Z_a} - P_{Z_b}‖` and its Schatten norms against `δ(a,b)`.
pub fn projection_norm_check(space: &SpaceSpec, a: &Point, b: &Point) -> Result<ProjectionNormReport> {
    let frame = generic_frame(
        space,
        &PointSet::new(vec![a.clone()])?,
        &PointSet::new(vec![b.clone()])?,
    )?;
    let diff = &frame.p - &frame.q;
    let d = delta(space, a, b)?;
    let op = op_norm(&diff);
    let mut max_residual = (op - d).abs();
    let mut schatten = Vec::new();
    for p in [1.0, 2.0, 4.0] {
        let v = schatten_norm(&diff, p)?;
        max_residual = max_residual.max((v * 2f64.powf(-1.0 / p) - d).abs());
        schatten.push((p, v));
    }
    Ok(ProjectionNormReport {
        delta: d,
        op_norm: op,
        schatten,
        singular_values: singular_values(&diff)?,
        max_residual,
    })
}

/// Disk automorphism `φ(z) = w (a - z)/(1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusMap {
    a: C64,
    w: C64,
}

impl MoebiusMap {
    pub fn new(a: C64, w: C64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::OutOfDomain(format!("{a}")));
        }
        if (w.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidArgument(format!("|w| = {} is not 1", w.norm())));
        }
        Ok(Self { a, w })
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn w(&self) -> C64 {
        self.w
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutOfDomain(format!("{z}")));
        }
        Ok(self.w * (self.a - z) / (c64(1.0, 0.0) - self.a.conj() * z))
    }

    /// `φ'(z) = w (|a|² - 1)/(1 - conj(a) z)²`.
    pub fn derivative(&self, z: C64) -> Result<C64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutOfDomain(format!("{z}")));
        }
        let d = c64(1.0, 0.0) - self.a.conj() * z;
        Ok(self.w * (self.a.norm_sqr() - 1.0) / (d * d))
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        let z = p.scalar().ok_or_else(|| Error::OutOfDomain(p.to_string()))?;
        Ok(Point::Scalar(self.eval(z)?))
    }
}

/// `|Γ(φ(z1), φ(z2)) - Γ(z1, z2)|` for the Hardy or Bergman space.
pub fn moebius_invariance_check(space: &SpaceSpec, m: &MoebiusMap, z1: &Point, z2: &Point) -> Result<f64> {
    if !matches!(space, SpaceSpec::Hardy | SpaceSpec::Bergman) {
        return Err(Error::InvalidArgument(format!(
            "Moebius invariance applies to hardy and bergman, not {space}"
        )));
    }
    let before = gamma(space, z1, z2)?;
    let after = gamma(space, &m.apply(z1)?, &m.apply(z2)?)?;
    Ok((after - before).abs())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaN {
    /// `‖X_AB‖`
    pub value: f64,
    /// `arcsin ‖P - Q‖`
    pub via_projections: f64,
}

/// `Γⁿ(A,B) = ‖X_AB‖ = arcsin ‖P_{Z_A} - P_{Z_B}‖`.
pub fn gamma_n(space: &SpaceSpec, a: &PointSet, b: &PointSet) -> Result<GammaN> {
    let frame = generic_frame(space, a, b)?;
    let x = geodesic_exponent(&frame)?;
    Ok(GammaN {
        value: x.norm(),
        via_projections: op_norm(&(&frame.p - &frame.q)).min(1.0).asin(),
    })
}
