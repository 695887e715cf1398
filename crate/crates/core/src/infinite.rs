//! Truncation-based probes for infinite zero sequences in the Hardy space.
//!
//! Nothing here decides an infinite-dimensional statement. Every output is
//! a finite truncation or a grid estimate and is labeled as such.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{blaschke_factor, BlaschkeProduct};
use crate::kernels::PointSet;
use crate::metrics::rho;
use crate::numerics::{c64, C64};

/// Closed-form or explicit rule for `{a_k : k ≥ 1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SequenceRule {
    /// `a_k = 1 - ratio^k`.
    Geometric { ratio: f64 },
    /// `a_k = 1 - 1/(k + shift)`.
    HarmonicShifted { shift: f64 },
    List(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceSpec {
    pub rule: SequenceRule,
    pub truncation: usize,
}

impl SequenceSpec {
    pub fn geometric(truncation: usize) -> Self {
        Self {
            rule: SequenceRule::Geometric { ratio: 0.5 },
            truncation,
        }
    }

    pub fn harmonic_shifted(shift: f64, truncation: usize) -> Self {
        Self {
            rule: SequenceRule::HarmonicShifted { shift },
            truncation,
        }
    }

    pub fn list(points: Vec<C64>) -> Self {
        let truncation = points.len();
        Self {
            rule: SequenceRule::List(points),
            truncation,
        }
    }

    /// The first `truncation` terms, validated.
    pub fn points(&self) -> Result<Vec<C64>> {
        let k = self.truncation;
        let pts: Vec<C64> = match &self.rule {
            SequenceRule::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::InvalidArgument(format!("ratio {ratio} not in (0, 1)")));
                }
                (1..=k).map(|j| c64(1.0 - ratio.powi(j as i32), 0.0)).collect()
            }
            SequenceRule::HarmonicShifted { shift } => {
                if !(*shift > 0.0) {
                    return Err(Error::InvalidArgument(format!("shift {shift} must be positive")));
                }
                (1..=k).map(|j| c64(1.0 - 1.0 / (j as f64 + shift), 0.0)).collect()
            }
            SequenceRule::List(v) => {
                if k > v.len() {
                    return Err(Error::InvalidArgument(format!(
                        "truncation {k} exceeds the {} listed points",
                        v.len()
                    )));
                }
                v[..k].to_vec()
            }
        };
        BlaschkeProduct::new(pts.clone())?;
        Ok(pts)
    }
}

/// Partial sums `Σ_{k≤K} (1 - |a_k|)`.
pub fn blaschke_condition(seq: &SequenceSpec) -> Result<Vec<f64>> {
    Ok(BlaschkeProduct::new(seq.points()?)?.blaschke_sums())
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    /// Points in the starting grid, split between the uniform and the
    /// concentrated half.
    pub initial: usize,
    /// Give up once a grid exceeds this many points.
    pub max_points: usize,
    /// Relative agreement required between successive doublings.
    pub agreement: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            initial: 4096,
            max_points: 1 << 18,
            agreement: 0.01,
        }
    }
}

/// Uniform points on the circle together with the image of a uniform grid
/// under the disk automorphism fixing `a/|a|` that pushes points toward it.
/// The second half resolves features of width `1 - |a|` near `a/|a|`.
fn boundary_grid(a: C64, n: usize) -> Vec<C64> {
    let r = a.norm();
    let dir = if r > 0.0 { a / r } else { c64(1.0, 0.0) };
    let mut pts = Vec::with_capacity(2 * n);
    for j in 0..n {
        let w = C64::from_polar(1.0, TAU * j as f64 / n as f64);
        pts.push(w);
        pts.push(dir * (w + r) / (1.0 + r * w));
    }
    pts
}

fn grid_sup<F>(a: C64, opts: GridOptions, f: F) -> Result<(f64, usize)>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    let sup = |n: usize| -> Result<f64> {
        boundary_grid(a, n)
            .par_iter()
            .map(|&z| f(z))
            .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
    };
    // `boundary_grid(a, n)` has `2n` points.
    let mut n = opts.initial.max(8) / 2;
    let mut prev = sup(n)?;
    loop {
        if 4 * n > opts.max_points {
            return Err(Error::GridTooCoarse { points: 2 * n });
        }
        n *= 2;
        let next = sup(n)?;
        if (next - prev).abs() <= opts.agreement * next.abs().max(f64::MIN_POSITIVE) {
            return Ok((next, 2 * n));
        }
        prev = next;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GsRow {
    pub k: usize,
    pub a: C64,
    pub b: C64,
    pub eps: f64,
    /// Grid estimate of `sup_T |b_k - a_k|` for the normalized factors.
    pub est: f64,
    pub target: f64,
    pub grid_points: usize,
    /// `|F1 - 1|`, the unimodular constants.
    pub f1: f64,
    /// Grid estimate of `sup |F2 - 1|` and its bound `δ(a_k, T)`.
    pub f2: f64,
    pub f2_bound: f64,
    /// Grid estimate of `sup |F3 - 1|` and its bound `δ/(1 - δ)`.
    pub f3: f64,
    pub f3_bound: f64,
    /// Grid estimate of `sup |b_k/a_k - 1|`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GsPair {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub rows: Vec<GsRow>,
    /// For each `n`, the largest `|Π b_j - Π a_j| - Σ |b_j - a_j|` over
    /// the boundary samples (`j ≤ n`); nonpositive up to rounding.
    pub telescope: Vec<f64>,
}

fn normalized_factor(a: C64, z: C64) -> Result<C64> {
    blaschke_factor(a, z)
}

/// Pairs each `a_k` with `b_k = a_k + ε_k`, `ε_k > 0`, below
/// `min{dist(a_k, A ∖ a_k), (1 - |a_k|)², ε_{k-1}}`, halving `ε_k` until the
/// grid estimate of `‖b_k - a_k‖_∞` is at most `2^{-k}`.
pub fn guillory_sarason_pair(seq: &SequenceSpec, opts: GridOptions) -> Result<GsPair> {
    let a = seq.points()?;
    if let Some(z) = a.iter().find(|z| z.norm() == 0.0) {
        return Err(Error::InvalidArgument(format!("sequence contains {z}")));
    }
    let mut b = Vec::with_capacity(a.len());
    let mut rows = Vec::with_capacity(a.len());
    let mut prev_eps = f64::INFINITY;
    for (idx, &ak) in a.iter().enumerate() {
        let k = idx + 1;
        let dist_t = 1.0 - ak.norm();
        let dist_a = a
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, &aj)| (aj - ak).norm())
            .fold(f64::INFINITY, f64::min);
        let bound = dist_a.min(dist_t * dist_t).min(prev_eps);
        let target = 0.5f64.powi(k as i32);
        let mut eps = 0.5 * bound;
        let (bk, eps, est, points) = loop {
            let bk = ak + eps;
            // The perturbation that actually survives rounding.
            let eff = (bk - ak).re;
            if !(eff > 0.0) || bk == ak {
                return Err(Error::PrecisionExhausted(format!("a_{k} = {ak}")));
            }
            if eff >= bound || bk.norm() >= 1.0 || bk.norm() == 0.0 {
                eps *= 0.5;
                continue;
            }
            let (est, points) = grid_sup(ak, opts, |z| {
                Ok((normalized_factor(bk, z)? - normalized_factor(ak, z)?).norm())
            })?;
            if est <= target {
                break (bk, eff, est, points);
            }
            eps *= 0.5;
        };
        let half = points / 2;
        let grid = boundary_grid(ak, half);
        let f1 = (bk.conj() / bk.norm() * ak.norm() / ak.conj() - 1.0).norm();
        let one = c64(1.0, 0.0);
        let mut f2: f64 = 0.0;
        let mut f3: f64 = 0.0;
        let mut ratio: f64 = 0.0;
        for &z in &grid {
            f2 = f2.max(((bk - z) / (ak - z) - one).norm());
            f3 = f3.max(((one - ak.conj() * z) / (one - bk.conj() * z) - one).norm());
            ratio = ratio.max((normalized_factor(bk, z)? / normalized_factor(ak, z)? - one).norm());
        }
        rows.push(GsRow {
            k,
            a: ak,
            b: bk,
            eps,
            est,
            target,
            grid_points: points,
            f1,
            f2,
            f2_bound: dist_t,
            f3,
            f3_bound: dist_t / (1.0 - dist_t),
            ratio,
        });
        b.push(bk);
        prev_eps = eps;
    }
    let telescope = telescope_check(&a, &b, 4096)?;
    Ok(GsPair { a, b, rows, telescope })
}

/// `max_ζ (|Π_{j≤n} y_j(ζ) - Π_{j≤n} x_j(ζ)| - Σ_{j≤n} |y_j(ζ) - x_j(ζ)|)`
/// for every `n`, with `x`, `y` the normalized factors of `a`, `b`.
pub fn telescope_check(a: &[C64], b: &[C64], samples: usize) -> Result<Vec<f64>> {
    let mut grid: Vec<C64> = (0..samples)
        .map(|j| C64::from_polar(1.0, TAU * j as f64 / samples as f64))
        .collect();
    for &ak in a {
        grid.extend(boundary_grid(ak, 64));
    }
    let per_point = grid
        .par_iter()
        .map(|&z| {
            let mut px = c64(1.0, 0.0);
            let mut py = c64(1.0, 0.0);
            let mut sum = 0.0;
            let mut out = Vec::with_capacity(a.len());
            for (&ak, &bk) in a.iter().zip(b) {
                let x = normalized_factor(ak, z)?;
                let y = normalized_factor(bk, z)?;
                px *= x;
                py *= y;
                sum += (y - x).norm();
                out.push((py - px).norm() - sum);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..a.len())
        .map(|n| per_point.iter().map(|v| v[n]).fold(f64::NEG_INFINITY, f64::max))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub radii: Vec<f64>,
    pub windings: Vec<i64>,
    /// Largest distance of `Σ Δarg / 2π` from the nearest integer.
    pub roundoff: f64,
    /// Samples used per radius after refinement.
    pub samples: Vec<usize>,
    /// The common winding of the outermost radii, or `None` if the last
    /// two disagree.
    pub index: Option<i64>,
}

const MAX_BISECTIONS: u32 = 48;

fn ratio_at(num: &BlaschkeProduct, den: &BlaschkeProduct, z: C64) -> Result<C64> {
    let h = num.eval(z)? / den.eval(z)?;
    let m = h.norm();
    if !(m >= 1e-12 && m <= 1e12) {
        return Err(Error::ZeroOnContour(m));
    }
    Ok(h)
}

/// Argument increment of `h` over `[t0, t1]`, bisecting until every step
/// turns by less than `π/4`.
fn increment(
    h: &dyn Fn(f64) -> Result<C64>,
    t0: f64,
    h0: C64,
    t1: f64,
    h1: C64,
    depth: u32,
    samples: &mut usize,
) -> Result<f64> {
    let d = (h1 / h0).arg();
    if d.abs() < PI / 4.0 {
        return Ok(d);
    }
    if depth >= MAX_BISECTIONS {
        return Err(Error::GridTooCoarse { points: *samples });
    }
    let tm = 0.5 * (t0 + t1);
    let hm = h(tm)?;
    *samples += 1;
    Ok(increment(h, t0, h0, tm, hm, depth + 1, samples)? + increment(h, tm, hm, t1, h1, depth + 1, samples)?)
}

/// Winding number of `B_B/B_A` along `|z| = r` for each radius.
pub fn winding_index(a: &PointSet, b: &PointSet, radii: &[f64], initial_samples: usize) -> Result<IndexReport> {
    let den = BlaschkeProduct::new(a.scalars()?)?;
    let num = BlaschkeProduct::new(b.scalars()?)?;
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("radius {r} not in (0, 1)")));
        }
    }
    let n0 = initial_samples.max(4);
    let per_radius = radii
        .par_iter()
        .map(|&r| {
            let h = |t: f64| ratio_at(&num, &den, C64::from_polar(r, t));
            let mut samples = n0;
            let mut total = 0.0;
            let mut prev = h(0.0)?;
            for j in 1..=n0 {
                let t0 = TAU * (j - 1) as f64 / n0 as f64;
                let t1 = TAU * j as f64 / n0 as f64;
                let next = if j == n0 { h(0.0)? } else { h(t1)? };
                total += increment(&h, t0, prev, t1, next, 0, &mut samples)?;
                prev = next;
            }
            Ok((total / TAU, samples))
        })
        .collect::<Result<Vec<_>>>()?;
    let windings: Vec<i64> = per_radius.iter().map(|(w, _)| w.round() as i64).collect();
    let roundoff = per_radius
        .iter()
        .map(|(w, _)| (w - w.round()).abs())
        .fold(0.0, f64::max);
    let index = match windings.as_slice() {
        [] => None,
        [w] => Some(*w),
        [.., x, y] => (x == y).then_some(*y),
    };
    Ok(IndexReport {
        radii: radii.to_vec(),
        windings,
        roundoff,
        samples: per_radius.iter().map(|&(_, s)| s).collect(),
        index,
    })
}

/// `ψ_a(z) = exp(a (z + 1)/(z - 1))`.
pub fn singular_inner(a: f64, z: C64) -> C64 {
    (a * (z + 1.0) / (z - 1.0)).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct KoosisZero {
    pub k: i64,
    pub z: C64,
    /// `|ψ_a(z_k) - γ|`
    pub residual: f64,
}

/// Solutions of `ψ_a(z) = γ` in the disk:
/// `z_k = (α + 2kπ - i(a + ln|γ|)) / (α + 2kπ + i(a - ln|γ|))`, `α = arg γ`.
pub fn koosis_zeros(a: f64, gamma: C64, ks: std::ops::RangeInclusive<i64>) -> Result<Vec<KoosisZero>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("a = {a} must be positive")));
    }
    let m = gamma.norm();
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidArgument(format!("|gamma| = {m} not in (0, 1)")));
    }
    let alpha = gamma.arg();
    let nearest = (alpha / PI).round() * PI;
    if (alpha - nearest).abs() < 1e-12 {
        return Err(Error::AlphaDegenerate(alpha));
    }
    let lg = m.ln();
    Ok(ks
        .map(|k| {
            let u = alpha + TAU * k as f64;
            let z = c64(u, -(a + lg)) / c64(u, a - lg);
            KoosisZero {
                k,
                z,
                residual: (singular_inner(a, z) - gamma).norm(),
            }
        })
        .collect())
}

pub const COMPACTNESS_MAX: usize = 500;

#[derive(Debug, Clone, Serialize)]
pub struct CompactnessReport {
    /// `|B_A(b_j)|`
    pub values: Vec<f64>,
    /// `(p, partial sums of |B_A(b_j)|^p)`
    pub lp_partial_sums: Vec<(f64, Vec<f64>)>,
    /// `Π_{k≠j} ρ(b_j, b_k)` per `j`.
    pub separation: Vec<f64>,
    /// Their minimum, the truncated Carleson constant.
    pub carleson: f64,
}

pub fn compactness_diagnostics(a: &PointSet, b: &PointSet, ps: &[f64]) -> Result<CompactnessReport> {
    for s in [a, b] {
        if s.len() > COMPACTNESS_MAX {
            return Err(Error::TooLarge {
                size: s.len(),
                max: COMPACTNESS_MAX,
            });
        }
    }
    a.ensure_disjoint(b)?;
    let ba = BlaschkeProduct::new(a.scalars()?)?;
    let bv = b.scalars()?;
    let values = bv
        .iter()
        .map(|&z| Ok(ba.eval(z)?.norm()))
        .collect::<Result<Vec<_>>>()?;
    let lp_partial_sums = ps
        .iter()
        .map(|&p| {
            let sums = values
                .iter()
                .scan(0.0, |s, v| {
                    *s += v.powf(p);
                    Some(*s)
                })
                .collect();
            (p, sums)
        })
        .collect();
    let separation = (0..bv.len())
        .into_par_iter()
        .map(|j| {
            (0..bv.len())
                .filter(|&k| k != j)
                .map(|k| rho(bv[j], bv[k]))
                .product::<Result<f64>>()
        })
        .collect::<Result<Vec<f64>>>()?;
    let carleson = separation.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CompactnessReport {
        values,
        lp_partial_sums,
        separation,
        carleson,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RapidPairingRow {
    pub b_abs: f64,
    /// `ln(1 - |b|)`
    pub log_gap: f64,
    /// `ln` of the first factor modulus `|b|(1 - f)/(1 - |b|² f)`.
    pub log_factor: f64,
    /// `log_factor - p·log_gap` for `p = 1, …, 4`.
    pub log_ratios: [f64; 4],
}

/// `f(t) = 1 - exp(-1/(t - 1)²)` and the first factor of `B_B(a_n)` for
/// `a_n = f(|b_n|) b_n`, in log form since `1 - f` underflows already near
/// `|b| ≈ 0.97`.
pub fn rapid_pairing_factors(b: &[C64]) -> Result<Vec<RapidPairingRow>> {
    b.iter()
        .map(|&z| {
            let t = z.norm();
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::OutOfDomain(format!("{z}")));
            }
            let e = -1.0 / ((t - 1.0) * (t - 1.0));
            // 1 - t² f = (1 - t²) + t² (1 - f)
            let den = (1.0 - t) * (1.0 + t) + t * t * e.exp();
            let log_factor = t.ln() + e - den.ln();
            let log_gap = (1.0 - t).ln();
            let mut log_ratios = [0.0; 4];
            for (p, r) in log_ratios.iter_mut().enumerate() {
                *r = log_factor - (p + 1) as f64 * log_gap;
            }
            Ok(RapidPairingRow {
                b_abs: t,
                log_gap,
                log_factor,
                log_ratios,
            })
        })
        .collect()
}

/// `a_n = f(|b_n|) b_n`; fails once `a_n` rounds onto `b_n`.
pub fn rapid_pairing_points(b: &[C64]) -> Result<Vec<C64>> {
    b.iter()
        .map(|&z| {
            let t = z.norm();
            let a = z * (1.0 - (-1.0 / ((t - 1.0) * (t - 1.0))).exp());
            if a == z {
                return Err(Error::PrecisionExhausted(format!("{z}")));
            }
            Ok(a)
        })
        .collect()
}
