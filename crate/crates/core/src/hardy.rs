//! Hardy space specifics: Blaschke products, the Takenaka-Malmquist-Walsh
//! basis, the triangular compression and Hankel singular values.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::szego_matrix;
use crate::grassmann::{generic_frame, geodesic_exponent, GenericPartFrame, MAX_GRAM_CONDITION};
use crate::kernels::{normalized_correlation, PointSet, SpaceSpec};
use crate::numerics::{identity, max_abs, op_norm, singular_values, CMatrix, C64};

/// Single factor `b_a(z) = (conj(a)/|a|)(a - z)/(1 - conj(a) z)`, with `b_0(z) = z`.
pub fn blaschke_factor(a: C64, z: C64) -> Result<C64> {
    if a == C64::new(0.0, 0.0) {
        return Ok(z);
    }
    let den = C64::new(1.0, 0.0) - a.conj() * z;
    if den.norm() < 1e-14 {
        return Err(Error::PoleOnBoundaryNumerics(format!("{z}")));
    }
    Ok(a.conj() / a.norm() * (a - z) / den)
}

/// Finite Blaschke product with simple zeros, or a truncation of an infinite one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>) -> Result<Self> {
        for (i, a) in zeros.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if a.norm() >= 1.0 {
                return Err(Error::OutOfDomain(format!("{a}")));
            }
            if zeros[..i].contains(a) {
                return Err(Error::DuplicatePoint(format!("{a}")));
            }
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.eval_truncated(z, self.zeros.len())
    }

    /// Product of the first `k` factors.
    pub fn eval_truncated(&self, z: C64, k: usize) -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for &a in self.zeros.iter().take(k) {
            acc *= blaschke_factor(a, z)?;
        }
        Ok(acc)
    }

    /// Partial sums of `1 - |a_k|`.
    pub fn blaschke_sums(&self) -> Vec<f64> {
        self.zeros
            .iter()
            .scan(0.0, |s, a| {
                *s += 1.0 - a.norm();
                Some(*s)
            })
            .collect()
    }
}

fn pseudo_norm_kernel(b: C64, z: C64) -> C64 {
    (C64::new(1.0, 0.0) - b.conj() * z).inv()
}

fn condition(m: &CMatrix) -> Result<f64> {
    let s = singular_values(m)?;
    let last = s.last().copied().unwrap_or(0.0);
    Ok(if last > 0.0 { s[0] / last } else { f64::INFINITY })
}

/// Solves `G x = rhs` for the Szegő matrix `G[m][l] = k_{x_l}(x_m)` of the nodes.
fn interpolate(nodes: &[C64], rhs: &CMatrix) -> Result<CMatrix> {
    let g = szego_matrix(nodes, nodes)?;
    let condition = condition(&g)?;
    if condition > MAX_GRAM_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    g.lu().solve(rhs).ok_or(Error::IllConditioned {
        condition: f64::INFINITY,
    })
}

/// Takenaka-Malmquist-Walsh basis of `span{k_b}`:
/// `ω_i = b_{b_1} ⋯ b_{b_{i-1}} k_{b_i} / ‖k_{b_i}‖`.
#[derive(Debug, Clone, Serialize)]
pub struct TmwBasis {
    pub points: Vec<C64>,
    /// Row `i` expands `ω_i` in `{k_{b_l}}`; lower triangular.
    #[serde(skip)]
    pub coefficients: CMatrix,
    /// `max |<ω_j, ω_i> - δ_ij|`.
    pub orthonormality: f64,
    /// `max |ω_i(b_m)|` over `m < i`.
    pub vanishing: f64,
    /// Condition number of the Szegő matrix of the points. The
    /// orthonormality defect grows roughly like `condition · ε`.
    pub condition: f64,
}

impl TmwBasis {
    /// `ω_i(z)` from the product formula.
    pub fn eval(&self, i: usize, z: C64) -> Result<C64> {
        let b = &self.points;
        let mut acc = pseudo_norm_kernel(b[i], z) * (1.0 - b[i].norm_sqr()).sqrt();
        for &bl in &b[..i] {
            acc *= blaschke_factor(bl, z)?;
        }
        Ok(acc)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `[<ω_j, ω_i>]_{ij}`, using `<ω_j, k_{b_m}> = ω_j(b_m)` so the
    /// coefficients enter once.
    pub fn gram(&self) -> Result<CMatrix> {
        Ok(self.coefficients.map(|z| z.conj()) * self.node_values()?)
    }

    /// `ω_j(b_m)` at row `m`, column `j`.
    pub fn node_values(&self) -> Result<CMatrix> {
        let n = self.len();
        let mut v = CMatrix::zeros(n, n);
        for j in 0..n {
            for (m, &z) in self.points.iter().enumerate() {
                v[(m, j)] = self.eval(j, z)?;
            }
        }
        Ok(v)
    }
}

pub fn tmw_basis(b: &PointSet) -> Result<TmwBasis> {
    b.check(&SpaceSpec::Hardy)?;
    let points = b.scalars()?;
    let n = points.len();
    let mut basis = TmwBasis {
        points: points.clone(),
        coefficients: CMatrix::zeros(n, n),
        orthonormality: 0.0,
        vanishing: 0.0,
        condition: 0.0,
    };
    let values = basis.node_values()?;
    // ω_i lies in span{k_{b_1}, …, k_{b_i}}, so row i solves an i × i system.
    basis.condition = condition(&szego_matrix(&points, &points)?)?;
    if basis.condition > MAX_GRAM_CONDITION {
        return Err(Error::IllConditioned {
            condition: basis.condition,
        });
    }
    for i in 0..n {
        let rhs = values.view((0, i), (i + 1, 1)).into_owned();
        let c = interpolate(&points[..=i], &rhs)?;
        for l in 0..=i {
            basis.coefficients[(i, l)] = c[l];
        }
    }
    basis.orthonormality = max_abs(&(basis.gram()? - identity(n)));
    let at_nodes = szego_matrix(&points, &points)? * basis.coefficients.transpose();
    for i in 0..n {
        for m in 0..i {
            basis.vanishing = basis.vanishing.max(at_nodes[(m, i)].norm());
        }
    }
    Ok(basis)
}

/// `M[i][j] = <B_A ω_j, ω_i>`, the compression of multiplication by `B_A`
/// to `span{k_b}` in the TMW basis. Lower triangular with diagonal `B_A(b_j)`.
pub fn tmw_compression(a: &PointSet, b: &PointSet) -> Result<CMatrix> {
    a.ensure_disjoint(b)?;
    a.check(&SpaceSpec::Hardy)?;
    let ba = BlaschkeProduct::new(a.scalars()?)?;
    let basis = tmw_basis(b)?;
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    // <B_A ω_j, k_{b_m}> = B_A(b_m) ω_j(b_m)
    let mut pairings = CMatrix::zeros(n, n);
    for (row, &bm) in basis.points.iter().enumerate() {
        let weight = ba.eval(bm)?;
        for j in 0..n {
            pairings[(row, j)] = weight * basis.eval(j, bm)?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (0..n)
                .map(|r| basis.coefficients[(i, r)].conj() * pairings[(r, j)])
                .sum();
        }
    }
    Ok(m)
}

/// Largest `|M[i][j]|` above the diagonal.
pub fn upper_residual(m: &CMatrix) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            r = r.max(m[(i, j)].norm());
        }
    }
    r
}

fn hardy_frame(a: &PointSet, b: &PointSet) -> Result<GenericPartFrame> {
    generic_frame(&SpaceSpec::Hardy, a, b)
}

/// Top `n` singular values of `(I - P) Q` on the generic part, the
/// singular values of the Hankel operator with symbol `B_B / B_A`.
pub fn hankel_singular_values(a: &PointSet, b: &PointSet) -> Result<Vec<f64>> {
    let f = hardy_frame(a, b)?;
    frame_hankel_values(&f)
}

fn frame_hankel_values(f: &GenericPartFrame) -> Result<Vec<f64>> {
    let mut s = singular_values(&(f.p_perp() * &f.q))?;
    s.truncate(f.n());
    Ok(s)
}

/// `|s - sqrt(1 - t²)|` matched after sorting, with `s` the singular values
/// of `(I-P)(I-Q)` and `t` those of the TMW compression.
pub fn lemma_411_check(a: &PointSet, b: &PointSet) -> Result<f64> {
    let f = hardy_frame(a, b)?;
    let n = f.n();
    let mut s = singular_values(&(f.p_perp() * f.q_perp()))?;
    s.truncate(n);
    let t = singular_values(&tmw_compression(a, b)?)?;
    // s ↦ sqrt(1 - s²) reverses the order.
    let mapped: Vec<f64> = t.iter().rev().map(|&t| (1.0 - t * t).max(0.0).sqrt()).collect();
    Ok(s
        .iter()
        .zip(&mapped)
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs())))
}

/// `‖M_{B_A} P_{span k_b} M_{B_A}* - P‖` in frame coordinates, where `P`
/// projects onto `H₀ ⊖ span{k_a}`.
///
/// `B_A k_{b_j}` lies in `H₀`; its kernel expansion comes from interpolation
/// at the `2n` nodes, then `P_{span k_b} = K G_bb^{-1} K*`.
pub fn mba_identity_check(a: &PointSet, b: &PointSet) -> Result<f64> {
    let f = hardy_frame(a, b)?;
    let n = f.n();
    let av = a.scalars()?;
    let bv = b.scalars()?;
    let ba = BlaschkeProduct::new(av.clone())?;
    let nodes: Vec<C64> = av.iter().chain(&bv).copied().collect();
    let mut values = CMatrix::zeros(2 * n, n);
    for (m, &x) in nodes.iter().enumerate() {
        let w = ba.eval(x)?;
        for (j, &bj) in bv.iter().enumerate() {
            values[(m, j)] = w * pseudo_norm_kernel(bj, x);
        }
    }
    let d = interpolate(&nodes, &values)?;
    let scaled = CMatrix::from_diagonal(&DVector::from_iterator(
        2 * n,
        f.norms.iter().map(|&x| C64::new(x, 0.0)),
    )) * d;
    let y = &f.coords * scaled;
    let gbb = szego_matrix(&bv, &bv)?;
    let inv = gbb.try_inverse().ok_or(Error::IllConditioned {
        condition: f64::INFINITY,
    })?;
    Ok(op_norm(&(&y * inv * y.adjoint() - &f.p)))
}

/// Largest singular value of the `N × N` Hankel matrix `h[i][j] = a^{i+j}`,
/// the truncation of the Hankel operator with symbol `1/(z - a)`.
pub const HANKEL_PROBE_MAX: usize = 4096;

pub fn hankel_norm_probe(a: C64, truncation: usize) -> Result<f64> {
    if truncation > HANKEL_PROBE_MAX {
        return Err(Error::TooLarge {
            size: truncation,
            max: HANKEL_PROBE_MAX,
        });
    }
    if a.norm() >= 1.0 {
        return Err(Error::OutOfDomain(format!("{a}")));
    }
    if truncation == 0 {
        return Ok(0.0);
    }
    let n = truncation;
    let powers: Vec<C64> = std::iter::successors(Some(C64::new(1.0, 0.0)), |p| Some(p * a))
        .take(2 * n - 1)
        .collect();
    // h is complex symmetric, so h* = conj(h).
    let apply = |x: &[C64], conj: bool| -> Vec<C64> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let h = powers[i + j];
                        if conj { h.conj() * x[j] } else { h * x[j] }
                    })
                    .sum()
            })
            .collect()
    };
    let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut v = vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut sigma = 0.0;
    for _ in 0..500 {
        let hv = apply(&v, false);
        let next = norm(&hv);
        let w = apply(&hv, true);
        let wn = norm(&w);
        let done = (next - sigma).abs() <= 1e-15 * next;
        sigma = next;
        if done || wn == 0.0 {
            break;
        }
        v = w.into_iter().map(|z| z / wn).collect();
    }
    Ok(sigma)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, or `-|lhs - rhs|` for equalities.
    pub slack: f64,
    pub asserted: bool,
    /// Whether the row is within its tolerance.
    pub holds: bool,
}

impl BoundRow {
    fn le(name: String, lhs: f64, rhs: f64, asserted: bool) -> Self {
        let slack = rhs - lhs;
        Self {
            name,
            lhs,
            rhs,
            slack,
            asserted,
            holds: slack >= -BOUND_TOLERANCE,
        }
    }

    fn eq(name: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = -(lhs - rhs).abs();
        Self {
            name,
            lhs,
            rhs,
            slack,
            asserted: true,
            holds: slack >= -tol,
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{:e},{:e},{:e},{}",
            self.name,
            self.lhs,
            self.rhs,
            self.slack,
            if self.asserted { "asserted" } else { "diagnostic" }
        )
    }
}

/// Slack accepted on asserted inequalities.
pub const BOUND_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    /// `‖X‖` and the smallest exponent eigenvalue.
    pub norm: f64,
    pub gamma: f64,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "bound_name,lhs,rhs,slack,status";

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        for r in &self.rows {
            out.push('\n');
            out.push_str(&r.csv());
        }
        out.push('\n');
        out
    }

    /// Asserted rows outside tolerance.
    pub fn failures(&self) -> Vec<&BoundRow> {
        self.rows.iter().filter(|r| r.asserted && !r.holds).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BoundOptions {
    /// Truncation for the numerically computed `N_a`.
    pub probe_truncation: usize,
    /// Tolerance of the product equality at `m = n`.
    pub equality_tolerance: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            probe_truncation: 1024,
            equality_tolerance: 1e-8,
        }
    }
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Every bound on the exponent spectrum for a Hardy pair, in a fixed order.
pub fn bound_suite(a: &PointSet, b: &PointSet, opts: BoundOptions) -> Result<BoundReport> {
    let f = hardy_frame(a, b)?;
    let x = geodesic_exponent(&f)?;
    let n = f.n();
    let av = a.scalars()?;
    let bv = b.scalars()?;
    let ba = BlaschkeProduct::new(av.clone())?;
    let bb = BlaschkeProduct::new(bv.clone())?;
    let ba_at_b = bv.iter().map(|&z| ba.eval(z)).collect::<Result<Vec<_>>>()?;
    let bb_at_a = av.iter().map(|&z| bb.eval(z)).collect::<Result<Vec<_>>>()?;
    let norm = x.norm();
    let gamma = x.lambdas[n - 1];
    let pq = &f.p * &f.q;
    let cosine = op_norm(&pq);
    let mut s = singular_values(&pq)?;
    s.truncate(n);

    let mut rows = Vec::new();
    // Correlations against the Dixmier cosine and the smallest eigenvalue.
    for (i, ai) in a.points().iter().enumerate() {
        for (j, bj) in b.points().iter().enumerate() {
            let c = normalized_correlation(&SpaceSpec::Hardy, ai, bj)?;
            rows.push(BoundRow::le(format!("dixmier_cosine[a{i},b{j}]"), c, cosine, true));
            rows.push(BoundRow::le(format!("smallest_angle[a{i},b{j}]"), gamma, c.acos(), true));
        }
    }
    rows.push(BoundRow::le("dixmier_cosine_below_one".into(), cosine, 1.0, true));

    // Witness f = (1 - |b_j0|²)^{1/2} k_{b_j0} B_A in the zero set of A.
    for (j0, &w) in bv.iter().enumerate() {
        let scale = (1.0 - w.norm_sqr()).sqrt();
        for (j, &z) in bv.iter().enumerate() {
            let value = scale * pseudo_norm_kernel(w, z) * ba.eval(z)?;
            let ratio = value.norm() * (1.0 - z.norm_sqr()).sqrt();
            rows.push(BoundRow::le(
                format!("witness_lower[f{j0},b{j}]"),
                ratio.min(1.0).asin(),
                norm,
                true,
            ));
        }
    }
    for (j, v) in ba_at_b.iter().enumerate() {
        rows.push(BoundRow::le(format!("blaschke_lower[b{j}]"), v.norm().asin(), norm, true));
    }

    // The smallest angle against |B_B(a_j)| (1 - |a_j|²) N_{a_j}, with
    // N_a = 1 and with N_a from the truncated Hankel probe.
    let probes = av
        .par_iter()
        .map(|&z| hankel_norm_probe(z, opts.probe_truncation))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = av
        .iter()
        .zip(&bb_at_a)
        .map(|(z, v)| v.norm() * (1.0 - z.norm_sqr()))
        .collect();
    let min_asin = |scale: &dyn Fn(usize) -> f64| {
        (0..n)
            .map(|j| (weights[j] * scale(j)).min(1.0).asin())
            .fold(f64::INFINITY, f64::min)
    };
    rows.push(BoundRow::le("smallest_angle_hankel[N=1]".into(), gamma, min_asin(&|_| 1.0), false));
    rows.push(BoundRow::le(
        "smallest_angle_hankel[N=probe]".into(),
        gamma,
        min_asin(&|j| probes[j]),
        false,
    ));
    for j in 0..n {
        let unit = (1.0 - weights[j].powi(2)).max(0.0).sqrt();
        let probed = (1.0 - (weights[j] * probes[j]).min(1.0).powi(2)).sqrt();
        rows.push(BoundRow::le(format!("zero_set_cosine[a{j},N=1]"), unit, cosine, false));
        rows.push(BoundRow::le(format!("zero_set_cosine[a{j},N=probe]"), probed, cosine, false));
    }

    // Weyl chains: |B_A(b_j)| sorted down against sqrt(1 - s²_{n-j}).
    let moduli = sorted_desc(ba_at_b.iter().map(|v| v.norm()).collect());
    let comp: Vec<f64> = (1..=n).map(|j| (1.0 - s[n - j].powi(2)).max(0.0).sqrt()).collect();
    let (mut pl, mut pr, mut sl, mut sr) = (1.0, 1.0, 0.0, 0.0);
    for m in 1..=n {
        pl *= moduli[m - 1];
        pr *= comp[m - 1];
        sl += moduli[m - 1];
        sr += comp[m - 1];
        rows.push(BoundRow::le(format!("weyl_product[m={m}]"), pl, pr, true));
        rows.push(BoundRow::le(format!("weyl_sum[m={m}]"), sl, sr, true));
    }
    rows.push(BoundRow::eq("weyl_product_equality".into(), pl, pr, opts.equality_tolerance));

    rows.push(BoundRow::le(
        "smallest_singular_value".into(),
        s[n - 1],
        (1.0 - moduli[0].powi(2)).max(0.0).sqrt(),
        true,
    ));
    let top = ba_at_b
        .iter()
        .chain(&bb_at_a)
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    rows.push(BoundRow::le("norm_lower".into(), top.min(1.0).asin(), norm, true));

    Ok(BoundReport { rows, norm, gamma })
}
