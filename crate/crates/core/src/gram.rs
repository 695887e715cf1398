//! Cross-Gram matrices, the existence/uniqueness criterion for geodesics
//! and the determinant identities behind it.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::BlaschkeProduct;
use crate::kernels::{kernel_eval, PointSet, SpaceSpec};
use crate::numerics::{
    c64, determinant, numerical_rank, permanent, polynomial_roots, singular_values, CMatrix,
    RankTolerance, C64,
};

/// `K[i][j] = k_{b_i}(a_j)`: rows follow `B`, columns follow `A`.
#[derive(Debug, Clone)]
pub struct CrossGram {
    pub space: SpaceSpec,
    pub a: PointSet,
    pub b: PointSet,
    pub k: CMatrix,
}

pub fn cross_gram(space: &SpaceSpec, a: &PointSet, b: &PointSet) -> Result<CrossGram> {
    a.ensure_disjoint(b)?;
    a.check(space)?;
    b.check(space)?;
    let mut k = CMatrix::zeros(b.len(), a.len());
    for (i, bi) in b.points().iter().enumerate() {
        for (j, aj) in a.points().iter().enumerate() {
            k[(i, j)] = kernel_eval(space, bi, aj)?;
        }
    }
    Ok(CrossGram {
        space: space.clone(),
        a: a.clone(),
        b: b.clone(),
        k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    None,
    Unique,
    InfinitelyMany,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicVerdict {
    pub kind: VerdictKind,
    /// `(dim Z_A ∩ Z_B^⊥, dim Z_A^⊥ ∩ Z_B) = (nullity K, nullity K*)`.
    pub dims: (usize, usize),
    /// Determinant of `K`; absent when `K` is not square.
    pub det: Option<C64>,
    /// 2-norm condition number of `K` (infinite when rank deficient).
    pub condition: f64,
    pub singular_values: Vec<f64>,
}

/// Nullities of `K` and `K*` at the given rank tolerance.
pub fn nullities(k: &CMatrix, tol: RankTolerance) -> Result<((usize, usize), Vec<f64>)> {
    let s = singular_values(k)?;
    let r = numerical_rank(&s, k.nrows(), k.ncols(), tol);
    Ok(((k.ncols() - r, k.nrows() - r), s))
}

pub fn geodesic_verdict(
    space: &SpaceSpec,
    a: &PointSet,
    b: &PointSet,
    tol: RankTolerance,
) -> Result<GeodesicVerdict> {
    let g = cross_gram(space, a, b)?;
    verdict_from_gram(&g.k, tol)
}

pub fn verdict_from_gram(k: &CMatrix, tol: RankTolerance) -> Result<GeodesicVerdict> {
    let (dims, s) = nullities(k, tol)?;
    let square = k.nrows() == k.ncols();
    let kind = if !square {
        VerdictKind::None
    } else if dims == (0, 0) {
        VerdictKind::Unique
    } else {
        VerdictKind::InfinitelyMany
    };
    let s_max = s.first().copied().unwrap_or(0.0);
    let s_min = s.last().copied().unwrap_or(0.0);
    let condition = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
    Ok(GeodesicVerdict {
        kind,
        dims,
        det: if square { Some(determinant(k)?) } else { None },
        condition,
        singular_values: s,
    })
}

/// Standard Cauchy determinant `det[1/(x_i - y_j)]`.
fn cauchy_product(x: &[C64], y: &[C64]) -> Result<C64> {
    let n = x.len();
    let mut num = c64(1.0, 0.0);
    let mut den = c64(1.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let d = x[i] - y[j];
            if d == c64(0.0, 0.0) {
                return Err(Error::ZeroDenominator);
            }
            den *= d;
        }
        for j in (i + 1)..n {
            num *= (x[j] - x[i]) * (y[i] - y[j]);
        }
    }
    Ok(num / den)
}

/// Closed form of `det[1/(1 - a_i conj(b_j))]`.
///
/// With all `a_i != 0` the matrix is `diag(1/a_i)` times the Cauchy matrix
/// on nodes `1/a_i`, `conj(b_j)`. Otherwise every `b_j != 0` is required and
/// the roles are swapped.
pub fn cauchy_determinant(a: &[C64], b: &[C64]) -> Result<C64> {
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let zero = c64(0.0, 0.0);
    if a.iter().all(|&x| x != zero) {
        let x: Vec<C64> = a.iter().map(|ai| ai.inv()).collect();
        let y: Vec<C64> = b.iter().map(|bj| bj.conj()).collect();
        let scale: C64 = x.iter().product();
        return Ok(scale * cauchy_product(&x, &y)?);
    }
    if b.iter().any(|&y| y == zero) {
        return Err(Error::ZeroDenominator);
    }
    // 1/(1 - a_i conj(b_j)) = -(1/conj(b_j)) / (a_i - 1/conj(b_j))
    let u: Vec<C64> = b.iter().map(|bj| bj.conj().inv()).collect();
    let scale: C64 = u.iter().map(|&uj| -uj).product();
    Ok(scale * cauchy_product(a, &u)?)
}

/// `C[i][j] = 1/(1 - a_i conj(b_j))`.
pub fn szego_matrix(a: &[C64], b: &[C64]) -> Result<CMatrix> {
    let mut c = CMatrix::zeros(a.len(), b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let d = c64(1.0, 0.0) - ai * bj.conj();
            if d == c64(0.0, 0.0) {
                return Err(Error::ZeroDenominator);
            }
            c[(i, j)] = d.inv();
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentityCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub relative_error: f64,
}

fn identity_check(lhs: C64, rhs: C64) -> IdentityCheck {
    let scale = lhs.norm().max(rhs.norm());
    let relative_error = if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    };
    IdentityCheck {
        lhs,
        rhs,
        relative_error,
    }
}

pub const BORCHARDT_MAX: usize = 12;

/// `det(C∘C)` against `det(C)·per(C)` for the Szegő matrix `C`.
pub fn borchardt_check(a: &[C64], b: &[C64]) -> Result<IdentityCheck> {
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() > BORCHARDT_MAX {
        return Err(Error::TooLarge {
            size: a.len(),
            max: BORCHARDT_MAX,
        });
    }
    let c = szego_matrix(a, b)?;
    let sq = c.map(|z| z * z);
    let lhs = determinant(&sq)?;
    let rhs = determinant(&c)? * permanent(&c)?;
    Ok(identity_check(lhs, rhs))
}

/// Sufficient condition for a nonzero Bergman cross-Gram determinant.
pub const BERGMAN_DELTA: f64 = 0.195;

#[derive(Debug, Clone, Serialize)]
pub struct SafeRegionReport {
    pub guaranteed_nonzero: bool,
    pub max_product: f64,
    pub threshold: f64,
    /// Present when the guarantee applies: full numerical rank of `K`.
    pub numeric_full_rank: Option<bool>,
    /// Present when the guarantee applies: `|per(C)|`.
    pub permanent_abs: Option<f64>,
}

pub fn bergman_safe_region(a: &PointSet, b: &PointSet) -> Result<SafeRegionReport> {
    a.ensure_disjoint(b)?;
    let (av, bv) = (a.scalars()?, b.scalars()?);
    let max_product = av
        .iter()
        .flat_map(|x| bv.iter().map(move |y| (x * y).norm()))
        .fold(0.0, f64::max);
    let threshold = BERGMAN_DELTA / (1.0 + BERGMAN_DELTA);
    let guaranteed_nonzero = max_product < threshold;
    let (mut numeric_full_rank, mut permanent_abs) = (None, None);
    if guaranteed_nonzero && av.len() == bv.len() {
        let v = geodesic_verdict(&SpaceSpec::Bergman, a, b, RankTolerance::Standard)?;
        numeric_full_rank = Some(v.kind == VerdictKind::Unique);
        if av.len() <= BORCHARDT_MAX {
            permanent_abs = Some(permanent(&szego_matrix(&av, &bv)?)?.norm());
        }
    }
    Ok(SafeRegionReport {
        guaranteed_nonzero,
        max_product,
        threshold,
        numeric_full_rank,
        permanent_abs,
    })
}

/// Complex rationals for the exact re-verification mode.
pub type GaussRat = Complex<BigRational>;

pub fn gauss_rat(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRat {
    Complex::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

/// Exact rational value of a double.
pub fn gauss_rat_from_c64(z: C64) -> Result<GaussRat> {
    let conv = |x: f64| BigRational::from_float(x).ok_or(Error::NonFinite);
    Ok(Complex::new(conv(z.re)?, conv(z.im)?))
}

pub fn gauss_rat_to_c64(z: &GaussRat) -> C64 {
    c64(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn gpoly_mul<T: Clone + Num>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `sum_j c_j prod_{l != j} (1 - z conj(b_l))^2`, ascending coefficients.
/// Its zeros are those of `sum_j c_j / (1 - z conj(b_j))^2`.
fn bergman_numerator<T: Clone + Num>(bbar: &[T], c: &[T]) -> Vec<T> {
    let n = bbar.len();
    let mut total = vec![T::zero(); 2 * n.saturating_sub(1) + 1];
    for j in 0..n {
        let mut prod = vec![c[j].clone()];
        for (l, bl) in bbar.iter().enumerate() {
            if l != j {
                let lin = vec![T::one(), T::zero() - bl.clone()];
                prod = gpoly_mul(&prod, &gpoly_mul(&lin, &lin));
            }
        }
        for (k, v) in prod.into_iter().enumerate() {
            total[k] = total[k].clone() + v;
        }
    }
    total
}

/// Divides by `(z - r)`; returns quotient and remainder.
fn gpoly_deflate<T: Clone + Num>(p: &[T], r: &T) -> (Vec<T>, T) {
    let d = p.len() - 1;
    let mut q = vec![T::zero(); d];
    let mut carry = T::zero();
    for k in (0..=d).rev() {
        let val = p[k].clone() + carry * r.clone();
        if k == 0 {
            return (q, val);
        }
        q[k - 1] = val.clone();
        carry = val;
    }
    unreachable!()
}

fn bergman_entry<T: Clone + Num>(a: &T, bbar: &T) -> T {
    let d = T::one() - a.clone() * bbar.clone();
    T::one() / (d.clone() * d)
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    /// The constructed points `A`.
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    /// Every root of the numerator, interior or not.
    pub all_roots: Vec<C64>,
    /// `s_min / s_max` of the Bergman cross-Gram at `(A, B)`.
    pub relative_smin: f64,
    /// Remainder of the exact (or floating) deflation, where applicable.
    pub deflation_remainder: Option<f64>,
    pub exact: bool,
}

fn bergman_relative_smin(a: &[C64], b: &[C64]) -> Result<f64> {
    let aset = PointSet::from_complex(a)?;
    let bset = PointSet::from_complex(b)?;
    let g = cross_gram(&SpaceSpec::Bergman, &aset, &bset)?;
    let s = singular_values(&g.k)?;
    Ok(s.last().copied().unwrap_or(0.0) / s[0])
}

fn interior_roots(numerator: &[C64], needed: usize, b: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    let roots = polynomial_roots(numerator)?;
    let mut inside: Vec<C64> = roots.iter().copied().filter(|z| z.norm() < 1.0).collect();
    inside.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    inside.retain(|z| !b.contains(z));
    if inside.len() < needed {
        return Err(Error::InsufficientInteriorRoots {
            found: inside.len(),
            needed,
        });
    }
    inside.truncate(needed);
    Ok((inside, roots))
}

fn from_numerator(numerator: Vec<C64>, b: &[C64], exact: bool) -> Result<CounterexampleReport> {
    let n = b.len();
    let (a, all_roots) = interior_roots(&numerator, n, b)?;
    Ok(CounterexampleReport {
        relative_smin: bergman_relative_smin(&a, b)?,
        a,
        b: b.to_vec(),
        all_roots,
        deflation_remainder: None,
        exact,
    })
}

fn check_counterexample_input(b: &[C64], c: &[C64]) -> Result<()> {
    if b.len() != c.len() {
        return Err(Error::CardinalityMismatch {
            a: c.len(),
            b: b.len(),
        });
    }
    PointSet::in_space(&SpaceSpec::Bergman, b.iter().map(|&z| z.into()).collect())?;
    if c.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::InvalidArgument("coefficients are all zero".into()));
    }
    Ok(())
}

/// Points `A` in the disk where `f = sum c_j k_{b_j}` vanishes, making the
/// Bergman cross-Gram singular. The numerator is expanded in doubles.
pub fn bergman_counterexample_from_coeffs(b: &[C64], c: &[C64]) -> Result<CounterexampleReport> {
    check_counterexample_input(b, c)?;
    let bbar: Vec<C64> = b.iter().map(|z| z.conj()).collect();
    from_numerator(bergman_numerator(&bbar, c), b, false)
}

/// Same construction with the numerator expanded in exact complex rationals.
pub fn bergman_counterexample_from_coeffs_exact(
    b: &[GaussRat],
    c: &[GaussRat],
) -> Result<CounterexampleReport> {
    let bf: Vec<C64> = b.iter().map(gauss_rat_to_c64).collect();
    let cf: Vec<C64> = c.iter().map(gauss_rat_to_c64).collect();
    check_counterexample_input(&bf, &cf)?;
    let bbar: Vec<GaussRat> = b.iter().map(|z| z.conj()).collect();
    let num = bergman_numerator(&bbar, c);
    from_numerator(num.iter().map(gauss_rat_to_c64).collect(), &bf, true)
}

/// Numerator of `det K(z)` as a polynomial in `z`, where the last row of
/// `(1/(1 - a_i conj(b_j))^2)` uses `a_3 = z`. Expanded along that row.
fn complete_numerator<T: Clone + Num>(a1: &T, a2: &T, bbar: &[T]) -> Vec<T> {
    let m = |a: &T, j: usize| bergman_entry(a, &bbar[j]);
    // Cofactors of row 3 in a 3x3 determinant.
    let minor = |j0: usize, j1: usize| m(a1, j0) * m(a2, j1) - m(a1, j1) * m(a2, j0);
    let gamma = [minor(1, 2), T::zero() - minor(0, 2), minor(0, 1)];
    bergman_numerator(bbar, &gamma)
}

fn check_complete_input(a1: C64, a2: C64, b: &[C64]) -> Result<()> {
    if b.len() != 3 {
        return Err(Error::InvalidArgument("three b points are required".into()));
    }
    let a = PointSet::in_space(&SpaceSpec::Bergman, vec![a1.into(), a2.into()])?;
    let bs = PointSet::in_space(&SpaceSpec::Bergman, b.iter().map(|&z| z.into()).collect())?;
    a.ensure_disjoint(&bs)
}

fn quadratic_root_in_disk(q: &[C64], a1: C64, a2: C64, b: &[C64]) -> Result<(C64, Vec<C64>)> {
    let q = crate::numerics::trim_polynomial(q);
    if q.len() != 3 {
        return Err(Error::DegenerateQuadratic(q.len().saturating_sub(1)));
    }
    let roots = polynomial_roots(&q)?;
    let mut inside: Vec<C64> = roots
        .iter()
        .copied()
        .filter(|z| z.norm() < 1.0 && *z != a1 && *z != a2 && !b.contains(z))
        .collect();
    inside.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    inside.first().copied().map(|z| (z, roots)).ok_or(Error::NoInteriorRoot)
}

/// Given `a_1, a_2` and three `b`'s, finds `a_3` in the disk making the
/// Bergman cross-Gram singular. Doubles throughout.
pub fn bergman_counterexample_complete(a1: C64, a2: C64, b: &[C64]) -> Result<CounterexampleReport> {
    check_complete_input(a1, a2, b)?;
    let bbar: Vec<C64> = b.iter().map(|z| z.conj()).collect();
    let p = complete_numerator(&a1, &a2, &bbar);
    let (q1, r1) = gpoly_deflate(&p, &a1);
    let (q, r2) = gpoly_deflate(&q1, &a2);
    let scale = p.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let (a3, all_roots) = quadratic_root_in_disk(&q, a1, a2, b)?;
    let a = vec![a1, a2, a3];
    Ok(CounterexampleReport {
        relative_smin: bergman_relative_smin(&a, b)?,
        a,
        b: b.to_vec(),
        all_roots,
        deflation_remainder: Some((r1.norm() + r2.norm()) / scale),
        exact: false,
    })
}

/// Exact variant: the numerator and both deflations are carried out in
/// complex rationals, so the remainder is checked to be exactly zero.
pub fn bergman_counterexample_complete_exact(
    a1: &GaussRat,
    a2: &GaussRat,
    b: &[GaussRat],
) -> Result<CounterexampleReport> {
    let (a1f, a2f) = (gauss_rat_to_c64(a1), gauss_rat_to_c64(a2));
    let bf: Vec<C64> = b.iter().map(gauss_rat_to_c64).collect();
    check_complete_input(a1f, a2f, &bf)?;
    if a1 == a2 || b.contains(a1) || b.contains(a2) {
        return Err(Error::SetsIntersect(format!("{a1f}")));
    }
    let bbar: Vec<GaussRat> = b.iter().map(|z| z.conj()).collect();
    let p = complete_numerator(a1, a2, &bbar);
    let (q1, r1) = gpoly_deflate(&p, a1);
    let (q, r2) = gpoly_deflate(&q1, a2);
    let remainder_zero = r1.is_zero() && r2.is_zero();
    let qf: Vec<C64> = q.iter().map(gauss_rat_to_c64).collect();
    let (a3, all_roots) = quadratic_root_in_disk(&qf, a1f, a2f, &bf)?;
    let a = vec![a1f, a2f, a3];
    Ok(CounterexampleReport {
        relative_smin: bergman_relative_smin(&a, &bf)?,
        a,
        b: bf,
        all_roots,
        deflation_remainder: Some(if remainder_zero { 0.0 } else { f64::NAN }),
        exact: true,
    })
}

/// Reference data for the three-point construction: `b`'s and coefficients in exact rationals.
pub fn example_b_points() -> [GaussRat; 3] {
    [
        gauss_rat(-257, 367, -17, 45),
        gauss_rat(-62, 311, 337, 376),
        gauss_rat(356, 403, 86, 403),
    ]
}

pub fn example_coefficients() -> [GaussRat; 3] {
    [
        gauss_rat(33, 68, -19, 411),
        gauss_rat(244, 353, -16, 343),
        gauss_rat(43, 85, -254, 335),
    ]
}

/// Rational approximations of the first two roots used by the second construction.
pub fn example_a1_a2() -> (GaussRat, GaussRat) {
    (gauss_rat(-67, 80, 88, 255), gauss_rat(101, 586, -369, 443))
}

/// Reference roots printed alongside the example.
pub const EXAMPLE_ROOTS: [(f64, f64); 3] = [
    (-0.837508, 0.345101),
    (0.172371, -0.832953),
    (0.466866, 0.855772),
];

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub trials: usize,
    pub report: CounterexampleReport,
}

/// Random search for `n` disk points with a singular Bergman cross-Gram.
///
/// Generalizes the completion recipe: each trial draws `b_1..b_n` and
/// `a_1..a_{n-1}`, takes `c` in the kernel of the `(n-1) x n` matrix
/// `(1/(1 - a_i conj(b_j))^2)` (so `f = sum c_j k_{b_j}` vanishes at every
/// `a_i`), and accepts the trial when `f` has one more zero in the disk.
/// Trial `t` uses the ChaCha stream `(seed, t)`, so results do not depend
/// on how trials are scheduled.
pub fn bergman_counterexample_search(n: usize, seed: u64, max_trials: usize) -> Result<SearchReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    for t in 0..max_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let mut disk = |lo: f64, hi: f64| {
            C64::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..std::f64::consts::TAU))
        };
        // Extra interior zeros are rare unless both sets sit near the circle.
        let b: Vec<C64> = (0..n).map(|_| disk(0.8, 0.999)).collect();
        let a: Vec<C64> = (0..n - 1).map(|_| disk(0.8, 0.999)).collect();
        if let Ok(report) = complete_trial(&a, &b) {
            if report.relative_smin <= 1e-8 {
                return Ok(SearchReport { trials: t + 1, report });
            }
        }
    }
    Err(Error::InsufficientInteriorRoots {
        found: n - 1,
        needed: n,
    })
}

fn complete_trial(a: &[C64], b: &[C64]) -> Result<CounterexampleReport> {
    let n = b.len();
    let m = CMatrix::from_fn(n - 1, n, |i, j| bergman_entry(&a[i], &b[j].conj()));
    // Null vector by signed maximal minors.
    let c: Vec<C64> = (0..n)
        .map(|j| {
            let minor = m.clone().remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            determinant(&minor).map(|d| d * sign)
        })
        .collect::<Result<_>>()?;
    let bbar: Vec<C64> = b.iter().map(|z| z.conj()).collect();
    let numerator = bergman_numerator(&bbar, &c);
    let all_roots = polynomial_roots(&numerator)?;
    let fresh = all_roots
        .iter()
        .copied()
        .filter(|z| z.norm() < 1.0 && a.iter().chain(b.iter()).all(|w| (z - w).norm() > 1e-6))
        .min_by(|x, y| x.norm().total_cmp(&y.norm()))
        .ok_or(Error::NoInteriorRoot)?;
    let mut pts = a.to_vec();
    pts.push(fresh);
    PointSet::from_complex(&pts)?.ensure_disjoint(&PointSet::from_complex(b)?)?;
    Ok(CounterexampleReport {
        relative_smin: bergman_relative_smin(&pts, b)?,
        a: pts,
        b: b.to_vec(),
        all_roots,
        deflation_remainder: None,
        exact: false,
    })
}

/// `det(k^θ_{b_j}(a_i))` against `prod θ(a_i) conj(θ(b_i)) · det(k^H_{b_j}(a_i))`.
pub fn shift_invariant_det_identity(
    theta: &BlaschkeProduct,
    a: &PointSet,
    b: &PointSet,
) -> Result<IdentityCheck> {
    a.ensure_disjoint(b)?;
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let space = SpaceSpec::ShiftInvariant(theta.clone());
    let n = a.len();
    let mut kt = CMatrix::zeros(n, n);
    let mut kh = CMatrix::zeros(n, n);
    for (i, ai) in a.points().iter().enumerate() {
        for (j, bj) in b.points().iter().enumerate() {
            kt[(i, j)] = kernel_eval(&space, bj, ai)?;
            kh[(i, j)] = kernel_eval(&SpaceSpec::Hardy, bj, ai)?;
        }
    }
    let (av, bv) = (a.scalars()?, b.scalars()?);
    let mut factor = c64(1.0, 0.0);
    for i in 0..n {
        factor *= theta.eval(av[i])? * theta.eval(bv[i])?.conj();
    }
    Ok(identity_check(determinant(&kt)?, factor * determinant(&kh)?))
}
