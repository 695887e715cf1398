//! Dense complex linear algebra shared by every other module.
//!
//! Decompositions are delegated to `nalgebra`; this module adds the
//! contracts the rest of the crate relies on (sorted spectra, numerical
//! rank, the principal branch of the unitary logarithm) plus the
//! permanent and polynomial root finding.

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix. Every matrix-valued quantity in the crate uses it.
pub type CMatrix = DMatrix<C64>;

const MAX_ITER: usize = 10_000;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Hermitian part `(M + M*)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn check_hermitian(h: &CMatrix) -> Result<()> {
    let asymmetry = max_abs(&(h - h.adjoint()));
    let tolerance = 1e-12 * max_abs(h).max(f64::MIN_POSITIVE);
    if asymmetry > tolerance {
        return Err(Error::NotHermitian {
            asymmetry,
            tolerance,
        });
    }
    Ok(())
}

/// Spectral decomposition `H = U diag(values) U*` with ascending values.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEig> {
    let n = ensure_square(h)?;
    ensure_finite(h)?;
    check_hermitian(h)?;
    if n == 0 {
        return Ok(HermitianEig {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(hermitian_part(h), f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence("hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEig { values, vectors })
}

/// `M = U diag(s) V*`, thin form, singular values non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl Svd {
    pub fn recompose(&self) -> CMatrix {
        let k = self.singular_values.len();
        let mut us = self.u.clone();
        for j in 0..k {
            let s = self.singular_values[j];
            us.column_mut(j).scale_mut(s);
        }
        us * self.v.adjoint()
    }
}

pub fn svd(m: &CMatrix) -> Result<Svd> {
    ensure_finite(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Svd {
            singular_values: Vec::new(),
            u: CMatrix::zeros(rows, 0),
            v: CMatrix::zeros(cols, 0),
        });
    }
    let dec = SVD::try_new(m.clone(), true, true, f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence("svd"))?;
    let u = dec.u.ok_or(Error::NoConvergence("svd: missing U"))?;
    let v_t = dec.v_t.ok_or(Error::NoConvergence("svd: missing V"))?;
    // nalgebra sorts in `try_new`; sort again so the contract does not
    // hinge on that detail.
    let k = dec.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let mut su = CMatrix::zeros(rows, k);
    let mut sv = CMatrix::zeros(cols, k);
    let v = v_t.adjoint();
    for (dst, &src) in order.iter().enumerate() {
        su.set_column(dst, &u.column(src));
        sv.set_column(dst, &v.column(src));
    }
    Ok(Svd {
        singular_values: order.iter().map(|&i| dec.singular_values[i]).collect(),
        u: su,
        v: sv,
    })
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let dec = SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence("svd"))?;
    let mut s: Vec<f64> = dec.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m)
        .ok()
        .and_then(|s| s.first().copied())
        .unwrap_or(f64::NAN)
}

/// Schatten p-norm, `p >= 1`.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    let s = singular_values(m)?;
    Ok(s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Threshold below which a singular value counts as zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RankTolerance {
    /// `max(rows, cols) * eps * s_max`
    #[default]
    Standard,
    /// `factor * s_max`
    Relative(f64),
    Absolute(f64),
}

impl RankTolerance {
    pub fn threshold(self, s_max: f64, rows: usize, cols: usize) -> f64 {
        match self {
            RankTolerance::Standard => rows.max(cols) as f64 * f64::EPSILON * s_max,
            RankTolerance::Relative(f) => f * s_max,
            RankTolerance::Absolute(t) => t,
        }
    }
}

/// Rank from a non-increasing singular value list of a `rows x cols` matrix.
pub fn numerical_rank(s: &[f64], rows: usize, cols: usize, tol: RankTolerance) -> usize {
    let s_max = s.first().copied().unwrap_or(0.0);
    let t = tol.threshold(s_max, rows, cols);
    s.iter().filter(|&&x| x > t).count()
}

/// LU determinant.
pub fn determinant(m: &CMatrix) -> Result<C64> {
    ensure_square(m)?;
    ensure_finite(m)?;
    if m.nrows() == 0 {
        return Ok(c64(1.0, 0.0));
    }
    Ok(m.clone().lu().determinant())
}

/// Options for [`unitary_log_principal`].
#[derive(Debug, Clone, Copy)]
pub struct LogOptions {
    /// Eigenvalues whose angle is within this gap of `pi` are treated as `-1`.
    pub angle_gap: f64,
    /// Map eigenvalues at `-1` to `+pi` instead of failing.
    pub allow_pi: bool,
}

impl Default for LogOptions {
    fn default() -> Self {
        Self {
            angle_gap: 1e-9,
            allow_pi: false,
        }
    }
}

/// Hermitian `A` with `exp(iA) = S` and spectrum in `(-pi, pi]`.
///
/// Computed eigenvalue-wise from the complex Schur form, which is diagonal
/// up to rounding because `S` is normal.
pub fn unitary_log_principal(s: &CMatrix, opts: LogOptions) -> Result<CMatrix> {
    let n = ensure_square(s)?;
    ensure_finite(s)?;
    let defect = max_abs(&(s.adjoint() * s - identity(n)));
    if defect > 1e-10 {
        return Err(Error::NotUnitary { defect });
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let schur = Schur::try_new(s.clone(), f64::EPSILON, MAX_ITER)
        .ok_or(Error::NoConvergence("complex Schur"))?;
    let (q, t) = schur.unpack();
    let mut angles = Vec::with_capacity(n);
    for i in 0..n {
        let theta = t[(i, i)].arg();
        let gap = std::f64::consts::PI - theta.abs();
        if gap < opts.angle_gap {
            if !opts.allow_pi {
                return Err(Error::BranchAmbiguity { gap });
            }
            angles.push(std::f64::consts::PI);
        } else {
            angles.push(theta);
        }
    }
    let mut qd = q.clone();
    for (j, &a) in angles.iter().enumerate() {
        qd.column_mut(j).scale_mut(a);
    }
    Ok(hermitian_part(&(qd * q.adjoint())))
}

/// `exp(i t A)` for Hermitian `A`.
pub fn matrix_exp_i(a: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(a)?;
    let mut ud = eig.vectors.clone();
    for (j, &lam) in eig.values.iter().enumerate() {
        let phase = C64::from_polar(1.0, t * lam);
        for z in ud.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    Ok(ud * eig.vectors.adjoint())
}

pub const PERMANENT_MAX: usize = 14;

/// Ryser's formula with Gray-code subset enumeration, `O(2^n n)`.
pub fn permanent(m: &CMatrix) -> Result<C64> {
    let n = ensure_square(m)?;
    if n > PERMANENT_MAX {
        return Err(Error::TooLarge {
            size: n,
            max: PERMANENT_MAX,
        });
    }
    ensure_finite(m)?;
    if n == 0 {
        return Ok(c64(1.0, 0.0));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut subset: u32 = 0;
    for k in 1u32..(1u32 << n) {
        // Gray code: flip the lowest set bit of k.
        let j = k.trailing_zeros() as usize;
        let bit = 1u32 << j;
        let adding = subset & bit == 0;
        subset ^= bit;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            if adding {
                *rs += m[(i, j)];
            } else {
                *rs -= m[(i, j)];
            }
        }
        let prod = row_sums.iter().fold(c64(1.0, 0.0), |acc, &x| acc * x);
        if subset.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Evaluate `sum coeffs[k] z^k` (ascending order) by Horner's rule.
pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn poly_derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Drop leading (highest-degree) coefficients below `1e-14 * max|c|`.
pub fn trim_polynomial(coeffs: &[C64]) -> Vec<C64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let mut out = coeffs.to_vec();
    while let Some(last) = out.last() {
        if last.norm() <= 1e-14 * scale {
            out.pop();
        } else {
            break;
        }
    }
    out
}

/// Roots of `sum coeffs[k] z^k` (coefficients in ascending order of degree).
///
/// Eigenvalues of the companion matrix, followed by a few Newton steps that
/// are kept only when they reduce the residual.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let p = trim_polynomial(coeffs);
    if p.len() < 2 {
        return Err(Error::DegreeZero);
    }
    let d = p.len() - 1;
    let lead = p[d];
    let mut companion = CMatrix::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = c64(1.0, 0.0);
    }
    for i in 0..d {
        companion[(i, d - 1)] = -p[i] / lead;
    }
    let roots: Vec<C64> = if d == 1 {
        vec![companion[(0, 0)]]
    } else {
        let schur = Schur::try_new(companion, f64::EPSILON, MAX_ITER)
            .ok_or(Error::NoConvergence("companion Schur"))?;
        let (_, t) = schur.unpack();
        (0..d).map(|i| t[(i, i)]).collect()
    };
    let dp = poly_derivative(&p);
    Ok(roots
        .into_iter()
        .map(|mut z| {
            let mut r = poly_eval(&p, z).norm();
            for _ in 0..3 {
                let dz = poly_eval(&dp, z);
                if dz.norm() == 0.0 {
                    break;
                }
                let cand = z - poly_eval(&p, z) / dz;
                let rc = poly_eval(&p, cand).norm();
                if rc < r {
                    z = cand;
                    r = rc;
                } else {
                    break;
                }
            }
            z
        })
        .collect())
}

/// Product of polynomials in ascending coefficient order.
pub fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

/// Divide by the monic linear factor `(z - root)`; returns quotient and remainder.
pub fn poly_deflate(p: &[C64], root: C64) -> (Vec<C64>, C64) {
    if p.is_empty() {
        return (Vec::new(), C64::new(0.0, 0.0));
    }
    let d = p.len() - 1;
    let mut q = vec![C64::new(0.0, 0.0); d];
    let mut carry = C64::new(0.0, 0.0);
    for k in (0..=d).rev() {
        let val = p[k] + carry * root;
        if k == 0 {
            return (q, val);
        }
        q[k - 1] = val;
        carry = val;
    }
    unreachable!()
}
