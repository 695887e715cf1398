//! The generic part `H₀ = span{k_a, k_b}` and the geodesic between the
//! zero-set projections restricted to it.
//!
//! Coordinates: with `Ĝ = L L*` the Cholesky factorization of the Gram
//! matrix of the normalized kernels (all `a`'s first, then the `b`'s),
//! column `i` of `L*` holds the coordinates of `k_{x_i}/‖k_{x_i}‖` in an
//! orthonormal basis of `H₀`. Since `L*` is upper triangular the `a`
//! kernels span the first `n` basis vectors, so `P = diag(0, I_n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{cross_gram, nullities};
use crate::kernels::{kernel_norm, normalized_gram_matrix, PointSet, SpaceSpec};
use crate::numerics::{
    hermitian_eig, identity, matrix_exp_i, op_norm, singular_values, unitary_log_principal,
    CMatrix, LogOptions, RankTolerance,
};

/// Largest accepted condition number of the normalized Gram matrix.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct GenericPartFrame {
    pub space: SpaceSpec,
    pub a: PointSet,
    pub b: PointSet,
    /// Gram matrix of the normalized kernels.
    pub gram: CMatrix,
    /// `‖k_{x_i}‖` in the same order.
    pub norms: Vec<f64>,
    /// Column `i`: orthonormal coordinates of the normalized `k_{x_i}`.
    pub coords: CMatrix,
    /// Projection onto `Z_A⁰ = H₀ ⊖ span{k_a}`.
    pub p: CMatrix,
    /// Projection onto `Z_B⁰ = H₀ ⊖ span{k_b}`.
    pub q: CMatrix,
    pub condition: f64,
}

impl GenericPartFrame {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.a.len()
    }

    /// `I - P`, the projection onto `span{k_a}`.
    pub fn p_perp(&self) -> CMatrix {
        identity(self.dim()) - &self.p
    }

    pub fn q_perp(&self) -> CMatrix {
        identity(self.dim()) - &self.q
    }
}

/// Orthonormal basis (columns) of the column span of `y`, from a
/// Householder QR so orthogonality does not degrade with `cond(y)²`.
fn orthonormalize(y: &CMatrix) -> CMatrix {
    let k = y.ncols();
    y.clone().qr().q().columns(0, k).into_owned()
}

pub fn generic_frame(space: &SpaceSpec, a: &PointSet, b: &PointSet) -> Result<GenericPartFrame> {
    a.ensure_disjoint(b)?;
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    a.check(space)?;
    b.check(space)?;
    let n = a.len();
    let points = a.concat(b);
    let norms = points
        .iter()
        .map(|x| kernel_norm(space, x))
        .collect::<Result<Vec<_>>>()?;
    let gram = normalized_gram_matrix(space, &points)?;
    let s = singular_values(&gram)?;
    let condition = if s[2 * n - 1] > 0.0 {
        s[0] / s[2 * n - 1]
    } else {
        f64::INFINITY
    };
    if condition > MAX_GRAM_CONDITION {
        return Err(Error::LinearlyDependentKernels { condition });
    }
    let chol = nalgebra::Cholesky::new(gram.clone())
        .ok_or(Error::LinearlyDependentKernels { condition })?;
    let coords = chol.l().adjoint();
    let mut p = CMatrix::zeros(2 * n, 2 * n);
    for i in n..2 * n {
        p[(i, i)] = 1.0.into();
    }
    let w = orthonormalize(&coords.columns(n, n).into_owned());
    let q = identity(2 * n) - &w * w.adjoint();
    Ok(GenericPartFrame {
        space: space.clone(),
        a: a.clone(),
        b: b.clone(),
        gram,
        norms,
        coords,
        p,
        q: crate::numerics::hermitian_part(&q),
        condition,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentResiduals {
    /// `max(‖PXP‖, ‖(I-P)X(I-P)‖)`
    pub codiag_p: f64,
    pub codiag_q: f64,
    /// `‖e^{iX} P e^{-iX} - Q‖`
    pub endpoint: f64,
    /// Largest `|μ_k + μ_{2n-1-k}|` over the ascending spectrum `μ` of `X`.
    pub pairing: f64,
}

#[derive(Debug, Clone)]
pub struct GeodesicExponent {
    pub x: CMatrix,
    /// Ascending eigenvalues of `X`.
    pub spectrum: Vec<f64>,
    /// `λ_0 ≥ … ≥ λ_{n-1} ≥ 0`.
    pub lambdas: Vec<f64>,
    pub residuals: ExponentResiduals,
}

impl GeodesicExponent {
    /// `‖X‖`, the geodesic distance.
    pub fn norm(&self) -> f64 {
        self.lambdas.first().copied().unwrap_or(0.0)
    }
}

fn codiagonal_residual(x: &CMatrix, p: &CMatrix) -> f64 {
    let pp = identity(p.nrows()) - p;
    op_norm(&(p * x * p)).max(op_norm(&(&pp * x * &pp)))
}

/// `X = ½ log((2Q - I)(2P - I))` on the principal branch.
pub fn geodesic_exponent(frame: &GenericPartFrame) -> Result<GeodesicExponent> {
    geodesic_exponent_with(frame, LogOptions::default())
}

pub fn geodesic_exponent_with(frame: &GenericPartFrame, opts: LogOptions) -> Result<GeodesicExponent> {
    let d = frame.dim();
    let id = identity(d);
    let rp = frame.p.scale(2.0) - &id;
    let rq = frame.q.scale(2.0) - &id;
    let x = unitary_log_principal(&(rq * rp), opts)?.scale(0.5);
    let spectrum = hermitian_eig(&x)?.values;
    let n = frame.n();
    let mut pairing: f64 = 0.0;
    let mut lambdas = Vec::with_capacity(n);
    for k in 0..n {
        let (lo, hi) = (spectrum[k], spectrum[d - 1 - k]);
        pairing = pairing.max((lo + hi).abs());
        lambdas.push(0.5 * (hi - lo));
    }
    let u = matrix_exp_i(&x, 1.0)?;
    let endpoint = op_norm(&(&u * &frame.p * u.adjoint() - &frame.q));
    let residuals = ExponentResiduals {
        codiag_p: codiagonal_residual(&x, &frame.p),
        codiag_q: codiagonal_residual(&x, &frame.q),
        endpoint,
        pairing,
    };
    Ok(GeodesicExponent {
        x,
        spectrum,
        lambdas,
        residuals,
    })
}

/// `δ(t) = e^{itX} P e^{-itX}`.
pub fn geodesic_point(exponent: &GeodesicExponent, frame: &GenericPartFrame, t: f64) -> Result<CMatrix> {
    let u = matrix_exp_i(&exponent.x, t)?;
    Ok(crate::numerics::hermitian_part(&(&u * &frame.p * u.adjoint())))
}

/// `(nullity K, nullity K*)` of the cross-Gram matrix.
pub fn intersection_dims(space: &SpaceSpec, a: &PointSet, b: &PointSet, tol: RankTolerance) -> Result<(usize, usize)> {
    let g = cross_gram(space, a, b)?;
    Ok(nullities(&g.k, tol)?.0)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DixmierCosine {
    /// `‖PQ‖`
    pub cosine: f64,
    /// `‖(I-P)(I-Q)‖`, equal in theory.
    pub complementary: f64,
}

pub fn dixmier_cosine(frame: &GenericPartFrame) -> DixmierCosine {
    DixmierCosine {
        cosine: op_norm(&(&frame.p * &frame.q)),
        complementary: op_norm(&(frame.p_perp() * frame.q_perp())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralLink {
    /// Singular values of `E`, top `n`, non-increasing.
    pub e_singular_values: Vec<f64>,
    /// Singular values `β` of the block `(I-P) E P`, non-increasing.
    pub off_diagonal: Vec<f64>,
    /// `arccos(β/√(1+β²))`, sorted non-increasing.
    pub lambdas: Vec<f64>,
    /// The same formula applied to the singular values of `E` itself.
    pub literal_lambdas: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AndoIdempotent {
    pub e: CMatrix,
    pub idempotency: f64,
    pub link: SpectralLink,
}

/// `E = (I-P)((I-P) + (I-Q))^{-1}`: the idempotent with range
/// `span{k_a}` and kernel `span{k_b}`.
pub fn ando_idempotent(frame: &GenericPartFrame) -> Result<AndoIdempotent> {
    let pp = frame.p_perp();
    let sum = &pp + frame.q_perp();
    let s = singular_values(&sum)?;
    let last = s.last().copied().unwrap_or(0.0);
    if !(last > s[0] / MAX_GRAM_CONDITION) {
        return Err(Error::SingularSum);
    }
    let inv = sum.try_inverse().ok_or(Error::SingularSum)?;
    let e = &pp * inv;
    let idempotency = op_norm(&(&e * &e - &e));
    let n = frame.n();
    let mut e_sv = singular_values(&e)?;
    e_sv.truncate(n);
    let mut beta = singular_values(&(&pp * &e * &frame.p))?;
    beta.truncate(n);
    let formula = |t: f64| (t / (1.0 + t * t).sqrt()).clamp(-1.0, 1.0).acos();
    let mut lambdas: Vec<f64> = beta.iter().map(|&b| formula(b)).collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    let mut literal_lambdas: Vec<f64> = e_sv.iter().map(|&t| formula(t)).collect();
    literal_lambdas.sort_by(|x, y| y.total_cmp(x));
    Ok(AndoIdempotent {
        e,
        idempotency,
        link: SpectralLink {
            e_singular_values: e_sv,
            off_diagonal: beta,
            lambdas,
            literal_lambdas,
        },
    })
}
