//! Reproducing kernels of the spaces the library works with.
//!
//! Convention: `kernel_eval(space, w, z)` is `k_w(z) = <k_w, k_z>`, so
//! the Gram matrix of `k_{x_1},...,k_{x_n}` has entries `k_{x_j}(x_i)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::BlaschkeProduct;
use crate::numerics::{c64, CMatrix, C64};

/// A point of the underlying set: a complex number or a vector in the ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Point {
    Scalar(C64),
    Vector(Vec<C64>),
}

impl Point {
    pub fn new(re: f64, im: f64) -> Self {
        Point::Scalar(c64(re, im))
    }

    pub fn real(x: f64) -> Self {
        Point::Scalar(c64(x, 0.0))
    }

    pub fn scalar(&self) -> Option<C64> {
        match self {
            Point::Scalar(z) => Some(*z),
            Point::Vector(v) if v.len() == 1 => Some(v[0]),
            Point::Vector(_) => None,
        }
    }

    /// Coordinates as a vector; a scalar is a 1-vector.
    pub fn coords(&self) -> Vec<C64> {
        match self {
            Point::Scalar(z) => vec![*z],
            Point::Vector(v) => v.clone(),
        }
    }

    fn canonical(&self) -> Point {
        // -0.0 and 0.0 compare equal already; this only normalises 1-vectors.
        match self.scalar() {
            Some(z) => Point::Scalar(z),
            None => self.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl From<C64> for Point {
    fn from(z: C64) -> Self {
        Point::Scalar(z)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Scalar(z) => write!(f, "{},{}", z.re, z.im),
            Point::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let t = s.trim();
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::InvalidArgument(format!("not a finite number: {t:?}")))
}

/// `"re,im"`, `"re"`, or `"[re1,im1,re2,im2,...]"`.
impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::InvalidArgument(format!("unterminated vector point {s:?}")))?;
            let nums = inner.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
            if nums.is_empty() || nums.len() % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "vector point needs re,im pairs: {s:?}"
                )));
            }
            return Ok(Point::Vector(nums.chunks(2).map(|p| c64(p[0], p[1])).collect()));
        }
        let parts: Vec<&str> = s.split(',').collect();
        match parts.as_slice() {
            [re] => Ok(Point::new(parse_f64(re)?, 0.0)),
            [re, im] => Ok(Point::new(parse_f64(re)?, parse_f64(im)?)),
            _ => Err(Error::InvalidArgument(format!("bad point literal {s:?}"))),
        }
    }
}

/// Growth rule for weights beyond the explicit head.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WeightTail {
    /// `beta_n = scale * (n + 1)^exponent`
    Power { scale: f64, exponent: f64 },
    /// `beta_n = sqrt(n!)`
    Factorial,
}

/// Weights `beta_n` of a weighted Hardy space together with its radius `R`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weights {
    pub head: Vec<f64>,
    pub tail: WeightTail,
    pub radius: f64,
}

impl Weights {
    pub fn power(exponent: f64) -> Self {
        Weights {
            head: Vec::new(),
            tail: WeightTail::Power {
                scale: 1.0,
                exponent,
            },
            radius: 1.0,
        }
    }

    pub fn factorial() -> Self {
        Weights {
            head: Vec::new(),
            tail: WeightTail::Factorial,
            radius: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.head.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        if let WeightTail::Power { scale, exponent } = self.tail {
            if !(scale > 0.0 && scale.is_finite() && exponent.is_finite()) {
                return Err(Error::InvalidArgument("bad power weight rule".into()));
            }
        }
        if !(self.radius > 0.0) {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        Ok(())
    }

    pub fn beta(&self, n: usize) -> f64 {
        if let Some(&b) = self.head.get(n) {
            return b;
        }
        match self.tail {
            WeightTail::Power { scale, exponent } => scale * ((n + 1) as f64).powf(exponent),
            WeightTail::Factorial => (1..=n).map(|k| k as f64).product::<f64>().sqrt(),
        }
    }
}

const SERIES_CAP: usize = 200_000_000;

/// `sum_n x^n / beta_n^2`, stopped once a term drops below `1e-17` of the
/// accumulated absolute sum.
fn weighted_series(weights: &Weights, x: C64) -> Result<C64> {
    let r2 = weights.radius * weights.radius;
    if x.norm() >= r2 {
        return Err(Error::SeriesDivergence(x.norm()));
    }
    let mut sum = c64(0.0, 0.0);
    let mut abs_sum = 0.0;
    // Factorial tail: carry x^n / n! directly to avoid overflow of either part.
    let mut fact_term = c64(1.0, 0.0);
    let mut xn = c64(1.0, 0.0);
    for n in 0..SERIES_CAP {
        if n > 0 {
            xn *= x;
            fact_term *= x / n as f64;
        }
        let term = if n < weights.head.len() {
            xn / (weights.head[n] * weights.head[n])
        } else {
            match weights.tail {
                WeightTail::Power { scale, exponent } => {
                    let b = scale * ((n + 1) as f64).powf(exponent);
                    xn / (b * b)
                }
                WeightTail::Factorial => fact_term,
            }
        };
        sum += term;
        abs_sum += term.norm();
        if n >= weights.head.len() && (term.norm() <= 1e-17 * abs_sum || term.norm() == 0.0) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesDivergence(x.norm()))
}

/// Which domain the points of a space live in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Domain {
    /// Open disk of the given radius (the unit disk for most spaces).
    Disk(f64),
    Plane,
    Ball(usize),
    RealLine,
}

/// The reproducing kernel Hilbert space all evaluations refer to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SpaceSpec {
    Hardy,
    Bergman,
    Bargmann,
    WeightedHardy(Weights),
    ShiftInvariant(BlaschkeProduct),
    DruryArveson(usize),
    SobolevLine,
}

impl SpaceSpec {
    pub fn domain(&self) -> Domain {
        match self {
            SpaceSpec::Hardy | SpaceSpec::Bergman | SpaceSpec::ShiftInvariant(_) => Domain::Disk(1.0),
            SpaceSpec::Bargmann => Domain::Plane,
            SpaceSpec::WeightedHardy(w) if w.radius.is_infinite() => Domain::Plane,
            SpaceSpec::WeightedHardy(w) => Domain::Disk(w.radius),
            SpaceSpec::DruryArveson(n) => Domain::Ball(*n),
            SpaceSpec::SobolevLine => Domain::RealLine,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::WeightedHardy(w) => w.validate(),
            SpaceSpec::DruryArveson(0) => {
                Err(Error::InvalidArgument("Drury-Arveson dimension must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Checks that `p` lies strictly inside the domain.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        let bad = || Error::OutOfDomain(p.to_string());
        match self.domain() {
            Domain::Disk(r) => {
                let z = p.scalar().ok_or_else(bad)?;
                if z.norm() >= r {
                    return Err(bad());
                }
            }
            Domain::Plane => {
                p.scalar().ok_or_else(bad)?;
            }
            Domain::Ball(n) => {
                let v = p.coords();
                let r2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if v.len() != n || r2 >= 1.0 {
                    return Err(bad());
                }
            }
            Domain::RealLine => {
                let z = p.scalar().ok_or_else(bad)?;
                if z.im != 0.0 {
                    return Err(bad());
                }
            }
        }
        Ok(())
    }

    pub fn is_disk_space(&self) -> bool {
        matches!(self.domain(), Domain::Disk(r) if r == 1.0)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Hardy => write!(f, "hardy"),
            SpaceSpec::Bergman => write!(f, "bergman"),
            SpaceSpec::Bargmann => write!(f, "bargmann"),
            SpaceSpec::SobolevLine => write!(f, "sobolev"),
            SpaceSpec::DruryArveson(n) => write!(f, "drury-arveson:{n}"),
            SpaceSpec::WeightedHardy(w) => match w.tail {
                WeightTail::Factorial => write!(f, "weighted-hardy:factorial"),
                WeightTail::Power { exponent, .. } => write!(f, "weighted-hardy:p={exponent}"),
            },
            SpaceSpec::ShiftInvariant(b) => {
                let zs: Vec<String> = b.zeros().iter().map(|z| format!("{},{}", z.re, z.im)).collect();
                write!(f, "shift-invariant:{}", zs.join(";"))
            }
        }
    }
}

/// Parses `hardy`, `bergman`, `bargmann`, `sobolev`, `drury-arveson:N`,
/// `weighted-hardy:p=E[,s=S][,R=R]`, `weighted-hardy:factorial` and
/// `shift-invariant:re,im;re,im;...`.
impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let bad = |msg: &str| Error::InvalidArgument(format!("space {s:?}: {msg}"));
        let space = match (name.to_ascii_lowercase().as_str(), args) {
            ("hardy", None) => SpaceSpec::Hardy,
            ("bergman", None) => SpaceSpec::Bergman,
            ("bargmann" | "segal-bargmann", None) => SpaceSpec::Bargmann,
            ("sobolev", None) => SpaceSpec::SobolevLine,
            ("drury-arveson", Some(n)) => {
                SpaceSpec::DruryArveson(n.parse().map_err(|_| bad("dimension must be an integer"))?)
            }
            ("weighted-hardy", Some(a)) if a.eq_ignore_ascii_case("factorial") => {
                SpaceSpec::WeightedHardy(Weights::factorial())
            }
            ("weighted-hardy", Some(a)) => {
                let mut w = Weights::power(0.0);
                let mut scale = 1.0;
                let mut exponent = None;
                for kv in a.split(',') {
                    let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                    let v = parse_f64(v)?;
                    match k.trim() {
                        "p" => exponent = Some(v),
                        "s" => scale = v,
                        "R" | "r" => w.radius = v,
                        other => return Err(bad(&format!("unknown key {other:?}"))),
                    }
                }
                w.tail = WeightTail::Power {
                    scale,
                    exponent: exponent.ok_or_else(|| bad("missing p=exponent"))?,
                };
                SpaceSpec::WeightedHardy(w)
            }
            ("shift-invariant", Some(a)) => {
                let zeros = a
                    .split(';')
                    .map(|t| t.parse::<Point>()?.scalar().ok_or_else(|| bad("zeros are scalars")))
                    .collect::<Result<Vec<_>>>()?;
                SpaceSpec::ShiftInvariant(BlaschkeProduct::new(zeros)?)
            }
            _ => return Err(bad("unknown space")),
        };
        space.validate()?;
        Ok(space)
    }
}

/// `k_w(z)`.
pub fn kernel_eval(space: &SpaceSpec, w: &Point, z: &Point) -> Result<C64> {
    space.check_point(w)?;
    space.check_point(z)?;
    let one = c64(1.0, 0.0);
    Ok(match space {
        SpaceSpec::Hardy => {
            let (w, z) = (w.scalar().unwrap(), z.scalar().unwrap());
            one / (one - w.conj() * z)
        }
        SpaceSpec::Bergman => {
            let (w, z) = (w.scalar().unwrap(), z.scalar().unwrap());
            let d = one - w.conj() * z;
            one / (d * d)
        }
        SpaceSpec::Bargmann => (w.scalar().unwrap().conj() * z.scalar().unwrap()).exp(),
        SpaceSpec::WeightedHardy(weights) => {
            weighted_series(weights, w.scalar().unwrap().conj() * z.scalar().unwrap())?
        }
        SpaceSpec::ShiftInvariant(theta) => {
            let (w, z) = (w.scalar().unwrap(), z.scalar().unwrap());
            theta.eval(z)? * theta.eval(w)?.conj() / (one - z * w.conj())
        }
        SpaceSpec::DruryArveson(_) => {
            let s: C64 = z
                .coords()
                .iter()
                .zip(w.coords().iter())
                .map(|(zj, wj)| zj * wj.conj())
                .sum();
            one / (one - s)
        }
        SpaceSpec::SobolevLine => {
            let d = (z.scalar().unwrap().re - w.scalar().unwrap().re).abs();
            c64((-d).exp(), 0.0)
        }
    })
}

fn zero_kernel_tol() -> f64 {
    1e-300
}

/// `||k_w|| = sqrt(k_w(w))`.
pub fn kernel_norm(space: &SpaceSpec, w: &Point) -> Result<f64> {
    let v = kernel_eval(space, w, w)?;
    if !(v.re > zero_kernel_tol()) || !v.re.is_finite() {
        return Err(Error::ZeroKernel(w.to_string()));
    }
    Ok(v.re.sqrt())
}

/// `<k_w, k_z> / (||k_w|| ||k_z||)`, evaluated in log form for the
/// Gaussian kernel so large points do not overflow.
pub fn normalized_kernel(space: &SpaceSpec, w: &Point, z: &Point) -> Result<C64> {
    if let SpaceSpec::Bargmann = space {
        space.check_point(w)?;
        space.check_point(z)?;
        let (w, z) = (w.scalar().unwrap(), z.scalar().unwrap());
        let log = w.conj() * z - c64(0.5 * (w.norm_sqr() + z.norm_sqr()), 0.0);
        return Ok(log.exp());
    }
    let k = kernel_eval(space, w, z)?;
    Ok(k / (kernel_norm(space, w)? * kernel_norm(space, z)?))
}

/// `|<k_a, k_b>| / (||k_a|| ||k_b||)` clamped to `[0, 1]`.
pub fn normalized_correlation(space: &SpaceSpec, a: &Point, b: &Point) -> Result<f64> {
    Ok(normalized_kernel(space, a, b)?.norm().clamp(0.0, 1.0))
}

/// Ratios `|k_{w_n}(z)| / ||k_{w_n}||` along a sequence.
pub fn boundary_decay_probe(space: &SpaceSpec, sequence: &[Point], z: &Point) -> Result<Vec<f64>> {
    sequence
        .iter()
        .map(|w| {
            if let SpaceSpec::Bargmann = space {
                // |e^{z conj w}| / e^{|w|^2/2} without overflow.
                let (w, z) = (w.scalar().unwrap_or_default(), z.scalar().unwrap_or_default());
                space.check_point(&Point::Scalar(w))?;
                return Ok(((w.conj() * z).re - 0.5 * w.norm_sqr()).exp());
            }
            Ok(kernel_eval(space, w, z)?.norm() / kernel_norm(space, w)?)
        })
        .collect()
}

/// Gram matrix `G[i][j] = <k_{x_j}, k_{x_i}> = k_{x_j}(x_i)`.
pub fn gram_matrix(space: &SpaceSpec, points: &[Point]) -> Result<CMatrix> {
    let n = points.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = kernel_eval(space, &points[j], &points[i])?;
        }
    }
    Ok(g)
}

/// Gram matrix of the normalized kernels `k_x / ||k_x||`.
pub fn normalized_gram_matrix(space: &SpaceSpec, points: &[Point]) -> Result<CMatrix> {
    let n = points.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = c64(1.0, 0.0);
        for j in 0..i {
            let v = normalized_kernel(space, &points[j], &points[i])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// Finite ordered set of distinct points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let points: Vec<Point> = points.iter().map(Point::canonical).collect();
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if points[..i].contains(p) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(Self { points })
    }

    pub fn from_complex(zs: &[C64]) -> Result<Self> {
        Self::new(zs.iter().map(|&z| Point::Scalar(z)).collect())
    }

    /// Validates every point against the space's domain.
    pub fn in_space(space: &SpaceSpec, points: Vec<Point>) -> Result<Self> {
        let set = Self::new(points)?;
        set.check(space)?;
        Ok(set)
    }

    pub fn check(&self, space: &SpaceSpec) -> Result<()> {
        self.points.iter().try_for_each(|p| space.check_point(p))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Scalar coordinates, for disk and plane spaces.
    pub fn scalars(&self) -> Result<Vec<C64>> {
        self.points
            .iter()
            .map(|p| p.scalar().ok_or_else(|| Error::InvalidArgument(format!("{p} is not a scalar point"))))
            .collect()
    }

    /// First common point, if any.
    pub fn intersection(&self, other: &PointSet) -> Option<&Point> {
        self.points.iter().find(|p| other.points.contains(p))
    }

    pub fn ensure_disjoint(&self, other: &PointSet) -> Result<()> {
        match self.intersection(other) {
            Some(p) => Err(Error::SetsIntersect(p.to_string())),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &PointSet) -> Vec<Point> {
        self.points.iter().chain(other.points.iter()).cloned().collect()
    }
}

/// Random point of the space's domain, kept away from the boundary.
pub fn sample_point<R: rand::Rng + ?Sized>(space: &SpaceSpec, rng: &mut R) -> Point {
    let disk = |rng: &mut R, r: f64| {
        let rad = r * rng.random::<f64>().sqrt();
        Point::Scalar(C64::from_polar(rad, rng.random_range(0.0..std::f64::consts::TAU)))
    };
    match space.domain() {
        Domain::Disk(r) => disk(rng, 0.9 * r.min(1.0)),
        Domain::Plane => Point::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)),
        Domain::Ball(n) => {
            let v: Vec<C64> = (0..n)
                .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-12);
            let rad = 0.9 * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
            Point::Vector(v.iter().map(|z| z * (rad / norm)).collect())
        }
        Domain::RealLine => Point::real(rng.random_range(-3.0..3.0)),
    }
}

fn point_distance(p: &Point, q: &Point) -> f64 {
    let (u, v) = (p.coords(), q.coords());
    u.iter()
        .zip(v.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `n` random points, each at distance at least `min_sep` from the others
/// and from every point of `avoid`.
pub fn sample_points<R: rand::Rng + ?Sized>(
    space: &SpaceSpec,
    n: usize,
    min_sep: f64,
    avoid: &[Point],
    rng: &mut R,
) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(n);
    while out.len() < n {
        let p = sample_point(space, rng);
        let far = out
            .iter()
            .chain(avoid.iter())
            .all(|q| point_distance(&p, q) >= min_sep);
        if far {
            out.push(p);
        }
    }
    out
}
