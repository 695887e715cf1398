use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rkgeo::gram::{
    bergman_counterexample_complete, bergman_counterexample_complete_exact, bergman_counterexample_from_coeffs,
    bergman_counterexample_from_coeffs_exact, bergman_counterexample_search, gauss_rat_from_c64, geodesic_verdict,
    GaussRat, VerdictKind,
};
use rkgeo::grassmann::{generic_frame, geodesic_exponent, geodesic_point};
use rkgeo::hardy::{bound_suite, BoundOptions};
use rkgeo::infinite::{
    compactness_diagnostics, guillory_sarason_pair, koosis_zeros, rapid_pairing_factors, winding_index, GridOptions,
    SequenceRule, SequenceSpec,
};
use rkgeo::kernels::sample_points;
use rkgeo::metrics::{metric, MetricKind};
use rkgeo::numerics::{op_norm, RankTolerance, C64};
use rkgeo::{Error, Point, PointSet, SpaceSpec};
use serde::Serialize;

use crate::cli::{
    Cli, Command, CounterexampleMode, Format, InfiniteVerb, Pairing, Preset, SeqArgs, SetArgs,
};
use crate::config::{self, Config, Sets};
use crate::output::{fmt_f64, json};
use crate::repro;

/// Exit 2: the input was rejected. Exit 3: a computation or self-check failed.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfDomain(_)
            | Error::EmptySet
            | Error::DuplicatePoint(_)
            | Error::SetsIntersect(_)
            | Error::CardinalityMismatch { .. }
            | Error::NonFinite
            | Error::TooLarge { .. }
            | Error::SeriesDivergence(_)
            | Error::AlphaDegenerate(_)
            | Error::InvalidArgument(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

/// Text for stdout, plus a failed self-check that turns the exit code to 3
/// after the output is written.
pub struct Outcome {
    pub stdout: String,
    pub failed: Option<String>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, failed: None }
    }
}

pub struct Ctx {
    pub space: SpaceSpec,
    pub tol: RankTolerance,
    pub seed: u64,
    pub format: Option<Format>,
    pub config: Config,
}

impl Ctx {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let config = match &cli.config {
            Some(p) => config::load(p).map_err(Failure::Invalid)?,
            None => Config::default(),
        };
        let space = cli
            .space
            .clone()
            .or_else(|| config.space.clone())
            .unwrap_or_else(|| "hardy".into())
            .parse::<SpaceSpec>()?;
        let tol = match cli.tol.or(config.tol) {
            Some(t) if t > 0.0 && t < 1.0 => RankTolerance::Relative(t),
            Some(t) => return Err(Failure::Invalid(format!("--tol must lie in (0, 1), got {t}"))),
            None => RankTolerance::Standard,
        };
        Ok(Self {
            space,
            tol,
            seed: cli.seed.or(config.seed).unwrap_or(0),
            format: cli.format.or(config.format),
            config,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn json_only(&self, what: &str) -> Result<(), Failure> {
        match self.format {
            Some(Format::Csv) => Err(Failure::Invalid(format!("{what} has no CSV output"))),
            _ => Ok(()),
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx::from_cli(&cli)?;
    match cli.command {
        Command::Verdict(sets) => {
            let fallback = ctx.config.verdict.clone();
            verdict(&ctx, &sets, &fallback)
        }
        Command::Geodesic { sets, t_grid } => {
            let fallback = Sets {
                a: ctx.config.geodesic.a.clone(),
                b: ctx.config.geodesic.b.clone(),
            };
            geodesic(&ctx, &sets, &fallback, t_grid.or(ctx.config.geodesic.t_grid))
        }
        Command::Metric { kind, x, y } => metric_cmd(&ctx, &kind, &x, &y),
        Command::Bounds { sets, truncation } => {
            let fallback = Sets {
                a: ctx.config.bounds.a.clone(),
                b: ctx.config.bounds.b.clone(),
            };
            bounds(&ctx, &sets, &fallback, truncation.or(ctx.config.bounds.truncation))
        }
        Command::Counterexample { mode } => counterexample(&ctx, mode),
        Command::Infinite { verb } => infinite(&ctx, verb),
        Command::Repro { name } => repro::run(name, ctx.seed),
    }
}

pub fn parse_point(s: &str) -> Result<Point, Failure> {
    Ok(s.parse::<Point>()?)
}

pub fn parse_scalar(s: &str) -> Result<C64, Failure> {
    parse_point(s)?
        .scalar()
        .ok_or_else(|| Failure::Invalid(format!("expected a scalar point, got {s:?}")))
}

fn read_literals(path: &Path) -> Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn one_set(
    space: &SpaceSpec,
    flag: &[String],
    file: Option<&Path>,
    fallback: &[String],
    name: &str,
) -> Result<PointSet, Failure> {
    let literals = if !flag.is_empty() {
        flag.to_vec()
    } else if let Some(p) = file {
        read_literals(p)?
    } else if !fallback.is_empty() {
        fallback.to_vec()
    } else {
        return Err(Failure::Invalid(format!("no points given for {name}")));
    };
    let pts = literals.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(PointSet::in_space(space, pts)?)
}

fn point_sets(ctx: &Ctx, args: &SetArgs, fallback: &Sets) -> Result<(PointSet, PointSet), Failure> {
    if let Some(n) = args.random {
        if n == 0 {
            return Err(Failure::Invalid("--random needs at least one point".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let pts = sample_points(&ctx.space, 2 * n, 0.02, &[], &mut rng);
        return Ok((
            PointSet::new(pts[..n].to_vec())?,
            PointSet::new(pts[n..].to_vec())?,
        ));
    }
    let a = one_set(&ctx.space, &args.a, args.a_file.as_deref(), &fallback.a, "A")?;
    let b = one_set(&ctx.space, &args.b, args.b_file.as_deref(), &fallback.b, "B")?;
    a.ensure_disjoint(&b)?;
    Ok((a, b))
}

fn verdict(ctx: &Ctx, args: &SetArgs, fallback: &Sets) -> Result<Outcome, Failure> {
    ctx.json_only("verdict")?;
    let (a, b) = point_sets(ctx, args, fallback)?;
    let v = geodesic_verdict(&ctx.space, &a, &b, ctx.tol)?;
    Ok(Outcome::ok(json(&v)))
}

/// Self-check tolerances for `geodesic`.
const ENDPOINT_TOL: f64 = 1e-8;
const CODIAG_TOL: f64 = 1e-9;
const NORM_SLACK: f64 = 1e-10;

#[derive(Serialize)]
struct GeodesicJson {
    lambdas: Vec<f64>,
    distance: f64,
    residuals: rkgeo::grassmann::ExponentResiduals,
    condition: f64,
}

fn geodesic(ctx: &Ctx, args: &SetArgs, fallback: &Sets, t_grid: Option<usize>) -> Result<Outcome, Failure> {
    let (a, b) = point_sets(ctx, args, fallback)?;
    let v = geodesic_verdict(&ctx.space, &a, &b, ctx.tol)?;
    match v.kind {
        VerdictKind::Unique => {}
        VerdictKind::None => {
            return Err(Failure::Check(format!(
                "verdict None (dims {:?}): no geodesic joins the subspaces",
                v.dims
            )))
        }
        VerdictKind::InfinitelyMany => {
            let inner = generic_frame(&ctx.space, &a, &b).and_then(|f| geodesic_exponent(&f).map(|_| ()));
            let detail = match inner {
                Err(e) => e.to_string(),
                Ok(()) => "the logarithm is not unique".into(),
            };
            return Err(Failure::Check(format!(
                "BranchAmbiguity: verdict InfinitelyMany (dims {:?}); {detail}",
                v.dims
            )));
        }
    }
    let f = generic_frame(&ctx.space, &a, &b)?;
    let x = geodesic_exponent(&f)?;
    let r = x.residuals;
    let mut breaches = Vec::new();
    if r.endpoint > ENDPOINT_TOL {
        breaches.push(format!("endpoint residual {:e} > {ENDPOINT_TOL:e}", r.endpoint));
    }
    if r.codiag_p.max(r.codiag_q) > CODIAG_TOL {
        breaches.push(format!("co-diagonal residual {:e} > {CODIAG_TOL:e}", r.codiag_p.max(r.codiag_q)));
    }
    if x.norm() > std::f64::consts::FRAC_PI_2 + NORM_SLACK {
        breaches.push(format!("norm {} exceeds pi/2", x.norm()));
    }
    let stdout = match (ctx.format_or(Format::Json), t_grid) {
        (Format::Json, _) => json(&GeodesicJson {
            lambdas: x.lambdas.clone(),
            distance: x.norm(),
            residuals: r,
            condition: f.condition,
        }),
        (Format::Csv, grid) => {
            let m = grid.unwrap_or(11);
            if m < 2 {
                return Err(Failure::Invalid("--t-grid needs at least 2 samples".into()));
            }
            let mut out = String::from("t,arc_length,gap_to_p,gap_to_q\n");
            for i in 0..m {
                let t = i as f64 / (m - 1) as f64;
                let d = geodesic_point(&x, &f, t)?;
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(t),
                    fmt_f64(t * x.norm()),
                    fmt_f64(op_norm(&(&d - &f.p))),
                    fmt_f64(op_norm(&(&d - &f.q)))
                );
            }
            out
        }
    };
    Ok(Outcome {
        stdout,
        failed: (!breaches.is_empty()).then(|| breaches.join("; ")),
    })
}

fn metric_cmd(ctx: &Ctx, kind: &str, x: &str, y: &str) -> Result<Outcome, Failure> {
    ctx.json_only("metric")?;
    let kind: MetricKind = kind.parse()?;
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    ctx.space.check_point(&x)?;
    ctx.space.check_point(&y)?;
    let v = metric(kind, &ctx.space, &x, &y)?;
    Ok(Outcome::ok(format!("{}\n", fmt_f64(v))))
}

fn bounds(ctx: &Ctx, args: &SetArgs, fallback: &Sets, truncation: Option<usize>) -> Result<Outcome, Failure> {
    if ctx.space != SpaceSpec::Hardy {
        return Err(Failure::Invalid("bounds is defined for the Hardy space only".into()));
    }
    let (a, b) = point_sets(ctx, args, fallback)?;
    let mut opts = BoundOptions::default();
    if let Some(t) = truncation {
        opts.probe_truncation = t;
    }
    let report = bound_suite(&a, &b, opts)?;
    let failures: Vec<String> = report.failures().iter().map(|r| r.name.clone()).collect();
    let stdout = match ctx.format_or(Format::Csv) {
        Format::Csv => report.csv(),
        Format::Json => json(&report),
    };
    Ok(Outcome {
        stdout,
        failed: (!failures.is_empty()).then(|| format!("asserted bounds failed: {}", failures.join(", "))),
    })
}

/// Largest `s_min / s_max` accepted as a singular cross-Gram.
const SINGULAR_TOL: f64 = 1e-8;

fn exact(zs: &[C64]) -> Result<Vec<GaussRat>, Failure> {
    Ok(zs.iter().map(|&z| gauss_rat_from_c64(z)).collect::<Result<_, _>>()?)
}

fn scalars(lits: &[String]) -> Result<Vec<C64>, Failure> {
    lits.iter().map(|s| parse_scalar(s)).collect()
}

fn counterexample(ctx: &Ctx, mode: CounterexampleMode) -> Result<Outcome, Failure> {
    ctx.json_only("counterexample")?;
    let report = match mode {
        CounterexampleMode::Coeffs { b, c, exact: true } => {
            bergman_counterexample_from_coeffs_exact(&exact(&scalars(&b)?)?, &exact(&scalars(&c)?)?)?
        }
        CounterexampleMode::Coeffs { b, c, exact: false } => {
            bergman_counterexample_from_coeffs(&scalars(&b)?, &scalars(&c)?)?
        }
        CounterexampleMode::Complete { a1, a2, b, exact: ex } => {
            let (a1, a2, b) = (parse_scalar(&a1)?, parse_scalar(&a2)?, scalars(&b)?);
            if ex {
                let pair = exact(&[a1, a2])?;
                bergman_counterexample_complete_exact(&pair[0], &pair[1], &exact(&b)?)?
            } else {
                bergman_counterexample_complete(a1, a2, &b)?
            }
        }
        CounterexampleMode::Search { n, trials } => {
            let found = bergman_counterexample_search(n, ctx.seed, trials)?;
            return Ok(Outcome::ok(json(&found)));
        }
    };
    let failed = (report.relative_smin > SINGULAR_TOL)
        .then(|| format!("cross-Gram not singular: s_min/s_max = {:e}", report.relative_smin));
    Ok(Outcome {
        stdout: json(&report),
        failed,
    })
}

fn sequence(ctx: &Ctx, seq: &SeqArgs) -> Result<SequenceSpec, Failure> {
    let cfg = &ctx.config.infinite;
    let preset = seq.preset.or(cfg.preset).unwrap_or(Preset::Geometric);
    let k = seq.k.or(cfg.k).unwrap_or(20);
    let spec = match preset {
        Preset::Geometric => SequenceSpec {
            rule: SequenceRule::Geometric {
                ratio: seq.ratio.or(cfg.ratio).unwrap_or(0.5),
            },
            truncation: k,
        },
        Preset::HarmonicShifted => SequenceSpec::harmonic_shifted(seq.shift.or(cfg.shift).unwrap_or(1.0), k),
        Preset::File => {
            let path = seq
                .path
                .clone()
                .or_else(|| cfg.path.clone())
                .ok_or_else(|| Failure::Invalid("the file preset needs --path".into()))?;
            let pts = scalars(&read_literals(&path)?)?;
            let mut spec = SequenceSpec::list(pts);
            if let Some(k) = seq.k.or(cfg.k) {
                spec.truncation = k.min(spec.truncation);
            }
            spec
        }
    };
    spec.points()?;
    Ok(spec)
}

fn infinite(ctx: &Ctx, verb: InfiniteVerb) -> Result<Outcome, Failure> {
    match verb {
        InfiniteVerb::GsPair {
            seq,
            grid_initial,
            grid_max,
        } => {
            ctx.json_only("infinite gs-pair")?;
            let mut opts = GridOptions::default();
            opts.initial = grid_initial.unwrap_or(opts.initial);
            opts.max_points = grid_max.unwrap_or(opts.max_points);
            let pair = guillory_sarason_pair(&sequence(ctx, &seq)?, opts)?;
            Ok(Outcome::ok(json(&pair.rows)))
        }
        InfiniteVerb::Koosis { a, gamma, k_min, k_max } => {
            let zeros = koosis_zeros(a, parse_scalar(&gamma)?, k_min..=k_max)?;
            let stdout = match ctx.format_or(Format::Json) {
                Format::Json => json(&zeros),
                Format::Csv => {
                    let mut out = String::from("k,re,im,residual\n");
                    for z in &zeros {
                        let _ = writeln!(
                            out,
                            "{},{},{},{}",
                            z.k,
                            fmt_f64(z.z.re),
                            fmt_f64(z.z.im),
                            fmt_f64(z.residual)
                        );
                    }
                    out
                }
            };
            Ok(Outcome::ok(stdout))
        }
        InfiniteVerb::Index {
            seq,
            radii,
            append,
            samples,
        } => {
            ctx.json_only("infinite index")?;
            let pair = guillory_sarason_pair(&sequence(ctx, &seq)?, GridOptions::default())?;
            let mut b = pair.b.clone();
            b.extend(scalars(&append)?);
            let report = winding_index(&PointSet::from_complex(&pair.a)?, &PointSet::from_complex(&b)?, &radii, samples)?;
            Ok(Outcome::ok(json(&report)))
        }
        InfiniteVerb::Compactness { seq, p, pairing } => {
            ctx.json_only("infinite compactness")?;
            let spec = sequence(ctx, &seq)?;
            match pairing {
                Pairing::Gs => {
                    let pair = guillory_sarason_pair(&spec, GridOptions::default())?;
                    let report =
                        compactness_diagnostics(&PointSet::from_complex(&pair.a)?, &PointSet::from_complex(&pair.b)?, &p)?;
                    Ok(Outcome::ok(json(&report)))
                }
                Pairing::Rapid => Ok(Outcome::ok(json(&rapid_pairing_factors(&spec.points()?)?))),
            }
        }
    }
}
