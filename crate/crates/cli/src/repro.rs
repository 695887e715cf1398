use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rkgeo::gram::{
    bergman_counterexample_complete_exact, bergman_counterexample_from_coeffs_exact, example_a1_a2, example_b_points,
    example_coefficients, EXAMPLE_ROOTS,
};
use rkgeo::hardy::{bound_suite, hankel_norm_probe, BoundOptions};
use rkgeo::infinite::{guillory_sarason_pair, koosis_zeros, winding_index, GridOptions, SequenceSpec};
use rkgeo::kernels::sample_points;
use rkgeo::numerics::{c64, C64};
use rkgeo::{PointSet, SpaceSpec};
use serde::Serialize;

use crate::cli::ReproName;
use crate::commands::{Failure, Outcome};
use crate::output::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
enum Status {
    Pass,
    Fail,
    Diagnostic,
}

#[derive(Serialize)]
struct Check {
    check: String,
    status: Status,
    value: f64,
    /// Tolerance, bound or reference value the check compares against.
    reference: f64,
}

#[derive(Serialize)]
struct Report {
    repro: &'static str,
    diagnostic: bool,
    checks: Vec<Check>,
}

fn le(check: impl Into<String>, value: f64, bound: f64) -> Check {
    Check {
        check: check.into(),
        status: if value <= bound { Status::Pass } else { Status::Fail },
        value,
        reference: bound,
    }
}

fn flag(check: impl Into<String>, ok: bool) -> Check {
    Check {
        check: check.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        value: ok as u8 as f64,
        reference: 1.0,
    }
}

pub fn run(name: ReproName, seed: u64) -> Result<Outcome, Failure> {
    let (repro, checks) = match name {
        ReproName::BergmanRoots => ("bergman-roots", bergman_roots()?),
        ReproName::Weyl => ("weyl", weyl(seed)?),
        ReproName::GsPair => ("gs-pair", gs_pair()?),
        ReproName::Koosis => ("koosis", koosis()?),
        ReproName::HankelProbe => ("hankel-probe", hankel_probe()?),
    };
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.check.as_str())
        .collect();
    let failed = (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", ")));
    let report = Report {
        repro,
        diagnostic: checks.iter().any(|c| c.status == Status::Diagnostic),
        checks,
    };
    Ok(Outcome {
        stdout: json(&report),
        failed,
    })
}

fn bergman_roots() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let rep = bergman_counterexample_from_coeffs_exact(&example_b_points(), &example_coefficients())?;
    for (re, im) in EXAMPLE_ROOTS {
        let err = rep
            .a
            .iter()
            .map(|w| (w.re - re).abs().max((w.im - im).abs()))
            .fold(f64::INFINITY, f64::min);
        out.push(le(format!("root near {re}{im:+}i"), err, 1e-5));
    }
    out.push(le("coefficients: s_min/s_max", rep.relative_smin, 1e-8));
    let (a1, a2) = example_a1_a2();
    let rep = bergman_counterexample_complete_exact(&a1, &a2, &example_b_points())?;
    out.push(le(
        "completion: deflation remainder",
        rep.deflation_remainder.unwrap_or(f64::INFINITY),
        0.0,
    ));
    out.push(le("completion: s_min/s_max", rep.relative_smin, 1e-8));
    Ok(out)
}

fn weyl(seed: u64) -> Result<Vec<Check>, Failure> {
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&SpaceSpec::Hardy, 2 * n, 0.02, &[], &mut rng);
    let a = PointSet::new(pts[..n].to_vec())?;
    let b = PointSet::new(pts[n..].to_vec())?;
    let report = bound_suite(&a, &b, BoundOptions::default())?;
    Ok(report
        .rows
        .iter()
        .filter(|r| r.name.starts_with("weyl") || r.name == "smallest_singular_value" || r.name == "norm_lower")
        .map(|r| Check {
            check: r.name.clone(),
            status: if r.holds { Status::Pass } else { Status::Fail },
            value: r.lhs,
            reference: r.rhs,
        })
        .collect())
}

fn gs_pair() -> Result<Vec<Check>, Failure> {
    let pair = guillory_sarason_pair(&SequenceSpec::geometric(20), GridOptions::default())?;
    let mut out: Vec<Check> = pair
        .rows
        .iter()
        .map(|r| le(format!("sup estimate k={}", r.k), r.est, r.target))
        .collect();
    let a = PointSet::from_complex(&pair.a)?;
    let b = PointSet::from_complex(&pair.b)?;
    let equal = winding_index(&a, &b, &[0.999], 256)?;
    out.push(flag("index 0 at r=0.999", equal.index == Some(0)));
    let mut extra = pair.b.clone();
    extra.extend([c64(0.1, 0.2), c64(-0.4, 0.0), c64(0.0, -0.5)]);
    let appended = winding_index(&a, &PointSet::from_complex(&extra)?, &[0.999], 256)?;
    out.push(flag("index 3 after appending 3 zeros", appended.index == Some(3)));
    Ok(out)
}

fn koosis() -> Result<Vec<Check>, Failure> {
    let zeros = koosis_zeros(1.0, C64::from_polar(0.5, std::f64::consts::FRAC_PI_4), -30..=30)?;
    let worst = zeros.iter().map(|z| z.residual).fold(0.0, f64::max);
    let radius = zeros.iter().map(|z| z.z.norm()).fold(0.0, f64::max);
    Ok(vec![
        le("max residual |psi(z_k) - gamma|", worst, 1e-10),
        Check {
            check: "max |z_k|".into(),
            status: if radius < 1.0 { Status::Pass } else { Status::Fail },
            value: radius,
            reference: 1.0,
        },
    ])
}

fn hankel_probe() -> Result<Vec<Check>, Failure> {
    let n = 2048;
    let at_zero = hankel_norm_probe(c64(0.0, 0.0), n)?;
    let mut out = vec![flag("a=0: truncated norm equals 1", at_zero == 1.0)];
    for a in [0.5, 0.9] {
        let v = hankel_norm_probe(c64(a, 0.0), n)?;
        let oracle = 1.0 / (1.0 - a * a);
        out.push(le(format!("a={a}: gap to 1/(1-|a|^2)"), (v - oracle).abs(), 1e-6));
        out.push(Check {
            check: format!("a={a}: probe value against the stated value 1"),
            status: Status::Diagnostic,
            value: v,
            reference: 1.0,
        });
    }
    Ok(out)
}
