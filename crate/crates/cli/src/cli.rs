use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rkgeo", version, about = "Grassmann geodesics between zero-set subspaces of kernel spaces")]
pub struct Cli {
    /// Space: hardy, bergman, bargmann, sobolev, drury-arveson:N,
    /// weighted-hardy:p=E[,s=S][,R=R], weighted-hardy:factorial,
    /// shift-invariant:re,im;re,im;...
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Relative rank tolerance (default: max(m,n)·eps·s_max).
    #[arg(long, global = true, value_parser = trimmed::<f64>)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with global keys and per-command sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Point sets as `re,im` literals, files with one literal per line, or a
/// seeded random draw.
#[derive(Args, Debug, Default, Clone)]
pub struct SetArgs {
    #[arg(long, num_args = 1..)]
    pub a: Vec<String>,
    #[arg(long, num_args = 1..)]
    pub b: Vec<String>,
    #[arg(long)]
    pub a_file: Option<PathBuf>,
    #[arg(long)]
    pub b_file: Option<PathBuf>,
    /// Draw two disjoint random sets of this size from the space's domain.
    #[arg(long, conflicts_with_all = ["a", "b", "a_file", "b_file"])]
    pub random: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a unique geodesic joins the two zero-set subspaces.
    Verdict(SetArgs),
    /// Compute the geodesic exponent and check it.
    Geodesic {
        #[command(flatten)]
        sets: SetArgs,
        /// Number of t samples in [0, 1] for the CSV curve.
        #[arg(long)]
        t_grid: Option<usize>,
    },
    /// Distance between two points.
    Metric {
        #[arg(long, default_value = "gamma")]
        kind: String,
        x: String,
        y: String,
    },
    /// Hardy bound table (CSV unless --format json).
    Bounds {
        #[command(flatten)]
        sets: SetArgs,
        /// Truncation for the Hankel norm probe rows.
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Bergman points with a singular cross-Gram.
    Counterexample {
        #[command(subcommand)]
        mode: CounterexampleMode,
    },
    /// Truncated diagnostics for infinite zero sequences.
    Infinite {
        #[command(subcommand)]
        verb: InfiniteVerb,
    },
    /// Canned reproductions with pass/fail per check.
    Repro {
        #[arg(value_enum)]
        name: ReproName,
    },
}

#[derive(Subcommand, Debug)]
pub enum CounterexampleMode {
    /// Zeros of `sum c_j k_{b_j}` inside the disk.
    Coeffs {
        #[arg(long, num_args = 1..)]
        b: Vec<String>,
        #[arg(long, num_args = 1..)]
        c: Vec<String>,
        /// Expand the numerator in exact rationals (inputs are read as the
        /// exact binary values of the parsed doubles).
        #[arg(long)]
        exact: bool,
    },
    /// Complete two given points to a singular triple.
    Complete {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        #[arg(long, num_args = 3)]
        b: Vec<String>,
        #[arg(long)]
        exact: bool,
    },
    /// Seeded random search for `n` points.
    Search {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Geometric,
    HarmonicShifted,
    File,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SeqArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Truncation length.
    #[arg(long)]
    pub k: Option<usize>,
    /// Geometric ratio `r` in `a_k = 1 - r^k`.
    #[arg(long, value_parser = trimmed::<f64>)]
    pub ratio: Option<f64>,
    /// Shift `s` in `a_k = 1 - 1/(k + s)`.
    #[arg(long, value_parser = trimmed::<f64>)]
    pub shift: Option<f64>,
    /// Point file for the `file` preset.
    #[arg(long)]
    pub path: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum InfiniteVerb {
    /// Perturbed partner sequence with boundary sup-norm estimates.
    GsPair {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        grid_initial: Option<usize>,
        #[arg(long)]
        grid_max: Option<usize>,
    },
    /// Zeros of `exp(a(z+1)/(z-1)) - gamma`.
    Koosis {
        #[arg(long, value_parser = trimmed::<f64>)]
        a: f64,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = -30, value_parser = trimmed::<i64>)]
        k_min: i64,
        #[arg(long, default_value_t = 30, value_parser = trimmed::<i64>)]
        k_max: i64,
    },
    /// Winding of `B_B / B_A` on circles, with the partner sequence as `B`.
    Index {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, num_args = 1.., default_values_t = [0.99, 0.999], value_parser = trimmed::<f64>)]
        radii: Vec<f64>,
        /// Extra zeros appended to `B`.
        #[arg(long, num_args = 1..)]
        append: Vec<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// `|B_A(b_j)|`, their p-sums and the truncated Carleson constant.
    Compactness {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, num_args = 1.., default_values_t = [1.0, 2.0], value_parser = trimmed::<f64>)]
        p: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Pairing::Gs)]
        pairing: Pairing,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// The perturbed partner from `gs-pair`.
    Gs,
    /// `a_n = f(|b_n|) b_n` with `f(t) = 1 - exp(-1/(t-1)^2)`, reported in log form.
    Rapid,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproName {
    #[value(name = "bergman-roots", alias = "example-2-7")]
    BergmanRoots,
    Weyl,
    GsPair,
    Koosis,
    HankelProbe,
}

/// Point literals such as `-0.3,0.1` would otherwise be read as flags.
/// A leading space keeps them values; the point parser and [`trimmed`]
/// strip it.
pub fn protect_negative_literals<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    args.into_iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some('-'), Some(c)) if (c.is_ascii_digit() || c == '.') => format!(" {s}"),
                _ => s,
            }
        })
        .collect()
}

pub fn trimmed<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e: T::Err| e.to_string())
}
