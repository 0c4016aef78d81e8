//! Run configuration: command-line flags layered over an optional JSON file,
//! validated before any command runs.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use cmap_core::quatarith::{c_compatible, CompatibleC, QuatParams};
use cmap_core::ModelParams;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_N: usize = 8;
pub const MAX_BOUND: i64 = 50;
pub const MAX_POINTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Positive,
    Zero,
}

/// Flags shared by every subcommand. Every field is optional so that values
/// from `--config` can fill the gaps.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RawConfig {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Complex dimension n.
    #[arg(long)]
    pub n: Option<usize>,

    /// Deformation parameter c ≥ 0.
    #[arg(long, conflicts_with = "c_exact")]
    pub c: Option<f64>,

    /// Exact parameter as λ:a:b, giving c = λ√(ab)/8π.
    #[arg(long, value_name = "λ:a:b")]
    pub c_exact: Option<String>,

    /// Seed for point sampling.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Number of sampled points.
    #[arg(long)]
    pub points: Option<usize>,

    /// Finite-difference step.
    #[arg(long)]
    pub step: Option<f64>,

    /// Coordinate bound for the norm-one enumeration.
    #[arg(long)]
    pub bound: Option<i64>,

    /// Output path; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Quaternion algebra parameter a.
    #[arg(long)]
    pub a: Option<i64>,

    /// Quaternion algebra parameter b.
    #[arg(long)]
    pub b: Option<i64>,

    /// Comma-separated list of ρ₀ values.
    #[arg(long, value_name = "LIST")]
    pub rho_grid: Option<String>,

    /// Volume V_D of the base domain.
    #[arg(long)]
    pub vd: Option<f64>,

    /// Value of c assumed by the center computation.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
}

impl RawConfig {
    fn or(self, file: RawConfig) -> RawConfig {
        RawConfig {
            config: self.config,
            n: self.n.or(file.n),
            c: self.c.or(file.c),
            c_exact: self.c_exact.or(file.c_exact),
            seed: self.seed.or(file.seed),
            points: self.points.or(file.points),
            step: self.step.or(file.step),
            bound: self.bound.or(file.bound),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            a: self.a.or(file.a),
            b: self.b.or(file.b),
            rho_grid: self.rho_grid.or(file.rho_grid),
            vd: self.vd.or(file.vd),
            branch: self.branch.or(file.branch),
        }
    }

    /// Merges the config file, if any, under the flags.
    pub fn load(self) -> Result<RawConfig> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config_file(&path)?;
        if self.c.is_some() && file.c_exact.is_some() || self.c_exact.is_some() && file.c.is_some() {
            bail!("c and c-exact are mutually exclusive");
        }
        Ok(self.or(file))
    }
}

fn read_config_file(path: &Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let file: RawConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    if file.c.is_some() && file.c_exact.is_some() {
        bail!("config {}: c and c-exact are mutually exclusive", path.display());
    }
    Ok(file)
}

/// Validated configuration handed to the commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: ModelParams,
    pub c_exact: Option<CompatibleC>,
    pub seed: u64,
    pub points: usize,
    pub step: f64,
    pub bound: i64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub a: i64,
    pub b: i64,
    pub rho_grid: Vec<f64>,
    pub vd: f64,
    pub branch: BranchArg,
}

pub struct Defaults {
    pub n: usize,
    pub c: f64,
    pub points: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(raw: RawConfig, d: Defaults) -> Result<RunConfig> {
        let n = raw.n.unwrap_or(d.n);
        if !(1..=MAX_N).contains(&n) {
            bail!("n must be between 1 and {MAX_N}, got {n}");
        }
        let (c, c_exact) = match (&raw.c_exact, raw.c) {
            (Some(text), _) => {
                let compat = parse_c_exact(text)?;
                (compat.c, Some(compat))
            }
            (None, Some(c)) => (c, None),
            (None, None) => (d.c, None),
        };
        if !(c.is_finite() && c >= 0.0) {
            bail!("c must be finite and >= 0, got {c}");
        }
        let points = raw.points.unwrap_or(d.points);
        if points == 0 || points > MAX_POINTS {
            bail!("points must be between 1 and {MAX_POINTS}, got {points}");
        }
        let step = raw.step.unwrap_or(DEFAULT_STEP);
        if !(step.is_finite() && step > 0.0 && step <= 0.05) {
            bail!("step must lie in (0, 0.05], got {step}");
        }
        let bound = raw.bound.unwrap_or(3);
        if !(0..=MAX_BOUND).contains(&bound) {
            bail!("bound must be between 0 and {MAX_BOUND}, got {bound}");
        }
        let a = raw.a.unwrap_or(2);
        let b = raw.b.unwrap_or(3);
        if a <= 0 || b <= 0 {
            bail!("a and b must be positive, got a = {a}, b = {b}");
        }
        let rho_grid = match &raw.rho_grid {
            Some(s) => parse_grid(s)?,
            None => vec![1.0, 2.0, 4.0, 8.0, 16.0, 100.0, 1000.0],
        };
        let vd = raw.vd.unwrap_or(1.0);
        if !(vd.is_finite() && vd > 0.0) {
            bail!("vd must be positive and finite, got {vd}");
        }
        Ok(RunConfig {
            params: ModelParams::new(n, c)?,
            c_exact,
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
            points,
            step,
            bound,
            out: raw.out,
            format: raw.format.unwrap_or(d.format),
            a,
            b,
            rho_grid,
            vd,
            branch: raw.branch.unwrap_or(BranchArg::Positive),
        })
    }
}

/// `λ:a:b` with `λ` an integer or `p/q`.
pub fn parse_c_exact(s: &str) -> Result<CompatibleC> {
    let parts: Vec<&str> = s.split(':').collect();
    let [l, a, b] = parts.as_slice() else {
        bail!("c-exact must have the form λ:a:b, got {s:?}");
    };
    let lambda = Rational64::from_str(l.trim()).map_err(|_| anyhow::anyhow!("invalid λ {l:?} in c-exact"))?;
    let a: i64 = a.trim().parse().with_context(|| format!("invalid a {a:?} in c-exact"))?;
    let b: i64 = b.trim().parse().with_context(|| format!("invalid b {b:?} in c-exact"))?;
    Ok(c_compatible(QuatParams::new(a, b)?, lambda)?)
}

pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let grid = s
        .split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().with_context(|| format!("invalid rho value {t:?}"))?;
            if !(v.is_finite() && v > 0.0) {
                bail!("rho values must be positive and finite, got {v}");
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    if grid.is_empty() {
        bail!("rho grid is empty");
    }
    Ok(grid)
}
