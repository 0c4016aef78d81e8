//! Subcommand bodies. Each returns a [`Report`] whose text is fully
//! determined by the [`RunConfig`].

use anyhow::Result;
use serde::Serialize;

use cmap_core::exact::{crat, rint};
use cmap_core::fields::{real_catalogue, CoordinateField, KillingContext, RealVectorField};
use cmap_core::geometry::{chart, einstein_check};
use cmap_core::liealg::center::{
    f_generator, fprime_generator, ker_cap_su, kernel_from_action, kernel_generators, kernel_generators_n1, Branch,
    CenterVector,
};
use cmap_core::liealg::{structure_check, structure_check_with, AlphaMap};
use cmap_core::quatarith::{is_nonresidue, norm_one_rows, CompatibleC, QuatParams};
use cmap_core::volume::{volume_table, VolumeRow};
use cmap_core::sample;

use crate::config::{BranchArg, Format, RunConfig};

/// Tolerance on `max|L_F g| / ‖g‖∞`.
pub const KILLING_TOL: f64 = 1e-6;
/// Tolerance on `max|Ric − λg| / ‖g‖∞`.
pub const EINSTEIN_TOL: f64 = 1e-4;
/// Tolerance on the relative spread of λ across points.
pub const LAMBDA_SPREAD_TOL: f64 = 1e-3;
/// Tolerance on `|quadrature − closed| / closed`.
pub const VOLUME_TOL: f64 = 1e-8;

pub const CONTROL_LABEL: &str = "control:drho";

pub struct Report {
    pub pass: bool,
    pub text: String,
    pub warnings: Vec<String>,
}

fn render<J: Serialize, R: Serialize>(format: Format, json: &J, rows: &[R]) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

#[derive(Serialize)]
struct ParamsJson<'a> {
    n: usize,
    c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_exact: Option<&'a CompatibleC>,
}

fn params_json(cfg: &RunConfig) -> ParamsJson<'_> {
    ParamsJson { n: cfg.params.n, c: cfg.params.c, c_exact: cfg.c_exact.as_ref() }
}

#[derive(Serialize)]
struct KillingRow {
    generator: String,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct KillingJson<'a> {
    params: ParamsJson<'a>,
    seed: u64,
    points: usize,
    step: f64,
    results: &'a [KillingRow],
    pass: bool,
}

pub fn verify_killing(cfg: &RunConfig, inject_control: bool) -> Result<Report> {
    let n = cfg.params.n;
    let mut fields: Vec<(String, Box<dyn RealVectorField>)> = Vec::new();
    for (label, f) in real_catalogue(n) {
        fields.push((label, Box::new(f.compile_real()?)));
    }
    if inject_control {
        fields.push((CONTROL_LABEL.to_string(), Box::new(CoordinateField(chart::RHO))));
    }
    let mut worst = vec![0.0f64; fields.len()];
    for p in sample::points(cfg.seed, n, cfg.points) {
        let ctx = KillingContext::new(&p, &cfg.params, cfg.step)?;
        for (w, (_, f)) in worst.iter_mut().zip(&fields) {
            *w = w.max(ctx.relative_residual(f.as_ref()));
        }
    }
    let rows: Vec<KillingRow> = fields
        .iter()
        .zip(&worst)
        .map(|((label, _), &r)| KillingRow {
            generator: label.clone(),
            max_residual: r,
            tolerance: KILLING_TOL,
            pass: r <= KILLING_TOL,
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    let json = KillingJson {
        params: params_json(cfg),
        seed: cfg.seed,
        points: cfg.points,
        step: cfg.step,
        results: &rows,
        pass,
    };
    Ok(Report { pass, text: render(cfg.format, &json, &rows)?, warnings: Vec::new() })
}

#[derive(Serialize)]
struct StructureRow {
    n: usize,
    basis_size: usize,
    pairs_checked: usize,
    mismatch_count: usize,
    tolerance: &'static str,
    pass: bool,
}

#[derive(Serialize)]
struct StructureJson<'a> {
    #[serde(flatten)]
    summary: &'a StructureRow,
    mismatches: &'a [(String, String)],
}

pub fn structure(cfg: &RunConfig, inject_fault: bool) -> Result<Report> {
    let n = cfg.params.n;
    let report = if inject_fault {
        structure_check_with(&AlphaMap::with_t_scale(n, crat(rint(2), rint(0))))
    } else {
        structure_check(n)?
    };
    let row = StructureRow {
        n,
        basis_size: report.basis_size,
        pairs_checked: report.pairs_checked,
        mismatch_count: report.mismatches.len(),
        tolerance: "exact",
        pass: report.passed(),
    };
    let json = StructureJson { summary: &row, mismatches: &report.mismatches };
    Ok(Report { pass: row.pass, text: render(cfg.format, &json, &[&row])?, warnings: Vec::new() })
}

#[derive(Serialize)]
struct CenterRow {
    name: String,
    two_pi_r: String,
    two_pi_z: String,
    four_pi_c: String,
    pretty: String,
}

impl CenterRow {
    fn new(name: &str, v: Option<&CenterVector>) -> Self {
        match v {
            Some(v) => CenterRow {
                name: name.into(),
                two_pi_r: cmap_core::exact::fmt_rat(&v.u),
                two_pi_z: v.m.to_string(),
                four_pi_c: cmap_core::exact::fmt_rat(&v.z),
                pretty: v.pretty(),
            },
            None => CenterRow {
                name: name.into(),
                two_pi_r: String::new(),
                two_pi_z: String::new(),
                four_pi_c: String::new(),
                pretty: "trivial".into(),
            },
        }
    }
}

#[derive(Serialize)]
struct CenterJson {
    n: usize,
    branch: BranchArg,
    units: &'static str,
    kernel: Vec<CenterVector>,
    kernel_pretty: Vec<String>,
    kernel_from_action: Vec<String>,
    ker_cap_su: Option<String>,
    #[serde(rename = "F")]
    f: String,
    #[serde(rename = "Fprime")]
    fprime: Option<String>,
    tolerance: &'static str,
}

fn pretty_or_trivial(v: &Option<CenterVector>) -> String {
    v.as_ref().map(|v| v.pretty()).unwrap_or_else(|| "trivial".into())
}

pub fn center(cfg: &RunConfig) -> Result<Report> {
    let n = cfg.params.n;
    let branch = match cfg.branch {
        BranchArg::Positive => Branch::Positive,
        BranchArg::Zero => Branch::Zero,
    };
    let kernel: Vec<CenterVector> = if n == 1 { vec![kernel_generators_n1()] } else { kernel_generators(n)?.to_vec() };
    let f = f_generator(n, branch)?;
    let fprime = if n >= 2 { Some(fprime_generator(n, branch)?) } else { None };
    let cap = if n >= 2 && branch == Branch::Positive { Some(ker_cap_su(n)?) } else { None };
    let mut rows: Vec<CenterRow> =
        kernel.iter().enumerate().map(|(i, v)| CenterRow::new(&format!("kernel{i}"), Some(v))).collect();
    if let Some(v) = &cap {
        rows.push(CenterRow::new("ker_cap_su", Some(v)));
    }
    rows.push(CenterRow::new("F", f.as_ref()));
    if let Some(fp) = &fprime {
        rows.push(CenterRow::new("Fprime", fp.as_ref()));
    }
    let json = CenterJson {
        n,
        branch: cfg.branch,
        units: "(2πℝ, 2πℤ, 4πcℝ)",
        kernel_pretty: kernel.iter().map(|v| v.pretty()).collect(),
        kernel,
        kernel_from_action: kernel_from_action(n)?.iter().map(|v| v.pretty()).collect(),
        ker_cap_su: cap.as_ref().map(|v| v.pretty()),
        f: pretty_or_trivial(&f),
        fprime: fprime.as_ref().map(pretty_or_trivial),
        tolerance: "exact",
    };
    Ok(Report { pass: true, text: render(cfg.format, &json, &rows)?, warnings: Vec::new() })
}

#[derive(Serialize)]
struct CurvatureRow {
    point: usize,
    rho: f64,
    lambda: f64,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct CurvatureJson<'a> {
    params: ParamsJson<'a>,
    seed: u64,
    points: usize,
    step: f64,
    rows: &'a [CurvatureRow],
    lambda_spread: f64,
    lambda_spread_tolerance: f64,
    pass: bool,
}

pub fn curvature(cfg: &RunConfig) -> Result<Report> {
    let mut rows = Vec::new();
    for (i, p) in sample::points(cfg.seed, cfg.params.n, cfg.points).iter().enumerate() {
        let e = einstein_check(p, &cfg.params, cfg.step)?;
        rows.push(CurvatureRow {
            point: i,
            rho: p.rho,
            lambda: e.lambda,
            residual: e.relative_residual,
            tolerance: EINSTEIN_TOL,
            pass: e.relative_residual <= EINSTEIN_TOL && e.lambda < 0.0,
        });
    }
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.lambda), hi.max(r.lambda)));
    let spread = (hi - lo) / lo.abs().max(hi.abs());
    let pass = rows.iter().all(|r| r.pass) && spread <= LAMBDA_SPREAD_TOL;
    let json = CurvatureJson {
        params: params_json(cfg),
        seed: cfg.seed,
        points: cfg.points,
        step: cfg.step,
        rows: &rows,
        lambda_spread: spread,
        lambda_spread_tolerance: LAMBDA_SPREAD_TOL,
        pass,
    };
    Ok(Report { pass, text: render(cfg.format, &json, &rows)?, warnings: Vec::new() })
}

#[derive(Serialize)]
struct LatticeJson<'a> {
    a: i64,
    b: i64,
    bound: i64,
    is_nonresidue: Option<bool>,
    count: usize,
    tolerance: &'static str,
    rows: &'a [cmap_core::quatarith::NormOneRow],
    pass: bool,
}

pub fn lattice(cfg: &RunConfig) -> Result<Report> {
    let params = QuatParams::new(cfg.a, cfg.b)?;
    let mut warnings = Vec::new();
    let nonresidue = match is_nonresidue(cfg.a, cfg.b) {
        Ok(true) => Some(true),
        Ok(false) => {
            warnings.push(format!(
                "is_nonresidue=false: {} is a square mod {} (division-algebra hypothesis unmet)",
                cfg.a, cfg.b
            ));
            Some(false)
        }
        Err(e) => {
            warnings.push(format!("is_nonresidue undefined: {e} (division-algebra hypothesis unmet)"));
            None
        }
    };
    let rows = norm_one_rows(params, cfg.bound)?;
    let pass = rows.iter().all(|r| r.su11_ok && r.preserves_gamma2);
    let json = LatticeJson {
        a: cfg.a,
        b: cfg.b,
        bound: cfg.bound,
        is_nonresidue: nonresidue,
        count: rows.len(),
        tolerance: "exact",
        rows: &rows,
        pass,
    };
    Ok(Report { pass, text: render(cfg.format, &json, &rows)?, warnings })
}

#[derive(Serialize)]
struct VolumeJson<'a> {
    params: ParamsJson<'a>,
    vd: f64,
    tolerance: f64,
    max_relative_error: f64,
    rows: &'a [VolumeRow],
    pass: bool,
}

pub fn volume(cfg: &RunConfig) -> Result<Report> {
    let rows = volume_table(&cfg.rho_grid, &cfg.params, cfg.vd)?;
    let max_err = rows
        .iter()
        .map(|r| (r.quadrature_tail - r.closed_tail).abs() / r.closed_tail.abs())
        .fold(0.0f64, f64::max);
    let pass = max_err <= VOLUME_TOL;
    let json = VolumeJson {
        params: params_json(cfg),
        vd: cfg.vd,
        tolerance: VOLUME_TOL,
        max_relative_error: max_err,
        rows: &rows,
        pass,
    };
    Ok(Report { pass, text: render(cfg.format, &json, &rows)?, warnings: Vec::new() })
}
