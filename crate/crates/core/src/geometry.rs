//! The Bergman metric on the unit ball, the deformed c-map metric g^c on
//! N̄ₙ in global coordinates (X, w, φ̃, ρ), its Gram determinant, the fiber
//! density split and a finite-difference Ricci tensor.
//!
//! Real chart order: `[ρ, x¹, y¹, …, x^{n−1}, y^{n−1}, u⁰, v⁰, …, u^{n−1}, v^{n−1}, φ̃]`
//! with `X^a = x^a + i y^a` and `w^k = u^k + i v^k`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub c: f64,
}

impl ModelParams {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        let p = ModelParams { n, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParams(format!("n must be >= 1, got {}", self.n)));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParams(format!("c must be finite and >= 0, got {}", self.c)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }
}

/// Index helpers for the real chart.
pub mod chart {
    pub const RHO: usize = 0;

    pub fn dim(n: usize) -> usize {
        4 * n
    }
    /// Real part of `X^a`, `a ∈ 1..n`.
    pub fn x(a: usize) -> usize {
        2 * a - 1
    }
    pub fn y(a: usize) -> usize {
        2 * a
    }
    pub fn u(n: usize, k: usize) -> usize {
        2 * n - 1 + 2 * k
    }
    pub fn v(n: usize, k: usize) -> usize {
        2 * n + 2 * k
    }
    pub fn phi(n: usize) -> usize {
        4 * n - 1
    }

    pub fn labels(n: usize) -> Vec<String> {
        let mut out = vec!["rho".to_string()];
        for a in 1..n {
            out.push(format!("x{a}"));
            out.push(format!("y{a}"));
        }
        for k in 0..n {
            out.push(format!("u{k}"));
            out.push(format!("v{k}"));
        }
        out.push("phi".to_string());
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointBarN {
    pub x: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub phi: f64,
    pub rho: f64,
}

impl PointBarN {
    pub fn new(x: Vec<Complex64>, w: Vec<Complex64>, phi: f64, rho: f64) -> Result<Self> {
        let p = PointBarN { x, w, phi, rho };
        p.check()?;
        Ok(p)
    }

    /// The base point `X = 0, w = 0, φ̃ = 0` at height `rho`.
    pub fn base(n: usize, rho: f64) -> Self {
        PointBarN {
            x: vec![Complex64::new(0.0, 0.0); n - 1],
            w: vec![Complex64::new(0.0, 0.0); n],
            phi: 0.0,
            rho,
        }
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn x_norm_sqr(&self) -> f64 {
        self.x.iter().map(|z| z.norm_sqr()).sum()
    }

    fn check(&self) -> Result<()> {
        if self.w.is_empty() {
            return Err(Error::InvalidParams("w must have length n >= 1".into()));
        }
        if self.x.len() + 1 != self.w.len() {
            return Err(Error::DimensionMismatch { expected: self.w.len() - 1, got: self.x.len() });
        }
        let r2 = self.x_norm_sqr();
        if !(r2 < 1.0) {
            return Err(Error::OutsideBall(r2.sqrt()));
        }
        if !(self.rho > 0.0) {
            return Err(Error::NonPositiveRho(self.rho));
        }
        Ok(())
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        params.validate()?;
        if self.n() != params.n {
            return Err(Error::DimensionMismatch { expected: params.n, got: self.n() });
        }
        self.check()
    }

    pub fn to_chart(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; chart::dim(n)];
        out[chart::RHO] = self.rho;
        for (i, z) in self.x.iter().enumerate() {
            out[chart::x(i + 1)] = z.re;
            out[chart::y(i + 1)] = z.im;
        }
        for (k, z) in self.w.iter().enumerate() {
            out[chart::u(n, k)] = z.re;
            out[chart::v(n, k)] = z.im;
        }
        out[chart::phi(n)] = self.phi;
        out
    }

    /// Inverse of [`to_chart`](Self::to_chart); does not validate.
    pub fn from_chart_unchecked(n: usize, q: &[f64]) -> Self {
        PointBarN {
            x: (1..n).map(|a| Complex64::new(q[chart::x(a)], q[chart::y(a)])).collect(),
            w: (0..n).map(|k| Complex64::new(q[chart::u(n, k)], q[chart::v(n, k)])).collect(),
            phi: q[chart::phi(n)],
            rho: q[chart::RHO],
        }
    }

    pub fn from_chart(n: usize, q: &[f64]) -> Result<Self> {
        if q.len() != chart::dim(n) {
            return Err(Error::DimensionMismatch { expected: chart::dim(n), got: q.len() });
        }
        let p = Self::from_chart_unchecked(n, q);
        p.check()?;
        Ok(p)
    }
}

/// Whether chart coordinates describe a point of N̄ₙ.
pub fn chart_is_valid(n: usize, q: &[f64]) -> bool {
    let r2: f64 = (1..n).map(|a| q[chart::x(a)].powi(2) + q[chart::y(a)].powi(2)).sum();
    r2 < 1.0 && q[chart::RHO] > 0.0
}

/// Adds `s·Re(αᵢ ᾱⱼ)` to `g`, the Gram matrix of `s·|α|²` for a complex 1-form `α`.
fn add_hermitian_square(g: &mut DMatrix<f64>, alpha: &[(usize, Complex64)], s: f64) {
    for &(i, ai) in alpha {
        for &(j, aj) in alpha {
            g[(i, j)] += s * (ai * aj.conj()).re;
        }
    }
}

fn bergman_block(g: &mut DMatrix<f64>, x: &[Complex64], scale: f64) {
    let r2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let inv = 1.0 / (1.0 - r2);
    let i = Complex64::new(0.0, 1.0);
    for a in 1..=x.len() {
        let dx = [(chart::x(a), Complex64::new(1.0, 0.0)), (chart::y(a), i)];
        add_hermitian_square(g, &dx, scale * inv);
    }
    let mut beta = Vec::with_capacity(2 * x.len());
    for (k, z) in x.iter().enumerate() {
        beta.push((chart::x(k + 1), z.conj()));
        beta.push((chart::y(k + 1), z.conj() * i));
    }
    add_hermitian_square(g, &beta, scale * inv * inv);
}

/// Gram matrix of the Bergman metric on the unit ball in ℂ^{n−1}, coordinates `(x¹, y¹, …)`.
pub fn bergman_gram(x: &[Complex64], n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::EmptyBase);
    }
    if x.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: x.len() });
    }
    let r2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if !(r2 < 1.0) {
        return Err(Error::OutsideBall(r2.sqrt()));
    }
    let mut g = DMatrix::zeros(2 * n - 1, 2 * n - 1);
    bergman_block(&mut g, x, 1.0);
    Ok(g.view((1, 1), (2 * n - 2, 2 * n - 2)).into_owned())
}

/// Gram matrix of g^c at chart coordinates `q`, without validation.
pub fn metric_gram_chart(n: usize, c: f64, q: &[f64]) -> DMatrix<f64> {
    let p = PointBarN::from_chart_unchecked(n, q);
    let dim = chart::dim(n);
    let rho = p.rho;
    let r2 = p.x_norm_sqr();
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut g = DMatrix::zeros(dim, dim);

    bergman_block(&mut g, &p.x, (rho + c) / rho);

    g[(chart::RHO, chart::RHO)] += (rho + 2.0 * c) / (4.0 * rho * rho * (rho + c));

    // θ = dφ̃ − 4 Im(w̄⁰dw⁰ − Σ w̄ᵃdwᵃ) + (2c/(1−|X|²)) Im(Σ X̄ᵃdXᵃ), using Im(w̄ dw) = u dv − v du.
    let mut theta = vec![0.0; dim];
    theta[chart::phi(n)] = 1.0;
    for (k, w) in p.w.iter().enumerate() {
        let s = if k == 0 { -4.0 } else { 4.0 };
        theta[chart::u(n, k)] -= s * w.im;
        theta[chart::v(n, k)] += s * w.re;
    }
    let kx = 2.0 * c / (1.0 - r2);
    for (a, x) in p.x.iter().enumerate() {
        theta[chart::x(a + 1)] -= kx * x.im;
        theta[chart::y(a + 1)] += kx * x.re;
    }
    let st = (rho + c) / (4.0 * rho * rho * (rho + 2.0 * c));
    for a in 0..dim {
        if theta[a] == 0.0 {
            continue;
        }
        for b in 0..dim {
            g[(a, b)] += st * theta[a] * theta[b];
        }
    }

    for k in 0..n {
        let dw = [(chart::u(n, k), one), (chart::v(n, k), i)];
        let s = if k == 0 { -2.0 / rho } else { 2.0 / rho };
        add_hermitian_square(&mut g, &dw, s);
    }

    let mut gamma = vec![(chart::u(n, 0), one), (chart::v(n, 0), i)];
    for (a, x) in p.x.iter().enumerate() {
        gamma.push((chart::u(n, a + 1), *x));
        gamma.push((chart::v(n, a + 1), *x * i));
    }
    add_hermitian_square(&mut g, &gamma, 4.0 * (rho + c) / (rho * rho * (1.0 - r2)));
    (&g + g.transpose()) * 0.5
}

/// Gram matrix of g^c at `p`, checked for positive definiteness.
pub fn metric_gram(p: &PointBarN, params: &ModelParams) -> Result<DMatrix<f64>> {
    p.validate(params)?;
    let g = metric_gram_chart(params.n, params.c, &p.to_chart());
    if g.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(g)
}

/// Closed-form determinant of the Gram matrix at `X = 0, w = 0`.
pub fn gram_det_p0(rho: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    if !(rho > 0.0) {
        return Err(Error::NonPositiveRho(rho));
    }
    let n = params.n as i32;
    let c = params.c;
    Ok(2f64.powi(2 * n - 4) / rho.powi(2 * n + 4)
        * ((rho + c) / rho).powi(2 * n - 2)
        * ((rho + 2.0 * c) / rho).powi(2))
}

/// `ρ^{−(n+2)}·((ρ+c)/ρ)^{n−1}·((ρ+2c)/ρ)`.
pub fn rho_factor(rho: f64, params: &ModelParams) -> f64 {
    let n = params.n as i32;
    let c = params.c;
    rho.powi(-(n + 2)) * ((rho + c) / rho).powi(n - 1) * ((rho + 2.0 * c) / rho)
}

/// `(rho_factor, f_inv)` with `sqrt(det g) = rho_factor·f_inv`.
pub fn fiber_density_split(p: &PointBarN, params: &ModelParams) -> Result<(f64, f64)> {
    let g = metric_gram(p, params)?;
    let rf = rho_factor(p.rho, params);
    Ok((rf, g.determinant().sqrt() / rf))
}

/// Gram matrix of the metric induced on `{X = 0, ρ = ρ₀}` in order `(u⁰, v⁰, …, φ̃)`.
pub fn metric_on_fiber_h(
    w: &[Complex64],
    phi_tilde: f64,
    rho0: f64,
    params: &ModelParams,
) -> Result<DMatrix<f64>> {
    let n = params.n;
    let p = PointBarN::new(vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)], w.to_vec(), phi_tilde, rho0)?;
    let g = metric_gram(&p, params)?;
    let start = chart::u(n, 0);
    Ok(g.view((start, start), (2 * n + 1, 2 * n + 1)).into_owned())
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Metric derivatives `∂ₖg` at `p` by central differences with Richardson refinement.
pub fn metric_partials(
    p: &PointBarN,
    params: &ModelParams,
    step: f64,
    levels: usize,
) -> Result<Vec<DMatrix<f64>>> {
    p.validate(params)?;
    let n = params.n;
    let q = p.to_chart();
    let steps = fd::scaled_steps(&q, step);
    fd::check_stencil(&q, &steps, 1.0, |y| chart_is_valid(n, y))?;
    Ok(fd::partials(|y| metric_gram_chart(n, params.c, y), &q, &steps, levels))
}

fn christoffel(n: usize, c: f64, q: &[f64], steps: &[f64]) -> Vec<DMatrix<f64>> {
    let dim = q.len();
    let g = metric_gram_chart(n, c, q);
    let ginv = g.try_inverse().expect("metric is invertible inside the chart");
    let dg = fd::partials(|y| metric_gram_chart(n, c, y), q, steps, 0);
    // gamma[k][(i, j)] = Γ^k_{ij}
    let mut lower = vec![DMatrix::zeros(dim, dim); dim];
    for l in 0..dim {
        for i in 0..dim {
            for j in 0..dim {
                lower[l][(i, j)] = 0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
            }
        }
    }
    (0..dim)
        .map(|k| {
            let mut m = DMatrix::zeros(dim, dim);
            for l in 0..dim {
                let a = ginv[(k, l)];
                if a != 0.0 {
                    m += &lower[l] * a;
                }
            }
            m
        })
        .collect()
}

/// Ricci tensor of g^c at `p` from second-order central differences through
/// the Christoffel symbols.
pub fn ricci_fd(p: &PointBarN, params: &ModelParams, step: f64) -> Result<DMatrix<f64>> {
    p.validate(params)?;
    let n = params.n;
    let c = params.c;
    let q = p.to_chart();
    let dim = q.len();
    let steps = fd::scaled_steps(&q, step);
    fd::check_stencil(&q, &steps, 2.0, |y| chart_is_valid(n, y))?;

    let gamma = christoffel(n, c, &q, &steps);
    // dgamma[m][k][(i, j)] = ∂_m Γ^k_{ij}
    let dgamma: Vec<Vec<DMatrix<f64>>> = (0..dim)
        .map(|m| {
            let mut y = q.clone();
            y[m] = q[m] + steps[m];
            let plus = christoffel(n, c, &y, &steps);
            y[m] = q[m] - steps[m];
            let minus = christoffel(n, c, &y, &steps);
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * steps[m]))
                .collect()
        })
        .collect();

    let mut ric = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut s = 0.0;
            for k in 0..dim {
                s += dgamma[k][k][(i, j)] - dgamma[j][k][(i, k)];
                for l in 0..dim {
                    s += gamma[k][(k, l)] * gamma[l][(i, j)] - gamma[k][(j, l)] * gamma[l][(i, k)];
                }
            }
            ric[(i, j)] = s;
        }
    }
    Ok((&ric + ric.transpose()) * 0.5)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EinsteinCheck {
    /// `trace(g⁻¹ Ric)/4n`.
    pub lambda: f64,
    /// `max|Ric − λg| / ‖g‖∞`.
    pub relative_residual: f64,
}

pub fn einstein_check(p: &PointBarN, params: &ModelParams, step: f64) -> Result<EinsteinCheck> {
    let ric = ricci_fd(p, params, step)?;
    let g = metric_gram(p, params)?;
    let ginv = g.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let lambda = (ginv * &ric).trace() / params.dim() as f64;
    let residual = max_abs(&(ric - &g * lambda)) / max_abs(&g);
    Ok(EinsteinCheck { lambda, relative_residual: residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bergman_at_origin_is_identity() {
        let g = bergman_gram(&[c(0.0, 0.0)], 2).unwrap();
        assert_eq!(g, DMatrix::identity(2, 2));
    }

    #[test]
    fn bergman_at_half() {
        let g = bergman_gram(&[c(0.5, 0.0)], 2).unwrap();
        let expected = DMatrix::identity(2, 2) * (16.0 / 9.0);
        assert!((g - expected).abs().max() < 1e-15);
    }

    #[test]
    fn bergman_rejects_bad_input() {
        assert_eq!(bergman_gram(&[], 1), Err(Error::EmptyBase));
        assert!(matches!(bergman_gram(&[c(1.0, 0.0)], 2), Err(Error::OutsideBall(_))));
    }

    #[test]
    fn n1_base_point_metric() {
        let params = ModelParams::new(1, 0.0).unwrap();
        let g = metric_gram(&PointBarN::base(1, 1.0), &params).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.25, 2.0, 2.0, 0.25]));
        assert!((g - expected).abs().max() < 1e-15);
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(matches!(
            PointBarN::new(vec![c(0.8, 0.7)], vec![c(0.0, 0.0); 2], 0.0, 1.0),
            Err(Error::OutsideBall(_))
        ));
        assert_eq!(
            PointBarN::new(vec![], vec![c(0.0, 0.0)], 0.0, 0.0),
            Err(Error::NonPositiveRho(0.0))
        );
    }

    #[test]
    fn chart_roundtrip() {
        let p = PointBarN::new(vec![c(0.1, -0.2), c(0.3, 0.0)], vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 0.25)], 0.7, 1.5)
            .unwrap();
        let q = p.to_chart();
        assert_eq!(q.len(), 12);
        assert_eq!(PointBarN::from_chart(3, &q).unwrap(), p);
        assert_eq!(chart::labels(3).len(), 12);
    }

    #[test]
    fn ricci_rejects_stencil_outside_chart() {
        let params = ModelParams::new(1, 0.0).unwrap();
        let p = PointBarN::base(1, 1e-3);
        assert!(matches!(ricci_fd(&p, &params, 1e-3), Err(Error::StencilOutOfChart { .. })));
    }
}
