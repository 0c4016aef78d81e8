//! Exact polynomial vector fields on N̄ₙ, their Lie brackets, numeric
//! evaluation in the real chart, and the Killing-equation residual.
//!
//! A field is a list of polynomial coefficients on the directions
//! `∂X^a, ∂X̄^a, ∂w^k, ∂w̄^k, ∂φ̃` (same indexing as [`poly::Vars`], with `∂φ̃`
//! at the index of `c`). Fields never have a `∂ρ` component and never depend
//! on `ρ` or `φ̃`.

pub mod flows;
pub mod poly;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ci, cr, crat, fmt_crat, rat, CRat};
use crate::geometry::{chart, max_abs, metric_gram_chart, metric_partials, ModelParams, PointBarN};
use poly::{NumPoly, Poly, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    vars: Vars,
    comps: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldTerm {
    pub direction: String,
    pub monomial: String,
    pub coeff: String,
}

impl PolyVectorField {
    pub fn zero(n: usize) -> Self {
        let vars = Vars { n };
        PolyVectorField { vars, comps: vec![Poly::zero(); vars.len()] }
    }

    pub fn n(&self) -> usize {
        self.vars.n
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    /// Index of the `∂φ̃` direction.
    pub fn phi_dir(&self) -> usize {
        self.vars.c()
    }

    pub fn component(&self, dir: usize) -> &Poly {
        &self.comps[dir]
    }

    pub fn add_to(&mut self, dir: usize, p: &Poly) {
        self.comps[dir] = self.comps[dir].add(p);
    }

    fn zip(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        assert_eq!(self.vars, other.vars, "fields over different n");
        PolyVectorField {
            vars: self.vars,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Poly::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Poly::sub)
    }

    pub fn scale(&self, s: &CRat) -> Self {
        PolyVectorField { vars: self.vars, comps: self.comps.iter().map(|p| p.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Lie bracket, treating `X, X̄, w, w̄` as independent variables.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "fields over different n");
        let vars = self.vars;
        let comps = (0..vars.len())
            .map(|j| {
                let mut acc = Poly::zero();
                for d in 0..vars.coords() {
                    if !self.comps[d].is_zero() {
                        acc = acc.add(&self.comps[d].mul(&other.comps[j].deriv(d)));
                    }
                    if !other.comps[d].is_zero() {
                        acc = acc.sub(&other.comps[d].mul(&self.comps[j].deriv(d)));
                    }
                }
                acc
            })
            .collect();
        let out = PolyVectorField { vars, comps };
        debug_assert!(out.c_degree() <= 1, "c-degree overflow in bracket");
        out
    }

    /// Complex conjugate field: swap bar-partners in both variables and directions.
    pub fn conj(&self) -> Self {
        let vars = self.vars;
        let mut comps = vec![Poly::zero(); vars.len()];
        for (d, p) in self.comps.iter().enumerate() {
            comps[vars.partner(d)] = p.conj(vars);
        }
        PolyVectorField { vars, comps }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `F + F̄`.
    pub fn real_sum(&self) -> Self {
        self.add(&self.conj())
    }

    /// `i(F − F̄)`.
    pub fn imag_sum(&self) -> Self {
        self.sub(&self.conj()).scale(&ci(1))
    }

    /// `(F + F̄)/2`.
    pub fn re(&self) -> Self {
        self.real_sum().scale(&crat(rat(1, 2), rat(0, 1)))
    }

    /// `(F − F̄)/2i`.
    pub fn im(&self) -> Self {
        self.sub(&self.conj()).scale(&crat(rat(0, 1), rat(-1, 2)))
    }

    pub fn coord_degree(&self) -> usize {
        self.comps.iter().map(|p| p.coord_degree(self.vars)).max().unwrap_or(0)
    }

    pub fn c_degree(&self) -> usize {
        self.comps.iter().map(|p| p.c_degree(self.vars)).max().unwrap_or(0)
    }

    pub fn direction_label(&self, d: usize) -> String {
        if d == self.phi_dir() {
            "dphi".to_string()
        } else {
            format!("d{}", self.vars.label(d))
        }
    }

    /// Sparse coefficient table keyed by (direction, monomial).
    pub fn to_table(&self) -> Vec<FieldTerm> {
        let mut out = Vec::new();
        for (d, p) in self.comps.iter().enumerate() {
            for (m, z) in p.terms() {
                out.push(FieldTerm {
                    direction: self.direction_label(d),
                    monomial: Poly::monomial_label(self.vars, m),
                    coeff: fmt_crat(z),
                });
            }
        }
        out
    }

    /// Complex components at `p` with `c = c_value`.
    pub fn eval(&self, p: &PointBarN, c_value: f64) -> Vec<Complex64> {
        let values = variable_values(self.vars, p, c_value);
        self.comps.iter().map(|q| q.to_numeric().eval(&values)).collect()
    }

    /// Real-chart tangent vector at `p`; requires a real field.
    pub fn eval_real(&self, p: &PointBarN, c_value: f64) -> Result<Vec<f64>> {
        if !self.is_real() {
            return Err(Error::NotReal("eval_real on a complex field".into()));
        }
        let comps = self.eval(p, c_value);
        Ok(to_chart_components(self.vars, &comps).iter().map(|z| z.re).collect())
    }

    /// Numeric copy with exact derivative polynomials, for a real field.
    pub fn compile_real(&self) -> Result<CompiledField> {
        if !self.is_real() {
            return Err(Error::NotReal("Killing check requires a real field".into()));
        }
        let vars = self.vars;
        Ok(CompiledField {
            vars,
            comps: self.comps.iter().map(Poly::to_numeric).collect(),
            derivs: (0..vars.coords())
                .map(|v| self.comps.iter().map(|p| p.deriv(v).to_numeric()).collect())
                .collect(),
        })
    }
}

fn variable_values(vars: Vars, p: &PointBarN, c_value: f64) -> Vec<Complex64> {
    let mut values = vec![Complex64::new(0.0, 0.0); vars.len()];
    for a in 1..vars.n {
        values[vars.x(a)] = p.x[a - 1];
        values[vars.xbar(a)] = p.x[a - 1].conj();
    }
    for k in 0..vars.n {
        values[vars.w(k)] = p.w[k];
        values[vars.wbar(k)] = p.w[k].conj();
    }
    values[vars.c()] = Complex64::new(c_value, 0.0);
    values
}

/// `f∂z + g∂z̄ ↦ ((f+g)/2) ∂x + (i(g−f)/2) ∂y` on every complex pair; ρ-component zero.
fn to_chart_components(vars: Vars, comps: &[Complex64]) -> Vec<Complex64> {
    let n = vars.n;
    let i = Complex64::new(0.0, 1.0);
    let mut out = vec![Complex64::new(0.0, 0.0); chart::dim(n)];
    for a in 1..n {
        let (f, g) = (comps[vars.x(a)], comps[vars.xbar(a)]);
        out[chart::x(a)] = (f + g) / 2.0;
        out[chart::y(a)] = i * (g - f) / 2.0;
    }
    for k in 0..n {
        let (f, g) = (comps[vars.w(k)], comps[vars.wbar(k)]);
        out[chart::u(n, k)] = (f + g) / 2.0;
        out[chart::v(n, k)] = i * (g - f) / 2.0;
    }
    out[chart::phi(n)] = comps[vars.c()];
    out
}

/// A real vector field on the chart with an exactly known Jacobian.
pub trait RealVectorField {
    fn chart_value(&self, q: &[f64], c: f64) -> Vec<f64>;
    /// `J[(k, i)] = ∂ᵢFᵏ`.
    fn chart_jacobian(&self, q: &[f64], c: f64) -> DMatrix<f64>;
}

pub struct CompiledField {
    vars: Vars,
    comps: Vec<NumPoly>,
    derivs: Vec<Vec<NumPoly>>,
}

impl RealVectorField for CompiledField {
    fn chart_value(&self, q: &[f64], c: f64) -> Vec<f64> {
        let p = PointBarN::from_chart_unchecked(self.vars.n, q);
        let values = variable_values(self.vars, &p, c);
        let comps: Vec<Complex64> = self.comps.iter().map(|f| f.eval(&values)).collect();
        to_chart_components(self.vars, &comps).iter().map(|z| z.re).collect()
    }

    fn chart_jacobian(&self, q: &[f64], c: f64) -> DMatrix<f64> {
        let vars = self.vars;
        let n = vars.n;
        let p = PointBarN::from_chart_unchecked(n, q);
        let values = variable_values(vars, &p, c);
        let dvals: Vec<Vec<Complex64>> = self
            .derivs
            .iter()
            .map(|row| row.iter().map(|f| f.eval(&values)).collect())
            .collect();
        let dim = chart::dim(n);
        let i = Complex64::new(0.0, 1.0);
        let mut jac = DMatrix::zeros(dim, dim);
        let mut column = |idx: usize, z: usize, zbar: usize, imaginary: bool| {
            // ∂x = ∂z + ∂z̄, ∂y = i(∂z − ∂z̄)
            let d: Vec<Complex64> = (0..vars.len())
                .map(|dir| {
                    if imaginary {
                        i * (dvals[z][dir] - dvals[zbar][dir])
                    } else {
                        dvals[z][dir] + dvals[zbar][dir]
                    }
                })
                .collect();
            for (k, val) in to_chart_components(vars, &d).iter().enumerate() {
                jac[(k, idx)] = val.re;
            }
        };
        for a in 1..n {
            column(chart::x(a), vars.x(a), vars.xbar(a), false);
            column(chart::y(a), vars.x(a), vars.xbar(a), true);
        }
        for k in 0..n {
            column(chart::u(n, k), vars.w(k), vars.wbar(k), false);
            column(chart::v(n, k), vars.w(k), vars.wbar(k), true);
        }
        jac
    }
}

/// The coordinate field `∂/∂q_index` (used as a negative control).
pub struct CoordinateField(pub usize);

impl RealVectorField for CoordinateField {
    fn chart_value(&self, q: &[f64], _c: f64) -> Vec<f64> {
        let mut v = vec![0.0; q.len()];
        v[self.0] = 1.0;
        v
    }

    fn chart_jacobian(&self, q: &[f64], _c: f64) -> DMatrix<f64> {
        DMatrix::zeros(q.len(), q.len())
    }
}

/// Richardson levels used for the metric derivatives in the Killing check.
pub const KILLING_RICHARDSON_LEVELS: usize = 2;

/// Metric and metric derivatives at one point, reusable across fields.
pub struct KillingContext {
    c: f64,
    q: Vec<f64>,
    g: DMatrix<f64>,
    dg: Vec<DMatrix<f64>>,
}

impl KillingContext {
    pub fn new(p: &PointBarN, params: &ModelParams, step: f64) -> Result<Self> {
        let dg = metric_partials(p, params, step, KILLING_RICHARDSON_LEVELS)?;
        let q = p.to_chart();
        let g = metric_gram_chart(params.n, params.c, &q);
        Ok(KillingContext { c: params.c, q, g, dg })
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// `(L_F g)ᵢⱼ = Fᵏ∂ₖgᵢⱼ + gₖⱼ∂ᵢFᵏ + gᵢₖ∂ⱼFᵏ`.
    pub fn lie_derivative(&self, f: &dyn RealVectorField) -> DMatrix<f64> {
        let v = f.chart_value(&self.q, self.c);
        let jac = f.chart_jacobian(&self.q, self.c);
        let mut out = jac.transpose() * &self.g + &self.g * &jac;
        for (k, fk) in v.iter().enumerate() {
            if *fk != 0.0 {
                out += &self.dg[k] * *fk;
            }
        }
        out
    }

    /// `max|L_F g| / ‖g‖∞` with the max-abs-entry norm.
    pub fn relative_residual(&self, f: &dyn RealVectorField) -> f64 {
        max_abs(&self.lie_derivative(f)) / max_abs(&self.g)
    }
}

pub fn lie_derivative_metric(
    f: &dyn RealVectorField,
    p: &PointBarN,
    params: &ModelParams,
    step: f64,
) -> Result<DMatrix<f64>> {
    Ok(KillingContext::new(p, params, step)?.lie_derivative(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorName {
    YC,
    Ya(usize),
    YaBar(usize),
    Vk(usize),
    VkBar(usize),
    T,
    C1,
    C2,
    CommYaYbBar(usize, usize),
}

fn check_a(n: usize, a: usize) -> Result<()> {
    if a >= 1 && a < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("a = {a} not in 1..{n}")))
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("k = {k} not in 0..{n}")))
    }
}

fn field_yc(n: usize) -> PolyVectorField {
    let mut f = PolyVectorField::zero(n);
    let v = f.vars;
    for k in 0..n {
        f.add_to(v.w(k), &Poly::monomial(v, &[v.w(k)], ci(-1)));
        f.add_to(v.wbar(k), &Poly::monomial(v, &[v.wbar(k)], ci(1)));
    }
    f.add_to(f.phi_dir(), &Poly::monomial(v, &[v.c()], cr(-2)));
    f
}

fn field_ya(n: usize, a: usize) -> PolyVectorField {
    let mut f = PolyVectorField::zero(n);
    let v = f.vars;
    f.add_to(v.xbar(a), &Poly::constant(v, cr(1)));
    for b in 1..n {
        f.add_to(v.x(b), &Poly::monomial(v, &[v.x(a), v.x(b)], cr(-1)));
    }
    f.add_to(v.w(a), &Poly::monomial(v, &[v.w(0)], cr(-1)));
    f.add_to(v.wbar(0), &Poly::monomial(v, &[v.wbar(a)], cr(-1)));
    f.add_to(f.phi_dir(), &Poly::monomial(v, &[v.c(), v.x(a)], ci(1)));
    f
}

fn field_vk(n: usize, k: usize) -> PolyVectorField {
    let mut f = PolyVectorField::zero(n);
    let v = f.vars;
    f.add_to(v.w(k), &Poly::constant(v, cr(1)));
    let s = if k == 0 { 2 } else { -2 };
    f.add_to(f.phi_dir(), &Poly::monomial(v, &[v.wbar(k)], ci(s)));
    f
}

fn field_t(n: usize) -> PolyVectorField {
    let mut f = PolyVectorField::zero(n);
    let v = f.vars;
    f.add_to(f.phi_dir(), &Poly::constant(v, cr(1)));
    f
}

fn field_c1(n: usize) -> PolyVectorField {
    let mut f = PolyVectorField::zero(n);
    let v = f.vars;
    for k in 0..n {
        f.add_to(v.w(k), &Poly::monomial(v, &[v.w(k)], ci(-1)));
        f.add_to(v.wbar(k), &Poly::monomial(v, &[v.wbar(k)], ci(1)));
    }
    f
}

fn field_c2(n: usize) -> PolyVectorField {
    let mut f = PolyVectorField::zero(n);
    let v = f.vars;
    let m = n as i64;
    for a in 1..n {
        f.add_to(v.x(a), &Poly::monomial(v, &[v.x(a)], ci(-m)));
        f.add_to(v.xbar(a), &Poly::monomial(v, &[v.xbar(a)], ci(m)));
    }
    f.add_to(v.w(0), &Poly::monomial(v, &[v.w(0)], ci(-m)));
    f.add_to(v.wbar(0), &Poly::monomial(v, &[v.wbar(0)], ci(m)));
    f
}

/// The catalogued complex fields, with `c` kept symbolic.
pub fn generator(name: GeneratorName, n: usize) -> Result<PolyVectorField> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    Ok(match name {
        GeneratorName::YC => field_yc(n),
        GeneratorName::Ya(a) => {
            check_a(n, a)?;
            field_ya(n, a)
        }
        GeneratorName::YaBar(a) => {
            check_a(n, a)?;
            field_ya(n, a).conj()
        }
        GeneratorName::Vk(k) => {
            check_k(n, k)?;
            field_vk(n, k)
        }
        GeneratorName::VkBar(k) => {
            check_k(n, k)?;
            field_vk(n, k).conj()
        }
        GeneratorName::T => field_t(n),
        GeneratorName::C1 => field_c1(n),
        GeneratorName::C2 => field_c2(n),
        GeneratorName::CommYaYbBar(a, b) => {
            check_a(n, a)?;
            check_a(n, b)?;
            field_ya(n, a).bracket(&field_ya(n, b).conj())
        }
    })
}

/// Real fields vanishing at `n₀ = (0, 0, 0, ρ₀)`: `Y_C + 2c∂φ̃`, then for `a < b`
/// `Re[Y_a,Ȳ_b]` and `Im[Y_a,Ȳ_b]`, then `Im[Y_a,Ȳ_a] + 2c∂φ̃` for each `a`.
/// None of them depends on `ρ₀`.
pub fn stabilizer_basis(n: usize) -> Vec<(String, PolyVectorField)> {
    let mut out = vec![("C1".to_string(), field_c1(n))];
    let vars = Vars { n };
    let two_c_dphi = {
        let mut f = PolyVectorField::zero(n);
        f.add_to(f.phi_dir(), &Poly::monomial(vars, &[vars.c()], cr(2)));
        f
    };
    for a in 1..n {
        for b in (a + 1)..n {
            let comm = field_ya(n, a).bracket(&field_ya(n, b).conj());
            out.push((format!("ReComm{a}{b}"), comm.re()));
            out.push((format!("ImComm{a}{b}"), comm.im()));
        }
    }
    for a in 1..n {
        let comm = field_ya(n, a).bracket(&field_ya(n, a).conj());
        out.push((format!("ImComm{a}{a}+2c"), comm.im().add(&two_c_dphi)));
    }
    out
}

/// Every catalogued real Killing field for the given `n`, labelled.
pub fn real_catalogue(n: usize) -> Vec<(String, PolyVectorField)> {
    let mut out = vec![("YC".to_string(), field_yc(n))];
    for a in 1..n {
        let y = field_ya(n, a);
        out.push((format!("ReY{a}"), y.real_sum()));
        out.push((format!("ImY{a}"), y.imag_sum()));
    }
    for k in 0..n {
        let v = field_vk(n, k);
        out.push((format!("ReV{k}"), v.real_sum()));
        out.push((format!("ImV{k}"), v.imag_sum()));
    }
    out.push(("T".to_string(), field_t(n)));
    out.push(("C2".to_string(), field_c2(n)));
    out.extend(stabilizer_basis(n));
    out
}

/// Complex rank of the coefficient matrix of `{Y_a, V_k, Ȳ_a, V̄_k, ∂φ̃}` at `p`.
pub fn frame_rank(p: &PointBarN, params: &ModelParams) -> Result<usize> {
    p.validate(params)?;
    let n = params.n;
    let mut fields = Vec::new();
    for a in 1..n {
        fields.push(field_ya(n, a));
    }
    for k in 0..n {
        fields.push(field_vk(n, k));
    }
    for a in 1..n {
        fields.push(field_ya(n, a).conj());
    }
    for k in 0..n {
        fields.push(field_vk(n, k).conj());
    }
    fields.push(field_t(n));
    let size = 4 * n - 1;
    let mut m = DMatrix::<Complex64>::zeros(fields.len(), size);
    for (r, f) in fields.iter().enumerate() {
        for (col, z) in f.eval(p, params.c).into_iter().enumerate() {
            m[(r, col)] = z;
        }
    }
    let sv = m.singular_values();
    let top = sv.iter().fold(0.0f64, |acc, s| acc.max(*s));
    Ok(sv.iter().filter(|s| **s > 1e-8 * top).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(f: &PolyVectorField, d: usize) -> String {
        f.component(d).display(f.vars())
    }

    #[test]
    fn yc_table() {
        let f = generator(GeneratorName::YC, 2).unwrap();
        let v = f.vars();
        assert_eq!(comp(&f, v.w(0)), "(-1i)*w0");
        assert_eq!(comp(&f, v.wbar(1)), "(1i)*wbar1");
        assert_eq!(comp(&f, f.phi_dir()), "(-2)*c");
        assert!(f.is_real());
    }

    #[test]
    fn t_is_unit_phi() {
        let f = generator(GeneratorName::T, 3).unwrap();
        let p = PointBarN::base(3, 1.0);
        let v = f.eval_real(&p, 0.5).unwrap();
        let mut expected = vec![0.0; 12];
        expected[11] = 1.0;
        assert_eq!(v, expected);
    }

    #[test]
    fn index_errors() {
        assert!(matches!(generator(GeneratorName::Ya(0), 2), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(generator(GeneratorName::Ya(2), 2), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(generator(GeneratorName::Vk(2), 2), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn complex_fields_are_not_real() {
        let f = generator(GeneratorName::Vk(0), 1).unwrap();
        assert!(!f.is_real());
        assert!(f.compile_real().is_err());
        assert!(f.real_sum().is_real());
        assert!(f.imag_sum().is_real());
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let a = generator(GeneratorName::Ya(1), 3).unwrap();
        let b = generator(GeneratorName::YaBar(2), 3).unwrap();
        assert_eq!(a.bracket(&b), b.bracket(&a).scale(&cr(-1)));
        assert!(a.bracket(&a).is_zero());
    }

    #[test]
    fn table_lists_terms() {
        let f = generator(GeneratorName::Vk(1), 2).unwrap();
        let t = f.to_table();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0], FieldTerm { direction: "dw1".into(), monomial: "1".into(), coeff: "1".into() });
        assert_eq!(t[1], FieldTerm { direction: "dphi".into(), monomial: "wbar1".into(), coeff: "-2i".into() });
    }

    #[test]
    fn stabilizer_count() {
        for n in 1..5 {
            assert_eq!(stabilizer_basis(n).len(), 1 + (n - 1) * (n - 1));
        }
    }
}
