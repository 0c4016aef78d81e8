//! Fiber volume density `ρ^{−(n+2)}·P(c/ρ)` with `P(x) = (1+x)^{n−1}(1+2x)`,
//! closed-form slab and tail volumes, quadrature cross-checks and asymptotics.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ModelParams;

/// Relative accuracy requested from the quadrature oracle.
pub const QUADRATURE_REL_TOL: f64 = 1e-10;

/// Coefficients `p₀..pₙ` of `P`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumePolynomial {
    coeffs: Vec<BigInt>,
}

impl VolumePolynomial {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|p| p.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs_f64().iter().rev().fold(0.0, |acc, p| acc * x + p)
    }
}

/// `p_k = C(n−1, k) + 2·C(n−1, k−1)`.
pub fn poly_p(n: usize) -> Result<VolumePolynomial> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let mut binom = vec![BigInt::one()];
    for _ in 1..n {
        let mut next = vec![BigInt::one(); binom.len() + 1];
        for k in 1..binom.len() {
            next[k] = &binom[k - 1] + &binom[k];
        }
        binom = next;
    }
    let coeffs = (0..=n)
        .map(|k| {
            let a = binom.get(k).cloned().unwrap_or_else(BigInt::zero);
            let b = if k >= 1 { binom[k - 1].clone() } else { BigInt::zero() };
            a + b * 2
        })
        .collect();
    Ok(VolumePolynomial { coeffs })
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRho(rho))
    }
}

/// `f / f_inv = ρ^{−(n+2)}·P(c/ρ)`.
pub fn density(rho: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    check_rho(rho)?;
    let p = poly_p(params.n)?;
    Ok(rho.powi(-(params.n as i32 + 2)) * p.eval(params.c / rho))
}

/// `∫_{ρ₁}^{ρ₀} density` times `V_D`.
pub fn slab_closed(rho1: f64, rho0: f64, params: &ModelParams, vd: f64) -> Result<f64> {
    params.validate()?;
    check_rho(rho1)?;
    check_rho(rho0)?;
    check_positive("V_D", vd)?;
    if rho1 >= rho0 {
        return Err(Error::BoundsOrder(rho1, rho0));
    }
    let n = params.n as i32;
    let p = poly_p(params.n)?.coeffs_f64();
    let sum: f64 = p
        .iter()
        .enumerate()
        .map(|(k, pk)| {
            let e = n + 1 + k as i32;
            pk * params.c.powi(k as i32) / e as f64 * (rho1.powi(-e) - rho0.powi(-e))
        })
        .sum();
    Ok(vd * sum)
}

/// `∫_{ρ₀}^{∞} density` times `V_D`.
pub fn tail_closed(rho0: f64, params: &ModelParams, vd: f64) -> Result<f64> {
    params.validate()?;
    check_rho(rho0)?;
    check_positive("V_D", vd)?;
    let n = params.n as i32;
    let p = poly_p(params.n)?.coeffs_f64();
    let sum: f64 = p
        .iter()
        .enumerate()
        .map(|(k, pk)| {
            let e = n + 1 + k as i32;
            pk * params.c.powi(k as i32) / (e as f64 * rho0.powi(e))
        })
        .sum();
    Ok(vd * sum)
}

/// `k = V_D/(n+1)`, the coefficient of `ρ₀^{−n−1}` in the tail.
pub fn asymptotic_k(params: &ModelParams, vd: f64) -> Result<f64> {
    params.validate()?;
    check_positive("V_D", vd)?;
    Ok(vd / (params.n as f64 + 1.0))
}

/// `k₁ = (2cⁿ/(2n+1))·V_D/(n+1)`.
pub fn near_zero_constant(params: &ModelParams, vd: f64) -> Result<f64> {
    let k = asymptotic_k(params, vd)?;
    if params.c == 0.0 {
        return Err(Error::ZeroDeformation);
    }
    let n = params.n as i32;
    Ok(2.0 * params.c.powi(n) / (2.0 * n as f64 + 1.0) * k)
}

/// `lim_{ρ₁→0} ρ₁^{2n+1}·slab = pₙ cⁿ V_D/(2n+1)` with `pₙ = 2`.
pub fn near_zero_limit(params: &ModelParams, vd: f64) -> Result<f64> {
    params.validate()?;
    check_positive("V_D", vd)?;
    if params.c == 0.0 {
        return Err(Error::ZeroDeformation);
    }
    let n = params.n as i32;
    let top = poly_p(params.n)?.coeffs_f64()[params.n];
    Ok(top * params.c.powi(n) * vd / (2.0 * n as f64 + 1.0))
}

fn integrate_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    use quadrature::double_exponential::integrate;
    let rough = integrate(&f, a, b, 1e-6).integral.abs();
    let target = (rough * QUADRATURE_REL_TOL).max(f64::MIN_POSITIVE);
    integrate(&f, a, b, target).integral
}

/// Slab volume by numerical quadrature of the density.
pub fn slab_quadrature(rho1: f64, rho0: f64, params: &ModelParams, vd: f64) -> Result<f64> {
    params.validate()?;
    check_rho(rho1)?;
    check_rho(rho0)?;
    check_positive("V_D", vd)?;
    if rho1 >= rho0 {
        return Err(Error::BoundsOrder(rho1, rho0));
    }
    let p = poly_p(params.n)?;
    let n = params.n as i32;
    let c = params.c;
    // ρ = e^s turns the power-law integrand into a smooth exponential
    let f = |s: f64| {
        let rho = s.exp();
        rho.powi(-(n + 1)) * p.eval(c / rho)
    };
    Ok(vd * integrate_rel(f, rho1.ln(), rho0.ln()))
}

/// Tail volume by quadrature after the substitution `ρ = ρ₀/s`.
pub fn tail_quadrature(rho0: f64, params: &ModelParams, vd: f64) -> Result<f64> {
    params.validate()?;
    check_rho(rho0)?;
    check_positive("V_D", vd)?;
    let p = poly_p(params.n)?;
    let n = params.n as i32;
    let c = params.c;
    let f = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let rho = rho0 / s;
        rho.powi(-(n + 2)) * p.eval(c / rho) * rho0 / (s * s)
    };
    Ok(vd * integrate_rel(f, 0.0, 1.0))
}

/// `C(ρ_floor) = (1 + c/ρ_floor)^{n−1}(1 + 2c/ρ_floor)`.
pub fn bound_constant(rho_floor: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    check_rho(rho_floor)?;
    Ok(poly_p(params.n)?.eval(params.c / rho_floor))
}

/// `(density ≥ ρ^{−(n+2)}, density ≤ C(ρ_floor)·ρ^{−(n+2)})`, the second for `ρ ≥ ρ_floor`.
pub fn bounds_check(rho: f64, rho_floor: f64, params: &ModelParams) -> Result<(bool, bool)> {
    params.validate()?;
    check_rho(rho)?;
    check_rho(rho_floor)?;
    if rho < rho_floor {
        return Err(Error::BoundsOrder(rho, rho_floor));
    }
    let p = poly_p(params.n)?;
    let scaled = p.eval(params.c / rho);
    Ok((scaled >= 1.0, scaled <= p.eval(params.c / rho_floor)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeRow {
    pub rho: f64,
    pub density: f64,
    pub closed_tail: f64,
    pub quadrature_tail: f64,
    /// `closed_tail / (k·ρ^{−n−1})`.
    pub ratio_to_asymptote: f64,
}

pub fn volume_table(grid: &[f64], params: &ModelParams, vd: f64) -> Result<Vec<VolumeRow>> {
    let k = asymptotic_k(params, vd)?;
    grid.iter()
        .map(|&rho| {
            let closed = tail_closed(rho, params, vd)?;
            Ok(VolumeRow {
                rho,
                density: density(rho, params)?,
                closed_tail: closed,
                quadrature_tail: tail_quadrature(rho, params, vd)?,
                ratio_to_asymptote: closed / (k * rho.powi(-(params.n as i32 + 1))),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, c: f64) -> ModelParams {
        ModelParams::new(n, c).unwrap()
    }

    #[test]
    fn polynomial_coefficients() {
        let ints = |v: &[i64]| v.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>();
        assert_eq!(poly_p(1).unwrap().coeffs(), ints(&[1, 2]).as_slice());
        assert_eq!(poly_p(2).unwrap().coeffs(), ints(&[1, 3, 2]).as_slice());
        assert_eq!(poly_p(3).unwrap().coeffs(), ints(&[1, 4, 5, 2]).as_slice());
        assert!(poly_p(0).is_err());
    }

    #[test]
    fn density_values() {
        assert_eq!(density(1.0, &params(3, 0.0)).unwrap(), 1.0);
        assert_eq!(density(1.0, &params(1, 1.0)).unwrap(), 3.0);
        assert!(density(0.0, &params(1, 1.0)).is_err());
    }

    #[test]
    fn undeformed_tail() {
        assert!((tail_closed(1.0, &params(1, 0.0), 1.0).unwrap() - 0.5).abs() < 1e-15);
        let q = tail_quadrature(1.0, &params(1, 0.0), 1.0).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slab_order_checked() {
        assert_eq!(slab_closed(2.0, 1.0, &params(1, 1.0), 1.0), Err(Error::BoundsOrder(2.0, 1.0)));
    }

    #[test]
    fn k1_values() {
        assert!((near_zero_constant(&params(1, 1.0), 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((near_zero_limit(&params(1, 1.0), 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(near_zero_constant(&params(1, 0.0), 1.0), Err(Error::ZeroDeformation));
    }

    #[test]
    fn equal_bounds_when_undeformed() {
        assert_eq!(bounds_check(2.0, 1.0, &params(2, 0.0)).unwrap(), (true, true));
        assert_eq!(bound_constant(1.0, &params(2, 0.0)).unwrap(), 1.0);
    }
}
