//! Closed-form flows of `C₁`, `C₂`, `T` and the real parts of `V_k`, with
//! their (constant) Jacobians in the real chart.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::GeneratorName;
use crate::error::{Error, Result};
use crate::geometry::{chart, PointBarN};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowField {
    Generator(GeneratorName),
    /// `V_k + V̄_k`.
    ReV(usize),
    /// `i(V_k − V̄_k)`.
    ImV(usize),
}

/// Flow time, either a plain real number or an exact rational multiple of π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FlowTime {
    Real(f64),
    PiMultiple(Rational64),
}

impl FlowTime {
    pub fn value(&self) -> f64 {
        match self {
            FlowTime::Real(t) => *t,
            FlowTime::PiMultiple(q) => q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI,
        }
    }

    /// `e^{−i m t}`, exact when `m·t` is a multiple of π/2.
    fn rotation(&self, m: i64) -> Complex64 {
        match self {
            FlowTime::Real(t) => Complex64::from_polar(1.0, -(m as f64) * t),
            FlowTime::PiMultiple(q) => {
                // phase = −m·q in units of π, reduced to [0, 2)
                let two = Rational64::from_integer(2);
                let mut r = -(q * m) % two;
                if r < Rational64::zero() {
                    r += two;
                }
                let quarter = r * 2;
                if quarter.is_integer() {
                    match quarter.to_integer() {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    }
                } else {
                    Complex64::from_polar(1.0, r.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI)
                }
            }
        }
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("k = {k} not in 0..{n}")))
    }
}

/// Image of `p` under the time-`t` flow.
pub fn flow(field: FlowField, t: FlowTime, p: &PointBarN) -> Result<PointBarN> {
    let n = p.n();
    let mut out = p.clone();
    match field {
        FlowField::Generator(GeneratorName::C1) => {
            let r = t.rotation(1);
            for w in out.w.iter_mut() {
                *w *= r;
            }
        }
        FlowField::Generator(GeneratorName::C2) => {
            let r = t.rotation(n as i64);
            for x in out.x.iter_mut() {
                *x *= r;
            }
            out.w[0] *= r;
        }
        FlowField::Generator(GeneratorName::T) => out.phi += t.value(),
        FlowField::ReV(k) => {
            check_k(n, k)?;
            let s = t.value();
            let sign = if k == 0 { 4.0 } else { -4.0 };
            out.phi += sign * p.w[k].im * s;
            out.w[k] += Complex64::new(s, 0.0);
        }
        FlowField::ImV(k) => {
            check_k(n, k)?;
            let s = t.value();
            let sign = if k == 0 { -4.0 } else { 4.0 };
            out.phi += sign * p.w[k].re * s;
            out.w[k] += Complex64::new(0.0, s);
        }
        FlowField::Generator(other) => return Err(Error::UnsupportedFlow(format!("{other:?}"))),
    }
    Ok(out)
}

fn rotate_block(j: &mut DMatrix<f64>, re: usize, im: usize, r: Complex64) {
    j[(re, re)] = r.re;
    j[(re, im)] = -r.im;
    j[(im, re)] = r.im;
    j[(im, im)] = r.re;
}

/// Jacobian of the time-`t` flow in the real chart (independent of the point).
pub fn flow_jacobian(field: FlowField, t: FlowTime, n: usize) -> Result<DMatrix<f64>> {
    let mut j = DMatrix::identity(chart::dim(n), chart::dim(n));
    match field {
        FlowField::Generator(GeneratorName::C1) => {
            let r = t.rotation(1);
            for k in 0..n {
                rotate_block(&mut j, chart::u(n, k), chart::v(n, k), r);
            }
        }
        FlowField::Generator(GeneratorName::C2) => {
            let r = t.rotation(n as i64);
            for a in 1..n {
                rotate_block(&mut j, chart::x(a), chart::y(a), r);
            }
            rotate_block(&mut j, chart::u(n, 0), chart::v(n, 0), r);
        }
        FlowField::Generator(GeneratorName::T) => {}
        FlowField::ReV(k) => {
            check_k(n, k)?;
            let sign = if k == 0 { 4.0 } else { -4.0 };
            j[(chart::phi(n), chart::v(n, k))] = sign * t.value();
        }
        FlowField::ImV(k) => {
            check_k(n, k)?;
            let sign = if k == 0 { -4.0 } else { 4.0 };
            j[(chart::phi(n), chart::u(n, k))] = sign * t.value();
        }
        FlowField::Generator(other) => return Err(Error::UnsupportedFlow(format!("{other:?}"))),
    }
    Ok(j)
}

/// Every field with an implemented closed-form flow, for the given `n`.
pub fn flow_fields(n: usize) -> Vec<FlowField> {
    let mut out = vec![
        FlowField::Generator(GeneratorName::C1),
        FlowField::Generator(GeneratorName::C2),
        FlowField::Generator(GeneratorName::T),
    ];
    for k in 0..n {
        out.push(FlowField::ReV(k));
        out.push(FlowField::ImV(k));
    }
    out
}
