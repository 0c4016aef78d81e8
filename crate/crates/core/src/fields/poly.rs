//! Polynomials in the commuting variables `X^a, X̄^a, w^k, w̄^k` and the
//! deformation symbol `c`, with Gaussian-rational coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::exact::{cr, crat_to_c64, fmt_crat, CRat};

/// Variable layout for a given `n`: `X^1..X^{n−1}`, `X̄^1..`, `w^0..w^{n−1}`, `w̄^0..`, `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vars {
    pub n: usize,
}

impl Vars {
    pub fn x(&self, a: usize) -> usize {
        a - 1
    }
    pub fn xbar(&self, a: usize) -> usize {
        self.n - 1 + a - 1
    }
    pub fn w(&self, k: usize) -> usize {
        2 * self.n - 2 + k
    }
    pub fn wbar(&self, k: usize) -> usize {
        3 * self.n - 2 + k
    }
    /// Index of `c`; coincides with the `∂φ̃` direction index.
    pub fn c(&self) -> usize {
        4 * self.n - 2
    }
    /// Number of coordinate variables (excluding `c`).
    pub fn coords(&self) -> usize {
        4 * self.n - 2
    }
    pub fn len(&self) -> usize {
        4 * self.n - 1
    }
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The bar-partner of a variable (`c` is its own partner).
    pub fn partner(&self, v: usize) -> usize {
        let m = self.n - 1;
        let n = self.n;
        if v < m {
            v + m
        } else if v < 2 * m {
            v - m
        } else if v < 2 * m + n {
            v + n
        } else if v < 2 * m + 2 * n {
            v - n
        } else {
            v
        }
    }

    pub fn label(&self, v: usize) -> String {
        let m = self.n - 1;
        let n = self.n;
        if v < m {
            format!("X{}", v + 1)
        } else if v < 2 * m {
            format!("Xbar{}", v - m + 1)
        } else if v < 2 * m + n {
            format!("w{}", v - 2 * m)
        } else if v < 2 * m + 2 * n {
            format!("wbar{}", v - 2 * m - n)
        } else {
            "c".to_string()
        }
    }
}

pub type Monomial = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, CRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(vars: Vars, z: CRat) -> Self {
        Poly::monomial(vars, &[], z)
    }

    /// `z·Π v` over the listed variables (repetition allowed).
    pub fn monomial(vars: Vars, factors: &[usize], z: CRat) -> Self {
        let mut m = vec![0u8; vars.len()];
        for &v in factors {
            m[v] += 1;
        }
        let mut p = Poly::zero();
        p.add_term(m, z);
        p
    }

    pub fn var(vars: Vars, v: usize) -> Self {
        Poly::monomial(vars, &[v], cr(1))
    }

    fn add_term(&mut self, m: Monomial, z: CRat) {
        if z.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(CRat::zero);
        *e = &*e + z;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, z) in &other.terms {
            out.add_term(m.clone(), z.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, z) in &other.terms {
            out.add_term(m.clone(), -z.clone());
        }
        out
    }

    pub fn scale(&self, s: &CRat) -> Poly {
        let mut out = Poly::zero();
        for (m, z) in &self.terms {
            out.add_term(m.clone(), z * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, z1) in &self.terms {
            for (m2, z2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, z1 * z2);
            }
        }
        out
    }

    /// Formal partial derivative in variable `v`.
    pub fn deriv(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, z) in &self.terms {
            let e = m[v];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[v] -= 1;
            out.add_term(m2, z * cr(e as i64));
        }
        out
    }

    /// Swap every variable with its bar-partner and conjugate coefficients.
    pub fn conj(&self, vars: Vars) -> Poly {
        let mut out = Poly::zero();
        for (m, z) in &self.terms {
            let mut m2 = vec![0u8; m.len()];
            for (v, e) in m.iter().enumerate() {
                m2[vars.partner(v)] = *e;
            }
            out.add_term(m2, z.conj());
        }
        out
    }

    /// Total degree in the coordinate variables (the symbol `c` excluded).
    pub fn coord_degree(&self, vars: Vars) -> usize {
        self.terms
            .keys()
            .map(|m| m[..vars.coords()].iter().map(|e| *e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn c_degree(&self, vars: Vars) -> usize {
        self.terms.keys().map(|m| m[vars.c()] as usize).max().unwrap_or(0)
    }

    pub fn monomial_label(vars: Vars, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(v, e)| if *e == 1 { vars.label(v) } else { format!("{}^{}", vars.label(v), e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn to_numeric(&self) -> NumPoly {
        NumPoly {
            terms: self.terms.iter().map(|(m, z)| (m.clone(), crat_to_c64(z))).collect(),
        }
    }

    pub fn display(&self, vars: Vars) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, z)| format!("({})*{}", fmt_crat(z), Poly::monomial_label(vars, m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Floating-point copy of a [`Poly`] for fast evaluation.
#[derive(Clone, Debug, Default)]
pub struct NumPoly {
    terms: Vec<(Monomial, Complex64)>,
}

impl NumPoly {
    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, z) in &self.terms {
            let mut t = *z;
            for (v, e) in m.iter().enumerate() {
                for _ in 0..*e {
                    t *= values[v];
                }
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ci;

    #[test]
    fn partner_is_involution() {
        for n in 1..5 {
            let vars = Vars { n };
            for v in 0..vars.len() {
                assert_eq!(vars.partner(vars.partner(v)), v);
            }
            assert_eq!(vars.partner(vars.c()), vars.c());
            assert_eq!(vars.partner(vars.w(0)), vars.wbar(0));
        }
    }

    #[test]
    fn derivative_and_product() {
        let vars = Vars { n: 2 };
        let x = Poly::var(vars, vars.x(1));
        let xb = Poly::var(vars, vars.xbar(1));
        let p = x.mul(&x).mul(&xb);
        assert_eq!(p.deriv(vars.x(1)), x.mul(&xb).scale(&cr(2)));
        assert_eq!(p.deriv(vars.w(0)), Poly::zero());
        assert_eq!(p.coord_degree(vars), 3);
    }

    #[test]
    fn conjugation_swaps_and_conjugates() {
        let vars = Vars { n: 2 };
        let p = Poly::monomial(vars, &[vars.w(0), vars.c()], ci(2));
        let q = Poly::monomial(vars, &[vars.wbar(0), vars.c()], ci(-2));
        assert_eq!(p.conj(vars), q);
        assert_eq!(p.conj(vars).conj(vars), p);
    }

    #[test]
    fn numeric_evaluation() {
        let vars = Vars { n: 1 };
        let p = Poly::monomial(vars, &[vars.w(0), vars.wbar(0)], cr(3)).add(&Poly::constant(vars, ci(1)));
        let w = Complex64::new(1.0, 2.0);
        let v = p.to_numeric().eval(&[w, w.conj(), Complex64::new(0.5, 0.0)]);
        assert!((v - Complex64::new(15.0, 1.0)).norm() < 1e-15);
    }
}
