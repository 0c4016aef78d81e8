//! Exact scalars: rationals, Gaussian rationals and finite sums of square roots
//! with Gaussian-rational coefficients, plus the small amount of exact linear
//! algebra the lattice code needs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;
pub type CRat = Complex<BigRational>;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rint(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn crat(re: Rat, im: Rat) -> CRat {
    Complex::new(re, im)
}

/// The Gaussian integer `p`.
pub fn cr(p: i64) -> CRat {
    Complex::new(rint(p), Rat::zero())
}

/// The Gaussian integer `p·i`.
pub fn ci(p: i64) -> CRat {
    Complex::new(Rat::zero(), rint(p))
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn crat_to_c64(z: &CRat) -> Complex64 {
    Complex64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn fmt_crat(z: &CRat) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => fmt_rat(&z.re),
        (true, false) => format!("{}i", fmt_rat(&z.im)),
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", fmt_rat(&z.re), sign, fmt_rat(&z.im.abs()))
        }
    }
}

/// Non-negative generator of the subgroup of ℚ generated by `a` and `b`.
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rat::new(num, a.denom() * b.denom())
}

/// Writes `n = s²·r` with `r` square-free.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    assert!(n > 0, "radicand must be positive");
    let mut s = 1u64;
    let mut r = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    (s, r * m)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && squarefree_split(n).0 == 1
}

/// Operations shared by the exact scalar types used in matrices.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
}

impl Ring for CRat {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

/// A finite sum `Σ c_r √r` over distinct square-free radicands `r ≥ 1` with
/// Gaussian-rational coefficients. Distinct square-free radicals are linearly
/// independent over ℚ(i), so the representation is canonical and equality is
/// decidable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, CRat>,
}

impl Surd {
    pub fn from_crat(z: CRat) -> Self {
        let mut s = Surd::default();
        s.add_term(1, z);
        s
    }

    pub fn from_rat(q: Rat) -> Self {
        Surd::from_crat(Complex::new(q, Rat::zero()))
    }

    pub fn from_int(p: i64) -> Self {
        Surd::from_rat(rint(p))
    }

    pub fn i() -> Self {
        Surd::from_crat(ci(1))
    }

    /// `√n` for any positive integer `n`.
    pub fn sqrt(n: u64) -> Self {
        let (s, r) = squarefree_split(n);
        let mut out = Surd::default();
        out.add_term(r, cr(s as i64));
        out
    }

    /// `z·√n`.
    pub fn sqrt_times(n: u64, z: CRat) -> Self {
        Surd::sqrt(n).scale(&z)
    }

    fn add_term(&mut self, r: u64, z: CRat) {
        if z.is_zero() {
            return;
        }
        let e = self.terms.entry(r).or_insert_with(CRat::zero);
        *e = &*e + z;
        if e.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &CRat)> {
        self.terms.iter()
    }

    pub fn scale(&self, z: &CRat) -> Self {
        let mut out = Surd::default();
        for (r, c) in &self.terms {
            out.add_term(*r, c * z);
        }
        out
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        self.scale(&Complex::new(q.clone(), Rat::zero()))
    }

    pub fn conj(&self) -> Self {
        let mut out = Surd::default();
        for (r, c) in &self.terms {
            out.add_term(*r, c.conj());
        }
        out
    }

    pub fn re(&self) -> Self {
        let mut out = Surd::default();
        for (r, c) in &self.terms {
            out.add_term(*r, Complex::new(c.re.clone(), Rat::zero()));
        }
        out
    }

    pub fn im(&self) -> Self {
        let mut out = Surd::default();
        for (r, c) in &self.terms {
            out.add_term(*r, Complex::new(c.im.clone(), Rat::zero()));
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Rational part, if the value is rational.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let c = self.terms.get(&1)?;
                c.im.is_zero().then(|| c.re.clone())
            }
            _ => None,
        }
    }

    /// `(r, q)` with `self = q·√r`, when the value is a real rational multiple of one radical.
    pub fn as_real_radical(&self) -> Option<(u64, Rat)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (r, c) = self.terms.iter().next()?;
        c.im.is_zero().then(|| (*r, c.re.clone()))
    }

    /// `q` with `self = q·other`, if such a rational exists.
    pub fn rational_ratio(&self, other: &Surd) -> Option<Rat> {
        if other.is_zero() {
            return None;
        }
        let (r0, c0) = other.terms.iter().next()?;
        let candidate = self.terms.get(r0).cloned().unwrap_or_else(CRat::zero) / c0.clone();
        if !candidate.im.is_zero() {
            return None;
        }
        let q = candidate.re;
        (other.scale_rat(&q) == *self).then_some(q)
    }

    /// Coordinates over ℚ keyed by `(radicand, imaginary?)`.
    pub fn rational_coords(&self) -> Vec<((u64, bool), Rat)> {
        let mut out = Vec::new();
        for (r, c) in &self.terms {
            if !c.re.is_zero() {
                out.push(((*r, false), c.re.clone()));
            }
            if !c.im.is_zero() {
                out.push(((*r, true), c.im.clone()));
            }
        }
        out
    }

    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn to_c64(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(r, c)| crat_to_c64(c) * (*r as f64).sqrt())
            .sum()
    }

    /// Rational coefficient of `√r` in the real part (zero if absent).
    pub fn re_coeff(&self, r: u64) -> Rat {
        self.terms.get(&r).map(|c| c.re.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn im_coeff(&self, r: u64) -> Rat {
        self.terms.get(&r).map(|c| c.im.clone()).unwrap_or_else(Rat::zero)
    }
}

/// `√r·√s = g·√(rs/g²)` for square-free `r`, `s` with `g = gcd(r, s)`.
fn mul_radicals(r: u64, s: u64) -> (u64, u64) {
    let g = r.gcd(&s);
    (g, (r / g) * (s / g))
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::from_int(1)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.add_term(*r, c.clone());
        }
        out
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.add_term(*r, -c.clone());
        }
        out
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::default();
        for (r, a) in &self.terms {
            for (s, b) in &rhs.terms {
                let (g, t) = mul_radicals(*r, *s);
                out.add_term(t, a * b * cr(g as i64));
            }
        }
        out
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&cr(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl Ring for Surd {
    fn conj(&self) -> Self {
        Surd::conj(self)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| {
                if *r == 1 {
                    format!("({})", fmt_crat(c))
                } else {
                    format!("({})√{}", fmt_crat(c), r)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Dense exact matrix, row-major.
pub type ExactMat<T> = Vec<Vec<T>>;

pub fn mat_identity<T: Ring>(n: usize) -> ExactMat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_zero<T: Ring>(rows: usize, cols: usize) -> ExactMat<T> {
    vec![vec![T::zero(); cols]; rows]
}

pub fn mat_mul<T: Ring>(a: &ExactMat<T>, b: &ExactMat<T>) -> ExactMat<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "shape mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + row[k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_add<T: Ring>(a: &ExactMat<T>, b: &ExactMat<T>) -> ExactMat<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.clone() + q.clone()).collect())
        .collect()
}

pub fn mat_sub<T: Ring>(a: &ExactMat<T>, b: &ExactMat<T>) -> ExactMat<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.clone() - q.clone()).collect())
        .collect()
}

pub fn mat_scale<T: Ring>(a: &ExactMat<T>, s: &T) -> ExactMat<T> {
    a.iter()
        .map(|row| row.iter().map(|x| s.clone() * x.clone()).collect())
        .collect()
}

pub fn mat_transpose<T: Ring>(a: &ExactMat<T>) -> ExactMat<T> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_conj_transpose<T: Ring>(a: &ExactMat<T>) -> ExactMat<T> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|row| row[j].conj()).collect()).collect()
}

pub fn mat_vec<T: Ring>(a: &ExactMat<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn mat_is_zero<T: Ring>(a: &ExactMat<T>) -> bool {
    a.iter().all(|row| row.iter().all(|x| x.is_zero()))
}

/// Determinant by cofactor expansion; only used on tiny matrices.
pub fn mat_det<T: Ring>(a: &ExactMat<T>) -> T {
    match a.len() {
        0 => T::one(),
        1 => a[0][0].clone(),
        2 => a[0][0].clone() * a[1][1].clone() - a[0][1].clone() * a[1][0].clone(),
        n => {
            let mut acc = T::zero();
            for j in 0..n {
                let minor: ExactMat<T> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = a[0][j].clone() * mat_det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Solves `Σ_j x_j cols[j] = rhs` over ℚ. The columns must be linearly
/// independent; returns `None` when the system is inconsistent.
pub fn solve_rational(cols: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let k = cols.len();
    let m = rhs.len();
    let mut aug: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let p = (pivot_row..m).find(|&r| !aug[r][col].is_zero());
        let p = p.expect("lattice basis columns must be linearly independent");
        aug.swap(pivot_row, p);
        let inv = aug[pivot_row][col].recip();
        for x in aug[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m {
            if r != pivot_row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..=k {
                    let sub = &f * &aug[pivot_row][c];
                    aug[r][c] = &aug[r][c] - sub;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| aug[i][k].clone()).collect())
}

/// Rank over ℚ of a family of vectors of equal length.
pub fn rational_rank(vectors: &[Vec<Rat>]) -> usize {
    let mut rows: Vec<Vec<Rat>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = &*x - &f * y;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(36), (6, 1));
        assert_eq!(squarefree_split(50), (5, 2));
        assert!(is_squarefree(6));
        assert!(!is_squarefree(8));
    }

    #[test]
    fn radical_products_normalize() {
        let s2 = Surd::sqrt(2);
        let s3 = Surd::sqrt(3);
        assert_eq!(&s2 * &s2, Surd::from_int(2));
        assert_eq!(&s2 * &s3, Surd::sqrt(6));
        assert_eq!(&Surd::sqrt(6) * &s3, Surd::sqrt(2).scale(&cr(3)));
        assert_eq!(Surd::sqrt(4), Surd::from_int(2));
        assert_eq!(Surd::sqrt(1), Surd::one());
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Surd::i();
        assert_eq!(&i * &i, Surd::from_int(-1));
        assert_eq!(i.conj(), -&i);
    }

    #[test]
    fn ratio_detection() {
        let a = Surd::sqrt(6).scale_rat(&rat(3, 2));
        assert_eq!(a.rational_ratio(&Surd::sqrt(6)), Some(rat(3, 2)));
        assert_eq!(a.rational_ratio(&Surd::sqrt(2)), None);
        assert_eq!(Surd::i().rational_ratio(&Surd::one()), None);
    }

    #[test]
    fn rational_gcd() {
        assert_eq!(rat_gcd(&rat(1, 2), &rat(1, 3)), rat(1, 6));
        assert_eq!(rat_gcd(&rint(4), &rint(6)), rint(2));
        assert_eq!(rat_gcd(&rint(0), &rat(-2, 3)), rat(2, 3));
    }

    #[test]
    fn rational_format_roundtrip() {
        for q in [rat(1, 2), rint(-3), rat(-7, 9), rint(0)] {
            assert_eq!(parse_rat(&fmt_rat(&q)), Some(q));
        }
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn solve_integral_combination() {
        let cols = vec![vec![rint(1), rint(0)], vec![rint(1), rint(2)]];
        let x = solve_rational(&cols, &[rint(3), rint(4)]).unwrap();
        assert_eq!(x, vec![rint(1), rint(2)]);
        let cols = vec![vec![rint(1), rint(0), rint(0)]];
        assert!(solve_rational(&cols, &[rint(1), rint(1), rint(0)]).is_none());
    }

    #[test]
    fn determinant_small() {
        let m: ExactMat<CRat> = vec![
            vec![cr(2), cr(0), cr(1)],
            vec![cr(1), cr(3), cr(0)],
            vec![cr(0), cr(1), cr(1)],
        ];
        assert_eq!(mat_det(&m), cr(7));
    }
}
