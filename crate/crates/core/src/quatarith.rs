//! The rational quaternion algebra `(a, b / ℚ)` with `I² = a`, `J² = b`,
//! `IJ = K = −JI`, its standard order `ℤ⟨1, I, J, K⟩`, and the embedding into
//! `SU(1,1)` acting on the lattice `𝒪·e₁ ⊂ ℂ²`.

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{mat_det, mat_mul, ExactMat, Rat, Surd};
use crate::heis::{preserves_form, HeisLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuatParams {
    pub a: i64,
    pub b: i64,
}

impl QuatParams {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::InvalidParams(format!("a = {a} and b = {b} must be positive")));
        }
        Ok(QuatParams { a, b })
    }

    /// Whether the parameters satisfy the hypotheses giving a division algebra
    /// (`b` prime, `a` a non-residue mod `b`).
    pub fn is_fuchsian(&self) -> Result<bool> {
        is_nonresidue(self.a, self.b)
    }
}

/// `q₀ + q₁I + q₂J + q₃K` with integer coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuatInt {
    pub q: [i64; 4],
    pub params: QuatParams,
}

impl QuatInt {
    pub fn new(params: QuatParams, q: [i64; 4]) -> Self {
        QuatInt { q, params }
    }

    pub fn one(params: QuatParams) -> Self {
        QuatInt::new(params, [1, 0, 0, 0])
    }

    pub fn mul(&self, o: &QuatInt) -> Result<QuatInt> {
        if self.params != o.params {
            return Err(Error::ParamsMismatch);
        }
        let QuatParams { a, b } = self.params;
        let [x0, x1, x2, x3] = self.q;
        let [y0, y1, y2, y3] = o.q;
        // I² = a, J² = b, K² = −ab, IJ = K, JI = −K, IK = aJ, KI = −aJ, JK = −bI, KJ = bI
        let q0 = x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3;
        let q1 = x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2;
        let q2 = x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1;
        let q3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1;
        Ok(QuatInt::new(self.params, [q0, q1, q2, q3]))
    }

    /// `q₀² − a q₁² − b q₂² + ab q₃²`.
    pub fn reduced_norm(&self) -> i64 {
        let QuatParams { a, b } = self.params;
        let [q0, q1, q2, q3] = self.q;
        q0 * q0 - a * q1 * q1 - b * q2 * q2 + a * b * q3 * q3
    }

    /// The matrix `q₀𝟙 + q₁I + q₂J + q₃K` with `I = [[0, √a·i], [−√a·i, 0]]`,
    /// `J = √b·[[0, 1], [1, 0]]`, `K = √(ab)·i·diag(1, −1)`.
    pub fn embed_matrix(&self) -> ExactMat<Surd> {
        let QuatParams { a, b } = self.params;
        let [q0, q1, q2, q3] = self.q.map(Surd::from_int);
        let sa_i = &Surd::sqrt(a as u64) * &Surd::i();
        let sb = Surd::sqrt(b as u64);
        let sab_i = &Surd::sqrt((a * b) as u64) * &Surd::i();
        let k = &sab_i * &q3;
        let off = &(&sa_i * &q1) + &(&sb * &q2);
        let off_low = &(&sb * &q2) - &(&sa_i * &q1);
        vec![vec![&q0 + &k, off], vec![off_low, &q0 - &k]]
    }

    /// `Q†ηQ = η` with `η = diag(1, −1)`, exactly.
    pub fn su11_check(&self) -> Result<bool> {
        self.require_unit()?;
        Ok(preserves_form(&self.embed_matrix()))
    }

    /// Whether the embedded matrix maps `𝒪·e₁` into itself.
    pub fn preserves_gamma2(&self) -> Result<bool> {
        self.require_unit()?;
        gamma2_lattice(self.params)?.maps_into(&self.embed_matrix())
    }

    fn require_unit(&self) -> Result<()> {
        match self.reduced_norm() {
            1 => Ok(()),
            other => Err(Error::NormNotOne(other)),
        }
    }
}

/// `det` of the embedded matrix, as an exact value.
pub fn embed_det(q: &QuatInt) -> Surd {
    mat_det(&q.embed_matrix())
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Whether `a` has no square root modulo the prime `b`.
pub fn is_nonresidue(a: i64, b: i64) -> Result<bool> {
    if !is_prime(b) {
        return Err(Error::NotPrime(b));
    }
    let r = a.rem_euclid(b);
    Ok(!(0..b).any(|x| (x * x) % b == r))
}

/// All `q` with `max|q_i| ≤ bound` and reduced norm 1, in lexicographic order.
pub fn enumerate_norm_one(params: QuatParams, bound: i64) -> Vec<QuatInt> {
    let range = || -bound..=bound;
    let mut out = Vec::new();
    for q0 in range() {
        for q1 in range() {
            for q2 in range() {
                for q3 in range() {
                    let q = QuatInt::new(params, [q0, q1, q2, q3]);
                    if q.reduced_norm() == 1 {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

/// Number of seeded nonzero pairs in the box `[−bound, bound]⁴` whose product vanishes.
pub fn zero_divisor_count(params: QuatParams, rng: &mut impl Rng, samples: usize, bound: i64) -> usize {
    let mut draw = || loop {
        let q = QuatInt::new(params, std::array::from_fn(|_| rng.random_range(-bound..=bound)));
        if q.q.iter().any(|x| *x != 0) {
            return q;
        }
    };
    (0..samples)
        .filter(|_| {
            let (x, y) = (draw(), draw());
            x.mul(&y).map(|p| p.q == [0; 4]).unwrap_or(false)
        })
        .count()
}

/// Basis `{e₁, Ie₁, Je₁, Ke₁}` of `𝒪·e₁ ⊂ ℂ²`.
pub fn gamma2_basis(params: QuatParams) -> Vec<Vec<Surd>> {
    let e1 = |q| QuatInt::new(params, q).embed_matrix().into_iter().map(|row| row[0].clone()).collect::<Vec<_>>();
    vec![e1([1, 0, 0, 0]), e1([0, 1, 0, 0]), e1([0, 0, 1, 0]), e1([0, 0, 0, 1])]
}

/// The Heisenberg lattice `𝒪·e₁ × ½√(ab)ℤ`.
pub fn gamma2_lattice(params: QuatParams) -> Result<HeisLattice> {
    HeisLattice::generated_by(2, gamma2_basis(params))
}

/// A deformation parameter with `4πc = λ·½√(ab)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatibleC {
    pub c: f64,
    pub lambda: String,
    pub a: i64,
    pub b: i64,
    /// Period `4πc(n−1)` of `φ̃` in the quotient for `n = 2`.
    pub period: f64,
}

pub fn c_compatible(params: QuatParams, lambda: Rational64) -> Result<CompatibleC> {
    if lambda.is_negative() {
        return Err(Error::NegativeLambda);
    }
    let sab = ((params.a * params.b) as f64).sqrt();
    let l = lambda.to_f64().unwrap_or(f64::NAN);
    let c = if lambda.is_zero() { 0.0 } else { l * sab / (8.0 * std::f64::consts::PI) };
    Ok(CompatibleC {
        c,
        lambda: crate::exact::fmt_rat(&Rat::new((*lambda.numer()).into(), (*lambda.denom()).into())),
        a: params.a,
        b: params.b,
        period: 4.0 * std::f64::consts::PI * c,
    })
}

/// One line of an enumeration dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormOneRow {
    pub q0: i64,
    pub q1: i64,
    pub q2: i64,
    pub q3: i64,
    pub norm: i64,
    pub su11_ok: bool,
    pub preserves_gamma2: bool,
}

pub fn norm_one_rows(params: QuatParams, bound: i64) -> Result<Vec<NormOneRow>> {
    let lattice = gamma2_lattice(params)?;
    enumerate_norm_one(params, bound)
        .into_iter()
        .map(|q| {
            let g = q.embed_matrix();
            Ok(NormOneRow {
                q0: q.q[0],
                q1: q.q[1],
                q2: q.q[2],
                q3: q.q[3],
                norm: q.reduced_norm(),
                su11_ok: preserves_form(&g),
                preserves_gamma2: lattice.maps_into(&g)?,
            })
        })
        .collect()
}

/// `det(Q)` should equal the reduced norm; returns the rational value when it is rational.
pub fn embed_det_rational(q: &QuatInt) -> Option<Rat> {
    embed_det(q).as_rat()
}

/// Product of embedded matrices, for the homomorphism property.
pub fn embed_product(x: &QuatInt, y: &QuatInt) -> ExactMat<Surd> {
    mat_mul(&x.embed_matrix(), &y.embed_matrix())
}
