//! Exact matrix model of 𝔤𝔩(n,ℂ) ⋉ 𝔥𝔢𝔦𝔰ᶜ, the involution σ whose fixed set
//! is 𝔲(1,n−1), and the anti-homomorphism α onto the polynomial vector fields.
//!
//! The complexified Heisenberg part is written in the basis `E_k = e_k − i f_k`,
//! `Ē_k = e_k + i f_k`, `T`, normalized by `[e_k, f_l] = 2 ε_k δ_{kl} T` with
//! `ε = (1, −1, …, −1)`, so that `α(E_k) = V_k` and `α(T) = ∂φ̃`.

pub mod center;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{ci, cr, crat, mat_add, mat_mul, mat_scale, mat_sub, mat_zero, rat, CRat, ExactMat};
use crate::fields::{generator, GeneratorName, PolyVectorField};

pub type MatGl = ExactMat<CRat>;

fn check_square(a: &MatGl) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: a.iter().map(Vec::len).find(|l| *l != n).unwrap_or(n) });
    }
    Ok(n)
}

fn eps(k: usize) -> i64 {
    if k == 0 {
        1
    } else {
        -1
    }
}

/// `A^σ = −I Āᵀ I` with `I = diag(−1, 1, …, 1)`.
pub fn sigma(a: &MatGl) -> Result<MatGl> {
    let n = check_square(a)?;
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    // −I_j conj(A_kj) I_k, and I_j I_k = ε_j ε_k
                    let s = -eps(j) * eps(k);
                    a[k][j].conj() * cr(s)
                })
                .collect()
        })
        .collect())
}

/// `(Re_σ A, Im_σ A)`, both σ-fixed, with `A = Re_σ A + i·Im_σ A`.
pub fn re_im_sigma(a: &MatGl) -> Result<(MatGl, MatGl)> {
    let s = sigma(a)?;
    let re = mat_scale(&mat_add(a, &s), &crat(rat(1, 2), rat(0, 1)));
    let im = mat_scale(&mat_sub(a, &s), &crat(rat(0, 1), rat(-1, 2)));
    Ok((re, im))
}

pub fn commutator(a: &MatGl, b: &MatGl) -> MatGl {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

fn unit(n: usize, i: usize, j: usize) -> MatGl {
    let mut m = mat_zero(n, n);
    m[i][j] = cr(1);
    m
}

/// `C = i·1`.
pub fn mat_c(n: usize) -> MatGl {
    let mut m = mat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ci(1);
    }
    m
}

/// `C′ = (i/n)·diag(1−n, 1, …, 1)`.
pub fn mat_c_prime(n: usize) -> MatGl {
    let mut m = mat_zero(n, n);
    let nn = n as i64;
    m[0][0] = crat(rat(0, 1), rat(1 - nn, nn));
    for (i, row) in m.iter_mut().enumerate().skip(1) {
        row[i] = crat(rat(0, 1), rat(1, nn));
    }
    m
}

pub fn mat_u(n: usize, a: usize) -> MatGl {
    unit(n, 0, a)
}

pub fn mat_u_sigma(n: usize, a: usize) -> MatGl {
    unit(n, a, 0)
}

/// Element `(A, x, y, t)` meaning `A + Σ x_k E_k + Σ y_k Ē_k + t·T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiDirectElement {
    pub a: MatGl,
    pub x: Vec<CRat>,
    pub y: Vec<CRat>,
    pub t: CRat,
}

impl SemiDirectElement {
    pub fn zero(n: usize) -> Self {
        SemiDirectElement { a: mat_zero(n, n), x: vec![CRat::zero(); n], y: vec![CRat::zero(); n], t: CRat::zero() }
    }

    pub fn from_matrix(a: MatGl) -> Self {
        let n = a.len();
        SemiDirectElement { a, ..SemiDirectElement::zero(n) }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn e(n: usize, k: usize) -> Self {
        let mut s = SemiDirectElement::zero(n);
        s.x[k] = cr(1);
        s
    }

    pub fn ebar(n: usize, k: usize) -> Self {
        let mut s = SemiDirectElement::zero(n);
        s.y[k] = cr(1);
        s
    }

    /// Real generator `e_k = (E_k + Ē_k)/2`.
    pub fn e_real(n: usize, k: usize) -> Self {
        let h = crat(rat(1, 2), rat(0, 1));
        SemiDirectElement::e(n, k).add(&SemiDirectElement::ebar(n, k)).scale(&h)
    }

    /// Real generator `f_k = i(E_k − Ē_k)/2`.
    pub fn f_real(n: usize, k: usize) -> Self {
        let h = crat(rat(0, 1), rat(1, 2));
        SemiDirectElement::e(n, k).sub(&SemiDirectElement::ebar(n, k)).scale(&h)
    }

    pub fn t(n: usize) -> Self {
        let mut s = SemiDirectElement::zero(n);
        s.t = cr(1);
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        SemiDirectElement {
            a: mat_add(&self.a, &o.a),
            x: self.x.iter().zip(&o.x).map(|(p, q)| p + q).collect(),
            y: self.y.iter().zip(&o.y).map(|(p, q)| p + q).collect(),
            t: &self.t + &o.t,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&cr(-1)))
    }

    pub fn scale(&self, s: &CRat) -> Self {
        SemiDirectElement {
            a: mat_scale(&self.a, s),
            x: self.x.iter().map(|p| p * s).collect(),
            y: self.y.iter().map(|p| p * s).collect(),
            t: &self.t * s,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(Zero::is_zero)
            && self.x.iter().all(Zero::is_zero)
            && self.y.iter().all(Zero::is_zero)
            && self.t.is_zero()
    }
}

/// Action of `A` on `E`-coordinates: `−Aᵀ`.
fn act_e(a: &MatGl, x: &[CRat]) -> Vec<CRat> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).fold(CRat::zero(), |acc, j| acc - &a[j][i] * &x[j]))
        .collect()
}

/// Action of `A` on `Ē`-coordinates: `I A I`.
fn act_ebar(a: &MatGl, y: &[CRat]) -> Vec<CRat> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).fold(CRat::zero(), |acc, j| acc + &a[i][j] * &y[j] * cr(eps(i) * eps(j))))
        .collect()
}

/// Bracket of 𝔤𝔩(n,ℂ) ⋉ 𝔥𝔢𝔦𝔰ᶜ; `[E_k, Ē_l] = 4i ε_k δ_{kl} T`.
pub fn semidirect_bracket(p: &SemiDirectElement, q: &SemiDirectElement) -> SemiDirectElement {
    let sub = |u: Vec<CRat>, v: Vec<CRat>| u.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>();
    let mut t = CRat::zero();
    for k in 0..p.n() {
        let d = &p.x[k] * &q.y[k] - &q.x[k] * &p.y[k];
        t = t + d * ci(4 * eps(k));
    }
    SemiDirectElement {
        a: commutator(&p.a, &q.a),
        x: sub(act_e(&p.a, &q.x), act_e(&q.a, &p.x)),
        y: sub(act_ebar(&p.a, &q.y), act_ebar(&q.a, &p.y)),
        t,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    C,
    U(usize),
    USigma(usize),
    /// `[U_a, U_b^σ]`.
    Comm(usize, usize),
    E(usize),
    EBar(usize),
    T,
}

impl BasisElement {
    /// `{C, U_a, U_a^σ, [U_a,U_b^σ], E_k, Ē_k, T}`.
    pub fn all(n: usize) -> Vec<BasisElement> {
        let mut out = vec![BasisElement::C];
        out.extend((1..n).map(BasisElement::U));
        out.extend((1..n).map(BasisElement::USigma));
        for a in 1..n {
            for b in 1..n {
                out.push(BasisElement::Comm(a, b));
            }
        }
        out.extend((0..n).map(BasisElement::E));
        out.extend((0..n).map(BasisElement::EBar));
        out.push(BasisElement::T);
        out
    }

    pub fn element(&self, n: usize) -> SemiDirectElement {
        match *self {
            BasisElement::C => SemiDirectElement::from_matrix(mat_c(n)),
            BasisElement::U(a) => SemiDirectElement::from_matrix(mat_u(n, a)),
            BasisElement::USigma(a) => SemiDirectElement::from_matrix(mat_u_sigma(n, a)),
            BasisElement::Comm(a, b) => SemiDirectElement::from_matrix(commutator(&mat_u(n, a), &mat_u_sigma(n, b))),
            BasisElement::E(k) => SemiDirectElement::e(n, k),
            BasisElement::EBar(k) => SemiDirectElement::ebar(n, k),
            BasisElement::T => SemiDirectElement::t(n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            BasisElement::C => "C".into(),
            BasisElement::U(a) => format!("U{a}"),
            BasisElement::USigma(a) => format!("U{a}s"),
            BasisElement::Comm(a, b) => format!("[U{a},U{b}s]"),
            BasisElement::E(k) => format!("E{k}"),
            BasisElement::EBar(k) => format!("Ebar{k}"),
            BasisElement::T => "T".into(),
        }
    }
}

/// Coordinates of a matrix in the basis `{C, U_a, U_a^σ, [U_a,U_b^σ]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlCoordinates {
    pub c: CRat,
    pub u: Vec<CRat>,
    pub u_sigma: Vec<CRat>,
    /// `comm[a−1][b−1]` multiplies `[U_a, U_b^σ]`.
    pub comm: Vec<Vec<CRat>>,
}

pub fn decompose(a: &MatGl) -> Result<GlCoordinates> {
    let n = check_square(a)?;
    let trace = (0..n).fold(CRat::zero(), |acc, i| acc + &a[i][i]);
    // tr C = n·i
    let gamma = trace / ci(n as i64);
    let i_gamma = &gamma * ci(1);
    let mut comm = vec![vec![CRat::zero(); n.saturating_sub(1)]; n.saturating_sub(1)];
    for a_idx in 1..n {
        for b_idx in 1..n {
            // [U_a, U_b^σ] = δ_ab E_00 − E_ba
            comm[a_idx - 1][b_idx - 1] = if a_idx == b_idx {
                &i_gamma - &a[a_idx][a_idx]
            } else {
                -a[b_idx][a_idx].clone()
            };
        }
    }
    Ok(GlCoordinates {
        c: gamma,
        u: (1..n).map(|j| a[0][j].clone()).collect(),
        u_sigma: (1..n).map(|j| a[j][0].clone()).collect(),
        comm,
    })
}

/// The map α on basis elements, with the image of `T` optionally rescaled
/// (used only to confirm that the structure check detects faults).
pub struct AlphaMap {
    n: usize,
    yc: PolyVectorField,
    ya: Vec<PolyVectorField>,
    ya_bar: Vec<PolyVectorField>,
    neg_comm: Vec<Vec<PolyVectorField>>,
    v: Vec<PolyVectorField>,
    v_bar: Vec<PolyVectorField>,
    t: PolyVectorField,
}

impl AlphaMap {
    pub fn new(n: usize) -> Self {
        Self::with_t_scale(n, cr(1))
    }

    pub fn with_t_scale(n: usize, t_scale: CRat) -> Self {
        let g = |name| generator(name, n).expect("valid generator index");
        let ya: Vec<_> = (1..n).map(|a| g(GeneratorName::Ya(a))).collect();
        let ya_bar: Vec<_> = (1..n).map(|a| g(GeneratorName::YaBar(a))).collect();
        let neg_comm = ya
            .iter()
            .map(|p| ya_bar.iter().map(|q| p.bracket(q).scale(&cr(-1))).collect())
            .collect();
        AlphaMap {
            n,
            yc: g(GeneratorName::YC),
            ya,
            ya_bar,
            neg_comm,
            v: (0..n).map(|k| g(GeneratorName::Vk(k))).collect(),
            v_bar: (0..n).map(|k| g(GeneratorName::VkBar(k))).collect(),
            t: g(GeneratorName::T).scale(&t_scale),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, s: &SemiDirectElement) -> Result<PolyVectorField> {
        if s.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: s.n() });
        }
        let d = decompose(&s.a)?;
        let mut out = self.yc.scale(&d.c);
        for i in 0..self.n - 1 {
            out = out.add(&self.ya[i].scale(&d.u[i])).add(&self.ya_bar[i].scale(&d.u_sigma[i]));
            for j in 0..self.n - 1 {
                if !d.comm[i][j].is_zero() {
                    out = out.add(&self.neg_comm[i][j].scale(&d.comm[i][j]));
                }
            }
        }
        for k in 0..self.n {
            out = out.add(&self.v[k].scale(&s.x[k])).add(&self.v_bar[k].scale(&s.y[k]));
        }
        Ok(out.add(&self.t.scale(&s.t)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub basis_size: usize,
    pub pairs_checked: usize,
    /// Ordered pairs `(A, B)` with `[α(A), α(B)] ≠ −α([A, B])`.
    pub mismatches: Vec<(String, String)>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `[α(A), α(B)] = −α([A, B])` exactly for every ordered pair of basis elements.
pub fn structure_check_with(alpha: &AlphaMap) -> StructureReport {
    let n = alpha.n();
    let basis = BasisElement::all(n);
    let elems: Vec<_> = basis.iter().map(|b| b.element(n)).collect();
    let images: Vec<_> = elems.iter().map(|e| alpha.apply(e).expect("shapes agree")).collect();
    let mut mismatches = Vec::new();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let lhs = images[i].bracket(&images[j]);
            let rhs = alpha
                .apply(&semidirect_bracket(&elems[i], &elems[j]))
                .expect("shapes agree")
                .scale(&cr(-1));
            if lhs != rhs {
                mismatches.push((basis[i].label(), basis[j].label()));
            }
        }
    }
    StructureReport { n, basis_size: basis.len(), pairs_checked: basis.len() * basis.len(), mismatches }
}

pub fn structure_check(n: usize) -> Result<StructureReport> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    Ok(structure_check_with(&AlphaMap::new(n)))
}

/// Whether `A^σ = A`.
pub fn is_sigma_fixed(a: &MatGl) -> Result<bool> {
    Ok(sigma(a)? == *a)
}
