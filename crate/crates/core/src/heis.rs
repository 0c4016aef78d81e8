//! The Heisenberg group ℂⁿ × ℝ with product `(v,t)(v′,t′) = (v+v′, t+t′+½ω(v,v′))`,
//! where `ω = Im h` and `h(v,w) = Σ ε_j v̄_j w_j`, `ε = (1, −1, …, −1)`.
//! Lattices are kept exact over ℚ(i, √d₁, √d₂, …).

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    fmt_rat, is_squarefree, mat_conj_transpose, mat_identity, mat_is_zero, mat_mul, mat_sub, mat_vec, rat,
    rational_rank, solve_rational, ExactMat, Rat, Surd,
};

fn eps(j: usize) -> i64 {
    if j == 0 {
        1
    } else {
        -1
    }
}

/// The signature-(1, n−1) form `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermForm {
    pub n: usize,
}

impl HermForm {
    pub fn new(n: usize) -> Self {
        HermForm { n }
    }

    pub fn matrix(&self) -> ExactMat<Surd> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| if i == j { Surd::from_int(eps(i)) } else { Surd::zero() }).collect())
            .collect()
    }

    pub fn h_exact(&self, v: &[Surd], w: &[Surd]) -> Surd {
        v.iter()
            .zip(w)
            .enumerate()
            .fold(Surd::zero(), |acc, (j, (a, b))| &acc + &(&a.conj() * b).scale_rat(&Rat::from_integer(eps(j).into())))
    }

    pub fn omega_exact(&self, v: &[Surd], w: &[Surd]) -> Surd {
        self.h_exact(v, w).im()
    }

    pub fn h(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        v.iter().zip(w).enumerate().map(|(j, (a, b))| a.conj() * b * eps(j) as f64).sum()
    }

    pub fn omega(&self, v: &[Complex64], w: &[Complex64]) -> f64 {
        self.h(v, w).im
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeisPoint {
    pub v: Vec<Complex64>,
    pub t: f64,
}

impl HeisPoint {
    pub fn identity(n: usize) -> Self {
        HeisPoint { v: vec![Complex64::zero(); n], t: 0.0 }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        check_len(self.v.len(), o.v.len())?;
        let om = HermForm::new(self.v.len()).omega(&self.v, &o.v);
        Ok(HeisPoint { v: self.v.iter().zip(&o.v).map(|(a, b)| a + b).collect(), t: self.t + o.t + 0.5 * om })
    }

    pub fn inverse(&self) -> Self {
        HeisPoint { v: self.v.iter().map(|a| -a).collect(), t: -self.t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactHeisPoint {
    pub v: Vec<Surd>,
    pub t: Surd,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

impl ExactHeisPoint {
    pub fn new(v: Vec<Surd>, t: Surd) -> Result<Self> {
        if !t.is_real() {
            return Err(Error::Lattice("center coordinate must be real".into()));
        }
        Ok(ExactHeisPoint { v, t })
    }

    pub fn identity(n: usize) -> Self {
        ExactHeisPoint { v: vec![Surd::zero(); n], t: Surd::zero() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        check_len(self.v.len(), o.v.len())?;
        let om = HermForm::new(self.v.len()).omega_exact(&self.v, &o.v);
        Ok(ExactHeisPoint {
            v: self.v.iter().zip(&o.v).map(|(a, b)| a + b).collect(),
            t: &(&self.t + &o.t) + &om.scale_rat(&rat(1, 2)),
        })
    }

    pub fn inverse(&self) -> Self {
        ExactHeisPoint { v: self.v.iter().map(|a| -a.clone()).collect(), t: -self.t.clone() }
    }

    pub fn to_float(&self) -> HeisPoint {
        HeisPoint { v: self.v.iter().map(Surd::to_c64).collect(), t: self.t.to_c64().re }
    }
}

/// `(gv, t)` for exact `g` with `g†Hg = H`.
pub fn su_action_exact(g: &ExactMat<Surd>, p: &ExactHeisPoint) -> Result<ExactHeisPoint> {
    let n = p.v.len();
    check_len(n, g.len())?;
    if !preserves_form(g) {
        return Err(Error::NotFormPreserving);
    }
    Ok(ExactHeisPoint { v: mat_vec(g, &p.v), t: p.t.clone() })
}

pub fn preserves_form(g: &ExactMat<Surd>) -> bool {
    let h = HermForm::new(g.len()).matrix();
    mat_mul(&mat_mul(&mat_conj_transpose(g), &h), g) == h
}

/// `(gv, t)` for floating-point `g`; `g†Hg` must agree with `H` entrywise to `tol`.
pub fn su_action(g: &DMatrix<Complex64>, p: &HeisPoint, tol: f64) -> Result<HeisPoint> {
    let n = p.v.len();
    check_len(n, g.nrows())?;
    check_len(n, g.ncols())?;
    let h = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(eps(i) as f64, 0.0) } else { Complex64::zero() });
    let defect = g.adjoint() * &h * g - &h;
    if defect.iter().any(|z| z.norm() > tol) {
        return Err(Error::NotFormPreserving);
    }
    let v = g * nalgebra::DVector::from_column_slice(&p.v);
    Ok(HeisPoint { v: v.iter().copied().collect(), t: p.t })
}

/// `Λ × ½rℤ` for a lattice `Λ ⊂ ℂⁿ` with `ω(Λ, Λ) = rℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisLattice {
    n: usize,
    basis: Vec<Vec<Surd>>,
    omega: Vec<Vec<Surd>>,
    r: Surd,
}

type CoordKey = (usize, u64, bool);

fn coord_map(v: &[Surd]) -> Vec<(CoordKey, Rat)> {
    v.iter()
        .enumerate()
        .flat_map(|(j, s)| s.rational_coords().into_iter().map(move |((r, im), q)| ((j, r, im), q)))
        .collect()
}

impl HeisLattice {
    /// The lattice generated by `basis`, which must be ℝ-linearly independent and
    /// have all ω-values in ℚ·√m for a single `m`.
    pub fn generated_by(n: usize, basis: Vec<Vec<Surd>>) -> Result<Self> {
        for b in &basis {
            check_len(n, b.len())?;
        }
        if basis.is_empty() {
            return Err(Error::Lattice("empty basis".into()));
        }
        let keys: BTreeSet<CoordKey> = basis.iter().flat_map(|b| coord_map(b).into_iter().map(|(k, _)| k)).collect();
        let rows: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| {
                let m = coord_map(b);
                keys.iter().map(|k| m.iter().find(|(kk, _)| kk == k).map(|(_, q)| q.clone()).unwrap_or_else(Rat::zero)).collect()
            })
            .collect();
        if rational_rank(&rows) != basis.len() {
            return Err(Error::Lattice("basis vectors are linearly dependent over ℚ".into()));
        }
        let form = HermForm::new(n);
        let omega: Vec<Vec<Surd>> =
            basis.iter().map(|a| basis.iter().map(|b| form.omega_exact(a, b)).collect()).collect();
        let mut radical: Option<u64> = None;
        let mut g = Rat::zero();
        for s in omega.iter().flatten().filter(|s| !s.is_zero()) {
            let (r, q) = s.as_real_radical().ok_or_else(|| Error::Lattice(format!("ω-value {s} is not a multiple of one radical")))?;
            if *radical.get_or_insert(r) != r {
                return Err(Error::Lattice("ω-values involve more than one radical".into()));
            }
            g = crate::exact::rat_gcd(&g, &q);
        }
        let r = match radical {
            Some(m) => Surd::sqrt(m).scale_rat(&g),
            None => return Err(Error::Lattice("ω vanishes on the lattice".into())),
        };
        Ok(HeisLattice { n, basis, omega, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Surd>] {
        &self.basis
    }

    /// `ω(b_i, b_j)` for the basis vectors.
    pub fn omega_table(&self) -> &[Vec<Surd>] {
        &self.omega
    }

    /// Generator `r` of `ω(Λ × Λ)`.
    pub fn r(&self) -> &Surd {
        &self.r
    }

    /// Generator `½r` of the intersection with the center.
    pub fn center_generator(&self) -> Surd {
        self.r.scale_rat(&rat(1, 2))
    }

    /// Integer coordinates of `v` in the basis, if `v ∈ Λ`.
    pub fn coordinates(&self, v: &[Surd]) -> Result<Option<Vec<BigInt>>> {
        check_len(self.n, v.len())?;
        let target = coord_map(v);
        let mut keys: BTreeSet<CoordKey> =
            self.basis.iter().flat_map(|b| coord_map(b).into_iter().map(|(k, _)| k)).collect();
        keys.extend(target.iter().map(|(k, _)| *k));
        let lookup = |m: &[(CoordKey, Rat)], k: &CoordKey| {
            m.iter().find(|(kk, _)| kk == k).map(|(_, q)| q.clone()).unwrap_or_else(Rat::zero)
        };
        let cols: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .map(|b| {
                let m = coord_map(b);
                keys.iter().map(|k| lookup(&m, k)).collect()
            })
            .collect();
        let rhs: Vec<Rat> = keys.iter().map(|k| lookup(&target, k)).collect();
        Ok(solve_rational(&cols, &rhs).and_then(|x| {
            x.iter().all(|q| q.is_integer()).then(|| x.iter().map(|q| q.to_integer()).collect())
        }))
    }

    pub fn contains_vector(&self, v: &[Surd]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Exact membership of `(v, t)` in `Λ × ½rℤ`.
    pub fn contains(&self, p: &ExactHeisPoint) -> Result<bool> {
        if !self.contains_vector(&p.v)? {
            return Ok(false);
        }
        Ok(match p.t.rational_ratio(&self.center_generator()) {
            Some(q) => q.is_integer(),
            None => p.t.is_zero(),
        })
    }

    /// Whether `g` maps every basis vector into `Λ`.
    pub fn maps_into(&self, g: &ExactMat<Surd>) -> Result<bool> {
        for b in &self.basis {
            if !self.contains_vector(&mat_vec(g, b))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether multiplication by the scalar `z` maps `Λ` into itself.
    pub fn stable_under_scalar(&self, z: &Surd) -> Result<bool> {
        for b in &self.basis {
            let zb: Vec<Surd> = b.iter().map(|x| x * z).collect();
            if !self.contains_vector(&zb)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn stable_under_conjugation(&self) -> Result<bool> {
        for b in &self.basis {
            let cb: Vec<Surd> = b.iter().map(Surd::conj).collect();
            if !self.contains_vector(&cb)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn radicals(&self) -> Vec<u64> {
        let mut set: BTreeSet<u64> = self.basis.iter().flatten().flat_map(|s| s.radicands().collect::<Vec<_>>()).collect();
        set.extend(self.r.radicands());
        set.insert(1);
        set.into_iter().collect()
    }
}

/// A complex number as rational coefficients over the listed radicals.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub re: Vec<String>,
    pub im: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeJson {
    pub n: usize,
    pub radicals: Vec<u64>,
    pub basis: Vec<Vec<ComponentJson>>,
    pub r: Vec<String>,
}

impl Serialize for HeisLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let radicals = self.radicals();
        let comp = |x: &Surd| ComponentJson {
            re: radicals.iter().map(|r| fmt_rat(&x.re_coeff(*r))).collect(),
            im: radicals.iter().map(|r| fmt_rat(&x.im_coeff(*r))).collect(),
        };
        LatticeJson {
            n: self.n,
            basis: self.basis.iter().map(|b| b.iter().map(comp).collect()).collect(),
            r: radicals.iter().map(|q| fmt_rat(&self.r.re_coeff(*q))).collect(),
            radicals,
        }
        .serialize(s)
    }
}

fn check_d(d: u64) -> Result<()> {
    if !is_squarefree(d) {
        return Err(Error::InvalidRadicand(format!("d = {d} is not square-free")));
    }
    if d % 4 == 3 {
        return Err(Error::InvalidRadicand(format!("d = {d} ≡ 3 mod 4: the ring of integers is not ℤ[i√d]")));
    }
    Ok(())
}

fn unit_vector(n: usize, j: usize, z: Surd) -> Vec<Surd> {
    (0..n).map(|k| if k == j { z.clone() } else { Surd::zero() }).collect()
}

/// `Λ_d = span_ℤ{e_j, √d·i·e_j}` with `r = √d`.
pub fn lattice_ld(n: usize, d: u64) -> Result<HeisLattice> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    check_d(d)?;
    let sdi = &Surd::sqrt(d) * &Surd::i();
    let mut basis: Vec<Vec<Surd>> = (0..n).map(|j| unit_vector(n, j, Surd::one())).collect();
    basis.extend((0..n).map(|j| unit_vector(n, j, sdi.clone())));
    HeisLattice::generated_by(n, basis)
}

/// `A = h(v, ·)w − h(w, ·)v` with `v = e₁+e₂`, `w = √d·i(e₁+e₂)`, and `g = 1 + A = exp(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentWitness {
    pub a: ExactMat<Surd>,
    pub g: ExactMat<Surd>,
    pub v: Vec<Surd>,
    pub w: Vec<Surd>,
}

pub fn unipotent_witness(n: usize, d: u64) -> Result<UnipotentWitness> {
    if n < 2 {
        return Err(Error::InvalidParams("the witness needs n >= 2".into()));
    }
    check_d(d)?;
    let sdi = &Surd::sqrt(d) * &Surd::i();
    let v: Vec<Surd> = (0..n).map(|j| if j < 2 { Surd::one() } else { Surd::zero() }).collect();
    let w: Vec<Surd> = v.iter().map(|x| x * &sdi).collect();
    // A_ij = w_i ε_j v̄_j − v_i ε_j w̄_j
    let a: ExactMat<Surd> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = Rat::from_integer(eps(j).into());
                    &(&w[i] * &v[j].conj()).scale_rat(&e) - &(&v[i] * &w[j].conj()).scale_rat(&e)
                })
                .collect()
        })
        .collect();
    let id = mat_identity::<Surd>(n);
    let g = a.iter().zip(&id).map(|(ra, ri)| ra.iter().zip(ri).map(|(x, y)| x + y).collect()).collect();
    Ok(UnipotentWitness { a, g, v, w })
}

/// Outcome of every postcondition of the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub n: usize,
    pub d: u64,
    pub nonzero: bool,
    pub square_zero: bool,
    pub skew_hermitian: bool,
    pub kills_v_and_w: bool,
    pub g_preserves_form: bool,
    pub g_maps_lattice: bool,
    pub g_inverse_maps_lattice: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.nonzero
            && self.square_zero
            && self.skew_hermitian
            && self.kills_v_and_w
            && self.g_preserves_form
            && self.g_maps_lattice
            && self.g_inverse_maps_lattice
    }
}

pub fn check_witness(n: usize, d: u64) -> Result<WitnessReport> {
    let wit = unipotent_witness(n, d)?;
    let lat = lattice_ld(n, d)?;
    let h = HermForm::new(n).matrix();
    let a_dag_h = mat_mul(&mat_conj_transpose(&wit.a), &h);
    let h_a = mat_mul(&h, &wit.a);
    let skew: ExactMat<Surd> = a_dag_h.iter().zip(&h_a).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect();
    let g_inv = mat_sub(&mat_identity(n), &wit.a);
    Ok(WitnessReport {
        n,
        d,
        nonzero: !mat_is_zero(&wit.a),
        square_zero: mat_is_zero(&mat_mul(&wit.a, &wit.a)),
        skew_hermitian: mat_is_zero(&skew),
        kills_v_and_w: mat_vec(&wit.a, &wit.v).iter().all(Zero::is_zero) && mat_vec(&wit.a, &wit.w).iter().all(Zero::is_zero),
        g_preserves_form: preserves_form(&wit.g),
        g_maps_lattice: lat.maps_into(&wit.g)?,
        g_inverse_maps_lattice: lat.maps_into(&g_inv)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ci, cr};

    fn s(p: i64) -> Surd {
        Surd::from_int(p)
    }

    #[test]
    fn omega_orientation() {
        let f = HermForm::new(2);
        assert_eq!(f.omega_exact(&[s(1), s(0)], &[Surd::i(), s(0)]), s(1));
        assert_eq!(f.omega_exact(&[s(0), s(1)], &[s(0), Surd::i()]), s(-1));
        assert!((f.omega(&[Complex64::new(1.0, 0.0)], &[Complex64::new(0.0, 1.0)]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn commutator_lands_in_center() {
        let v = vec![Surd::from_crat(cr(1)), s(0)];
        let w = vec![Surd::from_crat(ci(1)), s(2)];
        let a = ExactHeisPoint::new(v.clone(), s(0)).unwrap();
        let b = ExactHeisPoint::new(w.clone(), s(0)).unwrap();
        let sum: Vec<Surd> = v.iter().zip(&w).map(|(x, y)| -(x + y)).collect();
        let c = ExactHeisPoint::new(sum, s(0)).unwrap();
        let p = a.mul(&b).unwrap().mul(&c).unwrap();
        assert_eq!(p, ExactHeisPoint::new(vec![s(0), s(0)], Surd::from_rat(rat(1, 2))).unwrap());
    }

    #[test]
    fn ld_table_and_center() {
        let lat = lattice_ld(2, 6).unwrap();
        assert_eq!(lat.r(), &Surd::sqrt(6));
        assert_eq!(lat.center_generator(), Surd::sqrt(6).scale_rat(&rat(1, 2)));
        let t = lat.omega_table();
        assert_eq!(t[0][2], Surd::sqrt(6));
        assert_eq!(t[1][3], -Surd::sqrt(6));
        assert!(t[0][1].is_zero() && t[0][3].is_zero() && t[2][3].is_zero());
    }

    #[test]
    fn ld_membership() {
        let lat = lattice_ld(2, 5).unwrap();
        let half = ExactHeisPoint::new(vec![s(0), s(0)], Surd::sqrt(5).scale_rat(&rat(1, 2))).unwrap();
        let quarter = ExactHeisPoint::new(vec![s(0), s(0)], Surd::sqrt(5).scale_rat(&rat(1, 4))).unwrap();
        assert!(lat.contains(&half).unwrap());
        assert!(!lat.contains(&quarter).unwrap());
        let v = vec![s(1), &Surd::sqrt(5) * &Surd::i()];
        assert!(lat.contains(&ExactHeisPoint::new(v, s(0)).unwrap()).unwrap());
        let v = vec![Surd::from_rat(rat(1, 2)), s(0)];
        assert!(!lat.contains(&ExactHeisPoint::new(v, s(0)).unwrap()).unwrap());
        let v = vec![Surd::sqrt(2), s(0)];
        assert!(!lat.contains(&ExactHeisPoint::new(v, s(0)).unwrap()).unwrap());
    }

    #[test]
    fn rejects_bad_radicands() {
        assert!(matches!(lattice_ld(2, 3), Err(Error::InvalidRadicand(_))));
        assert!(matches!(lattice_ld(2, 4), Err(Error::InvalidRadicand(_))));
        assert!(matches!(lattice_ld(2, 7), Err(Error::InvalidRadicand(_))));
    }

    #[test]
    fn witness_postconditions() {
        for n in 2..4 {
            for d in [1, 2, 5, 6] {
                let r = check_witness(n, d).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let b = vec![vec![s(1)], vec![s(2)]];
        assert!(HeisLattice::generated_by(1, b).is_err());
    }

    #[test]
    fn non_unitary_rejected() {
        let g = vec![vec![s(2), s(0)], vec![s(0), s(1)]];
        assert!(matches!(su_action_exact(&g, &ExactHeisPoint::identity(2)), Err(Error::NotFormPreserving)));
    }
}
