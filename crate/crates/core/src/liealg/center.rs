//! Center of Ũ(1,n−1) ⋉ Heis₂ₙ₊₁ as ℝ × 2πℤ × ℝ, and the lattices ker β,
//! ker β ∩ Ũ, ℱ and ℱ′, computed by solving ℤ-linear systems.
//!
//! A [`CenterVector`] `(u, m, z)` stands for `exp(2πu·C)·exp(2πm·C′)·exp(4πcz·T)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{mat_c, mat_c_prime, AlphaMap, SemiDirectElement};
use crate::error::{Error, Result};
use crate::exact::{crat, fmt_rat, mat_add, mat_scale, rat_gcd, rint, Rat};
use crate::fields::poly::Poly;
use crate::fields::PolyVectorField;

/// Which value of the deformation parameter the computation assumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `c` is a formal positive symbol.
    Positive,
    /// `c = 0`.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CenterVector {
    pub u: Rat,
    pub m: BigInt,
    pub z: Rat,
}

impl CenterVector {
    pub fn new(u: Rat, m: i64, z: Rat) -> Self {
        CenterVector { u, m: BigInt::from(m), z }
    }

    pub fn zero() -> Self {
        CenterVector { u: Rat::zero(), m: BigInt::zero(), z: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.m.is_zero() && self.z.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        CenterVector { u: &self.u + &o.u, m: &self.m + &o.m, z: &self.z + &o.z }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let q = Rat::from_integer(k.clone());
        CenterVector { u: &self.u * &q, m: &self.m * k, z: &self.z * &q }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    /// Human-readable form such as `(π,2π,0)` or `(0,0,4πc/3)`.
    pub fn pretty(&self) -> String {
        format!(
            "({},{},{})",
            fmt_pi_multiple(&(&self.u * rint(2)), "π"),
            fmt_pi_multiple(&Rat::from_integer(&self.m * 2), "π"),
            fmt_pi_multiple(&(&self.z * rint(4)), "πc"),
        )
    }
}

/// `q·symbol` written as `±pSYM/d`, omitting unit factors.
pub fn fmt_pi_multiple(q: &Rat, symbol: &str) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let p = q.numer().abs();
    let num = if p.is_one() { String::new() } else { p.to_string() };
    let den = if q.denom().is_one() { String::new() } else { format!("/{}", q.denom()) };
    format!("{sign}{num}{symbol}{den}")
}

impl Serialize for CenterVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CenterVector", 3)?;
        st.serialize_field("two_pi_R", &fmt_rat(&self.u))?;
        st.serialize_field("two_pi_Z", &self.m.to_i64().ok_or_else(|| serde::ser::Error::custom("m too large"))?)?;
        st.serialize_field("four_pi_c", &fmt_rat(&self.z))?;
        st.end()
    }
}

/// `ζ = γ·C + γ′·C′ + κ·c·T` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    pub gamma: Rat,
    pub gamma_prime: Rat,
    pub kappa: Rat,
}

impl CentralElement {
    pub fn new(gamma: Rat, gamma_prime: Rat, kappa: Rat) -> Self {
        CentralElement { gamma, gamma_prime, kappa }
    }

    /// `C₁ = C + 2cT`.
    pub fn c1() -> Self {
        CentralElement::new(rint(1), rint(0), rint(2))
    }

    /// `C₂ = −C − nC′ + 2(n−2)cT`, the element whose flow closes at time 2π/n.
    pub fn c2(n: usize) -> Self {
        let n = n as i64;
        CentralElement::new(rint(-1), rint(-n), rint(2 * (n - 2)))
    }

    /// The Killing field `α(ζ)` with `c` symbolic.
    pub fn field(&self, alpha: &AlphaMap) -> Result<PolyVectorField> {
        let n = alpha.n();
        let mat = mat_add(
            &mat_scale(&mat_c(n), &crat(self.gamma.clone(), Rat::zero())),
            &mat_scale(&mat_c_prime(n), &crat(self.gamma_prime.clone(), Rat::zero())),
        );
        let mut f = alpha.apply(&SemiDirectElement::from_matrix(mat))?;
        let vars = f.vars();
        let phi = f.phi_dir();
        f.add_to(phi, &Poly::monomial(vars, &[vars.c()], crat(self.kappa.clone(), Rat::zero())));
        Ok(f)
    }

    /// `exp(2πs·ζ)` as a center vector; `γ′·s` must be an integer.
    pub fn exp(&self, s: &Rat) -> Result<CenterVector> {
        let m = &self.gamma_prime * s;
        if !m.is_integer() {
            return Err(Error::Lattice(format!("C′ coefficient {} is not an integer", fmt_rat(&m))));
        }
        Ok(CenterVector { u: &self.gamma * s, m: m.to_integer(), z: &self.kappa * s / rint(2) })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n}; this lattice needs n >= 2")));
    }
    Ok(())
}

/// `exp(2π·C₁)` and `exp((2π/n)·C₂)`.
pub fn kernel_generators(n: usize) -> Result<[CenterVector; 2]> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    check_n(n)?;
    Ok([
        CentralElement::c1().exp(&rint(1))?,
        CentralElement::c2(n).exp(&Rat::new(BigInt::one(), BigInt::from(n)))?,
    ])
}

/// For `n = 1` the center is ℝ × ℝ and the kernel is generated by `(2π, 4πc)`.
pub fn kernel_generators_n1() -> CenterVector {
    CentralElement::c1().exp(&rint(1)).expect("C₁ has no C′ part")
}

/// Rotation angles (in turns) of `X^a`, `w⁰`, `wᵃ` and the `φ̃`-shift (in units
/// of `4πc`) produced by a center element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterPhases {
    pub x: Rat,
    pub w0: Rat,
    pub wa: Rat,
    pub phi: Rat,
}

pub fn center_phases(v: &CenterVector, n: usize) -> Result<CenterPhases> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let nn = Rat::from_integer(BigInt::from(n));
    let m = Rat::from_integer(v.m.clone());
    if n == 1 && !v.m.is_zero() {
        return Err(Error::Lattice("n = 1 has no ℤ-factor".into()));
    }
    let w0 = -&v.u + &m * (&nn - rint(1)) / &nn;
    Ok(CenterPhases {
        x: m.clone(),
        wa: -&v.u - &m / &nn,
        phi: &w0 + &v.z,
        w0,
    })
}

/// Whether the center element acts as the identity on N̄ₙ.
pub fn acts_trivially(v: &CenterVector, n: usize, branch: Branch) -> Result<bool> {
    let p = center_phases(v, n)?;
    let rot = p.x.is_integer() && p.w0.is_integer() && (n == 1 || p.wa.is_integer());
    Ok(rot && (branch == Branch::Zero || p.phi.is_zero()))
}

/// Generators of the subgroup of center elements that act trivially (`c > 0`).
pub fn kernel_from_action(n: usize) -> Result<Vec<CenterVector>> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    if n == 1 {
        return Ok(vec![CenterVector::new(rint(1), 0, rint(1))]);
    }
    let nn = n as i64;
    Ok(vec![CenterVector::new(rint(1), 0, rint(1)), CenterVector::new(Rat::new((nn - 1).into(), nn.into()), 1, rint(0))])
}

/// Primitive `(x, y) ∈ ℤ²` with `x·p + y·q = 0`, for rationals not both zero.
fn primitive_kernel(p: &Rat, q: &Rat) -> (BigInt, BigInt) {
    if q.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    if p.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    // x·p = −y·q  ⇒  (x, y) ∝ (q, −p) after clearing denominators
    let l = p.denom().lcm(q.denom());
    let a = (p * Rat::from_integer(l.clone())).to_integer();
    let b = (q * Rat::from_integer(l)).to_integer();
    let g = a.gcd(&b);
    (&b / &g, -(&a / &g))
}

fn combine(g: &[CenterVector; 2], x: &BigInt, y: &BigInt) -> CenterVector {
    g[0].scale(x).add(&g[1].scale(y))
}

fn normalize_sign(v: CenterVector) -> CenterVector {
    let flip = v.m.is_negative() || (v.m.is_zero() && (v.u.is_negative() || (v.u.is_zero() && v.z.is_negative())));
    if flip {
        v.neg()
    } else {
        v
    }
}

/// Generator of `L ∩ Ũ(1,n−1)` (vanishing Heisenberg coordinate) for a rank-2 lattice `L`.
pub fn ker_cap_su_from(g: &[CenterVector; 2]) -> CenterVector {
    let (x, y) = primitive_kernel(&g[0].z, &g[1].z);
    normalize_sign(combine(g, &x, &y))
}

/// `ker β ∩ Ũ(1,n−1)` for `c > 0`.
pub fn ker_cap_su(n: usize) -> Result<CenterVector> {
    Ok(ker_cap_su_from(&kernel_generators(n)?))
}

/// Generator of the Heisenberg coordinates reached by `L`.
pub fn f_generator_from(g: &[CenterVector]) -> CenterVector {
    let z = g.iter().fold(Rat::zero(), |acc, v| rat_gcd(&acc, &v.z));
    CenterVector { u: Rat::zero(), m: BigInt::zero(), z }
}

/// Heisenberg coordinate of the element of `L` with vanishing ℝ-coordinate.
pub fn fprime_generator_from(g: &[CenterVector; 2]) -> CenterVector {
    let (x, y) = primitive_kernel(&g[0].u, &g[1].u);
    let z = combine(g, &x, &y).z.abs();
    CenterVector { u: Rat::zero(), m: BigInt::zero(), z }
}

/// `ℱ = 𝒰 ∩ ℋ`; `None` means the trivial group.
pub fn f_generator(n: usize, branch: Branch) -> Result<Option<CenterVector>> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    if branch == Branch::Zero {
        return Ok(None);
    }
    if n == 1 {
        return Ok(Some(f_generator_from(&[kernel_generators_n1()])));
    }
    Ok(Some(f_generator_from(&kernel_generators(n)?)))
}

/// `ℱ′ = 𝒰′ ∩ ℋ`; `None` means the trivial group.
pub fn fprime_generator(n: usize, branch: Branch) -> Result<Option<CenterVector>> {
    check_n(n)?;
    if branch == Branch::Zero {
        return Ok(None);
    }
    Ok(Some(fprime_generator_from(&kernel_generators(n)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fields::{generator, GeneratorName};

    #[test]
    fn kernel_generators_small_n() {
        let [a, b] = kernel_generators(2).unwrap();
        assert_eq!(a, CenterVector::new(rint(1), 0, rint(1)));
        assert_eq!(b, CenterVector::new(rat(-1, 2), -1, rint(0)));
        assert_eq!(b.pretty(), "(-π,-2π,0)");
        let [_, b] = kernel_generators(3).unwrap();
        assert_eq!(b.pretty(), "(-2π/3,-2π,4πc/3)");
        assert_eq!(kernel_generators_n1().pretty(), "(2π,0,4πc)");
        assert!(kernel_generators(1).is_err());
    }

    #[test]
    fn ker_cap_su_values() {
        assert_eq!(ker_cap_su(2).unwrap(), CenterVector::new(rat(1, 2), 1, rint(0)));
        assert_eq!(ker_cap_su(3).unwrap(), CenterVector::new(rint(2), 3, rint(0)));
        assert_eq!(ker_cap_su(4).unwrap(), CenterVector::new(rat(3, 2), 2, rint(0)));
        assert_eq!(ker_cap_su(5).unwrap(), CenterVector::new(rint(4), 5, rint(0)));
    }

    #[test]
    fn f_values() {
        let f = |n| f_generator(n, Branch::Positive).unwrap().unwrap();
        assert_eq!(f(2).pretty(), "(0,0,4πc)");
        assert_eq!(f(3).pretty(), "(0,0,4πc/3)");
        assert_eq!(f(4).pretty(), "(0,0,2πc)");
        assert_eq!(f(1).pretty(), "(0,0,4πc)");
        let fp = |n| fprime_generator(n, Branch::Positive).unwrap().unwrap();
        assert_eq!(fp(2).pretty(), "(0,0,4πc)");
        assert_eq!(fp(3).pretty(), "(0,0,8πc)");
        assert_eq!(f_generator(3, Branch::Zero).unwrap(), None);
        assert_eq!(fprime_generator(3, Branch::Zero).unwrap(), None);
    }

    #[test]
    fn central_fields_match_catalogue() {
        for n in 2..5 {
            let alpha = AlphaMap::new(n);
            assert_eq!(CentralElement::c1().field(&alpha).unwrap(), generator(GeneratorName::C1, n).unwrap());
            // the displayed C₂ is C − nC′ + 2nc·T
            let displayed = CentralElement::new(rint(1), rint(-(n as i64)), rint(2 * n as i64));
            assert_eq!(displayed.field(&alpha).unwrap(), generator(GeneratorName::C2, n).unwrap());
        }
    }

    #[test]
    fn generators_of_action_kernel_act_trivially() {
        for n in 1..6 {
            for g in kernel_from_action(n).unwrap() {
                assert!(acts_trivially(&g, n, Branch::Positive).unwrap());
            }
        }
        // the second stated generator rotates wᵃ for n = 3
        let [_, b] = kernel_generators(3).unwrap();
        assert!(!acts_trivially(&b, 3, Branch::Positive).unwrap());
        let [_, b] = kernel_generators(2).unwrap();
        assert!(acts_trivially(&b, 2, Branch::Positive).unwrap());
    }

    #[test]
    fn serializes_in_units() {
        let v = CenterVector::new(rat(-1, 3), -1, rat(1, 3));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"two_pi_R":"-1/3","two_pi_Z":-1,"four_pi_c":"1/3"}"#);
    }

    #[test]
    fn pretty_multiples() {
        assert_eq!(fmt_pi_multiple(&rint(8), "πc"), "8πc");
        assert_eq!(fmt_pi_multiple(&rint(1), "π"), "π");
        assert_eq!(fmt_pi_multiple(&rat(-2, 3), "π"), "-2π/3");
    }
}
