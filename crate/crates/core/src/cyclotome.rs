//! Exact arithmetic in cyclotomic fields `Q(ζ_m) ≅ Q[x]/(Φ_m)`.
//!
//! Numbers are coefficient vectors over the power basis `1, ζ, ..., ζ^{φ(m)−1}`.
//! `Φ_m` is obtained by exact division of `x^m − 1` by `Φ_d` for the proper
//! divisors `d` of `m`, and memoized in a process-wide table.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, AlgebraElement, Rational};
use crate::groupcore::AbelianGroup;

type IntPoly = Vec<BigInt>;

fn phi_table() -> &'static RwLock<HashMap<u64, Arc<IntPoly>>> {
    static TABLE: OnceLock<RwLock<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Quotient of `num` by the monic polynomial `den`; panics if inexact.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// `Φ_m` as ascending integer coefficients (monic, degree `φ(m)`).
pub fn cyclotomic_polynomial(m: u64) -> Arc<IntPoly> {
    assert!(m > 0, "cyclotomic_polynomial: m must be positive");
    if let Some(p) = phi_table().read().unwrap().get(&m) {
        return p.clone();
    }
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = -BigInt::one();
    poly[m as usize] = BigInt::one();
    for d in arith::divisors(m) {
        if d < m {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    phi_table()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| poly.clone())
        .clone()
}

/// An element of `Q(ζ_m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    m: u64,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("({c})*z{}", self.m),
                _ => format!("({c})*z{}^{i}", self.m),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl CycloNumber {
    pub fn zero(m: u64) -> Self {
        assert!(m > 0, "cyclotomic modulus must be positive");
        Self {
            m,
            coeffs: vec![Rational::zero(); arith::euler_phi(m) as usize],
        }
    }

    pub fn from_rational(m: u64, q: Rational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = q;
        z
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, Rational::one())
    }

    /// `ζ_m^k`, for any integer `k`.
    pub fn root_power(m: u64, k: i64) -> Self {
        Self::from_power_terms(m, [(k, Rational::one())])
    }

    /// `Σ q_k ζ_m^k` reduced modulo `Φ_m`.
    pub fn from_power_terms(m: u64, terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut poly = vec![Rational::zero(); m as usize];
        for (k, q) in terms {
            poly[k.rem_euclid(m as i64) as usize] += q;
        }
        Self::reduce(m, poly)
    }

    /// Reduces an arbitrary-degree polynomial in `ζ` modulo `Φ_m`.
    fn reduce(m: u64, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        for i in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, d) in phi.iter().enumerate().take(deg) {
                if !d.is_zero() {
                    poly[i - deg + j] -= &c * Rational::from_integer(d.clone());
                }
            }
        }
        poly.resize(deg, Rational::zero());
        Self { m, coeffs: poly }
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if m == 0 || coeffs.len() != arith::euler_phi(m) as usize {
            return Err(Error::input(format!(
                "Q(zeta_{m}) needs exactly phi(m) coefficients"
            )));
        }
        Ok(Self { m, coeffs })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this number lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check_modulus(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.m, other.m))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        Ok(Self {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        Ok(Self {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    /// Product reduced modulo `Φ_m`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let n = self.coeffs.len();
        let mut poly = vec![Rational::zero(); (2 * n).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        Ok(Self::reduce(self.m, poly))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same modulus");
            }
            base = base.mul(&base).expect("same modulus");
            k >>= 1;
        }
        acc
    }

    /// The automorphism `ζ ↦ ζ^k`; requires `gcd(k, m) = 1`.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        let m = self.m as i64;
        let kr = k.rem_euclid(m) as u64;
        if self.m > 1 && arith::gcd(kr, self.m) != 1 {
            return Err(Error::input(format!("gcd({k}, {m}) != 1")));
        }
        Ok(Self::from_power_terms(
            self.m,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 * kr as i64, c.clone())),
        ))
    }

    /// The field norm `Π_σ σ(self)`, a rational.
    pub fn norm(&self) -> Rational {
        let mut acc = Self::one(self.m);
        for k in arith::units_mod(self.m) {
            acc = acc.mul(&self.galois_apply(k as i64).expect("unit")).expect("same modulus");
        }
        acc.as_rational().expect("norm is rational")
    }

    /// Multiplicative inverse via the product of the nontrivial conjugates.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::input("division by zero in Q(zeta_m)"));
        }
        let mut conj = Self::one(self.m);
        for k in arith::units_mod(self.m) {
            if k > 1 {
                conj = conj.mul(&self.galois_apply(k as i64)?)?;
            }
        }
        let n = self.mul(&conj)?.as_rational().expect("norm is rational");
        Ok(conj.scale(&(Rational::one() / n)))
    }

    /// Image under `Q(ζ_m) → Q(ζ_target)`, `ζ_m ↦ ζ_target^{target/m}`.
    pub fn embed(&self, target: u64) -> Result<Self> {
        if target % self.m != 0 {
            return Err(Error::ModulusMismatch(self.m, target));
        }
        let step = (target / self.m) as i64;
        Ok(Self::from_power_terms(
            target,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 * step, c.clone())),
        ))
    }

    pub fn to_json(&self) -> CycloJson {
        CycloJson {
            m: self.m,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(j: &CycloJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(j.m, coeffs)
    }
}

/// `{ "m": int, "coeffs": ["num/den", ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycloJson {
    pub m: u64,
    pub coeffs: Vec<String>,
}

/// Ramanujan's sum `c_m(t) = Σ_{k ∈ (Z/m)^*} ζ_m^{tk}` by the closed form
/// `μ(m/d)·φ(m)/φ(m/d)` with `d = gcd(t, m)`.
pub fn ramanujan_sum(m: u64, t: i64) -> i64 {
    assert!(m > 0, "ramanujan_sum: m must be positive");
    let d = arith::gcd(t.rem_euclid(m as i64) as u64, m);
    let d = if d == 0 { m } else { d };
    let q = m / d;
    arith::mobius(q) * (arith::euler_phi(m) / arith::euler_phi(q)) as i64
}

/// `c_m(t)` by summing the roots of unity in `Q(ζ_m)`.
pub fn ramanujan_sum_direct(m: u64, t: i64) -> Rational {
    let sum = CycloNumber::from_power_terms(
        m,
        arith::units_mod(m)
            .into_iter()
            .map(|k| (t.rem_euclid(m as i64) * k as i64, Rational::one())),
    );
    sum.as_rational()
        .expect("a Galois-stable sum of roots of unity is rational")
}

/// An element of `Q(ζ_m)[G]`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloAlgebraElement {
    group: Arc<AbelianGroup>,
    m: u64,
    coeffs: Vec<CycloNumber>,
}

impl fmt::Debug for CycloAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl CycloAlgebraElement {
    pub fn zero(group: &Arc<AbelianGroup>, m: u64) -> Self {
        Self {
            group: group.clone(),
            m,
            coeffs: vec![CycloNumber::zero(m); group.order()],
        }
    }

    pub fn one(group: &Arc<AbelianGroup>, m: u64) -> Self {
        let mut e = Self::zero(group, m);
        e.coeffs[0] = CycloNumber::one(m);
        e
    }

    pub fn from_coeffs(group: &Arc<AbelianGroup>, m: u64, coeffs: Vec<CycloNumber>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::SpecMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.m != m) {
            return Err(Error::ModulusMismatch(m, c.m));
        }
        Ok(Self {
            group: group.clone(),
            m,
            coeffs,
        })
    }

    /// Extends scalars of a rational element to `Q(ζ_m)`.
    pub fn from_rational(e: &AlgebraElement, m: u64) -> Self {
        Self {
            group: e.group().clone(),
            m,
            coeffs: e
                .coeffs()
                .iter()
                .map(|q| CycloNumber::from_rational(m, q.clone()))
                .collect(),
        }
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.group.spec() != other.group.spec() {
            return Err(Error::SpecMismatch(format!(
                "{} vs {}",
                self.group.spec(),
                other.group.spec()
            )));
        }
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycloNumber::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            group: self.group.clone(),
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let g = &self.group;
        let mut out = vec![CycloNumber::zero(self.m); g.order()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = g.mul_index(i, j);
                out[k] = out[k].add(&a.mul(b)?)?;
            }
        }
        Ok(Self {
            group: g.clone(),
            m: self.m,
            coeffs: out,
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.convolve(self).map(|sq| sq == *self).unwrap_or(false)
    }

    pub fn are_orthogonal(&self, other: &Self) -> Result<bool> {
        Ok(self.convolve(other)?.is_zero())
    }

    /// Applies `ζ ↦ ζ^k` to every coefficient.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        Ok(Self {
            group: self.group.clone(),
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.galois_apply(k))
                .collect::<Result<_>>()?,
        })
    }

    /// Changes the coefficient field to `Q(ζ_target)`, `m | target`.
    pub fn embed_scalars(&self, target: u64) -> Result<Self> {
        Ok(Self {
            group: self.group.clone(),
            m: target,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.embed(target))
                .collect::<Result<_>>()?,
        })
    }

    /// The element of `Q[G]` with the same coefficients, if all are rational.
    pub fn to_rational(&self) -> Option<AlgebraElement> {
        let coeffs = self
            .coeffs
            .iter()
            .map(CycloNumber::as_rational)
            .collect::<Option<Vec<_>>>()?;
        AlgebraElement::from_coeffs(&self.group, coeffs).ok()
    }

    /// `dim_{Q(ζ_m)}` of the ideal generated by this element: the rank of
    /// `{g·self : g ∈ G}` over `Q(ζ_m)`.
    pub fn component_dimension(&self) -> Result<usize> {
        let g = &self.group;
        let n = g.order();
        let mut rows: Vec<Vec<CycloNumber>> = (0..n)
            .map(|s| {
                let mut row = vec![CycloNumber::zero(self.m); n];
                for (h, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        row[g.mul_index(s, h)] = c.clone();
                    }
                }
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = rows[rank][col].inverse()?;
            let pivot_row: Vec<CycloNumber> = rows[rank]
                .iter()
                .map(|c| c.mul(&inv))
                .collect::<Result<_>>()?;
            for r in (rank + 1)..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].clone();
                for c in col..n {
                    rows[r][c] = rows[r][c].sub(&f.mul(&pivot_row[c])?)?;
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        Ok(rank)
    }

    pub fn to_json(&self) -> Vec<CycloJson> {
        self.coeffs.iter().map(CycloNumber::to_json).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rational_from_int(x: i64) -> Rational {
        num_rational::BigRational::from_integer(BigInt::from(x))
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cyc(m: u64, c: &[i64]) -> CycloNumber {
        CycloNumber::from_power_terms(m, c.iter().enumerate().map(|(i, &x)| (i as i64, rational_from_int(x))))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(*cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(*cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(*cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(*cyclotomic_polynomial(9), ints(&[1, 0, 0, 1, 0, 0, 1]));
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn phi_product_is_x_m_minus_1() {
        for m in 1..=60u64 {
            let mut prod = vec![BigInt::one()];
            for d in arith::divisors(m) {
                let f = cyclotomic_polynomial(d);
                let mut next = vec![BigInt::zero(); prod.len() + f.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in f.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expected = vec![BigInt::zero(); m as usize + 1];
            expected[0] = -BigInt::one();
            expected[m as usize] = BigInt::one();
            assert_eq!(prod, expected, "m = {m}");
            assert_eq!(cyclotomic_polynomial(m).len() as u64 - 1, arith::euler_phi(m));
        }
    }

    #[test]
    fn mul_examples() {
        let z4 = CycloNumber::root_power(4, 1);
        assert_eq!(z4.mul(&z4).unwrap(), CycloNumber::from_rational(4, q(-1, 1)));
        let z3 = CycloNumber::root_power(3, 1);
        let z3sq = CycloNumber::root_power(3, 2);
        assert_eq!(z3.mul(&z3sq).unwrap(), CycloNumber::one(3));
        // (1+ζ)(1+ζ^4) = 2 + ζ + ζ^4; ζ^4 = −1 − ζ − ζ^2 − ζ^3 mod Φ_5
        let a = cyc(5, &[1, 1]);
        let b = CycloNumber::from_power_terms(5, [(0, q(1, 1)), (4, q(1, 1))]);
        assert_eq!(a.mul(&b).unwrap(), cyc(5, &[1, 0, -1, -1]));
        assert_eq!(
            z4.mul(&z3).unwrap_err(),
            Error::ModulusMismatch(4, 3)
        );
    }

    #[test]
    fn galois_examples() {
        let a = cyc(7, &[3, -1, 0, 2, 5]);
        assert_eq!(a.galois_apply(1).unwrap(), a);
        let z4 = CycloNumber::root_power(4, 1);
        assert_eq!(z4.galois_apply(3).unwrap(), z4.neg());
        let two_then_three = a.galois_apply(2).unwrap().galois_apply(3).unwrap();
        assert_eq!(two_then_three, a.galois_apply(6).unwrap());
        assert!(a.galois_apply(7).is_err());
        assert!(z4.galois_apply(2).is_err());
        assert_eq!(
            CycloNumber::one(1).galois_apply(5).unwrap(),
            CycloNumber::one(1)
        );
    }

    #[test]
    fn ramanujan_examples() {
        for m in 1..20u64 {
            assert_eq!(ramanujan_sum(m, 0), arith::euler_phi(m) as i64);
        }
        assert_eq!(ramanujan_sum(4, 2), -2);
        assert_eq!(ramanujan_sum(5, 1), -1);
        assert_eq!(ramanujan_sum_direct(4, 2), q(-2, 1));
        assert_eq!(ramanujan_sum_direct(5, 1), q(-1, 1));
    }

    #[test]
    fn ramanujan_closed_form_matches_direct_sum() {
        for m in 1..=60u64 {
            for t in 0..m as i64 {
                assert_eq!(
                    rational_from_int(ramanujan_sum(m, t)),
                    ramanujan_sum_direct(m, t),
                    "c_{m}({t})"
                );
            }
        }
    }

    #[test]
    fn inverse_and_norm() {
        let a = cyc(9, &[1, 2, 0, -1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), CycloNumber::one(9));
        // N(1 − ζ_p) = p
        for p in [2u64, 3, 5, 7] {
            assert_eq!(cyc(p, &[1, -1]).norm(), q(p as i64, 1));
        }
        assert!(CycloNumber::zero(5).inverse().is_err());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let a = cyc(3, &[1, 2]);
        let b = cyc(3, &[-1, 5]);
        let ab = a.mul(&b).unwrap().embed(9).unwrap();
        assert_eq!(ab, a.embed(9).unwrap().mul(&b.embed(9).unwrap()).unwrap());
        assert_eq!(CycloNumber::root_power(3, 1).embed(9).unwrap(), CycloNumber::root_power(9, 3));
        assert!(a.embed(10).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = CycloNumber::from_power_terms(5, [(0, q(1, 3)), (3, q(-2, 7))]);
        let j = a.to_json();
        assert_eq!(j.m, 5);
        assert_eq!(j.coeffs, vec!["1/3", "0/1", "0/1", "-2/7"]);
        assert_eq!(CycloNumber::from_json(&j).unwrap(), a);
        assert!(CycloNumber::from_json(&CycloJson { m: 5, coeffs: vec!["1/1".into()] }).is_err());
    }

    fn arb_cyclo(m: u64) -> impl Strategy<Value = CycloNumber> {
        let n = arith::euler_phi(m) as usize;
        prop::collection::vec((-20i64..20, 1i64..6), n).prop_map(move |v| {
            CycloNumber::from_coeffs(m, v.into_iter().map(|(a, b)| q(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn galois_is_a_ring_homomorphism(
            (m, a, b, k) in prop::sample::select(vec![5u64, 8, 9, 12, 15])
                .prop_flat_map(|m| (Just(m), arb_cyclo(m), arb_cyclo(m),
                    prop::sample::select(arith::units_mod(m))))
        ) {
            let k = k as i64;
            prop_assert_eq!(a.add(&b).unwrap().galois_apply(k).unwrap(),
                a.galois_apply(k).unwrap().add(&b.galois_apply(k).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().galois_apply(k).unwrap(),
                a.galois_apply(k).unwrap().mul(&b.galois_apply(k).unwrap()).unwrap());
            let r = CycloNumber::from_rational(m, q(3, 7));
            prop_assert_eq!(r.galois_apply(k).unwrap(), r);
        }

        #[test]
        fn multiplication_is_commutative_and_associative(
            (a, b, c) in (arb_cyclo(12), arb_cyclo(12), arb_cyclo(12))
        ) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }
    }
}
