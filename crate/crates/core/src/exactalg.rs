//! Exact arithmetic in the rational group algebra `Q[G]`.
//!
//! Elements are dense coefficient vectors indexed by the canonical element
//! enumeration of an [`AbelianGroup`]. Nothing here rounds.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::groupcore::{AbelianGroup, GroupElement};

pub type Rational = BigRational;

/// Formats a rational as `"num/den"`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// An element `Σ_g a_g g` of `Q[G]`.
#[derive(Clone)]
pub struct AlgebraElement {
    group: Arc<AbelianGroup>,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "AlgebraElement[{}]", c.join(", "))
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.group.spec() == other.group.spec() && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

fn same_group(a: &AbelianGroup, b: &AbelianGroup) -> Result<()> {
    if a.spec() == b.spec() {
        Ok(())
    } else {
        Err(Error::SpecMismatch(format!("{} vs {}", a.spec(), b.spec())))
    }
}

impl AlgebraElement {
    pub fn zero(group: &Arc<AbelianGroup>) -> Self {
        Self {
            group: group.clone(),
            coeffs: vec![Rational::zero(); group.order()],
        }
    }

    pub fn one(group: &Arc<AbelianGroup>) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[0] = Rational::one();
        e
    }

    /// The basis element `g`.
    pub fn basis(group: &Arc<AbelianGroup>, g: &GroupElement) -> Result<Self> {
        group.check(g)?;
        let mut e = Self::zero(group);
        e.coeffs[group.index_of(g)] = Rational::one();
        Ok(e)
    }

    pub fn from_coeffs(group: &Arc<AbelianGroup>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::SpecMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Self {
            group: group.clone(),
            coeffs,
        })
    }

    pub fn from_coeff_strings(group: &Arc<AbelianGroup>, coeffs: &[String]) -> Result<Self> {
        let parsed = coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(group, parsed)
    }

    /// `Ĥ = (1/|H|) Σ_{h∈H} h` for the subgroup with the given element indices.
    pub fn subgroup_average_of(group: &Arc<AbelianGroup>, members: &[usize]) -> Self {
        let mut e = Self::zero(group);
        let c = Rational::new(BigInt::one(), BigInt::from(members.len()));
        for &i in members {
            e.coeffs[i] = c.clone();
        }
        e
    }

    /// `Ĥ` for `H = ⟨gens⟩`.
    pub fn subgroup_average(group: &Arc<AbelianGroup>, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            group.check(g)?;
        }
        Ok(Self::subgroup_average_of(group, &group.closure_indices(gens)))
    }

    /// `e_X = (1 + X + ... + X^{k−1})/k` for `X = g`.
    pub fn power_average(group: &Arc<AbelianGroup>, g: &GroupElement, k: u64) -> Result<Self> {
        group.check(g)?;
        let mut e = Self::zero(group);
        let c = Rational::new(BigInt::one(), BigInt::from(k));
        let mut x = group.identity();
        for _ in 0..k {
            let i = group.index_of(&x);
            e.coeffs[i] += &c;
            x = group.mul_unchecked(&x, g);
        }
        Ok(e)
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &GroupElement) -> &Rational {
        &self.coeffs[self.group.index_of(g)]
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `g·self`, a permutation of coefficients.
    pub fn translate(&self, g_index: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len()];
        for (h, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[self.group.mul_index(g_index, h)] = c.clone();
            }
        }
        Self {
            group: self.group.clone(),
            coeffs,
        }
    }

    /// Common denominator and the nonzero integer numerators over it.
    fn integer_form(&self) -> (BigInt, Vec<(usize, BigInt)>) {
        let den = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.numer() * (&den / c.denom())))
            .collect();
        (den, nums)
    }

    /// The group-algebra product `(Σ a_g g)(Σ b_h h) = Σ a_g b_h (gh)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        same_group(&self.group, &other.group)?;
        let g = &self.group;
        let (da, na) = self.integer_form();
        let (db, nb) = other.integer_form();
        let den = da * db;

        const SMALL: i64 = 1 << 50;
        let small = |v: &[(usize, BigInt)]| -> Option<Vec<(usize, i64)>> {
            v.iter()
                .map(|(i, x)| x.to_i64().filter(|y| y.abs() < SMALL).map(|y| (*i, y)))
                .collect()
        };
        let numerators: Vec<BigInt> = match (small(&na), small(&nb)) {
            (Some(sa), Some(sb)) if g.order() < (1 << 20) => {
                let (outer, inner) = if sa.len() <= sb.len() { (sa, sb) } else { (sb, sa) };
                let acc = if inner.len() * 8 < g.order() {
                    let mut acc = vec![0i128; g.order()];
                    for &(i, x) in &outer {
                        for &(j, y) in &inner {
                            acc[g.mul_index(i, j)] += x as i128 * y as i128;
                        }
                    }
                    acc
                } else {
                    let dense = |v: &[(usize, i64)]| {
                        let mut d = vec![0i64; g.order()];
                        for &(j, y) in v {
                            d[j] = y;
                        }
                        d
                    };
                    g.convolve_integers(&dense(&outer), &dense(&inner))
                };
                acc.into_iter().map(BigInt::from).collect()
            }
            _ => {
                let mut acc = vec![BigInt::zero(); g.order()];
                for (i, x) in &na {
                    for (j, y) in &nb {
                        acc[g.mul_index(*i, *j)] += x * y;
                    }
                }
                acc
            }
        };
        Ok(Self {
            group: g.clone(),
            coeffs: numerators
                .into_iter()
                .map(|n| if n.is_zero() { Rational::zero() } else { Rational::new(n, den.clone()) })
                .collect(),
        })
    }

    /// `true` iff `self·self = self` exactly.
    pub fn is_idempotent(&self) -> bool {
        self.convolve(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// `true` iff `self·other = 0`.
    pub fn are_orthogonal(&self, other: &Self) -> Result<bool> {
        Ok(self.convolve(other)?.is_zero())
    }

    /// Sorted indices of `{g : g·a = a}`.
    pub fn stabilizer(&self) -> Vec<usize> {
        let g = &self.group;
        let (_, nums) = self.integer_form();
        let Some(first) = nums.first().map(|(h, _)| *h) else {
            return (0..g.order()).collect();
        };
        let mut dense = vec![BigInt::zero(); g.order()];
        for (h, x) in &nums {
            dense[*h] = x.clone();
        }
        // K is a subgroup, so each new member brings its whole coset span
        // along and only a few candidates need the full pass
        let mut in_k = vec![false; g.order()];
        in_k[0] = true;
        let mut members = vec![0];
        for k in 1..g.order() {
            if in_k[k]
                || dense[g.mul_index(k, first)] != dense[first]
                || !g.translates(k).zip(&dense).all(|(kh, x)| dense[kh] == *x)
            {
                continue;
            }
            let base = members.clone();
            let mut shift = k;
            while !in_k[shift] {
                for &m in &base {
                    let x = g.mul_index(m, shift);
                    in_k[x] = true;
                    members.push(x);
                }
                shift = g.mul_index(shift, k);
            }
        }
        members.sort_unstable();
        members
    }

    /// `Σ items`, accumulated over a common denominator.
    pub fn sum(group: &Arc<AbelianGroup>, items: &[Self]) -> Result<Self> {
        let mut den = BigInt::one();
        for e in items {
            same_group(group, &e.group)?;
            for c in e.coeffs.iter().filter(|c| !c.is_zero()) {
                if !den.is_multiple_of(c.denom()) {
                    den = den.lcm(c.denom());
                }
            }
        }
        let mut acc = vec![BigInt::zero(); group.order()];
        for e in items {
            for (a, c) in acc.iter_mut().zip(&e.coeffs) {
                if !c.is_zero() {
                    *a += c.numer() * (&den / c.denom());
                }
            }
        }
        Ok(Self {
            group: group.clone(),
            coeffs: acc
                .into_iter()
                .map(|n| if n.is_zero() { Rational::zero() } else { Rational::new(n, den.clone()) })
                .collect(),
        })
    }

    /// `K = {g : g·e = e}`, `|G/K|`, and `dim_Q Q[G]e`.
    ///
    /// For a primitive idempotent `G/K` is cyclic and `Q[G]e ≅ Q(ζ_{|G/K|})`,
    /// so the computed rank must equal `φ(|G/K|)`.
    pub fn kernel_and_field(&self) -> Result<KernelInfo> {
        if !self.is_idempotent() {
            return Err(Error::input("kernel_and_field needs an idempotent"));
        }
        if self.is_zero() {
            return Err(Error::input("kernel_and_field needs a nonzero idempotent"));
        }
        let g = &self.group;
        let n = g.order();
        let kernel = self.stabilizer();

        // g·e depends only on the coset gK and is constant on cosets, so both
        // rows and columns can be taken over G/K
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for rep in 0..n {
            if coset_of[rep] != usize::MAX {
                continue;
            }
            for &k in &kernel {
                coset_of[g.mul_index(rep, k)] = reps.len();
            }
            reps.push(rep);
        }
        let (_, nums) = self.integer_form();
        let rows: Vec<Vec<BigInt>> = reps
            .iter()
            .map(|&rep| {
                let mut row = vec![BigInt::zero(); reps.len()];
                for (h, x) in &nums {
                    row[coset_of[g.mul_index(rep, *h)]] = x.clone();
                }
                row
            })
            .collect();
        let quotient_order = rows.len() as u64;
        let dim = exact_rank(rows);
        let expected = arith::euler_phi(quotient_order) as usize;
        if dim != expected {
            return Err(Error::Inconsistency(format!(
                "component dimension {dim} differs from phi({quotient_order}) = {expected}; \
                 the idempotent is not primitive"
            )));
        }
        Ok(KernelInfo {
            kernel,
            quotient_order,
            dim,
        })
    }
}

/// Result of [`AlgebraElement::kernel_and_field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelInfo {
    /// Sorted element indices of `K`.
    pub kernel: Vec<usize>,
    /// `|G/K|`.
    pub quotient_order: u64,
    /// `dim_Q Q[G]e`.
    pub dim: usize,
}

impl KernelInfo {
    /// `r` with `|G/K| = p^r`, when the quotient is a p-group.
    pub fn field_index(&self, p: u64) -> Option<u32> {
        arith::log_exact(self.quotient_order, p)
    }
}

/// `(1/den)·Σ nums[g] g` with machine-word numerators, in lowest terms:
/// `gcd(den, nums…) = 1` and `den > 0`. A sixteenth of the footprint of the
/// dense rational form, and equal elements pack identically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PackedElement {
    den: i64,
    nums: Vec<i64>,
}

impl PackedElement {
    pub fn new(den: i64, mut nums: Vec<i64>) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("packed element with zero denominator"));
        }
        let g = nums.iter().fold(den, |acc, &x| acc.gcd(&x));
        let sign = den.signum();
        let den = den / g * sign;
        for x in &mut nums {
            *x = *x / g * sign;
        }
        Ok(Self { den, nums })
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn nums(&self) -> &[i64] {
        &self.nums
    }

    pub fn unpack(&self, group: &Arc<AbelianGroup>) -> Result<AlgebraElement> {
        let den = BigInt::from(self.den);
        let mut cache = std::collections::BTreeMap::new();
        let coeffs = self
            .nums
            .iter()
            .map(|&x| {
                cache
                    .entry(x)
                    .or_insert_with(|| Rational::new(BigInt::from(x), den.clone()))
                    .clone()
            })
            .collect();
        AlgebraElement::from_coeffs(group, coeffs)
    }
}

impl AlgebraElement {
    /// The packed form, or `Inconsistency` if a numerator or the common
    /// denominator leaves `i64`.
    pub fn pack(&self) -> Result<PackedElement> {
        let (den, nums) = self.integer_form();
        let overflow = || Error::Inconsistency("coefficients too large to pack".into());
        let den = den.to_i64().ok_or_else(overflow)?;
        let mut dense = vec![0i64; self.coeffs.len()];
        for (i, x) in nums {
            dense[i] = x.to_i64().ok_or_else(overflow)?;
        }
        PackedElement::new(den, dense)
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn exact_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let factor = row[col].clone();
            for c in col..ncols {
                // exact division by the previous pivot
                let v = (&pv * &row[c] - &factor * &pivot_row[c]) / &prev;
                row[c] = v;
            }
        }
        prev = pv;
        rank += 1;
    }
    rank
}

/// The factored form `K̂` or `K̂·(1 − e_z)` of an idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredIdempotent {
    /// Generators of the averaged subgroup `K`.
    pub kernel_gens: Vec<GroupElement>,
    /// The element `z` of the single primed factor `e'_z`, if any.
    pub primed: Option<GroupElement>,
}

impl FactoredIdempotent {
    pub fn average(kernel_gens: Vec<GroupElement>) -> Self {
        Self {
            kernel_gens,
            primed: None,
        }
    }

    pub fn primed(kernel_gens: Vec<GroupElement>, z: GroupElement) -> Self {
        Self {
            kernel_gens,
            primed: Some(z),
        }
    }

    /// Expands to a coefficient vector: `K̂`, or `K̂·(1 − e_z)` where
    /// `e_z = (1 + z + ... + z^{p−1})/p` and `p` is the order of `z` modulo `K`.
    pub fn expand(&self, group: &Arc<AbelianGroup>) -> Result<AlgebraElement> {
        let Some(z) = &self.primed else {
            return AlgebraElement::subgroup_average(group, &self.kernel_gens);
        };
        for g in &self.kernel_gens {
            group.check(g)?;
        }
        group.check(z)?;
        let members = group.closure_indices(&self.kernel_gens);
        let in_k = |x: &GroupElement| members.binary_search(&group.index_of(x)).is_ok();
        if in_k(z) {
            return Err(Error::InvariantViolation(format!(
                "primed element {z} lies in the averaged subgroup"
            )));
        }
        let mut p = 1u64;
        let mut x = z.clone();
        while !in_k(&x) {
            x = group.mul_unchecked(&x, z);
            p += 1;
        }
        if !arith::is_prime(p) {
            return Err(Error::InvariantViolation(format!(
                "primed element {z} has order {p} modulo the averaged subgroup, not a prime"
            )));
        }
        // K̂·(1 − e_z) is (p−1)/(p|K|) on K and −1/(p|K|) on the other
        // cosets z^i·K, 0 < i < p
        let scale = BigInt::from(p) * BigInt::from(members.len());
        let on_k = Rational::new(BigInt::from(p - 1), scale.clone());
        let off_k = Rational::new(-BigInt::one(), scale);
        let mut coeffs = vec![Rational::zero(); group.order()];
        let mut shift = group.identity();
        for i in 0..p {
            let s = group.index_of(&shift);
            let c = if i == 0 { &on_k } else { &off_k };
            for &k in &members {
                coeffs[group.mul_index(s, k)] = c.clone();
            }
            shift = group.mul_unchecked(&shift, z);
        }
        AlgebraElement::from_coeffs(group, coeffs)
    }
}

/// Serialized form of an algebra element: coefficients as `"num/den"` strings
/// in canonical element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVec(pub Vec<String>);

impl From<&AlgebraElement> for CoeffVec {
    fn from(e: &AlgebraElement) -> Self {
        CoeffVec(e.coeff_strings())
    }
}


#[cfg(test)]
mod fast_path_tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_convolve(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let g = a.group();
        let mut out = vec![Rational::zero(); g.order()];
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                out[g.mul_index(i, j)] += x * y;
            }
        }
        AlgebraElement::from_coeffs(g, out).unwrap()
    }

    fn group(text: &str) -> Arc<AbelianGroup> {
        Arc::new(AbelianGroup::new(text.parse().unwrap(), 1 << 12).unwrap())
    }

    proptest! {
        #[test]
        fn convolve_matches_naive(
            which in 0usize..3,
            a in proptest::collection::vec((-6i64..6, 1i64..5), 24),
            b in proptest::collection::vec((-6i64..6, 1i64..5), 24),
            sparsity in 0usize..4,
        ) {
            let g = group(["2:[2,1]", "3:[1];2:[1,1]", "2:[3];3:[1]"][which]);
            let n = g.order();
            let make = |v: &[(i64, i64)], keep: usize| {
                let coeffs = (0..n)
                    .map(|i| {
                        let (x, d) = v[i % v.len()];
                        if keep > 0 && i % (keep + 1) != 0 { Rational::zero() } else { Rational::new(x.into(), d.into()) }
                    })
                    .collect();
                AlgebraElement::from_coeffs(&g, coeffs).unwrap()
            };
            let (a, b) = (make(&a, 0), make(&b, sparsity * 3));
            prop_assert_eq!(a.convolve(&b).unwrap(), naive_convolve(&a, &b));
            prop_assert_eq!(b.convolve(&a).unwrap(), naive_convolve(&a, &b));
        }

        #[test]
        fn stabilizer_matches_brute_force(
            which in 0usize..3,
            a in proptest::collection::vec(-2i64..3, 24),
            h in 0usize..24,
            h2 in 0usize..24,
        ) {
            let g = group(["2:[2,1]", "3:[1];2:[1,1]", "2:[3];3:[1]"][which]);
            let n = g.order();
            let coeffs = (0..n).map(|i| Rational::from_integer(a[i % a.len()].into())).collect();
            let x = AlgebraElement::from_coeffs(&g, coeffs).unwrap();
            // averaging over <h, h2> forces a nontrivial stabilizer
            let gens = [g.element_at(h % n), g.element_at(h2 % n)];
            let x = x.convolve(&AlgebraElement::subgroup_average(&g, &gens).unwrap()).unwrap();
            let brute: Vec<usize> = (0..n).filter(|&k| x.translate(k) == x).collect();
            prop_assert_eq!(x.stabilizer(), brute);
        }
    }

    #[test]
    fn direct_expansion_matches_product() {
        for text in ["2:[2,1,1]", "3:[2,1]", "5:[1,1]"] {
            let g = group(text);
            let p = g.moduli().iter().map(|&m| crate::arith::factorize(m)[0].0).next().unwrap();
            let elems: Vec<GroupElement> = g.elements().collect();
            for kgen in elems.iter().step_by(3) {
                let members = g.closure_indices(std::slice::from_ref(kgen));
                for z in &elems {
                    let f = FactoredIdempotent::primed(vec![kgen.clone()], z.clone());
                    match f.expand(&g) {
                        Ok(e) => {
                            let zp = g.pow(z, p);
                            assert!(members.binary_search(&g.index_of(&zp)).is_ok());
                            let khat = AlgebraElement::subgroup_average_of(&g, &members);
                            let ez = AlgebraElement::power_average(&g, z, p).unwrap();
                            assert_eq!(e, khat.sub(&khat.convolve(&ez).unwrap()).unwrap());
                            assert!(e.is_idempotent());
                        }
                        Err(_) => {
                            let inside = members.binary_search(&g.index_of(z)).is_ok();
                            let zp = g.pow(z, p);
                            assert!(inside || members.binary_search(&g.index_of(&zp)).is_err());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stabilizer_examples() {
        let g = group("2:[2,1]");
        let khat = AlgebraElement::subgroup_average(&g, &[GroupElement::new(vec![2, 1])]).unwrap();
        let k: Vec<usize> = g.closure_indices(&[GroupElement::new(vec![2, 1])]);
        assert_eq!(khat.stabilizer(), k);
        assert_eq!(AlgebraElement::zero(&g).stabilizer().len(), 8);
        assert_eq!(AlgebraElement::one(&g).stabilizer(), vec![0]);
    }

    #[test]
    fn pack_round_trips_in_lowest_terms() {
        let g = group("2:[2,1]");
        let e = AlgebraElement::subgroup_average(&g, &[GroupElement::new(vec![2, 0])]).unwrap();
        let packed = e.pack().unwrap();
        assert_eq!((packed.den(), packed.nums()[0]), (2, 1));
        assert_eq!(packed.unpack(&g).unwrap(), e);
        assert_eq!(PackedElement::new(-8, vec![4, 0, -2, 0, 0, 0, 0, 6]).unwrap(), PackedElement::new(4, vec![-2, 0, 1, 0, 0, 0, 0, -3]).unwrap());
        assert_eq!(AlgebraElement::zero(&g).pack().unwrap(), PackedElement::new(1, vec![0; 8]).unwrap());
    }

    #[test]
    fn sum_matches_repeated_add() {
        let g = group("3:[1];2:[2]");
        let items: Vec<AlgebraElement> = (0..g.order())
            .map(|i| {
                let coeffs = (0..g.order())
                    .map(|j| Rational::new(((i * j) as i64 % 7 - 3).into(), ((i + j) as i64 % 5 + 1).into()))
                    .collect();
                AlgebraElement::from_coeffs(&g, coeffs).unwrap()
            })
            .collect();
        let mut slow = AlgebraElement::zero(&g);
        for e in &items {
            slow = slow.add(e).unwrap();
        }
        assert_eq!(AlgebraElement::sum(&g, &items).unwrap(), slow);
        assert_eq!(AlgebraElement::sum(&g, &[]).unwrap(), AlgebraElement::zero(&g));
    }
}
