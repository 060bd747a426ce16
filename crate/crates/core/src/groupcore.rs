//! Finite abelian groups given by prime-power partitions.
//!
//! A primary group `G = Π_i Π_{j=1..l_i} C_{p^{r_i}, j}` is described by its
//! exponent classes `(r_i, l_i)` with `r_1 > r_2 > ... > r_m`. Elements are
//! stored in the short-generator basis: one residue per cyclic factor, with
//! factors ordered by class (largest exponent first) and then by copy index
//! `j` ascending. Long generators `x_{(s,j),a}` are views onto that basis via
//! [`PrimaryGroupSpec::embed_generator`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// One homocyclic component: `multiplicity` copies of `C_{p^exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentClass {
    pub exponent: u32,
    pub multiplicity: u32,
}

/// An abelian p-group `Π C_{p^{r_i}}^{l_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimaryGroupSpec {
    prime: u64,
    classes: Vec<ExponentClass>,
}

/// A cyclic factor `C_{p^s, j}` of a primary group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicFactor {
    pub exponent: u32,
    pub copy: u32,
    pub order: u64,
}

/// The long generator `x_{(s,j),a}`: place `(exponent, copy)`, power index `power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LongGenerator {
    pub exponent: u32,
    pub copy: u32,
    pub power: u32,
}

impl fmt::Display for LongGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{{({},{}),{}}}", self.exponent, self.copy, self.power)
    }
}

impl PrimaryGroupSpec {
    /// Builds a spec from `(exponent, multiplicity)` pairs with strictly
    /// decreasing exponents.
    pub fn new(prime: u64, classes: &[(u32, u32)]) -> Result<Self> {
        if !arith::is_prime(prime) {
            return Err(Error::input(format!("{prime} is not prime")));
        }
        for w in classes.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::input(
                    "exponent classes must be strictly decreasing",
                ));
            }
        }
        if classes.iter().any(|&(r, l)| r == 0 || l == 0) {
            return Err(Error::input(
                "exponents and multiplicities must be positive",
            ));
        }
        Ok(Self {
            prime,
            classes: classes
                .iter()
                .map(|&(exponent, multiplicity)| ExponentClass {
                    exponent,
                    multiplicity,
                })
                .collect(),
        })
    }

    /// Builds a spec from a list of cyclic-factor exponents with repetition,
    /// in any order: `[2, 1, 1]` is `C_{p^2} × C_p × C_p`.
    pub fn from_exponents(prime: u64, exponents: &[u32]) -> Result<Self> {
        let mut sorted = exponents.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut classes: Vec<(u32, u32)> = Vec::new();
        for r in sorted {
            match classes.last_mut() {
                Some((e, l)) if *e == r => *l += 1,
                _ => classes.push((r, 1)),
            }
        }
        Self::new(prime, &classes)
    }

    pub fn cyclic(prime: u64, n: u32) -> Result<Self> {
        if n == 0 {
            Self::new(prime, &[])
        } else {
            Self::new(prime, &[(n, 1)])
        }
    }

    /// Every primary group of order `p^rank`, one per partition of `rank`.
    pub fn all_of_rank(prime: u64, rank: u32) -> Result<Vec<Self>> {
        fn partitions(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if n == 0 {
                out.push(cur.clone());
                return;
            }
            for part in (1..=n.min(max)).rev() {
                cur.push(part);
                partitions(n - part, part, cur, out);
                cur.pop();
            }
        }
        let mut parts = Vec::new();
        partitions(rank, rank, &mut Vec::new(), &mut parts);
        parts
            .iter()
            .map(|exps| Self::from_exponents(prime, exps))
            .collect()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn classes(&self) -> &[ExponentClass] {
        &self.classes
    }

    /// `N` with `|G| = p^N`.
    pub fn rank(&self) -> u32 {
        self.classes
            .iter()
            .map(|c| c.exponent * c.multiplicity)
            .sum()
    }

    /// At most one cyclic factor.
    pub fn is_cyclic(&self) -> bool {
        self.classes.iter().map(|c| c.multiplicity).sum::<u32>() <= 1
    }

    /// Exponent of the group: `n` with `exp(G) = p^n` (0 for the trivial group).
    pub fn exponent(&self) -> u32 {
        self.classes.first().map_or(0, |c| c.exponent)
    }

    /// `|G|`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        arith::checked_pow(self.prime, self.rank())
    }

    /// Cyclic-factor exponents with repetition, descending.
    pub fn exponent_list(&self) -> Vec<u32> {
        self.classes
            .iter()
            .flat_map(|c| std::iter::repeat(c.exponent).take(c.multiplicity as usize))
            .collect()
    }

    /// `a_r`: number of cyclic factors of order exactly `p^r`.
    pub fn factors_of_exponent(&self, r: u32) -> u32 {
        self.classes
            .iter()
            .find(|c| c.exponent == r)
            .map_or(0, |c| c.multiplicity)
    }

    /// Cyclic factors in canonical element order.
    pub fn factors(&self) -> Vec<CyclicFactor> {
        self.classes
            .iter()
            .flat_map(|c| {
                (1..=c.multiplicity).map(move |j| CyclicFactor {
                    exponent: c.exponent,
                    copy: j,
                    order: self.prime.pow(c.exponent),
                })
            })
            .collect()
    }

    fn factor_position(&self, exponent: u32, copy: u32) -> Option<usize> {
        self.factors()
            .iter()
            .position(|f| f.exponent == exponent && f.copy == copy)
    }

    /// The canonical composition chain: exponent classes largest first, copy
    /// index descending within a class, power index ascending within a factor.
    pub fn long_generator_sequence(&self) -> Vec<LongGenerator> {
        let mut out = Vec::with_capacity(self.rank() as usize);
        for c in &self.classes {
            for j in (1..=c.multiplicity).rev() {
                for a in 1..=c.exponent {
                    out.push(LongGenerator {
                        exponent: c.exponent,
                        copy: j,
                        power: a,
                    });
                }
            }
        }
        out
    }

    /// An alternate power-monotone chain: smallest exponent class first, copy
    /// index ascending.
    pub fn alternate_generator_sequence(&self) -> Vec<LongGenerator> {
        let mut out = Vec::with_capacity(self.rank() as usize);
        for c in self.classes.iter().rev() {
            for j in 1..=c.multiplicity {
                for a in 1..=c.exponent {
                    out.push(LongGenerator {
                        exponent: c.exponent,
                        copy: j,
                        power: a,
                    });
                }
            }
        }
        out
    }

    /// Checks that `order` lists every long generator exactly once and that
    /// power indices ascend within each factor.
    pub fn validate_generator_order(&self, order: &[LongGenerator]) -> Result<()> {
        let mut expected = self.long_generator_sequence();
        let mut given = order.to_vec();
        expected.sort();
        given.sort();
        if expected != given {
            return Err(Error::input(
                "generator order must list every long generator exactly once",
            ));
        }
        for (i, g) in order.iter().enumerate() {
            let earlier_ok = order[..i]
                .iter()
                .filter(|h| h.exponent == g.exponent && h.copy == g.copy)
                .all(|h| h.power < g.power);
            if !earlier_ok {
                return Err(Error::input(format!(
                    "generator order is not power-monotone at {g}"
                )));
            }
        }
        Ok(())
    }

    /// `x_{(s,j),a}` as the element `p^{s−a}` in factor `(s,j)`.
    pub fn embed_generator(&self, g: LongGenerator) -> Result<GroupElement> {
        let pos = self
            .factor_position(g.exponent, g.copy)
            .ok_or_else(|| Error::input(format!("{g} names no cyclic factor")))?;
        if g.power == 0 || g.power > g.exponent {
            return Err(Error::input(format!("{g} has power index out of range")));
        }
        let mut exps = vec![0; self.factors().len()];
        exps[pos] = self.prime.pow(g.exponent - g.power);
        Ok(GroupElement { exps })
    }

    /// Writes an element as a word `Π x_{(s,j),a}^{α}` with `0 ≤ α < p`.
    pub fn long_word(&self, g: &GroupElement) -> Vec<(LongGenerator, u64)> {
        let mut word = Vec::new();
        let factors = self.factors();
        // factors in composition-chain order: copy index descending per class
        let mut chain_order: Vec<usize> = (0..factors.len()).collect();
        chain_order.sort_by_key(|&i| (std::cmp::Reverse(factors[i].exponent), std::cmp::Reverse(factors[i].copy)));
        for i in chain_order {
            let (f, e) = (&factors[i], g.exps[i]);
            // residue = Σ_a α_a p^{s−a}, so α_s is the least significant digit
            let mut rest = e;
            let mut digits = Vec::with_capacity(f.exponent as usize);
            for _ in 0..f.exponent {
                digits.push(rest % self.prime);
                rest /= self.prime;
            }
            for a in 1..=f.exponent {
                let alpha = digits[(f.exponent - a) as usize];
                if alpha != 0 {
                    word.push((
                        LongGenerator {
                            exponent: f.exponent,
                            copy: f.copy,
                            power: a,
                        },
                        alpha,
                    ));
                }
            }
        }
        word
    }

    /// Renders an element as a long-generator word, `1` for the identity.
    pub fn format_element(&self, g: &GroupElement) -> String {
        let word = self.long_word(g);
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|(x, alpha)| {
                if *alpha == 1 {
                    x.to_string()
                } else {
                    format!("{x}^{alpha}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for PrimaryGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<String> = self.exponent_list().iter().map(|e| e.to_string()).collect();
        write!(f, "{}:[{}]", self.prime, exps.join(","))
    }
}

/// A finite abelian group as the product of its primary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    parts: Vec<PrimaryGroupSpec>,
}

impl AbelianGroupSpec {
    pub fn new(mut parts: Vec<PrimaryGroupSpec>) -> Result<Self> {
        parts.sort_by_key(|p| p.prime);
        if parts.windows(2).any(|w| w[0].prime == w[1].prime) {
            return Err(Error::input("primary parts must have distinct primes"));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[PrimaryGroupSpec] {
        &self.parts
    }

    pub fn order(&self) -> Option<u64> {
        self.parts
            .iter()
            .try_fold(1u64, |acc, p| acc.checked_mul(p.order()?))
    }

    /// The single primary part, if the group is a p-group.
    pub fn as_primary(&self) -> Option<&PrimaryGroupSpec> {
        match self.parts.as_slice() {
            [single] => Some(single),
            _ => None,
        }
    }
}

impl From<PrimaryGroupSpec> for AbelianGroupSpec {
    fn from(p: PrimaryGroupSpec) -> Self {
        Self { parts: vec![p] }
    }
}

impl FromStr for AbelianGroupSpec {
    type Err = Error;

    /// Parses `part (";" part)*` with `part := prime ":[" exps "]"`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::input("empty group spec"));
        }
        let mut parts = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            let (prime, rest) = part
                .split_once(':')
                .ok_or_else(|| Error::input(format!("missing ':' in '{part}'")))?;
            let prime: u64 = prime
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad prime in '{part}'")))?;
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::input(format!("expected [..] in '{part}'")))?;
            let exps = inner
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::input(format!("bad exponent '{}' in '{part}'", e.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            parts.push(PrimaryGroupSpec::from_exponents(prime, &exps)?);
        }
        Self::new(parts)
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Exponent vector of a group element in the short-generator basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub exps: Vec<u64>,
}

impl GroupElement {
    pub fn new(exps: Vec<u64>) -> Self {
        Self { exps }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A concrete finite abelian group with a canonical element enumeration:
/// mixed radix over the factor orders, first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    spec: AbelianGroupSpec,
    moduli: Vec<u64>,
    strides: Vec<usize>,
    part_offsets: Vec<usize>,
    order: usize,
    digits: Vec<u32>,
    tail: OnceLock<TailTable>,
}

/// Cayley table of the subgroup spanned by the trailing cyclic factors, which
/// occupy the low digits of the element index.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TailTable {
    size: usize,
    table: Vec<u16>,
}

/// Largest block handled by table lookup in [`AbelianGroup::convolve_integers`].
const TAIL_LIMIT: usize = 256;

impl AbelianGroup {
    /// Materializes the group; fails if `|G|` exceeds `cap`.
    pub fn new(spec: AbelianGroupSpec, cap: u64) -> Result<Self> {
        let order = spec.order().unwrap_or(u64::MAX);
        if order > cap {
            return Err(Error::CapExceeded { order, cap });
        }
        let mut moduli = Vec::new();
        let mut part_offsets = Vec::new();
        for part in spec.parts() {
            part_offsets.push(moduli.len());
            moduli.extend(part.factors().iter().map(|f| f.order));
        }
        let k = moduli.len();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }
        let order = order as usize;
        let mut digits = Vec::with_capacity(order * k);
        for idx in 0..order {
            for i in 0..k {
                digits.push(((idx / strides[i]) as u64 % moduli[i]) as u32);
            }
        }
        Ok(Self {
            spec,
            moduli,
            strides,
            part_offsets,
            order,
            digits,
            tail: OnceLock::new(),
        })
    }

    pub fn primary(spec: PrimaryGroupSpec, cap: u64) -> Result<Self> {
        Self::new(spec.into(), cap)
    }

    pub fn spec(&self) -> &AbelianGroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Orders of the cyclic factors in element-vector order.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.moduli.len()])
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.exps.len() != self.moduli.len()
            || g.exps.iter().zip(&self.moduli).any(|(e, m)| e >= m)
        {
            return Err(Error::SpecMismatch(format!(
                "element {g} does not belong to {}",
                self.spec
            )));
        }
        Ok(())
    }

    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.exps
            .iter()
            .zip(&self.strides)
            .map(|(&e, &s)| e as usize * s)
            .sum()
    }

    pub fn element_at(&self, idx: usize) -> GroupElement {
        let k = self.moduli.len();
        GroupElement::new(
            self.digits[idx * k..(idx + 1) * k]
                .iter()
                .map(|&d| d as u64)
                .collect(),
        )
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    /// Index of the product of the elements at indices `a` and `b`.
    #[inline]
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        let k = self.moduli.len();
        let da = &self.digits[a * k..(a + 1) * k];
        let db = &self.digits[b * k..(b + 1) * k];
        let mut idx = 0;
        for i in 0..k {
            let m = self.moduli[i] as u32;
            let mut s = da[i] + db[i];
            if s >= m {
                s -= m;
            }
            idx += s as usize * self.strides[i];
        }
        idx
    }

    fn tail(&self) -> &TailTable {
        self.tail.get_or_init(|| {
            let mut size = 1;
            for &m in self.moduli.iter().rev() {
                if size * m as usize > TAIL_LIMIT {
                    break;
                }
                size *= m as usize;
            }
            let mut table = Vec::with_capacity(size * size);
            for a in 0..size {
                for b in 0..size {
                    table.push(self.mul_index(a, b) as u16);
                }
            }
            TailTable { size, table }
        })
    }

    /// Convolution of dense integer coefficient vectors over the group.
    pub fn convolve_integers(&self, a: &[i64], b: &[i64]) -> Vec<i128> {
        assert!(a.len() == self.order && b.len() == self.order, "length must equal |G|");
        let TailTable { size: t, table } = self.tail();
        let t = *t;
        let blocks = self.order / t;
        let nonzero = |v: &[i64]| -> Vec<usize> {
            (0..blocks).filter(|&h| v[h * t..(h + 1) * t].iter().any(|&x| x != 0)).collect()
        };
        let (ha, hb) = (nonzero(a), nonzero(b));
        let mut out = vec![0i128; self.order];
        for &i in &ha {
            let ablock = &a[i * t..(i + 1) * t];
            for &j in &hb {
                let bblock = &b[j * t..(j + 1) * t];
                // tail digits are zero here, so this is the head product
                let k = self.mul_index(i * t, j * t);
                let oblock = &mut out[k..k + t];
                for (x, row) in ablock.iter().zip(table.chunks_exact(t)) {
                    if *x == 0 {
                        continue;
                    }
                    let x = *x as i128;
                    for (y, &pos) in bblock.iter().zip(row) {
                        oblock[pos as usize] += x * *y as i128;
                    }
                }
            }
        }
        out
    }

    /// `mul_index(a, j)` for `j = 0, 1, ..., |G| − 1`, stepped like an odometer.
    pub fn translates(&self, a: usize) -> Translates<'_> {
        let k = self.moduli.len();
        Translates {
            group: self,
            out: self.digits[a * k..(a + 1) * k].to_vec(),
            steps: vec![0; k],
            idx: a,
            left: self.order,
        }
    }

    /// Index of the inverse of the element at `a`.
    pub fn inverse_index(&self, a: usize) -> usize {
        let k = self.moduli.len();
        let da = &self.digits[a * k..(a + 1) * k];
        (0..k)
            .map(|i| {
                let m = self.moduli[i] as u32;
                ((m - da[i]) % m) as usize * self.strides[i]
            })
            .sum()
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.exps
                .iter()
                .zip(&b.exps)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.exps
                .iter()
                .zip(&self.moduli)
                .map(|(x, m)| (m - x) % m)
                .collect(),
        )
    }

    pub fn pow(&self, a: &GroupElement, k: u64) -> GroupElement {
        GroupElement::new(
            a.exps
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| ((x as u128 * k as u128) % m as u128) as u64)
                .collect(),
        )
    }

    /// Least `k ≥ 1` with `g^k = 1`: the lcm of the component orders.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        g.exps
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| m / arith::gcd(x, m))
            .fold(1, arith::lcm)
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn closure_indices(&self, gens: &[GroupElement]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0usize];
        for g in gens {
            let gi = self.index_of(g);
            if member[gi] {
                continue;
            }
            // extend by the cyclic subgroup of g: H ← H ∪ gH ∪ g²H ∪ ...
            let base = elems.clone();
            let mut shift = gi;
            while !member[shift] {
                for &h in &base {
                    let x = self.mul_index(shift, h);
                    member[x] = true;
                    elems.push(x);
                }
                shift = self.mul_index(shift, gi);
            }
        }
        elems.sort_unstable();
        elems
    }

    /// The subgroup generated by `gens`.
    pub fn subgroup_closure(&self, gens: &[GroupElement]) -> Result<BTreeSet<GroupElement>> {
        for g in gens {
            self.check(g)?;
        }
        Ok(self
            .closure_indices(gens)
            .into_iter()
            .map(|i| self.element_at(i))
            .collect())
    }

    /// Embeds an element of primary part `part` into the full group.
    pub fn lift_from_part(&self, part: usize, g: &GroupElement) -> Result<GroupElement> {
        let spec = self
            .spec
            .parts()
            .get(part)
            .ok_or_else(|| Error::SpecMismatch(format!("no primary part {part}")))?;
        let width = spec.factors().len();
        if g.exps.len() != width {
            return Err(Error::SpecMismatch(format!(
                "element {g} does not belong to part {spec}"
            )));
        }
        let mut exps = vec![0; self.moduli.len()];
        let off = self.part_offsets[part];
        exps[off..off + width].copy_from_slice(&g.exps);
        Ok(GroupElement::new(exps))
    }
}

/// Iterator returned by [`AbelianGroup::translates`].
pub struct Translates<'a> {
    group: &'a AbelianGroup,
    /// Digits of the current product.
    out: Vec<u32>,
    /// Digits of the current `j`.
    steps: Vec<u32>,
    idx: usize,
    left: usize,
}

impl Iterator for Translates<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        let current = self.idx;
        let g = self.group;
        for f in (0..self.out.len()).rev() {
            let m = g.moduli[f] as u32;
            self.out[f] += 1;
            self.idx += g.strides[f];
            if self.out[f] == m {
                self.out[f] = 0;
                self.idx -= m as usize * g.strides[f];
            }
            self.steps[f] += 1;
            if self.steps[f] < m {
                break;
            }
            self.steps[f] = 0;
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.left, Some(self.left))
    }
}

impl ExactSizeIterator for Translates<'_> {}

#[cfg(test)]
mod tests {
    #[test]
    fn blocked_convolution_matches_naive() {
        for text in ["2:[2,1,1]", "3:[2,1];5:[1]", "2:[9]", "2:[1,1,1,1,1,1,1,1,1]", "7:[1,1,1]"] {
            let g = AbelianGroup::new(text.parse().unwrap(), 1 << 12).unwrap();
            let n = g.order();
            let a: Vec<i64> = (0..n).map(|i| (i as i64 * 7 % 11) - 5).collect();
            let b: Vec<i64> = (0..n).map(|i| if i % 3 == 0 { (i as i64 % 5) - 2 } else { 0 }).collect();
            let mut naive = vec![0i128; n];
            for i in 0..n {
                for j in 0..n {
                    naive[g.mul_index(i, j)] += a[i] as i128 * b[j] as i128;
                }
            }
            assert_eq!(g.convolve_integers(&a, &b), naive, "{text}");
        }
    }

    #[test]
    fn translates_match_mul_index() {
        for text in ["2:[2,1,1]", "3:[2,1];5:[1]", "2:[3]"] {
            let g = AbelianGroup::new(text.parse().unwrap(), 1 << 12).unwrap();
            for a in 0..g.order() {
                let fast: Vec<usize> = g.translates(a).collect();
                let slow: Vec<usize> = (0..g.order()).map(|j| g.mul_index(a, j)).collect();
                assert_eq!(fast, slow, "{text} a={a}");
            }
        }
        let trivial = AbelianGroup::new(AbelianGroupSpec::new(vec![]).unwrap(), 1).unwrap();
        assert_eq!(trivial.translates(0).collect::<Vec<_>>(), vec![0]);
    }

    use super::*;

    fn gen(exponent: u32, copy: u32, power: u32) -> LongGenerator {
        LongGenerator {
            exponent,
            copy,
            power,
        }
    }

    fn group(p: u64, exps: &[u32]) -> AbelianGroup {
        AbelianGroup::primary(PrimaryGroupSpec::from_exponents(p, exps).unwrap(), 1 << 20).unwrap()
    }

    fn el(v: &[u64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    #[test]
    fn spec_validation() {
        assert!(PrimaryGroupSpec::new(4, &[(1, 1)]).is_err());
        assert!(PrimaryGroupSpec::new(2, &[(1, 1), (2, 1)]).is_err());
        assert!(PrimaryGroupSpec::new(2, &[(1, 0)]).is_err());
        let trivial = PrimaryGroupSpec::new(5, &[]).unwrap();
        assert_eq!(trivial.rank(), 0);
        assert_eq!(trivial.order(), Some(1));
        let s = PrimaryGroupSpec::from_exponents(2, &[1, 2, 1]).unwrap();
        assert_eq!(s.classes().len(), 2);
        assert_eq!(s.rank(), 4);
        assert_eq!(s.to_string(), "2:[2,1,1]");
    }

    #[test]
    fn long_generator_examples() {
        let c9 = PrimaryGroupSpec::cyclic(3, 2).unwrap();
        assert_eq!(c9.long_generator_sequence(), vec![gen(2, 1, 1), gen(2, 1, 2)]);
        let c3c3 = PrimaryGroupSpec::from_exponents(3, &[1, 1]).unwrap();
        assert_eq!(c3c3.long_generator_sequence(), vec![gen(1, 2, 1), gen(1, 1, 1)]);
        let c4c2 = PrimaryGroupSpec::from_exponents(2, &[2, 1]).unwrap();
        assert_eq!(
            c4c2.long_generator_sequence(),
            vec![gen(2, 1, 1), gen(2, 1, 2), gen(1, 1, 1)]
        );
    }

    #[test]
    fn embed_examples() {
        let c9 = PrimaryGroupSpec::cyclic(3, 2).unwrap();
        assert_eq!(c9.embed_generator(gen(2, 1, 1)).unwrap(), el(&[3]));
        assert_eq!(c9.embed_generator(gen(2, 1, 2)).unwrap(), el(&[1]));
        let c4c2 = PrimaryGroupSpec::from_exponents(2, &[2, 1]).unwrap();
        assert_eq!(c4c2.embed_generator(gen(1, 1, 1)).unwrap(), el(&[0, 1]));
        assert!(c4c2.embed_generator(gen(1, 2, 1)).is_err());
        assert!(c4c2.embed_generator(gen(2, 1, 3)).is_err());
        assert!(c4c2.embed_generator(gen(2, 1, 0)).is_err());
    }

    #[test]
    fn embed_respects_long_relations() {
        for p in [2u64, 3, 5] {
            for rank in 0..=4 {
                for spec in PrimaryGroupSpec::all_of_rank(p, rank).unwrap() {
                    let g = AbelianGroup::primary(spec.clone(), 1 << 20).unwrap();
                    for x in spec.long_generator_sequence() {
                        let e = spec.embed_generator(x).unwrap();
                        let pth = g.pow(&e, p);
                        if x.power == 1 {
                            assert_eq!(pth, g.identity());
                        } else {
                            let prev = spec
                                .embed_generator(LongGenerator { power: x.power - 1, ..x })
                                .unwrap();
                            assert_eq!(pth, prev);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn prefix_closures_have_prime_power_orders() {
        for p in [2u64, 3] {
            for rank in 0..=5 {
                for spec in PrimaryGroupSpec::all_of_rank(p, rank).unwrap() {
                    let g = AbelianGroup::primary(spec.clone(), 1 << 20).unwrap();
                    let gens: Vec<GroupElement> = spec
                        .long_generator_sequence()
                        .into_iter()
                        .map(|x| spec.embed_generator(x).unwrap())
                        .collect();
                    for l in 0..=gens.len() {
                        let h = g.subgroup_closure(&gens[..l]).unwrap();
                        assert_eq!(h.len() as u64, p.pow(l as u32), "{spec} prefix {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let c4 = group(2, &[2]);
        assert_eq!(c4.mul(&el(&[1]), &el(&[2])).unwrap(), el(&[3]));
        assert_eq!(c4.mul(&el(&[3]), &el(&[1])).unwrap(), el(&[0]));
        let c2c2 = group(2, &[1, 1]);
        assert_eq!(c2c2.mul(&el(&[1, 0]), &el(&[1, 1])).unwrap(), el(&[0, 1]));
        assert!(c4.mul(&el(&[1, 0]), &el(&[1])).is_err());
        assert!(c4.mul(&el(&[4]), &el(&[1])).is_err());
    }

    #[test]
    fn order_examples() {
        let c9 = group(3, &[2]);
        assert_eq!(c9.element_order(&el(&[3])), 3);
        assert_eq!(c9.element_order(&c9.identity()), 1);
        let c4c2 = group(2, &[2, 1]);
        assert_eq!(c4c2.element_order(&el(&[2, 1])), 2);
    }

    #[test]
    fn closure_examples() {
        let c9 = group(3, &[2]);
        let h = c9.subgroup_closure(&[el(&[3])]).unwrap();
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![el(&[0]), el(&[3]), el(&[6])]);
        let h = c9.subgroup_closure(&[]).unwrap();
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![el(&[0])]);
        let c4c2 = group(2, &[2, 1]);
        let h = c4c2.subgroup_closure(&[el(&[1, 1])]).unwrap();
        assert_eq!(
            h.into_iter().collect::<Vec<_>>(),
            vec![el(&[0, 0]), el(&[1, 1]), el(&[2, 0]), el(&[3, 1])]
        );
    }

    #[test]
    fn enumeration_is_bijective() {
        let g = group(2, &[3, 1, 1]);
        let mut seen = vec![false; g.order()];
        for (i, e) in g.elements().enumerate() {
            let j = g.index_of(&e);
            assert_eq!(i, j);
            assert!(!seen[j]);
            seen[j] = true;
            assert_eq!(g.inverse_index(i), g.index_of(&g.inverse(&e)));
        }
        assert_eq!(seen.iter().filter(|&&b| b).count(), 32);
    }

    #[test]
    fn parse_spec_text() {
        let s: AbelianGroupSpec = "2:[2,1,1]".parse().unwrap();
        assert_eq!(s.order(), Some(16));
        let s: AbelianGroupSpec = "3:[2];2:[1]".parse().unwrap();
        assert_eq!(s.to_string(), "2:[1];3:[2]");
        assert_eq!(s.order(), Some(18));
        for bad in ["", "2:[]", "4:[1]", "2:[1];2:[2]", "2[1]", "2:[0]", "x:[1]", "2:[1,a]"] {
            assert!(bad.parse::<AbelianGroupSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s: AbelianGroupSpec = "2:[13]".parse().unwrap();
        assert_eq!(
            AbelianGroup::new(s, 4096).unwrap_err(),
            Error::CapExceeded { order: 8192, cap: 4096 }
        );
    }

    #[test]
    fn long_words() {
        let spec = PrimaryGroupSpec::cyclic(3, 2).unwrap();
        let g = AbelianGroup::primary(spec.clone(), 100).unwrap();
        assert_eq!(spec.format_element(&g.identity()), "1");
        assert_eq!(spec.format_element(&el(&[3])), "x{(2,1),1}");
        assert_eq!(spec.format_element(&el(&[7])), "x{(2,1),1}^2*x{(2,1),2}");
    }

    #[test]
    fn generator_order_validation() {
        let spec = PrimaryGroupSpec::from_exponents(2, &[2, 1]).unwrap();
        spec.validate_generator_order(&spec.alternate_generator_sequence()).unwrap();
        assert!(spec
            .validate_generator_order(&[gen(2, 1, 2), gen(2, 1, 1), gen(1, 1, 1)])
            .is_err());
        assert!(spec.validate_generator_order(&[gen(2, 1, 1), gen(1, 1, 1)]).is_err());
    }
}
