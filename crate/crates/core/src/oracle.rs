//! Independent ground truth for the diagram engine.
//!
//! Rational primitive central idempotents come from the classical route: for
//! a character `χ` of order `m`,
//! `e_Q(χ) = Σ_σ σ(e(χ)) = (1/|G|) Σ_g c_m(a(g))·g` with `χ(g^{−1}) = ζ_m^{a(g)}`,
//! where `c_m` is Ramanujan's sum. Wedderburn coefficients come from a census
//! of element orders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::cyclotome::ramanujan_sum;
use crate::error::{Error, Result};
use crate::exactalg::{AlgebraElement, PackedElement};
use crate::groupcore::{AbelianGroup, PrimaryGroupSpec};
use crate::pcidiagram::{FieldIndex, PackedPci, RationalPci};

/// A character `χ_t(g) = Π_i ζ_{d_i}^{t_i g_i}` of the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharacterIndex {
    pub t: Vec<u64>,
}

/// All `|G|` characters, in the same mixed-radix order as the elements.
pub fn dual_characters(group: &AbelianGroup) -> Vec<CharacterIndex> {
    group.elements().map(|g| CharacterIndex { t: g.exps }).collect()
}

/// Order of `χ_t` in the dual group.
pub fn character_order(group: &AbelianGroup, chi: &CharacterIndex) -> u64 {
    chi.t
        .iter()
        .zip(group.moduli())
        .map(|(&t, &d)| d / arith::gcd(t, d))
        .fold(1, arith::lcm)
}

/// `|G|·e_Q(χ_t)`: the integer coefficients `c_m(a(g))`.
fn character_numerators(group: &AbelianGroup, chi: &CharacterIndex) -> Result<Vec<i64>> {
    let moduli = group.moduli();
    if chi.t.len() != moduli.len() || chi.t.iter().zip(moduli).any(|(t, d)| t >= d) {
        return Err(Error::SpecMismatch(format!("character {:?} does not match {}", chi.t, group.spec())));
    }
    let m = character_order(group, chi);
    let ram: Vec<i64> = (0..m as i64).map(|a| ramanujan_sum(m, a)).collect();
    // work in Z/M with M the group exponent, then rescale to Z/m
    let big_m = moduli.iter().copied().fold(1, arith::lcm);
    let step = (big_m / m) as u128;
    let weights: Vec<u128> = chi
        .t
        .iter()
        .zip(moduli)
        .map(|(&t, &d)| (t as u128) * (big_m / d) as u128)
        .collect();
    Ok(group
        .elements()
        .map(|g| {
            // χ(g) = ζ_M^s; a(g) is the exponent of χ(g^{−1}) over ζ_m
            let s: u128 = g.exps.iter().zip(&weights).map(|(&x, &w)| x as u128 * w).sum::<u128>() % big_m as u128;
            let a = (m as u128 - s / step) % m as u128;
            ram[a as usize]
        })
        .collect())
}

/// `e_Q(χ_t)`: the sum of `e(σ∘χ)` over the Galois conjugates of `χ`.
pub fn rational_pci_of_character(group: &Arc<AbelianGroup>, chi: &CharacterIndex) -> Result<AlgebraElement> {
    PackedElement::new(group.order() as i64, character_numerators(group, chi)?)?.unpack(group)
}

/// Field index `(p, v_p(m))` for every primary part of the group.
fn field_index_for_order(group: &AbelianGroup, m: u64) -> FieldIndex {
    FieldIndex(
        group
            .spec()
            .parts()
            .iter()
            .map(|part| {
                let p = part.prime();
                let mut r = 0;
                let mut x = m;
                while x % p == 0 {
                    x /= p;
                    r += 1;
                }
                (p, r)
            })
            .collect(),
    )
}

/// The rational PCI set from Galois orbits of characters. Every member of an
/// orbit is evaluated and must give the same idempotent.
pub fn oracle_pci_set(group: &Arc<AbelianGroup>) -> Result<Vec<RationalPci>> {
    oracle_packed_set(group)?
        .into_par_iter()
        .map(|e| {
            Ok(RationalPci {
                element: e.element.unpack(group)?,
                field_index: e.field_index,
            })
        })
        .collect()
}

/// [`oracle_pci_set`] in packed form, for groups where the dense rational
/// vectors would not fit in memory twice over.
pub fn oracle_packed_set(group: &Arc<AbelianGroup>) -> Result<Vec<PackedPci>> {
    let exponent = group.moduli().iter().copied().fold(1, arith::lcm);
    let units = arith::units_mod(exponent);
    let chars = dual_characters(group);
    let mut seen = vec![false; chars.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for (i, chi) in chars.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let mut orbit: Vec<usize> = units
            .iter()
            .map(|&k| {
                let kt: Vec<u64> = chi
                    .t
                    .iter()
                    .zip(group.moduli())
                    .map(|(&t, &d)| ((t as u128 * k.max(1) as u128) % d as u128) as u64)
                    .collect();
                group.index_of(&crate::groupcore::GroupElement::new(kt))
            })
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &j in &orbit {
            seen[j] = true;
        }
        orbits.push(orbit);
    }

    orbits
        .par_iter()
        .map(|orbit| {
            let rep = &chars[orbit[0]];
            let nums = character_numerators(group, rep)?;
            for &j in &orbit[1..] {
                if character_numerators(group, &chars[j])? != nums {
                    return Err(Error::Inconsistency(format!(
                        "characters {:?} and {:?} share a Galois orbit but give different idempotents",
                        rep.t, chars[j].t
                    )));
                }
            }
            Ok(PackedPci {
                element: PackedElement::new(group.order() as i64, nums)?,
                field_index: field_index_for_order(group, character_order(group, rep)),
            })
        })
        .collect()
}

/// `|E_r(G)|` keyed by the element order `p^r`, by full enumeration.
pub fn order_census(spec: &PrimaryGroupSpec, cap: u64) -> Result<BTreeMap<u64, u64>> {
    let group = AbelianGroup::primary(spec.clone(), cap)?;
    let mut census = BTreeMap::new();
    for g in group.elements() {
        *census.entry(group.element_order(&g)).or_insert(0) += 1;
    }
    Ok(census)
}

/// One row of the Wedderburn table: the coefficient of `Q(ζ_{p^r})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedderburnRow {
    pub r: u32,
    pub a_r: u32,
    pub b_r: u32,
    pub c_r: u32,
    /// `|E_r(G)|`.
    pub elements_of_order: u64,
    /// `|E_r(G)|/φ(p^r)`, the number of cyclic subgroups of order `p^r`.
    pub census_coefficient: u64,
    /// `p^{c_r + (r−1)(b_r − 1)}·(p^{b_r} − 1)/(p − 1)`.
    pub formula_coefficient: u64,
    /// The same with exponent `c_r + (r−1)·b_{r−1}`.
    pub statement_variant: u64,
    /// `c_r + (r−1)(b_r − 1)`.
    pub power_exponent: u32,
    /// `1 + p + ... + p^{b_r − 1}`.
    pub geometric_part: u64,
    pub agree: bool,
    pub variant_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedderburnProfile {
    pub prime: u64,
    pub order: u64,
    /// `n` with `exp(G) = p^n`.
    pub exponent: u32,
    pub rows: Vec<WedderburnRow>,
}

impl WedderburnProfile {
    /// `Σ_r census(r)·φ(p^r)`; equals `|G|`.
    pub fn census_dimension(&self) -> u64 {
        self.rows
            .iter()
            .map(|row| row.census_coefficient * arith::euler_phi(self.prime.pow(row.r)))
            .sum()
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

fn pow_checked(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| Error::input(format!("{p}^{e} overflows")))
}

/// Census and closed-form coefficients for every `0 ≤ r ≤ n`, without
/// failing on disagreement.
pub fn compute_wedderburn_profile(spec: &PrimaryGroupSpec, cap: u64) -> Result<WedderburnProfile> {
    let p = spec.prime();
    let n = spec.exponent();
    let census = order_census(spec, cap)?;
    let a = |r: u32| spec.factors_of_exponent(r);
    let b = |r: u32| (r..=n).map(a).sum::<u32>();
    let c = |r: u32| (1..r).map(|s| s * a(s)).sum::<u32>();

    let mut rows = Vec::with_capacity(n as usize + 1);
    for r in 0..=n {
        let pr = pow_checked(p, r)?;
        let count = census.get(&pr).copied().unwrap_or(0);
        let census_coefficient = count / arith::euler_phi(pr);
        let (b_r, c_r) = (b(r), c(r));
        let (formula, variant, power_exponent, geometric) = if r == 0 {
            (1, 1, 0, 1)
        } else {
            let geometric: u64 = (0..b_r).map(|i| pow_checked(p, i)).sum::<Result<u64>>()?;
            let e = c_r + (r - 1) * (b_r - 1);
            let e_variant = c_r + if r > 1 { (r - 1) * b(r - 1) } else { 0 };
            (
                pow_checked(p, e)? * geometric,
                pow_checked(p, e_variant)? * geometric,
                e,
                geometric,
            )
        };
        rows.push(WedderburnRow {
            r,
            a_r: a(r),
            b_r,
            c_r,
            elements_of_order: count,
            census_coefficient,
            formula_coefficient: formula,
            statement_variant: variant,
            power_exponent,
            geometric_part: geometric,
            agree: formula == census_coefficient,
            variant_agrees: variant == census_coefficient,
        });
    }
    Ok(WedderburnProfile {
        prime: p,
        order: spec.order().unwrap_or(u64::MAX),
        exponent: n,
        rows,
    })
}

/// Like [`compute_wedderburn_profile`] but fails if the closed form disagrees
/// with the census anywhere.
pub fn wedderburn_profile(spec: &PrimaryGroupSpec, cap: u64) -> Result<WedderburnProfile> {
    let profile = compute_wedderburn_profile(spec, cap)?;
    if let Some(row) = profile.rows.iter().find(|r| !r.agree) {
        return Err(Error::VerificationFailure(format!(
            "{spec}: coefficient of Q(zeta_{}^{}) is {} by census but {} by formula",
            profile.prime, row.r, row.census_coefficient, row.formula_coefficient
        )));
    }
    Ok(profile)
}

/// Outcome of comparing two PCI sets as multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetComparison {
    pub equal: bool,
    /// An element present in the left set but not (as often) in the right.
    pub only_left: Option<AlgebraElement>,
    pub only_right: Option<AlgebraElement>,
}

impl SetComparison {
    pub fn witness(&self) -> Option<&AlgebraElement> {
        self.only_left.as_ref().or(self.only_right.as_ref())
    }
}

fn cmp_elements(a: &AlgebraElement, b: &AlgebraElement) -> Ordering {
    a.group()
        .spec()
        .to_string()
        .cmp(&b.group().spec().to_string())
        .then_with(|| a.coeffs().cmp(b.coeffs()))
}

/// Multiset equality after sorting by coefficient vector.
pub fn compare_pci_sets(left: &[AlgebraElement], right: &[AlgebraElement]) -> SetComparison {
    let mut l: Vec<&AlgebraElement> = left.iter().collect();
    let mut r: Vec<&AlgebraElement> = right.iter().collect();
    l.sort_by(|a, b| cmp_elements(a, b));
    r.sort_by(|a, b| cmp_elements(a, b));
    let (mut i, mut j) = (0, 0);
    let (mut only_left, mut only_right) = (None, None);
    while i < l.len() && j < r.len() {
        match cmp_elements(l[i], r[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                only_left.get_or_insert_with(|| l[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                only_right.get_or_insert_with(|| r[j].clone());
                j += 1;
            }
        }
    }
    if i < l.len() {
        only_left.get_or_insert_with(|| l[i].clone());
    }
    if j < r.len() {
        only_right.get_or_insert_with(|| r[j].clone());
    }
    SetComparison {
        equal: only_left.is_none() && only_right.is_none(),
        only_left,
        only_right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rational;
    use crate::groupcore::GroupElement;

    const CAP: u64 = 1 << 16;

    fn grp(text: &str) -> Arc<AbelianGroup> {
        Arc::new(AbelianGroup::new(text.parse().unwrap(), CAP).unwrap())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn elements(set: &[RationalPci]) -> Vec<AlgebraElement> {
        set.iter().map(|e| e.element.clone()).collect()
    }

    #[test]
    fn dual_examples() {
        let g = grp("2:[2,1]");
        assert_eq!(dual_characters(&g).len(), 8);
        let c2 = grp("2:[1]");
        assert_eq!(dual_characters(&c2), vec![CharacterIndex { t: vec![0] }, CharacterIndex { t: vec![1] }]);
        assert_eq!(character_order(&g, &CharacterIndex { t: vec![1, 1] }), 4);
    }

    #[test]
    fn character_pci_examples() {
        let g = grp("3:[2,1]");
        let ghat = AlgebraElement::subgroup_average(&g, &[GroupElement::new(vec![1, 0]), GroupElement::new(vec![0, 1])]).unwrap();
        assert_eq!(rational_pci_of_character(&g, &CharacterIndex { t: vec![0, 0] }).unwrap(), ghat);

        let c2 = grp("2:[1]");
        let e = rational_pci_of_character(&c2, &CharacterIndex { t: vec![1] }).unwrap();
        assert_eq!(e.coeffs(), &[q(1, 2), q(-1, 2)]);

        // (1/4)[c_4(0) + c_4(3)x + c_4(2)x^2 + c_4(1)x^3] with values 2, 0, −2, 0
        let c4 = grp("2:[2]");
        let e = rational_pci_of_character(&c4, &CharacterIndex { t: vec![1] }).unwrap();
        assert_eq!(e.coeffs(), &[q(1, 2), q(0, 1), q(-1, 2), q(0, 1)]);
        assert!(e.is_idempotent());
        assert!(rational_pci_of_character(&c4, &CharacterIndex { t: vec![4] }).is_err());
    }

    #[test]
    fn galois_orbit_invariance() {
        for text in ["2:[3,1]", "3:[2,1]", "2:[1];3:[1]", "2:[2];3:[1];5:[1]"] {
            let g = grp(text);
            for chi in dual_characters(&g) {
                let m = character_order(&g, &chi);
                let e = rational_pci_of_character(&g, &chi).unwrap();
                for k in arith::units_mod(m) {
                    let kt = CharacterIndex {
                        t: chi.t.iter().zip(g.moduli()).map(|(&t, &d)| t * k.max(1) % d).collect(),
                    };
                    assert_eq!(rational_pci_of_character(&g, &kt).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn oracle_set_examples() {
        let c4 = grp("2:[2]");
        let set = oracle_pci_set(&c4).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(oracle_pci_set(&grp("3:[1,1]")).unwrap().len(), 5);
        for text in ["2:[1,1,1]", "5:[1,1]", "2:[2];3:[1]", "7:[2]"] {
            let g = grp(text);
            let set = oracle_pci_set(&g).unwrap();
            let dims: u64 = set.iter().map(|e| e.field_index.dimension()).sum();
            assert_eq!(dims as usize, g.order(), "{text}");
            let mut sum = AlgebraElement::zero(&g);
            for (i, a) in set.iter().enumerate() {
                assert!(a.element.is_idempotent());
                for b in &set[i + 1..] {
                    assert!(a.element.are_orthogonal(&b.element).unwrap());
                }
                sum = sum.add(&a.element).unwrap();
            }
            assert_eq!(sum, AlgebraElement::one(&g));
        }
    }

    #[test]
    fn census_examples() {
        let c9 = PrimaryGroupSpec::cyclic(3, 2).unwrap();
        assert_eq!(order_census(&c9, CAP).unwrap(), BTreeMap::from([(1, 1), (3, 2), (9, 6)]));
        let v4 = PrimaryGroupSpec::from_exponents(2, &[1, 1]).unwrap();
        assert_eq!(order_census(&v4, CAP).unwrap()[&2], 3);
        let c9c3 = PrimaryGroupSpec::from_exponents(3, &[2, 1]).unwrap();
        let census = order_census(&c9c3, CAP).unwrap();
        assert_eq!((census[&3], census[&9]), (8, 18));
    }

    #[test]
    fn wedderburn_examples() {
        let c9c3 = PrimaryGroupSpec::from_exponents(3, &[2, 1]).unwrap();
        let prof = wedderburn_profile(&c9c3, CAP).unwrap();
        let coeffs: Vec<u64> = prof.rows.iter().map(|r| r.formula_coefficient).collect();
        assert_eq!(coeffs, vec![1, 4, 3]);
        assert_eq!((prof.rows[1].b_r, prof.rows[1].c_r), (2, 0));
        assert_eq!((prof.rows[2].b_r, prof.rows[2].c_r), (1, 1));
        assert_eq!(prof.census_dimension(), 27);

        let v4 = PrimaryGroupSpec::from_exponents(2, &[1, 1]).unwrap();
        let prof = wedderburn_profile(&v4, CAP).unwrap();
        assert_eq!(prof.rows[1].census_coefficient, 3);
        assert_eq!(prof.rows[1].formula_coefficient, 3);

        let c4 = PrimaryGroupSpec::cyclic(2, 2).unwrap();
        let prof = wedderburn_profile(&c4, CAP).unwrap();
        assert_eq!(prof.rows[2].census_coefficient, 1);
        assert_eq!(prof.rows[2].formula_coefficient, 1);
        assert_eq!(prof.rows[2].statement_variant, 2);
        assert!(!prof.rows[2].variant_agrees);
    }

    #[test]
    fn compare_examples() {
        let g = grp("2:[3]");
        let set = elements(&oracle_pci_set(&g).unwrap());
        let mut perm = set.clone();
        perm.reverse();
        assert!(compare_pci_sets(&set, &perm).equal);

        let short = &set[1..];
        let cmp = compare_pci_sets(&set, short);
        assert!(!cmp.equal);
        assert_eq!(cmp.only_left.as_ref(), Some(&set[0]));
        assert_eq!(cmp.witness(), Some(&set[0]));
        assert!(cmp.only_right.is_none());

        // multiset semantics: a duplicate is not absorbed
        let mut dup = set.clone();
        dup.push(set[2].clone());
        let cmp = compare_pci_sets(&set, &dup);
        assert!(!cmp.equal);
        assert_eq!(cmp.only_right.as_ref(), Some(&set[2]));
    }
}
