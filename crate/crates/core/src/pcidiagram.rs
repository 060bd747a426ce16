//! PCI-diagrams of abelian p-groups and the idempotents built from them.
//!
//! The diagram follows a composition chain `1 = G_0 < G_1 < ... < G_N = G`
//! where `G_{l+1} = ⟨G_l, u⟩` for the `(l+1)`-th long generator `u`. Level `l`
//! holds the primitive central idempotents of `Q[G_l]`, each stored in the
//! factored form `K̂` (the trivial vertex, `K = G_l`) or `K̂·(1 − e_z)`.
//!
//! Passing from level `l` to `l+1`:
//! - the trivial vertex splits into `e·e_u` and `e·e'_u`;
//! - a nontrivial vertex with `|G_l/K| = p^n` persists unchanged when
//!   `u^{p^n} ∉ K`, i.e. when `G_{l+1}/K` is still cyclic;
//! - otherwise it branches into `p` children with kernels `⟨K, z^i·v⟩`,
//!   `i = 0..p−1`, where `v = u·g` for the first `g ∈ G_l` (in canonical
//!   order, so `g = 1` whenever `u^p ∈ K`) with `v^p ∈ K`.
//!
//! The primed element `z` never changes once introduced, so every nontrivial
//! vertex carries exactly one primed factor whose element is a long generator.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::cyclotome::{CycloAlgebraElement, CycloNumber};
use crate::error::{Error, Result};
use crate::exactalg::{AlgebraElement, FactoredIdempotent, PackedElement, Rational};
use crate::groupcore::{AbelianGroup, AbelianGroupSpec, GroupElement, LongGenerator, PrimaryGroupSpec};

/// How a vertex at level `l+1` arose from its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Trivial vertex `e` → `e·e_u`, `e·e'_u`.
    Split,
    /// Nontrivial vertex carried to the next level unchanged.
    Persist,
    /// Nontrivial vertex → `p` children with enlarged kernels.
    Branch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PciVertex {
    pub level: usize,
    pub form: FactoredIdempotent,
    pub trivial: bool,
    /// `r` with `|G_l/K| = p^r`.
    pub field_index: u32,
    /// `|K|`.
    pub kernel_order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PciEdge {
    /// Level of the parent; the child lives at `level + 1`.
    pub level: usize,
    pub parent: usize,
    pub child: usize,
    pub rule: Rule,
}

#[derive(Debug, Clone)]
pub struct PciDiagram {
    spec: PrimaryGroupSpec,
    group: Arc<AbelianGroup>,
    order: Vec<LongGenerator>,
    chain: Vec<GroupElement>,
    levels: Vec<Vec<PciVertex>>,
    edges: Vec<PciEdge>,
}

/// Field index of a rational PCI: `(p, r)` per primary part, so that
/// `Q[G]e ≅ Q(ζ_m)` with `m = Π p^r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldIndex(pub Vec<(u64, u32)>);

impl FieldIndex {
    pub fn primary(p: u64, r: u32) -> Self {
        Self(vec![(p, r)])
    }

    /// `m` with `Q[G]e ≅ Q(ζ_m)`.
    pub fn conductor(&self) -> u64 {
        self.0.iter().map(|&(p, r)| p.pow(r)).product()
    }

    /// `dim_Q Q(ζ_m) = φ(m)`.
    pub fn dimension(&self) -> u64 {
        arith::euler_phi(self.conductor())
    }
}

/// A primitive central idempotent of `Q[G]` with its field index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPci {
    pub element: AlgebraElement,
    pub field_index: FieldIndex,
}

/// A PCI held as packed numerators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PackedPci {
    pub element: PackedElement,
    pub field_index: FieldIndex,
}

impl PciVertex {
    /// `K̂` or `K̂·(1 − e_z)` as a coefficient vector over the whole group.
    pub fn expand(&self, group: &Arc<AbelianGroup>) -> Result<AlgebraElement> {
        self.form.expand(group)
    }

    /// `K=<gens>; z=<element>`, or `trivial`.
    pub fn label(&self, spec: &PrimaryGroupSpec) -> String {
        if self.trivial {
            return "trivial".to_string();
        }
        let gens: Vec<String> = self
            .form
            .kernel_gens
            .iter()
            .map(|g| spec.format_element(g))
            .collect();
        let z = self
            .form
            .primed
            .as_ref()
            .map(|z| spec.format_element(z))
            .unwrap_or_default();
        format!("K=<{}>; z={}", gens.join(","), z)
    }

    /// The product form `e_{k_1}···e_{k_j}·e'_z` (or `1` at level 0).
    ///
    /// Kernel generators are accumulated so that each has order `p` modulo the
    /// subgroup generated by the earlier ones, which makes `K̂ = Π e_{k_i}`.
    pub fn product_form(&self, spec: &PrimaryGroupSpec) -> String {
        let mut factors: Vec<String> = self
            .form
            .kernel_gens
            .iter()
            .map(|g| format!("e[{}]", spec.format_element(g)))
            .collect();
        if let Some(z) = &self.form.primed {
            factors.push(format!("e'[{}]", spec.format_element(z)));
        }
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join(" ")
        }
    }
}

/// Builds the diagram along the canonical composition chain.
pub fn build_pci_diagram(spec: &PrimaryGroupSpec, cap: u64) -> Result<PciDiagram> {
    build_pci_diagram_with_order(spec, &spec.long_generator_sequence(), cap)
}

/// Builds the diagram along any power-monotone ordering of the long generators.
pub fn build_pci_diagram_with_order(
    spec: &PrimaryGroupSpec,
    order: &[LongGenerator],
    cap: u64,
) -> Result<PciDiagram> {
    spec.validate_generator_order(order)?;
    let group = Arc::new(AbelianGroup::primary(spec.clone(), cap)?);
    let p = spec.prime();
    let chain: Vec<GroupElement> = order
        .iter()
        .map(|&x| spec.embed_generator(x))
        .collect::<Result<_>>()?;

    let mut levels = vec![vec![PciVertex {
        level: 0,
        form: FactoredIdempotent::average(vec![]),
        trivial: true,
        field_index: 0,
        kernel_order: 1,
    }]];
    let mut edges = Vec::new();
    let mut level_members: Vec<usize> = vec![0];
    let mut in_kernel = vec![false; group.order()];

    for (l, u) in chain.iter().enumerate() {
        let next_level = l + 1;
        let level_order = level_members.len() as u64;
        let mut next: Vec<PciVertex> = Vec::new();
        for (parent, v) in levels[l].iter().enumerate() {
            let mut push = |child: PciVertex, rule: Rule, next: &mut Vec<PciVertex>| {
                edges.push(PciEdge {
                    level: l,
                    parent,
                    child: next.len(),
                    rule,
                });
                next.push(child);
            };
            if v.trivial {
                push(
                    PciVertex {
                        level: next_level,
                        form: FactoredIdempotent::average(chain[..next_level].to_vec()),
                        trivial: true,
                        field_index: 0,
                        kernel_order: level_order * p,
                    },
                    Rule::Split,
                    &mut next,
                );
                push(
                    PciVertex {
                        level: next_level,
                        form: FactoredIdempotent::primed(chain[..l].to_vec(), u.clone()),
                        trivial: false,
                        field_index: 1,
                        kernel_order: level_order,
                    },
                    Rule::Split,
                    &mut next,
                );
                continue;
            }

            let z = v.form.primed.as_ref().ok_or_else(|| {
                Error::InvariantViolation("nontrivial vertex without a primed factor".into())
            })?;
            let kernel = group.closure_indices(&v.form.kernel_gens);
            for &k in &kernel {
                in_kernel[k] = true;
            }
            let quotient = level_order / kernel.len() as u64;
            let cyclic = !in_kernel[group.index_of(&group.pow(u, quotient))];
            if cyclic {
                push(
                    PciVertex {
                        level: next_level,
                        field_index: v.field_index + 1,
                        ..v.clone()
                    },
                    Rule::Persist,
                    &mut next,
                );
            } else {
                let complement = level_members
                    .iter()
                    .map(|&g| group.mul_unchecked(u, &group.element_at(g)))
                    .find(|w| in_kernel[group.index_of(&group.pow(w, p))])
                    .ok_or_else(|| {
                        Error::Inconsistency(format!(
                            "no order-{p} complement for {} at level {next_level}",
                            v.label(spec)
                        ))
                    })?;
                let mut zi = group.identity();
                for _ in 0..p {
                    let mut gens = v.form.kernel_gens.clone();
                    gens.push(group.mul_unchecked(&zi, &complement));
                    push(
                        PciVertex {
                            level: next_level,
                            form: FactoredIdempotent::primed(gens, z.clone()),
                            trivial: false,
                            field_index: v.field_index,
                            kernel_order: v.kernel_order * p,
                        },
                        Rule::Branch,
                        &mut next,
                    );
                    zi = group.mul_unchecked(&zi, z);
                }
            }
            for &k in &kernel {
                in_kernel[k] = false;
            }
        }
        levels.push(next);
        level_members = group.closure_indices(&chain[..next_level]);
    }

    Ok(PciDiagram {
        spec: spec.clone(),
        group,
        order: order.to_vec(),
        chain,
        levels,
        edges,
    })
}

impl PciDiagram {
    pub fn spec(&self) -> &PrimaryGroupSpec {
        &self.spec
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn generator_order(&self) -> &[LongGenerator] {
        &self.order
    }

    /// Embedded long generators `x_1, ..., x_N` of the chain.
    pub fn chain(&self) -> &[GroupElement] {
        &self.chain
    }

    /// Sorted element indices of `G_l`.
    pub fn level_subgroup(&self, l: usize) -> Vec<usize> {
        self.group.closure_indices(&self.chain[..l])
    }

    pub fn levels(&self) -> &[Vec<PciVertex>] {
        &self.levels
    }

    pub fn edges(&self) -> &[PciEdge] {
        &self.edges
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn leaves(&self) -> &[PciVertex] {
        self.levels.last().expect("level 0 always exists")
    }

    /// Expansions of one level, computed in parallel, in vertex order.
    pub fn expand_level(&self, l: usize) -> Result<Vec<AlgebraElement>> {
        self.levels[l]
            .par_iter()
            .map(|v| v.expand(&self.group))
            .collect()
    }

    /// The complete set of primitive central idempotents of `Q[G]`.
    pub fn leaf_pcis(&self) -> Result<Vec<RationalPci>> {
        let p = self.spec.prime();
        let elems = self.expand_level(self.levels.len() - 1)?;
        Ok(elems
            .into_iter()
            .zip(self.leaves())
            .map(|(element, v)| RationalPci {
                element,
                field_index: FieldIndex::primary(p, v.field_index),
            })
            .collect())
    }
}

/// `e_0 = e_{x_1}···e_{x_n}` and `e_i = e_{x_1}···e_{x_{i−1}}·e'_{x_i}` for
/// `C_{p^n}`, with field indices `0` and `n + 1 − i`.
pub fn cyclic_rational_pcis(p: u64, n: u32, cap: u64) -> Result<Vec<RationalPci>> {
    let spec = PrimaryGroupSpec::cyclic(p, n)?;
    let group = Arc::new(AbelianGroup::primary(spec.clone(), cap)?);
    let xs: Vec<GroupElement> = spec
        .long_generator_sequence()
        .into_iter()
        .map(|x| spec.embed_generator(x))
        .collect::<Result<_>>()?;
    let one = AlgebraElement::one(&group);
    // prefix[i] = e_{x_1}···e_{x_i}
    let mut prefix = vec![one.clone()];
    for x in &xs {
        let ex = AlgebraElement::power_average(&group, x, p)?;
        let next = prefix.last().expect("nonempty").convolve(&ex)?;
        prefix.push(next);
    }
    let mut out = vec![RationalPci {
        element: prefix[n as usize].clone(),
        field_index: FieldIndex::primary(p, 0),
    }];
    for i in 1..=n as usize {
        let ex = AlgebraElement::power_average(&group, &xs[i - 1], p)?;
        let primed = one.sub(&ex)?;
        out.push(RationalPci {
            element: prefix[i - 1].convolve(&primed)?,
            field_index: FieldIndex::primary(p, n + 1 - i as u32),
        });
    }
    Ok(out)
}

fn cyclic_group(p: u64, n: u32, cap: u64) -> Result<Arc<AbelianGroup>> {
    Ok(Arc::new(AbelianGroup::primary(PrimaryGroupSpec::cyclic(p, n)?, cap)?))
}

/// `e_{ζx} = (1 + ζx + ... + (ζx)^{p−1})/p` in `Q(ζ_m)[G]`, `x` given by index.
fn twisted_average(group: &Arc<AbelianGroup>, m: u64, root: &CycloNumber, x: usize, p: u64) -> CycloAlgebraElement {
    let mut coeffs = vec![CycloNumber::zero(m); group.order()];
    let inv_p = Rational::new(1.into(), (p as i64).into());
    let mut idx = 0usize;
    let mut power = CycloNumber::one(m);
    for _ in 0..p {
        coeffs[idx] = coeffs[idx].add(&power.scale(&inv_p)).expect("same modulus");
        idx = group.mul_index(idx, x);
        power = power.mul(root).expect("same modulus");
    }
    CycloAlgebraElement::from_coeffs(group, m, coeffs).expect("shape matches")
}

/// The `p^n` primitive central idempotents of `Q(ζ_{p^n})[C_{p^n}]`, the
/// element at position `t` being `Π_j e_{ζ_j x_j}` with `ζ_j = ζ^{t·p^{n−j}}`.
pub fn splitting_field_pcis(p: u64, n: u32, cap: u64) -> Result<Vec<CycloAlgebraElement>> {
    let group = cyclic_group(p, n, cap)?;
    let m = p.pow(n);
    let xs: Vec<usize> = (1..=n).map(|j| p.pow(n - j) as usize).collect();
    (0..m)
        .into_par_iter()
        .map(|t| {
            let mut e = CycloAlgebraElement::one(&group, m);
            for (j, &x) in (1..=n).zip(&xs) {
                let root = CycloNumber::root_power(m, (t * p.pow(n - j)) as i64);
                e = e.convolve(&twisted_average(&group, m, &root, x, p))?;
            }
            Ok(e)
        })
        .collect()
}

/// Lifts an element of `Q(ζ_{p^{n−1}})[C_{p^{n−1}}]` into `Q(ζ_{p^n})[C_{p^n}]`
/// along `C_{p^{n−1}} = ⟨y^p⟩ ⊂ ⟨y⟩`.
pub fn lift_to_parent(eta: &CycloAlgebraElement, p: u64, n: u32, cap: u64) -> Result<CycloAlgebraElement> {
    if n == 0 {
        return Err(Error::input("the trivial group has no parent in the chain"));
    }
    let small = p.pow(n - 1);
    if eta.modulus() != small || eta.group().order() as u64 != small {
        return Err(Error::ModulusMismatch(eta.modulus(), small));
    }
    let group = cyclic_group(p, n, cap)?;
    let m = p.pow(n);
    let mut coeffs = vec![CycloNumber::zero(m); group.order()];
    for (k, c) in eta.coeffs().iter().enumerate() {
        coeffs[k * p as usize] = c.embed(m)?;
    }
    CycloAlgebraElement::from_coeffs(&group, m, coeffs)
}

/// The `p` idempotents `η·e_{ε^i ζ_n x_n}` extending a lifted splitting
/// idempotent `η` of the index-`p` subgroup, where `ε = ζ^{p^{n−1}}` and
/// `ζ_n` is the first `p`-th root of `ζ_{n−1}` in the power order of `ζ`.
pub fn extension_children(eta: &CycloAlgebraElement, p: u64, n: u32) -> Result<Vec<CycloAlgebraElement>> {
    let m = p.pow(n);
    if n == 0 || eta.modulus() != m || eta.group().order() as u64 != m {
        return Err(Error::ModulusMismatch(eta.modulus(), m));
    }
    let group = eta.group().clone();
    // η = (1/p^{n−1}) Σ ζ_{n−1}^k x_{n−1}^k with x_{n−1} = y^p
    let prev_root = if n == 1 {
        CycloNumber::one(m)
    } else {
        let sub_order = Rational::from_integer((m / p).into());
        eta.coeffs()[p as usize].scale(&sub_order)
    };
    let root = (0..m as i64)
        .map(|k| CycloNumber::root_power(m, k))
        .find(|r| r.pow(p) == prev_root)
        .ok_or_else(|| Error::input("η does not come from the index-p subgroup"))?;
    let eps = CycloNumber::root_power(m, (m / p) as i64);
    let mut twist = root;
    let mut out = Vec::with_capacity(p as usize);
    for _ in 0..p {
        out.push(eta.convolve(&twisted_average(&group, m, &twist, 1, p))?);
        twist = twist.mul(&eps)?;
    }
    Ok(out)
}

/// Sums the splitting idempotents over Galois orbits `t ~ kt`, `gcd(k, m) = 1`,
/// where `t` is the position in `set` and `m = set.len()`. Each orbit sum must
/// be rational; orbits are returned by smallest member.
pub fn galois_orbit_collapse(set: &[CycloAlgebraElement], modulus: u64) -> Result<Vec<RationalPci>> {
    let m = set.len() as u64;
    if set.iter().any(|e| e.modulus() != modulus) {
        return Err(Error::ModulusMismatch(set.first().map_or(0, |e| e.modulus()), modulus));
    }
    let factors = arith::factorize(m.max(1));
    let mut seen = vec![false; set.len()];
    let mut out = Vec::new();
    for t in 0..m {
        if seen[t as usize] {
            continue;
        }
        let mut orbit: Vec<u64> = arith::units_mod(m).into_iter().map(|k| (k * t) % m.max(1)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        let mut sum = CycloAlgebraElement::zero(set[t as usize].group(), modulus);
        for &s in &orbit {
            seen[s as usize] = true;
            sum = sum.add(&set[s as usize])?;
        }
        let element = sum.to_rational().ok_or_else(|| {
            Error::Inconsistency(format!("orbit of t = {t} has a non-rational sum"))
        })?;
        let order = m / arith::gcd(t, m);
        let field_index = FieldIndex(match factors.as_slice() {
            [] => vec![],
            [(p, _)] => vec![(*p, arith::log_exact(order, *p).unwrap_or(0))],
            _ => return Err(Error::input("orbit collapse expects a prime-power index set")),
        });
        out.push(RationalPci { element, field_index });
    }
    Ok(out)
}

/// All products `Π_p e_p` of one primitive central idempotent per primary
/// part, lifted into `Q[G]`. Products are ordered lexicographically by the
/// per-part positions.
pub fn cross_prime_product(group: &Arc<AbelianGroup>, per_prime: &[Vec<RationalPci>]) -> Result<Vec<RationalPci>> {
    let parts = group.spec().parts();
    if per_prime.len() != parts.len() {
        return Err(Error::SpecMismatch(format!(
            "{} PCI sets for {} primary parts",
            per_prime.len(),
            parts.len()
        )));
    }
    let mut lifted: Vec<Vec<RationalPci>> = Vec::with_capacity(parts.len());
    for (i, (set, part)) in per_prime.iter().zip(parts).enumerate() {
        let mut out = Vec::with_capacity(set.len());
        for pci in set {
            let src = pci.element.group();
            if src.spec() != &AbelianGroupSpec::from(part.clone()) {
                return Err(Error::SpecMismatch(format!("{} is not part {part}", src.spec())));
            }
            let mut coeffs = vec![Rational::from_integer(0.into()); group.order()];
            for (k, c) in pci.element.coeffs().iter().enumerate() {
                let g = group.lift_from_part(i, &src.element_at(k))?;
                coeffs[group.index_of(&g)] = c.clone();
            }
            out.push(RationalPci {
                element: AlgebraElement::from_coeffs(group, coeffs)?,
                field_index: pci.field_index.clone(),
            });
        }
        lifted.push(out);
    }
    let mut acc = vec![RationalPci {
        element: AlgebraElement::one(group),
        field_index: FieldIndex(vec![]),
    }];
    for set in &lifted {
        acc = acc
            .par_iter()
            .flat_map_iter(|a| {
                set.iter().map(move |b| {
                    let mut fi = a.field_index.0.clone();
                    fi.extend(b.field_index.0.iter().copied());
                    Ok(RationalPci {
                        element: a.element.convolve(&b.element)?,
                        field_index: FieldIndex(fi),
                    })
                })
            })
            .collect::<Result<_>>()?;
    }
    Ok(acc)
}

/// The engine's complete PCI set for any finite abelian group: one diagram
/// per primary part, combined across primes.
pub fn engine_pci_set(spec: &AbelianGroupSpec, cap: u64) -> Result<Vec<RationalPci>> {
    let group = Arc::new(AbelianGroup::new(spec.clone(), cap)?);
    let diagrams = spec
        .parts()
        .iter()
        .map(|part| build_pci_diagram(part, cap))
        .collect::<Result<Vec<_>>>()?;
    engine_pci_set_from(&group, &diagrams)
}

/// Combines already-built per-part diagrams into the PCI set of `group`.
pub fn engine_pci_set_from(group: &Arc<AbelianGroup>, diagrams: &[PciDiagram]) -> Result<Vec<RationalPci>> {
    let mut per_prime = diagrams
        .iter()
        .map(PciDiagram::leaf_pcis)
        .collect::<Result<Vec<_>>>()?;
    if let [single] = per_prime.as_slice() {
        if single.first().map(|e| e.element.group().spec()) == Some(group.spec()) {
            return Ok(per_prime.pop().expect("one part"));
        }
    }
    cross_prime_product(group, &per_prime)
}

/// [`engine_pci_set_from`] in packed form. For a single primary part the
/// leaves are expanded one at a time, so the dense set never exists.
pub fn engine_packed_set_from(group: &Arc<AbelianGroup>, diagrams: &[PciDiagram]) -> Result<Vec<PackedPci>> {
    if let [d] = diagrams {
        if &AbelianGroupSpec::from(d.spec().clone()) == group.spec() {
            let p = d.spec().prime();
            return d
                .leaves()
                .par_iter()
                .map(|v| {
                    Ok(PackedPci {
                        element: v.expand(d.group())?.pack()?,
                        field_index: FieldIndex::primary(p, v.field_index),
                    })
                })
                .collect();
        }
    }
    engine_pci_set_from(group, diagrams)?
        .into_par_iter()
        .map(|e| {
            Ok(PackedPci {
                element: e.element.pack()?,
                field_index: e.field_index,
            })
        })
        .collect()
}
