//! Cross-checks between the diagram engine, the character oracle and the
//! counting formulas. Every check yields data (pass/fail plus a witness);
//! only malformed input is an `Err`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::cyclotome::CycloAlgebraElement;
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, AlgebraElement, PackedElement, Rational};
use crate::groupcore::{AbelianGroup, AbelianGroupSpec, LongGenerator};
use crate::oracle::{compute_wedderburn_profile, oracle_packed_set};
use crate::pcidiagram::{
    build_pci_diagram_with_order, cyclic_rational_pcis, engine_packed_set_from, extension_children,
    galois_orbit_collapse, lift_to_parent, splitting_field_pcis, PackedPci, PciDiagram, RationalPci,
};

/// Groups up to this order are always checked exhaustively.
pub const FULL_CHECK_LIMIT: usize = 512;
/// Idempotents examined per set when sampling.
pub const SAMPLED_ELEMENTS: usize = 32;
/// Orthogonal pairs examined per set when sampling.
pub const SAMPLED_PAIRS: usize = 96;
/// Exact rank is recomputed only for components with `|G/K|` up to this;
/// the trace gives every dimension regardless.
pub const RANK_QUOTIENT_LIMIT: u64 = 64;
/// Largest `p^n` for which the splitting-field checks run inside `verify`.
pub const SPLIT_CHECK_LIMIT: u64 = 64;

const SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    Full,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub group: String,
    pub order: u64,
    pub exhaustive: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub cap: u64,
    pub check_level: CheckLevel,
    /// Generator order for a primary group; canonical when `None`.
    pub order: Option<Vec<LongGenerator>>,
    /// Also rebuild every part along the alternate order and compare.
    pub alternate_order: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            cap: 4096,
            check_level: CheckLevel::Sampled,
            order: None,
            alternate_order: false,
        }
    }
}

/// Chooses which idempotents and pairs to test.
#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    exhaustive: bool,
}

impl Sampler {
    pub fn new(group_order: usize, level: CheckLevel) -> Self {
        Self {
            exhaustive: group_order <= FULL_CHECK_LIMIT || level == CheckLevel::Full,
        }
    }

    pub fn exhaustive() -> Self {
        Self { exhaustive: true }
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    fn rng(salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(SEED ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    /// Sorted indices into `0..n`.
    pub fn indices(&self, n: usize, salt: u64) -> Vec<usize> {
        if self.exhaustive || n <= SAMPLED_ELEMENTS {
            return (0..n).collect();
        }
        let mut v = index::sample(&mut Self::rng(salt), n, SAMPLED_ELEMENTS).into_vec();
        v.sort_unstable();
        v
    }

    /// Sorted pairs `i < j` from `0..n`.
    pub fn pairs(&self, n: usize, salt: u64) -> Vec<(usize, usize)> {
        let total = n * n.saturating_sub(1) / 2;
        let picks: Vec<usize> = if self.exhaustive || total <= SAMPLED_PAIRS {
            (0..total).collect()
        } else {
            let mut v = index::sample(&mut Self::rng(salt ^ 1), total, SAMPLED_PAIRS).into_vec();
            v.sort_unstable();
            v
        };
        // pair number k in row-major order of the strict upper triangle
        let mut out = Vec::with_capacity(picks.len());
        let (mut i, mut row_start) = (0usize, 0usize);
        for k in picks {
            while k >= row_start + (n - 1 - i) {
                row_start += n - 1 - i;
                i += 1;
            }
            out.push((i, i + 1 + (k - row_start)));
        }
        out
    }
}

/// Abbreviated coefficient vector for witnesses.
pub fn describe(e: &AlgebraElement) -> String {
    const SHOWN: usize = 32;
    let coeffs = e.coeffs();
    let head: Vec<String> = coeffs.iter().take(SHOWN).map(format_rational).collect();
    if coeffs.len() > SHOWN {
        format!("[{}, ... ({} coefficients)]", head.join(", "), coeffs.len())
    } else {
        format!("[{}]", head.join(", "))
    }
}

/// An indexed family of elements that can be produced one at a time, so a
/// check can sample a large set without holding it densely.
pub trait IdempotentFamily: Sync {
    fn count(&self) -> usize;
    fn element(&self, i: usize) -> Result<Cow<'_, AlgebraElement>>;

    fn packed(&self, i: usize) -> Result<Cow<'_, PackedElement>> {
        Ok(Cow::Owned(self.element(i)?.pack()?))
    }
}

impl IdempotentFamily for [AlgebraElement] {
    fn count(&self) -> usize {
        self.len()
    }

    fn element(&self, i: usize) -> Result<Cow<'_, AlgebraElement>> {
        Ok(Cow::Borrowed(&self[i]))
    }
}

impl IdempotentFamily for [RationalPci] {
    fn count(&self) -> usize {
        self.len()
    }

    fn element(&self, i: usize) -> Result<Cow<'_, AlgebraElement>> {
        Ok(Cow::Borrowed(&self[i].element))
    }
}

/// Packed idempotents, unpacked on demand.
pub struct PackedFamily<'a> {
    pub group: &'a Arc<AbelianGroup>,
    pub set: &'a [PackedPci],
}

impl IdempotentFamily for PackedFamily<'_> {
    fn count(&self) -> usize {
        self.set.len()
    }

    fn element(&self, i: usize) -> Result<Cow<'_, AlgebraElement>> {
        Ok(Cow::Owned(self.set[i].element.unpack(self.group)?))
    }

    fn packed(&self, i: usize) -> Result<Cow<'_, PackedElement>> {
        Ok(Cow::Borrowed(&self.set[i].element))
    }
}

/// The vertices of one diagram level, expanded on demand.
pub struct LevelFamily<'a> {
    pub diagram: &'a PciDiagram,
    pub level: usize,
}

impl IdempotentFamily for LevelFamily<'_> {
    fn count(&self) -> usize {
        self.diagram.levels()[self.level].len()
    }

    fn element(&self, i: usize) -> Result<Cow<'_, AlgebraElement>> {
        Ok(Cow::Owned(self.diagram.levels()[self.level][i].expand(self.diagram.group())?))
    }
}

/// `Σ set` over one common denominator, one member at a time.
fn family_sum<F: IdempotentFamily + ?Sized>(group: &Arc<AbelianGroup>, set: &F) -> Result<AlgebraElement> {
    let overflow = || Error::Inconsistency("sum too large to accumulate".into());
    let mut den: i128 = 1;
    let mut acc = vec![0i128; group.order()];
    for i in 0..set.count() {
        let e = set.packed(i)?;
        if e.nums().len() != acc.len() {
            return Err(Error::SpecMismatch(format!("#{i} has {} coefficients", e.nums().len())));
        }
        let d = e.den() as i128;
        let lcm = den.lcm(&d);
        if lcm != den {
            let up = lcm / den;
            for a in &mut acc {
                *a = a.checked_mul(up).ok_or_else(overflow)?;
            }
            den = lcm;
        }
        let up = den / d;
        for (a, &x) in acc.iter_mut().zip(e.nums()) {
            *a = (x as i128).checked_mul(up).and_then(|y| a.checked_add(y)).ok_or_else(overflow)?;
        }
    }
    let den = BigInt::from(den);
    let coeffs = acc.into_iter().map(|x| Rational::new(BigInt::from(x), den.clone())).collect();
    AlgebraElement::from_coeffs(group, coeffs)
}

/// First violation of "idempotent, pairwise orthogonal, sums to 1", if any.
pub fn soundness_witness<F: IdempotentFamily + ?Sized>(
    group: &Arc<AbelianGroup>,
    set: &F,
    sampler: Sampler,
    salt: u64,
) -> Result<Option<String>> {
    let n = set.count();
    let sum = family_sum(group, set)?;
    if sum != AlgebraElement::one(group) {
        return Ok(Some(format!("sum of {n} idempotents is {}", describe(&sum))));
    }
    let idx = sampler.indices(n, salt);
    let pairs = sampler.pairs(n, salt);
    // materialize each sampled member once
    let needed: BTreeSet<usize> = idx.iter().copied().chain(pairs.iter().flat_map(|&(i, j)| [i, j])).collect();
    let needed: Vec<usize> = needed.into_iter().collect();
    let members: BTreeMap<usize, Cow<'_, AlgebraElement>> = needed
        .par_iter()
        .map(|&i| Ok((i, set.element(i)?)))
        .collect::<Result<_>>()?;

    let ok: Vec<bool> = idx.par_iter().map(|i| members[i].is_idempotent()).collect();
    if let Some(pos) = ok.iter().position(|&b| !b) {
        let i = idx[pos];
        return Ok(Some(format!("#{i} is not idempotent: {}", describe(&members[&i]))));
    }
    let ok = pairs
        .par_iter()
        .map(|(i, j)| members[i].are_orthogonal(&members[j]))
        .collect::<Result<Vec<bool>>>()?;
    if let Some(pos) = ok.iter().position(|&b| !b) {
        let (i, j) = pairs[pos];
        return Ok(Some(format!(
            "#{i} and #{j} are not orthogonal: {} and {}",
            describe(&members[&i]),
            describe(&members[&j])
        )));
    }
    Ok(None)
}

/// `dim_Q Q[G]e = |G|·e(1)`, the trace of multiplication by `e`.
pub fn trace_dimension(e: &AlgebraElement) -> Option<u64> {
    let n = Rational::from_integer((e.group().order() as u64).into());
    let d = &e.coeffs()[0] * n;
    if !d.is_integer() {
        return None;
    }
    u64::try_from(d.to_integer()).ok()
}

type Outcome = std::result::Result<String, String>;

fn run_check(name: &str, f: impl FnOnce() -> Result<Outcome>) -> Check {
    let (status, detail, witness) = match f() {
        Ok(Ok(detail)) => (Status::Pass, detail, None),
        Ok(Err(w)) => (Status::Fail, String::new(), Some(w)),
        Err(e) => (Status::Fail, String::new(), Some(e.to_string())),
    };
    Check {
        name: name.to_string(),
        status,
        detail,
        witness,
    }
}

fn skipped(name: &str, why: String) -> Check {
    Check {
        name: name.to_string(),
        status: Status::Skipped,
        detail: why,
        witness: None,
    }
}

fn build_diagrams(spec: &AbelianGroupSpec, opts: &VerifyOptions, alternate: bool) -> Result<Vec<PciDiagram>> {
    if opts.order.is_some() && spec.as_primary().is_none() {
        return Err(Error::input("a generator order can only be given for a single prime"));
    }
    spec.parts()
        .iter()
        .map(|part| {
            let order = match (&opts.order, alternate) {
                (_, true) => part.alternate_generator_sequence(),
                (Some(o), false) => o.clone(),
                (None, false) => part.long_generator_sequence(),
            };
            build_pci_diagram_with_order(part, &order, opts.cap)
        })
        .collect()
}

/// Runs the full cross-check suite on one group.
pub fn verify_group(spec: &AbelianGroupSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    let group = Arc::new(AbelianGroup::new(spec.clone(), opts.cap)?);
    if let (Some(order), Some(primary)) = (&opts.order, spec.as_primary()) {
        primary.validate_generator_order(order)?;
    }
    let sampler = Sampler::new(group.order(), opts.check_level);
    let mut checks = Vec::new();

    let diagrams = build_diagrams(spec, opts, false);
    let engine: Result<Vec<PackedPci>> = diagrams
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|d| engine_packed_set_from(&group, d));
    let oracle = oracle_packed_set(&group);

    checks.push(run_check("engine_soundness", || {
        let set = engine.as_ref().map_err(Clone::clone)?;
        Ok(match soundness_witness(&group, &PackedFamily { group: &group, set }, sampler, 1)? {
            None => Ok(format!("{} idempotents", set.len())),
            Some(w) => Err(w),
        })
    }));

    checks.push(run_check("oracle_soundness", || {
        let set = oracle.as_ref().map_err(Clone::clone)?;
        Ok(match soundness_witness(&group, &PackedFamily { group: &group, set }, sampler, 2)? {
            None => Ok(format!("{} idempotents", set.len())),
            Some(w) => Err(w),
        })
    }));

    checks.push(run_check("oracle_equivalence", || {
        let e = engine.as_ref().map_err(Clone::clone)?;
        let o = oracle.as_ref().map_err(Clone::clone)?;
        Ok(match packed_difference(e, o) {
            None => Ok(format!("{} PCIs", e.len())),
            Some(w) => Err(w.describe(&group, "engine", "oracle")),
        })
    }));

    checks.push(run_check("rule0_kernel", || {
        let diagrams = diagrams.as_ref().map_err(Clone::clone)?;
        let mut vertices = 0;
        for (part, d) in diagrams.iter().enumerate() {
            let (seen, witness) = rule0_witness(d, sampler, 100 + 64 * part as u64)?;
            vertices += seen;
            if let Some(w) = witness {
                return Ok(Err(w));
            }
        }
        Ok(Ok(format!("{vertices} vertices")))
    }));

    checks.push(run_check("level_soundness", || {
        let diagrams = diagrams.as_ref().map_err(Clone::clone)?;
        for (part, d) in diagrams.iter().enumerate() {
            // a primary group's leaves are already covered by engine_soundness
            let levels = d.levels().len() - usize::from(spec.as_primary().is_some());
            for level in 0..levels {
                let salt = 200 + (part * 64 + level) as u64;
                if let Some(w) = soundness_witness(d.group(), &LevelFamily { diagram: d, level }, sampler, salt)? {
                    return Ok(Err(format!("{} level {level}: {w}", d.spec())));
                }
            }
        }
        Ok(Ok(format!("{} diagrams", diagrams.len())))
    }));

    checks.push(run_check("leaf_completeness", || {
        let e = engine.as_ref().map_err(Clone::clone)?;
        let n = group.order() as i128;
        let mut total = 0u64;
        for (i, x) in e.iter().enumerate() {
            // dim_Q Q[G]e = |G|·e(1), the trace of multiplication by e
            let (num, den) = (x.element.nums()[0] as i128 * n, x.element.den() as i128);
            if num % den != 0 {
                return Ok(Err(format!("#{i} has a non-integral trace")));
            }
            let dim = (num / den) as u64;
            if dim != x.field_index.dimension() {
                return Ok(Err(format!(
                    "#{i}: dimension {dim} but field index {:?}",
                    x.field_index.0
                )));
            }
            total += dim;
        }
        if total != group.order() as u64 {
            return Ok(Err(format!("dimensions sum to {total}, not {}", group.order())));
        }
        // kernel and exact rank on the sampled leaves, as independent routes
        // to the field index and the dimension
        let picked = sampler.indices(e.len(), 3);
        let found = picked
            .par_iter()
            .map(|&i| {
                let x = &e[i];
                let elem = x.element.unpack(&group)?;
                let quotient = (group.order() / elem.stabilizer().len()) as u64;
                if quotient != x.field_index.conductor() {
                    return Ok(Some(format!("#{i}: |G/K| = {quotient} but field index {:?}", x.field_index.0)));
                }
                if quotient <= RANK_QUOTIENT_LIMIT {
                    let r = elem.kernel_and_field()?.dim as u64;
                    if r != x.field_index.dimension() {
                        return Ok(Some(format!("#{i}: exact rank {r}")));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<Option<String>>>>()?;
        if let Some(w) = found.into_iter().flatten().next() {
            return Ok(Err(w));
        }
        Ok(Ok(format!("dimensions sum to {total}")))
    }));

    checks.push(run_check("census_field_index", || {
        let diagrams = diagrams.as_ref().map_err(Clone::clone)?;
        for d in diagrams {
            let profile = compute_wedderburn_profile(d.spec(), opts.cap)?;
            let mut counts = BTreeMap::new();
            for v in d.leaves() {
                *counts.entry(v.field_index).or_insert(0u64) += 1;
            }
            for row in &profile.rows {
                let got = counts.get(&row.r).copied().unwrap_or(0);
                if got != row.census_coefficient {
                    return Ok(Err(format!(
                        "{}: {got} leaves with field index {} but {} cyclic subgroups of order {}^{}",
                        d.spec(),
                        row.r,
                        row.census_coefficient,
                        profile.prime,
                        row.r
                    )));
                }
            }
        }
        Ok(Ok(format!("{} primary parts", diagrams.len())))
    }));

    checks.push(run_check("wedderburn_formula", || {
        let mut rows = 0;
        for part in spec.parts() {
            let profile = compute_wedderburn_profile(part, opts.cap)?;
            if profile.census_dimension() != profile.order {
                return Ok(Err(format!(
                    "{part}: census dimensions sum to {}",
                    profile.census_dimension()
                )));
            }
            if let Some(row) = profile.rows.iter().find(|r| !r.agree) {
                return Ok(Err(format!(
                    "{part}, r = {}: census {} but formula {}",
                    row.r, row.census_coefficient, row.formula_coefficient
                )));
            }
            rows += profile.rows.len();
        }
        Ok(Ok(format!("{rows} rows")))
    }));

    checks.push(run_check("wedderburn_factorization", || {
        for part in spec.parts() {
            let p = part.prime();
            for row in compute_wedderburn_profile(part, opts.cap)?.rows.into_iter().skip(1) {
                let power = p.pow(row.power_exponent);
                let geometric_ok = row.geometric_part * (p - 1) == p.pow(row.b_r) - 1;
                if power * row.geometric_part != row.formula_coefficient
                    || !geometric_ok
                    || arith::gcd(row.geometric_part, p) != 1
                {
                    return Ok(Err(format!(
                        "{part}, r = {}: {} != {p}^{} * {}",
                        row.r, row.formula_coefficient, row.power_exponent, row.geometric_part
                    )));
                }
            }
        }
        Ok(Ok("power part times a unit mod p".to_string()))
    }));

    match spec.as_primary().filter(|s| s.is_cyclic()) {
        Some(cyclic) if cyclic.order().is_some_and(|o| o <= SPLIT_CHECK_LIMIT) => {
            let (p, n) = (cyclic.prime(), cyclic.exponent());
            checks.push(run_check("split_coherence", || {
                Ok(split_coherence(p, n, opts.cap, sampler)?.map(|()| format!("{} splitting idempotents", p.pow(n))))
            }));
        }
        Some(_) => checks.push(skipped(
            "split_coherence",
            format!("only run for cyclic groups of order at most {SPLIT_CHECK_LIMIT}"),
        )),
        None => {}
    }

    if opts.alternate_order {
        checks.push(run_check("alternate_order", || {
            let alt = build_diagrams(spec, opts, true)?;
            let set = engine_packed_set_from(&group, &alt)?;
            if let Some(w) = soundness_witness(&group, &PackedFamily { group: &group, set: &set }, sampler, 4)? {
                return Ok(Err(w));
            }
            let o = oracle.as_ref().map_err(Clone::clone)?;
            Ok(match packed_difference(&set, o) {
                None => Ok(format!("{} PCIs along the alternate order", set.len())),
                Some(w) => Err(w.describe(&group, "alternate order", "oracle")),
            })
        }));
    }

    Ok(VerificationReport {
        group: spec.to_string(),
        order: group.order() as u64,
        exhaustive: sampler.is_exhaustive(),
        checks,
    })
}

/// Where two packed PCI multisets first part ways.
#[derive(Debug)]
enum Difference<'a> {
    OnlyLeft(&'a PackedPci),
    OnlyRight(&'a PackedPci),
    FieldIndex(&'a PackedPci, &'a PackedPci),
}

impl Difference<'_> {
    fn describe(&self, group: &Arc<AbelianGroup>, left: &str, right: &str) -> String {
        let show = |x: &PackedPci| x.element.unpack(group).map(|e| describe(&e)).unwrap_or_default();
        match self {
            Self::OnlyLeft(x) => format!("only in {left}: {}", show(x)),
            Self::OnlyRight(x) => format!("only in {right}: {}", show(x)),
            Self::FieldIndex(a, b) => format!(
                "field index {:?} in {left} but {:?} in {right} for {}",
                a.field_index.0,
                b.field_index.0,
                show(a)
            ),
        }
    }
}

fn packed_difference<'a>(left: &'a [PackedPci], right: &'a [PackedPci]) -> Option<Difference<'a>> {
    let sorted = |s: &'a [PackedPci]| {
        let mut v: Vec<&PackedPci> = s.iter().collect();
        v.par_sort();
        v
    };
    let (l, r) = (sorted(left), sorted(right));
    let mut r_iter = r.iter().peekable();
    for a in &l {
        match r_iter.next() {
            None => return Some(Difference::OnlyLeft(a)),
            Some(b) if a.element == b.element => {
                if a.field_index != b.field_index {
                    return Some(Difference::FieldIndex(a, b));
                }
            }
            Some(b) if a.element < b.element => return Some(Difference::OnlyLeft(a)),
            Some(b) => return Some(Difference::OnlyRight(b)),
        }
    }
    r_iter.next().map(|b| Difference::OnlyRight(b))
}

/// Rule 0 and kernel bookkeeping over (a sample of) every level: each
/// nontrivial vertex has exactly one primed factor, a trivial one has kernel
/// `G_l`, and the tracked kernel is the algebraic one. Returns the number of
/// vertices examined and the first violation.
pub fn rule0_witness(d: &PciDiagram, sampler: Sampler, salt: u64) -> Result<(usize, Option<String>)> {
    let mut vertices = 0;
    for (l, level) in d.levels().iter().enumerate() {
        let members = d.level_subgroup(l);
        let picked = sampler.indices(level.len(), salt + l as u64);
        vertices += picked.len();
        let witness: Vec<Option<String>> = picked
            .par_iter()
            .map(|&i| vertex_witness(d, l, i, &members))
            .collect::<Result<_>>()?;
        if let Some(w) = witness.into_iter().flatten().next() {
            return Ok((vertices, Some(w)));
        }
    }
    Ok((vertices, None))
}

/// Rule 0 and kernel bookkeeping for vertex `i` of level `l`.
fn vertex_witness(d: &PciDiagram, l: usize, i: usize, level_members: &[usize]) -> Result<Option<String>> {
    let v = &d.levels()[l][i];
    let spec = d.spec();
    let at = || format!("level {l} vertex {i} ({})", v.label(spec));
    if v.trivial != v.form.primed.is_none() {
        return Ok(Some(format!("{}: trivial flag disagrees with the primed factor", at())));
    }
    let tracked = d.group().closure_indices(&v.form.kernel_gens);
    if tracked.len() as u64 != v.kernel_order {
        return Ok(Some(format!("{}: |K| recorded as {} but is {}", at(), v.kernel_order, tracked.len())));
    }
    if v.trivial && tracked != level_members {
        return Ok(Some(format!("{}: trivial vertex with K != G_{l}", at())));
    }
    if tracked.iter().any(|k| level_members.binary_search(k).is_err()) {
        return Ok(Some(format!("{}: K is not inside G_{l}", at())));
    }
    let e = v.expand(d.group())?;
    if e.stabilizer() != tracked {
        return Ok(Some(format!("{}: tracked K differs from the algebraic kernel", at())));
    }
    let quotient = (level_members.len() / tracked.len()) as u64;
    if quotient != d.spec().prime().pow(v.field_index) {
        return Ok(Some(format!("{}: |G_l/K| = {quotient} but field index {}", at(), v.field_index)));
    }
    Ok(None)
}

/// Splitting set of `C_{p^n}`: sound, rank one, reproduced by extension from
/// level `n−1`, and collapsing onto the rational PCIs.
pub fn split_coherence(p: u64, n: u32, cap: u64, sampler: Sampler) -> Result<std::result::Result<(), String>> {
    let set = splitting_field_pcis(p, n, cap)?;
    let m = p.pow(n);
    if set.len() as u64 != m {
        return Ok(Err(format!("{} splitting idempotents, expected {m}", set.len())));
    }
    let group = set[0].group().clone();
    let mut sum = CycloAlgebraElement::zero(&group, m);
    for e in &set {
        sum = sum.add(e)?;
    }
    if sum != CycloAlgebraElement::one(&group, m) {
        return Ok(Err("splitting idempotents do not sum to 1".into()));
    }
    let idx = sampler.indices(set.len(), 5);
    let ok = idx
        .par_iter()
        .map(|&i| Ok(set[i].is_idempotent() && set[i].component_dimension()? == 1))
        .collect::<Result<Vec<bool>>>()?;
    if let Some(pos) = ok.iter().position(|&b| !b) {
        return Ok(Err(format!("splitting idempotent t = {} is not a rank-one idempotent", idx[pos])));
    }
    let pairs = sampler.pairs(set.len(), 5);
    let ok = pairs
        .par_iter()
        .map(|&(i, j)| set[i].are_orthogonal(&set[j]))
        .collect::<Result<Vec<bool>>>()?;
    if let Some(pos) = ok.iter().position(|&b| !b) {
        let (i, j) = pairs[pos];
        return Ok(Err(format!("splitting idempotents t = {i} and t = {j} are not orthogonal")));
    }

    if n >= 1 {
        let parents = splitting_field_pcis(p, n - 1, cap)?;
        let mut children = Vec::with_capacity(set.len());
        for eta in &parents {
            let lifted = lift_to_parent(eta, p, n, cap)?;
            let kids = extension_children(&lifted, p, n)?;
            let mut total = CycloAlgebraElement::zero(&group, m);
            for k in &kids {
                total = total.add(k)?;
            }
            if total != lifted {
                return Ok(Err("extension children do not sum to their parent".into()));
            }
            children.extend(kids);
        }
        let key = |e: &CycloAlgebraElement| e.to_json();
        let mut a: Vec<_> = set.iter().map(key).collect();
        let mut b: Vec<_> = children.iter().map(key).collect();
        a.sort();
        b.sort();
        if a != b {
            return Ok(Err("extension children differ from the splitting set".into()));
        }
    }

    let collapsed = galois_orbit_collapse(&set, m)?;
    if collapsed.len() as u32 != n + 1 {
        return Ok(Err(format!("{} Galois orbits, expected {}", collapsed.len(), n + 1)));
    }
    let rational = cyclic_rational_pcis(p, n, cap)?;
    if collapsed != rational {
        return Ok(Err("orbit sums differ from the rational PCIs".into()));
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_pci_set;
    use crate::pcidiagram::FieldIndex;

    fn verify(text: &str) -> VerificationReport {
        verify_group(&text.parse().unwrap(), &VerifyOptions::default()).unwrap()
    }

    #[test]
    fn small_groups_pass() {
        for text in ["2:[1]", "2:[2,1]", "3:[1,1]", "2:[3]", "2:[1];3:[1]", "2:[2];3:[1]"] {
            let report = verify(text);
            assert!(report.passed(), "{text}: {:?}", report.failures().collect::<Vec<_>>());
            assert!(report.exhaustive);
        }
    }

    #[test]
    fn split_check_only_for_cyclic() {
        let names = |r: &VerificationReport| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
        assert!(names(&verify("3:[2]")).contains(&"split_coherence".to_string()));
        assert!(!names(&verify("3:[1,1]")).contains(&"split_coherence".to_string()));
        let big = verify("2:[7]");
        let split = big.checks.iter().find(|c| c.name == "split_coherence").unwrap();
        assert_eq!(split.status, Status::Skipped);
    }

    #[test]
    fn alternate_order_is_reported() {
        let opts = VerifyOptions {
            alternate_order: true,
            ..VerifyOptions::default()
        };
        let report = verify_group(&"2:[2,1]".parse().unwrap(), &opts).unwrap();
        assert!(report.checks.iter().any(|c| c.name == "alternate_order"));
    }

    #[test]
    fn soundness_catches_defects() {
        let g = Arc::new(AbelianGroup::new("2:[2]".parse().unwrap(), 64).unwrap());
        let set: Vec<AlgebraElement> = oracle_pci_set(&g).unwrap().into_iter().map(|e| e.element).collect();
        assert_eq!(soundness_witness(&g, set.as_slice(), Sampler::exhaustive(), 0).unwrap(), None);
        let w = soundness_witness(&g, &set[1..], Sampler::exhaustive(), 0).unwrap().unwrap();
        assert!(w.starts_with("sum of 2"), "{w}");
        // replace one PCI by a non-idempotent with the same sum
        let mut bad = set.clone();
        let x = AlgebraElement::basis(&g, &g.element_at(1)).unwrap();
        bad[0] = bad[0].add(&x).unwrap();
        bad[1] = bad[1].sub(&x).unwrap();
        let w = soundness_witness(&g, bad.as_slice(), Sampler::exhaustive(), 0).unwrap().unwrap();
        assert!(w.contains("not idempotent"), "{w}");
    }

    #[test]
    fn packed_and_lazy_families_agree_with_dense() {
        let g = Arc::new(AbelianGroup::new("2:[2,1]".parse().unwrap(), 64).unwrap());
        let dense = oracle_pci_set(&g).unwrap();
        let packed = oracle_packed_set(&g).unwrap();
        let family = PackedFamily { group: &g, set: &packed };
        assert_eq!(family_sum(&g, &family).unwrap(), AlgebraElement::one(&g));
        assert_eq!(soundness_witness(&g, &family, Sampler::exhaustive(), 0).unwrap(), None);
        for (i, e) in dense.iter().enumerate() {
            assert_eq!(*family.element(i).unwrap(), e.element);
        }
        let d = crate::pcidiagram::build_pci_diagram(g.spec().as_primary().unwrap(), 64).unwrap();
        for level in 0..d.levels().len() {
            let lazy = LevelFamily { diagram: &d, level };
            let eager = d.expand_level(level).unwrap();
            assert_eq!(family_sum(&g, &lazy).unwrap(), AlgebraElement::sum(&g, &eager).unwrap());
        }
    }

    #[test]
    fn packed_difference_finds_each_kind() {
        let g = Arc::new(AbelianGroup::new("3:[2]".parse().unwrap(), 64).unwrap());
        let set = oracle_packed_set(&g).unwrap();
        let mut shuffled = set.clone();
        shuffled.reverse();
        assert!(packed_difference(&set, &shuffled).is_none());
        assert!(matches!(packed_difference(&set, &set[1..]), Some(Difference::OnlyLeft(_))));
        assert!(matches!(packed_difference(&set[1..], &set), Some(Difference::OnlyRight(_))));
        let mut relabeled = set.clone();
        relabeled[0].field_index = FieldIndex::primary(3, 7);
        let w = packed_difference(&set, &relabeled).unwrap();
        assert!(matches!(w, Difference::FieldIndex(..)));
        assert!(w.describe(&g, "a", "b").contains("field index"));
    }

    #[test]
    fn sampler_is_deterministic() {
        let s = Sampler::new(4096, CheckLevel::Sampled);
        assert!(!s.is_exhaustive());
        assert_eq!(s.indices(1000, 7), s.indices(1000, 7));
        assert_eq!(s.indices(1000, 7).len(), SAMPLED_ELEMENTS);
        let pairs = s.pairs(100, 3);
        assert_eq!(pairs.len(), SAMPLED_PAIRS);
        assert!(pairs.iter().all(|&(i, j)| i < j && j < 100));
        assert_eq!(Sampler::exhaustive().pairs(4, 0), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(Sampler::new(4096, CheckLevel::Full).is_exhaustive());
    }

    #[test]
    fn trace_dimension_matches_rank() {
        let g = Arc::new(AbelianGroup::new("3:[2]".parse().unwrap(), 64).unwrap());
        for e in oracle_pci_set(&g).unwrap() {
            let dim = trace_dimension(&e.element).unwrap();
            assert_eq!(dim, e.element.kernel_and_field().unwrap().dim as u64);
        }
    }
}
