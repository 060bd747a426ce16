//! Command dispatch shared by the binary and the tests: a [`RunConfig`] in,
//! an exit status and the rendered output back.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclotome::CycloJson;
use crate::error::{Error, Result};
use crate::exactalg::CoeffVec;
use crate::groupcore::{AbelianGroup, AbelianGroupSpec, GroupElement, LongGenerator, PrimaryGroupSpec};
use crate::oracle::{compute_wedderburn_profile, WedderburnProfile};
use crate::pcidiagram::{
    build_pci_diagram_with_order, engine_pci_set_from, galois_orbit_collapse, splitting_field_pcis, FieldIndex,
    PciDiagram, Rule,
};
use crate::verify::{verify_group, CheckLevel, Status, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_MAX_ORDER: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Primitive central idempotents with exact coefficients.
    Pci,
    /// The full PCI diagram.
    Diagram,
    /// Wedderburn coefficients by census and by closed form.
    Wedderburn,
    /// Splitting-field idempotents of a cyclic p-group and their Galois orbits.
    Split,
    /// Engine against oracle against formulas.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub group: String,
    pub format: OutputFormat,
    pub max_order: u64,
    pub check_level: CheckLevel,
    pub alternate_order: bool,
    /// Explicit long-generator order, as `(s,j,a)` triples.
    pub order: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command, group: impl Into<String>) -> Self {
        Self {
            command,
            group: group.into(),
            format: OutputFormat::Json,
            max_order: DEFAULT_MAX_ORDER,
            check_level: CheckLevel::Sampled,
            alternate_order: false,
            order: None,
        }
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::SpecMismatch(_) | Error::ModulusMismatch(..) | Error::CapExceeded { .. } => {
            EXIT_INPUT
        }
        Error::InvariantViolation(_) | Error::Inconsistency(_) | Error::VerificationFailure(_) => EXIT_VERIFICATION,
    }
}

/// Runs one command. Never panics on bad input; the status carries the outcome.
pub fn run(cfg: &RunConfig) -> RunOutput {
    match dispatch(cfg) {
        Ok((status, stdout)) => RunOutput {
            status,
            stdout,
            stderr: String::new(),
        },
        Err(e) => RunOutput {
            status: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cfg: &RunConfig) -> Result<(i32, String)> {
    if cfg.max_order == 0 {
        return Err(Error::input("--max-order must be at least 1"));
    }
    if cfg.format == OutputFormat::Dot && cfg.command != Command::Diagram {
        return Err(Error::input("dot output is only available for the diagram command"));
    }
    let spec: AbelianGroupSpec = cfg.group.parse()?;
    if let Some(order) = spec.order() {
        if order > cfg.max_order {
            return Err(Error::CapExceeded {
                order,
                cap: cfg.max_order,
            });
        }
    }
    match cfg.command {
        Command::Pci => pci(cfg, &spec).map(|s| (EXIT_OK, s)),
        Command::Diagram => diagram(cfg, &spec).map(|s| (EXIT_OK, s)),
        Command::Wedderburn => wedderburn(cfg, &spec),
        Command::Split => split(cfg, &spec).map(|s| (EXIT_OK, s)),
        Command::Verify => verify(cfg, &spec),
    }
}

/// Reads an explicit generator order: every run of digits is a number and
/// consecutive triples are `(s, j, a)`, so `x{(2,1),1} x{(2,1),2}` and
/// `2,1,1;2,1,2` both work.
pub fn parse_generator_order(spec: &PrimaryGroupSpec, text: &str) -> Result<Vec<LongGenerator>> {
    let nums = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| Error::input(format!("bad number {s:?} in order"))))
        .collect::<Result<Vec<u32>>>()?;
    if nums.len() % 3 != 0 {
        return Err(Error::input("generator order must be a list of (s,j,a) triples"));
    }
    let order: Vec<LongGenerator> = nums
        .chunks(3)
        .map(|t| LongGenerator {
            exponent: t[0],
            copy: t[1],
            power: t[2],
        })
        .collect();
    spec.validate_generator_order(&order)?;
    Ok(order)
}

fn explicit_order(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<Option<Vec<LongGenerator>>> {
    match &cfg.order {
        None => Ok(None),
        Some(text) => {
            if cfg.alternate_order {
                return Err(Error::input("--order and --alternate-order are mutually exclusive"));
            }
            let primary = spec
                .as_primary()
                .ok_or_else(|| Error::input("--order needs a group of prime-power order"))?;
            parse_generator_order(primary, text).map(Some)
        }
    }
}

fn diagrams(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<Vec<PciDiagram>> {
    let order = explicit_order(cfg, spec)?;
    spec.parts()
        .iter()
        .map(|part| {
            let seq = match &order {
                Some(o) => o.clone(),
                None if cfg.alternate_order => part.alternate_generator_sequence(),
                None => part.long_generator_sequence(),
            };
            build_pci_diagram_with_order(part, &seq, cfg.max_order)
        })
        .collect()
}

fn field_label(fi: &FieldIndex) -> String {
    if fi.0.is_empty() {
        return "Q".to_string();
    }
    let parts: Vec<String> = fi.0.iter().map(|(p, r)| format!("{p}^{r}")).collect();
    format!("Q(zeta_{{{}}})", parts.join("*"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data always serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PrimeIndex {
    p: u64,
    r: u32,
}

#[derive(Serialize)]
struct PciEntry {
    field_index: Vec<PrimeIndex>,
    field: String,
    dimension: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    form: Option<String>,
    coeffs: CoeffVec,
}

#[derive(Serialize)]
struct PciListing {
    group: String,
    order: u64,
    /// Exponent vectors in coefficient order.
    elements: Vec<String>,
    pcis: Vec<PciEntry>,
}

fn pci(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<String> {
    let group = Arc::new(AbelianGroup::new(spec.clone(), cfg.max_order)?);
    let diagrams = diagrams(cfg, spec)?;
    let set = engine_pci_set_from(&group, &diagrams)?;
    let forms: Option<Vec<String>> = match diagrams.as_slice() {
        [d] => Some(d.leaves().iter().map(|v| v.product_form(d.spec())).collect()),
        _ => None,
    };
    let listing = PciListing {
        group: spec.to_string(),
        order: group.order() as u64,
        elements: group.elements().map(|g| g.to_string()).collect(),
        pcis: set
            .iter()
            .enumerate()
            .map(|(i, e)| PciEntry {
                field_index: e.field_index.0.iter().map(|&(p, r)| PrimeIndex { p, r }).collect(),
                field: field_label(&e.field_index),
                dimension: e.field_index.dimension(),
                form: forms.as_ref().map(|f| f[i].clone()),
                coeffs: CoeffVec::from(&e.element),
            })
            .collect(),
    };
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&listing),
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "group {}  order {}  {} PCIs", listing.group, listing.order, listing.pcis.len());
            let _ = writeln!(out, "elements {}", listing.elements.join(" "));
            for (i, e) in listing.pcis.iter().enumerate() {
                let form = e.form.as_deref().map(|f| format!("  {f}")).unwrap_or_default();
                let _ = writeln!(out, "#{i} {} dim {}{form}", e.field, e.dimension);
                let _ = writeln!(out, "   [{}]", e.coeffs.0.join(", "));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct VertexJson {
    id: String,
    label: String,
    form: String,
    trivial: bool,
    field_index: u32,
    kernel_order: u64,
    kernel_gens: Vec<String>,
    primed: Option<String>,
}

#[derive(Serialize)]
struct EdgeJson {
    from: String,
    to: String,
    rule: Rule,
}

#[derive(Serialize)]
struct DiagramJson {
    spec: String,
    prime: u64,
    generator_order: Vec<String>,
    chain: Vec<String>,
    level_sizes: Vec<usize>,
    levels: Vec<Vec<VertexJson>>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize)]
struct DiagramListing {
    group: String,
    parts: Vec<DiagramJson>,
}

fn node_id(prime: u64, level: usize, i: usize) -> String {
    format!("p{prime}_l{level}_v{i}")
}

fn diagram_json(d: &PciDiagram) -> DiagramJson {
    let spec = d.spec();
    let p = spec.prime();
    let fmt = |g: &GroupElement| spec.format_element(g);
    DiagramJson {
        spec: spec.to_string(),
        prime: p,
        generator_order: d.generator_order().iter().map(|g| g.to_string()).collect(),
        chain: d.chain().iter().map(fmt).collect(),
        level_sizes: d.level_sizes(),
        levels: d
            .levels()
            .iter()
            .enumerate()
            .map(|(l, level)| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, v)| VertexJson {
                        id: node_id(p, l, i),
                        label: v.label(spec),
                        form: v.product_form(spec),
                        trivial: v.trivial,
                        field_index: v.field_index,
                        kernel_order: v.kernel_order,
                        kernel_gens: v.form.kernel_gens.iter().map(fmt).collect(),
                        primed: v.form.primed.as_ref().map(fmt),
                    })
                    .collect()
            })
            .collect(),
        edges: d
            .edges()
            .iter()
            .map(|e| EdgeJson {
                from: node_id(p, e.level, e.parent),
                to: node_id(p, e.level + 1, e.child),
                rule: e.rule,
            })
            .collect(),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn rule_name(r: Rule) -> &'static str {
    match r {
        Rule::Split => "split",
        Rule::Persist => "persist",
        Rule::Branch => "branch",
    }
}

fn diagram_dot(spec: &AbelianGroupSpec, diagrams: &[PciDiagram]) -> String {
    let clustered = diagrams.len() > 1;
    let mut out = String::new();
    let _ = writeln!(out, "digraph pci {{");
    let _ = writeln!(out, "  label=\"{}\";", dot_escape(&spec.to_string()));
    let _ = writeln!(out, "  rankdir=TB;");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    for d in diagrams {
        let part = d.spec();
        let p = part.prime();
        let indent = if clustered { "    " } else { "  " };
        if clustered {
            let _ = writeln!(out, "  subgraph cluster_p{p} {{");
            let _ = writeln!(out, "    label=\"{}\";", dot_escape(&part.to_string()));
        }
        let last = d.levels().len() - 1;
        for (l, level) in d.levels().iter().enumerate() {
            let _ = write!(out, "{indent}{{ rank=same;");
            for (i, v) in level.iter().enumerate() {
                let mut label = dot_escape(&v.label(part));
                if l == last {
                    let field = field_label(&FieldIndex::primary(p, v.field_index));
                    label.push_str(&format!("\\n{}", dot_escape(&field)));
                }
                let _ = write!(out, " {} [label=\"{label}\"];", node_id(p, l, i));
            }
            let _ = writeln!(out, " }}");
        }
        for e in d.edges() {
            let _ = writeln!(
                out,
                "{indent}{} -> {} [label=\"{}\"];",
                node_id(p, e.level, e.parent),
                node_id(p, e.level + 1, e.child),
                rule_name(e.rule)
            );
        }
        if clustered {
            let _ = writeln!(out, "  }}");
        }
    }
    let _ = writeln!(out, "}}");
    out
}

fn diagram(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<String> {
    let diagrams = diagrams(cfg, spec)?;
    Ok(match cfg.format {
        OutputFormat::Dot => diagram_dot(spec, &diagrams),
        OutputFormat::Json => to_json(&DiagramListing {
            group: spec.to_string(),
            parts: diagrams.iter().map(diagram_json).collect(),
        }),
        OutputFormat::Text => {
            let mut out = String::new();
            for d in &diagrams {
                let part = d.spec();
                let order: Vec<String> = d.generator_order().iter().map(|g| g.to_string()).collect();
                let _ = writeln!(out, "{part}  chain {}", order.join(" "));
                for (l, level) in d.levels().iter().enumerate() {
                    let _ = writeln!(out, "level {l} ({} vertices)", level.len());
                    for (i, v) in level.iter().enumerate() {
                        let _ = writeln!(out, "  v{i} r={}  {}  [{}]", v.field_index, v.product_form(part), v.label(part));
                    }
                }
            }
            out
        }
    })
}

#[derive(Serialize)]
struct WedderburnListing {
    group: String,
    parts: Vec<WedderburnProfile>,
    agree: bool,
}

fn wedderburn(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<(i32, String)> {
    let parts = spec
        .parts()
        .iter()
        .map(|p| compute_wedderburn_profile(p, cfg.max_order))
        .collect::<Result<Vec<_>>>()?;
    let agree = parts.iter().all(WedderburnProfile::all_agree);
    let status = if agree { EXIT_OK } else { EXIT_VERIFICATION };
    let listing = WedderburnListing {
        group: spec.to_string(),
        parts,
        agree,
    };
    let text = match cfg.format {
        OutputFormat::Json => to_json(&listing),
        _ => {
            let mut out = String::new();
            for (part, prof) in spec.parts().iter().zip(&listing.parts) {
                let _ = writeln!(out, "{part}  order {}  exponent {}^{}", prof.order, prof.prime, prof.exponent);
                let _ = writeln!(
                    out,
                    "{:>3} {:>4} {:>4} {:>4} {:>8} {:>8} {:>8} {:>8}  agree",
                    "r", "a_r", "b_r", "c_r", "|E_r|", "census", "formula", "variant"
                );
                for row in &prof.rows {
                    let _ = writeln!(
                        out,
                        "{:>3} {:>4} {:>4} {:>4} {:>8} {:>8} {:>8} {:>8}  {}",
                        row.r,
                        row.a_r,
                        row.b_r,
                        row.c_r,
                        row.elements_of_order,
                        row.census_coefficient,
                        row.formula_coefficient,
                        row.statement_variant,
                        if row.agree { "yes" } else { "NO" }
                    );
                }
            }
            out
        }
    };
    Ok((status, text))
}

#[derive(Serialize)]
struct SplitEntry {
    t: u64,
    coeffs: Vec<CycloJson>,
}

#[derive(Serialize)]
struct OrbitEntry {
    members: Vec<u64>,
    field_index: u32,
    coeffs: CoeffVec,
}

#[derive(Serialize)]
struct SplitListing {
    group: String,
    modulus: u64,
    splitting: Vec<SplitEntry>,
    orbits: Vec<OrbitEntry>,
}

fn split(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<String> {
    let cyclic = spec
        .as_primary()
        .filter(|s| s.is_cyclic())
        .ok_or_else(|| Error::input("split needs a cyclic group of prime-power order, e.g. 2:[3]"))?;
    let (p, n) = (cyclic.prime(), cyclic.exponent());
    let m = p.pow(n);
    let set = splitting_field_pcis(p, n, cfg.max_order)?;
    let collapsed = galois_orbit_collapse(&set, m)?;
    // same orbit enumeration as the collapse: by smallest member
    let mut seen = vec![false; m as usize];
    let mut members = Vec::new();
    for t in 0..m {
        if !seen[t as usize] {
            let mut orbit: Vec<u64> = crate::arith::units_mod(m).into_iter().map(|k| k * t % m).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &s in &orbit {
                seen[s as usize] = true;
            }
            members.push(orbit);
        }
    }
    let listing = SplitListing {
        group: spec.to_string(),
        modulus: m,
        splitting: set
            .iter()
            .enumerate()
            .map(|(t, e)| SplitEntry {
                t: t as u64,
                coeffs: e.to_json(),
            })
            .collect(),
        orbits: collapsed
            .iter()
            .zip(members)
            .map(|(e, members)| OrbitEntry {
                members,
                field_index: e.field_index.0.first().map_or(0, |&(_, r)| r),
                coeffs: CoeffVec::from(&e.element),
            })
            .collect(),
    };
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&listing),
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "{}  over Q(zeta_{m})  {} splitting idempotents", listing.group, set.len());
            for (t, e) in set.iter().enumerate() {
                let coeffs: Vec<String> = e.coeffs().iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "t={t}  [{}]", coeffs.join(", "));
            }
            for o in &listing.orbits {
                let ms: Vec<String> = o.members.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "orbit {{{}}} r={}  [{}]", ms.join(","), o.field_index, o.coeffs.0.join(", "));
            }
            out
        }
    })
}

fn verify(cfg: &RunConfig, spec: &AbelianGroupSpec) -> Result<(i32, String)> {
    let opts = VerifyOptions {
        cap: cfg.max_order,
        check_level: cfg.check_level,
        order: explicit_order(cfg, spec)?,
        alternate_order: cfg.alternate_order,
    };
    let report = verify_group(spec, &opts)?;
    let status = if report.passed() { EXIT_OK } else { EXIT_VERIFICATION };
    let text = match cfg.format {
        OutputFormat::Json => to_json(&report),
        _ => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{}  order {}  {}",
                report.group,
                report.order,
                if report.exhaustive { "exhaustive" } else { "sampled" }
            );
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                let note = c.witness.as_deref().unwrap_or(&c.detail);
                let _ = writeln!(out, "{tag} {}: {note}", c.name);
            }
            out
        }
    };
    Ok((status, text))
}
