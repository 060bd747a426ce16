use std::io::Write;
use std::process::ExitCode;

use abelian_pci::shell::{run, Command, OutputFormat, RunConfig, DEFAULT_MAX_ORDER};
use abelian_pci::verify::CheckLevel;
use clap::Parser;

/// Primitive central idempotents of rational group algebras of finite abelian groups.
#[derive(Debug, Parser)]
#[command(name = "abelian-pci", version)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,

    /// Group spec, e.g. "2:[2,1]" for C4 x C2 or "2:[1];3:[2]" for C2 x C9.
    #[arg(short, long)]
    group: String,

    #[arg(short, long, value_enum, default_value = "json")]
    format: OutputFormat,

    /// Refuse groups larger than this.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: u64,

    /// Above 512 elements, `sampled` checks a fixed pseudorandom subset of pairs.
    #[arg(long, value_enum, default_value = "sampled")]
    check_level: CheckLevel,

    /// Build diagrams along the alternate generator order (for verify: also compare it).
    #[arg(long)]
    alternate_order: bool,

    /// Explicit long-generator order as (s,j,a) triples, e.g. "1,1,1;2,1,1;2,1,2".
    #[arg(long)]
    order: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let cfg = RunConfig {
        command: cli.command,
        group: cli.group,
        format: cli.format,
        max_order: cli.max_order,
        check_level: cli.check_level,
        alternate_order: cli.alternate_order,
        order: cli.order,
    };
    let out = run(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.status as u8)
}
