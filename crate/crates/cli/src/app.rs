use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cosets_core::Caps;
use serde::Serialize;

use crate::analyze::{cmd_analyze, AnalyzeOptions, ComplexChoice, FamilyChoice};
use crate::error::{CliError, CliResult};
use crate::fpcmd::{
    cmd_complements, cmd_enumerate, cmd_low_index, cmd_maximal_counts, cmd_simple_quotients,
    counts_tsv, low_index_rows, resolve_presentation,
};
use crate::verify::cmd_verify_suite;

#[derive(Debug, Parser)]
#[command(
    name = "cosets",
    version,
    about = "Coset complexes of finite and finitely presented groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct CapArgs {
    /// Largest number of simplices built for one complex.
    #[arg(long)]
    pub cap_simplices: Option<usize>,
    /// Largest number of live cosets during enumeration.
    #[arg(long)]
    pub max_cosets: Option<usize>,
}

impl CapArgs {
    /// Defaults, then `COSET_CAPS`, then flags.
    fn resolve(&self) -> CliResult<Caps> {
        let mut caps = Caps::from_env()?;
        if let Some(s) = self.cap_simplices {
            caps.simplices = s;
        }
        if let Some(c) = self.max_cosets {
            caps.max_cosets = c;
        }
        Ok(caps)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Families, complexes, homology, zeta function and wedge decomposition of a finite group.
    Analyze {
        /// Group spec such as `cyclic:6`, `product:cyclic:2,cyclic:2` or `perm:3:(0 1),(0 1 2)`.
        spec: String,
        /// Comma separated families: all, normal, maximal.
        #[arg(long, value_delimiter = ',', default_value = "all,normal,maximal")]
        family: Vec<FamilyChoice>,
        /// Comma separated complexes: order, nerve, delta.
        #[arg(long, value_delimiter = ',', default_value = "order")]
        complex: Vec<ComplexChoice>,
        /// Write the JSON report to this path (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write every computed complex as a text file into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Include stage timings in the report.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Finitely presented groups.
    Fp {
        #[command(subcommand)]
        command: FpCommand,
    },
    /// Run the invariant suite over a corpus file.
    Verify {
        corpus: PathBuf,
        /// Write the check results as JSON to this path (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Debug, Args)]
pub struct FpInput {
    /// Presentation text (`gens: a, b ; rels: a^2, (a*b)^3`), a file path, or a catalogue name.
    pub presentation: String,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Debug, Subcommand)]
pub enum FpCommand {
    /// Todd–Coxeter enumeration of the cosets of a subgroup.
    Enumerate {
        #[command(flatten)]
        input: FpInput,
        /// Comma separated subgroup generator words; empty for the trivial subgroup.
        #[arg(long, default_value = "")]
        subgroup: String,
        /// Print the coset table as TSV.
        #[arg(long)]
        tsv: bool,
    },
    /// Subgroups of bounded index, one conjugacy class per row unless `--all-conjugates`.
    LowIndex {
        #[command(flatten)]
        input: FpInput,
        #[arg(long)]
        max_index: usize,
        #[arg(long)]
        all_conjugates: bool,
        /// Accepted for symmetry; the listing is always TSV.
        #[arg(long)]
        tsv: bool,
    },
    /// Number of maximal subgroups per index within the bound.
    MaximalCounts {
        #[command(flatten)]
        input: FpInput,
        #[arg(long)]
        max_index: usize,
        #[arg(long)]
        tsv: bool,
    },
    /// Finite-index complements for every proper subgroup of bounded index.
    Complements {
        #[command(flatten)]
        input: FpInput,
        #[arg(long)]
        max_index: usize,
        /// Largest index of candidate complements.
        #[arg(long, default_value_t = 24)]
        candidate_index: usize,
        #[arg(long)]
        tsv: bool,
    },
    /// Kernels onto finite simple groups of bounded order, by isomorphism type.
    SimpleQuotients {
        #[command(flatten)]
        input: FpInput,
        #[arg(long)]
        max_index: usize,
        #[arg(long)]
        tsv: bool,
    },
}

fn index_caps(input: &FpInput, max_index: usize) -> CliResult<Caps> {
    let caps = input.caps.resolve()?;
    if max_index > caps.max_index {
        return Err(cosets_core::Error::OverCap {
            what: "index bound",
            limit: caps.max_index,
        }
        .into());
    }
    Ok(caps)
}

/// Writes JSON to the path, or returns it for standard output when the
/// path is `-`.
fn emit_json<T: Serialize>(value: &T, path: &PathBuf) -> CliResult<Option<String>> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    if path.as_os_str() == "-" {
        return Ok(Some(text));
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    Ok(None)
}

fn execute(cli: Cli, err: &mut dyn Write) -> CliResult<String> {
    match cli.command {
        Command::Analyze {
            spec,
            family,
            complex,
            json,
            export,
            timings,
            caps,
        } => {
            let opts = AnalyzeOptions {
                families: family,
                complexes: complex,
                caps: caps.resolve()?,
                timings,
                export_dir: export,
            };
            let report = cmd_analyze(&spec, &opts)?;
            if let Some(path) = json {
                if let Some(text) = emit_json(&report, &path)? {
                    return Ok(text);
                }
            }
            Ok(report.to_text())
        }
        Command::Fp { command } => execute_fp(command),
        Command::Verify { corpus, json, caps } => {
            let summary = cmd_verify_suite(&corpus, &caps.resolve()?)?;
            for w in &summary.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let mut out = summary.table();
            if let Some(path) = json {
                if let Some(text) = emit_json(&summary, &path)? {
                    out = text;
                }
            }
            if summary.passed() {
                Ok(out)
            } else {
                let _ = write!(err, "{out}");
                Err(CliError::Verification(summary.failures()))
            }
        }
    }
}

fn execute_fp(command: FpCommand) -> CliResult<String> {
    match command {
        FpCommand::Enumerate {
            input,
            subgroup,
            tsv,
        } => {
            let p = resolve_presentation(&input.presentation)?;
            let report = cmd_enumerate(&p, &subgroup, &input.caps.resolve()?)?;
            if let Some(path) = &input.json {
                if let Some(text) = emit_json(&report, path)? {
                    return Ok(text);
                }
            }
            Ok(if tsv {
                report.to_tsv(&p)
            } else {
                report.to_text()
            })
        }
        FpCommand::LowIndex {
            input,
            max_index,
            all_conjugates,
            tsv: _,
        } => {
            let caps = index_caps(&input, max_index)?;
            let p = resolve_presentation(&input.presentation)?;
            let result = cmd_low_index(&p, max_index, !all_conjugates, &caps)?;
            if let Some(path) = &input.json {
                if let Some(text) = emit_json(&low_index_rows(&p, &result), path)? {
                    return Ok(text);
                }
            }
            Ok(result.to_tsv(&p))
        }
        FpCommand::MaximalCounts {
            input,
            max_index,
            tsv,
        } => {
            let caps = index_caps(&input, max_index)?;
            let p = resolve_presentation(&input.presentation)?;
            let counts = cmd_maximal_counts(&p, max_index, &caps)?;
            if let Some(path) = &input.json {
                if let Some(text) = emit_json(&counts, path)? {
                    return Ok(text);
                }
            }
            Ok(if tsv {
                counts_tsv("index", &counts)
            } else {
                let mut out =
                    format!("maximal subgroups of index <= {max_index} (lower bound beyond it)\n");
                out.push_str(&counts_tsv("index", &counts));
                out
            })
        }
        FpCommand::Complements {
            input,
            max_index,
            candidate_index,
            tsv,
        } => {
            let caps = index_caps(&input, max_index.max(candidate_index))?;
            let p = resolve_presentation(&input.presentation)?;
            let report = cmd_complements(&p, max_index, candidate_index, &caps)?;
            if let Some(path) = &input.json {
                if let Some(text) = emit_json(&report, path)? {
                    return Ok(text);
                }
            }
            Ok(if tsv {
                report.to_tsv()
            } else {
                format!(
                    "complement coverage: {}/{} ({:.1}%) for index <= {}, candidates of index <= {}\n",
                    report.covered,
                    report.total,
                    report.coverage_percent(),
                    max_index,
                    candidate_index
                )
            })
        }
        FpCommand::SimpleQuotients {
            input,
            max_index,
            tsv: _,
        } => {
            let caps = index_caps(&input, max_index)?;
            let p = resolve_presentation(&input.presentation)?;
            let counts = cmd_simple_quotients(&p, max_index, &caps)?;
            if let Some(path) = &input.json {
                if let Some(text) = emit_json(&counts, path)? {
                    return Ok(text);
                }
            }
            Ok(counts_tsv("quotient", &counts))
        }
    }
}

/// Runs a parsed command, printing to the given streams; returns the exit
/// code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, err) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
