//! Command-line front end. [`run`] takes arguments and output streams and
//! returns the exit code, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 resource bound,
//! 3 `verify` found a disagreement.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chains::{self, Chain};
use crate::error::{Error, Result};
use crate::export;
use crate::hyperlattice::{self, Hyperlattice, Hypertuple};
use crate::isomorphism::{self, DEFAULT_ORACLE_BOUND};
use crate::quotient::{self, Congruence, CongruenceKind, FactorLatticeJson};
use crate::segre::{self, RawSegre, SegreChar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "hinv",
    version,
    about = "Hyperlattices V(α) of nilpotent Segre characteristics"
)]
pub struct Cli {
    /// Segre characteristic, e.g. 5,3,1. Repeated parts are reduced.
    #[arg(long, global = true)]
    alpha: Option<String>,

    /// Second characteristic for iso and witness.
    #[arg(long, global = true)]
    beta: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Node bound for enumeration and for the isomorphism search.
    #[arg(long, global = true)]
    max_nodes: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the elements of V(α).
    Enumerate,
    /// Sons of one tuple, or of every element.
    Sons {
        #[arg(long)]
        tuple: Option<String>,
    },
    /// Special chains ending at zero.
    SpecialChains,
    /// Riding chains on the special chains.
    RidingChains,
    /// Factor lattice by SIM2 or SIM3 and its map onto the truncated lattice.
    Quotient {
        /// sim2 or sim3; chosen from α when omitted.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Classify V(α) against V(β).
    Iso,
    /// An explicit isomorphism V(α) → V(β).
    Witness,
    /// Compare classification and search on all pairs up to a dimension.
    Verify {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
    },
    /// Hasse diagram.
    Hasse,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };

    match execute(&cli, stderr) {
        Ok((body, code)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &body),
                None => stdout.write_all(body.as_bytes()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    EXIT_INVALID
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Resource { .. } => EXIT_RESOURCE,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn parse_alpha(text: Option<&str>, flag: &str, stderr: &mut dyn Write) -> Result<SegreChar> {
    let text = text.ok_or_else(|| Error::validation(None, format!("--{flag} is required")))?;
    let raw: RawSegre = text.parse()?;
    let r = segre::reduce(&raw);
    if r.changed {
        let _ = writeln!(stderr, "warning: --{flag} ({raw}) reduced to ({})", r.segre);
    }
    Ok(r.segre)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn unsupported(cmd: &str, format: Format) -> Error {
    Error::validation(
        None,
        format!("{cmd} does not support --format {format:?}").to_lowercase(),
    )
}

#[derive(Serialize)]
struct SonsJson<'a> {
    tuple: &'a Hypertuple,
    sons: Vec<Hypertuple>,
    fathers: Vec<Hypertuple>,
    unique_son: Option<Hypertuple>,
}

#[derive(Serialize)]
struct QuotientJson {
    #[serde(flatten)]
    factor: FactorLatticeJson,
    target_alpha: SegreChar,
    images: Vec<Hypertuple>,
}

#[derive(Serialize)]
struct IsoJson {
    alpha: SegreChar,
    beta: SegreChar,
    isomorphic: bool,
    rule: isomorphism::IsoRule,
    dim_ok: bool,
    card_ok: bool,
}

const CHAIN_COLOURS: [&str; 4] = ["red", "blue", "darkgreen", "orange"];

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<(String, i32)> {
    let node_bound = cli.max_nodes.unwrap_or(hyperlattice::DEFAULT_NODE_BOUND);
    let oracle_bound = cli.max_nodes.map_or(DEFAULT_ORACLE_BOUND, |n| {
        usize::try_from(n).unwrap_or(usize::MAX)
    });
    let format = cli.format;

    if let Command::Verify { n_max } = cli.command {
        let report = isomorphism::verify_range(n_max)?;
        let code = if report.disagreements().is_empty() {
            EXIT_OK
        } else {
            EXIT_DISAGREEMENT
        };
        let body = match format {
            Format::Text => report.summary_table(),
            Format::Json => json(&report),
            Format::Dot => return Err(unsupported("verify", format)),
        };
        return Ok((body, code));
    }

    let alpha = parse_alpha(cli.alpha.as_deref(), "alpha", stderr)?;
    let lattice = || hyperlattice::enumerate_with_bound(&alpha, node_bound);

    let body = match &cli.command {
        Command::Enumerate => {
            let l = lattice()?;
            match format {
                Format::Text => l.nodes().iter().map(|u| format!("{u}\n")).collect(),
                Format::Json => {
                    let mut s = l.to_json();
                    s.push('\n');
                    s
                }
                Format::Dot => export::to_dot(&l),
            }
        }
        Command::Sons { tuple } => sons_output(&alpha, &lattice, tuple.as_deref(), format)?,
        Command::SpecialChains => {
            let l = lattice()?;
            let found = chains::special_chains(&l)?;
            match format {
                Format::Text => found
                    .iter()
                    .map(|c| format!("{}: {}\n", c.kind, c.chain))
                    .collect(),
                Format::Json => json(&found),
                Format::Dot => {
                    let marked: Vec<(&Chain, &str)> = found
                        .iter()
                        .zip(CHAIN_COLOURS)
                        .map(|(c, col)| (&c.chain, col))
                        .collect();
                    export::to_dot_highlighted(&l, &marked)
                }
            }
        }
        Command::RidingChains => {
            let l = lattice()?;
            let found = chains::riding_chains(&l)?;
            match format {
                Format::Text => found
                    .iter()
                    .map(|c| format!("{} on {}: {}\n", c.kind, c.attached_to, c.chain))
                    .collect(),
                Format::Json => json(&found),
                Format::Dot => {
                    let marked: Vec<(&Chain, &str)> = found
                        .iter()
                        .zip(CHAIN_COLOURS.iter().cycle())
                        .map(|(c, col)| (&c.chain, *col))
                        .collect();
                    export::to_dot_highlighted(&l, &marked)
                }
            }
        }
        Command::Quotient { kind } => {
            let kind = match kind {
                Some(k) => k.parse()?,
                None => CongruenceKind::for_alpha(&alpha).ok_or_else(|| {
                    Error::Precondition(format!("neither SIM2 nor SIM3 applies to ({alpha})"))
                })?,
            };
            let c = Congruence::new(kind, alpha.clone())?;
            let l = lattice()?;
            let iso = quotient::quotient_iso(&l, &c)?;
            match format {
                Format::Text => {
                    let mut s = format!("V({alpha})/{kind} -> V({})\n", iso.target.alpha());
                    for (k, class) in iso.factor.classes().iter().enumerate() {
                        let members: Vec<String> =
                            class.iter().map(|&i| l.node(i).to_string()).collect();
                        s.push_str(&format!(
                            "[{}] -> {}: {}\n",
                            l.node(iso.factor.representative(k)),
                            iso.target.node(iso.map[k]),
                            members.join(" ")
                        ));
                    }
                    s
                }
                Format::Json => json(&QuotientJson {
                    factor: iso.factor.to_json_value(),
                    target_alpha: iso.target.alpha().clone(),
                    images: iso
                        .map
                        .iter()
                        .map(|&t| iso.target.node(t).clone())
                        .collect(),
                }),
                Format::Dot => export::factor_to_dot(&l, &iso.factor),
            }
        }
        Command::Iso => {
            let beta = parse_alpha(cli.beta.as_deref(), "beta", stderr)?;
            let v = isomorphism::decide_iso(&alpha, &beta);
            match format {
                Format::Text => {
                    let word = if v.isomorphic {
                        "isomorphic"
                    } else {
                        "not isomorphic"
                    };
                    format!("{word} (rule: {})\n", v.rule)
                }
                Format::Json => {
                    let nc = isomorphism::necessary_conditions(&alpha, &beta);
                    json(&IsoJson {
                        alpha: alpha.clone(),
                        beta,
                        isomorphic: v.isomorphic,
                        rule: v.rule,
                        dim_ok: nc.dim_ok,
                        card_ok: nc.card_ok,
                    })
                }
                Format::Dot => return Err(unsupported("iso", format)),
            }
        }
        Command::Witness => {
            let beta = parse_alpha(cli.beta.as_deref(), "beta", stderr)?;
            let w = isomorphism::build_witness_with_bound(&alpha, &beta, oracle_bound)?;
            match (format, w) {
                (Format::Text, Some(w)) => w.to_string(),
                (Format::Text, None) => "not isomorphic\n".to_string(),
                (Format::Json, w) => json(&w),
                (Format::Dot, _) => return Err(unsupported("witness", format)),
            }
        }
        Command::Hasse => {
            let l = lattice()?;
            match format {
                Format::Text => export::to_text(&l),
                Format::Dot => export::to_dot(&l),
                Format::Json => {
                    let mut s = l.to_json();
                    s.push('\n');
                    s
                }
            }
        }
        Command::Verify { .. } => unreachable!("handled above"),
    };
    Ok((body, EXIT_OK))
}

fn sons_output(
    alpha: &SegreChar,
    lattice: &dyn Fn() -> Result<Hyperlattice>,
    tuple: Option<&str>,
    format: Format,
) -> Result<String> {
    match tuple {
        Some(text) => {
            let u: Hypertuple = text.parse()?;
            let sons = hyperlattice::sons(alpha, &u)?;
            match format {
                Format::Text => Ok(sons.iter().map(|s| format!("{s}\n")).collect()),
                Format::Json => Ok(json(&SonsJson {
                    tuple: &u,
                    fathers: hyperlattice::fathers(alpha, &u)?,
                    unique_son: if u.is_zero() {
                        None
                    } else {
                        hyperlattice::unique_son(alpha, &u)?
                    },
                    sons,
                })),
                Format::Dot => Err(unsupported("sons", format)),
            }
        }
        None => {
            let l = lattice()?;
            match format {
                Format::Text => Ok((0..l.len())
                    .map(|i| {
                        let s: String = l
                            .sons_of(i)
                            .iter()
                            .map(|&j| format!(" {}", l.node(j)))
                            .collect();
                        format!("{}:{s}\n", l.node(i))
                    })
                    .collect()),
                Format::Json => {
                    let all: Vec<SonsJson> = (0..l.len())
                        .map(|i| SonsJson {
                            tuple: l.node(i),
                            sons: l.sons_of(i).iter().map(|&j| l.node(j).clone()).collect(),
                            fathers: l.fathers_of(i).iter().map(|&j| l.node(j).clone()).collect(),
                            unique_son: l.only_son(i).map(|j| l.node(j).clone()),
                        })
                        .collect();
                    Ok(json(&all))
                }
                Format::Dot => Ok(export::to_dot(&l)),
            }
        }
    }
}
