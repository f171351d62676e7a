//! Command-line front end.
//!
//! Machines are given as file paths, or as `zoo:<name>` for corpus entries.
//! Exit codes: 0 success, 1 negative answer, 2 input error, 3 cap exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use pcfgroups::contraction::NucleusCaps;
use pcfgroups::limitspace::{emit_graph, schreier_graph, tile_graph, Emit, GraphFormat};
use pcfgroups::structure::{finitary_depths, is_bounded, is_pcf, nucleus_partition};
use pcfgroups::zoo::{self, compute_expected, generators_of, render_expected};
use pcfgroups::{
    boundary_certificates, compute_nucleus, is_identity, open_set_condition, Error, GroupWord,
    MealyMachine, Nucleus, StateWord,
};

#[derive(Parser)]
#[command(name = "pcfg", version, about = "Analyse invertible Mealy automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// States, alphabet and minimality.
    Info { machine: String },
    /// Finitary depths, bounded verdict and cycle report.
    Classify { machine: String },
    /// Nucleus of the group generated by the non-trivial states.
    Nucleus {
        machine: String,
        #[arg(long = "max-iter", default_value_t = NucleusCaps::default().max_iterations)]
        max_iter: usize,
        #[arg(long = "max-states", default_value_t = NucleusCaps::default().max_states)]
        max_states: usize,
    },
    /// Post-critical finiteness, paths and post-critical set.
    Pcf { machine: String },
    /// Word problem, e.g. `a*b^-1*a`.
    Wp { machine: String, word: String },
    /// Tile adjacency graph of one level.
    Tiles {
        machine: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Boundary certificates of the tile of a word.
    Boundary { machine: String, word: String },
    /// Schreier graph of one level.
    Schreier {
        machine: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        dot: bool,
        /// Comma-separated generators; defaults to the non-trivial states.
        #[arg(long, value_delimiter = ',')]
        gens: Option<Vec<String>>,
    },
    /// Built-in corpus.
    Zoo {
        #[command(subcommand)]
        command: ZooCommand,
    },
}

#[derive(Subcommand)]
enum ZooCommand {
    /// Entry names.
    List,
    /// Machine text of an entry.
    Cat { name: String },
    /// Recompute the expectations files into a directory.
    Regen { dir: PathBuf },
}

enum Failure {
    Input(String),
    Cap(String),
    Negative(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit(_) | Error::LevelCap { .. } => Failure::Cap(e.to_string()),
            Error::NotPcf => Failure::Negative(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn load(source: &str) -> Result<MealyMachine, Failure> {
    let text = match source.strip_prefix("zoo:") {
        Some(name) => zoo::entry(name)
            .ok_or_else(|| Failure::Input(format!("no corpus entry `{name}`")))?
            .text
            .to_string(),
        None => fs::read_to_string(source).map_err(|e| Failure::Input(format!("{source}: {e}")))?,
    };
    text.parse().map_err(|e: Error| Failure::Input(format!("{source}: {e}")))
}

fn nucleus_of(m: &MealyMachine) -> Result<Nucleus, Failure> {
    let report = compute_nucleus(m, &generators_of(m), NucleusCaps::default())?;
    let iterations = report.iterations;
    report.into_nucleus().ok_or_else(|| {
        Failure::Cap(format!("nucleus inconclusive at default caps after {iterations} rounds"))
    })
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn graph(g: &impl Emit, dot: bool) -> String {
    emit_graph(g, if dot { GraphFormat::Dot } else { GraphFormat::Structured })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Info { machine } => {
            let m = load(&machine)?;
            let (min, _) = m.minimize();
            let out = json!({
                "alphabet": m.degree(),
                "states": m.names(),
                "identity": m.identity_state().map(|q| m.name(q)),
                "minimal": min.len() == m.len(),
                "minimized_states": min.len(),
            });
            Ok((pretty(&out), true))
        }
        Command::Classify { machine } => {
            let m = load(&machine)?;
            let depths: Vec<_> = finitary_depths(&m)
                .into_iter()
                .enumerate()
                .map(|(q, d)| {
                    json!({
                        "state": m.name(q),
                        "finitary_depth": match d {
                            pcfgroups::FinitaryDepth::Depth(k) => Some(k),
                            pcfgroups::FinitaryDepth::NotFinitary => None,
                        },
                    })
                })
                .collect();
            let (bounded, report) = is_bounded(&m);
            let out = json!({
                "finitary_depths": depths,
                "bounded": bounded,
                "cycle_report": report,
            });
            Ok((pretty(&out), bounded))
        }
        Command::Nucleus {
            machine,
            max_iter,
            max_states,
        } => {
            let m = load(&machine)?;
            let caps = NucleusCaps {
                max_iterations: max_iter,
                max_states,
            };
            let report = compute_nucleus(&m, &generators_of(&m), caps)?;
            let text = pretty(&report.to_json());
            if report.is_contracting() {
                Ok((text, true))
            } else {
                print!("{text}");
                Err(Failure::Cap(format!(
                    "inconclusive at cap after {} rounds",
                    report.iterations
                )))
            }
        }
        Command::Pcf { machine } => {
            let m = load(&machine)?;
            let n = nucleus_of(&m)?;
            let report = is_pcf(&n);
            let set: Option<Vec<String>> = report.is_pcf.then(|| {
                let set: std::collections::BTreeSet<_> =
                    report.witnesses.iter().map(|w| w.sequence.clone()).collect();
                set.iter().map(ToString::to_string).collect()
            });
            let out = json!({
                "nucleus": n.names(),
                "is_pcf": report.is_pcf,
                "path_count": report.path_count,
                "witnesses": report.witnesses,
                "post_critical_set": set,
                "open_set_condition": open_set_condition(&n),
                "partition": nucleus_partition(&n),
            });
            Ok((pretty(&out), report.is_pcf))
        }
        Command::Wp { machine, word } => {
            let m = load(&machine)?;
            let w: GroupWord = word.parse()?;
            let n = compute_nucleus(&m, &generators_of(&m), NucleusCaps::default())?.into_nucleus();
            let trivial = is_identity(&m, &w, n.as_ref())?;
            Ok((format!("identity: {trivial}\n"), trivial))
        }
        Command::Tiles {
            machine,
            level,
            dot,
        } => {
            let m = load(&machine)?;
            let n = nucleus_of(&m)?;
            Ok((graph(&tile_graph(&n, level)?, dot), true))
        }
        Command::Boundary { machine, word } => {
            let m = load(&machine)?;
            let n = nucleus_of(&m)?;
            let v: StateWord = word.parse()?;
            let c = boundary_certificates(&n, &v)?;
            if !c.open_set_condition {
                eprintln!("pcfg: warning: open set condition fails; certificates are partial");
            }
            let certs: Vec<_> = c
                .certificates
                .iter()
                .map(|(s, g)| json!({ "sequence": s.to_string(), "state": g }))
                .collect();
            let out = json!({
                "tile": v.to_string(),
                "certificates": certs,
                "open_set_condition": c.open_set_condition,
            });
            Ok((pretty(&out), true))
        }
        Command::Schreier {
            machine,
            level,
            dot,
            gens,
        } => {
            let m = load(&machine)?;
            let gens = gens.unwrap_or_else(|| generators_of(&m));
            Ok((graph(&schreier_graph(&m, &gens, level)?, dot), true))
        }
        Command::Zoo { command } => match command {
            ZooCommand::List => {
                let names: String = zoo::zoo().iter().map(|e| format!("{}\n", e.name)).collect();
                Ok((names, true))
            }
            ZooCommand::Cat { name } => {
                let e = zoo::entry(&name)
                    .ok_or_else(|| Failure::Input(format!("no corpus entry `{name}`")))?;
                Ok((e.text.to_string(), true))
            }
            ZooCommand::Regen { dir } => {
                let mut out = String::new();
                for e in zoo::zoo() {
                    let text = render_expected(&compute_expected(&e.machine())?);
                    let path = Path::new(&dir).join(format!("{}.expected", e.name));
                    fs::write(&path, text)
                        .map_err(|err| Failure::Input(format!("{}: {err}", path.display())))?;
                    out.push_str(&format!("{}\n", path.display()));
                }
                Ok((out, true))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("pcfg: error: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok((text, positive)) => {
            print!("{text}");
            if positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("pcfg: error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("pcfg: cap exhausted: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Negative(msg)) => {
            eprintln!("pcfg: {msg}");
            ExitCode::from(1)
        }
    }
}
