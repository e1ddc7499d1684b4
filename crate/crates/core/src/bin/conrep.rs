use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use conrep::certificate::{Certificate, CertificateDocument};
use conrep::chainrep::build_chain;
use conrep::io::{export_dot_document, parse_document, serialize, LatticeDocument};
use conrep::lattice::CandidateSubset;
use conrep::pipeline::{construct_general, AutMode, Options};
use conrep::verify::{candidate_subsets, enumerate_distributive, verify_certificate};
use conrep::{Error, FiniteLattice};

#[derive(Parser)]
#[command(name = "conrep", version, about = "Finite lattices with prescribed congruence lattice and principal congruences")]
struct Cli {
    /// Accepted for reproducibility; current outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QArg {
    /// Candidate subset as comma-separated element names; defaults to the
    /// document's `q` field, then to J⁺(D).
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Reports planarity and join-reducible coatoms of D.
    Check { d: PathBuf },
    /// Prints the labels of a J(D)-labeled chain representing Q.
    Chain {
        d: PathBuf,
        #[command(flatten)]
        q: QArg,
    },
    /// Builds L with Con L ≅ D and φ(Princ L) = Q, verified before writing.
    Construct {
        d: PathBuf,
        #[command(flatten)]
        q: QArg,
        /// Require a trivial automorphism group.
        #[arg(long, conflicts_with = "aut_gadget")]
        rigid: bool,
        /// Require Aut(L) ≅ Aut(M0) for the simple lattice in this file.
        #[arg(long, value_name = "M0")]
        aut_gadget: Option<PathBuf>,
        /// Simple cap lattice for the frame.
        #[arg(long)]
        cap: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Re-checks a certificate from scratch and prints the report.
    Verify { cert: PathBuf },
    /// Builds and verifies every (D, Q) with |J(D)| ≤ N.
    Enumerate {
        #[arg(long)]
        max_j: usize,
        /// Every candidate subset rather than J⁺(D) only.
        #[arg(long)]
        all_q: bool,
        #[arg(long)]
        rigid: bool,
    },
    /// Prints a Graphviz rendering of a lattice document.
    Dot { lattice: PathBuf },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Empty
            | Error::DuplicateName(_)
            | Error::UnknownName(_)
            | Error::CycleError(_)
            | Error::NotALattice { .. }
            | Error::NotDistributive
            | Error::TooLarge(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(LatticeDocument, FiniteLattice), Failure> {
    let doc = parse_document(&read(path)?)?;
    let l = doc.to_lattice()?;
    Ok((doc, l))
}

fn load_distributive(path: &Path) -> Result<(LatticeDocument, FiniteLattice), Failure> {
    let (doc, d) = load(path)?;
    if !d.is_distributive() {
        return Err(Error::NotDistributive.into());
    }
    Ok((doc, d))
}

fn candidate(doc: &LatticeDocument, d: &FiniteLattice, q: &QArg) -> Result<CandidateSubset, Failure> {
    match &q.q {
        Some(names) => {
            let mut doc = doc.clone();
            doc.q = Some(names.clone());
            Ok(doc.candidate(d)?)
        }
        None => Ok(doc.candidate(d)?),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CheckReport {
    holds: bool,
    planar: bool,
    join_reducible_coatoms: Vec<String>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { d } => {
            let (_, d) = load_distributive(&d)?;
            let r = d.condition_iii()?;
            let report = CheckReport {
                holds: r.holds,
                planar: r.planar,
                join_reducible_coatoms: r.join_reducible_coatoms.iter().map(|&x| d.name(x).to_string()).collect(),
            };
            print!("{}", to_json(&report));
            if !r.holds {
                return Err(Failure::Verification("condition fails".into()));
            }
        }
        Command::Chain { d, q } => {
            let (doc, d) = load_distributive(&d)?;
            let q = candidate(&doc, &d, &q)?;
            let lc = build_chain(&d, &q)?;
            let labels: Vec<&str> = lc.labels().iter().map(|&x| d.name(x)).collect();
            println!("{}", labels.join(" "));
        }
        Command::Construct { d, q, rigid, aut_gadget, cap, output, cert } => {
            let (doc, d) = load_distributive(&d)?;
            let q = candidate(&doc, &d, &q)?;
            let aut = match (rigid, aut_gadget) {
                (true, _) => AutMode::Rigid,
                (false, Some(m)) => AutMode::Group(load(&m)?.1),
                (false, None) => AutMode::Any,
            };
            let cap = cap.map(|c| load(&c).map(|x| x.1)).transpose()?;
            let c = construct_general(&d, &q, &Options { cap, aut })?;
            let document = c.to_document();
            write(&output, &serialize(&document.lattice))?;
            if let Some(path) = cert {
                write(&path, &to_json(&document))?;
            }
            eprintln!("|L| = {}, |Con L| = {}, |Q| = {}", c.lattice.len(), d.len(), q.members().count());
        }
        Command::Verify { cert } => {
            let doc: CertificateDocument = serde_json::from_str(&read(&cert)?).map_err(|e| Error::Parse {
                location: format!("line {} column {}", e.line(), e.column()),
                message: e.to_string(),
            })?;
            let c = Certificate::from_document(&doc)?;
            let report = verify_certificate(&c);
            print!("{}", report.to_json());
            if !report.passed() {
                return Err(Failure::Verification(format!("{} checks failed", report.failures().len())));
            }
        }
        Command::Enumerate { max_j, all_q, rigid } => {
            let ds = enumerate_distributive(max_j)?;
            let jobs: Vec<(usize, CandidateSubset)> = ds
                .iter()
                .enumerate()
                .flat_map(|(i, d)| {
                    let qs = if all_q { candidate_subsets(d) } else { vec![CandidateSubset::minimal(d)] };
                    qs.into_iter().map(move |q| (i, q))
                })
                .collect();
            let (built, refused) = (AtomicUsize::new(0), AtomicUsize::new(0));
            let aut = if rigid { AutMode::Rigid } else { AutMode::Any };
            let mut failures: Vec<String> = jobs
                .par_iter()
                .filter_map(|(i, q)| {
                    let d = &ds[*i];
                    match construct_general(d, q, &Options { cap: None, aut: aut.clone() }) {
                        Ok(c) if verify_certificate(&c).passed() => {
                            built.fetch_add(1, Ordering::Relaxed);
                            None
                        }
                        Ok(_) => Some(format!("D #{i}: certificate failed re-verification")),
                        Err(Error::ConditionViolated(_)) => {
                            refused.fetch_add(1, Ordering::Relaxed);
                            None
                        }
                        Err(e) => Some(format!("D #{i}, |D| = {}: {e}", d.len())),
                    }
                })
                .collect();
            failures.sort();
            for f in &failures {
                println!("FAIL {f}");
            }
            println!(
                "lattices: {}, pairs: {}, built: {}, refused: {}, failed: {}",
                ds.len(),
                jobs.len(),
                built.into_inner(),
                refused.into_inner(),
                failures.len()
            );
            if !failures.is_empty() {
                return Err(Failure::Verification(format!("{} failures", failures.len())));
            }
        }
        Command::Dot { lattice } => {
            let doc = parse_document(&read(&lattice)?)?;
            print!("{}", export_dot_document(&doc)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
