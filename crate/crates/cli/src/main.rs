//! `succinv`: weave circular successors onto similar structures and check
//! the results.
//!
//! Exit codes: 0 success / equivalent / true, 1 a check failed / not
//! equivalent / false, 2 infeasible or not similar, 3 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use succinv::io::{self, ParsedStructure};
use succinv::logic::{self, Formula, WeaveCertificate};
use succinv::params::{GBound, Overrides};
use succinv::{structure_degree, type_census, weave_pair, Error, ParamsBundle, Structure};

#[derive(Parser)]
#[command(name = "succinv", version, about = "Successor weaving on bounded-degree structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the neighborhood-type census of a structure.
    Census {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Measure distances and types with the successor relation included.
        #[arg(long)]
        with_succ: bool,
    },
    /// Print the parameters derived from a quantifier rank.
    Params {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        degree: u64,
        /// Number of distinct neighborhood types assumed for g.
        #[arg(long, default_value_t = 1)]
        n_occ: u64,
    },
    /// Build successors on two structures and verify them.
    Weave(WeaveArgs),
    /// Re-verify successors produced by `weave`.
    Verify {
        g1: PathBuf,
        succ1: PathBuf,
        g2: PathBuf,
        succ2: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        threshold: usize,
        #[arg(long)]
        ef_depth: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decide the EF game of the given depth on two structures.
    Ef {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Evaluate a sentence on a structure.
    Mc { file: PathBuf, formula: PathBuf },
    /// Translate a sentence between circular and linear successor vocabularies.
    Rewrite { direction: Direction, formula: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    #[value(name = "succ2lin")]
    SuccToLin,
    #[value(name = "lin2succ")]
    LinToSucc,
}

#[derive(Args)]
struct WeaveArgs {
    g1: PathBuf,
    g2: PathBuf,
    /// Target quantifier rank; derives radius and threshold.
    #[arg(long, conflicts_with_all = ["radius", "threshold"])]
    alpha: Option<u32>,
    /// Degree bound (defaults to the larger degree of the inputs).
    #[arg(long)]
    degree: Option<u64>,
    #[arg(long, requires = "threshold")]
    radius: Option<u64>,
    #[arg(long, requires = "radius")]
    threshold: Option<u64>,
    /// Force g to a constant.
    #[arg(long)]
    g_const: Option<u64>,
    /// Also run the EF game of this depth on the enriched structures.
    #[arg(long)]
    ef_depth: Option<usize>,
    #[arg(long)]
    out_succ1: Option<PathBuf>,
    #[arg(long)]
    out_succ2: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A command's outcome short of an error: whether the answer was positive.
type Outcome = Result<bool, Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Census { file, radius, with_succ } => census(&file, radius, with_succ),
        Command::Params { alpha, degree, n_occ } => params(alpha, degree, n_occ),
        Command::Weave(args) => weave(&args),
        Command::Verify {
            g1,
            succ1,
            g2,
            succ2,
            radius,
            threshold,
            ef_depth,
            report,
        } => verify(&g1, &succ1, &g2, &succ2, radius, threshold, ef_depth, report.as_deref()),
        Command::Ef { a, b, depth } => ef(&a, &b, depth),
        Command::Mc { file, formula } => mc(&file, &formula),
        Command::Rewrite { direction, formula } => rewrite(direction, &formula),
    };
    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("succinv: {e}");
            ExitCode::from(match e {
                Error::Input(_) => 3,
                _ => 2,
            })
        }
    }
}

fn load(path: &Path) -> Result<Structure, Error> {
    io::read_structure(path).map(|ParsedStructure { structure, .. }| structure)
}

fn read_formula(path: &Path) -> Result<Formula, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    Formula::parse(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        e => e,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn census(file: &Path, radius: usize, with_succ: bool) -> Outcome {
    let s = load(file)?;
    if with_succ && s.succ().is_none() {
        return Err(Error::Input(format!("{} has no successor relation", file.display())));
    }
    print!("{}", io::render(&type_census(&s, radius, with_succ)));
    Ok(true)
}

fn params(alpha: u32, degree: u64, n_occ: u64) -> Outcome {
    let p = ParamsBundle::for_rank(alpha, degree, n_occ, Overrides::default());
    let g0 = p.g.eval_checked(0);
    let report = json!({
        "params": p,
        "g_at_0": g0,
        "g_at_0_binding": p.g.binding(0),
    });
    print!("{}", io::render(&report));
    Ok(true)
}

fn weave(args: &WeaveArgs) -> Outcome {
    let g1 = load(&args.g1)?;
    let g2 = load(&args.g2)?;
    let degree = args.degree.unwrap_or_else(|| {
        structure_degree(&g1, false).max(structure_degree(&g2, false)) as u64
    });
    let n_occ_at = |r: u64| -> Result<u64, Error> {
        let r = usize::try_from(r).map_err(|_| Error::Input("radius out of range".into()))?;
        Ok(type_census(&g1, r, false).counts.len() as u64)
    };
    let params = match (args.alpha, args.radius, args.threshold) {
        (Some(alpha), None, None) => {
            let overrides = Overrides {
                g: args.g_const,
                ..Overrides::default()
            };
            let (r, _) = succinv::hanf_params(alpha, degree);
            ParamsBundle::for_rank(alpha, degree, n_occ_at(r)?, overrides)
        }
        (None, Some(r), Some(t)) => ParamsBundle::explicit(degree, r, t, n_occ_at(r)?, args.g_const),
        _ => {
            return Err(Error::Input(
                "give either --alpha or both --radius and --threshold".into(),
            ))
        }
    };
    if params.g.binding(0) != GBound::Forced && params.g.eval_checked(0).is_none() {
        return Err(Error::Resource("g overflows 64 bits at these parameters".into()));
    }
    let res = weave_pair(&g1, &g2, &params)?;
    let r = usize::try_from(params.r).map_err(|_| Error::Input("radius out of range".into()))?;
    let t = usize::try_from(params.t).unwrap_or(usize::MAX);
    let verification = logic::verify_weave(&res, &g1, &g2, r, t, args.ef_depth)?;
    let (f1, f2) = io::successor_files(&WeaveCertificate::from_result(&res));
    if let Some(p) = &args.out_succ1 {
        write(p, &io::write_successor(&f1))?;
    }
    if let Some(p) = &args.out_succ2 {
        write(p, &io::write_successor(&f2))?;
    }
    emit(args.report.as_deref(), &io::weave_report(&res, &verification))?;
    Ok(verification.passed)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    g1: &Path,
    succ1: &Path,
    g2: &Path,
    succ2: &Path,
    radius: usize,
    threshold: usize,
    ef_depth: Option<usize>,
    report: Option<&Path>,
) -> Outcome {
    let (g1, g2) = (load(g1)?, load(g2)?);
    let cert = io::certificate_from_files(&io::read_successor(succ1)?, &io::read_successor(succ2)?)?;
    let v = logic::verify_certificate(&g1, &g2, &cert, radius, threshold, ef_depth)?;
    emit(report, &io::verify_report(&v))?;
    for c in v.failures() {
        eprintln!("check {} failed: {}", c.name, c.detail);
    }
    Ok(v.passed)
}

fn ef(a: &Path, b: &Path, depth: usize) -> Outcome {
    let equivalent = logic::ef_equivalent(&load(a)?, &load(b)?, depth)?;
    println!("{}", if equivalent { "equivalent" } else { "not equivalent" });
    Ok(equivalent)
}

fn mc(file: &Path, formula: &Path) -> Outcome {
    let s = load(file)?;
    let phi = read_formula(formula)?;
    if !phi.is_sentence() {
        return Err(Error::Input(format!(
            "{}: free variables {:?}; only sentences can be checked",
            formula.display(),
            phi.free_vars()
        )));
    }
    let truth = logic::model_check(&s, &phi)?;
    println!("{truth}");
    Ok(truth)
}

fn rewrite(direction: Direction, formula: &Path) -> Outcome {
    let phi = read_formula(formula)?;
    let out = match direction {
        Direction::SuccToLin => logic::succ_to_linsucc(&phi)?,
        Direction::LinToSucc => logic::linsucc_to_succ(&phi)?,
    };
    println!("{out}");
    Ok(true)
}
