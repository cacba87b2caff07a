//! `polecalc`: pole recognition, decomposition reports, rank tables and
//! identity suites for lattices given as `LatticeFile` JSON.
//!
//! Exit status is 0 for an affirmative answer, 1 for a negative one and 2
//! for usage or input errors.

mod file;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use polecalc::decompose::verify_corpus;
use polecalc::functor::z_basis;
use polecalc::{
    decomposition_report, is_pole_by_permutation, pole_decomposition, pole_signature, rank_sq, verify_suite,
    CheckRecord, GroundSet, Suite,
};

use crate::file::LatticeFile;

#[derive(Parser)]
#[command(name = "polecalc", version, about = "Exact calculus of finite lattices and pole posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a poset is a pole poset.
    CheckPole {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Block decomposition of the pole part of the endomorphism algebra.
    Decompose {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rank table of the quotient functor of a pole lattice.
    Rank {
        path: PathBuf,
        #[arg(long = "set-size", default_value_t = 3)]
        set_size: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run an identity suite on a lattice, or the poset corpus suite.
    Verify {
        path: Option<PathBuf>,
        /// idempotents, orthogonality, centrality, epsilon, independence,
        /// span, opposites, all, or corpus
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest poset size for the corpus suite.
        #[arg(long = "max-size", default_value_t = 4)]
        max_size: usize,
        #[arg(long)]
        json: bool,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Affirmative or negative answer of a command that ran to completion.
enum Answer {
    Yes,
    No,
}

#[derive(Serialize)]
struct PoleOutput {
    name: String,
    size: usize,
    pole: bool,
    blocks: Option<Vec<u8>>,
    witness: Option<Vec<usize>>,
    failed_criteria: Vec<String>,
}

#[derive(Serialize)]
struct RankRow {
    set_size: usize,
    rank: i64,
    z_basis: usize,
}

#[derive(Serialize)]
struct RankOutput {
    name: String,
    irreducibles: usize,
    rows: Vec<RankRow>,
}

#[derive(Serialize)]
struct VerifyOutput {
    target: String,
    suite: String,
    passed: bool,
    records: Vec<CheckRecord>,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn check_pole(path: &PathBuf, json: bool) -> Result<Answer> {
    let f = LatticeFile::read(path)?;
    let p = f.to_poset()?;
    let dec = pole_decomposition(&p);
    let tau = is_pole_by_permutation(&p);
    let mut failed = Vec::new();
    if dec.is_none() {
        failed.push("no decomposition into singleton and twin-pair levels".to_string());
    }
    if tau.is_none() {
        failed.push("no permutation τ with x ≰ y ⇒ y ≤ τ(x)".to_string());
    }
    if dec.is_some() != tau.is_some() {
        bail!("the two pole criteria disagree on {}", f.name);
    }
    let out = PoleOutput {
        name: f.name.clone(),
        size: p.size(),
        pole: dec.is_some(),
        blocks: dec.as_ref().map(|d| d.level_sizes()),
        witness: tau.as_ref().map(|t| t.image().to_vec()),
        failed_criteria: failed,
    };
    if json {
        print_json(&out)?;
    } else {
        println!("poset {} (size {})", out.name, out.size);
        match (&out.blocks, &out.witness) {
            (Some(b), Some(w)) => {
                let b: Vec<String> = b.iter().map(u8::to_string).collect();
                let w: Vec<String> = w.iter().map(|&x| p.ground().label(x)).collect();
                println!("pole poset");
                println!("blocks: {}", b.join(","));
                println!("witness τ: {}", w.join(" "));
            }
            _ => println!("not a pole poset: {}", out.failed_criteria.join("; ")),
        }
    }
    Ok(if out.pole { Answer::Yes } else { Answer::No })
}

fn decompose(path: &PathBuf, json: bool) -> Result<Answer> {
    let f = LatticeFile::read(path)?;
    let t = Arc::new(f.to_lattice()?);
    let report = decomposition_report(&f.name, &t)?;
    if json {
        print_json(&report)?;
    } else {
        println!("{report}");
    }
    Ok(if report.consistent { Answer::Yes } else { Answer::No })
}

fn rank(path: &PathBuf, set_size: usize, json: bool) -> Result<Answer> {
    let f = LatticeFile::read(path)?;
    let q = Arc::new(f.to_lattice()?);
    if pole_signature(&q).is_none() {
        println!("{} is not a pole lattice", f.name);
        return Ok(Answer::No);
    }
    let rows = (0..=set_size)
        .map(|m| {
            Ok(RankRow { set_size: m, rank: rank_sq(&q, m)?, z_basis: z_basis(&q, &GroundSet::new(m))?.len() })
        })
        .collect::<Result<Vec<_>>>()?;
    let agree = rows.iter().all(|r| r.rank == r.z_basis as i64);
    let out = RankOutput { name: f.name.clone(), irreducibles: q.irr().len(), rows };
    if json {
        print_json(&out)?;
    } else {
        println!("lattice {} (|E| = {})", out.name, out.irreducibles);
        println!("{:>3} {:>10} {:>10}", "m", "rank", "|Z(X)|");
        for r in &out.rows {
            println!("{:>3} {:>10} {:>10}", r.set_size, r.rank, r.z_basis);
        }
    }
    Ok(if agree { Answer::Yes } else { Answer::No })
}

fn verify(path: Option<&PathBuf>, suite: &str, max_size: usize, json: bool) -> Result<Answer> {
    let (target, records) = if suite == "corpus" {
        (format!("posets up to size {max_size}"), verify_corpus(max_size))
    } else {
        let s: Suite = suite.parse().with_context(|| format!("--suite {suite}: corpus is also accepted"))?;
        let Some(path) = path else { bail!("suite {suite} needs a lattice file") };
        let f = LatticeFile::read(path)?;
        let t = Arc::new(f.to_lattice()?);
        (f.name.clone(), verify_suite(&t, s))
    };
    let passed = records.iter().all(|r| r.passed);
    if json {
        print_json(&VerifyOutput { target, suite: suite.to_string(), passed, records })?;
    } else {
        println!("suite {suite} on {target}");
        for r in &records {
            println!("{} {} [{}] {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.anchor, r.detail);
        }
        println!("{} of {} checks passed", records.iter().filter(|r| r.passed).count(), records.len());
    }
    Ok(if passed { Answer::Yes } else { Answer::No })
}

fn run(cli: Cli) -> Result<Answer> {
    match cli.command {
        Command::CheckPole { path, json } => check_pole(&path, json),
        Command::Decompose { path, json } => decompose(&path, json),
        Command::Rank { path, set_size, json } => rank(&path, set_size, json),
        Command::Verify { path, suite, max_size, json, jobs } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("starting worker threads")?;
            }
            verify(path.as_ref(), &suite, max_size, json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Answer::Yes) => ExitCode::SUCCESS,
        Ok(Answer::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
