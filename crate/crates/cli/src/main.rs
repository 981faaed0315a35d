//! `cait`: evaluation, construction tagging, annotation linting and
//! baseline parsing for child-language treebanks.

mod baseline;
mod cxn;
mod eval;
mod io;
mod lint;
mod treebank;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::io::{load_roles, Context, UsageError};

#[derive(Parser, Debug)]
#[command(name = "cait", version, about = "Child-language treebank toolkit")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// error, warn, info, debug or trace.
    #[arg(long, global = true, default_value = "warn")]
    log_level: log::LevelFilter,
    /// Speaker-code to role table (`code TAB CS|CDS|OTHER`).
    #[arg(long, global = true)]
    roles: Option<PathBuf>,
    /// Accept structurally invalid trees and report them instead of failing.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score predicted trees against gold.
    Eval(eval::EvalArgs),
    /// Assign a construction label to every utterance.
    TagCxn(cxn::TagCxnArgs),
    /// Flag suspicious annotation patterns.
    Lint(lint::LintArgs),
    /// Construction proportions by child age.
    CaseStudy(cxn::CaseStudyArgs),
    /// Train the baseline parser or tagger.
    Train(baseline::TrainArgs),
    /// Parse with a trained parser model.
    Parse(baseline::ApplyArgs),
    /// Assign UPOS with a trained tagger model.
    Tag(baseline::ApplyArgs),
    /// Check trees for structural problems.
    Validate(treebank::ValidateArgs),
    /// Repair trees and map relation labels.
    Normalize(treebank::NormalizeArgs),
}

fn run(cli: Cli) -> Result<i32> {
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(UsageError("--jobs must be at least 1".into()).into());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let ctx = Context {
        pool,
        lenient: cli.lenient,
        roles: load_roles(cli.roles.as_ref())?,
    };
    match &cli.command {
        Command::Eval(a) => eval::run(&ctx, a),
        Command::TagCxn(a) => cxn::tag_cxn(&ctx, a),
        Command::Lint(a) => lint::run(&ctx, a),
        Command::CaseStudy(a) => cxn::case_study(&ctx, a),
        Command::Train(a) => baseline::train(&ctx, a),
        Command::Parse(a) => baseline::parse_cmd(&ctx, a),
        Command::Tag(a) => baseline::tag_cmd(&ctx, a),
        Command::Validate(a) => treebank::validate(&ctx, a),
        Command::Normalize(a) => treebank::normalize_cmd(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    env_logger::Builder::new()
        .filter_level(cli.log_level)
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
