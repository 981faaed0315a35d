use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use cait::baseline::{parse, tag, train_parser, train_tagger, ParserModel, TaggerModel};
use cait::conllu::{write_conllu, Sentence, Treebank};

use crate::io::{check_inputs, create_output, open_input, Context};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelKind {
    Parser,
    Tagger,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    input: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelKind::Parser)]
    kind: ModelKind,
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

pub fn train(ctx: &Context, args: &TrainArgs) -> Result<i32> {
    check_inputs([&args.input])?;
    let tb = ctx.read_treebank(&args.input)?;
    let mut out = create_output(&args.model)?;
    let report = match args.kind {
        ModelKind::Parser => {
            let (model, report) = train_parser(&tb, args.epochs, args.seed)?;
            model.save(&mut out)?;
            report
        }
        ModelKind::Tagger => {
            let (model, report) = train_tagger(&tb, args.epochs, args.seed)?;
            model.save(&mut out)?;
            report
        }
    };
    out.flush()?;
    log::info!(
        "trained on {} sentences ({} non-projective skipped), {} epochs",
        report.n_sentences,
        report.n_skipped_nonprojective,
        report.epochs
    );
    Ok(0)
}

fn apply<F>(ctx: &Context, args: &ApplyArgs, f: F) -> Result<i32>
where
    F: Fn(&Sentence) -> Result<Sentence, cait::baseline::BaselineError> + Sync,
{
    let tb = ctx.read_treebank(&args.input)?;
    let results: Vec<_> = ctx
        .pool
        .install(|| tb.sentences.par_iter().map(&f).collect());
    let mut sentences = Vec::with_capacity(results.len());
    let mut failures = 0;
    for (r, original) in results.into_iter().zip(&tb.sentences) {
        match r {
            Ok(s) => sentences.push(s),
            Err(e) => {
                eprintln!("{e}");
                failures += 1;
                sentences.push(original.clone());
            }
        }
    }
    let mut out = create_output(&args.out)?;
    write_conllu(&Treebank::new(sentences), &mut out)?;
    out.flush()?;
    Ok(if failures > 0 { 1 } else { 0 })
}

pub fn parse_cmd(ctx: &Context, args: &ApplyArgs) -> Result<i32> {
    check_inputs([&args.input, &args.model])?;
    let model = ParserModel::load(open_input(&args.model)?)
        .with_context(|| format!("loading {}", args.model.display()))?;
    apply(ctx, args, |s| parse(&model, s))
}

pub fn tag_cmd(ctx: &Context, args: &ApplyArgs) -> Result<i32> {
    check_inputs([&args.input, &args.model])?;
    let model = TaggerModel::load(open_input(&args.model)?)
        .with_context(|| format!("loading {}", args.model.display()))?;
    apply(ctx, args, |s| tag(&model, s))
}
