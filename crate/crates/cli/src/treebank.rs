use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::Args;
use rayon::prelude::*;

use cait::conllu::{normalize, write_conllu, LabelMap, Treebank};

use crate::io::{check_inputs, create_output, open_input, Context};

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
}

/// Check every sentence; diagnostics go to standard error.
pub fn validate(ctx: &Context, args: &ValidateArgs) -> Result<i32> {
    check_inputs([&args.input])?;
    let tb = ctx.read_treebank_with(&args.input, true)?;
    for d in &tb.diagnostics {
        for diag in &d.diagnostics {
            eprintln!("{}\t{}", d.sent_id, diag);
        }
    }
    let bad = tb
        .diagnostics
        .iter()
        .filter(|d| !d.diagnostics.is_empty())
        .count();
    println!("sentences\t{}", tb.len());
    println!("tokens\t{}", tb.n_tokens());
    println!("invalid\t{bad}");
    Ok(if bad > 0 { 1 } else { 0 })
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Two-column TSV of relation renamings (`from TAB to`).
    #[arg(long, conflicts_with = "clearnlp")]
    label_map: Option<PathBuf>,
    /// Use the bundled ClearNLP-to-UD relation table.
    #[arg(long)]
    clearnlp: bool,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

/// Repair trees and relabel; each repair is logged at info level.
pub fn normalize_cmd(ctx: &Context, args: &NormalizeArgs) -> Result<i32> {
    check_inputs([&args.input].into_iter().chain(args.label_map.as_ref()))?;
    let map = match &args.label_map {
        Some(p) => LabelMap::from_tsv(open_input(p)?)
            .with_context(|| format!("reading {}", p.display()))?,
        None if args.clearnlp => LabelMap::clearnlp(),
        None => LabelMap::new(),
    };
    let tb = ctx.read_treebank_with(&args.input, true)?;
    let results: Vec<_> = ctx.pool.install(|| {
        tb.sentences
            .par_iter()
            .map(|s| normalize(s, &map))
            .collect()
    });
    let mut sentences = Vec::with_capacity(results.len());
    for n in results {
        for r in &n.repairs {
            log::info!("{}: {}", n.sentence.sent_id(), r);
        }
        sentences.push(n.sentence);
    }
    let mut out = create_output(&args.out)?;
    write_conllu(&Treebank::new(sentences), &mut out)?;
    out.flush()?;
    Ok(0)
}
