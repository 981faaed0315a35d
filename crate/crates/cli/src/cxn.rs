use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use cait::casestudy::{bin_by_age, emit_curves, BinnedDistribution, DEFAULT_BIN_WIDTH};
use cait::conllu::Treebank;
use cait::cxntag::{
    cxn_accuracy, read_gold_labels, tag_sentence, tagged_tsv_line, Backend, CxnLabel,
    FormulaicLexicon, TagError, TaggedUtterance,
};

use crate::io::{check_inputs, create_output, is_stdio, load_lexicon, open_input, pct, Context};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BackendArg {
    /// Decision procedure over the dependency tree.
    Ud,
    /// Word-order heuristics over UPOS tags.
    Pos,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Ud => Backend::UdRules,
            BackendArg::Pos => Backend::PosRules,
        }
    }
}

#[derive(Args, Debug)]
pub struct TagCxnArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendArg::Ud)]
    backend: BackendArg,
    /// Formulaic lexicon, one pattern per line.
    #[arg(long, env = "CAIT_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Gold labels (`sent_id TAB label`); prints accuracy.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Tagged TSV destination (default: standard output). The accuracy
    /// summary goes to standard output when this is a file and to
    /// standard error otherwise.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

/// Tag in parallel, keeping input order. Failed sentences are reported
/// on standard error.
fn tag_all(
    ctx: &Context,
    tb: &Treebank,
    backend: Backend,
    lexicon: &FormulaicLexicon,
) -> (Vec<TaggedUtterance>, usize) {
    let results: Vec<Result<TaggedUtterance, TagError>> = ctx.pool.install(|| {
        tb.sentences
            .par_iter()
            .map(|s| tag_sentence(s, backend, lexicon))
            .collect()
    });
    let mut tagged = Vec::with_capacity(results.len());
    let mut failures = 0;
    for r in results {
        match r {
            Ok(t) => tagged.push(t),
            Err(e) => {
                eprintln!("{e}");
                failures += 1;
            }
        }
    }
    (tagged, failures)
}

pub fn tag_cxn(ctx: &Context, args: &TagCxnArgs) -> Result<i32> {
    check_inputs([&args.input].into_iter().chain(args.gold.as_ref()))?;
    let lexicon = load_lexicon(args.lexicon.as_ref())?;
    let gold = match &args.gold {
        Some(p) => Some(
            read_gold_labels(open_input(p)?).with_context(|| format!("reading {}", p.display()))?,
        ),
        None => None,
    };
    let tb = ctx.read_treebank(&args.input)?;
    let (tagged, failures) = tag_all(ctx, &tb, args.backend.into(), &lexicon);

    let mut out = create_output(&args.out)?;
    for t in &tagged {
        writeln!(out, "{}", tagged_tsv_line(t))?;
    }
    out.flush()?;
    drop(out);

    if let Some(gold) = gold {
        let acc = cxn_accuracy(&tagged, &gold)?;
        let mut summary: Vec<String> = vec![
            format!(
                "accuracy\t{}\t{}/{}",
                pct(Some(acc.accuracy)),
                acc.correct,
                acc.n
            ),
            "label\tgold\tcorrect\trecall".to_string(),
        ];
        for label in CxnLabel::ALL {
            if let Some(c) = acc.per_category.get(&label) {
                summary.push(format!(
                    "{label}\t{}\t{}\t{}",
                    c.n_gold,
                    c.correct,
                    pct(c.recall)
                ));
            }
        }
        let text = summary.join("\n") + "\n";
        if is_stdio(&args.out) {
            eprint!("{text}");
        } else {
            print!("{text}");
        }
    }
    if failures > 0 {
        eprintln!("{failures} sentence(s) could not be tagged");
        return Ok(1);
    }
    Ok(0)
}

#[derive(Args, Debug)]
pub struct CaseStudyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendArg::Ud)]
    backend: BackendArg,
    #[arg(long, env = "CAIT_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Age bin width in months.
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    width: u32,
    /// Keep FOR, FRA and X in the proportions.
    #[arg(long)]
    include_nonclausal: bool,
    /// Curve CSV destination.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

pub fn case_study(ctx: &Context, args: &CaseStudyArgs) -> Result<i32> {
    check_inputs([&args.input])?;
    if args.width == 0 {
        return Err(crate::io::UsageError("--width must be at least 1".into()).into());
    }
    let lexicon = load_lexicon(args.lexicon.as_ref())?;
    let tb = ctx.read_treebank(&args.input)?;
    let (tagged, failures) = tag_all(ctx, &tb, args.backend.into(), &lexicon);
    let binning = bin_by_age(&tagged, args.width)?;
    let bins: Vec<BinnedDistribution> = if args.include_nonclausal {
        binning.bins.clone()
    } else {
        binning
            .bins
            .iter()
            .map(BinnedDistribution::clausal_only)
            .collect()
    };
    emit_curves(&bins, create_output(&args.out)?)?;
    let summary = format!(
        "utterances\t{}\nbinned\t{}\nunbinned\t{}\nbins\t{}\n",
        tagged.len(),
        binning.n_binned(),
        binning.unbinned,
        binning.bins.len()
    );
    if is_stdio(&args.out) {
        eprint!("{summary}");
    } else {
        print!("{summary}");
    }
    if failures > 0 {
        eprintln!("{failures} sentence(s) could not be tagged");
        return Ok(1);
    }
    Ok(0)
}
