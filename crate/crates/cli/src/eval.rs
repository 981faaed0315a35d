use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use cait::conllu::Treebank;
use cait::eval::{
    aggregate, align_treebanks, confusion, confusion_delta, paired_ttest, per_label_error_rates,
    score_sentence, tag_accuracy, DeprelMatch, ErrorScope, EvalReport, LabelErrorRate,
    SentencePairScore, SliceScore, TTestResult, TagField,
};

use crate::io::{check_inputs, create_output, is_stdio, pct, Context};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConfusionScope {
    /// All tokens, compared by label only.
    Label,
    /// Only tokens with a wrong head or label.
    Las,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// A second prediction file; adds a paired t-test against `--pred`.
    #[arg(long)]
    compare: Option<PathBuf>,
    /// Labels with fewer gold tokens are left out of the per-label rates.
    #[arg(long, default_value_t = 100)]
    min_gold: usize,
    /// Which tokens enter the confusion matrix written by `--tsv`.
    #[arg(long, value_enum, default_value_t = ConfusionScope::Label)]
    confusion: ConfusionScope,
    /// Compare only the universal part of relation labels.
    #[arg(long)]
    universal: bool,
    /// Write the JSON report here (`-` for standard output, which replaces
    /// the table).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the row-normalized confusion matrix of `--pred` here.
    #[arg(long)]
    tsv: Option<PathBuf>,
    /// With `--compare`: write the confusion delta (pred minus compare).
    #[arg(long, requires = "compare")]
    delta_tsv: Option<PathBuf>,
}

#[derive(Serialize)]
struct TTests {
    las: TTestResult,
    uas: TTestResult,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    las: f64,
    uas: f64,
    em: f64,
    uem: f64,
    upos_acc: Option<f64>,
    xpos_acc: Option<f64>,
    slices: &'a BTreeMap<String, SliceScore>,
    per_label_error: &'a BTreeMap<String, LabelErrorRate>,
    ttest: Option<TTests>,
}

fn score(ctx: &Context, gold: &Treebank, pred: &Treebank, mode: DeprelMatch) -> Result<EvalReport> {
    let pairs = align_treebanks(gold, pred)?;
    let scores: Vec<SentencePairScore> = ctx.pool.install(|| {
        pairs
            .par_iter()
            .map(|(g, p)| score_sentence(g, p, mode))
            .collect::<Result<_, _>>()
    })?;
    let mut report = aggregate(&scores)?;
    report.upos_acc = Some(tag_accuracy(gold, pred, TagField::Upos)?);
    report.xpos_acc = Some(tag_accuracy(gold, pred, TagField::Xpos)?);
    Ok(report)
}

fn ttests(a: &EvalReport, b: &EvalReport) -> Result<TTests> {
    let las = |r: &EvalReport| {
        r.per_sentence
            .iter()
            .map(SentencePairScore::las)
            .collect::<Vec<_>>()
    };
    let uas = |r: &EvalReport| {
        r.per_sentence
            .iter()
            .map(SentencePairScore::uas)
            .collect::<Vec<_>>()
    };
    Ok(TTests {
        las: paired_ttest(&las(a), &las(b))?,
        uas: paired_ttest(&uas(a), &uas(b))?,
    })
}

fn print_table<W: Write>(
    out: &mut W,
    report: &EvalReport,
    other: Option<&EvalReport>,
    per_label: &BTreeMap<String, LabelErrorRate>,
    tests: Option<&TTests>,
) -> std::io::Result<()> {
    let rows = [
        ("LAS", Some(report.las), other.map(|o| o.las)),
        ("UAS", Some(report.uas), other.map(|o| o.uas)),
        ("EM", Some(report.em), other.map(|o| o.em)),
        ("UEM", Some(report.uem), other.map(|o| o.uem)),
        ("UPOS", report.upos_acc, other.and_then(|o| o.upos_acc)),
        ("XPOS", report.xpos_acc, other.and_then(|o| o.xpos_acc)),
    ];
    if other.is_some() {
        writeln!(out, "metric\tpred\tcompare")?;
    } else {
        writeln!(out, "metric\tscore")?;
    }
    for (name, a, b) in rows {
        match other {
            Some(_) => writeln!(out, "{name}\t{}\t{}", pct(a), pct(b))?,
            None => writeln!(out, "{name}\t{}", pct(a))?,
        }
    }
    writeln!(out, "sentences\t{}", report.n_sentences)?;
    writeln!(out, "tokens\t{}", report.n_tokens)?;
    if let Some(t) = tests {
        writeln!(out)?;
        writeln!(out, "paired t-test\tt\tdf\tp")?;
        for (name, r) in [("LAS", &t.las), ("UAS", &t.uas)] {
            writeln!(out, "{name}\t{:.4}\t{}\t{:.4e}", r.t_stat, r.df, r.p_value)?;
        }
    }
    writeln!(out)?;
    writeln!(out, "slice\tsentences\ttokens\tLAS\tUAS")?;
    for (key, s) in &report.slices {
        writeln!(
            out,
            "{key}\t{}\t{}\t{}\t{}",
            s.n_sentences,
            s.n_tokens,
            pct(s.las),
            pct(s.uas)
        )?;
    }
    if !per_label.is_empty() {
        writeln!(out)?;
        writeln!(out, "label\tgold\terrors\terror_rate")?;
        for (label, r) in per_label {
            writeln!(
                out,
                "{label}\t{}\t{}\t{}",
                r.gold_count,
                r.errors,
                pct(Some(100.0 * r.rate))
            )?;
        }
    }
    Ok(())
}

pub fn run(ctx: &Context, args: &EvalArgs) -> Result<i32> {
    check_inputs(
        [&args.gold, &args.pred]
            .into_iter()
            .chain(args.compare.as_ref()),
    )?;
    let mode = if args.universal {
        DeprelMatch::UniversalOnly
    } else {
        DeprelMatch::Exact
    };
    let gold = ctx.read_treebank(&args.gold)?;
    let pred = ctx.read_treebank(&args.pred)?;
    let report = score(ctx, &gold, &pred, mode)?;
    let per_label = per_label_error_rates(&gold, &pred, args.min_gold, ErrorScope::LasErrors)?;

    let mut other = None;
    let mut tests = None;
    let mut compare_tb = None;
    if let Some(path) = &args.compare {
        let tb = ctx.read_treebank(path)?;
        let r = score(ctx, &gold, &tb, mode)?;
        tests = Some(ttests(&report, &r)?);
        other = Some(r);
        compare_tb = Some(tb);
    }

    let scope = match args.confusion {
        ConfusionScope::Label => ErrorScope::LabelOnly,
        ConfusionScope::Las => ErrorScope::LasErrors,
    };
    if let Some(path) = &args.tsv {
        let m = confusion(&gold, &pred, scope)?.row_normalized();
        let mut out = create_output(path)?;
        out.write_all(m.to_tsv().as_bytes())?;
        out.flush()?;
    }
    if let (Some(path), Some(tb)) = (&args.delta_tsv, &compare_tb) {
        let a = confusion(&gold, &pred, scope)?;
        let b = confusion(&gold, tb, scope)?;
        let mut out = create_output(path)?;
        out.write_all(confusion_delta(&a, &b).to_tsv().as_bytes())?;
        out.flush()?;
    }

    let json_to_stdout = args.json.as_deref().is_some_and(is_stdio);
    if let Some(path) = &args.json {
        let doc = JsonReport {
            las: report.las,
            uas: report.uas,
            em: report.em,
            uem: report.uem,
            upos_acc: report.upos_acc,
            xpos_acc: report.xpos_acc,
            slices: &report.slices,
            per_label_error: &per_label,
            ttest: tests,
        };
        let mut out = create_output(path)?;
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
        out.flush()?;
        tests = doc.ttest;
    }
    if !json_to_stdout {
        let mut out = create_output(std::path::Path::new("-"))?;
        print_table(
            &mut out,
            &report,
            other.as_ref(),
            &per_label,
            tests.as_ref(),
        )?;
        out.flush()?;
    }
    Ok(0)
}
