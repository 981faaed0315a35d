use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};

use cait::conllu::write_conllu;
use cait::lint::{apply_fixes, lint, LintFinding, LintRule};

use crate::io::{check_inputs, create_output, Context};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    All,
    /// Possessive pronouns labelled det.
    PossAsDet,
    /// Noun-noun premodifiers labelled nmod.
    NnAsNmod,
}

#[derive(Args, Debug)]
pub struct LintArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = RuleArg::All)]
    rule: RuleArg,
    /// Write a copy with every finding relabelled as suggested.
    #[arg(long)]
    fix: Option<PathBuf>,
    /// Write the findings as TSV.
    #[arg(long)]
    tsv: Option<PathBuf>,
}

pub fn run(ctx: &Context, args: &LintArgs) -> Result<i32> {
    check_inputs([&args.input])?;
    let tb = ctx.read_treebank(&args.input)?;
    let rules: Vec<LintRule> = match args.rule {
        RuleArg::All => LintRule::ALL.to_vec(),
        RuleArg::PossAsDet => vec![LintRule::PossAsDet],
        RuleArg::NnAsNmod => vec![LintRule::NnAsNmod],
    };
    let reports: Vec<_> = rules.iter().map(|r| lint(&tb, *r)).collect();
    let mut findings: Vec<LintFinding> = reports.iter().flat_map(|r| r.findings.clone()).collect();
    findings.sort_by(|a, b| (&a.sent_id, a.token_id).cmp(&(&b.sent_id, b.token_id)));

    if let Some(path) = &args.tsv {
        let mut out = create_output(path)?;
        writeln!(out, "{}", LintFinding::TSV_HEADER)?;
        for f in &findings {
            writeln!(out, "{}", f.to_tsv())?;
        }
        out.flush()?;
    }
    if let Some(path) = &args.fix {
        let fixed = apply_fixes(&tb, &findings);
        let mut out = create_output(path)?;
        write_conllu(&fixed, &mut out)?;
        out.flush()?;
    }

    let to_stdout = |p: &Option<PathBuf>| p.as_ref().is_some_and(|p| crate::io::is_stdio(p));
    let mut summary = String::from("rule\tcandidates\tflagged\trate\n");
    for r in &reports {
        summary.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.rule,
            r.n_candidates,
            r.n_flagged(),
            r.rate
                .map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
        ));
    }
    if to_stdout(&args.tsv) || to_stdout(&args.fix) {
        eprint!("{summary}");
    } else {
        print!("{summary}");
    }
    Ok(0)
}
