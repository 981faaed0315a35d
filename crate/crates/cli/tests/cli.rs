use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cait::conllu::{read_conllu_str, write_conllu_string, ReadOptions, Sentence, Token, Treebank};
use cait_testkit::{
    cds_treebank, cxn_fixture_treebank, cxn_gold_tsv, exemplars, malformed, nn_corpus, poss_corpus,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn cait(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cait"))
        .args(args)
        .env_remove("CAIT_LEXICON")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tb(dir: &Path, name: &str, tb: &Treebank) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, write_conllu_string(tb)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_self_comparison_is_perfect() {
    let dir = TempDir::new().unwrap();
    let g = write_tb(dir.path(), "g.conllu", &cds_treebank(50, 3));
    let out = cait(&["eval", "--gold", s(&g), "--pred", s(&g), "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["las", "uas", "em", "uem", "upos_acc"] {
        assert_eq!(v[key].as_f64(), Some(100.0), "{key}");
    }
    assert!(v["ttest"].is_null());
    assert!(v["slices"]["CS"].is_object());
}

#[test]
fn eval_compare_reports_ttest_and_tables() {
    let dir = TempDir::new().unwrap();
    let gold = cds_treebank(60, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let noisy = |rate: f64, rng: &mut ChaCha8Rng| {
        Treebank::new(
            gold.sentences
                .iter()
                .map(|x| cait_testkit::perturb(x, rate, rng))
                .collect(),
        )
    };
    let a = noisy(0.1, &mut rng);
    let b = noisy(0.3, &mut rng);
    let g = write_tb(dir.path(), "g.conllu", &gold);
    let pa = write_tb(dir.path(), "a.conllu", &a);
    let pb = write_tb(dir.path(), "b.conllu", &b);
    let json = dir.path().join("r.json");
    let tsv = dir.path().join("c.tsv");
    let delta = dir.path().join("d.tsv");
    let out = cait(&[
        "--lenient",
        "eval",
        "--gold",
        s(&g),
        "--pred",
        s(&pa),
        "--compare",
        s(&pb),
        "--json",
        s(&json),
        "--tsv",
        s(&tsv),
        "--delta-tsv",
        s(&delta),
        "--min-gold",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = stdout(&out);
    assert!(table.contains("paired t-test"));
    assert!(table.starts_with("metric\tpred\tcompare\n"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["ttest"]["las"]["t_stat"].as_f64().unwrap() > 0.0);
    assert!(v["per_label_error"]
        .as_object()
        .unwrap()
        .contains_key("nsubj"));
    let c = std::fs::read_to_string(&tsv).unwrap();
    for row in c.lines().skip(1) {
        let sum: f64 = row
            .split('\t')
            .skip(1)
            .map(|x| x.parse::<f64>().unwrap())
            .sum();
        assert!(sum == 0.0 || (sum - 1.0).abs() < 1e-2, "row {row}");
    }
    assert!(std::fs::metadata(&delta).unwrap().len() > 0);
}

#[test]
fn delta_tsv_requires_compare() {
    let dir = TempDir::new().unwrap();
    let g = write_tb(dir.path(), "g.conllu", &cds_treebank(5, 1));
    let out = cait(&[
        "eval",
        "--gold",
        s(&g),
        "--pred",
        s(&g),
        "--delta-tsv",
        "x.tsv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cait(&["eval", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(cait(&["no-such-command"]).status.code(), Some(2));
    let out = cait(&[
        "eval",
        "--gold",
        "/nonexistent/g.conllu",
        "--pred",
        "/nonexistent/p",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
    assert_eq!(
        cait(&["tag-cxn", "--input", "/nonexistent"]).status.code(),
        Some(2)
    );
    assert_eq!(cait(&["--help"]).status.code(), Some(0));
    assert_eq!(cait(&["--version"]).status.code(), Some(0));
}

#[test]
fn malformed_input_is_a_runtime_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.conllu");
    std::fs::write(&p, "1\tx\t_\tX\t_\t_\t1\troot\t_\t_\n\n").unwrap();
    let out = cait(&["tag-cxn", "--input", s(&p)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn tag_cxn_labels_the_exemplars() {
    let dir = TempDir::new().unwrap();
    let ex = exemplars();
    let tb = Treebank::new(ex.iter().map(|(x, _)| x.clone()).collect());
    let p = write_tb(dir.path(), "ex.conllu", &tb);
    for backend in ["ud", "pos"] {
        let out = cait(&["tag-cxn", "--input", s(&p), "--backend", backend]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), ex.len());
        for (line, (sent, label)) in lines.iter().zip(&ex) {
            let cols: Vec<&str> = line.split('\t').collect();
            assert_eq!(cols[0], sent.sent_id());
            assert_eq!(cols[1], label.as_str(), "{backend} {line}");
            assert_eq!(cols[3], backend);
        }
    }
}

#[test]
fn tag_cxn_gold_summary() {
    let dir = TempDir::new().unwrap();
    let p = write_tb(dir.path(), "fx.conllu", &cxn_fixture_treebank());
    let gold = dir.path().join("gold.tsv");
    std::fs::write(&gold, cxn_gold_tsv()).unwrap();
    let tagged = dir.path().join("tagged.tsv");
    let out = cait(&[
        "tag-cxn",
        "--input",
        s(&p),
        "--gold",
        s(&gold),
        "--out",
        s(&tagged),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("accuracy\t100.00\t100/100\n"));
    assert_eq!(
        std::fs::read_to_string(&tagged).unwrap().lines().count(),
        100
    );
}

#[test]
fn jobs_do_not_change_output() {
    let dir = TempDir::new().unwrap();
    let p = write_tb(dir.path(), "cds.conllu", &cds_treebank(400, 11));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pred = Treebank::new(
        read_conllu_str(
            &std::fs::read_to_string(&p).unwrap(),
            &ReadOptions::strict(),
        )
        .unwrap()
        .sentences
        .iter()
        .map(|x| cait_testkit::perturb(x, 0.2, &mut rng))
        .collect(),
    );
    let q = write_tb(dir.path(), "pred.conllu", &pred);
    for args in [
        vec!["tag-cxn", "--input", s(&p)],
        vec!["tag-cxn", "--input", s(&p), "--backend", "pos"],
        vec![
            "--lenient",
            "eval",
            "--gold",
            s(&p),
            "--pred",
            s(&q),
            "--json",
            "-",
        ],
        vec!["case-study", "--input", s(&p)],
    ] {
        let one = cait(&[&["--jobs", "1"], args.as_slice()].concat());
        let eight = cait(&[&["--jobs", "8"], args.as_slice()].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, eight.stdout, "{args:?}");
    }
}

#[test]
fn lexicon_flag_beats_environment() {
    let dir = TempDir::new().unwrap();
    let tb = Treebank::new(exemplars().into_iter().map(|(x, _)| x).collect());
    let p = write_tb(dir.path(), "ex.conllu", &tb);
    let env_lex = dir.path().join("env.txt");
    std::fs::write(&env_lex, "I love you .\n").unwrap();
    let flag_lex = dir.path().join("flag.txt");
    std::fs::write(&flag_lex, "she laughed .\n").unwrap();
    let label_of = |out: &Output, id: &str| -> String {
        stdout(out)
            .lines()
            .find(|l| l.starts_with(&format!("{id}\t")))
            .unwrap()
            .split('\t')
            .nth(1)
            .unwrap()
            .to_string()
    };
    let run = |extra: &[&str], env: bool| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_cait"));
        c.args(["tag-cxn", "--input", s(&p)]).args(extra);
        if env {
            c.env("CAIT_LEXICON", &env_lex);
        } else {
            c.env_remove("CAIT_LEXICON");
        }
        c.output().unwrap()
    };
    let plain = run(&[], false);
    assert_eq!(label_of(&plain, "ex-spt"), "SPT");
    let from_env = run(&[], true);
    assert_eq!(label_of(&from_env, "ex-spt"), "FOR");
    assert_eq!(label_of(&from_env, "ex-spi"), "SPI");
    let flagged = run(&["--lexicon", s(&flag_lex)], true);
    assert_eq!(label_of(&flagged, "ex-spt"), "SPT");
    assert_eq!(label_of(&flagged, "ex-spi"), "FOR");
}

#[test]
fn lint_then_fix_then_relint() {
    let dir = TempDir::new().unwrap();
    let mut both = poss_corpus().sentences;
    both.extend(nn_corpus().sentences);
    let p = write_tb(dir.path(), "lint.conllu", &Treebank::new(both));
    let fixed = dir.path().join("fixed.conllu");
    let tsv = dir.path().join("findings.tsv");
    let out = cait(&[
        "lint",
        "--input",
        s(&p),
        "--fix",
        s(&fixed),
        "--tsv",
        s(&tsv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "rule\tcandidates\tflagged\trate\nPOSS_AS_DET\t100\t7\t0.0700\nNN_AS_NMOD\t100\t5\t0.0500\n"
    );
    assert_eq!(std::fs::read_to_string(&tsv).unwrap().lines().count(), 13);
    let again = cait(&["lint", "--input", s(&fixed)]);
    assert!(stdout(&again).contains("POSS_AS_DET\t100\t0\t0.0000"));
    assert!(stdout(&again).contains("NN_AS_NMOD\t100\t0\t0.0000"));
    let one = cait(&["lint", "--input", s(&p), "--rule", "nn-as-nmod"]);
    assert_eq!(stdout(&one).lines().count(), 2);
}

#[test]
fn normalize_then_downstream() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bad = Treebank::new(
        (0..50)
            .map(|i| malformed(&format!("m{i}"), &mut rng))
            .collect(),
    );
    let p = write_tb(dir.path(), "bad.conllu", &bad);
    assert_eq!(cait(&["validate", "--input", s(&p)]).status.code(), Some(1));
    assert_eq!(cait(&["tag-cxn", "--input", s(&p)]).status.code(), Some(1));

    let fixed = dir.path().join("fixed.conllu");
    let out = cait(&[
        "normalize",
        "--input",
        s(&p),
        "--out",
        s(&fixed),
        "--clearnlp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = cait(&["validate", "--input", s(&fixed)]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("invalid\t0"));
    assert_eq!(
        cait(&["tag-cxn", "--input", s(&fixed)]).status.code(),
        Some(0)
    );
    let e = cait(&[
        "eval",
        "--gold",
        s(&fixed),
        "--pred",
        s(&fixed),
        "--json",
        "-",
    ]);
    assert_eq!(e.status.code(), Some(0));
}

#[test]
fn normalize_applies_label_map() {
    let dir = TempDir::new().unwrap();
    let tb = Treebank::new(vec![Sentence::new(
        "n1",
        vec![
            Token::new(1, "go", 0, "ROOT").with_upos("VERB"),
            Token::new(2, "home", 1, "npadvmod").with_upos("NOUN"),
        ],
    )]);
    let p = write_tb(dir.path(), "n.conllu", &tb);
    let map = dir.path().join("map.tsv");
    std::fs::write(&map, "ROOT\troot\nnpadvmod\tobl:npmod\n").unwrap();
    let out = cait(&["normalize", "--input", s(&p), "--label-map", s(&map)]);
    assert_eq!(out.status.code(), Some(0));
    let back = read_conllu_str(&stdout(&out), &ReadOptions::strict()).unwrap();
    let rels: Vec<&str> = back.sentences[0]
        .tokens
        .iter()
        .map(|t| t.deprel.as_str())
        .collect();
    assert_eq!(rels, ["root", "obl:npmod"]);
}

#[test]
fn train_parse_tag_round_trip() {
    let dir = TempDir::new().unwrap();
    let train = write_tb(dir.path(), "train.conllu", &cds_treebank(300, 21));
    let test = write_tb(dir.path(), "test.conllu", &cds_treebank(60, 22));
    let pm = dir.path().join("parser.model");
    let tm = dir.path().join("tagger.model");
    let ok = |o: Output| {
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        o
    };
    ok(cait(&[
        "train",
        "--input",
        s(&train),
        "--model",
        s(&pm),
        "--epochs",
        "3",
    ]));
    ok(cait(&[
        "train",
        "--kind",
        "tagger",
        "--input",
        s(&train),
        "--model",
        s(&tm),
        "--epochs",
        "3",
    ]));
    let parsed = dir.path().join("parsed.conllu");
    ok(cait(&[
        "parse",
        "--input",
        s(&test),
        "--model",
        s(&pm),
        "--out",
        s(&parsed),
    ]));
    let tagged = dir.path().join("tagged.conllu");
    ok(cait(&[
        "tag",
        "--input",
        s(&test),
        "--model",
        s(&tm),
        "--out",
        s(&tagged),
    ]));
    assert_eq!(
        cait(&["validate", "--input", s(&parsed)]).status.code(),
        Some(0)
    );

    let e = ok(cait(&[
        "eval",
        "--gold",
        s(&test),
        "--pred",
        s(&parsed),
        "--json",
        "-",
    ]));
    let v: serde_json::Value = serde_json::from_slice(&e.stdout).unwrap();
    assert!(v["las"].as_f64().unwrap() > 50.0, "{}", v["las"]);
    let e = ok(cait(&[
        "eval",
        "--gold",
        s(&test),
        "--pred",
        s(&tagged),
        "--json",
        "-",
    ]));
    let v: serde_json::Value = serde_json::from_slice(&e.stdout).unwrap();
    assert!(v["upos_acc"].as_f64().unwrap() > 90.0);

    // A tagger model is not a parser model.
    assert_eq!(
        cait(&["parse", "--input", s(&test), "--model", s(&tm)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn case_study_csv() {
    let dir = TempDir::new().unwrap();
    let p = write_tb(dir.path(), "cds.conllu", &cds_treebank(300, 8));
    let out = cait(&["case-study", "--input", s(&p), "--width", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("bin_start,speaker,label,count,proportion,n_utterances")
    );
    let mut total = std::collections::BTreeMap::<(String, String), f64>::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].parse::<u32>().unwrap() % 6, 0);
        assert!(!["FOR", "FRA", "X"].contains(&cols[2]));
        *total.entry((cols[0].into(), cols[1].into())).or_default() +=
            cols[4].parse::<f64>().unwrap();
    }
    assert!(!total.is_empty());
    for (k, v) in total {
        assert!((v - 1.0).abs() < 1e-3, "{k:?} sums to {v}");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("binned\t300"));
    assert_eq!(
        cait(&["case-study", "--input", s(&p), "--width", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_predictions_need_lenient() {
    let dir = TempDir::new().unwrap();
    let gold = cds_treebank(30, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pred = Treebank::new(
        gold.sentences
            .iter()
            .map(|x| cait_testkit::perturb(x, 0.5, &mut rng))
            .collect(),
    );
    let g = write_tb(dir.path(), "g.conllu", &gold);
    let p = write_tb(dir.path(), "p.conllu", &pred);
    let strict = cait(&["eval", "--gold", s(&g), "--pred", s(&p)]);
    assert_eq!(strict.status.code(), Some(1));
    let lenient = cait(&["--lenient", "eval", "--gold", s(&g), "--pred", s(&p)]);
    assert_eq!(lenient.status.code(), Some(0));
}
