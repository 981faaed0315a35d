use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context as _, Result};
use cait::conllu::{read_conllu, ReadOptions, RoleMap, Strictness, Treebank};
use cait::cxntag::FormulaicLexicon;

/// Bad invocation: maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// Fail with a usage error unless every path is `-` or an existing file.
pub fn check_inputs<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> Result<()> {
    for p in paths {
        if !is_stdio(p) && !p.is_file() {
            return Err(UsageError(format!("input file {} does not exist", p.display())).into());
        }
    }
    Ok(())
}

pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if is_stdio(path) {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

pub fn create_output(path: &Path) -> Result<Box<dyn Write>> {
    if is_stdio(path) {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(Box::new(BufWriter::new(f)))
}

/// Options shared by every subcommand.
pub struct Context {
    pub pool: rayon::ThreadPool,
    pub lenient: bool,
    pub roles: RoleMap,
}

impl Context {
    pub fn read_options(&self, lenient: bool) -> ReadOptions {
        ReadOptions {
            strictness: if lenient || self.lenient {
                Strictness::Lenient
            } else {
                Strictness::Strict
            },
            roles: self.roles.clone(),
        }
    }

    pub fn read_treebank(&self, path: &Path) -> Result<Treebank> {
        self.read_treebank_with(path, false)
    }

    pub fn read_treebank_with(&self, path: &Path, lenient: bool) -> Result<Treebank> {
        let source: Box<dyn Read> = open_input(path)?;
        read_conllu(source, &self.read_options(lenient))
            .with_context(|| format!("reading {}", path.display()))
    }
}

pub fn load_roles(path: Option<&PathBuf>) -> Result<RoleMap> {
    match path {
        None => Ok(RoleMap::default()),
        Some(p) => {
            check_inputs([p])?;
            RoleMap::from_tsv(open_input(p)?).with_context(|| format!("reading {}", p.display()))
        }
    }
}

/// `--lexicon` (or `CAIT_LEXICON`) when given, else the bundled list.
pub fn load_lexicon(path: Option<&PathBuf>) -> Result<FormulaicLexicon> {
    match path {
        None => Ok(FormulaicLexicon::builtin()),
        Some(p) => {
            check_inputs([p])?;
            let lex = FormulaicLexicon::from_reader(open_input(p)?)
                .with_context(|| format!("reading lexicon {}", p.display()))?;
            log::info!(
                "loaded {} formulaic patterns from {}",
                lex.len(),
                p.display()
            );
            Ok(lex)
        }
    }
}

/// Two decimals, as in the printed tables; `-` for a missing value.
pub fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"))
}
