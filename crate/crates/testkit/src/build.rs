use cait::conllu::{Sentence, Token};

/// Accumulates tokens of one sentence; heads are given as 1-based ids.
#[derive(Default)]
pub(crate) struct Builder {
    tokens: Vec<Token>,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    /// Next token id.
    pub fn next_id(&self) -> usize {
        self.tokens.len() + 1
    }

    /// Append a token and return its id. `head` may point forward; call
    /// [`Builder::set_head`] later when it is not yet known.
    pub fn push(
        &mut self,
        form: &str,
        lemma: &str,
        upos: &str,
        feats: &str,
        head: usize,
        rel: &str,
    ) -> usize {
        let id = self.next_id();
        let mut t = Token::new(id, form, head, rel)
            .with_upos(upos)
            .with_lemma(lemma);
        if !feats.is_empty() {
            t = t.with_feats(feats);
        }
        t.xpos = xpos_for(upos, feats, form);
        self.tokens.push(t);
        id
    }

    pub fn set_head(&mut self, id: usize, head: usize) {
        self.tokens[id - 1].head = head;
    }

    pub fn finish(self, sent_id: &str) -> Sentence {
        let mut s = Sentence::new(sent_id, self.tokens);
        let text = s.surface();
        s.set_text(&text);
        s
    }
}

/// A plausible Penn tag, so generated data carries both tag layers.
fn xpos_for(upos: &str, feats: &str, form: &str) -> String {
    let has = |f: &str| feats.split('|').any(|x| x == f);
    match upos {
        "NOUN" if has("Number=Plur") => "NNS",
        "NOUN" => "NN",
        "PROPN" => "NNP",
        "PRON" if has("Poss=Yes") => "PRP$",
        "PRON" if has("PronType=Int") => "WP",
        "PRON" => "PRP",
        "DET" => "DT",
        "ADJ" => "JJ",
        "ADV" if has("PronType=Int") => "WRB",
        "ADV" => "RB",
        "ADP" => "IN",
        "AUX" if form.contains("'") => "VBZ",
        "AUX" => "MD",
        "VERB" if has("Mood=Imp") || has("VerbForm=Inf") => "VB",
        "VERB" if has("VerbForm=Ger") || (has("VerbForm=Part") && has("Tense=Pres")) => "VBG",
        "VERB" if has("VerbForm=Part") => "VBN",
        "VERB" if has("Tense=Past") => "VBD",
        "VERB" if has("Person=3") => "VBZ",
        "VERB" => "VBP",
        "PART" => "RB",
        "INTJ" => "UH",
        "CCONJ" => "CC",
        "SCONJ" => "IN",
        "PUNCT" => ".",
        _ => "XX",
    }
    .to_string()
}

/// Parse the compact token notation used by the fixtures:
/// `form/UPOS/head/deprel[/lemma[/feats]]`, tokens separated by spaces.
pub fn parse_compact(sent_id: &str, spec: &str) -> Sentence {
    let tokens = spec
        .split_whitespace()
        .enumerate()
        .map(|(i, tok)| {
            let parts: Vec<&str> = tok.split('/').collect();
            assert!(parts.len() >= 4, "bad compact token {tok:?} in {sent_id}");
            let head = parts[2]
                .parse()
                .unwrap_or_else(|_| panic!("bad head in {tok:?} ({sent_id})"));
            let mut t = Token::new(i + 1, parts[0], head, parts[3]).with_upos(parts[1]);
            if let Some(l) = parts.get(4).filter(|l| !l.is_empty()) {
                t = t.with_lemma(l);
            }
            if let Some(f) = parts.get(5).filter(|f| !f.is_empty()) {
                t = t.with_feats(f);
            }
            t
        })
        .collect();
    Sentence::new(sent_id, tokens)
}
