use std::io::{self, Write};

use super::{Sentence, Treebank};

/// Write a treebank. Every sentence, including the last, is followed by
/// exactly one blank line; an empty treebank writes nothing.
pub fn write_conllu<W: Write>(treebank: &Treebank, mut sink: W) -> io::Result<()> {
    for sentence in &treebank.sentences {
        write_sentence(sentence, &mut sink)?;
    }
    sink.flush()
}

pub fn write_conllu_string(treebank: &Treebank) -> String {
    let mut buf = Vec::new();
    write_conllu(treebank, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CoNLL-U output is UTF-8")
}

pub fn write_sentence<W: Write>(sentence: &Sentence, sink: &mut W) -> io::Result<()> {
    for comment in sentence.comments() {
        writeln!(sink, "{}", comment)?;
    }
    write_empty_nodes(sentence, 0, sink)?;
    for (pos, token) in sentence.tokens.iter().enumerate() {
        let id = pos + 1;
        for range in sentence.mwt.iter().filter(|r| r.start == id) {
            writeln!(
                sink,
                "{}-{}\t{}\t_\t_\t_\t_\t_\t_\t_\t{}",
                range.start, range.end, range.form, range.misc
            )?;
        }
        writeln!(
            sink,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            token.id,
            token.form,
            token.lemma,
            token.upos,
            token.xpos,
            token.feats,
            token.head,
            token.deprel,
            token.deps,
            token.misc
        )?;
        write_empty_nodes(sentence, id, sink)?;
    }
    writeln!(sink)
}

fn write_empty_nodes<W: Write>(sentence: &Sentence, major: usize, sink: &mut W) -> io::Result<()> {
    let mut nodes: Vec<_> = sentence
        .empty_nodes
        .iter()
        .filter(|n| n.major == major)
        .collect();
    nodes.sort_by_key(|n| n.minor);
    for node in nodes {
        writeln!(sink, "{}", node.line)?;
    }
    Ok(())
}
