//! CoNLL-U-style parsing and emission.
//!
//! Blocks of 10-column tab-separated token lines, separated by blank lines.
//! Recognized comments: `# sent_id = ...`, `# doc_id = ...`, and (for the
//! parallel format) `# pair_id = ...` / `# side = source|target`. The
//! coreference cluster id rides in the MISC column as `Coref=<int>`.

use super::{AnnotatedSentence, Feats, ParallelPair, ParseError, Token};

/// One raw block: comments plus token lines, with the line number of its
/// first line for error reporting.
struct Block {
    comments: Vec<(String, String)>,
    tokens: Vec<Token>,
    first_line: usize,
}

impl Block {
    fn comment(&self, key: &str) -> Option<&str> {
        self.comments
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn parse_token_line(
    line: &str,
    line_no: usize,
    expected_index: usize,
) -> Result<Token, ParseError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(ParseError::ColumnCount {
            line: line_no,
            found: cols.len(),
        });
    }
    let index: usize = cols[0].parse().map_err(|_| ParseError::NotAnInteger {
        line: line_no,
        what: "token index",
        value: cols[0].to_string(),
    })?;
    if index != expected_index {
        return Err(ParseError::TokenIndex {
            line: line_no,
            expected: expected_index,
            found: index,
        });
    }
    let head: usize = cols[6].parse().map_err(|_| ParseError::NotAnInteger {
        line: line_no,
        what: "head",
        value: cols[6].to_string(),
    })?;

    let mut feats = Feats::new();
    if cols[5] != "_" {
        for item in cols[5].split('|') {
            match item.split_once('=') {
                Some((k, v)) => feats.set(k, v),
                None => feats.set(item, ""),
            };
        }
    }

    let mut coref = None;
    let mut misc_extra = Vec::new();
    if cols[9] != "_" {
        for item in cols[9].split('|') {
            if let Some(value) = item.strip_prefix("Coref=") {
                let id: u32 = value.parse().map_err(|_| ParseError::NotAnInteger {
                    line: line_no,
                    what: "coref cluster id",
                    value: value.to_string(),
                })?;
                coref = Some(id);
            } else {
                misc_extra.push(item.to_string());
            }
        }
    }

    Ok(Token {
        index,
        form: cols[1].to_string(),
        lemma: cols[2].to_string(),
        upos: cols[3].to_string(),
        xpos: cols[4].to_string(),
        feats,
        head,
        deprel: cols[7].to_string(),
        deps: cols[8].to_string(),
        coref,
        misc_extra,
    })
}

fn parse_blocks(text: &str) -> Result<Vec<Block>, ParseError> {
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(block) = current.take() {
                blocks.push(block);
            }
            continue;
        }
        let block = current.get_or_insert_with(|| Block {
            comments: Vec::new(),
            tokens: Vec::new(),
            first_line: line_no,
        });
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                block
                    .comments
                    .push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let token = parse_token_line(line, line_no, block.tokens.len() + 1)?;
        block.tokens.push(token);
    }
    if let Some(block) = current.take() {
        blocks.push(block);
    }
    Ok(blocks)
}

fn block_to_sentence(block: &Block) -> Result<AnnotatedSentence, ParseError> {
    let sentence = AnnotatedSentence {
        id: block.comment("sent_id").unwrap_or("").to_string(),
        doc_id: block.comment("doc_id").map(str::to_string),
        tokens: block.tokens.clone(),
    };
    if sentence.tokens.is_empty() {
        return Err(ParseError::Malformed {
            line: block.first_line,
            msg: "block has no token lines".to_string(),
        });
    }
    sentence.validate()?;
    Ok(sentence)
}

/// Parse a CoNLL-U-style file into annotated sentences.
pub fn parse_conllu(text: &str) -> Result<Vec<AnnotatedSentence>, ParseError> {
    parse_blocks(text)?.iter().map(block_to_sentence).collect()
}

fn emit_token(token: &Token, out: &mut String) {
    let feats = if token.feats.is_empty() {
        "_".to_string()
    } else {
        token
            .feats
            .iter()
            .map(|(k, v)| {
                if v.is_empty() {
                    k.to_string()
                } else {
                    format!("{k}={v}")
                }
            })
            .collect::<Vec<_>>()
            .join("|")
    };
    let mut misc_items: Vec<String> = token.misc_extra.clone();
    if let Some(c) = token.coref {
        misc_items.push(format!("Coref={c}"));
    }
    let misc = if misc_items.is_empty() {
        "_".to_string()
    } else {
        misc_items.join("|")
    };
    out.push_str(&format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        token.index,
        token.form,
        token.lemma,
        token.upos,
        token.xpos,
        feats,
        token.head,
        token.deprel,
        token.deps,
        misc
    ));
}

fn emit_sentence(sentence: &AnnotatedSentence, extra_comments: &[(&str, &str)], out: &mut String) {
    if !sentence.id.is_empty() {
        out.push_str(&format!("# sent_id = {}\n", sentence.id));
    }
    if let Some(doc) = &sentence.doc_id {
        out.push_str(&format!("# doc_id = {doc}\n"));
    }
    for (k, v) in extra_comments {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    for token in &sentence.tokens {
        emit_token(token, out);
    }
}

/// Emit sentences in the canonical form accepted by [`parse_conllu`].
pub fn emit_conllu(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        emit_sentence(sentence, &[], &mut out);
    }
    out
}

/// Parse a parallel corpus: each record is two adjacent annotated blocks
/// tagged `# side = source` / `# side = target` sharing a `# pair_id`.
pub fn parse_parallel(text: &str) -> Result<Vec<ParallelPair>, ParseError> {
    let blocks = parse_blocks(text)?;
    let mut pairs = Vec::new();
    let mut iter = blocks.iter().peekable();
    while let Some(block) = iter.next() {
        let pair_id = block
            .comment("pair_id")
            .ok_or_else(|| ParseError::Malformed {
                line: block.first_line,
                msg: "missing # pair_id comment".to_string(),
            })?
            .to_string();
        if pair_id.is_empty() {
            return Err(ParseError::Malformed {
                line: block.first_line,
                msg: "empty pair_id".to_string(),
            });
        }
        if block.comment("side") != Some("source") {
            return Err(ParseError::UnpairedSide(pair_id));
        }
        let counterpart = match iter.peek() {
            Some(next)
                if next.comment("pair_id") == Some(pair_id.as_str())
                    && next.comment("side") == Some("target") =>
            {
                iter.next().unwrap()
            }
            _ => return Err(ParseError::UnpairedSide(pair_id)),
        };
        let source = block_to_sentence(block)?;
        let target = block_to_sentence(counterpart)?;
        let doc_id = source.doc_id.clone();
        pairs.push(ParallelPair {
            id: pair_id,
            doc_id,
            source,
            target,
        });
    }
    Ok(pairs)
}

/// Emit a parallel corpus in the canonical form accepted by
/// [`parse_parallel`].
pub fn emit_parallel(pairs: &[ParallelPair]) -> String {
    let mut out = String::new();
    for (i, pair) in pairs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        emit_sentence(
            &pair.source,
            &[("pair_id", &pair.id), ("side", "source")],
            &mut out,
        );
        out.push('\n');
        emit_sentence(
            &pair.target,
            &[("pair_id", &pair.id), ("side", "target")],
            &mut out,
        );
    }
    out
}
