//! M2 format parsing and emission, wire-compatible with files produced by
//! the ERRANT tool family.
//!
//! A record is an `S <tokens...>` line followed by zero or more
//! `A <start> <end>|||<type>|||<correction>|||<flag>|||<flag>|||<annotator>`
//! lines. Noop edits (`A -1 -1|||noop|||-NONE-|||...`) are parsed and
//! retained so that emission round-trips byte-identically.

use super::{Edit, EditKind, M2Record, ParseError};

fn parse_a_line(line: &str, line_no: usize, sentence_len: usize) -> Result<Edit, ParseError> {
    let body = &line[2..];
    let fields: Vec<&str> = body.split("|||").collect();
    if fields.len() != 6 {
        return Err(ParseError::Malformed {
            line: line_no,
            msg: format!(
                "expected 6 |||-separated fields on A line, found {}",
                fields.len()
            ),
        });
    }
    let span: Vec<&str> = fields[0].split_whitespace().collect();
    if span.len() != 2 {
        return Err(ParseError::Malformed {
            line: line_no,
            msg: "A line span must be two integers".to_string(),
        });
    }
    let start: i64 = span[0].parse().map_err(|_| ParseError::NotAnInteger {
        line: line_no,
        what: "edit start",
        value: span[0].to_string(),
    })?;
    let end: i64 = span[1].parse().map_err(|_| ParseError::NotAnInteger {
        line: line_no,
        what: "edit end",
        value: span[1].to_string(),
    })?;
    let annotator: u32 = fields[5]
        .trim()
        .parse()
        .map_err(|_| ParseError::NotAnInteger {
            line: line_no,
            what: "annotator id",
            value: fields[5].to_string(),
        })?;

    let wire_type = fields[1];
    let correction = fields[2];

    if wire_type == "noop" {
        if start != -1 || end != -1 {
            return Err(ParseError::BadSpan {
                line: line_no,
                start,
                end,
                msg: "noop edits must use span -1 -1".to_string(),
            });
        }
        let mut edit = Edit::noop();
        edit.correction = correction.to_string();
        edit.required = fields[3].to_string();
        edit.comment = fields[4].to_string();
        edit.annotator = annotator;
        return Ok(edit);
    }

    if end < start {
        return Err(ParseError::BadSpan {
            line: line_no,
            start,
            end,
            msg: "end before start".to_string(),
        });
    }
    if start < 0 || end as usize > sentence_len {
        return Err(ParseError::BadSpan {
            line: line_no,
            start,
            end,
            msg: format!("outside sentence of {sentence_len} tokens"),
        });
    }
    let (kind, category) = match wire_type.split_once(':') {
        Some((letter, cat)) => (letter, cat),
        None => (wire_type, ""),
    };
    let kind = match kind {
        "M" => EditKind::Missing,
        "R" => EditKind::Replacement,
        "U" => EditKind::Unnecessary,
        other => {
            return Err(ParseError::Malformed {
                line: line_no,
                msg: format!("unsupported edit type {other:?}"),
            })
        }
    };
    let span_ok = match kind {
        EditKind::Missing => start == end && !correction.is_empty(),
        EditKind::Unnecessary => end > start && correction.is_empty(),
        EditKind::Replacement => end > start && !correction.is_empty(),
        EditKind::Noop => unreachable!(),
    };
    if !span_ok {
        return Err(ParseError::BadSpan {
            line: line_no,
            start,
            end,
            msg: format!(
                "span/correction inconsistent with edit type {}",
                kind.letter()
            ),
        });
    }
    Ok(Edit {
        start: start as usize,
        end: end as usize,
        kind,
        category: category.to_string(),
        correction: correction.to_string(),
        required: fields[3].to_string(),
        comment: fields[4].to_string(),
        annotator,
    })
}

/// Check that every annotator's edits are sorted by start and
/// non-overlapping (zero-width insertions may touch a following span).
fn validate_record(record: &M2Record, line_no: usize) -> Result<(), ParseError> {
    for annotator in record.annotators() {
        let mut prev_end: Option<usize> = None;
        for edit in record.edits_for(annotator) {
            if let Some(pe) = prev_end {
                if edit.start < pe {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        msg: format!(
                            "annotator {annotator} edits overlap or are out of order at span {}..{}",
                            edit.start, edit.end
                        ),
                    });
                }
            }
            prev_end = Some(edit.end.max(edit.start));
        }
    }
    Ok(())
}

/// Parse an M2 file into records, preserving annotator grouping and noop
/// edits.
pub fn parse_m2(text: &str) -> Result<Vec<M2Record>, ParseError> {
    let mut records: Vec<M2Record> = Vec::new();
    let mut record_line = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ") {
            if !records.is_empty() {
                validate_record(records.last().unwrap(), record_line)?;
            }
            record_line = line_no;
            records.push(M2Record::new(
                rest.split_whitespace().map(str::to_string).collect(),
            ));
        } else if line == "S" {
            record_line = line_no;
            records.push(M2Record::new(Vec::new()));
        } else if line.starts_with("A ") {
            let record = records
                .last_mut()
                .ok_or(ParseError::EditBeforeSentence { line: line_no })?;
            let edit = parse_a_line(line, line_no, record.original_tokens.len())?;
            record.edits.push(edit);
        } else {
            return Err(ParseError::Malformed {
                line: line_no,
                msg: format!("unrecognized M2 line: {line:?}"),
            });
        }
    }
    if let Some(last) = records.last() {
        validate_record(last, record_line)?;
    }
    Ok(records)
}

/// Emit records in the canonical form accepted by [`parse_m2`]:
/// `parse_m2(emit_m2(r)) == r`, byte-identical on canonical input.
pub fn emit_m2(records: &[M2Record]) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("S ");
        out.push_str(&record.original_tokens.join(" "));
        out.push('\n');
        for edit in &record.edits {
            let (start, end) = if edit.is_noop() {
                (-1i64, -1i64)
            } else {
                (edit.start as i64, edit.end as i64)
            };
            out.push_str(&format!(
                "A {} {}|||{}|||{}|||{}|||{}|||{}\n",
                start,
                end,
                edit.wire_type(),
                edit.correction,
                edit.required,
                edit.comment,
                edit.annotator
            ));
        }
    }
    out
}
