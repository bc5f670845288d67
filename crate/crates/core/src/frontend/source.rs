use std::path::Path;
use std::sync::Arc;

use crate::diagnostics::{path_arc, SourceLocation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Passthrough,
    Directive,
}

/// One physical line. `text` excludes the terminator, `eol` holds it
/// (`"\n"`, `"\r\n"` or `""` for an unterminated last line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLine {
    pub number: usize,
    /// Byte offset of the first byte of `text` in the original input.
    pub offset: usize,
    pub text: String,
    pub eol: String,
    pub kind: LineKind,
}

impl SourceLine {
    pub fn is_directive(&self) -> bool {
        self.kind == LineKind::Directive
    }

    /// Length of the line in characters, used to bound diagnostic columns.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: Arc<Path>,
    pub lines: Vec<SourceLine>,
}

impl SourceUnit {
    pub fn location(&self, line: usize, column: usize) -> SourceLocation {
        SourceLocation::new(self.path.clone(), line, column)
    }

    /// Concatenates every line with its terminator; equals the scanned input.
    pub fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.lines.iter().map(|l| l.text.len() + 2).sum());
        for line in &self.lines {
            out.push_str(&line.text);
            out.push_str(&line.eol);
        }
        out
    }

    pub fn directive_lines(&self) -> impl Iterator<Item = &SourceLine> {
        self.lines.iter().filter(|l| l.is_directive())
    }

    pub fn passthrough_lines(&self) -> impl Iterator<Item = &SourceLine> {
        self.lines.iter().filter(|l| !l.is_directive())
    }

    pub fn line(&self, number: usize) -> Option<&SourceLine> {
        number.checked_sub(1).and_then(|i| self.lines.get(i))
    }
}

/// Splits `text` into lines and classifies each one.
pub fn scan_source(text: &str, path: &Path) -> SourceUnit {
    let mut lines = Vec::new();
    let mut offset = 0;
    for (index, raw) in text.split_inclusive('\n').enumerate() {
        let (body, eol) = if let Some(body) = raw.strip_suffix("\r\n") {
            (body, "\r\n")
        } else if let Some(body) = raw.strip_suffix('\n') {
            (body, "\n")
        } else {
            (raw, "")
        };
        let kind = if directive_body(body).is_some() {
            LineKind::Directive
        } else {
            LineKind::Passthrough
        };
        lines.push(SourceLine {
            number: index + 1,
            offset,
            text: body.to_string(),
            eol: eol.to_string(),
            kind,
        });
        offset += raw.len();
    }
    SourceUnit {
        path: path_arc(path),
        lines,
    }
}

fn is_blank(c: char) -> bool {
    c == ' ' || c == '\t'
}

/// If `line` is a `#pragma compar` directive, returns the byte offset where
/// the text after the `compar` keyword begins.
///
/// Accepted prefix: optional blanks, `#`, optional blanks, `pragma`, one or
/// more blanks, `compar`, then a blank or end of line.
pub(crate) fn directive_body(line: &str) -> Option<usize> {
    let rest = line.trim_start_matches(is_blank);
    let rest = rest.strip_prefix('#')?;
    let rest = rest.trim_start_matches(is_blank);
    let rest = rest.strip_prefix("pragma")?;
    let after_pragma = rest.trim_start_matches(is_blank);
    if after_pragma.len() == rest.len() {
        return None;
    }
    let rest = after_pragma.strip_prefix("compar")?;
    match rest.chars().next() {
        None => Some(line.len()),
        Some(c) if is_blank(c) => Some(line.len() - rest.len()),
        Some(_) => None,
    }
}
