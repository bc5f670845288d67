use std::fmt;

use crate::diagnostics::{Code, Diagnostic, SourceLocation};

use super::source::directive_body;

/// Directive and clause keywords. Matched case-insensitively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    MethodDeclare,
    Parameter,
    Include,
    Initialize,
    Terminate,
    Interface,
    Target,
    Name,
    Type,
    Size,
    AccessMode,
}

impl Keyword {
    pub const ALL: [Keyword; 11] = [
        Keyword::MethodDeclare,
        Keyword::Parameter,
        Keyword::Include,
        Keyword::Initialize,
        Keyword::Terminate,
        Keyword::Interface,
        Keyword::Target,
        Keyword::Name,
        Keyword::Type,
        Keyword::Size,
        Keyword::AccessMode,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::MethodDeclare => "method_declare",
            Keyword::Parameter => "parameter",
            Keyword::Include => "include",
            Keyword::Initialize => "initialize",
            Keyword::Terminate => "terminate",
            Keyword::Interface => "interface",
            Keyword::Target => "target",
            Keyword::Name => "name",
            Keyword::Type => "type",
            Keyword::Size => "size",
            Keyword::AccessMode => "access_mode",
        }
    }

    pub fn lookup(word: &str) -> Option<Keyword> {
        Keyword::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(word))
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident,
    Int(u64),
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text exactly as written.
    pub text: String,
    /// 1-based character column.
    pub column: usize,
}

impl Token {
    /// Identifier-like tokens usable as clause arguments. Keywords count,
    /// so `name(size)` is legal.
    pub fn is_word(&self) -> bool {
        matches!(self.kind, TokenKind::Keyword(_) | TokenKind::Ident)
    }
}

/// Tokenizes the part of a directive line after `#pragma compar`.
///
/// `location` is the location of the line; the returned diagnostic on
/// failure points at the offending column.
pub fn tokenize_directive(line: &str, location: &SourceLocation) -> Result<Vec<Token>, Diagnostic> {
    let start = directive_body(line).unwrap_or(0);
    let base_column = line[..start].chars().count() + 1;
    let body = &line[start..];

    let mut tokens = Vec::new();
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = base_column + i;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '(' | ')' | ',' => {
                let kind = match c {
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    _ => TokenKind::Comma,
                };
                tokens.push(Token {
                    kind,
                    text: c.to_string(),
                    column,
                });
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let begin = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[begin..i].iter().collect();
                let kind = match Keyword::lookup(&text) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Ident,
                };
                tokens.push(Token { kind, text, column });
            }
            c if c.is_ascii_digit() => {
                let begin = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                    return Err(Diagnostic::error(
                        Code::UnexpectedChar,
                        location.at_column(base_column + i),
                        format!("unexpected character '{}' in integer literal", chars[i]),
                    ));
                }
                let text: String = chars[begin..i].iter().collect();
                let value = text.parse::<u64>().map_err(|_| {
                    Diagnostic::error(
                        Code::UnexpectedChar,
                        location.at_column(column),
                        format!("integer literal '{text}' is out of range"),
                    )
                })?;
                tokens.push(Token {
                    kind: TokenKind::Int(value),
                    text,
                    column,
                });
            }
            other => {
                return Err(Diagnostic::error(
                    Code::UnexpectedChar,
                    location.at_column(column),
                    format!(
                        "unexpected character '{}' in directive",
                        other.escape_default()
                    ),
                ));
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc() -> SourceLocation {
        SourceLocation::new(std::path::Path::new("t.c"), 1, 1)
    }

    fn texts(line: &str) -> Vec<String> {
        tokenize_directive(line, &loc())
            .unwrap()
            .into_iter()
            .map(|t| t.text)
            .collect()
    }

    #[test]
    fn method_declare_tokens() {
        let got =
            texts("#pragma compar method_declare interface(sort) target(CUDA) name(sort_cuda)");
        let want = [
            "method_declare",
            "interface",
            "(",
            "sort",
            ")",
            "target",
            "(",
            "CUDA",
            ")",
            "name",
            "(",
            "sort_cuda",
            ")",
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn clauseless() {
        assert_eq!(texts("#pragma compar terminate"), ["terminate"]);
    }

    #[test]
    fn parameter_line_token_count() {
        // parameter + four clauses of four tokens each
        let toks = tokenize_directive(
            "#pragma compar parameter name(arr) type(float) size(N) access_mode(readwrite)",
            &loc(),
        )
        .unwrap();
        assert_eq!(toks.len(), 17);
        assert_eq!(toks.last().unwrap().kind, TokenKind::RParen);
    }

    #[test]
    fn columns_are_one_based_chars() {
        let toks = tokenize_directive("  #pragma compar include", &loc()).unwrap();
        assert_eq!(toks[0].column, 18);
        assert_eq!(toks[0].kind, TokenKind::Keyword(Keyword::Include));
    }

    #[test]
    fn keywords_are_case_insensitive() {
        let toks = tokenize_directive("#pragma compar METHOD_DECLARE", &loc()).unwrap();
        assert_eq!(toks[0].kind, TokenKind::Keyword(Keyword::MethodDeclare));
    }

    #[test]
    fn rejects_foreign_characters() {
        let err = tokenize_directive("#pragma compar include // note", &loc()).unwrap_err();
        assert_eq!(err.code, Code::UnexpectedChar);
        assert_eq!(err.location.column, 24);
        let err = tokenize_directive("#pragma compar parameter size(3x)", &loc()).unwrap_err();
        assert_eq!(err.location.column, 32);
    }
}
