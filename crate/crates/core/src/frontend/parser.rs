use std::fmt;

use crate::diagnostics::{Code, Diagnostic, SourceLocation};

use super::lexer::{tokenize_directive, Keyword, Token, TokenKind};
use super::source::SourceUnit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirectiveKind {
    MethodDeclare,
    Parameter,
    Include,
    Initialize,
    Terminate,
}

impl DirectiveKind {
    fn from_keyword(k: Keyword) -> Option<Self> {
        Some(match k {
            Keyword::MethodDeclare => DirectiveKind::MethodDeclare,
            Keyword::Parameter => DirectiveKind::Parameter,
            Keyword::Include => DirectiveKind::Include,
            Keyword::Initialize => DirectiveKind::Initialize,
            Keyword::Terminate => DirectiveKind::Terminate,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DirectiveKind::MethodDeclare => "method_declare",
            DirectiveKind::Parameter => "parameter",
            DirectiveKind::Include => "include",
            DirectiveKind::Initialize => "initialize",
            DirectiveKind::Terminate => "terminate",
        }
    }

    /// Clauses accepted on this kind, as (clause, required).
    fn clause_rules(self) -> &'static [(ClauseKey, bool)] {
        match self {
            DirectiveKind::MethodDeclare => &[
                (ClauseKey::Interface, true),
                (ClauseKey::Target, true),
                (ClauseKey::Name, true),
            ],
            DirectiveKind::Parameter => &[
                (ClauseKey::Name, true),
                (ClauseKey::Type, true),
                (ClauseKey::Size, false),
                (ClauseKey::AccessMode, true),
            ],
            _ => &[],
        }
    }
}

impl fmt::Display for DirectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Clause keywords. The declaration order is the canonical serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseKey {
    Interface,
    Target,
    Name,
    Type,
    Size,
    AccessMode,
}

impl ClauseKey {
    fn from_keyword(k: Keyword) -> Option<Self> {
        Some(match k {
            Keyword::Interface => ClauseKey::Interface,
            Keyword::Target => ClauseKey::Target,
            Keyword::Name => ClauseKey::Name,
            Keyword::Type => ClauseKey::Type,
            Keyword::Size => ClauseKey::Size,
            Keyword::AccessMode => ClauseKey::AccessMode,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClauseKey::Interface => "interface",
            ClauseKey::Target => "target",
            ClauseKey::Name => "name",
            ClauseKey::Type => "type",
            ClauseKey::Size => "size",
            ClauseKey::AccessMode => "access_mode",
        }
    }
}

impl fmt::Display for ClauseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgValue {
    Ident(String),
    Int(u64),
}

impl fmt::Display for ArgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgValue::Ident(s) => f.write_str(s),
            ArgValue::Int(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseArg {
    pub value: ArgValue,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub key: ClauseKey,
    pub args: Vec<ClauseArg>,
    pub column: usize,
}

impl Clause {
    /// The single identifier argument of a one-argument clause.
    pub fn ident(&self) -> Option<&str> {
        match self.args.as_slice() {
            [ClauseArg {
                value: ArgValue::Ident(s),
                ..
            }] => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub kind: DirectiveKind,
    /// Canonical clause order, independent of the order written.
    pub clauses: Vec<Clause>,
    pub location: SourceLocation,
    pub raw_text: String,
}

impl Directive {
    pub fn clause(&self, key: ClauseKey) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.key == key)
    }

    /// Canonical one-line form, e.g.
    /// `#pragma compar parameter name(A) type(float) size(N, M) access_mode(read)`.
    pub fn to_canonical(&self) -> String {
        let mut out = format!("#pragma compar {}", self.kind);
        for clause in &self.clauses {
            out.push(' ');
            out.push_str(clause.key.as_str());
            out.push('(');
            for (i, arg) in clause.args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&arg.value.to_string());
            }
            out.push(')');
        }
        out
    }

    /// Equality of kind, clause keys and argument values; ignores positions.
    pub fn structurally_eq(&self, other: &Directive) -> bool {
        self.kind == other.kind
            && self.clauses.len() == other.clauses.len()
            && self.clauses.iter().zip(&other.clauses).all(|(a, b)| {
                a.key == b.key
                    && a.args.len() == b.args.len()
                    && a.args.iter().zip(&b.args).all(|(x, y)| x.value == y.value)
            })
    }
}

/// Parses every directive line of `unit` in source order. Passthrough lines
/// are never looked at.
pub fn parse_directives(unit: &SourceUnit) -> (Vec<Directive>, Vec<Diagnostic>) {
    let mut directives = Vec::new();
    let mut diagnostics = Vec::new();
    for line in unit.directive_lines() {
        let location = unit.location(line.number, 1);
        match parse_directive_line(&line.text, &location) {
            Ok(d) => directives.push(d),
            Err(mut diags) => diagnostics.append(&mut diags),
        }
    }
    (directives, diagnostics)
}

/// Parses one directive line. Returns every problem found on the line.
pub fn parse_directive_line(
    text: &str,
    location: &SourceLocation,
) -> Result<Directive, Vec<Diagnostic>> {
    let tokens = tokenize_directive(text, location).map_err(|d| vec![d])?;
    let end_column = text.chars().count() + 1;
    let mut parser = LineParser {
        tokens: &tokens,
        pos: 0,
        location,
        end_column,
        diagnostics: Vec::new(),
    };
    let directive = parser.directive(text);
    if parser.diagnostics.is_empty() {
        Ok(directive.expect("directive without diagnostics"))
    } else {
        Err(parser.diagnostics)
    }
}

struct LineParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    location: &'a SourceLocation,
    end_column: usize,
    diagnostics: Vec<Diagnostic>,
}

impl LineParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&mut self, code: Code, column: usize, message: String) {
        self.diagnostics.push(Diagnostic::error(
            code,
            self.location.at_column(column),
            message,
        ));
    }

    fn current_column(&self) -> usize {
        self.peek().map_or(self.end_column, |t| t.column)
    }

    fn directive(&mut self, raw: &str) -> Option<Directive> {
        let Some(first) = self.peek().cloned() else {
            self.error(
                Code::MissingDirectiveKind,
                self.end_column,
                "expected a directive kind after '#pragma compar'".into(),
            );
            return None;
        };
        self.pos += 1;
        let kind = match &first.kind {
            TokenKind::Keyword(k) => DirectiveKind::from_keyword(*k),
            _ => None,
        };
        let Some(kind) = kind else {
            self.error(
                Code::UnknownDirective,
                first.column,
                format!("unknown directive '{}'", first.text),
            );
            return None;
        };

        let mut clauses: Vec<Clause> = Vec::new();
        while let Some(tok) = self.peek().cloned() {
            self.pos += 1;
            let key = match &tok.kind {
                TokenKind::Keyword(k) => ClauseKey::from_keyword(*k),
                _ => None,
            };
            let args = self.clause_args(&tok);
            let Some(key) = key else {
                self.error(
                    Code::UnknownClause,
                    tok.column,
                    format!("unknown clause '{}'", tok.text),
                );
                continue;
            };
            let Some(args) = args else { continue };

            let rules = kind.clause_rules();
            if !rules.iter().any(|(k, _)| *k == key) {
                self.error(
                    Code::ClauseNotAllowed,
                    tok.column,
                    format!("clause '{key}' is not allowed on '{kind}'"),
                );
                continue;
            }
            if clauses.iter().any(|c| c.key == key) {
                self.error(
                    Code::DuplicateClause,
                    tok.column,
                    format!("duplicate clause '{key}'"),
                );
                continue;
            }
            if self.check_args(key, &args, tok.column) {
                let mut args = args;
                if key == ClauseKey::Target {
                    if let ArgValue::Ident(t) = &mut args[0].value {
                        t.make_ascii_uppercase();
                    }
                }
                clauses.push(Clause {
                    key,
                    args,
                    column: tok.column,
                });
            }
        }

        for (key, required) in kind.clause_rules() {
            if *required && !clauses.iter().any(|c| c.key == *key) {
                self.error(
                    Code::MissingClause,
                    first.column,
                    format!("'{kind}' is missing required clause '{key}'"),
                );
            }
        }

        clauses.sort_by_key(|c| c.key);
        Some(Directive {
            kind,
            clauses,
            location: self.location.at_column(first.column),
            raw_text: raw.to_string(),
        })
    }

    /// Parses `( arg {, arg} )` following a clause keyword. Returns `None`
    /// after reporting a structural error; recovery skips to the matching `)`.
    fn clause_args(&mut self, clause_tok: &Token) -> Option<Vec<ClauseArg>> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::LParen => self.pos += 1,
            _ => {
                let column = self.current_column();
                self.error(
                    Code::UnexpectedToken,
                    column,
                    format!("expected '(' after '{}'", clause_tok.text),
                );
                return None;
            }
        }
        let mut args = Vec::new();
        if matches!(self.peek(), Some(t) if t.kind == TokenKind::RParen) {
            self.pos += 1;
            return Some(args);
        }
        loop {
            let Some(tok) = self.peek().cloned() else {
                self.error(
                    Code::UnexpectedToken,
                    self.end_column,
                    format!(
                        "unbalanced parentheses: missing ')' for '{}'",
                        clause_tok.text
                    ),
                );
                return None;
            };
            let value = match &tok.kind {
                TokenKind::Int(v) => ArgValue::Int(*v),
                _ if tok.is_word() => ArgValue::Ident(tok.text.clone()),
                _ => {
                    self.error(
                        Code::UnexpectedToken,
                        tok.column,
                        format!("expected an argument, found '{}'", tok.text),
                    );
                    self.skip_group();
                    return None;
                }
            };
            self.pos += 1;
            args.push(ClauseArg {
                value,
                column: tok.column,
            });
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Comma) => self.pos += 1,
                Some(TokenKind::RParen) => {
                    self.pos += 1;
                    return Some(args);
                }
                Some(_) => {
                    let column = self.current_column();
                    let text = self.peek().map(|t| t.text.clone()).unwrap_or_default();
                    self.error(
                        Code::UnexpectedToken,
                        column,
                        format!("expected ',' or ')', found '{text}'"),
                    );
                    self.skip_group();
                    return None;
                }
                None => {
                    self.error(
                        Code::UnexpectedToken,
                        self.end_column,
                        format!(
                            "unbalanced parentheses: missing ')' for '{}'",
                            clause_tok.text
                        ),
                    );
                    return None;
                }
            }
        }
    }

    fn skip_group(&mut self) {
        while let Some(t) = self.peek() {
            let close = t.kind == TokenKind::RParen;
            self.pos += 1;
            if close {
                break;
            }
        }
    }

    fn check_args(&mut self, key: ClauseKey, args: &[ClauseArg], column: usize) -> bool {
        if key == ClauseKey::Size {
            if !(1..=4).contains(&args.len()) {
                self.error(
                    Code::SizeArity,
                    column,
                    format!("'size' takes 1 to 4 arguments, found {}", args.len()),
                );
                return false;
            }
            return true;
        }
        if args.len() != 1 {
            self.error(
                Code::ClauseArity,
                column,
                format!("'{key}' takes exactly 1 argument, found {}", args.len()),
            );
            return false;
        }
        if let ArgValue::Int(v) = args[0].value {
            self.error(
                Code::ExpectedIdentifier,
                args[0].column,
                format!("'{key}' expects an identifier, found '{v}'"),
            );
            return false;
        }
        true
    }
}
