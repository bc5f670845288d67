//! Line classification, directive lexing and directive parsing.

mod lexer;
mod parser;
mod source;

pub use lexer::{tokenize_directive, Keyword, Token, TokenKind};
pub use parser::{
    parse_directive_line, parse_directives, ArgValue, Clause, ClauseArg, ClauseKey, Directive,
    DirectiveKind,
};
pub use source::{scan_source, LineKind, SourceLine, SourceUnit};
