//! Located diagnostics shared by the front end and the analyzer.
//!
//! Every diagnostic renders on one line as
//! `<path>:<line>:<col>: <severity>[<code>]: <message>`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A position inside an input file. Lines and columns are 1-based; columns
/// count characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceLocation {
    pub path: Arc<Path>,
    pub line: usize,
    pub column: usize,
}

impl SourceLocation {
    pub fn new(path: impl Into<Arc<Path>>, line: usize, column: usize) -> Self {
        SourceLocation {
            path: path.into(),
            line,
            column,
        }
    }

    pub fn at_column(&self, column: usize) -> Self {
        SourceLocation {
            path: self.path.clone(),
            line: self.line,
            column,
        }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.path.display(), self.line, self.column)
    }
}

/// Stable diagnostic codes. The string form is part of the CLI output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Character outside the directive vocabulary.
    UnexpectedChar,
    /// `#pragma compar` with nothing after it.
    MissingDirectiveKind,
    UnknownDirective,
    UnknownClause,
    MissingClause,
    DuplicateClause,
    ClauseNotAllowed,
    /// A clause has the wrong number of arguments.
    ClauseArity,
    /// Parenthesis, comma or argument expected but something else found.
    UnexpectedToken,
    SizeArity,
    ExpectedIdentifier,
    UnknownTarget,
    UnknownType,
    UnknownAccessMode,
    DuplicateParameter,
    OrphanParameter,
    RedeclaredParameters,
    DuplicateVariant,
    ReservedSizeName,
    MissingInitialize,
    MissingTerminate,
    UnusedInterface,
    CallArity,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::UnexpectedChar => "E0001",
            Code::MissingDirectiveKind => "E0002",
            Code::UnknownDirective => "E0003",
            Code::UnknownClause => "E0004",
            Code::MissingClause => "E0005",
            Code::DuplicateClause => "E0006",
            Code::ClauseNotAllowed => "E0007",
            Code::ClauseArity => "E0008",
            Code::UnexpectedToken => "E0009",
            Code::SizeArity => "E0010",
            Code::ExpectedIdentifier => "E0011",
            Code::UnknownTarget => "E0101",
            Code::UnknownType => "E0102",
            Code::UnknownAccessMode => "E0103",
            Code::DuplicateParameter => "E0104",
            Code::OrphanParameter => "E0105",
            Code::RedeclaredParameters => "E0106",
            Code::DuplicateVariant => "E0107",
            Code::ReservedSizeName => "E0108",
            Code::MissingInitialize => "W0101",
            Code::MissingTerminate => "W0102",
            Code::UnusedInterface => "W0103",
            Code::CallArity => "W0104",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub location: SourceLocation,
}

impl Diagnostic {
    pub fn error(code: Code, location: SourceLocation, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn warning(code: Code, location: SourceLocation, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}[{}]: {}",
            self.location, self.severity, self.code, self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

pub(crate) fn path_arc(path: &Path) -> Arc<Path> {
    Arc::from(PathBuf::from(path).into_boxed_path())
}
