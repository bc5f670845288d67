//! Pre-compiler for `#pragma compar` directives that expose multiple
//! implementation variants of a function, plus a task runtime that picks a
//! variant per call.
//!
//! The front end ([`frontend`]) parses directives, [`analyzer`] builds a
//! [`model::ProgramModel`], and [`codegen`] emits the transformed source,
//! glue code and an interface manifest. [`runtime`] executes tasks against
//! that manifest; [`bench`] drives synthetic sweeps over it.

pub mod analyzer;
pub mod bench;
pub mod cli;
pub mod codegen;
pub mod diagnostics;
pub mod frontend;
pub mod manifest;
pub mod model;
pub mod runtime;

use std::path::Path;

use diagnostics::Diagnostic;
use frontend::SourceUnit;
use model::ProgramModel;

/// Result of running the front end and the analyzer over one file.
#[derive(Debug, Clone)]
pub struct Compilation {
    pub unit: SourceUnit,
    pub model: ProgramModel,
    /// Sorted by line, then column.
    pub diagnostics: Vec<Diagnostic>,
}

impl Compilation {
    pub fn has_errors(&self) -> bool {
        diagnostics::has_errors(&self.diagnostics)
    }
}

pub fn compile(text: &str, path: &Path) -> Compilation {
    let unit = frontend::scan_source(text, path);
    let (directives, mut diags) = frontend::parse_directives(&unit);
    let (model, more) = analyzer::analyze(&directives, &unit);
    diags.extend(more);
    diags.sort_by_key(|d| (d.location.line, d.location.column));
    Compilation {
        unit,
        model,
        diagnostics: diags,
    }
}
