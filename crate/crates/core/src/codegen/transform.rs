use crate::frontend::{parse_directive_line, DirectiveKind, SourceLine, SourceUnit};
use crate::model::{CallSite, ProgramModel};

use super::entry_name;

/// Translates lifecycle directives and drops declaration directives; every
/// other line is copied unchanged.
pub fn translate_lifecycle(unit: &SourceUnit, _model: &ProgramModel) -> String {
    let mut out = String::new();
    for line in &unit.lines {
        match lifecycle_replacement(unit, line) {
            LineAction::Keep => push_line(&mut out, &line.text, &line.eol),
            LineAction::Replace(text) => push_line(&mut out, &text, &line.eol),
            LineAction::Drop => {}
        }
    }
    out
}

/// The full host-source transformation: lifecycle translation plus call-site
/// rewriting.
pub fn transform_source(unit: &SourceUnit, model: &ProgramModel) -> String {
    let mut out = String::new();
    for line in &unit.lines {
        match lifecycle_replacement(unit, line) {
            LineAction::Drop => {}
            LineAction::Replace(text) => push_line(&mut out, &text, &line.eol),
            LineAction::Keep => {
                let site = model
                    .call_sites
                    .iter()
                    .find(|s| s.location.line == line.number && s.location.path == unit.path);
                match site {
                    Some(site) => push_line(
                        &mut out,
                        &rewrite_call_site(&line.text, site, model),
                        &line.eol,
                    ),
                    None => push_line(&mut out, &line.text, &line.eol),
                }
            }
        }
    }
    out
}

/// Replaces the interface name of a call with its generated entry function.
/// Indentation, arguments and any trailing comment are kept verbatim.
pub fn rewrite_call_site(line: &str, site: &CallSite, _model: &ProgramModel) -> String {
    let start = line
        .char_indices()
        .nth(site.location.column - 1)
        .map_or(line.len(), |(i, _)| i);
    let end = start + site.interface.len();
    debug_assert_eq!(&line[start..end], site.interface);
    format!(
        "{}{}{}",
        &line[..start],
        entry_name(&site.interface),
        &line[end..]
    )
}

/// Removes every `#pragma compar` line. The result is what a compiler that
/// ignores unknown pragmas sees.
pub fn strip_directives(text: &str) -> String {
    let unit = crate::frontend::scan_source(text, std::path::Path::new(""));
    let mut out = String::with_capacity(text.len());
    for line in unit.passthrough_lines() {
        push_line(&mut out, &line.text, &line.eol);
    }
    out
}

enum LineAction {
    Keep,
    Replace(String),
    Drop,
}

fn lifecycle_replacement(unit: &SourceUnit, line: &SourceLine) -> LineAction {
    if !line.is_directive() {
        return LineAction::Keep;
    }
    let indent: String = line
        .text
        .chars()
        .take_while(|c| *c == ' ' || *c == '\t')
        .collect();
    let location = unit.location(line.number, 1);
    let Ok(d) = parse_directive_line(&line.text, &location) else {
        // generation requires a clean parse; leave anything else as written
        return LineAction::Keep;
    };
    match d.kind {
        DirectiveKind::Include => LineAction::Replace(format!("{indent}#include \"compar.h\"")),
        DirectiveKind::Initialize => LineAction::Replace(format!("{indent}compar_init();")),
        DirectiveKind::Terminate => LineAction::Replace(format!("{indent}compar_terminate();")),
        DirectiveKind::MethodDeclare | DirectiveKind::Parameter => LineAction::Drop,
    }
}

fn push_line(out: &mut String, text: &str, eol: &str) {
    out.push_str(text);
    out.push_str(eol);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::SourceLocation;
    use crate::frontend::scan_source;
    use std::path::Path;

    fn site(name: &str, column: usize) -> CallSite {
        CallSite {
            interface: name.into(),
            location: SourceLocation::new(Path::new("t.c"), 1, column),
            args: vec![],
        }
    }

    #[test]
    fn lifecycle_lines() {
        let src = "#pragma compar include\nint main() {\n    #pragma compar initialize\n    #pragma compar terminate\n}\n";
        let unit = scan_source(src, Path::new("t.c"));
        let out = translate_lifecycle(&unit, &ProgramModel::default());
        assert_eq!(
            out,
            "#include \"compar.h\"\nint main() {\n    compar_init();\n    compar_terminate();\n}\n"
        );
    }

    #[test]
    fn directive_free_input_is_identity() {
        let src = "int main(void)\n{\r\n  return 0;\n}";
        let unit = scan_source(src, Path::new("t.c"));
        assert_eq!(translate_lifecycle(&unit, &ProgramModel::default()), src);
        assert_eq!(strip_directives(src), src);
    }

    #[test]
    fn rewrites_keep_surroundings() {
        let m = ProgramModel::default();
        assert_eq!(
            rewrite_call_site("  sort(arr, n);", &site("sort", 3), &m),
            "  compar_submit_sort(arr, n);"
        );
        assert_eq!(
            rewrite_call_site("mmul(A, B, N, M);", &site("mmul", 1), &m),
            "compar_submit_mmul(A, B, N, M);"
        );
        assert_eq!(
            rewrite_call_site("\tsort(a, n); // hot path", &site("sort", 2), &m),
            "\tcompar_submit_sort(a, n); // hot path"
        );
    }

    #[test]
    fn strip_only_directives() {
        assert_eq!(
            strip_directives("#pragma compar include\n#pragma compar terminate\n"),
            ""
        );
        assert_eq!(strip_directives("a\n#pragma compar include\nb"), "a\nb");
    }
}
