mod common;

use std::path::Path;

use common::*;
use compar::diagnostics::{Code, Severity};
use compar::model::{AccessMode, ElemType, SizeExpr, TargetModel};

fn codes(text: &str) -> Vec<(Code, usize, usize)> {
    compar::compile(text, Path::new("t.c"))
        .diagnostics
        .iter()
        .map(|d| (d.code, d.location.line, d.location.column))
        .collect()
}

const HEAD: &str = "#pragma compar include\n#pragma compar initialize\n#pragma compar terminate\n";

#[test]
fn sample_model() {
    let text = std::fs::read_to_string(samples_dir().join("sort_mmul.c")).unwrap();
    let c = compar::compile(&text, Path::new("sort_mmul.c"));
    assert!(c.diagnostics.is_empty());
    let sort = c.model.interface("sort").unwrap();
    assert_eq!(sort.variants.len(), 2);
    assert_eq!(sort.variants[0].target, TargetModel::Cuda);
    let arr = sort.parameter("arr").unwrap();
    assert_eq!(
        (arr.elem_type, arr.access),
        (ElemType::Float, AccessMode::ReadWrite)
    );
    assert_eq!(arr.dims, [SizeExpr::Var("n".into())]);
    let mmul = c.model.interface("mmul").unwrap();
    assert_eq!(mmul.buffer_parameters().count(), 2);
    assert_eq!(mmul.scalar_parameters().count(), 2);
    assert_eq!(c.model.call_sites.len(), 2);
    assert_eq!(
        (
            c.model.call_sites[0].location.line,
            c.model.call_sites[0].location.column
        ),
        (23, 5)
    );
    assert_eq!(c.model.lifecycle.initialize.as_ref().unwrap().line, 22);
    assert!(c.model.assumptions.is_empty());
}

#[test]
fn semantic_errors() {
    let md = "#pragma compar method_declare interface(f) target(SEQ) name(f_seq)\n";
    assert_eq!(
        codes(&format!(
            "{HEAD}#pragma compar method_declare interface(f) target(FPGA) name(f_x)\nf();\n"
        ))[0],
        (Code::UnknownTarget, 4, 51)
    );
    assert!(codes(&format!(
        "{HEAD}{md}#pragma compar parameter name(x) type(complex) access_mode(read)\n"
    ))
    .iter()
    .any(|c| c.0 == Code::UnknownType));
    assert!(codes(&format!(
        "{HEAD}{md}#pragma compar parameter name(x) type(int) access_mode(append)\n"
    ))
    .iter()
    .any(|c| c.0 == Code::UnknownAccessMode));
    let dup = format!(
        "{HEAD}{md}#pragma compar parameter name(x) type(int) access_mode(read)\n#pragma compar parameter name(x) type(int) access_mode(read)\n"
    );
    assert!(codes(&dup).iter().any(|c| c.0 == Code::DuplicateParameter));
    assert_eq!(
        codes("#pragma compar parameter name(x) type(int) access_mode(read)\n")[0].0,
        Code::OrphanParameter
    );
    let redeclared = format!(
        "{HEAD}{md}#pragma compar method_declare interface(f) target(CUDA) name(f_cuda)\n#pragma compar parameter name(x) type(int) access_mode(read)\n"
    );
    assert!(codes(&redeclared)
        .iter()
        .any(|c| c.0 == Code::RedeclaredParameters));
    let reserved = format!(
        "{HEAD}{md}#pragma compar parameter name(x) type(int) size(scalar) access_mode(read)\n"
    );
    assert!(codes(&reserved)
        .iter()
        .any(|c| c.0 == Code::ReservedSizeName));
    let dup_variant = format!("{HEAD}{md}{md}");
    assert!(codes(&dup_variant)
        .iter()
        .any(|c| c.0 == Code::DuplicateVariant));
}

#[test]
fn warnings() {
    let md = "#pragma compar method_declare interface(f) target(SEQ) name(f_seq)\n#pragma compar parameter name(x) type(int) access_mode(read)\n";
    let c = compar::compile(
        &format!("#pragma compar include\n{md}f(1);\n"),
        Path::new("t.c"),
    );
    let got: Vec<_> = c.diagnostics.iter().map(|d| (d.severity, d.code)).collect();
    assert!(got.contains(&(Severity::Warning, Code::MissingInitialize)));
    assert!(got.contains(&(Severity::Warning, Code::MissingTerminate)));
    assert!(!c.has_errors());

    let unused = compar::compile(&format!("{HEAD}{md}"), Path::new("t.c"));
    assert_eq!(unused.diagnostics.len(), 1);
    assert_eq!(unused.diagnostics[0].code, Code::UnusedInterface);

    let arity = compar::compile(&format!("{HEAD}{md}f(1, 2);\n"), Path::new("t.c"));
    assert!(arity
        .diagnostics
        .iter()
        .any(|d| d.code == Code::CallArity && d.location.line == 6));
    assert!(arity.model.call_sites.is_empty());
}

#[test]
fn call_site_detection_skips_non_statements() {
    let md = "#pragma compar method_declare interface(f) target(SEQ) name(f_seq)\n#pragma compar parameter name(x) type(int) access_mode(read)\n";
    let body = "// f(1);\n/* f(1); */\nint y = f(1);\n  f(g(1, 2)); // call\n";
    let c = compar::compile(&format!("{HEAD}{md}{body}"), Path::new("t.c"));
    assert_eq!(c.model.call_sites.len(), 1);
    assert_eq!(c.model.call_sites[0].args, ["g(1, 2)"]);
    assert_eq!(c.model.call_sites[0].location.column, 3);
}

#[test]
fn scope_assumptions_for_foreign_sizes() {
    let text = format!(
        "{HEAD}#pragma compar method_declare interface(f) target(SEQ) name(f_seq)\n\
         #pragma compar parameter name(v) type(float) size(rows, 8) access_mode(write)\n\
         f(v);\n"
    );
    let c = compar::compile(&text, Path::new("t.c"));
    assert_eq!(c.model.assumptions.len(), 1);
    assert_eq!(c.model.assumptions[0].identifier, "rows");
}

#[test]
fn diagnostics_are_sorted() {
    let text = "#pragma compar bogus\n#pragma compar parameter name(x) type(int) access_mode(read)\n#pragma compar frob\n";
    let lines: Vec<usize> = codes(text).iter().map(|c| c.1).collect();
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
}
