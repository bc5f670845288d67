mod common;

use std::path::Path;

use common::*;
use compar::codegen::{generate, strip_directives, ArtifactKind, GeneratedArtifact};
use compar::manifest::manifest_parse;
use sha2::{Digest, Sha256};

fn sort_mmul_artifacts() -> Vec<GeneratedArtifact> {
    let path = samples_dir().join("sort_mmul.c");
    let text = std::fs::read_to_string(&path).unwrap();
    let c = compar::compile(&text, Path::new("sort_mmul.c"));
    assert!(c.diagnostics.is_empty(), "{:?}", c.diagnostics);
    generate(&c.model, &c.unit).unwrap()
}

fn artifact<'a>(arts: &'a [GeneratedArtifact], name: &str) -> &'a str {
    &arts
        .iter()
        .find(|a| a.relative_path == name)
        .unwrap()
        .content
}

#[test]
fn goldens_match() {
    let arts = sort_mmul_artifacts();
    let dir = golden_dir().join("sort_mmul");
    let mut failures = Vec::new();
    for a in &arts {
        if let Err(e) = check_golden(&dir.join(&a.relative_path), &a.content) {
            failures.push(e);
        }
    }
    assert!(
        failures.is_empty(),
        "{failures:#?}\nrerun with COMPAR_BLESS=1 to accept"
    );
}

#[test]
fn artifact_order_and_kinds() {
    let kinds: Vec<_> = sort_mmul_artifacts().iter().map(|a| a.kind).collect();
    assert_eq!(
        kinds,
        [
            ArtifactKind::TransformedSource,
            ArtifactKind::SupportHeader,
            ArtifactKind::InterfaceGlue,
            ArtifactKind::InterfaceGlue,
            ArtifactKind::Manifest
        ]
    );
}

#[test]
fn glue_structure_per_interface() {
    let arts = sort_mmul_artifacts();
    for (iface, v, p) in [("sort", 2, 1), ("mmul", 2, 2)] {
        let s = scan_glue(artifact(&arts, &format!("compar_{iface}.gen.c")));
        assert_eq!(
            s,
            GlueStructure {
                externs: v,
                wrappers: v,
                codelets: 1,
                codelet_entries: v,
                registrations: p,
                unregistrations: p,
                entry_functions: 1,
                submits: 1,
            },
            "{iface}"
        );
    }
}

#[test]
fn scanner_ignores_comments_and_strings() {
    let src = "/* extern void x(void); */\n\
               extern void a(int);\n\
               static const char *s = \"compar_data_register(\";\n\
               static struct compar_codelet c = { .variants = { { 1, \"}\", f }, { 2, \"g\", g }, }, };\n\
               void compar_submit_k(int n)\n{\n    int t = n;\n    compar_data_register(&h, 0);\n    // compar_task_submit(t);\n    compar_task_submit(t);\n}\n";
    let s = scan_glue(src);
    assert_eq!((s.externs, s.codelets, s.codelet_entries), (1, 1, 2));
    assert_eq!((s.registrations, s.submits, s.entry_functions), (1, 1, 1));
}

#[test]
fn transformed_source_keeps_host_lines() {
    let arts = sort_mmul_artifacts();
    let out = artifact(&arts, "sort_mmul.compar.c");
    let original = std::fs::read_to_string(samples_dir().join("sort_mmul.c")).unwrap();
    assert!(!out.contains("#pragma compar"));
    assert_eq!(out.lines().next(), Some("#include \"compar.h\""));
    assert!(out.contains("    compar_submit_sort(arr, n);\n"));
    assert!(out.contains("    compar_submit_mmul(A, B, N, M);\n"));
    assert!(out.contains("compar_init();\n") && out.contains("compar_terminate();\n"));
    // every host line not holding a call survives unchanged and in order
    let stripped = strip_directives(&original);
    let host: Vec<&str> = stripped
        .lines()
        .filter(|l| !l.contains("sort(arr") && !l.contains("mmul(A"))
        .collect();
    let mut it = out.lines();
    for h in host {
        assert!(it.any(|l| l == h), "missing host line {h:?}");
    }
}

#[test]
fn header_declares_entry_points() {
    let arts = sort_mmul_artifacts();
    let h = artifact(&arts, "compar.h");
    assert!(h.contains("void compar_submit_sort(float *arr, int n);"));
    assert!(h.contains("void compar_submit_mmul(float *A, float *B, int N, int M);"));
    assert!(h.starts_with("/* Generated") && h.trim_end().ends_with("#endif /* COMPAR_H */"));
}

#[test]
fn manifest_digest_and_round_trip() {
    let arts = sort_mmul_artifacts();
    let text = artifact(&arts, "sort_mmul.manifest");
    let m = manifest_parse(text).unwrap();
    let original = std::fs::read(samples_dir().join("sort_mmul.c")).unwrap();
    assert_eq!(m.source_digest, hex::encode(Sha256::digest(&original)));
    assert_eq!(m.interfaces.len(), 2);
    assert_eq!(m.interface("mmul").unwrap().parameters.len(), 4);
}

#[test]
fn every_sample_generates() {
    for name in ["hotspot", "hotspot3d", "lud", "nw", "mmul"] {
        let path = samples_dir().join(format!("{name}.compar.c"));
        let text = std::fs::read_to_string(&path).unwrap();
        let c = compar::compile(&text, &path);
        assert!(!c.has_errors(), "{name}: {:?}", c.diagnostics);
        let arts = generate(&c.model, &c.unit).unwrap();
        assert_eq!(arts[0].relative_path, format!("{name}.compar.c"));
        for a in arts
            .iter()
            .filter(|a| a.kind == ArtifactKind::InterfaceGlue)
        {
            let s = scan_glue(&a.content);
            assert_eq!(s.codelets, 1, "{}", a.relative_path);
            assert_eq!(s.externs, s.codelet_entries);
        }
    }
}

#[test]
fn generation_is_deterministic() {
    assert_eq!(sort_mmul_artifacts(), sort_mmul_artifacts());
}
