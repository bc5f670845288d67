//! Runs the pre-compiler on the sort/mmul sample and prints every artifact.
//!
//! ```bash
//! cargo run -p compar --example precompile
//! ```

use std::path::Path;

use compar::codegen::generate;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("samples/sort_mmul.c");
    let text = std::fs::read_to_string(&path).expect("sample is shipped with the crate");
    let c = compar::compile(&text, Path::new("sort_mmul.c"));
    for d in &c.diagnostics {
        eprintln!("{d}");
    }
    if c.has_errors() {
        std::process::exit(2);
    }
    for a in generate(&c.model, &c.unit).expect("sample generates") {
        println!("==> {} ({:?})", a.relative_path, a.kind);
        print!("{}", a.content);
    }
}
