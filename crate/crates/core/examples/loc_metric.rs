//! Counts the directive lines a programmer wrote in each shipped sample.

use std::path::PathBuf;

use compar::bench::count_directive_loc;

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("samples");
    let paths: Vec<PathBuf> = ["hotspot", "hotspot3d", "lud", "nw", "mmul"]
        .iter()
        .map(|n| dir.join(format!("{n}.compar.c")))
        .collect();
    for (path, n) in count_directive_loc(&paths) {
        println!(
            "{:<20} {}",
            path.file_name().unwrap().to_string_lossy(),
            n.unwrap()
        );
    }
}
