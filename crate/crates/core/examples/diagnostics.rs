//! Feeds a few broken directives through the front end and prints the
//! located diagnostics.

use std::path::Path;

const SOURCE: &str = "\
#pragma compar include
#pragma compar method_declare interface(scale) target(FPGA) name(scale_fpga)
#pragma compar method_declare interface(scale) target(OPENMP) name(scale_omp)
#pragma compar parameter name(v) type(quad) size(n) access_mode(readwrite)
#pragma compar parameter name(w) type(float) size(n access_mode(read)
int main(void) {
#pragma compar initialize
    scale(v, w);
}
";

fn main() {
    let c = compar::compile(SOURCE, Path::new("broken.c"));
    for d in &c.diagnostics {
        println!("{d}");
    }
    println!(
        "{} error(s), {} interface(s) recovered",
        c.diagnostics.iter().filter(|d| d.is_error()).count(),
        c.model.interfaces.len()
    );
}
