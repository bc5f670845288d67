//! Sweeps the two-variant crossover benchmark and shows where the history
//! scheduler switches from the CPU variant to the GPU variant.

use compar::bench::{benchmark, format_table, run_sweep, selection_accuracy, TableFormat};
use compar::runtime::RuntimeConfig;

fn main() {
    let bench = benchmark("crossover").unwrap();
    let config = RuntimeConfig {
        honor_env: false,
        ..RuntimeConfig::default()
    };
    let results = run_sweep(&bench, &bench.default_sizes, &config, 5).unwrap();
    print!("{}", format_table(&results, TableFormat::Text));
    println!(
        "accuracy: {:.0}%",
        100.0 * selection_accuracy(&results).unwrap()
    );
}
