//! Multiplies two small matrices with every mmul variant and checks that
//! they agree.

use compar::bench::mmul_all_variants;
use compar::runtime::RuntimeConfig;

fn main() {
    let n = 48;
    let a: Vec<f64> = (0..n * n).map(|i| (i % 7) as f64 - 3.0).collect();
    let b: Vec<f64> = (0..n * n).map(|i| (i % 5) as f64 * 0.5).collect();
    let results = mmul_all_variants(&a, &b, n, &RuntimeConfig::default()).unwrap();
    let (_, reference) = &results[0];
    for (name, c) in &results {
        let max_diff = c
            .iter()
            .zip(reference)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        println!(
            "{name:<12} trace={:>10.2} max|diff|={max_diff:e}",
            (0..n).map(|i| c[i * n + i]).sum::<f64>()
        );
    }
}
