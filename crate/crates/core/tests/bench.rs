use std::path::PathBuf;

use compar::bench::*;
use compar::runtime::{DeviceKind, RuntimeConfig, SchedulerPolicy};

fn cfg() -> RuntimeConfig {
    RuntimeConfig {
        honor_env: false,
        ..RuntimeConfig::default()
    }
}

#[test]
fn crossover_small_cpu_large_gpu() {
    let b = benchmark("crossover").unwrap();
    let rows = run_sweep(&b, &[256, 4096], &cfg(), 3).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].chosen_class, Some(DeviceKind::Cpu));
    assert_eq!(rows[1].chosen_class, Some(DeviceKind::Gpu));
    assert!(rows.iter().all(|r| r.selection_correct));
    // 0.1 * 256 = 25.6 ms on the virtual clock
    let mean = rows[0].mean_duration().unwrap().as_secs_f64() * 1e3;
    assert!((mean - 25.6).abs() < 1e-6, "{mean}");
}

#[test]
fn sweep_row_counts() {
    let mmul = benchmark("mmul").unwrap();
    assert_eq!(
        run_sweep(&mmul, &mmul.default_sizes, &cfg(), 1)
            .unwrap()
            .len(),
        11
    );
    let hotspot = benchmark("hotspot").unwrap();
    assert_eq!(
        run_sweep(&hotspot, &hotspot.default_sizes, &cfg(), 1)
            .unwrap()
            .len(),
        8
    );
}

#[test]
fn mmul_winners_change_across_sweep() {
    let b = benchmark("mmul").unwrap();
    let rows = run_sweep(&b, &b.default_sizes, &cfg(), 2).unwrap();
    let chosen: Vec<_> = rows.iter().map(|r| r.chosen.clone().unwrap()).collect();
    let expected = [
        "mmul_blas",
        "mmul_blas",
        "mmul_blas",
        "mmul_omp",
        "mmul_cuda",
        "mmul_cuda",
        "mmul_cuda",
        "mmul_cuda",
        "mmul_cuda",
        "mmul_cuda",
        "mmul_cublas",
    ];
    assert_eq!(chosen, expected);
}

#[test]
fn omniscient_scheduler_is_always_right() {
    for name in BENCHMARK_NAMES {
        let b = benchmark(name).unwrap();
        let model = b.exact_model(&b.default_sizes, 3);
        let rows = run_sweep_with_model(&b, &b.default_sizes, &cfg(), 1, Some(&model)).unwrap();
        assert_eq!(selection_accuracy(&rows).unwrap(), 1.0, "{name}");
    }
}

#[test]
fn eager_scores_below_history() {
    let b = benchmark("crossover").unwrap();
    let history = run_sweep(&b, &b.default_sizes, &cfg(), 1).unwrap();
    let mut eager_cfg = cfg();
    eager_cfg.scheduler = SchedulerPolicy::Eager;
    let eager = run_sweep(&b, &b.default_sizes, &eager_cfg, 1).unwrap();
    assert!(selection_accuracy(&eager).unwrap() < selection_accuracy(&history).unwrap());
}

#[test]
fn sweeps_reproduce() {
    let b = benchmark("nw").unwrap();
    let c = RuntimeConfig { seed: 7, ..cfg() };
    assert_eq!(
        run_sweep(&b, &b.default_sizes, &c, 2).unwrap(),
        run_sweep(&b, &b.default_sizes, &c, 2).unwrap()
    );
}

#[test]
fn masked_gpu_sweep_stays_on_cpu() {
    let b = benchmark("crossover").unwrap();
    let rows = run_sweep(&b, &b.default_sizes, &cfg().with_workers(2, 0), 1).unwrap();
    assert!(rows.iter().all(|r| r.chosen_class == Some(DeviceKind::Cpu)));
    assert!(rows.iter().all(|r| r.selection_correct));
}

#[test]
fn table_formats() {
    let b = benchmark("crossover").unwrap();
    let rows = run_sweep(&b, &[256], &cfg(), 1).unwrap();
    let text = format_table(&rows, TableFormat::Text);
    assert_eq!(
        text,
        "benchmark\tn\tchosen\toracle\tmean_duration_ms\tcorrect\ncrossover\t256\tcrossover_cpu\tcrossover_cpu\t25.600\ttrue\n"
    );
    let csv = format_table(&rows, TableFormat::Csv);
    assert_eq!(
        csv.lines().nth(1),
        Some("crossover,256,crossover_cpu,crossover_cpu,25.600,true")
    );
}

fn naive(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += a[i * n + k] * b[k * n + j];
            }
            c[i * n + j] = s;
        }
    }
    c
}

#[test]
fn mmul_variants_match_reference() {
    for n in [1, 5, 17, 33] {
        let a: Vec<f64> = (0..n * n).map(|i| ((i * 7) % 9) as f64 - 4.0).collect();
        let b: Vec<f64> = (0..n * n).map(|i| ((i * 5) % 11) as f64 - 5.0).collect();
        let expected = naive(&a, &b, n);
        for (name, c) in mmul_all_variants(&a, &b, n, &cfg()).unwrap() {
            assert_eq!(c, expected, "{name} n={n}");
        }
    }
}

#[test]
fn directive_counts_of_samples() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("samples");
    let names = ["hotspot", "hotspot3d", "lud", "nw", "mmul"];
    let paths: Vec<_> = names
        .iter()
        .map(|n| dir.join(format!("{n}.compar.c")))
        .collect();
    let counts: Vec<usize> = count_directive_loc(&paths)
        .into_iter()
        .map(|(_, c)| c.unwrap())
        .collect();
    assert_eq!(counts, [7, 9, 7, 8, 14]);
    let baseline = count_directive_loc(&[dir.join("mmul.baseline.c")]);
    assert_eq!(*baseline[0].1.as_ref().unwrap(), 0);
    assert!(count_directive_loc(&[dir.join("missing.c")])[0].1.is_err());
}
