//! Synthetic benchmark stand-ins, input sweeps, selection scoring and the
//! directive line-count metric.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::frontend::{scan_source, LineKind};
use crate::model::{AccessMode, ElemType, InterfaceSpec, ProgramModel, TargetModel};
use crate::runtime::{
    footprint_bucket, Buffer, DataDesc, DeviceKind, InitError, KernelArgs, PerfKey, PerfModel,
    Registry, RunningStats, Runtime, RuntimeConfig, Scalar, SchedulerPolicy, TaskArg,
};

/// `a + b * n^p` milliseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostCurve {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl CostCurve {
    pub const fn new(a: f64, b: f64, p: f64) -> Self {
        CostCurve { a, b, p }
    }

    pub fn ms(&self, n: usize) -> f64 {
        self.a + self.b * (n as f64).powf(self.p)
    }

    pub fn duration(&self, n: usize) -> Duration {
        Duration::from_secs_f64(self.ms(n) / 1e3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchVariant {
    pub function_name: String,
    pub target: TargetModel,
    pub cost: CostCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBenchmark {
    pub name: String,
    pub variants: Vec<BenchVariant>,
    pub default_sizes: Vec<usize>,
}

pub const BENCHMARK_NAMES: [&str; 6] = ["crossover", "hotspot", "hotspot3d", "lud", "nw", "mmul"];

fn powers_of_two(from: usize, to: usize) -> Vec<usize> {
    std::iter::successors(Some(from), |n| Some(n * 2))
        .take_while(|&n| n <= to)
        .collect()
}

/// Looks up a shipped stand-in by name.
pub fn benchmark(name: &str) -> Option<SyntheticBenchmark> {
    let (sizes, curves): (Vec<usize>, Vec<(&str, TargetModel, CostCurve)>) = match name {
        "crossover" => (
            powers_of_two(64, 8192),
            vec![
                ("cpu", TargetModel::OpenMp, CostCurve::new(0.0, 0.1, 1.0)),
                ("gpu", TargetModel::Cuda, CostCurve::new(50.0, 0.01, 1.0)),
            ],
        ),
        "hotspot" => (
            powers_of_two(64, 8192),
            vec![
                ("omp", TargetModel::OpenMp, CostCurve::new(0.01, 2e-6, 2.0)),
                ("cuda", TargetModel::Cuda, CostCurve::new(0.5, 1e-8, 2.0)),
            ],
        ),
        "hotspot3d" => (
            powers_of_two(64, 512),
            vec![
                ("omp", TargetModel::OpenMp, CostCurve::new(0.01, 4e-8, 3.0)),
                ("cuda", TargetModel::Cuda, CostCurve::new(1.0, 5e-10, 3.0)),
            ],
        ),
        "lud" => (
            powers_of_two(64, 8192),
            vec![
                ("omp", TargetModel::OpenMp, CostCurve::new(0.02, 1e-8, 3.0)),
                ("cuda", TargetModel::Cuda, CostCurve::new(2.0, 2e-10, 3.0)),
            ],
        ),
        "nw" => (
            powers_of_two(64, 8192),
            vec![
                ("omp", TargetModel::OpenMp, CostCurve::new(0.01, 1e-6, 2.0)),
                ("cuda", TargetModel::Cuda, CostCurve::new(0.8, 2e-8, 2.0)),
            ],
        ),
        "mmul" => (
            powers_of_two(8, 8192),
            vec![
                ("blas", TargetModel::Blas, CostCurve::new(0.001, 2e-7, 3.0)),
                ("omp", TargetModel::OpenMp, CostCurve::new(0.01, 2e-8, 3.0)),
                ("cuda", TargetModel::Cuda, CostCurve::new(0.03, 1e-9, 3.0)),
                (
                    "cublas",
                    TargetModel::Cublas,
                    CostCurve::new(40.0, 5e-10, 3.0),
                ),
            ],
        ),
        _ => return None,
    };
    Some(SyntheticBenchmark {
        name: name.to_string(),
        variants: curves
            .into_iter()
            .map(|(suffix, target, cost)| BenchVariant {
                function_name: format!("{name}_{suffix}"),
                target,
                cost,
            })
            .collect(),
        default_sizes: sizes,
    })
}

/// Proxy datum registered for one submission of size `n`.
fn proxy_desc(n: usize) -> DataDesc {
    DataDesc::vector(ElemType::Float, n)
}

fn touch(args: &mut KernelArgs<'_>) -> Result<(), String> {
    let v = args
        .buffer_mut(0)
        .as_float_mut()
        .ok_or("proxy must be float")?;
    v.iter_mut().for_each(|x| *x += 1.0);
    Ok(())
}

impl SyntheticBenchmark {
    pub fn interface(&self) -> InterfaceSpec {
        let mut spec = InterfaceSpec::new(self.name.clone())
            .with_buffer("data", ElemType::Float, &["n"], AccessMode::ReadWrite)
            .with_scalar("n", ElemType::Int);
        for v in &self.variants {
            spec = spec.with_variant(&v.function_name, v.target);
        }
        spec
    }

    pub fn model(&self) -> ProgramModel {
        ProgramModel::from_interfaces(vec![self.interface()])
    }

    /// Bindings whose synthetic cost is the variant's curve at the task's `n`.
    pub fn registry(&self) -> Registry {
        let mut r = Registry::new();
        for v in &self.variants {
            let curve = v.cost;
            r.register_with_cost(&v.function_name, touch, move |input| {
                let n = input
                    .scalars
                    .first()
                    .map_or(0, |s| s.as_i64().max(0) as usize);
                curve.duration(n)
            });
        }
        r
    }

    /// Expected cost of variant `index` at size `n` under `config`,
    /// including the transfer of a freshly registered proxy.
    pub fn expected_ms(&self, index: usize, n: usize, config: &RuntimeConfig) -> f64 {
        let v = &self.variants[index];
        let class = DeviceKind::for_target(v.target);
        let transfer = match class {
            DeviceKind::Cpu => 0.0,
            DeviceKind::Gpu => config.gpu.transfer_ns(proxy_desc(n).footprint()) / 1e6,
        };
        v.cost.ms(n) + transfer
    }

    /// Index of the cheapest variant that has workers under `config`.
    pub fn oracle(&self, n: usize, config: &RuntimeConfig) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.variants.len() {
            if config
                .class(DeviceKind::for_target(self.variants[i].target))
                .workers
                == 0
            {
                continue;
            }
            let c = self.expected_ms(i, n, config);
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((i, c));
            }
        }
        best.map(|(i, _)| i)
    }

    /// A performance model holding the exact cost of every variant at every
    /// size, with enough samples to skip calibration.
    pub fn exact_model(&self, sizes: &[usize], samples: u64) -> PerfModel {
        let mut m = PerfModel::new();
        for &n in sizes {
            let bucket = footprint_bucket(proxy_desc(n).footprint());
            for v in &self.variants {
                let key = PerfKey::new(&self.name, &v.function_name, bucket);
                if m.get(&key).is_none() {
                    m.merge_entry(
                        key,
                        RunningStats {
                            count: samples,
                            mean: v.cost.duration(n).as_nanos() as f64,
                            m2: 0.0,
                        },
                    );
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub benchmark: String,
    pub n: usize,
    /// Majority variant over the measured repetitions; `None` if every
    /// repetition failed.
    pub chosen: Option<String>,
    pub chosen_class: Option<DeviceKind>,
    pub oracle: Option<String>,
    pub durations: Vec<Duration>,
    pub selection_correct: bool,
    pub error: Option<String>,
}

impl SweepResult {
    pub fn mean_duration(&self) -> Option<Duration> {
        if self.durations.is_empty() {
            return None;
        }
        Some(self.durations.iter().sum::<Duration>() / self.durations.len() as u32)
    }
}

/// Submits one proxy task of size `n` and waits for it.
fn run_one(
    rt: &Runtime,
    bench: &SyntheticBenchmark,
    n: usize,
) -> Result<(String, DeviceKind, Duration), String> {
    let h = rt
        .register_data(proxy_desc(n), None)
        .map_err(|e| e.to_string())?;
    let outcome = rt
        .submit(
            &bench.name,
            &[TaskArg::Handle(h), TaskArg::Scalar(Scalar::Int(n as i64))],
        )
        .map_err(|e| e.to_string())
        .and_then(|t| rt.wait(t).map_err(|e| e.to_string()));
    rt.unregister(h).map_err(|e| e.to_string())?;
    outcome.map(|r| (r.function_name, r.class, r.duration))
}

/// Runs the sweep on a fresh runtime. Cells run one after another; errors
/// are recorded per cell and the sweep continues.
pub fn run_sweep(
    bench: &SyntheticBenchmark,
    sizes: &[usize],
    config: &RuntimeConfig,
    reps: usize,
) -> Result<Vec<SweepResult>, InitError> {
    run_sweep_with_model(bench, sizes, config, reps, None)
}

pub fn run_sweep_with_model(
    bench: &SyntheticBenchmark,
    sizes: &[usize],
    config: &RuntimeConfig,
    reps: usize,
    preload: Option<&PerfModel>,
) -> Result<Vec<SweepResult>, InitError> {
    let rt = Runtime::init(&bench.model(), &bench.registry(), config.clone())?;
    if let Some(m) = preload {
        rt.merge_perf_model(m);
    }
    let resolved = rt.config().clone();
    let schedulable = bench
        .variants
        .iter()
        .filter(|v| resolved.class(DeviceKind::for_target(v.target)).workers > 0)
        .count() as u64;
    let warmup = match resolved.scheduler {
        SchedulerPolicy::History => resolved.calibration_samples * schedulable,
        SchedulerPolicy::Eager => 0,
    };

    let mut results = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let oracle = bench
            .oracle(n, &resolved)
            .map(|i| bench.variants[i].function_name.clone());
        let mut error = None;
        let bucket = footprint_bucket(proxy_desc(n).footprint());
        let calibrated = |rt: &Runtime| {
            let model = rt.perf_model();
            bench.variants.iter().all(|v| {
                resolved.class(DeviceKind::for_target(v.target)).workers == 0
                    || model.count(&PerfKey::new(&bench.name, &v.function_name, bucket))
                        >= resolved.calibration_samples
            })
        };
        for _ in 0..warmup {
            if calibrated(&rt) {
                break;
            }
            if let Err(e) = run_one(&rt, bench, n) {
                error = Some(e);
                break;
            }
        }
        let mut votes: HashMap<String, (usize, DeviceKind)> = HashMap::new();
        let mut durations = Vec::with_capacity(reps);
        if error.is_none() {
            for _ in 0..reps {
                match run_one(&rt, bench, n) {
                    Ok((name, class, d)) => {
                        votes.entry(name).or_insert((0, class)).0 += 1;
                        durations.push(d);
                    }
                    Err(e) => {
                        error = Some(e);
                        break;
                    }
                }
            }
        }
        let winner = bench
            .variants
            .iter()
            .filter_map(|v| {
                votes
                    .get(&v.function_name)
                    .map(|&(c, k)| (v.function_name.clone(), c, k))
            })
            .fold(
                None::<(String, usize, DeviceKind)>,
                |best, cur| match best {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                },
            );
        let chosen = winner.as_ref().map(|w| w.0.clone());
        results.push(SweepResult {
            benchmark: bench.name.clone(),
            n,
            selection_correct: chosen.is_some() && chosen == oracle,
            chosen,
            chosen_class: winner.map(|w| w.2),
            oracle,
            durations,
            error,
        });
    }
    rt.shutdown();
    Ok(results)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AccuracyError {
    #[error("no results to score")]
    EmptyInput,
}

/// Fraction of rows whose chosen variant matches the oracle.
pub fn selection_accuracy(results: &[SweepResult]) -> Result<f64, AccuracyError> {
    if results.is_empty() {
        return Err(AccuracyError::EmptyInput);
    }
    let correct = results.iter().filter(|r| r.selection_correct).count();
    Ok(correct as f64 / results.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

pub const TABLE_COLUMNS: [&str; 6] = [
    "benchmark",
    "n",
    "chosen",
    "oracle",
    "mean_duration_ms",
    "correct",
];

pub fn format_table(results: &[SweepResult], format: TableFormat) -> String {
    let sep = match format {
        TableFormat::Text => "\t",
        TableFormat::Csv => ",",
    };
    let mut out = TABLE_COLUMNS.join(sep);
    out.push('\n');
    for r in results {
        let mean = r.mean_duration().map_or_else(
            || "-".to_string(),
            |d| format!("{:.3}", d.as_secs_f64() * 1e3),
        );
        let row = [
            r.benchmark.clone(),
            r.n.to_string(),
            r.chosen.clone().unwrap_or_else(|| "error".into()),
            r.oracle.clone().unwrap_or_else(|| "-".into()),
            mean,
            r.selection_correct.to_string(),
        ];
        writeln!(out, "{}", row.join(sep)).unwrap();
    }
    out
}

/// Number of lines classified as directives.
pub fn directive_loc(text: &str, path: &Path) -> usize {
    scan_source(text, path)
        .lines
        .iter()
        .filter(|l| l.kind == LineKind::Directive)
        .count()
}

pub fn count_directive_loc(paths: &[PathBuf]) -> Vec<(PathBuf, io::Result<usize>)> {
    paths
        .iter()
        .map(|p| {
            let count = std::fs::read_to_string(p).map(|text| directive_loc(&text, p));
            (p.clone(), count)
        })
        .collect()
}

/// Real matrix-product bindings for an interface
/// `mmul(A double size(n,n) read, B double size(n,n) read, C double size(n,n) write, n int)`.
pub fn mmul_interface() -> InterfaceSpec {
    InterfaceSpec::new("mmul")
        .with_buffer("A", ElemType::Double, &["n", "n"], AccessMode::Read)
        .with_buffer("B", ElemType::Double, &["n", "n"], AccessMode::Read)
        .with_buffer("C", ElemType::Double, &["n", "n"], AccessMode::Write)
        .with_scalar("n", ElemType::Int)
        .with_variant("mmul_blas", TargetModel::Blas)
        .with_variant("mmul_omp", TargetModel::OpenMp)
        .with_variant("mmul_cuda", TargetModel::Cuda)
        .with_variant("mmul_cublas", TargetModel::Cublas)
}

/// Copies of A and B, the output slice, and n.
type Operands<'a> = (Vec<f64>, Vec<f64>, &'a mut [f64], usize);

fn operands<'a>(args: &'a mut KernelArgs<'_>) -> Result<Operands<'a>, String> {
    let n = args.extents(0)[0];
    let a = args
        .buffer(0)
        .as_double()
        .ok_or("A must be double")?
        .to_vec();
    let b = args
        .buffer(1)
        .as_double()
        .ok_or("B must be double")?
        .to_vec();
    let c = args
        .buffer_mut(2)
        .as_double_mut()
        .ok_or("C must be double")?;
    Ok((a, b, c, n))
}

fn mmul_ikj(args: &mut KernelArgs<'_>) -> Result<(), String> {
    let (a, b, c, n) = operands(args)?;
    c.fill(0.0);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    Ok(())
}

fn mmul_rows_parallel(args: &mut KernelArgs<'_>) -> Result<(), String> {
    let (a, b, c, n) = operands(args)?;
    let threads = std::thread::available_parallelism()
        .map_or(1, |t| t.get())
        .min(n.max(1));
    let rows_per = n.div_ceil(threads).max(1);
    std::thread::scope(|s| {
        for (chunk, rows) in c.chunks_mut(rows_per * n).enumerate() {
            let (a, b) = (&a, &b);
            s.spawn(move || {
                for (r, row) in rows.chunks_mut(n).enumerate() {
                    let i = chunk * rows_per + r;
                    for (j, out) in row.iter_mut().enumerate() {
                        *out = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum();
                    }
                }
            });
        }
    });
    Ok(())
}

fn mmul_tiled(args: &mut KernelArgs<'_>) -> Result<(), String> {
    const TILE: usize = 16;
    let (a, b, c, n) = operands(args)?;
    c.fill(0.0);
    for ii in (0..n).step_by(TILE) {
        for kk in (0..n).step_by(TILE) {
            for jj in (0..n).step_by(TILE) {
                for i in ii..(ii + TILE).min(n) {
                    for k in kk..(kk + TILE).min(n) {
                        let aik = a[i * n + k];
                        for j in jj..(jj + TILE).min(n) {
                            c[i * n + j] += aik * b[k * n + j];
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn mmul_transposed(args: &mut KernelArgs<'_>) -> Result<(), String> {
    let (a, b, c, n) = operands(args)?;
    let mut bt = vec![0.0; n * n];
    for k in 0..n {
        for j in 0..n {
            bt[j * n + k] = b[k * n + j];
        }
    }
    for i in 0..n {
        for j in 0..n {
            c[i * n + j] = a[i * n..(i + 1) * n]
                .iter()
                .zip(&bt[j * n..(j + 1) * n])
                .map(|(x, y)| x * y)
                .sum();
        }
    }
    Ok(())
}

pub fn mmul_registry() -> Registry {
    let mut r = Registry::new();
    r.register("mmul_blas", mmul_ikj)
        .register("mmul_omp", mmul_rows_parallel)
        .register("mmul_cuda", mmul_tiled)
        .register("mmul_cublas", mmul_transposed);
    r
}

/// Multiplies `a` by `b` (both `n`×`n`, row-major) through the runtime and
/// returns the product computed by each variant in turn.
pub fn mmul_all_variants(
    a: &[f64],
    b: &[f64],
    n: usize,
    config: &RuntimeConfig,
) -> Result<Vec<(String, Vec<f64>)>, String> {
    let iface = mmul_interface();
    let mut out = Vec::new();
    for v in &iface.variants {
        let single = ProgramModel::from_interfaces(vec![InterfaceSpec {
            variants: vec![v.clone()],
            ..iface.clone()
        }]);
        let mut cfg = config.clone();
        cfg.honor_env = false;
        cfg.cpu.workers = cfg.cpu.workers.max(1);
        cfg.gpu.workers = cfg.gpu.workers.max(1);
        let rt = Runtime::init(&single, &mmul_registry(), cfg).map_err(|e| e.to_string())?;
        let desc = DataDesc::matrix(ElemType::Double, n, n);
        let ha = rt
            .register_data(desc.clone(), Some(Buffer::Double(a.to_vec())))
            .map_err(|e| e.to_string())?;
        let hb = rt
            .register_data(desc.clone(), Some(Buffer::Double(b.to_vec())))
            .map_err(|e| e.to_string())?;
        let hc = rt.register_data(desc, None).map_err(|e| e.to_string())?;
        let t = rt
            .submit(
                "mmul",
                &[
                    TaskArg::Handle(ha),
                    TaskArg::Handle(hb),
                    TaskArg::Handle(hc),
                    TaskArg::Scalar(Scalar::Int(n as i64)),
                ],
            )
            .map_err(|e| e.to_string())?;
        rt.wait(t).map_err(|e| e.to_string())?;
        let c = rt.unregister(hc).map_err(|e| e.to_string())?;
        out.push((
            v.function_name.clone(),
            c.as_double().unwrap_or_default().to_vec(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(benchmark("mmul").unwrap().default_sizes.len(), 11);
        assert_eq!(benchmark("hotspot").unwrap().default_sizes.len(), 8);
        assert_eq!(
            benchmark("hotspot3d").unwrap().default_sizes,
            [64, 128, 256, 512]
        );
        assert!(benchmark("rodinia").is_none());
    }

    #[test]
    fn accuracy_arithmetic() {
        let row = |ok| SweepResult {
            benchmark: "b".into(),
            n: 1,
            chosen: None,
            chosen_class: None,
            oracle: None,
            durations: vec![],
            selection_correct: ok,
            error: None,
        };
        let mut rows: Vec<_> = (0..19).map(|_| row(true)).collect();
        rows.push(row(false));
        assert!((selection_accuracy(&rows).unwrap() - 0.95).abs() < 1e-12);
        assert_eq!(selection_accuracy(&[]), Err(AccuracyError::EmptyInput));
    }

    #[test]
    fn curves_positive() {
        for name in BENCHMARK_NAMES {
            let b = benchmark(name).unwrap();
            for v in &b.variants {
                for &n in &b.default_sizes {
                    assert!(v.cost.ms(n) > 0.0, "{name} {} at {n}", v.function_name);
                }
            }
        }
    }
}
