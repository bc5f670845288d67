//! The `compar` command line: `precompile`, `check`, `bench` and `loc`.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::bench::{self, TableFormat};
use crate::codegen::{self, GeneratedArtifact};
use crate::diagnostics::Severity;
use crate::runtime::{RuntimeConfig, SchedulerPolicy, Timing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WARNINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

pub const DEFAULT_REPS: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "compar",
    version,
    about = "Pre-compiler and variant-selecting runtime for #pragma compar"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translate an annotated file and write the generated sources.
    Precompile {
        input: PathBuf,
        #[arg(long, default_value = "compar-out")]
        out: PathBuf,
    },
    /// Report diagnostics without generating anything.
    Check { input: PathBuf },
    /// Run synthetic benchmark sweeps and print the selection table.
    Bench(BenchArgs),
    /// Count directive lines per file.
    Loc {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchedArg {
    Eager,
    History,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimingArg {
    Virtual,
    Sleep,
    Measured,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Benchmark name, or `all`.
    #[arg(long, default_value = "all")]
    pub benchmark: String,
    /// Comma-separated input sizes; defaults to each benchmark's range.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Scheduling policy.
    #[arg(long, value_enum)]
    pub sched: Option<SchedArg>,
    /// Number of CPU-class workers.
    #[arg(long)]
    pub ncpu: Option<usize>,
    /// Number of GPU-class workers.
    #[arg(long)]
    pub ngpu: Option<usize>,
    /// Seed for scheduler tie-breaking.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Measured submissions per size after calibration.
    #[arg(long)]
    pub reps: Option<usize>,
    /// How task durations are obtained.
    #[arg(long, value_enum)]
    pub timing: Option<TimingArg>,
    /// Table format on stdout.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Also write the table as CSV to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// TOML file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Bench settings that may come from a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub sched: Option<SchedArg>,
    pub ncpu: Option<usize>,
    pub ngpu: Option<usize>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub timing: Option<TimingArg>,
    pub format: Option<FormatArg>,
}

/// Resolved bench settings: file, then environment, then flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub runtime: RuntimeConfig,
    pub reps: usize,
    pub format: TableFormat,
}

impl From<SchedArg> for SchedulerPolicy {
    fn from(s: SchedArg) -> Self {
        match s {
            SchedArg::Eager => SchedulerPolicy::Eager,
            SchedArg::History => SchedulerPolicy::History,
        }
    }
}

impl From<TimingArg> for Timing {
    fn from(t: TimingArg) -> Self {
        match t {
            TimingArg::Virtual => Timing::Virtual,
            TimingArg::Sleep => Timing::Sleep,
            TimingArg::Measured => Timing::Measured,
        }
    }
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => TableFormat::Text,
            FormatArg::Csv => TableFormat::Csv,
        }
    }
}

pub fn resolve_bench_settings<F>(
    args: &BenchArgs,
    file: &FileConfig,
    env: F,
) -> Result<BenchSettings, String>
where
    F: Fn(&str) -> Option<String>,
{
    let mut rt = RuntimeConfig {
        honor_env: false,
        ..RuntimeConfig::default()
    };
    let mut reps = DEFAULT_REPS;
    let mut format = TableFormat::Text;

    let mut apply = |sched: Option<SchedArg>,
                     ncpu: Option<usize>,
                     ngpu: Option<usize>,
                     seed: Option<u64>,
                     r: Option<usize>,
                     timing: Option<TimingArg>,
                     fmt: Option<FormatArg>,
                     rt: &mut RuntimeConfig| {
        if let Some(s) = sched {
            rt.scheduler = s.into();
        }
        if let Some(n) = ncpu {
            rt.cpu.workers = n;
        }
        if let Some(n) = ngpu {
            rt.gpu.workers = n;
        }
        if let Some(s) = seed {
            rt.seed = s;
        }
        if let Some(r) = r {
            reps = r;
        }
        if let Some(t) = timing {
            rt.timing = t.into();
        }
        if let Some(f) = fmt {
            format = f.into();
        }
    };
    apply(
        file.sched,
        file.ncpu,
        file.ngpu,
        file.seed,
        file.reps,
        file.timing,
        file.format,
        &mut rt,
    );
    rt.apply_env(env).map_err(|e| e.to_string())?;
    apply(
        args.sched,
        args.ncpu,
        args.ngpu,
        args.seed,
        args.reps,
        args.timing,
        args.format,
        &mut rt,
    );
    Ok(BenchSettings {
        runtime: rt,
        reps,
        format,
    })
}

/// Runs the CLI with the process arguments, environment and streams.
pub fn main_entry() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(
        std::env::args_os(),
        |k| std::env::var(k).ok(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Runs the CLI. `env` stands in for the process environment.
pub fn run<I, T, F>(args: I, env: F, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    F: Fn(&str) -> Option<String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Precompile { input, out: dir } => cmd_precompile(&input, &dir, out, err),
        Command::Check { input } => cmd_check(&input, out, err),
        Command::Bench(args) => cmd_bench(&args, env, out, err),
        Command::Loc { paths } => cmd_loc(&paths, out, err),
    }
}

fn read_input(path: &Path, err: &mut dyn Write) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
        EXIT_IO
    })
}

pub fn cmd_check(input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match read_input(input, err) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let c = crate::compile(&text, input);
    for d in &c.diagnostics {
        let _ = writeln!(err, "{d}");
    }
    for a in &c.model.assumptions {
        let _ = writeln!(
            out,
            "note: '{}' (size of '{}' in '{}') must be in scope at call sites",
            a.identifier, a.parameter, a.interface
        );
    }
    let errors = c
        .diagnostics
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .count();
    let warnings = c.diagnostics.len() - errors;
    let _ = writeln!(
        out,
        "{}: {} interface(s), {} error(s), {} warning(s)",
        input.display(),
        c.model.interfaces.len(),
        errors,
        warnings
    );
    if errors > 0 {
        EXIT_INPUT
    } else if warnings > 0 {
        EXIT_WARNINGS
    } else {
        EXIT_OK
    }
}

pub fn cmd_precompile(input: &Path, dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match read_input(input, err) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let c = crate::compile(&text, input);
    for d in &c.diagnostics {
        let _ = writeln!(err, "{d}");
    }
    if c.has_errors() {
        return EXIT_INPUT;
    }
    let artifacts = match codegen::generate(&c.model, &c.unit) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    match write_atomically(dir, &artifacts) {
        Ok(()) => {
            for a in &artifacts {
                let _ = writeln!(out, "{}", dir.join(&a.relative_path).display());
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: cannot write to {}: {e}", dir.display());
            EXIT_IO
        }
    }
}

/// Writes every artifact into `dir`, or leaves `dir` as it was.
pub fn write_atomically(dir: &Path, artifacts: &[GeneratedArtifact]) -> io::Result<()> {
    let created = !dir.exists();
    std::fs::create_dir_all(dir)?;
    let result = stage_and_swap(dir, artifacts);
    if result.is_err() && created {
        let _ = std::fs::remove_dir_all(dir);
    }
    result
}

fn stage_and_swap(dir: &Path, artifacts: &[GeneratedArtifact]) -> io::Result<()> {
    let staging = tempfile::Builder::new()
        .prefix(".compar-staging")
        .tempdir_in(dir)?;
    let fresh = staging.path().join("new");
    let backup = staging.path().join("old");
    std::fs::create_dir(&fresh)?;
    std::fs::create_dir(&backup)?;
    for a in artifacts {
        std::fs::write(fresh.join(&a.relative_path), &a.content)?;
    }

    // (name, had a previous file)
    let mut done: Vec<(&str, bool)> = Vec::new();
    let mut swap = || -> io::Result<()> {
        for a in artifacts {
            let name = a.relative_path.as_str();
            let dest = dir.join(name);
            let existed = dest.exists();
            if existed {
                std::fs::rename(&dest, backup.join(name))?;
            }
            done.push((name, existed));
            std::fs::rename(fresh.join(name), &dest)?;
        }
        Ok(())
    };
    let result = swap();
    if result.is_err() {
        for (name, existed) in done.into_iter().rev() {
            let dest = dir.join(name);
            let _ = std::fs::remove_file(&dest);
            if existed {
                let _ = std::fs::rename(backup.join(name), &dest);
            }
        }
    }
    result
}

pub fn cmd_loc(paths: &[PathBuf], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut code = EXIT_OK;
    for (path, count) in bench::count_directive_loc(paths) {
        match count {
            Ok(n) => {
                let _ = writeln!(out, "{}: {n}", path.display());
            }
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                code = EXIT_IO;
            }
        }
    }
    code
}

pub fn cmd_bench<F>(args: &BenchArgs, env: F, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    F: Fn(&str) -> Option<String>,
{
    let file = match &args.config {
        None => FileConfig::default(),
        Some(p) => {
            let text = match read_input(p, err) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match toml::from_str::<FileConfig>(&text) {
                Ok(f) => f,
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", p.display());
                    return EXIT_INPUT;
                }
            }
        }
    };
    let settings = match resolve_bench_settings(args, &file, env) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_RUNTIME;
        }
    };

    let names: Vec<&str> = if args.benchmark == "all" {
        bench::BENCHMARK_NAMES.to_vec()
    } else {
        vec![args.benchmark.as_str()]
    };
    let mut rows = Vec::new();
    for name in names {
        let Some(b) = bench::benchmark(name) else {
            let _ = writeln!(
                err,
                "error: unknown benchmark '{name}' (expected all or one of {})",
                bench::BENCHMARK_NAMES.join(", ")
            );
            return EXIT_INPUT;
        };
        let sizes = args
            .sizes
            .clone()
            .unwrap_or_else(|| b.default_sizes.clone());
        if sizes.contains(&0) {
            let _ = writeln!(err, "error: sizes must be positive");
            return EXIT_INPUT;
        }
        match bench::run_sweep(&b, &sizes, &settings.runtime, settings.reps) {
            Ok(r) => {
                for row in &r {
                    if let Some(e) = &row.error {
                        let _ = writeln!(err, "warning: {} n={}: {e}", row.benchmark, row.n);
                    }
                }
                rows.extend(r);
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_RUNTIME;
            }
        }
    }

    if let Some(path) = &args.csv {
        if let Err(e) = std::fs::write(path, bench::format_table(&rows, TableFormat::Csv)) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    if out
        .write_all(bench::format_table(&rows, settings.format).as_bytes())
        .is_err()
    {
        return EXIT_IO;
    }
    EXIT_OK
}
