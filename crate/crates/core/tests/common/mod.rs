#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn samples_dir() -> PathBuf {
    crate_dir().join("samples")
}

pub fn data_dir() -> PathBuf {
    crate_dir().join("tests").join("data")
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests").join("golden")
}

/// Lines of a corpus file, skipping blanks and `//` comments.
pub fn corpus(name: &str) -> Vec<String> {
    let text = std::fs::read_to_string(data_dir().join(name)).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with("//"))
        .map(str::to_string)
        .collect()
}

/// Counts of the constructs a glue file must contain.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct GlueStructure {
    pub externs: usize,
    pub wrappers: usize,
    pub codelets: usize,
    pub codelet_entries: usize,
    pub registrations: usize,
    pub unregistrations: usize,
    pub entry_functions: usize,
    pub submits: usize,
}

fn strip_comments_and_strings(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    let b: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            '/' if b.get(i + 1) == Some(&'*') => {
                i += 2;
                while i + 1 < b.len() && !(b[i] == '*' && b[i + 1] == '/') {
                    i += 1;
                }
                i += 2;
            }
            '/' if b.get(i + 1) == Some(&'/') => {
                while i < b.len() && b[i] != '\n' {
                    i += 1;
                }
            }
            '"' => {
                out.push_str("\"\"");
                i += 1;
                while i < b.len() && b[i] != '"' {
                    if b[i] == '\\' {
                        i += 1;
                    }
                    i += 1;
                }
                i += 1;
            }
            c => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

/// Splits C source into top-level items: declarations ending in `;` at
/// depth 0 and definitions ending with their closing brace.
pub fn top_level_items(src: &str) -> Vec<String> {
    let clean = strip_comments_and_strings(src);
    let mut items = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for line in clean.lines() {
        if depth == 0 && line.trim_start().starts_with('#') {
            continue;
        }
        for c in line.chars().chain(std::iter::once('\n')) {
            cur.push(c);
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    let head = &cur[..cur.find('{').unwrap_or(0)];
                    // an initializer (`= { ... };`) ends at its semicolon
                    if depth == 0 && !head.contains('=') {
                        items.push(std::mem::take(&mut cur));
                    }
                }
                ';' if depth == 0 => items.push(std::mem::take(&mut cur)),
                _ => {}
            }
        }
    }
    items
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn count_groups_after(item: &str, key: &str) -> usize {
    let Some(start) = item.find(key) else {
        return 0;
    };
    let rest = &item[start..];
    let Some(open) = rest.find('{') else { return 0 };
    let mut depth = 0usize;
    let mut groups = 0;
    for c in rest[open..].chars() {
        match c {
            '{' => {
                depth += 1;
                if depth == 2 {
                    groups += 1;
                }
            }
            '}' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    groups
}

pub fn scan_glue(src: &str) -> GlueStructure {
    let mut s = GlueStructure::default();
    for item in top_level_items(src) {
        let has_body = item.contains('{');
        if item.starts_with("extern ") {
            s.externs += 1;
        } else if item.starts_with("static void ") && has_body {
            s.wrappers += 1;
        } else if item.starts_with("static struct compar_codelet ") {
            s.codelets += 1;
            s.codelet_entries += count_groups_after(&item, ".variants");
        } else if item.starts_with("void compar_submit_") && has_body {
            s.entry_functions += 1;
            s.registrations += item.matches("compar_data_register(").count();
            s.unregistrations += item.matches("compar_data_unregister(").count();
            s.submits += item.matches("compar_task_submit(").count();
        }
    }
    s
}

/// Compares `actual` with the golden file, or rewrites the golden file when
/// `COMPAR_BLESS` is set.
pub fn check_golden(path: &Path, actual: &str) -> Result<(), String> {
    if std::env::var_os("COMPAR_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(
                || expected.lines().count().min(actual.lines().count()) + 1,
                |i| i + 1,
            );
        Err(format!(
            "{} differs from generated output at line {line}",
            path.display()
        ))
    }
}

/// One operation of a random task graph over integer handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// x[i] = x[i] * 3 + k
    Scale { handle: usize, k: i64 },
    /// dst[i] = dst[i] + src[i] * k
    Axpy { src: usize, dst: usize, k: i64 },
    /// dst[i] = src[i] - k
    Copy { src: usize, dst: usize, k: i64 },
    /// reads only
    Probe { handle: usize },
}

pub const DAG_LEN: usize = 8;

/// Sequential reference: applies ops in order to plain vectors.
pub fn sequential(initial: &[Vec<i64>], ops: &[Op]) -> Vec<Vec<i64>> {
    let mut h = initial.to_vec();
    for op in ops {
        match *op {
            Op::Scale { handle, k } => h[handle]
                .iter_mut()
                .for_each(|x| *x = x.wrapping_mul(3).wrapping_add(k)),
            Op::Axpy { src, dst, k } => {
                let s = h[src].clone();
                h[dst]
                    .iter_mut()
                    .zip(&s)
                    .for_each(|(d, s)| *d = d.wrapping_add(s.wrapping_mul(k)));
            }
            Op::Copy { src, dst, k } => {
                let s = h[src].clone();
                h[dst]
                    .iter_mut()
                    .zip(&s)
                    .for_each(|(d, s)| *d = s.wrapping_sub(k));
            }
            Op::Probe { .. } => {}
        }
    }
    h
}

pub mod gen {
    use compar::model::{
        AccessMode, ElemType, InterfaceSpec, ParameterSpec, ProgramModel, SizeExpr, TargetModel,
        VariantSpec,
    };
    use proptest::prelude::*;

    pub fn ident() -> impl Strategy<Value = String> {
        "[A-Za-z_][A-Za-z0-9_]{0,10}".prop_filter("reserved", |s| s != "scalar")
    }

    fn size_expr() -> impl Strategy<Value = SizeExpr> {
        prop_oneof![
            ident().prop_map(SizeExpr::Var),
            (0u64..1 << 40).prop_map(SizeExpr::Lit)
        ]
    }

    fn parameter() -> impl Strategy<Value = (String, ElemType, Vec<SizeExpr>, AccessMode)> {
        (
            ident(),
            prop::sample::select(ElemType::ALL.to_vec()),
            prop::collection::vec(size_expr(), 0..=4),
            prop::sample::select(AccessMode::ALL.to_vec()),
        )
    }

    fn interface() -> impl Strategy<Value = InterfaceSpec> {
        (
            ident(),
            prop::collection::vec(parameter(), 0..6),
            prop::collection::vec(
                (ident(), prop::sample::select(TargetModel::ALL.to_vec())),
                1..5,
            ),
        )
            .prop_map(|(name, params, variants)| {
                let mut seen = std::collections::HashSet::new();
                let parameters = params
                    .into_iter()
                    .filter(|p| seen.insert(p.0.clone()))
                    .enumerate()
                    .map(
                        |(position, (name, elem_type, dims, access))| ParameterSpec {
                            name,
                            elem_type,
                            dims,
                            access,
                            position,
                            location: None,
                        },
                    )
                    .collect();
                let mut seen = std::collections::HashSet::new();
                let variants = variants
                    .into_iter()
                    .filter(|v| seen.insert(v.0.clone()))
                    .map(|(function_name, target)| VariantSpec {
                        function_name,
                        target,
                        location: None,
                    })
                    .collect();
                InterfaceSpec {
                    name,
                    parameters,
                    variants,
                    location: None,
                }
            })
    }

    /// Valid models as the generator would emit them: unique interface
    /// names, unique parameter and variant names, at least one variant.
    pub fn model() -> impl Strategy<Value = ProgramModel> {
        prop::collection::vec(interface(), 0..5).prop_map(|ifaces| {
            let mut seen = std::collections::HashSet::new();
            ProgramModel::from_interfaces(
                ifaces
                    .into_iter()
                    .filter(|i| seen.insert(i.name.clone()))
                    .collect(),
            )
        })
    }

    pub fn digest() -> impl Strategy<Value = String> {
        "[0-9a-f]{64}"
    }
}

pub mod dag {
    use super::Op;
    use compar::model::{AccessMode, ElemType, InterfaceSpec, ProgramModel, TargetModel};
    use compar::runtime::*;
    use proptest::prelude::*;

    pub fn op(handles: usize) -> impl Strategy<Value = Op> {
        let h = 0..handles;
        prop_oneof![
            (h.clone(), -5i64..5).prop_map(|(handle, k)| Op::Scale { handle, k }),
            (h.clone(), h.clone(), -5i64..5)
                .prop_filter("distinct", |(s, d, _)| s != d)
                .prop_map(|(src, dst, k)| Op::Axpy { src, dst, k }),
            (h.clone(), h.clone(), -5i64..5)
                .prop_filter("distinct", |(s, d, _)| s != d)
                .prop_map(|(src, dst, k)| Op::Copy { src, dst, k }),
            h.prop_map(|handle| Op::Probe { handle }),
        ]
    }

    /// Up to 6 handles and 20 tasks.
    pub fn graph() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Op>)> {
        (2usize..=6).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(-100i64..100, super::DAG_LEN), n),
                prop::collection::vec(op(n), 1..=20),
            )
        })
    }

    pub fn model() -> ProgramModel {
        let v = |s: InterfaceSpec, base: &str| {
            s.with_variant(&format!("{base}_seq"), TargetModel::Seq)
                .with_variant(&format!("{base}_omp"), TargetModel::OpenMp)
                .with_variant(&format!("{base}_cuda"), TargetModel::Cuda)
        };
        let n = ["8"];
        ProgramModel::from_interfaces(vec![
            v(
                InterfaceSpec::new("scale")
                    .with_buffer("x", ElemType::Long, &n, AccessMode::ReadWrite)
                    .with_scalar("k", ElemType::Long),
                "scale",
            ),
            v(
                InterfaceSpec::new("axpy")
                    .with_buffer("src", ElemType::Long, &n, AccessMode::Read)
                    .with_buffer("dst", ElemType::Long, &n, AccessMode::ReadWrite)
                    .with_scalar("k", ElemType::Long),
                "axpy",
            ),
            v(
                InterfaceSpec::new("copy")
                    .with_buffer("src", ElemType::Long, &n, AccessMode::Read)
                    .with_buffer("dst", ElemType::Long, &n, AccessMode::Write)
                    .with_scalar("k", ElemType::Long),
                "copy",
            ),
            v(
                InterfaceSpec::new("probe").with_buffer("x", ElemType::Long, &n, AccessMode::Read),
                "probe",
            ),
        ])
    }

    fn jitter() {
        std::thread::yield_now();
    }

    pub fn registry() -> Registry {
        let mut r = Registry::new();
        for suffix in ["seq", "omp", "cuda"] {
            r.register(&format!("scale_{suffix}"), |a: &mut KernelArgs<'_>| {
                let k = a.scalar(0).as_i64();
                jitter();
                a.buffer_mut(0)
                    .as_long_mut()
                    .unwrap()
                    .iter_mut()
                    .for_each(|x| *x = x.wrapping_mul(3).wrapping_add(k));
                Ok(())
            });
            r.register(&format!("axpy_{suffix}"), |a: &mut KernelArgs<'_>| {
                let k = a.scalar(0).as_i64();
                let (src, dst) = a.read_write_pair(0, 1);
                let src = src.as_long().unwrap();
                jitter();
                dst.as_long_mut()
                    .unwrap()
                    .iter_mut()
                    .zip(src)
                    .for_each(|(d, s)| *d = d.wrapping_add(s.wrapping_mul(k)));
                Ok(())
            });
            r.register(&format!("copy_{suffix}"), |a: &mut KernelArgs<'_>| {
                let k = a.scalar(0).as_i64();
                let (src, dst) = a.read_write_pair(0, 1);
                let src = src.as_long().unwrap();
                jitter();
                dst.as_long_mut()
                    .unwrap()
                    .iter_mut()
                    .zip(src)
                    .for_each(|(d, s)| *d = s.wrapping_sub(k));
                Ok(())
            });
            r.register(&format!("probe_{suffix}"), |a: &mut KernelArgs<'_>| {
                jitter();
                let _ = a.buffer(0).as_long().unwrap().iter().sum::<i64>();
                Ok(())
            });
        }
        r
    }

    pub struct DagRun {
        pub finals: Vec<Vec<i64>>,
        pub reports: Vec<TaskReport>,
        /// Handle index and access mode of each task, in submission order.
        pub accesses: Vec<Vec<(usize, AccessMode)>>,
    }

    pub fn accesses(op: &Op) -> Vec<(usize, AccessMode)> {
        match *op {
            Op::Scale { handle, .. } => vec![(handle, AccessMode::ReadWrite)],
            Op::Axpy { src, dst, .. } => {
                vec![(src, AccessMode::Read), (dst, AccessMode::ReadWrite)]
            }
            Op::Copy { src, dst, .. } => vec![(src, AccessMode::Read), (dst, AccessMode::Write)],
            Op::Probe { handle } => vec![(handle, AccessMode::Read)],
        }
    }

    pub fn execute(rt: &Runtime, initial: &[Vec<i64>], ops: &[Op]) -> DagRun {
        let handles: Vec<HandleId> = initial
            .iter()
            .map(|v| {
                rt.register_data(
                    DataDesc::vector(ElemType::Long, v.len()),
                    Some(Buffer::Long(v.clone())),
                )
                .unwrap()
            })
            .collect();
        let k = |k: i64| TaskArg::Scalar(Scalar::Int(k));
        let ids: Vec<TaskId> = ops
            .iter()
            .map(|op| {
                let (name, args) = match *op {
                    Op::Scale { handle, k: c } => {
                        ("scale", vec![TaskArg::Handle(handles[handle]), k(c)])
                    }
                    Op::Axpy { src, dst, k: c } => (
                        "axpy",
                        vec![
                            TaskArg::Handle(handles[src]),
                            TaskArg::Handle(handles[dst]),
                            k(c),
                        ],
                    ),
                    Op::Copy { src, dst, k: c } => (
                        "copy",
                        vec![
                            TaskArg::Handle(handles[src]),
                            TaskArg::Handle(handles[dst]),
                            k(c),
                        ],
                    ),
                    Op::Probe { handle } => ("probe", vec![TaskArg::Handle(handles[handle])]),
                };
                rt.submit(name, &args).unwrap()
            })
            .collect();
        let reports = ids.iter().map(|&t| rt.wait(t).unwrap()).collect();
        let finals = handles
            .iter()
            .map(|&h| match rt.unregister(h).unwrap() {
                Buffer::Long(v) => v,
                other => panic!("unexpected buffer {other:?}"),
            })
            .collect();
        DagRun {
            finals,
            reports,
            accesses: ops.iter().map(accesses).collect(),
        }
    }

    /// Checks start order and epochs against submission order. Returns the
    /// number of violations.
    pub fn ordering_violations(run: &DagRun) -> usize {
        let handles = run
            .accesses
            .iter()
            .flatten()
            .map(|(h, _)| h + 1)
            .max()
            .unwrap_or(0);
        let mut violations = 0;
        for h in 0..handles {
            let mut writers_before = 0u64;
            let mut last_write_start: Option<u64> = None;
            let mut readers_since_write: Vec<u64> = Vec::new();
            for (task, acc) in run.accesses.iter().enumerate() {
                let Some(&(_, mode)) = acc.iter().find(|(x, _)| *x == h) else {
                    continue;
                };
                let r = &run.reports[task];
                // every task sees exactly the writes submitted before it
                let epoch = r.read_epochs[acc.iter().position(|(x, _)| *x == h).unwrap()].1;
                if epoch != writers_before {
                    violations += 1;
                }
                if mode.writes() {
                    if last_write_start.is_some_and(|s| r.start_seq <= s) {
                        violations += 1;
                    }
                    if readers_since_write.iter().any(|&s| r.start_seq <= s) {
                        violations += 1;
                    }
                    last_write_start = Some(r.start_seq);
                    readers_since_write.clear();
                    writers_before += 1;
                } else {
                    if last_write_start.is_some_and(|s| r.start_seq <= s) {
                        violations += 1;
                    }
                    readers_since_write.push(r.start_seq);
                }
            }
        }
        violations
    }
}

pub mod stream {
    use compar::bench::SyntheticBenchmark;
    use compar::model::ElemType;
    use compar::runtime::*;

    /// Sizes of the fixed replay stream.
    pub fn sizes(len: usize) -> Vec<usize> {
        let cycle = [64, 4096, 256, 8192, 512, 1024, 128, 2048];
        (0..len)
            .map(|i| cycle[(i * 5 + i / 8) % cycle.len()])
            .collect()
    }

    pub fn submit(
        rt: &Runtime,
        bench: &SyntheticBenchmark,
        n: usize,
    ) -> Result<TaskReport, String> {
        let h = rt
            .register_data(DataDesc::vector(ElemType::Float, n), None)
            .map_err(|e| e.to_string())?;
        let t = rt
            .submit(
                &bench.name,
                &[TaskArg::Handle(h), TaskArg::Scalar(Scalar::Int(n as i64))],
            )
            .map_err(|e| e.to_string())?;
        let report = rt.wait(t).map_err(|e| e.to_string())?;
        rt.unregister(h).map_err(|e| e.to_string())?;
        Ok(report)
    }

    /// Runs the stream one task at a time and returns the decisions it caused.
    pub fn run(
        rt: &Runtime,
        bench: &SyntheticBenchmark,
        sizes: &[usize],
    ) -> Vec<SchedulerDecision> {
        let before = rt.decisions().len();
        for &n in sizes {
            submit(rt, bench, n).unwrap();
        }
        rt.decisions().split_off(before)
    }
}
