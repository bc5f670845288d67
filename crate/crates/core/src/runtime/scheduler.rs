//! Variant and worker selection. Everything here is a pure function of the
//! snapshot passed in, so the same inputs always give the same decision.

use std::fmt;

use super::config::{DeviceKind, SchedulerPolicy};
use super::perf::RunningStats;
use super::TaskId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMode {
    /// Some variant still lacks samples for this footprint bucket.
    Calibration,
    /// Expected completion time from the performance model.
    Model,
    Eager,
}

impl fmt::Display for DecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecisionMode::Calibration => "calibration",
            DecisionMode::Model => "model",
            DecisionMode::Eager => "eager",
        })
    }
}

/// Expected cost terms, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub ready_ns: f64,
    pub exec_ns: f64,
    pub transfer_ns: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.ready_ns + self.exec_ns + self.transfer_ns
    }
}

/// One logged scheduling decision.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerDecision {
    pub task: TaskId,
    pub interface: String,
    pub variant: usize,
    pub function_name: String,
    pub worker: usize,
    pub class: DeviceKind,
    pub bucket: u32,
    pub mode: DecisionMode,
    pub cost: CostBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantView {
    pub class: DeviceKind,
    /// Completed samples for the task's footprint bucket.
    pub stats: Option<RunningStats>,
    /// Tasks of this variant and bucket already dispatched but not finished.
    pub in_flight: u64,
    /// Position in the seeded calibration order.
    pub tie_rank: usize,
}

impl VariantView {
    fn samples(&self) -> u64 {
        self.stats.map_or(0, |s| s.count) + self.in_flight
    }

    fn mean(&self) -> Option<f64> {
        self.stats.filter(|s| s.count > 0).map(|s| s.mean)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkerView {
    pub class: DeviceKind,
    /// Predicted work already queued on the worker.
    pub backlog_ns: f64,
    pub idle: bool,
}

#[derive(Debug, Clone)]
pub struct DecisionInput<'a> {
    pub policy: SchedulerPolicy,
    pub calibration_samples: u64,
    pub variants: &'a [VariantView],
    pub workers: &'a [WorkerView],
    /// Cost of moving the task's read data into each class, indexed by
    /// [`DeviceKind::index`].
    pub transfer_ns: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Choice {
    pub variant: usize,
    pub worker: usize,
    pub mode: DecisionMode,
    pub cost: CostBreakdown,
}

/// Picks a (variant, worker) pair, or `None` when no variant has a worker
/// of its class.
pub fn decide(input: &DecisionInput<'_>) -> Option<Choice> {
    let has_worker = |class: DeviceKind| input.workers.iter().any(|w| w.class == class);
    let usable: Vec<usize> = (0..input.variants.len())
        .filter(|&v| has_worker(input.variants[v].class))
        .collect();
    if usable.is_empty() {
        return None;
    }
    match input.policy {
        SchedulerPolicy::Eager => Some(eager(input, &usable)),
        SchedulerPolicy::History => {
            let calibrating = usable
                .iter()
                .any(|&v| input.variants[v].samples() < input.calibration_samples);
            let with_mean: Vec<usize> = usable
                .iter()
                .copied()
                .filter(|&v| input.variants[v].mean().is_some())
                .collect();
            if calibrating || with_mean.is_empty() {
                Some(calibrate(input, &usable))
            } else {
                Some(model(input, &with_mean))
            }
        }
    }
}

fn cost_on(input: &DecisionInput<'_>, variant: usize, worker: usize) -> CostBreakdown {
    let v = &input.variants[variant];
    let w = &input.workers[worker];
    CostBreakdown {
        ready_ns: w.backlog_ns,
        exec_ns: v.mean().unwrap_or(0.0),
        transfer_ns: input.transfer_ns[v.class.index()],
    }
}

/// Least-loaded worker of a class, lowest index on ties.
fn least_loaded(input: &DecisionInput<'_>, class: DeviceKind) -> usize {
    let mut best: Option<usize> = None;
    for (i, w) in input.workers.iter().enumerate() {
        if w.class != class {
            continue;
        }
        match best {
            Some(b) if input.workers[b].backlog_ns <= w.backlog_ns => {}
            _ => best = Some(i),
        }
    }
    best.expect("class has a worker")
}

fn calibrate(input: &DecisionInput<'_>, usable: &[usize]) -> Choice {
    let variant = *usable
        .iter()
        .min_by_key(|&&v| (input.variants[v].samples(), input.variants[v].tie_rank))
        .expect("non-empty");
    let worker = least_loaded(input, input.variants[variant].class);
    Choice {
        variant,
        worker,
        mode: DecisionMode::Calibration,
        cost: cost_on(input, variant, worker),
    }
}

fn model(input: &DecisionInput<'_>, candidates: &[usize]) -> Choice {
    let mut best: Option<(usize, usize, CostBreakdown)> = None;
    for &v in candidates {
        for (w, worker) in input.workers.iter().enumerate() {
            if worker.class != input.variants[v].class {
                continue;
            }
            let cost = cost_on(input, v, w);
            // strict comparison keeps the lowest variant, then worker, on ties
            if best.is_none_or(|(_, _, b)| cost.total() < b.total()) {
                best = Some((v, w, cost));
            }
        }
    }
    let (variant, worker, cost) = best.expect("candidates have workers");
    Choice {
        variant,
        worker,
        mode: DecisionMode::Model,
        cost,
    }
}

fn eager(input: &DecisionInput<'_>, usable: &[usize]) -> Choice {
    let runs = |w: &WorkerView| {
        usable
            .iter()
            .find(|&&v| input.variants[v].class == w.class)
            .copied()
    };
    let idle = input.workers.iter().enumerate().find_map(|(i, w)| {
        if w.idle {
            runs(w).map(|v| (v, i))
        } else {
            None
        }
    });
    let (variant, worker) = idle.unwrap_or_else(|| {
        let mut best: Option<(usize, usize)> = None;
        for (i, w) in input.workers.iter().enumerate() {
            if let Some(v) = runs(w) {
                if best.is_none_or(|(_, b)| w.backlog_ns < input.workers[b].backlog_ns) {
                    best = Some((v, i));
                }
            }
        }
        best.expect("a usable variant has a worker")
    });
    Choice {
        variant,
        worker,
        mode: DecisionMode::Eager,
        cost: cost_on(input, variant, worker),
    }
}
