//! Task runtime with multi-variant codelets, data handles ordered by access
//! mode, CPU and GPU worker classes, and a history-based scheduler.

mod config;
mod data;
mod engine;
mod error;
pub mod global;
mod perf;
mod scheduler;

use std::fmt;

pub use config::{
    DeviceClassConfig, DeviceKind, RuntimeConfig, SchedulerPolicy, Timing,
    DEFAULT_CALIBRATION_SAMPLES, ENV_NCPU, ENV_NGPU, ENV_SCHED,
};
pub use data::{Buffer, DataDesc, HandleId, HandleInfo, KernelArgs, Scalar, TaskArg};
pub use engine::{
    CostFn, CostInput, Kernel, Registry, Runtime, TaskReport, TaskState, VariantImpl, VariantInfo,
};
pub use error::{InitError, PerfFileError, RegError, SubmitError, UnregError, WaitError};
pub use perf::{footprint_bucket, PerfKey, PerfModel, RunningStats};
pub use scheduler::{
    decide, Choice, CostBreakdown, DecisionInput, DecisionMode, SchedulerDecision, VariantView,
    WorkerView,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskId(pub u64);

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
