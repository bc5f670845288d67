use std::fmt;
use std::str::FromStr;

use crate::model::TargetModel;

use super::error::InitError;

pub const ENV_NCPU: &str = "COMPAR_NCPU";
pub const ENV_NGPU: &str = "COMPAR_NGPU";
pub const ENV_SCHED: &str = "COMPAR_SCHED";

/// Samples per (variant, footprint bucket) collected before the history
/// scheduler trusts its model.
pub const DEFAULT_CALIBRATION_SAMPLES: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeviceKind {
    Cpu,
    Gpu,
}

impl DeviceKind {
    pub const ALL: [DeviceKind; 2] = [DeviceKind::Cpu, DeviceKind::Gpu];

    pub fn index(self) -> usize {
        match self {
            DeviceKind::Cpu => 0,
            DeviceKind::Gpu => 1,
        }
    }

    pub fn runs(self, target: TargetModel) -> bool {
        match self {
            DeviceKind::Cpu => matches!(
                target,
                TargetModel::OpenMp | TargetModel::Seq | TargetModel::Blas
            ),
            DeviceKind::Gpu => matches!(
                target,
                TargetModel::Cuda | TargetModel::OpenCl | TargetModel::Cublas
            ),
        }
    }

    pub fn for_target(target: TargetModel) -> DeviceKind {
        if DeviceKind::Cpu.runs(target) {
            DeviceKind::Cpu
        } else {
            DeviceKind::Gpu
        }
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeviceKind::Cpu => "CPU",
            DeviceKind::Gpu => "GPU",
        })
    }
}

/// Worker count and the linear transfer model of one device class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceClassConfig {
    pub workers: usize,
    /// Seconds per transferred handle.
    pub transfer_latency: f64,
    /// Bytes per second; `f64::INFINITY` makes transfers free.
    pub transfer_bandwidth: f64,
}

impl DeviceClassConfig {
    pub fn free_transfers(workers: usize) -> Self {
        DeviceClassConfig {
            workers,
            transfer_latency: 0.0,
            transfer_bandwidth: f64::INFINITY,
        }
    }

    /// Expected nanoseconds to move `bytes` into this class.
    pub fn transfer_ns(&self, bytes: usize) -> f64 {
        let secs = self.transfer_latency + bytes as f64 / self.transfer_bandwidth;
        secs * 1e9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerPolicy {
    /// First idle compatible worker, no performance model.
    Eager,
    /// Calibrate, then minimize expected completion time.
    History,
}

impl FromStr for SchedulerPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eager" => Ok(SchedulerPolicy::Eager),
            "history" => Ok(SchedulerPolicy::History),
            other => Err(format!(
                "unknown scheduler '{other}' (expected eager or history)"
            )),
        }
    }
}

impl fmt::Display for SchedulerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchedulerPolicy::Eager => "eager",
            SchedulerPolicy::History => "history",
        })
    }
}

/// How task durations fed to the performance model are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    /// Wall-clock time of the kernel.
    Measured,
    /// Kernel runs, then the worker sleeps until the synthetic cost has
    /// elapsed; the wall-clock total is recorded.
    Sleep,
    /// The synthetic cost is recorded without sleeping. Variants without a
    /// cost function fall back to measured time.
    Virtual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeConfig {
    pub cpu: DeviceClassConfig,
    pub gpu: DeviceClassConfig,
    pub scheduler: SchedulerPolicy,
    pub calibration_samples: u64,
    pub timing: Timing,
    /// Seeds the calibration tie order.
    pub seed: u64,
    /// Apply `COMPAR_NCPU`, `COMPAR_NGPU` and `COMPAR_SCHED` at init.
    pub honor_env: bool,
}

impl Default for RuntimeConfig {
    fn default() -> Self {
        RuntimeConfig {
            cpu: DeviceClassConfig::free_transfers(4),
            gpu: DeviceClassConfig {
                workers: 1,
                transfer_latency: 10e-6,
                transfer_bandwidth: 12e9,
            },
            scheduler: SchedulerPolicy::History,
            calibration_samples: DEFAULT_CALIBRATION_SAMPLES,
            timing: Timing::Virtual,
            seed: 0,
            honor_env: true,
        }
    }
}

impl RuntimeConfig {
    pub fn class(&self, kind: DeviceKind) -> &DeviceClassConfig {
        match kind {
            DeviceKind::Cpu => &self.cpu,
            DeviceKind::Gpu => &self.gpu,
        }
    }

    pub fn with_workers(mut self, cpu: usize, gpu: usize) -> Self {
        self.cpu.workers = cpu;
        self.gpu.workers = gpu;
        self
    }

    /// Applies the masking variables read through `lookup`. Unset variables
    /// leave the configuration unchanged.
    pub fn apply_env<F>(&mut self, lookup: F) -> Result<(), InitError>
    where
        F: Fn(&str) -> Option<String>,
    {
        let count = |var: &'static str| -> Result<Option<usize>, InitError> {
            match lookup(var) {
                None => Ok(None),
                Some(v) => v
                    .trim()
                    .parse::<usize>()
                    .map(Some)
                    .map_err(|_| InitError::InvalidEnv { var, value: v }),
            }
        };
        if let Some(n) = count(ENV_NCPU)? {
            self.cpu.workers = n;
        }
        if let Some(n) = count(ENV_NGPU)? {
            self.gpu.workers = n;
        }
        if let Some(v) = lookup(ENV_SCHED) {
            self.scheduler = v.trim().parse().map_err(|_| InitError::InvalidEnv {
                var: ENV_SCHED,
                value: v,
            })?;
        }
        Ok(())
    }

    pub fn apply_process_env(&mut self) -> Result<(), InitError> {
        self.apply_env(|k| std::env::var(k).ok())
    }
}
