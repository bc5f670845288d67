use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Condvar, Mutex, MutexGuard, RwLock};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::manifest::InterfaceManifest;
use crate::model::{AccessMode, InterfaceSpec, ProgramModel, TargetModel};

use super::config::{DeviceKind, RuntimeConfig, Timing};
use super::data::{Buffer, DataDesc, HandleId, HandleInfo, KernelArgs, Scalar, Slot, TaskArg};
use super::error::{InitError, PerfFileError, RegError, SubmitError, UnregError, WaitError};
use super::perf::{footprint_bucket, PerfKey, PerfModel};
use super::scheduler::{
    decide, Choice, DecisionInput, DecisionMode, SchedulerDecision, VariantView, WorkerView,
};
use super::TaskId;

pub type Kernel = Arc<dyn Fn(&mut KernelArgs<'_>) -> Result<(), String> + Send + Sync>;
pub type CostFn = Arc<dyn Fn(&CostInput<'_>) -> Duration + Send + Sync>;

/// Arguments of a synthetic cost function.
pub struct CostInput<'a> {
    /// Extents of each bound buffer.
    pub extents: &'a [Vec<usize>],
    pub scalars: &'a [Scalar],
    /// Total bytes over all bound buffers.
    pub footprint: usize,
}

#[derive(Clone)]
pub struct VariantImpl {
    pub kernel: Kernel,
    pub cost: Option<CostFn>,
}

/// Name to implementation bindings, resolved against the manifest at init.
#[derive(Clone, Default)]
pub struct Registry {
    map: HashMap<String, VariantImpl>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<F>(&mut self, function_name: &str, kernel: F) -> &mut Self
    where
        F: Fn(&mut KernelArgs<'_>) -> Result<(), String> + Send + Sync + 'static,
    {
        self.map.insert(
            function_name.to_string(),
            VariantImpl {
                kernel: Arc::new(kernel),
                cost: None,
            },
        );
        self
    }

    /// Like [`Registry::register`], with a synthetic cost used by the
    /// `Sleep` and `Virtual` timing modes.
    pub fn register_with_cost<F, C>(&mut self, function_name: &str, kernel: F, cost: C) -> &mut Self
    where
        F: Fn(&mut KernelArgs<'_>) -> Result<(), String> + Send + Sync + 'static,
        C: Fn(&CostInput<'_>) -> Duration + Send + Sync + 'static,
    {
        self.map.insert(
            function_name.to_string(),
            VariantImpl {
                kernel: Arc::new(kernel),
                cost: Some(Arc::new(cost)),
            },
        );
        self
    }

    pub fn contains(&self, function_name: &str) -> bool {
        self.map.contains_key(function_name)
    }

    pub fn get(&self, function_name: &str) -> Option<&VariantImpl> {
        self.map.get(function_name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskState {
    Submitted,
    Ready,
    Running,
    Done,
    Failed,
}

/// What [`Runtime::wait`] returns for a completed task.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskReport {
    pub task: TaskId,
    pub interface: String,
    pub function_name: String,
    pub target: TargetModel,
    pub worker: usize,
    pub class: DeviceKind,
    pub mode: DecisionMode,
    /// Duration fed to the performance model.
    pub duration: Duration,
    /// Expected transfer cost charged when the task was scheduled.
    pub transfer_ns: f64,
    /// Global order in which tasks started running.
    pub start_seq: u64,
    /// Write epoch of every bound handle when the task started.
    pub read_epochs: Vec<(HandleId, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantInfo {
    pub function_name: String,
    pub target: TargetModel,
    pub schedulable: bool,
}

struct CodeletVariant {
    function_name: String,
    target: TargetModel,
    class: DeviceKind,
    imp: VariantImpl,
}

struct Codelet {
    spec: InterfaceSpec,
    variants: Vec<CodeletVariant>,
    tie_rank: Vec<usize>,
}

struct HandleState {
    desc: DataDesc,
    data: Arc<RwLock<Buffer>>,
    resident: [bool; 2],
    epoch: u64,
    queue: VecDeque<(TaskId, AccessMode)>,
}

struct TaskRecord {
    codelet: usize,
    bindings: Vec<(HandleId, AccessMode)>,
    scalars: Vec<Scalar>,
    bucket: u32,
    state: TaskState,
    choice: Option<Choice>,
    start_seq: u64,
    read_epochs: Vec<(HandleId, u64)>,
    outcome: Option<Result<TaskReport, WaitError>>,
}

struct Job {
    task: TaskId,
    imp: VariantImpl,
    data: Vec<(Arc<RwLock<Buffer>>, AccessMode)>,
    extents: Vec<Vec<usize>>,
    scalars: Vec<Scalar>,
    footprint: usize,
}

struct State {
    tasks: Vec<TaskRecord>,
    handles: HashMap<HandleId, HandleState>,
    next_handle: u64,
    retired: HashSet<HandleId>,
    perf: PerfModel,
    in_flight: HashMap<PerfKey, u64>,
    backlog: Vec<f64>,
    active: Vec<usize>,
    start_counter: u64,
    open: bool,
    senders: Vec<Sender<Job>>,
    waiting: BTreeSet<u64>,
    unfinished: usize,
    decisions: Vec<SchedulerDecision>,
}

struct Shared {
    config: RuntimeConfig,
    workers: Vec<DeviceKind>,
    codelets: Vec<Codelet>,
    state: Mutex<State>,
    changed: Condvar,
}

/// A running task runtime: codelets built from a manifest, one thread per
/// worker, and a scheduler deciding variant and worker for each ready task.
pub struct Runtime {
    shared: Arc<Shared>,
    threads: Mutex<Vec<JoinHandle<()>>>,
}

impl Runtime {
    /// Starts a runtime. With `honor_env` set, the masking variables are
    /// applied to `config` first.
    pub fn init(
        model: &ProgramModel,
        registry: &Registry,
        mut config: RuntimeConfig,
    ) -> Result<Runtime, InitError> {
        if config.honor_env {
            config.apply_process_env()?;
        }
        let mut workers = vec![DeviceKind::Cpu; config.cpu.workers];
        workers.extend(std::iter::repeat_n(DeviceKind::Gpu, config.gpu.workers));
        if workers.is_empty() {
            return Err(InitError::NoWorkers);
        }

        let mut codelets = Vec::with_capacity(model.interfaces.len());
        for (i, spec) in model.interfaces.iter().enumerate() {
            let mut variants = Vec::with_capacity(spec.variants.len());
            for v in &spec.variants {
                let imp =
                    registry
                        .get(&v.function_name)
                        .ok_or_else(|| InitError::UnresolvedVariant {
                            interface: spec.name.clone(),
                            function_name: v.function_name.clone(),
                        })?;
                let class = DeviceKind::for_target(v.target);
                if config.class(class).workers == 0 {
                    log::warn!(
                        "variant '{}' of '{}' is unschedulable: no {} workers",
                        v.function_name,
                        spec.name,
                        class
                    );
                }
                variants.push(CodeletVariant {
                    function_name: v.function_name.clone(),
                    target: v.target,
                    class,
                    imp: imp.clone(),
                });
            }
            let mut order: Vec<usize> = (0..variants.len()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i as u64));
            order.shuffle(&mut rng);
            let mut tie_rank = vec![0; order.len()];
            for (rank, &v) in order.iter().enumerate() {
                tie_rank[v] = rank;
            }
            codelets.push(Codelet {
                spec: spec.clone(),
                variants,
                tie_rank,
            });
        }

        let mut senders = Vec::with_capacity(workers.len());
        let mut receivers = Vec::with_capacity(workers.len());
        for _ in &workers {
            let (tx, rx) = channel::<Job>();
            senders.push(tx);
            receivers.push(rx);
        }
        let n = workers.len();
        let shared = Arc::new(Shared {
            config,
            workers,
            codelets,
            state: Mutex::new(State {
                tasks: Vec::new(),
                handles: HashMap::new(),
                next_handle: 0,
                retired: HashSet::new(),
                perf: PerfModel::new(),
                in_flight: HashMap::new(),
                backlog: vec![0.0; n],
                active: vec![0; n],
                start_counter: 0,
                open: true,
                senders,
                waiting: BTreeSet::new(),
                unfinished: 0,
                decisions: Vec::new(),
            }),
            changed: Condvar::new(),
        });

        let runtime = Runtime {
            shared: Arc::clone(&shared),
            threads: Mutex::new(Vec::with_capacity(n)),
        };
        for (index, rx) in receivers.into_iter().enumerate() {
            let sh = Arc::clone(&shared);
            let handle = std::thread::Builder::new()
                .name(format!("compar-{}-{index}", shared.workers[index]))
                .spawn(move || worker_loop(sh, index, rx))?;
            runtime.threads.lock().unwrap().push(handle);
        }
        Ok(runtime)
    }

    pub fn from_manifest(
        manifest: &InterfaceManifest,
        registry: &Registry,
        config: RuntimeConfig,
    ) -> Result<Runtime, InitError> {
        Runtime::init(&manifest.to_model(), registry, config)
    }

    /// The configuration after environment overrides.
    pub fn config(&self) -> &RuntimeConfig {
        &self.shared.config
    }

    /// Device class of each worker, CPU workers first.
    pub fn workers(&self) -> &[DeviceKind] {
        &self.shared.workers
    }

    pub fn codelet_count(&self) -> usize {
        self.shared.codelets.len()
    }

    pub fn variants(&self, interface: &str) -> Option<Vec<VariantInfo>> {
        let c = self.shared.codelet(interface)?;
        Some(
            c.variants
                .iter()
                .map(|v| VariantInfo {
                    function_name: v.function_name.clone(),
                    target: v.target,
                    schedulable: self.shared.config.class(v.class).workers > 0,
                })
                .collect(),
        )
    }

    pub fn register_data(
        &self,
        desc: DataDesc,
        contents: Option<Buffer>,
    ) -> Result<HandleId, RegError> {
        desc.validate()?;
        let buffer = match contents {
            Some(b) => {
                if b.elem_type() != desc.elem_type {
                    return Err(RegError::ContentMismatch(format!(
                        "element type {} but description says {}",
                        b.elem_type(),
                        desc.elem_type
                    )));
                }
                if b.len() != desc.elements() {
                    return Err(RegError::ContentMismatch(format!(
                        "{} elements but extents give {}",
                        b.len(),
                        desc.elements()
                    )));
                }
                b
            }
            None => Buffer::zeros(desc.elem_type, desc.elements()),
        };
        let mut st = self.shared.lock();
        if !st.open {
            return Err(RegError::ShutDown);
        }
        let id = HandleId(st.next_handle);
        st.next_handle += 1;
        st.handles.insert(
            id,
            HandleState {
                desc,
                data: Arc::new(RwLock::new(buffer)),
                resident: [true, false],
                epoch: 0,
                queue: VecDeque::new(),
            },
        );
        Ok(id)
    }

    pub fn handle_info(&self, handle: HandleId) -> Option<HandleInfo> {
        let st = self.shared.lock();
        let h = st.handles.get(&handle)?;
        Some(HandleInfo {
            id: handle,
            desc: h.desc.clone(),
            footprint: h.desc.footprint(),
            resident_on: DeviceKind::ALL
                .into_iter()
                .filter(|k| h.resident[k.index()])
                .collect(),
            write_epoch: h.epoch,
            pending_tasks: h.queue.len(),
        })
    }

    /// Submits one invocation of `interface`. `args` follow the interface's
    /// parameter order. Returns without waiting for execution.
    pub fn submit(&self, interface: &str, args: &[TaskArg]) -> Result<TaskId, SubmitError> {
        let shared = &self.shared;
        let ci = shared
            .codelets
            .iter()
            .position(|c| c.spec.name == interface)
            .ok_or_else(|| SubmitError::UnknownInterface(interface.to_string()))?;
        let codelet = &shared.codelets[ci];
        if !codelet
            .variants
            .iter()
            .any(|v| shared.config.class(v.class).workers > 0)
        {
            return Err(SubmitError::Unschedulable(interface.to_string()));
        }
        let params = &codelet.spec.parameters;
        if args.len() != params.len() {
            return Err(SubmitError::Arity {
                interface: interface.to_string(),
                expected: params.len(),
                found: args.len(),
            });
        }

        let mut st = shared.lock();
        if !st.open {
            return Err(SubmitError::ShutDown);
        }
        let mut bindings = Vec::new();
        let mut scalars = Vec::new();
        let mut footprint = 0usize;
        for (position, (p, arg)) in params.iter().zip(args).enumerate() {
            match (p.is_scalar(), arg) {
                (true, TaskArg::Scalar(s)) => scalars.push(*s),
                (false, TaskArg::Handle(h)) => {
                    let hs = st.handles.get(h).ok_or(SubmitError::UnknownHandle(*h))?;
                    if hs.desc.elem_type != p.elem_type || hs.desc.extents.len() != p.dims.len() {
                        return Err(SubmitError::Shape {
                            parameter: p.name.clone(),
                            expected: p.elem_type.to_string(),
                            rank: p.dims.len(),
                        });
                    }
                    if bindings.iter().any(|(b, _)| b == h) {
                        return Err(SubmitError::DuplicateHandle(*h));
                    }
                    footprint += hs.desc.footprint();
                    bindings.push((*h, p.access));
                }
                (scalar, _) => {
                    return Err(SubmitError::ArgKind {
                        position,
                        parameter: p.name.clone(),
                        expected: if scalar { "a scalar" } else { "a data handle" },
                    })
                }
            }
        }

        let id = TaskId(st.tasks.len() as u64);
        for (h, mode) in &bindings {
            st.handles
                .get_mut(h)
                .expect("checked above")
                .queue
                .push_back((id, *mode));
        }
        st.tasks.push(TaskRecord {
            codelet: ci,
            bindings,
            scalars,
            bucket: footprint_bucket(footprint),
            state: TaskState::Submitted,
            choice: None,
            start_seq: 0,
            read_epochs: Vec::new(),
            outcome: None,
        });
        st.waiting.insert(id.0);
        st.unfinished += 1;
        shared.dispatch_ready(&mut st);
        Ok(id)
    }

    /// Blocks until the task is done or failed.
    pub fn wait(&self, task: TaskId) -> Result<TaskReport, WaitError> {
        let mut st = self.shared.lock();
        loop {
            let rec = st
                .tasks
                .get(task.0 as usize)
                .ok_or(WaitError::UnknownTask(task))?;
            if let Some(outcome) = &rec.outcome {
                return outcome.clone();
            }
            st = self.shared.changed.wait(st).unwrap();
        }
    }

    /// Blocks until every submitted task has finished.
    pub fn wait_all(&self) {
        let mut st = self.shared.lock();
        while st.unfinished > 0 {
            st = self.shared.changed.wait(st).unwrap();
        }
    }

    pub fn task_state(&self, task: TaskId) -> Option<TaskState> {
        self.shared
            .lock()
            .tasks
            .get(task.0 as usize)
            .map(|t| t.state)
    }

    /// Invalidates the handle and returns its latest contents.
    pub fn unregister(&self, handle: HandleId) -> Result<Buffer, UnregError> {
        let mut st = self.shared.lock();
        if st.retired.contains(&handle) {
            return Err(UnregError::AlreadyUnregistered(handle));
        }
        let h = st.handles.get(&handle).ok_or(UnregError::Unknown(handle))?;
        if !h.queue.is_empty() {
            return Err(UnregError::Pending {
                handle,
                pending: h.queue.len(),
            });
        }
        let h = st.handles.remove(&handle).expect("present");
        st.retired.insert(handle);
        drop(st);
        Ok(match Arc::try_unwrap(h.data) {
            Ok(lock) => lock.into_inner().unwrap_or_else(|e| e.into_inner()),
            Err(shared) => shared.read().unwrap_or_else(|e| e.into_inner()).clone(),
        })
    }

    pub fn perf_model(&self) -> PerfModel {
        self.shared.lock().perf.clone()
    }

    pub fn save_perf_model(&self, path: &Path) -> Result<(), PerfFileError> {
        let text = self.shared.lock().perf.to_text();
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Merges the records in `path` into the current model.
    pub fn load_perf_model(&self, path: &Path) -> Result<(), PerfFileError> {
        let loaded = PerfModel::load(path)?;
        self.shared.lock().perf.merge(&loaded);
        Ok(())
    }

    pub fn merge_perf_model(&self, model: &PerfModel) {
        self.shared.lock().perf.merge(model);
    }

    /// Every scheduling decision so far, in the order they were made.
    pub fn decisions(&self) -> Vec<SchedulerDecision> {
        self.shared.lock().decisions.clone()
    }

    /// Waits for outstanding tasks, stops the workers and refuses further
    /// submissions. Called by `Drop` if not called explicitly.
    pub fn shutdown(&self) {
        {
            let mut st = self.shared.lock();
            st.open = false;
            while st.unfinished > 0 {
                st = self.shared.changed.wait(st).unwrap();
            }
            st.senders.clear();
        }
        let threads: Vec<_> = self.threads.lock().unwrap().drain(..).collect();
        for t in threads {
            let _ = t.join();
        }
    }
}

impl Drop for Runtime {
    fn drop(&mut self) {
        self.shutdown();
    }
}

impl Shared {
    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn codelet(&self, name: &str) -> Option<&Codelet> {
        self.codelets.iter().find(|c| c.spec.name == name)
    }

    fn is_ready(st: &State, task: &TaskRecord, id: TaskId) -> bool {
        task.bindings.iter().all(|(h, mode)| {
            let queue = &st.handles[h].queue;
            let pos = queue
                .iter()
                .position(|(t, _)| *t == id)
                .expect("task is queued");
            if mode.writes() {
                pos == 0
            } else {
                queue.iter().take(pos).all(|(_, m)| !m.writes())
            }
        })
    }

    /// Schedules every waiting task that became ready, lowest id first.
    fn dispatch_ready(&self, st: &mut State) {
        let candidates: Vec<u64> = st.waiting.iter().copied().collect();
        for raw in candidates {
            let id = TaskId(raw);
            if !Self::is_ready(st, &st.tasks[raw as usize], id) {
                continue;
            }
            st.waiting.remove(&raw);
            self.dispatch(st, id);
        }
    }

    fn dispatch(&self, st: &mut State, id: TaskId) {
        let rec = &st.tasks[id.0 as usize];
        let codelet = &self.codelets[rec.codelet];
        let iface = &codelet.spec.name;

        let mut transfer_ns = [0.0; 2];
        for kind in DeviceKind::ALL {
            let class = self.config.class(kind);
            transfer_ns[kind.index()] = rec
                .bindings
                .iter()
                .filter(|(h, mode)| mode.reads() && !st.handles[h].resident[kind.index()])
                .fold(0.0, |acc, (h, _)| {
                    acc + class.transfer_ns(st.handles[h].desc.footprint())
                });
        }
        let variants: Vec<VariantView> = codelet
            .variants
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let key = PerfKey::new(iface, &v.function_name, rec.bucket);
                VariantView {
                    class: v.class,
                    stats: st.perf.get(&key).copied(),
                    in_flight: st.in_flight.get(&key).copied().unwrap_or(0),
                    tie_rank: codelet.tie_rank[i],
                }
            })
            .collect();
        let workers: Vec<WorkerView> = self
            .workers
            .iter()
            .enumerate()
            .map(|(i, &class)| WorkerView {
                class,
                backlog_ns: st.backlog[i],
                idle: st.active[i] == 0,
            })
            .collect();
        let choice = decide(&DecisionInput {
            policy: self.config.scheduler,
            calibration_samples: self.config.calibration_samples,
            variants: &variants,
            workers: &workers,
            transfer_ns,
        })
        .expect("submission checked schedulability");

        let variant = &codelet.variants[choice.variant];
        let key = PerfKey::new(iface, &variant.function_name, rec.bucket);
        st.decisions.push(SchedulerDecision {
            task: id,
            interface: iface.clone(),
            variant: choice.variant,
            function_name: variant.function_name.clone(),
            worker: choice.worker,
            class: variant.class,
            bucket: rec.bucket,
            mode: choice.mode,
            cost: choice.cost,
        });
        let job = Job {
            task: id,
            imp: variant.imp.clone(),
            data: rec
                .bindings
                .iter()
                .map(|(h, m)| (Arc::clone(&st.handles[h].data), *m))
                .collect(),
            extents: rec
                .bindings
                .iter()
                .map(|(h, _)| st.handles[h].desc.extents.clone())
                .collect(),
            scalars: rec.scalars.clone(),
            footprint: rec
                .bindings
                .iter()
                .map(|(h, _)| st.handles[h].desc.footprint())
                .sum(),
        };
        *st.in_flight.entry(key).or_insert(0) += 1;
        st.backlog[choice.worker] += choice.cost.exec_ns + choice.cost.transfer_ns;
        st.active[choice.worker] += 1;
        let rec = &mut st.tasks[id.0 as usize];
        rec.state = TaskState::Ready;
        rec.choice = Some(choice);
        st.senders[choice.worker]
            .send(job)
            .expect("worker alive while runtime is open");
    }

    fn begin(&self, id: TaskId) {
        let mut st = self.lock();
        let seq = st.start_counter;
        st.start_counter += 1;
        let epochs: Vec<(HandleId, u64)> = st.tasks[id.0 as usize]
            .bindings
            .iter()
            .map(|(h, _)| (*h, st.handles[h].epoch))
            .collect();
        let rec = &mut st.tasks[id.0 as usize];
        rec.state = TaskState::Running;
        rec.start_seq = seq;
        rec.read_epochs = epochs;
    }

    fn complete(&self, id: TaskId, worker: usize, result: Result<(), String>, duration: Duration) {
        let mut st = self.lock();
        let st = &mut *st;
        let rec = &st.tasks[id.0 as usize];
        let choice = rec.choice.expect("dispatched");
        let codelet = &self.codelets[rec.codelet];
        let variant = &codelet.variants[choice.variant];
        let key = PerfKey::new(&codelet.spec.name, &variant.function_name, rec.bucket);
        if let Some(n) = st.in_flight.get_mut(&key) {
            *n -= 1;
        }
        if result.is_ok() {
            st.perf.record(key, duration.as_nanos() as f64);
        }

        let class = self.workers[worker];
        for (h, mode) in &rec.bindings {
            let hs = st.handles.get_mut(h).expect("handle outlives its tasks");
            if mode.writes() {
                hs.resident = [false; 2];
                hs.epoch += 1;
            }
            hs.resident[class.index()] = true;
            if let Some(pos) = hs.queue.iter().position(|(t, _)| *t == id) {
                hs.queue.remove(pos);
            }
        }

        st.active[worker] -= 1;
        st.backlog[worker] = if st.active[worker] == 0 {
            0.0
        } else {
            (st.backlog[worker] - choice.cost.exec_ns - choice.cost.transfer_ns).max(0.0)
        };

        let outcome = match result {
            Ok(()) => Ok(TaskReport {
                task: id,
                interface: codelet.spec.name.clone(),
                function_name: variant.function_name.clone(),
                target: variant.target,
                worker,
                class,
                mode: choice.mode,
                duration,
                transfer_ns: choice.cost.transfer_ns,
                start_seq: rec.start_seq,
                read_epochs: rec.read_epochs.clone(),
            }),
            Err(message) => Err(WaitError::Failed {
                task: id,
                variant: variant.function_name.clone(),
                message,
            }),
        };
        let rec = &mut st.tasks[id.0 as usize];
        rec.state = if outcome.is_ok() {
            TaskState::Done
        } else {
            TaskState::Failed
        };
        rec.outcome = Some(outcome);
        st.unfinished -= 1;
        self.dispatch_ready(st);
        self.changed.notify_all();
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "variant panicked".to_string()
    }
}

fn worker_loop(shared: Arc<Shared>, index: usize, rx: Receiver<Job>) {
    while let Ok(job) = rx.recv() {
        shared.begin(job.task);
        let Job {
            task,
            imp,
            data,
            extents,
            scalars,
            footprint,
        } = job;
        let started = Instant::now();
        let result = {
            let slots = data
                .iter()
                .map(|(lock, mode)| {
                    if mode.writes() {
                        Slot::Write(lock.write().unwrap_or_else(|e| e.into_inner()))
                    } else {
                        Slot::Read(lock.read().unwrap_or_else(|e| e.into_inner()))
                    }
                })
                .collect();
            let mut args = KernelArgs {
                slots,
                modes: data.iter().map(|(_, m)| *m).collect(),
                extents: extents.clone(),
                scalars: &scalars,
            };
            catch_unwind(AssertUnwindSafe(|| (imp.kernel)(&mut args)))
                .unwrap_or_else(|p| Err(panic_message(p)))
        };
        drop(data);
        let elapsed = started.elapsed();
        let synthetic = imp.cost.as_ref().map(|c| {
            c(&CostInput {
                extents: &extents,
                scalars: &scalars,
                footprint,
            })
        });
        let duration = match (shared.config.timing, synthetic) {
            (Timing::Virtual, Some(d)) => d,
            (Timing::Sleep, Some(d)) => {
                if d > elapsed {
                    std::thread::sleep(d - elapsed);
                }
                started.elapsed()
            }
            _ => elapsed,
        };
        shared.complete(task, index, result, duration);
    }
}
