use thiserror::Error;

use super::data::HandleId;
use super::TaskId;

#[derive(Debug, Error)]
pub enum InitError {
    #[error(
        "variant '{function_name}' of interface '{interface}' has no registered implementation"
    )]
    UnresolvedVariant {
        interface: String,
        function_name: String,
    },
    #[error("no workers available after applying device masks")]
    NoWorkers,
    #[error("the runtime is already initialized")]
    AlreadyInitialized,
    #[error("invalid value '{value}' for {var}")]
    InvalidEnv { var: &'static str, value: String },
    #[error("failed to start worker thread: {0}")]
    Spawn(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegError {
    #[error("extent {axis} is zero")]
    ZeroExtent { axis: usize },
    #[error("data must have 1 to 4 dimensions, found {0}")]
    BadRank(usize),
    #[error("initial contents do not match the description: {0}")]
    ContentMismatch(String),
    #[error("the runtime has shut down")]
    ShutDown,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubmitError {
    #[error("unknown interface '{0}'")]
    UnknownInterface(String),
    #[error("interface '{0}' has no variant that any configured worker can run")]
    Unschedulable(String),
    #[error("interface '{interface}' takes {expected} arguments, found {found}")]
    Arity {
        interface: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {position} ('{parameter}') must be {expected}")]
    ArgKind {
        position: usize,
        parameter: String,
        expected: &'static str,
    },
    #[error("handle {0} is not registered")]
    UnknownHandle(HandleId),
    #[error("argument '{parameter}' expects {expected} data with {rank} dimension(s)")]
    Shape {
        parameter: String,
        expected: String,
        rank: usize,
    },
    #[error("handle {0} is bound more than once in one task")]
    DuplicateHandle(HandleId),
    #[error("the runtime has shut down")]
    ShutDown,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WaitError {
    #[error("unknown task {0}")]
    UnknownTask(TaskId),
    #[error("task {task} failed in variant '{variant}': {message}")]
    Failed {
        task: TaskId,
        variant: String,
        message: String,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnregError {
    #[error("handle {0} was never registered")]
    Unknown(HandleId),
    #[error("handle {0} is already unregistered")]
    AlreadyUnregistered(HandleId),
    #[error("handle {handle} still has {pending} pending task(s)")]
    Pending { handle: HandleId, pending: usize },
}

#[derive(Debug, Error)]
pub enum PerfFileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("performance model line {line}: {message}")]
    Format { line: usize, message: String },
}
