//! A process-wide runtime instance, the counterpart of the generated
//! `compar_init()` / `compar_terminate()` calls.

use std::sync::{Arc, Mutex};

use crate::model::ProgramModel;

use super::config::RuntimeConfig;
use super::engine::{Registry, Runtime};
use super::error::InitError;

static GLOBAL: Mutex<Option<Arc<Runtime>>> = Mutex::new(None);

pub fn init(
    model: &ProgramModel,
    registry: &Registry,
    config: RuntimeConfig,
) -> Result<Arc<Runtime>, InitError> {
    let mut slot = GLOBAL.lock().unwrap_or_else(|e| e.into_inner());
    if slot.is_some() {
        return Err(InitError::AlreadyInitialized);
    }
    let rt = Arc::new(Runtime::init(model, registry, config)?);
    *slot = Some(Arc::clone(&rt));
    Ok(rt)
}

pub fn get() -> Option<Arc<Runtime>> {
    GLOBAL.lock().unwrap_or_else(|e| e.into_inner()).clone()
}

/// Shuts the global runtime down. Returns false if none was running.
pub fn terminate() -> bool {
    let taken = GLOBAL.lock().unwrap_or_else(|e| e.into_inner()).take();
    match taken {
        Some(rt) => {
            rt.shutdown();
            true
        }
        None => false,
    }
}
