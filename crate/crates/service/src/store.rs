use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use swarmbench_core::{AlgorithmParams, IterationRecord, Problem, RunConfig, RunTrace};

/// Runs kept in memory; older terminal runs are evicted least-recently-used first.
pub const RUN_CAPACITY: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Pending,
    Running,
    Done,
    Cancelled,
    Failed,
}

impl RunStatus {
    pub const ALL: [RunStatus; 5] = [
        RunStatus::Pending,
        RunStatus::Running,
        RunStatus::Done,
        RunStatus::Cancelled,
        RunStatus::Failed,
    ];

    pub fn is_terminal(self) -> bool {
        matches!(self, RunStatus::Done | RunStatus::Cancelled | RunStatus::Failed)
    }

    /// The declared edges: pending → running | cancelled, running → done | cancelled | failed.
    pub fn can_become(self, next: RunStatus) -> bool {
        use RunStatus::*;
        matches!(
            (self, next),
            (Pending, Running) | (Pending, Cancelled) | (Running, Done) | (Running, Cancelled) | (Running, Failed)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Pending => "pending",
            RunStatus::Running => "running",
            RunStatus::Done => "done",
            RunStatus::Cancelled => "cancelled",
            RunStatus::Failed => "failed",
        }
    }
}

pub fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

/// What the client asked for, echoed back on every poll.
#[derive(Clone, Debug, Serialize)]
pub struct RunRequestEcho {
    pub problem_id: String,
    #[serde(flatten)]
    pub params: AlgorithmParams,
    pub seed: u64,
    pub iterations: usize,
    pub population: usize,
    pub stride: usize,
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[derive(Debug)]
pub struct RunState {
    pub status: RunStatus,
    pub history: Vec<RunStatus>,
    pub records: Vec<IterationRecord>,
    pub trace: Option<RunTrace>,
    pub error: Option<String>,
    pub started_at: Option<u64>,
    pub finished_at: Option<u64>,
}

/// One submitted run. Workers append records; pollers read them.
#[derive(Debug)]
pub struct RunEntry {
    pub id: String,
    pub request: RunRequestEcho,
    pub problem: Arc<Problem>,
    pub config: RunConfig,
    pub created_at: u64,
    cancel: AtomicBool,
    last_access: AtomicU64,
    state: Mutex<RunState>,
}

impl RunEntry {
    pub fn new(id: String, request: RunRequestEcho, problem: Arc<Problem>, config: RunConfig) -> Self {
        Self {
            id,
            request,
            problem,
            config,
            created_at: now_millis(),
            cancel: AtomicBool::new(false),
            last_access: AtomicU64::new(0),
            state: Mutex::new(RunState {
                status: RunStatus::Pending,
                history: vec![RunStatus::Pending],
                records: Vec::new(),
                trace: None,
                error: None,
                started_at: None,
                finished_at: None,
            }),
        }
    }

    pub fn state(&self) -> MutexGuard<'_, RunState> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn status(&self) -> RunStatus {
        self.state().status
    }

    pub fn cancel_requested(&self) -> bool {
        self.cancel.load(Ordering::Relaxed)
    }

    /// Moves to `next` if the edge is declared; returns whether it moved.
    pub fn transition(&self, next: RunStatus) -> bool {
        let mut state = self.state();
        Self::move_to(&mut state, next)
    }

    fn move_to(state: &mut RunState, next: RunStatus) -> bool {
        if !state.status.can_become(next) {
            return false;
        }
        state.status = next;
        state.history.push(next);
        match next {
            RunStatus::Running => state.started_at = Some(now_millis()),
            s if s.is_terminal() => state.finished_at = Some(now_millis()),
            _ => {}
        }
        true
    }

    /// Pending runs are cancelled at once; running runs get the flag and
    /// stop at the next iteration boundary. Returns the status afterwards,
    /// or `Err(status)` when the run had already finished.
    pub fn request_cancel(&self) -> Result<RunStatus, RunStatus> {
        let mut state = self.state();
        match state.status {
            RunStatus::Pending => {
                Self::move_to(&mut state, RunStatus::Cancelled);
                Ok(RunStatus::Cancelled)
            }
            RunStatus::Running => {
                self.cancel.store(true, Ordering::Relaxed);
                Ok(RunStatus::Running)
            }
            terminal => Err(terminal),
        }
    }

    pub fn push_record(&self, record: &IterationRecord) {
        self.state().records.push(record.clone());
    }

    pub fn finish(&self, outcome: Result<RunTrace, String>) {
        let mut state = self.state();
        match outcome {
            Ok(trace) => {
                let status = if trace.stop == swarmbench_core::StopReason::Cancelled {
                    RunStatus::Cancelled
                } else {
                    RunStatus::Done
                };
                state.records = trace.records.clone();
                state.trace = Some(trace);
                Self::move_to(&mut state, status);
            }
            Err(message) => {
                state.error = Some(message);
                Self::move_to(&mut state, RunStatus::Failed);
            }
        }
    }
}

#[derive(Debug, Default)]
struct Runs {
    entries: HashMap<String, Arc<RunEntry>>,
    next_id: u64,
}

/// All runs, bounded at [`RUN_CAPACITY`].
#[derive(Debug, Default)]
pub struct RunStore {
    runs: Mutex<Runs>,
    clock: AtomicU64,
}

impl RunStore {
    fn runs(&self) -> MutexGuard<'_, Runs> {
        self.runs.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn touch(&self, entry: &RunEntry) {
        entry
            .last_access
            .store(self.clock.fetch_add(1, Ordering::Relaxed) + 1, Ordering::Relaxed);
    }

    pub fn insert(&self, make: impl FnOnce(String) -> RunEntry) -> Arc<RunEntry> {
        let mut runs = self.runs();
        runs.next_id += 1;
        let entry = Arc::new(make(format!("run-{}", runs.next_id)));
        self.touch(&entry);
        while runs.entries.len() >= RUN_CAPACITY {
            let victim = runs
                .entries
                .values()
                .filter(|e| e.status().is_terminal())
                .min_by_key(|e| e.last_access.load(Ordering::Relaxed))
                .map(|e| e.id.clone());
            match victim {
                Some(id) => {
                    runs.entries.remove(&id);
                }
                None => break,
            }
        }
        runs.entries.insert(entry.id.clone(), Arc::clone(&entry));
        entry
    }

    pub fn get(&self, id: &str) -> Option<Arc<RunEntry>> {
        let entry = self.runs().entries.get(id).cloned()?;
        self.touch(&entry);
        Some(entry)
    }

    pub fn len(&self) -> usize {
        self.runs().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
