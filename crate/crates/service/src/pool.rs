use std::sync::mpsc::{self, Sender};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};

use log::{debug, warn};
use swarmbench_core::{run, IterationRecord, Observer};

use crate::store::{RunEntry, RunStatus};

pub const DEFAULT_WORKERS: usize = 4;

/// Worker count from `SWARMBENCH_WORKERS`, falling back to [`DEFAULT_WORKERS`].
pub fn workers_from_env() -> usize {
    match std::env::var("SWARMBENCH_WORKERS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                warn!("ignoring SWARMBENCH_WORKERS={raw:?}; using {DEFAULT_WORKERS}");
                DEFAULT_WORKERS
            }
        },
        Err(_) => DEFAULT_WORKERS,
    }
}

struct Recorder<'a>(&'a RunEntry);

impl Observer for Recorder<'_> {
    fn on_record(&mut self, record: &IterationRecord) {
        self.0.push_record(record);
    }

    fn cancelled(&self) -> bool {
        self.0.cancel_requested()
    }
}

fn execute(entry: &RunEntry) {
    if !entry.transition(RunStatus::Running) {
        debug!("{} skipped ({})", entry.id, entry.status().as_str());
        return;
    }
    let outcome = run(
        &entry.request.params,
        &entry.problem,
        &entry.config,
        &mut Recorder(entry),
    );
    debug!("{} finished: {:?}", entry.id, outcome.as_ref().map(|t| t.stop));
    entry.finish(outcome.map_err(|e| e.to_string()));
}

/// Fixed set of OS threads taking runs from one FIFO queue.
pub struct WorkerPool {
    sender: Option<Sender<Arc<RunEntry>>>,
    threads: Vec<JoinHandle<()>>,
}

impl WorkerPool {
    pub fn new(size: usize) -> Self {
        let (sender, receiver) = mpsc::channel::<Arc<RunEntry>>();
        let receiver = Arc::new(Mutex::new(receiver));
        let threads = (0..size.max(1))
            .map(|k| {
                let receiver = Arc::clone(&receiver);
                thread::Builder::new()
                    .name(format!("swarmbench-worker-{k}"))
                    .spawn(move || loop {
                        let next = receiver.lock().unwrap_or_else(|e| e.into_inner()).recv();
                        match next {
                            Ok(entry) => execute(&entry),
                            Err(_) => break,
                        }
                    })
                    .expect("spawn worker thread")
            })
            .collect();
        Self {
            sender: Some(sender),
            threads,
        }
    }

    pub fn size(&self) -> usize {
        self.threads.len()
    }

    pub fn submit(&self, entry: Arc<RunEntry>) {
        if let Some(sender) = &self.sender {
            // receivers live as long as the pool
            let _ = sender.send(entry);
        }
    }
}

impl Drop for WorkerPool {
    fn drop(&mut self) {
        self.sender.take();
        for t in self.threads.drain(..) {
            let _ = t.join();
        }
    }
}
