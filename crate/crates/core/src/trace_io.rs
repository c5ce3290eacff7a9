//! Trace files.
//!
//! JSONL: the first line is the [`TraceHeader`] object, then one
//! [`IterationRecord`] object per line with keys `iter`, `best`,
//! `iter_best`, `mean` and `candidate`. CSV: a header row
//! `iter,best,iter_best,mean` and one row per record; candidates are
//! omitted. Numbers use the shortest representation that reads back to the
//! same `f64`.

use std::io::{BufRead, Write};
use std::time::Duration;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::problem::{Candidate, SpaceKind};
use crate::run::{IterationRecord, RunTrace, Solution, StopReason, TraceHeader};

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidTrace(format!("i/o: {e}"))
}

pub fn write_jsonl(trace: &RunTrace, out: &mut impl Write) -> Result<()> {
    let header = serde_json::to_string(&trace.header).map_err(|e| Error::InvalidTrace(e.to_string()))?;
    writeln!(out, "{header}").map_err(io_error)?;
    for record in &trace.records {
        let line = serde_json::to_string(record).map_err(|e| Error::InvalidTrace(e.to_string()))?;
        writeln!(out, "{line}").map_err(io_error)?;
    }
    Ok(())
}

pub fn write_csv(trace: &RunTrace, out: &mut impl Write) -> Result<()> {
    writeln!(out, "iter,best,iter_best,mean").map_err(io_error)?;
    for r in &trace.records {
        writeln!(out, "{},{},{},{}", r.iteration, r.best_so_far, r.iter_best, r.mean).map_err(io_error)?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct RecordLine {
    iter: usize,
    best: f64,
    iter_best: f64,
    mean: f64,
    candidate: Value,
}

fn candidate(kind: SpaceKind, value: Value) -> serde_json::Result<Candidate> {
    Ok(match kind {
        SpaceKind::Continuous => Candidate::Position(serde_json::from_value(value)?),
        SpaceKind::Tour => Candidate::Tour(serde_json::from_value(value)?),
    })
}

/// Reads a JSONL trace back. The final solution is recomputed from the
/// records; the duration is not stored and reads as zero.
pub fn read_jsonl(input: impl BufRead) -> Result<RunTrace> {
    let mut lines = input.lines().enumerate().filter(|(_, l)| match l {
        Ok(l) => !l.trim().is_empty(),
        Err(_) => true,
    });
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::InvalidTrace("empty trace file".into()))?;
    let header: TraceHeader = serde_json::from_str(&first.map_err(io_error)?)
        .map_err(|e| Error::InvalidTrace(format!("line 1: bad header: {e}")))?;

    let mut records: Vec<IterationRecord> = Vec::new();
    for (index, line) in lines {
        let bad = |e: serde_json::Error| Error::InvalidTrace(format!("line {}: {e}", index + 1));
        let raw: RecordLine = serde_json::from_str(&line.map_err(io_error)?).map_err(bad)?;
        if records.last().is_some_and(|r| r.iteration >= raw.iter) {
            return Err(Error::InvalidTrace(format!(
                "line {}: iteration {} is out of order",
                index + 1,
                raw.iter
            )));
        }
        records.push(IterationRecord {
            iteration: raw.iter,
            best_so_far: raw.best,
            iter_best: raw.iter_best,
            mean: raw.mean,
            candidate: candidate(header.kind, raw.candidate).map_err(bad)?,
        });
    }
    let solution = Solution::from_records(&records)?;
    let last = records.last().expect("solution found a record");
    let stop = if header.target.is_some_and(|t| last.best_so_far <= t) {
        StopReason::TargetReached
    } else if last.iteration == header.iterations {
        StopReason::Completed
    } else {
        StopReason::Cancelled
    };
    Ok(RunTrace {
        header,
        records,
        solution,
        stop,
        duration: Duration::ZERO,
    })
}
