//! Multi-threaded driver for the perimeter-ratio triple scan.
//!
//! Workers pull indices from a shared counter and store each partial
//! result in its own slot. Slots are merged in index order, so the result
//! and its witness do not depend on the thread count or on scheduling.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;
use triperi_core::{Candidate, Error, Scalar, Triple, TripleScan};

pub const THREADS_ENV: &str = "TRIPERI_THREADS";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{THREADS_ENV} must be a positive integer, got `{0}`")]
pub struct ThreadsError(pub String);

/// Reads the worker count from the environment, defaulting to the available
/// parallelism.
pub fn threads_from_env() -> Result<NonZeroUsize, ThreadsError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => parse_threads(&v),
        Err(std::env::VarError::NotPresent) => Ok(default_threads()),
        Err(std::env::VarError::NotUnicode(v)) => Err(ThreadsError(v.to_string_lossy().into_owned())),
    }
}

pub fn parse_threads(value: &str) -> Result<NonZeroUsize, ThreadsError> {
    value
        .trim()
        .parse::<NonZeroUsize>()
        .map_err(|_| ThreadsError(value.to_string()))
}

fn default_threads() -> NonZeroUsize {
    std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN)
}

/// Evaluates `f(0), ..., f(n - 1)` across `threads` workers, returning the
/// results in index order.
pub fn map_indexed<T, F>(n: usize, threads: NonZeroUsize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = threads.get().min(n);
    if workers <= 1 {
        return (0..n).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let value = f(i);
                *slots[i].lock().expect("slot lock") = Some(value);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every index is evaluated"))
        .collect()
}

/// Runs `scan` across `threads` workers.
pub fn scan_parallel(scan: &TripleScan, threads: NonZeroUsize) -> Result<(Scalar, Triple), Error> {
    let parts = map_indexed(scan.len(), threads, |i| scan.scan_first(i))
        .into_iter()
        .collect::<Result<Vec<Option<Candidate>>, _>>()?;
    scan.finish(scan.merge(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use triperi_core::{make_paper_space, PaperSpaceParams};

    #[test]
    fn thread_count_parsing() {
        assert_eq!(parse_threads("4").unwrap().get(), 4);
        assert_eq!(parse_threads(" 1 ").unwrap().get(), 1);
        for bad in ["0", "-2", "two", "", "1.5"] {
            assert!(parse_threads(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn matches_sequential_scan() {
        let (space, map) = make_paper_space(PaperSpaceParams::with_window(24).unwrap()).unwrap();
        let scan = TripleScan::new(&space, &map, Some(24)).unwrap();
        let expected = scan.run().unwrap();
        for t in [1, 2, 3, 8, 64] {
            assert_eq!(scan_parallel(&scan, NonZeroUsize::new(t).unwrap()).unwrap(), expected);
        }
    }
}
