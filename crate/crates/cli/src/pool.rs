//! Bounded worker pool for independent, index-addressed jobs.
//!
//! Workers pull job indices from a shared counter and stash `(index,
//! result)` pairs locally; results are merged and sorted by index at the
//! end. Because every job is a pure function of its index, the output is
//! identical for any thread count or scheduling order.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Runs `job(0..jobs)` on up to `threads` workers, returning results in
/// index order.
pub fn run_indexed<T, F>(jobs: usize, threads: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = threads.max(1).min(jobs.max(1));
    if workers <= 1 {
        return (0..jobs).map(job).collect();
    }
    let next = AtomicUsize::new(0);
    let mut indexed: Vec<(usize, T)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= jobs {
                            break;
                        }
                        local.push((i, job(i)));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, t)| t).collect()
}

/// Thread count: explicit flag, then the `NS_SPECTRA_THREADS` environment
/// variable, then whatever the machine reports.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    if let Some(n) = flag {
        return n.max(1);
    }
    if let Ok(raw) = std::env::var("NS_SPECTRA_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_in_index_order_for_any_thread_count() {
        let serial = run_indexed(37, 1, |i| i * i);
        for threads in [2, 4, 8] {
            assert_eq!(run_indexed(37, threads, |i| i * i), serial);
        }
    }

    #[test]
    fn zero_jobs_is_fine() {
        let out: Vec<usize> = run_indexed(0, 4, |i| i);
        assert!(out.is_empty());
    }
}
