//! Multi-threaded census driver. The enumeration is split on the partner of
//! half-edge 0 and the branch tables are merged in partner order, so the
//! result does not depend on the thread count.

use std::num::NonZeroUsize;
use std::thread;

use eqmap_core::oracle::{census, census_branch, MapCensus, VertexProfile};

use crate::CliError;

pub const THREADS_ENV: &str = "EQMAP_THREADS";

/// Thread cap from `EQMAP_THREADS`, falling back to the available parallelism.
pub fn thread_limit() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1))
}

pub fn parallel_census(profile: &VertexProfile, threads: usize) -> Result<MapCensus, CliError> {
    let h = profile.half_edges();
    if threads <= 1 || h % 2 == 1 || h < 4 {
        return Ok(census(profile)?);
    }
    let partners: Vec<usize> = (1..h).collect();
    let workers = threads.min(partners.len());
    let mut branches: Vec<(usize, MapCensus)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let mine: Vec<usize> = partners.iter().copied().skip(w).step_by(workers).collect();
                s.spawn(move || mine.into_iter().map(|p| census_branch(profile, p).map(|c| (p, c))).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("census worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    branches.sort_by_key(|(p, _)| *p);
    let mut total = MapCensus::empty(profile.clone());
    for (_, b) in &branches {
        total.merge(b)?;
    }
    Ok(total)
}
