use rayon::prelude::*;

use crate::error::{Error, Result};

/// Replicates per work unit. Fixed so that floating-point partial sums are
/// formed the same way whatever the thread count.
const CHUNK: u64 = 1024;

/// Folds `step` over replicates `0..replicates` in parallel chunks and merges
/// the chunk accumulators in replicate order.
pub(crate) fn fold_replicates<A, I, F, M>(replicates: u64, init: I, step: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) -> Result<()> + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = replicates.div_ceil(CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for r in c * CHUNK..((c + 1) * CHUNK).min(replicates) {
                step(&mut acc, r)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<A>>>()?;
    Ok(parts.into_iter().fold(init(), merge))
}

/// Runs `f` on a dedicated pool with `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}
