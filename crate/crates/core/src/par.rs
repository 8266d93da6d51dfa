//! Order-preserving parallel map that falls back to a plain loop when the
//! `parallel` feature is off.

#[cfg(feature = "parallel")]
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Splits `[0, total)` into at most `parts` contiguous chunks.
pub(crate) fn chunks(total: u64, parts: u64) -> Vec<(u64, u64)> {
    let parts = parts.max(1).min(total.max(1));
    let step = total.div_ceil(parts);
    (0..parts)
        .map(|i| (i * step, ((i + 1) * step).min(total)))
        .filter(|(a, b)| a < b)
        .collect()
}
