//! Roulette-wheel selection.

/// Picks an index from `probs` with one uniform draw `u ∈ [0, 1)`.
///
/// Walks the cumulative sum and returns the first bucket whose upper edge
/// exceeds `u`. The last bucket absorbs any rounding residue, so `probs` need
/// not sum to exactly one. `probs` must be nonempty.
pub fn roulette_select(probs: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    let last = probs.len() - 1;
    for (i, p) in probs[..last].iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return i;
        }
    }
    last
}

/// Divides `weights` by their sum. The caller guarantees a positive finite sum.
pub(crate) fn normalize(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
}
