//! The Demazure (star) product on permutations.
//!
//! For a simple transposition `s` the product is
//!
//! ```text
//! t ⋆ s = t    if inversions(t·s) < inversions(t),
//! t ⋆ s = t·s  otherwise,
//! ```
//!
//! and `t ⋆ p` folds this over a reduced word of `p`. An independent route
//! computes the rank table of `t ⋆ p` directly:
//!
//! ```text
//! r^{t ⋆ p}(a, b) = max_{0 <= k <= d} ( r^p(a, k) + r^t(k, b) - (d - k) ),
//! ```
//!
//! which is nonnegative because the `k = d` term vanishes.

use crate::perm::{perm_from_rank_table, Perm, PermError, RankTable};

/// `t ⋆ s` for the simple transposition swapping `s` and `s + 1`.
pub fn star_simple(t: &Perm, s: usize) -> Result<Perm, PermError> {
    let simple = Perm::simple(t.degree(), s)?;
    // t·s swaps the word entries at positions s and s+1, so it loses an
    // inversion exactly when t(s) > t(s+1).
    if t.apply(s) > t.apply(s + 1) {
        Ok(t.clone())
    } else {
        t.compose(&simple)
    }
}

/// A reduced word `(b_1, ..., b_k)` with `p = s_{b_1} · s_{b_2} ⋯ s_{b_k}`,
/// obtained by bubble-sorting the one-line word (deterministic).
pub fn reduced_word(p: &Perm) -> Vec<usize> {
    let mut w = p.word().to_vec();
    let d = w.len();
    let mut swaps = Vec::with_capacity(p.inversions());
    loop {
        let mut done = true;
        for i in 0..d.saturating_sub(1) {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                swaps.push(i);
                done = false;
            }
        }
        if done {
            break;
        }
    }
    // Sorting multiplies p on the right by s_{i_1} ⋯ s_{i_k} to reach the
    // identity, so p itself is the reversed product.
    swaps.reverse();
    swaps
}

/// A second reduced word for `p`: the reverse of the bubble-sort word of
/// `p^{-1}` (generally a different word from `reduced_word(p)`).
pub fn reduced_word_via_inverse(p: &Perm) -> Vec<usize> {
    let mut w = reduced_word(&p.inverse());
    w.reverse();
    w
}

fn star_along(t: &Perm, word: &[usize]) -> Result<Perm, PermError> {
    let mut acc = t.clone();
    for &s in word {
        acc = star_simple(&acc, s)?;
    }
    Ok(acc)
}

/// The Demazure product `t ⋆ p`, folded over a reduced word of `p`.
pub fn star(t: &Perm, p: &Perm) -> Result<Perm, PermError> {
    if t.degree() != p.degree() {
        return Err(PermError::DegreeMismatch(t.degree(), p.degree()));
    }
    star_along(t, &reduced_word(p))
}

/// `t ⋆ p` via the rank-table maximum formula; agrees with `star` everywhere.
pub fn star_via_rank_formula(t: &Perm, p: &Perm) -> Result<Perm, PermError> {
    if t.degree() != p.degree() {
        return Err(PermError::DegreeMismatch(t.degree(), p.degree()));
    }
    let d = t.degree();
    let rp = RankTable::from_perm(p);
    let rt = RankTable::from_perm(t);
    let mut values = Vec::with_capacity((d + 1) * (d + 1));
    for a in 0..=d {
        for b in 0..=d {
            let best = (0..=d)
                .map(|k| rp.entry(a, k) as isize + rt.entry(k, b) as isize - (d - k) as isize)
                .max()
                .unwrap_or(0)
                .max(0);
            values.push(best as usize);
        }
    }
    let table = RankTable::from_values(d, values).expect("grid has the right shape");
    Ok(perm_from_rank_table(&table).expect("the star rank formula yields a permutation table"))
}
