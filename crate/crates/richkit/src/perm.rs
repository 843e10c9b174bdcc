//! Permutations in zero-indexed one-line notation, rank tables, Bruhat order,
//! essential sets, pattern containment, and nests of sets.
//!
//! A permutation of degree `d` is a bijection of `{0, ..., d-1}` stored as the
//! word `(p(0), ..., p(d-1))`. Composition is `(p * q)(i) = p(q(i))`. The rank
//! function of `p` is
//!
//! ```text
//! r^p(a, b) = #{ a' : a' >= a and p(a') >= b },
//! ```
//!
//! stored on the grid `0 <= a, b <= d` (so boundary entries vanish). Bruhat
//! order is the entrywise comparison `p <= q  iff  r^p(a,b) >= r^q(a,b)` for
//! all `(a, b)`; the identity is the minimum and the descending permutation
//! the maximum.

use crate::text::{parse_csv_usize, ParseError};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("word {0:?} is not a permutation of 0..{1}")]
    NotAPermutation(Vec<usize>, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("simple transposition index {0} out of range for degree {1}")]
    SimpleOutOfRange(usize, usize),
}

/// A permutation of `{0, ..., d-1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    word: Vec<usize>,
}

impl Perm {
    /// Builds a permutation from a one-line word, validating bijectivity.
    pub fn from_word(word: Vec<usize>) -> Result<Perm, PermError> {
        let d = word.len();
        let mut seen = vec![false; d];
        for &v in &word {
            if v >= d || seen[v] {
                return Err(PermError::NotAPermutation(word.clone(), d));
            }
            seen[v] = true;
        }
        Ok(Perm { word })
    }

    /// The identity permutation of degree `d`.
    pub fn identity(d: usize) -> Perm {
        Perm { word: (0..d).collect() }
    }

    /// The descending permutation `i -> d - 1 - i`, the Bruhat maximum.
    pub fn descending(d: usize) -> Perm {
        Perm { word: (0..d).rev().collect() }
    }

    /// The simple transposition swapping `s` and `s + 1`.
    pub fn simple(d: usize, s: usize) -> Result<Perm, PermError> {
        if d < 2 || s >= d - 1 {
            return Err(PermError::SimpleOutOfRange(s, d));
        }
        let mut word: Vec<usize> = (0..d).collect();
        word.swap(s, s + 1);
        Ok(Perm { word })
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.word[i]
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn inverse(&self) -> Perm {
        let mut word = vec![0; self.degree()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v] = i;
        }
        Perm { word }
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm { word: other.word.iter().map(|&i| self.word[i]).collect() })
    }

    /// Number of inversions `#{(i, j) : i < j, p(i) > p(j)}`.
    pub fn inversions(&self) -> usize {
        let w = &self.word;
        let mut n = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    n += 1;
                }
            }
        }
        n
    }

    /// Inversions of `descending ∘ p`, i.e. `C(d,2) - inversions(p)`.
    pub fn coinversions(&self) -> usize {
        let d = self.degree();
        d * (d - 1) / 2 - self.inversions()
    }

    /// All permutations of degree `d` in lexicographic word order.
    pub fn all(d: usize) -> Vec<Perm> {
        use itertools::Itertools;
        if d == 0 {
            return vec![Perm { word: vec![] }];
        }
        (0..d).permutations(d).map(|word| Perm { word }).collect()
    }

    /// Index of this permutation in the lexicographic order of `Perm::all`.
    pub fn lex_index(&self) -> usize {
        let d = self.degree();
        let mut fact = vec![1usize; d + 1];
        for k in 1..=d {
            fact[k] = fact[k - 1] * k;
        }
        let mut idx = 0;
        for i in 0..d {
            let smaller = self.word[i + 1..].iter().filter(|&&v| v < self.word[i]).count();
            idx += smaller * fact[d - 1 - i];
        }
        idx
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", words.join(","))
    }
}

impl FromStr for Perm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Perm, ParseError> {
        let word = parse_csv_usize(s)?;
        Perm::from_word(word).map_err(|e| ParseError::at_col(1, e.to_string()))
    }
}

/// The rank function of a permutation on the grid `0 <= a, b <= d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    d: usize,
    values: Vec<usize>, // row-major (d+1) x (d+1)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankTableError {
    #[error("rank table is not ({0}+1)x({0}+1)")]
    BadShape(usize),
    #[error("boundary entry ({0},{1}) is {2}, expected 0")]
    BadBoundary(usize, usize, usize),
    #[error("double difference at ({0},{1}) is not 0 or 1")]
    BadDoubleDifference(usize, usize),
    #[error("double differences do not select one column per row")]
    NotAPermutationTable,
    #[error("table entries are inconsistent with any permutation")]
    Inconsistent,
}

impl RankTable {
    /// Builds the rank table of `p` via the recurrence
    /// `r(a,b) = r(a+1,b) + [p(a) >= b]`.
    pub fn from_perm(p: &Perm) -> RankTable {
        let d = p.degree();
        let mut values = vec![0usize; (d + 1) * (d + 1)];
        for a in (0..d).rev() {
            for b in 0..=d {
                let inc = usize::from(p.apply(a) >= b);
                values[a * (d + 1) + b] = values[(a + 1) * (d + 1) + b] + inc;
            }
        }
        RankTable { d, values }
    }

    /// Builds a table directly from entries (row-major, `(d+1)^2` values).
    pub fn from_values(d: usize, values: Vec<usize>) -> Result<RankTable, RankTableError> {
        if values.len() != (d + 1) * (d + 1) {
            return Err(RankTableError::BadShape(d));
        }
        Ok(RankTable { d, values })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Entry `r(a, b)` for `0 <= a, b <= d`.
    pub fn entry(&self, a: usize, b: usize) -> usize {
        self.values[a * (self.d + 1) + b]
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &RankTable) -> bool {
        self.d == other.d && self.values.iter().zip(&other.values).all(|(x, y)| x >= y)
    }
}

/// Recovers the unique permutation whose rank table equals `t`, using the
/// double-difference identity `r(a,b) - r(a+1,b) - r(a,b+1) + r(a+1,b+1) =
/// [p(a) = b]`. Every structural inconsistency is rejected.
pub fn perm_from_rank_table(t: &RankTable) -> Result<Perm, RankTableError> {
    let d = t.d;
    for i in 0..=d {
        for (a, b) in [(d, i), (i, d)] {
            if t.entry(a, b) != 0 {
                return Err(RankTableError::BadBoundary(a, b, t.entry(a, b)));
            }
        }
    }
    let mut word = Vec::with_capacity(d);
    for a in 0..d {
        let mut hit = None;
        for b in 0..d {
            let dd = (t.entry(a, b) + t.entry(a + 1, b + 1))
                .checked_sub(t.entry(a + 1, b) + t.entry(a, b + 1));
            match dd {
                Some(0) => {}
                Some(1) => {
                    if hit.replace(b).is_some() {
                        return Err(RankTableError::NotAPermutationTable);
                    }
                }
                _ => return Err(RankTableError::BadDoubleDifference(a, b)),
            }
        }
        word.push(hit.ok_or(RankTableError::NotAPermutationTable)?);
    }
    let p = Perm::from_word(word).map_err(|_| RankTableError::NotAPermutationTable)?;
    if &RankTable::from_perm(&p) != t {
        return Err(RankTableError::Inconsistent);
    }
    Ok(p)
}

/// Bruhat order: `p <= q` iff `r^p(a,b) >= r^q(a,b)` for all `(a, b)`.
pub fn bruhat_leq(p: &Perm, q: &Perm) -> bool {
    assert_eq!(p.degree(), q.degree(), "bruhat_leq requires equal degrees");
    RankTable::from_perm(p).dominates(&RankTable::from_perm(q))
}

/// The essential set of `p`: pairs `(a, b)` with `1 <= a, b < d`,
/// `p(a-1) < b <= p(a)` and `p^{-1}(b-1) < a <= p^{-1}(b)`, in row-major order.
pub fn essential_set(p: &Perm) -> Vec<(usize, usize)> {
    let d = p.degree();
    let inv = p.inverse();
    let mut out = Vec::new();
    for a in 1..d {
        for b in 1..d {
            if p.apply(a - 1) < b && b <= p.apply(a) && inv.apply(b - 1) < a && a <= inv.apply(b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// True iff `p` contains `pattern`: some subsequence of the word of `p` is
/// order-isomorphic to the word of `pattern`.
pub fn contains_pattern(p: &Perm, pattern: &Perm) -> bool {
    use itertools::Itertools;
    let k = pattern.degree();
    if k > p.degree() {
        return false;
    }
    (0..p.degree()).combinations(k).any(|ix| {
        (0..k).all(|i| {
            (i + 1..k).all(|j| (p.apply(ix[i]) < p.apply(ix[j])) == (pattern.apply(i) < pattern.apply(j)))
        })
    })
}

/// Smoothness of the Schubert locus of `p`: `p` avoids both `(3,1,2,0)` and
/// `(2,3,0,1)`.
pub fn ls_smooth(p: &Perm) -> bool {
    let bad1 = Perm::from_word(vec![3, 1, 2, 0]).unwrap();
    let bad2 = Perm::from_word(vec![2, 3, 0, 1]).unwrap();
    !contains_pattern(p, &bad1) && !contains_pattern(p, &bad2)
}

/// True iff every ascent of `p` (position `a` with `p(a-1) < p(a)`) is a
/// listed corank, so the essential rows of `p` all lie in `coranks`.
pub fn ess_rows_compatible(p: &Perm, coranks: &[usize]) -> bool {
    (1..p.degree()).all(|a| p.apply(a - 1) > p.apply(a) || coranks.contains(&a))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NestError {
    #[error("nest must start at the full set {{0..{0}}} and end at the empty set")]
    BadEnds(usize),
    #[error("nest sets must strictly decrease")]
    NotDecreasing,
    #[error("set {0:?} is not contained in its predecessor")]
    NotNested(Vec<usize>),
    #[error("set {0:?} has an element outside 0..{1} or a duplicate")]
    BadElements(Vec<usize>, usize),
    #[error("nest is empty")]
    Empty,
}

/// A strictly decreasing chain of subsets of `{0, ..., d-1}`, from the full
/// set down to the empty set. The set of size `d - i` sits at corank `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestOfSets {
    d: usize,
    sets: Vec<Vec<usize>>, // each sorted ascending; sets[0] = full, last = empty
}

impl NestOfSets {
    pub fn new(d: usize, mut sets: Vec<Vec<usize>>) -> Result<NestOfSets, NestError> {
        if sets.is_empty() {
            return Err(NestError::Empty);
        }
        for s in &mut sets {
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) || s.iter().any(|&v| v >= d) {
                return Err(NestError::BadElements(s.clone(), d));
            }
        }
        if sets[0].len() != d || !sets.last().unwrap().is_empty() {
            return Err(NestError::BadEnds(d));
        }
        for w in sets.windows(2) {
            if w[1].len() >= w[0].len() {
                return Err(NestError::NotDecreasing);
            }
            if !w[1].iter().all(|v| w[0].contains(v)) {
                return Err(NestError::NotNested(w[1].clone()));
            }
        }
        Ok(NestOfSets { d, sets })
    }

    /// The complete nest of `p`: the set at corank `k` is `{p(k), ..., p(d-1)}`.
    pub fn of_perm(p: &Perm) -> NestOfSets {
        let d = p.degree();
        let sets = (0..=d).map(|k| (k..d).map(|i| p.apply(i)).collect()).collect();
        NestOfSets::new(d, sets).expect("suffix sets of a permutation form a nest")
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Coranks `i_0 < i_1 < ... < i_s` of the listed sets (`i_j = d - |A^{i_j}|`).
    pub fn coranks(&self) -> Vec<usize> {
        self.sets.iter().map(|s| self.d - s.len()).collect()
    }

    /// True iff every corank `0..=d` is present.
    pub fn is_complete(&self) -> bool {
        self.sets.len() == self.d + 1
    }

    /// The decreasing completion: consecutive differences `A^{i_j} \ A^{i_{j+1}}`
    /// written in decreasing order and concatenated.
    pub fn decreasing_completion(&self) -> Perm {
        let mut word = Vec::with_capacity(self.d);
        for w in self.sets.windows(2) {
            let mut diff: Vec<usize> = w[0].iter().copied().filter(|v| !w[1].contains(v)).collect();
            diff.sort_unstable_by(|x, y| y.cmp(x));
            word.extend(diff);
        }
        Perm::from_word(word).expect("completion of a nest is a permutation")
    }
}

impl fmt::Display for NestOfSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Sets joined by ';' largest first; the final empty set is the empty
        // segment after the trailing ';'.
        let segs: Vec<String> = self
            .sets
            .iter()
            .map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", segs.join(";"))
    }
}

impl FromStr for NestOfSets {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<NestOfSets, ParseError> {
        let mut sets = Vec::new();
        let mut col = 1;
        for seg in s.split(';') {
            let set = parse_csv_usize(seg)
                .map_err(|e| ParseError::at_col(col + e.col - 1, e.msg))?;
            sets.push(set);
            col += seg.len() + 1;
        }
        let d = sets.first().map(|s| s.len()).unwrap_or(0);
        NestOfSets::new(d, sets).map_err(|e| ParseError::at_col(1, e.to_string()))
    }
}
