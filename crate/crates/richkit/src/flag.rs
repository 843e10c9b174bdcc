//! Flags in F_p^d, their relative position, and first-order deformations.
//!
//! A flag is stored as an invertible d x d basis matrix together with the
//! list of coranks at which strata are taken: the stratum of corank `a` is
//! the span of basis rows `a..d`, so corank 0 is the whole space and corank
//! d is zero. A complete flag lists every corank `0..=d`.
//!
//! The relative position of two complete flags P, Q is the permutation
//! `sigma` with `dim(P^a ∩ Q^b) = r^sigma(a, b)` for all coranks a, b. It is
//! computed here by a pivot scan: write P's basis in Q's coordinates as
//! `M = B_P · B_Q^{-1}` and run Gauss-Jordan from the bottom row up,
//! eliminating upwards only. Row a's pivot column is then `sigma(a)`,
//! because the surviving pivots of rows `a..` below column `b` count
//! exactly `rank M[a.., ..b] = (d - a) - dim(P^a ∩ Q^b)`.
//!
//! Linear maps act on column vectors throughout, and `End(F^d)` is
//! identified with `F^{d^2}` by flattening matrices row-major.

use crate::linalg::{cokernel_dim, kernel, matrix_from_text, rank, FieldSpec, Matrix, Subspace};
use crate::perm::{perm_from_rank_table, Perm, RankTable};
use crate::text::{parse_csv_usize, ParseError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("basis matrix is {rows}x{cols}, expected {d}x{d}")]
    BadShape { rows: usize, cols: usize, d: usize },
    #[error("basis matrix is singular")]
    Singular,
    #[error("coranks must increase strictly from 0 to {d}, got {got:?}")]
    BadCoranks { d: usize, got: Vec<usize> },
    #[error("strata must form a strictly decreasing chain of nested subspaces")]
    BadStrata,
    #[error("flags in a tuple must share the same field and ambient dimension")]
    MixedTuple,
    #[error("velocity matrix for parameter {param}, flag {flag} must be {d}x{d}")]
    BadVelocity { param: usize, flag: usize, d: usize },
}

/// A (possibly partial) flag in F_p^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    field: FieldSpec,
    coranks: Vec<usize>,
    basis: Matrix,
}

impl Flag {
    /// Wraps a basis matrix, checking invertibility and the corank chain.
    pub fn new(field: FieldSpec, coranks: Vec<usize>, basis: Matrix) -> Result<Flag, FlagError> {
        let d = basis.cols();
        if basis.rows() != d {
            return Err(FlagError::BadShape { rows: basis.rows(), cols: basis.cols(), d });
        }
        let chain_ok = coranks.first() == Some(&0)
            && coranks.last() == Some(&d)
            && coranks.windows(2).all(|w| w[0] < w[1]);
        if !chain_ok {
            return Err(FlagError::BadCoranks { d, got: coranks });
        }
        if basis.inverse(field).is_none() {
            return Err(FlagError::Singular);
        }
        Ok(Flag { field, coranks, basis })
    }

    /// The complete flag with the given basis.
    pub fn complete(field: FieldSpec, basis: Matrix) -> Result<Flag, FlagError> {
        let d = basis.cols();
        Flag::new(field, (0..=d).collect(), basis)
    }

    /// The complete coordinate flag: stratum of corank a is span{e_a, ..., e_{d-1}}.
    pub fn coordinate(field: FieldSpec, d: usize) -> Flag {
        Flag::complete(field, Matrix::identity(d)).unwrap()
    }

    /// The coordinate flag with only the given coranks.
    pub fn coordinate_partial(field: FieldSpec, coranks: Vec<usize>) -> Result<Flag, FlagError> {
        let d = *coranks.last().unwrap_or(&0);
        Flag::new(field, coranks, Matrix::identity(d))
    }

    /// Builds a flag from a strictly decreasing chain of nested subspaces.
    /// The full space and the zero space may be omitted. The adapted basis
    /// is chosen deterministically from the RREF bases of the strata.
    pub fn from_strata(field: FieldSpec, d: usize, strata: &[Subspace]) -> Result<Flag, FlagError> {
        let mut chain: Vec<Subspace> = vec![Subspace::full(field, d)];
        for s in strata {
            if s.ambient() != d {
                return Err(FlagError::BadStrata);
            }
            if s.dim() < d && s.dim() > 0 {
                chain.push(s.clone());
            }
        }
        chain.push(Subspace::zero_space(field, d));
        for w in chain.windows(2) {
            if w[0].dim() <= w[1].dim() || !w[0].contains(&w[1]) {
                return Err(FlagError::BadStrata);
            }
        }
        // Grow an adapted basis from the smallest stratum outward, drawing
        // rows from each stratum's canonical basis.
        let mut acc: Vec<Vec<u8>> = Vec::with_capacity(d);
        for s in chain.iter().rev().skip(1) {
            for i in 0..s.basis().rows() {
                if acc.len() == s.dim() {
                    break;
                }
                let candidate = s.basis().row(i);
                let current = Matrix::from_rows(acc.clone());
                let stacked = if acc.is_empty() {
                    Matrix::from_rows(vec![candidate.to_vec()])
                } else {
                    current.vstack(&Matrix::from_rows(vec![candidate.to_vec()]))
                };
                if rank(&stacked, field) > acc.len() {
                    acc.push(candidate.to_vec());
                }
            }
        }
        acc.reverse();
        let coranks: Vec<usize> = chain.iter().map(|s| d - s.dim()).collect();
        Flag::new(field, coranks, Matrix::from_rows(acc))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn d(&self) -> usize {
        self.basis.cols()
    }

    pub fn coranks(&self) -> &[usize] {
        &self.coranks
    }

    pub fn is_complete(&self) -> bool {
        self.coranks.len() == self.d() + 1
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// The stratum of the given corank (which must be listed).
    pub fn stratum(&self, corank: usize) -> Subspace {
        assert!(self.coranks.contains(&corank), "corank {corank} is not part of this flag");
        let rows: Vec<Vec<u8>> = (corank..self.d()).map(|r| self.basis.row(r).to_vec()).collect();
        Subspace::from_rows(self.field, self.d(), &Matrix::from_rows(rows))
    }

    /// Whether two flags have the same strata (their bases may differ).
    pub fn coincides(&self, other: &Flag) -> bool {
        self.field == other.field
            && self.coranks == other.coranks
            && self.coranks.iter().all(|&a| self.stratum(a) == other.stratum(a))
    }

    /// The largest listed corank that is <= j: basis row j lies in the
    /// stratum of this corank and no smaller one.
    fn block_start(&self, j: usize) -> usize {
        *self.coranks.iter().filter(|&&a| a <= j).max().unwrap()
    }

    /// The space of endomorphisms preserving every stratum, as a subspace
    /// of F^{d^2} (row-major flattening).
    ///
    /// In the adapted basis an endomorphism preserves the flag iff column j
    /// of its matrix is supported on rows >= block_start(j), so a basis of
    /// the fix space is `{G E_{ij} G^{-1} : i >= block_start(j)}` with
    /// `G = B^T` (whose columns are the basis vectors).
    pub fn fix_space(&self) -> Subspace {
        let d = self.d();
        let g = self.basis.transpose();
        let ginv = g.inverse(self.field).expect("flag bases are invertible");
        let mut rows = Vec::new();
        for j in 0..d {
            for i in self.block_start(j)..d {
                let mut flat = vec![0u8; d * d];
                for r in 0..d {
                    for c in 0..d {
                        flat[r * d + c] = self.field.mul(g[(r, i)], ginv[(j, c)]);
                    }
                }
                rows.push(flat);
            }
        }
        Subspace::from_rows(self.field, d * d, &Matrix::from_rows(rows))
    }

    /// Serializes in the flag text format (header, optional coranks line,
    /// one basis row per line).
    pub fn to_text(&self) -> String {
        let mut out = format!("d={} p={}\n", self.d(), self.field.p());
        if !self.is_complete() {
            let list: Vec<String> = self.coranks.iter().map(|a| a.to_string()).collect();
            out.push_str(&format!("coranks={}\n", list.join(",")));
        }
        for r in 0..self.d() {
            let row: Vec<String> = self.basis.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the flag text format. A missing coranks line means complete.
    pub fn from_text(text: &str) -> Result<Flag, ParseError> {
        let mut coranks_line: Option<(usize, String)> = None;
        let mut kept = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if let Some(rest) = line.trim().strip_prefix("coranks=") {
                if coranks_line.is_some() {
                    return Err(ParseError::new(i + 1, 1, "duplicate coranks line"));
                }
                coranks_line = Some((i + 1, rest.to_string()));
            } else {
                kept.push(line);
            }
        }
        let (field, basis) = matrix_from_text(&kept.join("\n"))?;
        let d = basis.cols();
        let coranks = match coranks_line {
            Some((lno, s)) => {
                parse_csv_usize(&s).map_err(|e| ParseError::new(lno, e.col, e.msg.clone()))?
            }
            None => (0..=d).collect(),
        };
        Flag::new(field, coranks, basis).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }
}

/// The pivot permutation of an invertible matrix: Gauss-Jordan from the
/// bottom row up, eliminating upwards; pi(r) is the pivot column of row r.
pub fn pivot_perm(m: &Matrix, field: FieldSpec) -> Perm {
    let d = m.rows();
    assert_eq!(m.cols(), d, "pivot scan needs a square matrix");
    let mut a = m.clone();
    let mut word = vec![0usize; d];
    for r in (0..d).rev() {
        let c = a.row(r).iter().position(|&v| v != 0).expect("singular matrix in pivot scan");
        word[r] = c;
        let inv = field.inv(a[(r, c)]);
        for cc in 0..d {
            a[(r, cc)] = field.mul(a[(r, cc)], inv);
        }
        for rr in 0..r {
            let f = a[(rr, c)];
            if f != 0 {
                for cc in 0..d {
                    let delta = field.mul(f, a[(r, cc)]);
                    a[(rr, cc)] = field.sub(a[(rr, cc)], delta);
                }
            }
        }
    }
    Perm::from_word(word).expect("pivot columns of an invertible matrix form a permutation")
}

/// The relative position of two complete flags: the permutation sigma with
/// `dim(P^a ∩ Q^b) = r^sigma(a, b)`.
pub fn assoc_perm(p: &Flag, q: &Flag) -> Perm {
    assert!(p.is_complete() && q.is_complete(), "relative position needs complete flags");
    assert!(p.field == q.field && p.d() == q.d(), "flags live in different spaces");
    let qinv = q.basis.inverse(p.field).expect("flag bases are invertible");
    pivot_perm(&p.basis.mul(&qinv, p.field), p.field)
}

/// The relative position computed directly from the definition, one
/// subspace intersection per grid entry. Slow; used to cross-check
/// `assoc_perm`.
pub fn assoc_perm_from_intersections(p: &Flag, q: &Flag) -> Perm {
    assert!(p.is_complete() && q.is_complete(), "relative position needs complete flags");
    let d = p.d();
    let n = d + 1;
    let mut values = vec![0usize; n * n];
    for a in 0..=d {
        let pa = p.stratum(a);
        for b in 0..=d {
            values[a * n + b] = pa.intersection_dim(&q.stratum(b));
        }
    }
    let table = RankTable::from_values(d, values).expect("intersection dimensions form a rank table");
    perm_from_rank_table(&table).expect("intersection dimensions of complete flags give a permutation")
}

/// A standard pair of complete flags in relative position `s`: the
/// coordinate flag together with the flag whose basis row b is the
/// coordinate vector `e_{s^{-1}(b)}`.
pub fn adapted_flags(field: FieldSpec, s: &Perm) -> (Flag, Flag) {
    let d = s.degree();
    let sinv = s.inverse();
    let mut b = Matrix::zeros(d, d);
    for row in 0..d {
        b[(row, sinv.apply(row))] = 1;
    }
    (Flag::coordinate(field, d), Flag::complete(field, b).unwrap())
}

/// `d^2 - dim(Fix P + Fix Q)`: the codimension in End(F^d) of the span of
/// the two flags' fix spaces. For complete flags this equals the number of
/// coinversions of their relative position.
pub fn invfix_check(p: &Flag, q: &Flag) -> usize {
    assert!(p.field == q.field && p.d() == q.d(), "flags live in different spaces");
    let d = p.d();
    d * d - p.fix_space().sum(&q.fix_space()).dim()
}

/// Stacks canonical annihilator bases of the flags' fix spaces: the block
/// rows realize End(F^d) -> ⊕_i End(F^d)/Fix_i as a single matrix acting on
/// flattened endomorphisms.
fn stacked_annihilators(flags: &[Flag]) -> (Vec<Matrix>, Matrix) {
    let blocks: Vec<Matrix> = flags
        .iter()
        .map(|f| kernel(f.fix_space().basis(), f.field).basis().clone())
        .collect();
    let mut stacked = Matrix::zeros(0, flags[0].d() * flags[0].d());
    for b in &blocks {
        stacked = stacked.vstack(b);
    }
    (blocks, stacked)
}

/// The dimension of the joint deformation space of a tuple of flags: the
/// cokernel of `End(F^d) -> ⊕_i End(F^d)/Fix_i`. For a pair of complete
/// flags this is the number of coinversions of their relative position.
pub fn m_dim(flags: &[Flag]) -> usize {
    assert!(!flags.is_empty(), "m_dim of an empty tuple");
    let field = flags[0].field;
    let d = flags[0].d();
    assert!(flags.iter().all(|f| f.field == field && f.d() == d), "mixed tuple");
    let (_, stacked) = stacked_annihilators(flags);
    cokernel_dim(&stacked, field)
}

/// A first-order family of flag tuples over a smooth base with `params`
/// directions: for each parameter t and flag i, row a of `velocities[t][i]`
/// is the velocity of basis row a of flag i along direction t.
#[derive(Debug, Clone)]
pub struct FirstOrderFamily {
    flags: Vec<Flag>,
    velocities: Vec<Vec<Matrix>>,
}

impl FirstOrderFamily {
    pub fn new(flags: Vec<Flag>, velocities: Vec<Vec<Matrix>>) -> Result<FirstOrderFamily, FlagError> {
        assert!(!flags.is_empty(), "family of an empty tuple");
        let field = flags[0].field;
        let d = flags[0].d();
        if !flags.iter().all(|f| f.field == field && f.d() == d) {
            return Err(FlagError::MixedTuple);
        }
        for (t, per_flag) in velocities.iter().enumerate() {
            if per_flag.len() != flags.len() {
                return Err(FlagError::BadVelocity { param: t, flag: per_flag.len(), d });
            }
            for (i, v) in per_flag.iter().enumerate() {
                if v.rows() != d || v.cols() != d {
                    return Err(FlagError::BadVelocity { param: t, flag: i, d });
                }
            }
        }
        Ok(FirstOrderFamily { flags, velocities })
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn params(&self) -> usize {
        self.velocities.len()
    }

    pub fn m_dim(&self) -> usize {
        m_dim(&self.flags)
    }

    /// The matrix of the induced map from the base tangent space to the
    /// joint deformation space, one row per parameter, in the canonical
    /// coordinates cut out by the stacked annihilators. Row entries are
    /// independent of the choice of adapted bases and of the first-order
    /// basis completion.
    pub fn delta_matrix(&self) -> Matrix {
        let field = self.flags[0].field;
        let d = self.flags[0].d();
        let (blocks, stacked) = stacked_annihilators(&self.flags);
        // Coordinates on the cokernel: the canonical basis of the left null
        // space of the stacked matrix.
        let quot = kernel(&stacked.transpose(), field);
        let k = quot.basis();
        let inverses: Vec<Matrix> =
            self.flags.iter().map(|f| f.basis.inverse(field).expect("flag bases are invertible")).collect();
        let mut delta = Matrix::zeros(self.params(), quot.dim());
        for t in 0..self.params() {
            let mut y = Vec::new();
            for (i, block) in blocks.iter().enumerate() {
                // Velocity rows D encode the endomorphism A with
                // A v_a = (row a of D), i.e. A = (B^{-1} D)^T.
                let a = inverses[i].mul(&self.velocities[t][i], field).transpose();
                let flat: Vec<u8> = (0..d).flat_map(|r| a.row(r).to_vec()).collect();
                y.extend(block.mul_vec(&flat, field));
            }
            let row = k.mul_vec(&y, field);
            delta.row_mut(t).copy_from_slice(&row);
        }
        delta
    }

    /// Whether the family is versal at this point: the delta matrix must
    /// surject onto the joint deformation space.
    pub fn is_versal_at_point(&self) -> bool {
        let delta = self.delta_matrix();
        rank(&delta, self.flags[0].field) == delta.cols()
    }
}
