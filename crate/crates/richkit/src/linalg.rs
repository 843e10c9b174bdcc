//! Exact linear algebra over prime fields F_p, p <= 251.
//!
//! Matrices are dense, row-major, with entries stored as bytes already
//! reduced mod p. Subspaces of F_p^n are kept in reduced row echelon form
//! (RREF), which is a canonical representative: two subspaces are equal iff
//! their stored bases are identical, so subspaces can be compared and hashed
//! directly. Matrices act on column vectors, so the kernel of an `r x c`
//! matrix lives in F_p^c and the cokernel has dimension `r - rank`.

use crate::text::ParseError;
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime in the supported range 2..=251")]
    NotPrime(u64),
}

/// A prime field F_p with 2 <= p <= 251, so elements fit in a byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u8,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<FieldSpec, FieldError> {
        if !(2..=251).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec { p: p as u8 })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as i16 - b as i16).rem_euclid(self.p as i16)) as u8
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p as u32) as u8
    }

    pub fn pow(&self, mut a: u8, mut e: u32) -> u8 {
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u32 - 2)
    }
}

/// A dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from equal-length rows of already-reduced entries.
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix from integer rows, reducing each entry mod p.
    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|&v| field.reduce_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Matrix product `self * other` over `field`.
    pub fn mul(&self, other: &Matrix, field: FieldSpec) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u32;
                for k in 0..self.cols {
                    acc += self[(r, k)] as u32 * other[(k, c)] as u32;
                }
                out[(r, c)] = (acc % field.p() as u32) as u8;
            }
        }
        out
    }

    /// Applies `self` to a column vector.
    pub fn mul_vec(&self, v: &[u8], field: FieldSpec) -> Vec<u8> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                let acc: u32 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                (acc % field.p() as u32) as u8
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "shape mismatch in hstack");
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            out.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            out.row_mut(r)[self.cols..].copy_from_slice(other.row(r));
        }
        out
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self, field: FieldSpec) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = rref(&self.hstack(&Matrix::identity(n)), field);
        for i in 0..n {
            if aug[(i, i)] != 1 {
                return None;
            }
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            inv.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = u8;
    fn index(&self, (r, c): (usize, usize)) -> &u8 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u8 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// The canonical reduced row echelon form (zero rows kept, at the bottom).
pub fn rref(m: &Matrix, field: FieldSpec) -> Matrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(src) = (pivot_row..rows).find(|&r| a[(r, col)] != 0) else {
            continue;
        };
        a.data.swap_chunks(src, pivot_row, cols);
        let inv = field.inv(a[(pivot_row, col)]);
        for c in col..cols {
            a[(pivot_row, c)] = field.mul(a[(pivot_row, c)], inv);
        }
        for r in 0..rows {
            if r != pivot_row && a[(r, col)] != 0 {
                let factor = a[(r, col)];
                for c in col..cols {
                    let delta = field.mul(factor, a[(pivot_row, c)]);
                    a[(r, c)] = field.sub(a[(r, c)], delta);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    a
}

trait SwapChunks {
    fn swap_chunks(&mut self, i: usize, j: usize, width: usize);
}

impl SwapChunks for Vec<u8> {
    fn swap_chunks(&mut self, i: usize, j: usize, width: usize) {
        if i != j {
            for k in 0..width {
                self.swap(i * width + k, j * width + k);
            }
        }
    }
}

pub fn rank(m: &Matrix, field: FieldSpec) -> usize {
    let r = rref(m, field);
    (0..m.rows()).filter(|&i| r.row(i).iter().any(|&v| v != 0)).count()
}

/// Dimension of the cokernel of `m` as a map into F_p^rows.
pub fn cokernel_dim(m: &Matrix, field: FieldSpec) -> usize {
    m.rows() - rank(m, field)
}

/// The right null space `{x : m·x = 0}` as a subspace of F_p^cols.
pub fn kernel(m: &Matrix, field: FieldSpec) -> Subspace {
    let r = rref(m, field);
    let cols = m.cols();
    let mut pivot_of_col = vec![None; cols];
    let mut row_pivots = Vec::new();
    for i in 0..r.rows() {
        if let Some(c) = r.row(i).iter().position(|&v| v != 0) {
            pivot_of_col[c] = Some(i);
            row_pivots.push((i, c));
        }
    }
    let mut basis_rows = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![0u8; cols];
        x[free] = 1;
        for &(i, c) in &row_pivots {
            x[c] = field.neg(r[(i, free)]);
        }
        basis_rows.push(x);
    }
    Subspace::from_rows(field, cols, &Matrix::from_rows(basis_rows))
}

/// A subspace of F_p^n held in canonical RREF basis form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    field: FieldSpec,
    basis: Matrix, // RREF with no zero rows; 0 x ambient for the zero space
}

impl Subspace {
    /// The span of the rows of `m` inside F_p^ambient.
    pub fn from_rows(field: FieldSpec, ambient: usize, m: &Matrix) -> Subspace {
        assert!(m.rows() == 0 || m.cols() == ambient, "ambient dimension mismatch");
        let r = rref(m, field);
        let kept: Vec<Vec<u8>> = (0..r.rows())
            .filter(|&i| r.row(i).iter().any(|&v| v != 0))
            .map(|i| r.row(i).to_vec())
            .collect();
        let basis = if kept.is_empty() {
            Matrix { rows: 0, cols: ambient, data: vec![] }
        } else {
            Matrix::from_rows(kept)
        };
        Subspace { ambient, field, basis }
    }

    pub fn full(field: FieldSpec, d: usize) -> Subspace {
        Subspace { ambient: d, field, basis: Matrix::identity(d) }
    }

    pub fn zero_space(field: FieldSpec, d: usize) -> Subspace {
        Subspace { ambient: d, field, basis: Matrix { rows: 0, cols: d, data: vec![] } }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// The canonical RREF basis (one row per dimension).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let stacked = self.basis.vstack(&Matrix::from_rows(vec![v.to_vec()]));
        rank(&stacked, self.field) == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        (0..other.basis.rows()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        Subspace::from_rows(self.field, self.ambient, &self.basis.vstack(&other.basis))
    }

    /// Intersection via the Zassenhaus block trick: row reduce
    /// `[U | U; V | 0]`; rows whose left half vanishes carry the
    /// intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let n = self.ambient;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Matrix::zeros(other.basis.rows(), n));
        let reduced = rref(&top.vstack(&bottom), self.field);
        let mut rows = Vec::new();
        for i in 0..reduced.rows() {
            let row = reduced.row(i);
            if row[..n].iter().all(|&v| v == 0) && row[n..].iter().any(|&v| v != 0) {
                rows.push(row[n..].to_vec());
            }
        }
        Subspace::from_rows(self.field, n, &Matrix::from_rows(rows))
    }

    /// Dimension of the intersection without building it.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// The dot-product annihilator `{y : y·x = 0 for all x in self}`.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.field, self.ambient);
        }
        kernel(&self.basis, self.field)
    }
}

/// Renders `m` in the plain text format: a `d=<cols> p=<prime>` header line
/// followed by one space-separated row per line.
pub fn matrix_to_text(m: &Matrix, field: FieldSpec) -> String {
    let mut out = format!("d={} p={}\n", m.cols(), field.p());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the matrix text format. Entries are reduced mod p; every row must
/// have exactly `d` entries.
pub fn matrix_from_text(text: &str) -> Result<(FieldSpec, Matrix), ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| ParseError::new(1, 1, "empty input"))?;
    let mut d = None;
    let mut p = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("d=") {
            d = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("p=") {
            p = v.parse::<u64>().ok();
        } else {
            return Err(ParseError::new(hline + 1, 1, format!("unexpected header token {tok:?}")));
        }
    }
    let d = d.ok_or_else(|| ParseError::new(hline + 1, 1, "header must contain d=<n>"))?;
    let p = p.ok_or_else(|| ParseError::new(hline + 1, 1, "header must contain p=<prime>"))?;
    let field = FieldSpec::new(p).map_err(|e| ParseError::new(hline + 1, 1, e.to_string()))?;
    let mut rows = Vec::new();
    for (lno, line) in lines {
        let mut row = Vec::with_capacity(d);
        let mut col = 1;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(lno + 1, col, format!("expected an integer, found {tok:?}")))?;
            row.push(field.reduce_i64(v));
            col += tok.len() + 1;
        }
        if row.len() != d {
            return Err(ParseError::new(lno + 1, 1, format!("expected {d} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    Ok((field, Matrix::from_rows(rows)))
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(251).is_ok());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(9).is_err());
        assert!(FieldSpec::new(253).is_err()); // 11 * 23
        assert!(FieldSpec::new(257).is_err()); // prime but out of byte range
    }

    #[test]
    fn field_inverse_law() {
        for p in [2u64, 3, 5, 7, 251] {
            let field = f(p);
            for a in 1..field.p() {
                assert_eq!(field.mul(a, field.inv(a)), 1, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn rref_example() {
        let field = f(5);
        let m = Matrix::from_i64(field, &[vec![2, 4], vec![1, 2]]);
        let r = rref(&m, field);
        assert_eq!(r, Matrix::from_rows(vec![vec![1, 2], vec![0, 0]]));
        assert_eq!(rank(&m, field), 1);
    }

    #[test]
    fn rref_is_idempotent_and_row_space_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            let field = f(p);
            for _ in 0..200 {
                let rows = rng.gen_range(1..=5);
                let cols = rng.gen_range(1..=5);
                let mut m = Matrix::zeros(rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m[(r, c)] = rng.gen_range(0..field.p());
                    }
                }
                let r1 = rref(&m, field);
                assert_eq!(rref(&r1, field), r1, "rref is idempotent");
                // Scale a row by a nonzero constant and add it to another:
                // the RREF must not change.
                let mut shuffled = m.clone();
                if rows >= 2 {
                    let s = rng.gen_range(1..field.p());
                    let src = rng.gen_range(0..rows);
                    let dst = (src + 1) % rows;
                    for c in 0..cols {
                        let delta = field.mul(s, shuffled[(src, c)]);
                        shuffled[(dst, c)] = field.add(shuffled[(dst, c)], delta);
                    }
                }
                assert_eq!(rref(&shuffled, field), r1, "row operations preserve RREF");
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let f2 = f(2);
        // Zero map from F_2^3: full kernel.
        let zero = Matrix::zeros(1, 3);
        assert_eq!(kernel(&zero, f2).dim(), 3);
        // x + y = 0 cuts out {(x, x, z)}.
        let m = Matrix::from_i64(f2, &[vec![1, 1, 0]]);
        let k = kernel(&m, f2);
        assert_eq!(k.dim(), 2);
        assert!(k.contains_vector(&[1, 1, 0]));
        assert!(k.contains_vector(&[0, 0, 1]));
        assert!(!k.contains_vector(&[1, 0, 0]));
    }

    #[test]
    fn rank_nullity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3, 5] {
            let field = f(p);
            for _ in 0..300 {
                let rows = rng.gen_range(1..=6);
                let cols = rng.gen_range(1..=6);
                let mut m = Matrix::zeros(rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m[(r, c)] = rng.gen_range(0..field.p());
                    }
                }
                assert_eq!(rank(&m, field) + kernel(&m, field).dim(), cols);
                assert_eq!(cokernel_dim(&m, field), rows - rank(&m, field));
            }
        }
    }

    #[test]
    fn cokernel_example() {
        // A rank-2 map into F_3^5 has cokernel dimension 3.
        let field = f(3);
        let m = Matrix::from_i64(field, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![0, 0]]);
        assert_eq!(rank(&m, field), 2);
        assert_eq!(cokernel_dim(&m, field), 3);
    }

    #[test]
    fn distinct_lines_intersect_trivially() {
        let field = f(3);
        let u = Subspace::from_rows(field, 2, &Matrix::from_i64(field, &[vec![1, 0]]));
        let v = Subspace::from_rows(field, 2, &Matrix::from_i64(field, &[vec![1, 1]]));
        assert_eq!(u.intersect(&v), Subspace::zero_space(field, 2));
        assert_eq!(u.sum(&v), Subspace::full(field, 2));
    }

    fn random_subspace(rng: &mut ChaCha8Rng, field: FieldSpec, d: usize) -> Subspace {
        let rows = rng.gen_range(0..=d);
        let mut m = Matrix::zeros(rows, d);
        for r in 0..rows {
            for c in 0..d {
                m[(r, c)] = rng.gen_range(0..field.p());
            }
        }
        Subspace::from_rows(field, d, &m)
    }

    #[test]
    fn intersection_sum_dimension_formula_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for d in [3usize, 4, 5] {
            for p in [2u64, 3, 5] {
                let field = f(p);
                for _ in 0..1000 {
                    let u = random_subspace(&mut rng, field, d);
                    let v = random_subspace(&mut rng, field, d);
                    let cap = u.intersect(&v);
                    let cup = u.sum(&v);
                    assert_eq!(cap.dim() + cup.dim(), u.dim() + v.dim());
                    assert_eq!(cap.dim(), u.intersection_dim(&v));
                    assert!(u.contains(&cap) && v.contains(&cap));
                    assert!(cup.contains(&u) && cup.contains(&v));
                }
            }
        }
    }

    #[test]
    fn annihilator_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in [2u64, 3, 5] {
            let field = f(p);
            for _ in 0..200 {
                let u = random_subspace(&mut rng, field, 5);
                let ann = u.annihilator();
                assert_eq!(ann.dim(), 5 - u.dim());
                assert_eq!(ann.annihilator(), u, "double annihilator returns the space");
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let field = f(7);
        let m = Matrix::from_i64(field, &[vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 1]]);
        let inv = m.inverse(field).unwrap();
        assert_eq!(m.mul(&inv, field), Matrix::identity(3));
        assert_eq!(inv.mul(&m, field), Matrix::identity(3));
        let singular = Matrix::from_i64(field, &[vec![1, 2, 0], vec![2, 4, 0], vec![3, 0, 1]]);
        assert!(singular.inverse(field).is_none());
    }

    #[test]
    fn matrix_text_roundtrip() {
        let field = f(5);
        let m = Matrix::from_i64(field, &[vec![2, 4], vec![1, 2]]);
        let text = matrix_to_text(&m, field);
        assert_eq!(text, "d=2 p=5\n2 4\n1 2\n");
        let (field2, m2) = matrix_from_text(&text).unwrap();
        assert_eq!(field2, field);
        assert_eq!(m2, m);
        // Entries reduce mod p; bad rows carry line numbers.
        let (_, m3) = matrix_from_text("d=2 p=5\n7 -1\n").unwrap();
        assert_eq!(m3, Matrix::from_rows(vec![vec![2, 4]]));
        let err = matrix_from_text("d=2 p=5\n1 2\n1 x\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matrix_from_text("d=2 p=6\n1 2\n").is_err());
        assert!(matrix_from_text("d=2 p=5\n1 2 3\n").is_err());
    }
}
