//! Zariski tangent spaces of Schubert and Richardson loci at rational points.
//!
//! A flag with coranks `0 = i_0 < ... < i_l = d` is a point of a variety of
//! dimension `sum_j (i_{j+1} - i_j) i_j`, presented here as a quotient of
//! the space of invertible basis matrices. The fiber through a basis `B`
//! consists of `C B` with `C` block upper triangular in the corank blocks,
//! so the fiber dimension is `sum_j (i_{j+1} - i_j)(d - i_j)`.
//!
//! Each essential condition `dim(V^a ∩ F^b) >= r` says the matrix
//! `C_0 = B[a.., :] N_b^T` has rank at most `k = (d - a) - r`, where the
//! rows of `N_b` span the annihilator of the reference stratum `F^b`. The
//! locus is cut out by the `(k+1)`-minors of these matrices, and the
//! differential of a minor along a basis velocity `X` is
//! `tr(adj(C_0[R, S]) · (X[a.., :] N_b^T)[R, S])`. Fiber directions stay
//! inside the locus, so the Zariski tangent dimension at the point is
//!
//! ```text
//! dim ker(Jacobian) - (fiber dimension).
//! ```
//!
//! When a condition holds with slack (`rank C_0 < k`), every adjugate
//! vanishes and the corresponding Jacobian rows are zero; the reported
//! tangent space is that of the determinantal scheme, not of any reduced
//! structure.

use crate::flag::Flag;
use crate::linalg::{rank, FieldSpec, Matrix};
use crate::locus::{CondMode, LocusSpec};
use crate::perm::{essential_set, RankTable};
use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangentError {
    #[error("the point lives in a different space than the conditions")]
    SpaceMismatch,
    #[error("the point does not satisfy the rank conditions")]
    PointNotInLocus,
    #[error("essential rows of a condition are not listed coranks of the point")]
    IncompatibleCoranks,
}

/// Dimension of the variety of flags with the given coranks.
pub fn flag_variety_dim(coranks: &[usize]) -> usize {
    coranks.windows(2).map(|w| (w[1] - w[0]) * w[0]).sum()
}

/// Dimension of the group of basis changes fixing every such flag: block
/// upper triangular matrices in the corank blocks.
pub fn stabilizer_dim(coranks: &[usize]) -> usize {
    let d = *coranks.last().expect("corank chain is nonempty");
    coranks.windows(2).map(|w| (w[1] - w[0]) * (d - w[0])).sum()
}

/// The tangent space of a locus at one of its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentReport {
    pub point: Flag,
    /// Expected dimension: ambient flag variety dimension minus the
    /// codimension the conditions impose in general position.
    pub locus_dim: i64,
    /// Zariski tangent dimension at the point.
    pub tangent_dim: usize,
    /// `tangent_dim == locus_dim`.
    pub smooth: bool,
}

fn det(m: &Matrix, field: FieldSpec) -> u8 {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a = m.clone();
    let mut acc: u8 = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[(r, col)] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                let tmp = a[(col, c)];
                a[(col, c)] = a[(piv, c)];
                a[(piv, c)] = tmp;
            }
            acc = field.neg(acc);
        }
        acc = field.mul(acc, a[(col, col)]);
        let inv = field.inv(a[(col, col)]);
        for r in col + 1..n {
            let f = field.mul(a[(r, col)], inv);
            if f != 0 {
                for c in col..n {
                    a[(r, c)] = field.sub(a[(r, c)], field.mul(f, a[(col, c)]));
                }
            }
        }
    }
    acc
}

/// Adjugate: `adj[i][j] = (-1)^{i+j} det(m with row j and column i removed)`,
/// so that `m · adj = det(m) · I`.
fn adjugate(m: &Matrix, field: FieldSpec) -> Matrix {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 1 {
        let mut out = Matrix::zeros(1, 1);
        out[(0, 0)] = 1;
        return out;
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut sub = Matrix::zeros(n - 1, n - 1);
            let mut rr = 0;
            for r in 0..n {
                if r == j {
                    continue;
                }
                let mut cc = 0;
                for c in 0..n {
                    if c == i {
                        continue;
                    }
                    sub[(rr, cc)] = m[(r, c)];
                    cc += 1;
                }
                rr += 1;
            }
            let mut v = det(&sub, field);
            if (i + j) % 2 == 1 {
                v = field.neg(v);
            }
            out[(i, j)] = v;
        }
    }
    out
}

/// Computes the Zariski tangent space of the locus at `point`, which must
/// satisfy the conditions.
pub fn tangent_report(point: &Flag, spec: &LocusSpec) -> Result<TangentReport, TangentError> {
    let field = spec.field();
    let d = spec.d();
    if point.field() != field || point.d() != d {
        return Err(TangentError::SpaceMismatch);
    }
    if !spec.compatible_with(point.coranks()) {
        return Err(TangentError::IncompatibleCoranks);
    }
    if !spec.member(point, CondMode::Full) {
        return Err(TangentError::PointNotInLocus);
    }

    let mut jac_rows: Vec<Vec<u8>> = Vec::new();
    for cond in spec.conds() {
        let rt = RankTable::from_perm(cond.perm());
        for (a, b) in essential_set(cond.perm()) {
            let r = rt.entry(a, b);
            let rows = d - a;
            let k = rows - r;
            if k + 1 > rows.min(b) {
                continue; // rank at most k holds for any matrix of this shape
            }
            let nb = cond.flag().stratum(b).annihilator().basis().clone();
            // The literal trailing rows of the point's basis, not the
            // canonical stratum basis: every condition must attach its
            // differentials to one shared coordinate system for the
            // velocities, and canonicalizing would reorder rows
            // independently per condition.
            let mut va = Matrix::zeros(rows, d);
            for rr in 0..rows {
                for c in 0..d {
                    va[(rr, c)] = point.basis()[(a + rr, c)];
                }
            }
            let c0 = va.mul(&nb.transpose(), field);
            for rsel in (0..rows).combinations(k + 1) {
                for ssel in (0..b).combinations(k + 1) {
                    let mut sub = Matrix::zeros(k + 1, k + 1);
                    for (ri, &rr) in rsel.iter().enumerate() {
                        for (ci, &cc) in ssel.iter().enumerate() {
                            sub[(ri, ci)] = c0[(rr, cc)];
                        }
                    }
                    let adj = adjugate(&sub, field);
                    let mut row = vec![0u8; d * d];
                    for (rho, &rr) in rsel.iter().enumerate() {
                        for c in 0..d {
                            let mut acc = 0u8;
                            for (shat, &ss) in ssel.iter().enumerate() {
                                acc = field.add(acc, field.mul(adj[(shat, rho)], nb[(ss, c)]));
                            }
                            row[(a + rr) * d + c] = acc;
                        }
                    }
                    jac_rows.push(row);
                }
            }
        }
    }

    let kernel_dim = if jac_rows.is_empty() {
        d * d
    } else {
        let jac = Matrix::from_rows(jac_rows);
        d * d - rank(&jac, field)
    };
    let tangent_dim = kernel_dim - stabilizer_dim(point.coranks());
    let locus_dim = flag_variety_dim(point.coranks()) as i64 - spec.expected_codim() as i64;
    Ok(TangentReport {
        point: point.clone(),
        locus_dim,
        tangent_dim,
        smooth: tangent_dim as i64 == locus_dim,
    })
}
