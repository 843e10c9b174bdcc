//! Integer polynomials reconstructed from exact point counts.
//!
//! Loci here have polynomially many F_q points, so the count polynomial is
//! recovered exactly from counts at distinct primes via Newton divided
//! differences in exact rational arithmetic, and its degree reads off the
//! locus dimension. The caller supplies a degree bound; fitting requires
//! at least two more sample points than the bound so that a data set that
//! is *not* polynomial of bounded degree is detected rather than fitted.

use crate::enumerate::{Budget, EnumError, FlagVariety};
use crate::linalg::{FieldError, FieldSpec};
use crate::locus::{locus_points, CondMode, LocusError, LocusSpec};
use crate::tangent::flag_variety_dim;
use num::rational::Ratio;
use num::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("degree bound {bound} needs at least {needed} sample points, got {got}")]
    TooFewPoints { bound: usize, needed: usize, got: usize },
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(i64),
    #[error("counts do not fit an integer polynomial of degree <= {degree_bound}")]
    NotPolynomial { degree_bound: usize },
    #[error("interpolant has a non-integer coefficient")]
    NotIntegral,
    #[error(transparent)]
    Locus(#[from] LocusError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A polynomial with integer coefficients, stored lowest degree first with
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: i64) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * x as i128 + c as i128)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            }
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "q")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Interpolates the unique polynomial through `points` and certifies that
/// it has integer coefficients and degree at most `degree_bound`. Demands
/// `degree_bound + 2` points so a degree violation is detectable.
pub fn interpolate(points: &[(i64, i64)], degree_bound: usize) -> Result<IntPoly, PolyError> {
    let n = points.len();
    let needed = degree_bound + 2;
    if n < needed {
        return Err(PolyError::TooFewPoints { bound: degree_bound, needed, got: n });
    }
    for (i, &(x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|&(x2, _)| x2 == x) {
            return Err(PolyError::DuplicateAbscissa(x));
        }
    }
    let xs: Vec<Ratio<i128>> = points.iter().map(|&(x, _)| Ratio::from_integer(x as i128)).collect();
    let mut dd: Vec<Ratio<i128>> = points.iter().map(|&(_, y)| Ratio::from_integer(y as i128)).collect();

    // Newton coefficients: dd collapses in place, dd[0] after k rounds is
    // the k-th divided difference f[x_0, ..., x_k].
    let mut newton = vec![dd[0].clone()];
    for k in 1..n {
        for i in 0..n - k {
            dd[i] = (dd[i + 1].clone() - dd[i].clone()) / (xs[i + k].clone() - xs[i].clone());
        }
        newton.push(dd[0].clone());
    }
    if newton[degree_bound + 1..].iter().any(|c| !c.is_zero()) {
        return Err(PolyError::NotPolynomial { degree_bound });
    }

    // Expand sum_k newton[k] * prod_{i<k} (x - x_i) into monomials.
    let mut coeffs = vec![Ratio::<i128>::zero(); degree_bound + 1];
    let mut basis = vec![Ratio::<i128>::one()];
    for (k, nk) in newton.iter().enumerate().take(degree_bound + 1) {
        for (j, b) in basis.iter().enumerate() {
            coeffs[j] += nk.clone() * b.clone();
        }
        let mut next = vec![Ratio::<i128>::zero(); basis.len() + 1];
        for (j, b) in basis.iter().enumerate() {
            next[j + 1] += b.clone();
            next[j] -= xs[k].clone() * b.clone();
        }
        basis = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.is_integer() || c.numer().abs() > i64::MAX as i128 {
            return Err(PolyError::NotIntegral);
        }
        out.push(c.to_integer() as i64);
    }
    let poly = IntPoly::new(out);
    debug_assert!(points.iter().all(|&(x, y)| poly.eval(x) == y as i128));
    Ok(poly)
}

/// Counts the points of a locus family over each prime in `q_list` and
/// interpolates the count polynomial; its degree is the locus dimension.
/// The degree bound is the ambient flag variety dimension, so `q_list`
/// must hold at least `dim + 2` distinct primes.
pub fn point_count_poly<F>(
    coranks: &[usize],
    q_list: &[u64],
    budget: Budget,
    mut spec_for: F,
) -> Result<IntPoly, PolyError>
where
    F: FnMut(FieldSpec) -> Result<LocusSpec, LocusError>,
{
    let bound = flag_variety_dim(coranks);
    let mut samples = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let field = FieldSpec::new(q)?;
        let spec = spec_for(field)?;
        let fv = FlagVariety::enumerate(field, coranks.to_vec(), budget)?;
        let count = locus_points(&spec, &fv, CondMode::Full)?.len();
        samples.push((q as i64, count as i64));
    }
    interpolate(&samples, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::Flag;
    use crate::perm::Perm;

    #[test]
    fn display_and_eval() {
        let p = IntPoly::new(vec![1, 2, 2, 1]);
        assert_eq!(p.to_string(), "q^3 + 2q^2 + 2q + 1");
        assert_eq!(p.eval(2), 21);
        assert_eq!(p.eval(3), 52);
        assert_eq!(IntPoly::new(vec![0, -1, 0, 0]).to_string(), "-q");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(IntPoly::new(vec![0, 0]).degree(), None);
        assert_eq!(IntPoly::new(vec![5]).degree(), Some(0));
    }

    #[test]
    fn interpolates_line_and_poincare_series() {
        let line = interpolate(&[(2, 3), (3, 4), (5, 6), (7, 8), (11, 12)], 1).unwrap();
        assert_eq!(line.coeffs(), &[1, 1]);

        let counts: Vec<(i64, i64)> =
            [2, 3, 5, 7, 11, 13].iter().map(|&q| (q, IntPoly::new(vec![1, 2, 2, 1]).eval(q) as i64)).collect();
        let poincare = interpolate(&counts, 3).unwrap();
        assert_eq!(poincare.coeffs(), &[1, 2, 2, 1]);
        assert_eq!(poincare.degree(), Some(3));
    }

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(
            interpolate(&[(2, 3), (3, 4)], 1),
            Err(PolyError::TooFewPoints { needed: 3, got: 2, .. })
        ));
        assert!(matches!(
            interpolate(&[(2, 3), (2, 4), (5, 6)], 1),
            Err(PolyError::DuplicateAbscissa(2))
        ));
        // 2^q is not a polynomial of degree <= 2.
        let exp = [(2i64, 4i64), (3, 8), (5, 32), (7, 128), (11, 2048)];
        assert_eq!(
            interpolate(&exp, 2),
            Err(PolyError::NotPolynomial { degree_bound: 2 })
        );
        // q(q+1)/2 fits degree 2 but is not integral.
        let tri: Vec<(i64, i64)> = [2i64, 3, 5, 7, 11].iter().map(|&q| (q, q * (q + 1) / 2)).collect();
        assert_eq!(interpolate(&tri, 2), Err(PolyError::NotIntegral));
    }

    #[test]
    fn zero_counts_give_the_zero_polynomial() {
        let z = interpolate(&[(2, 0), (3, 0), (5, 0), (7, 0)], 2).unwrap();
        assert_eq!(z, IntPoly::zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn whole_flag_variety_has_the_poincare_polynomial() {
        let poly = point_count_poly(
            &[0, 1, 2, 3],
            &[2, 3, 5, 7, 11, 13],
            Budget::default(),
            |field| LocusSpec::schubert(Perm::descending(3), Flag::coordinate(field, 3)),
        )
        .unwrap();
        assert_eq!(poly.coeffs(), &[1, 2, 2, 1]);
    }

    #[test]
    fn schubert_polynomials_are_bruhat_cell_sums() {
        use crate::perm::bruhat_leq;
        for sigma in Perm::all(3) {
            let poly = point_count_poly(
                &[0, 1, 2, 3],
                &[2, 3, 5, 7, 11, 13],
                Budget::default(),
                |field| LocusSpec::schubert(sigma.clone(), Flag::coordinate(field, 3)),
            )
            .unwrap();
            let mut expect = vec![0i64; 4];
            for alpha in Perm::all(3).iter().filter(|a| bruhat_leq(a, &sigma)) {
                expect[alpha.inversions()] += 1;
            }
            assert_eq!(poly, IntPoly::new(expect), "sigma={sigma}");
            assert_eq!(poly.degree(), Some(sigma.inversions()), "sigma={sigma}");
        }
    }
}
