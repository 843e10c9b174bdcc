//! Schubert and Richardson loci cut out by rank conditions.
//!
//! A Schubert condition is a pair (σ, F) of a permutation and a complete
//! reference flag. A moving flag V with strata V^a (corank a) satisfies it
//! when
//!
//! ```text
//! dim(V^a ∩ F^b)  >=  r^σ(a, b)   for all listed coranks a and all b,
//! ```
//!
//! which for complete V says exactly that the relative position of (V, F)
//! is at most σ in Bruhat order. A locus specification is a finite list of
//! such conditions against possibly different reference flags; imposing
//! two of them cuts out a Richardson locus, more an intersection of
//! several Schubert loci.
//!
//! Membership can be tested against the full rank grid or only against the
//! essential set of each σ. The essential conditions sit in rows that are
//! ascents of σ, so the reduced test is available exactly when every
//! ascent is a listed corank of the moving flag.

use crate::enumerate::{EnumError, FlagVariety};
use crate::flag::Flag;
use crate::linalg::FieldSpec;
use crate::perm::{ess_rows_compatible, essential_set, Perm, RankTable};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocusError {
    #[error("condition permutation has degree {0} but the reference flag has d = {1}")]
    DegreeMismatch(usize, usize),
    #[error("reference flags must be complete")]
    PartialReference,
    #[error("conditions mix different fields or ambient dimensions")]
    MixedConditions,
    #[error("a locus needs at least one condition")]
    Empty,
    #[error("the flag variety lives in a different space than the conditions")]
    SpaceMismatch,
    #[error("essential rows of {perm} are not all listed coranks of {coranks:?}")]
    EssentialRowsOutsideCoranks { perm: Perm, coranks: Vec<usize> },
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// Whether membership checks the full rank grid or only the essential set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondMode {
    Full,
    Essential,
}

/// One rank condition: position at most `perm` relative to `flag`.
#[derive(Debug, Clone)]
pub struct SchubertCond {
    perm: Perm,
    flag: Flag,
}

impl SchubertCond {
    pub fn new(perm: Perm, flag: Flag) -> Result<SchubertCond, LocusError> {
        if perm.degree() != flag.d() {
            return Err(LocusError::DegreeMismatch(perm.degree(), flag.d()));
        }
        if !flag.is_complete() {
            return Err(LocusError::PartialReference);
        }
        Ok(SchubertCond { perm, flag })
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    fn holds(&self, v: &Flag, mode: CondMode) -> bool {
        let rank = RankTable::from_perm(&self.perm);
        match mode {
            CondMode::Full => v.coranks().iter().all(|&a| {
                (0..=v.d()).all(|b| {
                    let need = rank.entry(a, b);
                    need == 0 || v.stratum(a).intersection_dim(&self.flag.stratum(b)) >= need
                })
            }),
            CondMode::Essential => {
                assert!(
                    ess_rows_compatible(&self.perm, v.coranks()),
                    "essential membership test on incompatible coranks"
                );
                essential_set(&self.perm).iter().all(|&(a, b)| {
                    v.stratum(a).intersection_dim(&self.flag.stratum(b)) >= rank.entry(a, b)
                })
            }
        }
    }
}

/// A conjunction of Schubert conditions in a common ambient space.
#[derive(Debug, Clone)]
pub struct LocusSpec {
    field: FieldSpec,
    d: usize,
    conds: Vec<SchubertCond>,
}

impl LocusSpec {
    pub fn multi(conds: Vec<SchubertCond>) -> Result<LocusSpec, LocusError> {
        let first = conds.first().ok_or(LocusError::Empty)?;
        let (field, d) = (first.flag.field(), first.flag.d());
        if conds.iter().any(|c| c.flag.field() != field || c.flag.d() != d) {
            return Err(LocusError::MixedConditions);
        }
        Ok(LocusSpec { field, d, conds })
    }

    pub fn schubert(sigma: Perm, flag: Flag) -> Result<LocusSpec, LocusError> {
        LocusSpec::multi(vec![SchubertCond::new(sigma, flag)?])
    }

    pub fn richardson(sigma: Perm, p: Flag, tau: Perm, q: Flag) -> Result<LocusSpec, LocusError> {
        LocusSpec::multi(vec![SchubertCond::new(sigma, p)?, SchubertCond::new(tau, q)?])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn conds(&self) -> &[SchubertCond] {
        &self.conds
    }

    /// The codimension the conditions impose when they are in general
    /// position: the sum of the coinversion counts.
    pub fn expected_codim(&self) -> usize {
        self.conds.iter().map(|c| c.perm.coinversions()).sum()
    }

    /// True iff every condition's essential rows lie in `coranks`, so the
    /// essential membership test is equivalent to the full one.
    pub fn compatible_with(&self, coranks: &[usize]) -> bool {
        self.conds.iter().all(|c| ess_rows_compatible(&c.perm, coranks))
    }

    /// Does the flag `v` satisfy every condition?
    pub fn member(&self, v: &Flag, mode: CondMode) -> bool {
        assert!(
            v.field() == self.field && v.d() == self.d,
            "membership test across different ambient spaces"
        );
        self.conds.iter().all(|c| c.holds(v, mode))
    }
}

/// The flags of `fv` satisfying the specification, in `fv`'s canonical
/// order.
pub fn locus_points(
    spec: &LocusSpec,
    fv: &FlagVariety,
    mode: CondMode,
) -> Result<Vec<Flag>, LocusError> {
    if fv.field() != spec.field || fv.d() != spec.d {
        return Err(LocusError::SpaceMismatch);
    }
    if mode == CondMode::Essential && !spec.compatible_with(fv.coranks()) {
        let bad = spec.conds.iter().find(|c| !ess_rows_compatible(&c.perm, fv.coranks())).unwrap();
        return Err(LocusError::EssentialRowsOutsideCoranks {
            perm: bad.perm.clone(),
            coranks: fv.coranks().to_vec(),
        });
    }
    Ok(fv.points().iter().filter(|v| spec.member(v, mode)).cloned().collect())
}

/// Flags of `fv` in position at most `sigma` to `p` and at most `tau` to
/// `q`: the Richardson locus of the pair.
pub fn richardson_points(
    sigma: Perm,
    tau: Perm,
    p: Flag,
    q: Flag,
    fv: &FlagVariety,
) -> Result<Vec<Flag>, LocusError> {
    let spec = LocusSpec::richardson(sigma, p, tau, q)?;
    locus_points(&spec, fv, CondMode::Full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{relative_position_tally, Budget};
    use crate::flag::{adapted_flags, assoc_perm};
    use crate::perm::bruhat_leq;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn complete_fv(field: FieldSpec, d: usize) -> FlagVariety {
        FlagVariety::enumerate(field, (0..=d).collect(), Budget::default()).unwrap()
    }

    #[test]
    fn spec_validation() {
        let field = f(2);
        let coord = Flag::coordinate(field, 3);
        assert!(matches!(
            SchubertCond::new(Perm::identity(4), coord.clone()),
            Err(LocusError::DegreeMismatch(4, 3))
        ));
        let partial = Flag::coordinate_partial(field, vec![0, 1, 3]).unwrap();
        assert!(matches!(
            SchubertCond::new(Perm::identity(3), partial),
            Err(LocusError::PartialReference)
        ));
        assert!(matches!(LocusSpec::multi(vec![]), Err(LocusError::Empty)));
        let other = Flag::coordinate(f(3), 3);
        let mixed = LocusSpec::richardson(
            Perm::identity(3),
            coord,
            Perm::identity(3),
            other,
        );
        assert!(matches!(mixed, Err(LocusError::MixedConditions)));
    }

    #[test]
    fn descending_condition_is_vacuous() {
        let field = f(2);
        let fv = complete_fv(field, 3);
        let (_, q_ref) = adapted_flags(field, &Perm::from_word(vec![1, 2, 0]).unwrap());
        let spec = LocusSpec::schubert(Perm::descending(3), q_ref).unwrap();
        let pts = locus_points(&spec, &fv, CondMode::Full).unwrap();
        assert_eq!(pts.len(), 21);
        assert_eq!(spec.expected_codim(), 0);
    }

    #[test]
    fn identity_locus_is_the_reference_alone() {
        let field = f(3);
        let fv = complete_fv(field, 3);
        let (_, q_ref) = adapted_flags(field, &Perm::from_word(vec![2, 0, 1]).unwrap());
        let spec = LocusSpec::schubert(Perm::identity(3), q_ref.clone()).unwrap();
        let pts = locus_points(&spec, &fv, CondMode::Full).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].coincides(&q_ref));
    }

    #[test]
    fn schubert_counts_are_cell_sums() {
        let field = f(2);
        let fv = complete_fv(field, 3);
        let coord = Flag::coordinate(field, 3);
        for sigma in Perm::all(3) {
            let spec = LocusSpec::schubert(sigma.clone(), coord.clone()).unwrap();
            let pts = locus_points(&spec, &fv, CondMode::Full).unwrap();
            let expect: u64 = Perm::all(3)
                .iter()
                .filter(|a| bruhat_leq(a, &sigma))
                .map(|a| 2u64.pow(a.inversions() as u32))
                .sum();
            assert_eq!(pts.len() as u64, expect, "sigma={sigma}");
        }
    }

    #[test]
    fn membership_is_bruhat_monotone() {
        let field = f(2);
        let fv = complete_fv(field, 3);
        let (_, q_ref) = adapted_flags(field, &Perm::from_word(vec![2, 1, 0]).unwrap());
        let perms = Perm::all(3);
        for sigma in &perms {
            for tau in &perms {
                if !bruhat_leq(sigma, tau) {
                    continue;
                }
                let small = LocusSpec::schubert(sigma.clone(), q_ref.clone()).unwrap();
                let large = LocusSpec::schubert(tau.clone(), q_ref.clone()).unwrap();
                for v in fv.points() {
                    assert!(
                        !small.member(v, CondMode::Full) || large.member(v, CondMode::Full),
                        "X_{sigma} not inside X_{tau}"
                    );
                }
            }
        }
    }

    #[test]
    fn full_and_essential_modes_agree_with_bruhat_on_complete_flags() {
        let field = f(2);
        let fv = complete_fv(field, 3);
        let coord = Flag::coordinate(field, 3);
        for sigma in Perm::all(3) {
            let spec = LocusSpec::schubert(sigma.clone(), coord.clone()).unwrap();
            for v in fv.points() {
                let full = spec.member(v, CondMode::Full);
                let ess = spec.member(v, CondMode::Essential);
                let bruhat = bruhat_leq(&assoc_perm(v, &coord), &sigma);
                assert_eq!(full, ess, "sigma={sigma}");
                assert_eq!(full, bruhat, "sigma={sigma}");
            }
        }
    }

    #[test]
    fn essential_mode_demands_compatible_coranks() {
        let field = f(2);
        let coord = Flag::coordinate(field, 3);
        // (0, 2, 1) has its only ascent at row 1, which Gr(1, 3) does not list.
        let sigma = Perm::from_word(vec![0, 2, 1]).unwrap();
        let spec = LocusSpec::schubert(sigma.clone(), coord).unwrap();
        assert!(!spec.compatible_with(&[0, 2, 3]));
        assert!(spec.compatible_with(&[0, 1, 3]));
        let gr = FlagVariety::enumerate(field, vec![0, 2, 3], Budget::default()).unwrap();
        let err = locus_points(&spec, &gr, CondMode::Essential);
        assert!(matches!(err, Err(LocusError::EssentialRowsOutsideCoranks { .. })));
        assert!(locus_points(&spec, &gr, CondMode::Full).is_ok());
    }

    #[test]
    fn lines_inside_a_plane() {
        // The condition "position <= (2,0,1)" on Gr(1,3) asks for lines
        // inside the reference plane: q + 1 of them.
        let sigma = Perm::from_word(vec![2, 0, 1]).unwrap();
        assert_eq!(essential_set(&sigma), vec![(2, 1)]);
        for q in [2u64, 3, 5] {
            let field = f(q);
            let gr = FlagVariety::enumerate(field, vec![0, 2, 3], Budget::default()).unwrap();
            let coord = Flag::coordinate(field, 3);
            let spec = LocusSpec::schubert(sigma.clone(), coord.clone()).unwrap();
            for mode in [CondMode::Full, CondMode::Essential] {
                let pts = locus_points(&spec, &gr, mode).unwrap();
                assert_eq!(pts.len() as u64, q + 1, "q={q}");
                for v in &pts {
                    assert!(coord.stratum(1).contains(&v.stratum(2)));
                }
            }
        }
    }

    #[test]
    fn richardson_points_match_the_position_tally() {
        let field = f(2);
        let fv = complete_fv(field, 3);
        let coord = Flag::coordinate(field, 3);
        let (_, q_ref) = adapted_flags(field, &Perm::descending(3));
        let tally = relative_position_tally(&q_ref, Budget::default()).unwrap();
        for sigma in Perm::all(3) {
            for tau in Perm::all(3) {
                let pts = richardson_points(
                    sigma.clone(),
                    tau.clone(),
                    coord.clone(),
                    q_ref.clone(),
                    &fv,
                )
                .unwrap();
                assert_eq!(
                    pts.len() as u64,
                    tally.richardson_count(&sigma, &tau),
                    "sigma={sigma} tau={tau}"
                );
            }
        }
    }
}
