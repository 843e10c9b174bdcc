//! Named verification suites: each runs a family of exhaustive or seeded
//! checks and produces a deterministic JSON-serializable report.
//!
//! A suite never panics on a failed mathematical assertion; it records a
//! replayable counterexample (the flags involved, in the text format) and
//! reports `passed: false`. Errors are reserved for configuration problems
//! and blown budgets. Fixed config and seed give byte-identical reports:
//! all maps are ordered, sampling is seeded, and the parallel sweeps merge
//! by summation.

use crate::demazure::{star, star_simple, star_via_rank_formula};
use crate::enumerate::{
    flag_count, relative_position_tally, Budget, EnumError, FlagVariety, PositionTally,
};
use crate::flag::{adapted_flags, assoc_perm, invfix_check, m_dim, Flag};
use crate::linalg::{FieldError, FieldSpec, Matrix};
use crate::locus::{locus_points, CondMode, LocusError, LocusSpec};
use crate::perm::{bruhat_leq, ls_smooth, Perm};
use crate::poly::{interpolate, IntPoly, PolyError};
use crate::tangent::{tangent_report, TangentError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; known suites: {known}", known = SuiteKind::ALL.map(|k| k.name()).join(", "))]
    UnknownSuite(String),
    #[error("suite {0} does not support d = {1}")]
    BadDimension(&'static str, usize),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Locus(#[from] LocusError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tangent(#[from] TangentError),
}

impl SuiteError {
    /// True when the underlying cause is a blown enumeration budget.
    pub fn is_budget_exceeded(&self) -> bool {
        let e = match self {
            SuiteError::Enum(e) => e,
            SuiteError::Locus(LocusError::Enum(e)) => e,
            SuiteError::Poly(PolyError::Enum(e)) => e,
            SuiteError::Poly(PolyError::Locus(LocusError::Enum(e))) => e,
            _ => return false,
        };
        matches!(e, EnumError::BudgetExceeded { .. })
    }
}

/// The registered verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    DemazureAxioms,
    InvFix,
    MDim,
    ImageTheorem,
    Codimension,
    SmoothLocus,
    MultiProduct,
    EssReduction,
    SchubertCounts,
    Lemma59,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 10] = [
        SuiteKind::DemazureAxioms,
        SuiteKind::InvFix,
        SuiteKind::MDim,
        SuiteKind::ImageTheorem,
        SuiteKind::Codimension,
        SuiteKind::SmoothLocus,
        SuiteKind::MultiProduct,
        SuiteKind::EssReduction,
        SuiteKind::SchubertCounts,
        SuiteKind::Lemma59,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::DemazureAxioms => "demazure-axioms",
            SuiteKind::InvFix => "invfix",
            SuiteKind::MDim => "m-dim",
            SuiteKind::ImageTheorem => "image-theorem",
            SuiteKind::Codimension => "codimension",
            SuiteKind::SmoothLocus => "smooth-locus",
            SuiteKind::MultiProduct => "multi-product",
            SuiteKind::EssReduction => "ess-reduction",
            SuiteKind::SchubertCounts => "schubert-counts",
            SuiteKind::Lemma59 => "lemma59",
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<SuiteKind, SuiteError> {
        SuiteKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

/// Configuration for one suite run. `d` and `q_list` fall back to the
/// suite's documented defaults when absent.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub kind: SuiteKind,
    pub d: Option<usize>,
    pub q_list: Option<Vec<u64>>,
    pub budget: Budget,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(kind: SuiteKind) -> SuiteConfig {
        SuiteConfig { kind, d: None, q_list: None, budget: Budget::default(), seed: 0 }
    }
}

/// A replayable failed assertion.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Counterexample {
    pub assertion: String,
    pub detail: String,
    /// The flags involved, in the matrix text format.
    pub points: Vec<String>,
}

/// The outcome of one suite run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub d: usize,
    pub q: Vec<u64>,
    pub spec: String,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
    pub counts: BTreeMap<String, u64>,
    pub polynomials: BTreeMap<String, Vec<i64>>,
}

const MAX_COUNTEREXAMPLES: usize = 32;

/// Accumulates assertions and observations for a report.
struct Check {
    report: SuiteReport,
    suppressed: u64,
}

impl Check {
    fn new(kind: SuiteKind, d: usize, q: Vec<u64>, spec: impl Into<String>) -> Check {
        Check {
            report: SuiteReport {
                suite: kind.name().to_string(),
                d,
                q,
                spec: spec.into(),
                passed: true,
                counterexamples: Vec::new(),
                counts: BTreeMap::new(),
                polynomials: BTreeMap::new(),
            },
            suppressed: 0,
        }
    }

    fn holds(&mut self, ok: bool, assertion: &str, detail: impl FnOnce() -> String, points: impl FnOnce() -> Vec<String>) {
        if ok {
            return;
        }
        self.report.passed = false;
        if self.report.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.report.counterexamples.push(Counterexample {
                assertion: assertion.to_string(),
                detail: detail(),
                points: points(),
            });
        } else {
            self.suppressed += 1;
        }
    }

    fn count(&mut self, key: impl Into<String>, value: u64) {
        self.report.counts.insert(key.into(), value);
    }

    fn poly(&mut self, key: impl Into<String>, poly: &IntPoly) {
        self.report.polynomials.insert(key.into(), poly.coeffs().to_vec());
    }

    fn finish(mut self) -> SuiteReport {
        if self.suppressed > 0 {
            self.report.counterexamples.push(Counterexample {
                assertion: "suppressed".to_string(),
                detail: format!("{} further counterexamples suppressed", self.suppressed),
                points: vec![],
            });
        }
        self.report
    }
}

/// Runs the configured suite to completion and returns its report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    match cfg.kind {
        SuiteKind::DemazureAxioms => demazure_axioms(cfg),
        SuiteKind::InvFix => invfix(cfg),
        SuiteKind::MDim => mdim(cfg),
        SuiteKind::ImageTheorem => image_theorem(cfg),
        SuiteKind::Codimension => codimension(cfg),
        SuiteKind::SmoothLocus => smooth_locus(cfg),
        SuiteKind::MultiProduct => multi_product(cfg),
        SuiteKind::EssReduction => ess_reduction(cfg),
        SuiteKind::SchubertCounts => schubert_counts(cfg),
        SuiteKind::Lemma59 => lemma59(cfg),
    }
}

fn dim_in(cfg: &SuiteConfig, default: usize, lo: usize, hi: usize) -> Result<usize, SuiteError> {
    let d = cfg.d.unwrap_or(default);
    if d < lo || d > hi {
        return Err(SuiteError::BadDimension(cfg.kind.name(), d));
    }
    Ok(d)
}

fn qs_or(cfg: &SuiteConfig, default: &[u64]) -> Vec<u64> {
    cfg.q_list.clone().unwrap_or_else(|| default.to_vec())
}

/// `leq[i][j]` iff the i-th permutation is Bruhat-below the j-th, indices
/// in lexicographic order.
fn bruhat_matrix(perms: &[Perm]) -> Vec<Vec<bool>> {
    perms.iter().map(|a| perms.iter().map(|b| bruhat_leq(a, b)).collect()).collect()
}

/// All |X_sigma(coordinate) ∩ X_tau(reference)| at once from one tally.
fn all_richardson_counts(tally: &PositionTally, leq: &[Vec<bool>]) -> Vec<Vec<u64>> {
    let n = leq.len();
    let mut row = vec![vec![0u64; n]; n];
    for alpha in 0..n {
        for tau in 0..n {
            row[alpha][tau] =
                (0..n).filter(|&beta| leq[beta][tau]).map(|beta| tally.count_by_lex(alpha, beta)).sum();
        }
    }
    let mut out = vec![vec![0u64; n]; n];
    for (sigma, o) in out.iter_mut().enumerate() {
        for tau in 0..n {
            o[tau] = (0..n).filter(|&alpha| leq[alpha][sigma]).map(|alpha| row[alpha][tau]).sum();
        }
    }
    out
}

/// The T-fixed flag of the cell of `alpha`: basis row b is e_{alpha(b)}.
fn coordinate_perm_flag(field: FieldSpec, alpha: &Perm) -> Flag {
    let d = alpha.degree();
    let mut m = Matrix::zeros(d, d);
    for b in 0..d {
        m[(b, alpha.apply(b))] = 1;
    }
    Flag::complete(field, m).expect("permutation matrices are invertible")
}

fn demazure_axioms(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 5)?;
    let mut c = Check::new(cfg.kind, d, vec![], format!("exhaustive pairs and triples in S_{d}"));
    let perms = Perm::all(d);
    let n = perms.len();

    for t in &perms {
        for p in &perms {
            let fold = star(t, p).expect("equal degrees");
            let formula = star_via_rank_formula(t, p).expect("equal degrees");
            c.holds(
                fold == formula,
                "star-implementations-agree",
                || format!("t={t} p={p}: fold gives {fold}, rank formula gives {formula}"),
                Vec::new,
            );
            let lhs = fold.inverse();
            let rhs = star(&p.inverse(), &t.inverse()).expect("equal degrees");
            c.holds(
                lhs == rhs,
                "star-inverse-antiautomorphism",
                || format!("t={t} p={p}: (t⋆p)⁻¹={lhs} but p⁻¹⋆t⁻¹={rhs}"),
                Vec::new,
            );
        }
        c.holds(
            &star(t, &Perm::identity(d)).unwrap() == t && &star(&Perm::identity(d), t).unwrap() == t,
            "star-unit",
            || format!("t={t}"),
            Vec::new,
        );
        for s in 0..d - 1 {
            let once = star_simple(t, s).expect("s in range");
            let twice = star_simple(&once, s).expect("s in range");
            c.holds(
                once == twice,
                "star-simple-idempotent",
                || format!("t={t} s={s}"),
                Vec::new,
            );
        }
    }
    for a in &perms {
        for b in &perms {
            let ab = star(a, b).unwrap();
            for x in &perms {
                let left = star(&ab, x).unwrap();
                let right = star(a, &star(b, x).unwrap()).unwrap();
                c.holds(
                    left == right,
                    "star-associative",
                    || format!("a={a} b={b} x={x}: ({left}) vs ({right})"),
                    Vec::new,
                );
            }
        }
    }
    c.count("pairs", (n * n) as u64);
    c.count("triples", (n * n * n) as u64);
    Ok(c.finish())
}

fn invfix(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 4)?;
    let qs = qs_or(cfg, &[2, 3]);
    let mut c = Check::new(cfg.kind, d, qs.clone(), format!("adapted pairs for all of S_{d}"));
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let mut pairs = 0;
        for sigma in Perm::all(d) {
            let (p_flag, q_flag) = adapted_flags(field, &sigma);
            let assoc = assoc_perm(&p_flag, &q_flag);
            c.holds(
                assoc == sigma,
                "adapted-pair-position",
                || format!("q={q} sigma={sigma}: assoc={assoc}"),
                || vec![p_flag.to_text(), q_flag.to_text()],
            );
            let got = invfix_check(&p_flag, &q_flag);
            c.holds(
                got == sigma.coinversions(),
                "invfix-counts-coinversions",
                || format!("q={q} sigma={sigma}: d²−dim(FixP+FixQ)={got}, coinversions={}", sigma.coinversions()),
                || vec![p_flag.to_text(), q_flag.to_text()],
            );
            pairs += 1;
        }
        c.count(format!("pairs q={q}"), pairs);
    }
    Ok(c.finish())
}

fn mdim(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 4)?;
    let qs = qs_or(cfg, &[2]);
    let q0 = qs[0];
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!("adapted pairs in S_{d}; all flag triples at d=3"),
    );
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        for sigma in Perm::all(d) {
            let (p_flag, q_flag) = adapted_flags(field, &sigma);
            let got = m_dim(&[p_flag.clone(), q_flag.clone()]);
            c.holds(
                got == sigma.coinversions(),
                "pair-m-dim-is-coinversions",
                || format!("q={q} sigma={sigma}: m_dim={got}, coinversions={}", sigma.coinversions()),
                || vec![p_flag.to_text(), q_flag.to_text()],
            );
        }
        c.count(format!("pairs q={q}"), Perm::all(d).len() as u64);
    }

    // A constant family of three flags is never versal over a reduced
    // point: the deformation space M keeps a positive dimension.
    let field = FieldSpec::new(q0)?;
    let fv = FlagVariety::enumerate(field, (0..=3).collect(), cfg.budget)?;
    let mut triples = 0u64;
    for a in fv.points() {
        for b in fv.points() {
            for x in fv.points() {
                let got = m_dim(&[a.clone(), b.clone(), x.clone()]);
                c.holds(
                    got > 0,
                    "triple-m-dim-positive",
                    || format!("q={q0}: m_dim=0"),
                    || vec![a.to_text(), b.to_text(), x.to_text()],
                );
                triples += 1;
            }
        }
    }
    c.count(format!("triples d=3 q={q0}"), triples);
    Ok(c.finish())
}

fn image_theorem(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 3, 2, 4)?;
    let qs = qs_or(cfg, if d >= 4 { &[2] } else { &[2, 3] });
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!("all (sigma, tau) in S_{d}² against one adapted pair per relative position"),
    );
    let perms = Perm::all(d);
    let n = perms.len();
    let leq = bruhat_matrix(&perms);
    // bound_idx[sigma][tau] = lex index of tau ⋆ sigma⁻¹.
    let bound_idx: Vec<Vec<usize>> = perms
        .iter()
        .map(|sigma| {
            perms
                .iter()
                .map(|tau| star(tau, &sigma.inverse()).expect("equal degrees").lex_index())
                .collect()
        })
        .collect();

    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let mut nonempty_total = 0u64;
        for (ip, pi) in perms.iter().enumerate() {
            let (p_ref, q_ref) = adapted_flags(field, pi);
            let tally = relative_position_tally(&q_ref, cfg.budget)?;
            let rich = all_richardson_counts(&tally, &leq);
            for is in 0..n {
                for it in 0..n {
                    let nonempty = rich[is][it] > 0;
                    let predicted = leq[ip][bound_idx[is][it]];
                    nonempty_total += nonempty as u64;
                    c.holds(
                        nonempty == predicted,
                        "image-is-demazure-interval",
                        || {
                            format!(
                                "q={q} pi={pi} sigma={} tau={}: |R|={} but pi ≤ tau⋆sigma⁻¹ is {}",
                                perms[is], perms[it], rich[is][it], predicted
                            )
                        },
                        || vec![p_ref.to_text(), q_ref.to_text()],
                    );
                }
            }
        }
        c.count(format!("nonempty (pi,sigma,tau) q={q}"), nonempty_total);
    }

    // Change-of-basis equivariance spot check: transporting the reference
    // pair by a global invertible matrix leaves every count unchanged.
    if d <= 3 {
        let q = qs[0];
        let field = FieldSpec::new(q)?;
        let fv = FlagVariety::enumerate(field, (0..=d).collect(), cfg.budget)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..3 {
            let pi = &perms[rng.gen_range(0..n)];
            let sigma = perms[rng.gen_range(0..n)].clone();
            let tau = perms[rng.gen_range(0..n)].clone();
            let g = loop {
                let mut m = Matrix::zeros(d, d);
                for r in 0..d {
                    for cc in 0..d {
                        m[(r, cc)] = rng.gen_range(0..field.p());
                    }
                }
                if m.inverse(field).is_some() {
                    break m;
                }
            };
            let (p_ref, q_ref) = adapted_flags(field, pi);
            let p2 = Flag::complete(field, p_ref.basis().mul(&g, field)).expect("g is invertible");
            let q2 = Flag::complete(field, q_ref.basis().mul(&g, field)).expect("g is invertible");
            let moved = assoc_perm(&p2, &q2);
            c.holds(
                &moved == pi,
                "assoc-is-equivariant",
                || format!("q={q} pi={pi}: transported pair has position {moved}"),
                || vec![p2.to_text(), q2.to_text()],
            );
            let spec1 = LocusSpec::richardson(sigma.clone(), p_ref, tau.clone(), q_ref)?;
            let spec2 = LocusSpec::richardson(sigma.clone(), p2, tau.clone(), q2)?;
            let n1 = locus_points(&spec1, &fv, CondMode::Full)?.len();
            let n2 = locus_points(&spec2, &fv, CondMode::Full)?.len();
            c.holds(
                n1 == n2,
                "counts-are-equivariant",
                || format!("q={q} pi={pi} sigma={sigma} tau={tau}: {n1} vs {n2}"),
                Vec::new,
            );
        }
    }
    Ok(c.finish())
}

fn codimension(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 3, 2, 4)?;
    let qs = qs_or(cfg, if d >= 4 { &[2, 3, 5, 7, 11, 13, 17, 19] } else { &[2, 3, 5, 7, 11, 13] });
    let dim_fl = d * (d - 1) / 2;
    let perms = Perm::all(d);
    let n = perms.len();
    let leq = bruhat_matrix(&perms);

    let pairs: Vec<(usize, usize)> = if d <= 3 {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..50).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!("{} (sigma, tau) pairs over a transverse reference pair", pairs.len()),
    );

    // The heavy sweeps need the whole variety; lift the cap to the largest
    // configured sweep rather than failing under the general-purpose default.
    let mut budget = cfg.budget;
    for &q in &qs {
        let needed = flag_count(&(0..=d).collect::<Vec<_>>(), q)?;
        if needed > budget.limit() {
            budget = Budget::new(needed);
        }
    }

    let mut samples: Vec<Vec<(i64, i64)>> = vec![Vec::new(); pairs.len()];
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let (_, q_ref) = adapted_flags(field, &Perm::descending(d));
        let tally = relative_position_tally(&q_ref, budget)?;
        let rich = all_richardson_counts(&tally, &leq);
        for (k, &(is, it)) in pairs.iter().enumerate() {
            samples[k].push((q as i64, rich[is][it] as i64));
        }
    }

    let mut empty = 0u64;
    for (k, &(is, it)) in pairs.iter().enumerate() {
        let (sigma, tau) = (&perms[is], &perms[it]);
        let zeros = samples[k].iter().filter(|&&(_, y)| y == 0).count();
        if zeros == samples[k].len() {
            empty += 1;
            continue;
        }
        c.holds(
            zeros == 0,
            "emptiness-is-q-independent",
            || format!("sigma={sigma} tau={tau}: counts {:?}", samples[k]),
            Vec::new,
        );
        if zeros > 0 {
            continue;
        }
        match interpolate(&samples[k], dim_fl) {
            Ok(poly) => {
                let expect = dim_fl as i64 - sigma.coinversions() as i64 - tau.coinversions() as i64;
                let got = poly.degree().map(|x| x as i64);
                c.holds(
                    got == Some(expect),
                    "richardson-codimension",
                    || format!("sigma={sigma} tau={tau}: degree {got:?}, expected {expect}; poly {poly}"),
                    Vec::new,
                );
                c.poly(format!("R[{sigma}|{tau}]"), &poly);
            }
            Err(e @ (PolyError::NotPolynomial { .. } | PolyError::NotIntegral)) => {
                c.holds(
                    false,
                    "count-is-polynomial",
                    || format!("sigma={sigma} tau={tau}: {e}; counts {:?}", samples[k]),
                    Vec::new,
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    c.count("pairs", pairs.len() as u64);
    c.count("empty pairs", empty);
    Ok(c.finish())
}

fn smooth_locus(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 4)?;
    let qs = qs_or(cfg, &[2]);
    let poly_qs: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19];
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!(
            "full tangent sweeps of every X_sigma at q in {qs:?}; singular counts over {poly_qs:?}; 20 Richardson pairs"
        ),
    );
    let perms = Perm::all(d);
    let n = perms.len();
    let leq = bruhat_matrix(&perms);
    let dim_fl = d * (d - 1) / 2;

    // Tangent dimension of X_sigma at the T-fixed point of each cell
    // alpha ≤ sigma, per field.
    let rep_dims = |field: FieldSpec| -> Result<Vec<Vec<Option<usize>>>, SuiteError> {
        let coord = Flag::coordinate(field, d);
        let reps: Vec<Flag> = perms.iter().map(|a| coordinate_perm_flag(field, a)).collect();
        let mut out = vec![vec![None; n]; n];
        for (is, sigma) in perms.iter().enumerate() {
            let spec = LocusSpec::schubert(sigma.clone(), coord.clone())?;
            for (ia, rep) in reps.iter().enumerate() {
                if leq[ia][is] {
                    out[is][ia] = Some(tangent_report(rep, &spec)?.tangent_dim);
                }
            }
        }
        Ok(out)
    };

    // Full sweeps: pattern-avoidance criterion, T-fixed sufficiency, and
    // constancy of the tangent dimension along cells.
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let coord = Flag::coordinate(field, d);
        let fv = FlagVariety::enumerate(field, (0..=d).collect(), cfg.budget)?;
        let cells: Vec<usize> = fv.points().iter().map(|v| assoc_perm(v, &coord).lex_index()).collect();
        let reps = rep_dims(field)?;
        let mut swept = 0u64;
        for (is, sigma) in perms.iter().enumerate() {
            let spec = LocusSpec::schubert(sigma.clone(), coord.clone())?;
            let dim = sigma.inversions();
            let mut all_smooth = true;
            let mut singular_brute: u64 = 0;
            for (v, &ia) in fv.points().iter().zip(&cells) {
                if !leq[ia][is] {
                    continue;
                }
                let rep = tangent_report(v, &spec)?;
                swept += 1;
                all_smooth &= rep.smooth;
                singular_brute += (!rep.smooth) as u64;
                c.holds(
                    Some(rep.tangent_dim) == reps[is][ia],
                    "tangent-constant-on-cells",
                    || {
                        format!(
                            "q={q} sigma={sigma} cell={}: point tangent {} vs T-fixed tangent {:?}",
                            perms[ia], rep.tangent_dim, reps[is][ia]
                        )
                    },
                    || vec![v.to_text()],
                );
            }
            c.holds(
                all_smooth == ls_smooth(sigma),
                "pattern-avoidance-criterion",
                || format!("q={q} sigma={sigma}: all points smooth = {all_smooth}, ls_smooth = {}", ls_smooth(sigma)),
                Vec::new,
            );
            let singular_tfixed = (0..n).any(|ia| reps[is][ia].is_some_and(|t| t != dim));
            c.holds(
                (!all_smooth) == singular_tfixed,
                "t-fixed-sufficiency",
                || format!("q={q} sigma={sigma}: singular point exists = {}, singular T-fixed point exists = {singular_tfixed}", !all_smooth),
                Vec::new,
            );
            // Cross-check the cell-sum singular count against brute force.
            let cell_sum: u64 = (0..n)
                .filter(|&ia| reps[is][ia].is_some_and(|t| t != dim))
                .map(|ia| q.pow(perms[ia].inversions() as u32))
                .sum();
            c.holds(
                cell_sum == singular_brute,
                "singular-count-is-a-cell-sum",
                || format!("q={q} sigma={sigma}: cell sum {cell_sum}, brute count {singular_brute}"),
                Vec::new,
            );
        }
        c.count(format!("tangent reports q={q}"), swept);
    }

    // Singular-point-count polynomials over the full prime list, from the
    // per-cell tangent dimensions; degree ≤ dim − 2 (regular in
    // codimension one).
    let mut singular_samples: Vec<Vec<(i64, i64)>> = vec![Vec::new(); n];
    for &q in &poly_qs {
        let field = FieldSpec::new(q)?;
        let reps = rep_dims(field)?;
        for (is, sigma) in perms.iter().enumerate() {
            let dim = sigma.inversions();
            let count: u64 = (0..n)
                .filter(|&ia| reps[is][ia].is_some_and(|t| t != dim))
                .map(|ia| q.pow(perms[ia].inversions() as u32))
                .sum();
            singular_samples[is].push((q as i64, count as i64));
        }
    }
    for (is, sigma) in perms.iter().enumerate() {
        match interpolate(&singular_samples[is], dim_fl) {
            Ok(poly) => {
                let dim = sigma.inversions();
                match poly.degree() {
                    None => c.holds(
                        ls_smooth(sigma),
                        "smooth-iff-no-singular-points",
                        || format!("sigma={sigma}: no singular points but ls_smooth is false"),
                        Vec::new,
                    ),
                    Some(deg) => {
                        c.holds(
                            !ls_smooth(sigma),
                            "smooth-iff-no-singular-points",
                            || format!("sigma={sigma}: singular points exist but ls_smooth is true"),
                            Vec::new,
                        );
                        c.holds(
                            deg + 2 <= dim,
                            "singular-locus-codim-at-least-2",
                            || format!("sigma={sigma}: singular count {poly} has degree {deg}, dim is {dim}"),
                            Vec::new,
                        );
                    }
                }
                c.poly(format!("sing[{sigma}]"), &poly);
            }
            Err(e @ (PolyError::NotPolynomial { .. } | PolyError::NotIntegral)) => {
                c.holds(
                    false,
                    "singular-count-is-polynomial",
                    || format!("sigma={sigma}: {e}; counts {:?}", singular_samples[is]),
                    Vec::new,
                );
            }
            Err(e) => return Err(e.into()),
        }
    }

    // Richardson smooth locus: smooth(R) ⇔ smooth(X_sigma) ∧ smooth(X_tau)
    // pointwise, for 20 seeded pairs over a transverse reference pair.
    let q = qs[0];
    let field = FieldSpec::new(q)?;
    let fv = FlagVariety::enumerate(field, (0..=d).collect(), cfg.budget)?;
    let (p_ref, q_ref) = adapted_flags(field, &Perm::descending(d));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pair_list: Vec<(usize, usize)> = Vec::new();
    if d == 4 {
        let bad = Perm::from_word(vec![2, 3, 0, 1]).unwrap();
        pair_list.push((bad.lex_index(), Perm::descending(4).lex_index()));
    }
    while pair_list.len() < 20 {
        pair_list.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let mut richardson_points_swept = 0u64;
    for &(is, it) in &pair_list {
        let (sigma, tau) = (&perms[is], &perms[it]);
        let spec_r = LocusSpec::richardson(sigma.clone(), p_ref.clone(), tau.clone(), q_ref.clone())?;
        let spec_s = LocusSpec::schubert(sigma.clone(), p_ref.clone())?;
        let spec_t = LocusSpec::schubert(tau.clone(), q_ref.clone())?;
        for x in locus_points(&spec_r, &fv, CondMode::Full)? {
            let r = tangent_report(&x, &spec_r)?;
            let s = tangent_report(&x, &spec_s)?;
            let t = tangent_report(&x, &spec_t)?;
            richardson_points_swept += 1;
            c.holds(
                r.smooth == (s.smooth && t.smooth),
                "richardson-smooth-locus-is-intersection",
                || {
                    format!(
                        "q={q} sigma={sigma} tau={tau}: smooth(R)={}, smooth(X_sigma)={}, smooth(X_tau)={}",
                        r.smooth, s.smooth, t.smooth
                    )
                },
                || vec![x.to_text(), p_ref.to_text(), q_ref.to_text()],
            );
        }
    }
    c.count("richardson pair points".to_string(), richardson_points_swept);
    Ok(c.finish())
}

fn multi_product(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 3, 2, 3)?;
    let qs = qs_or(cfg, &[2, 3]);
    let poly_qs: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19];
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!("all length-2 products in S_{d}, seeded length-3 spot checks, degrees over {poly_qs:?}"),
    );
    let perms = Perm::all(d);
    let n = perms.len();
    let leq = bruhat_matrix(&perms);
    let dim_fl = d * (d - 1) / 2;

    // Exhaustive ℓ = 2: the degeneracy locus in Fl × Fl is the product of
    // the single-factor loci, each computable two independent ways.
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let coord = Flag::coordinate(field, d);
        let fv = FlagVariety::enumerate(field, (0..=d).collect(), cfg.budget)?;
        // factor_members[sigma] = indicator over fv of position(F, V) ≤ sigma.
        let mut factor_members: Vec<Vec<bool>> = Vec::with_capacity(n);
        for sigma in &perms {
            let spec = LocusSpec::schubert(sigma.inverse(), coord.clone())?;
            let direct: Vec<bool> = fv.points().iter().map(|v| spec.member(v, CondMode::Full)).collect();
            let via_assoc: Vec<bool> = fv
                .points()
                .iter()
                .map(|v| bruhat_leq(&assoc_perm(&coord, v), sigma))
                .collect();
            c.holds(
                direct == via_assoc,
                "factor-membership-routes-agree",
                || format!("q={q} sigma={sigma}"),
                Vec::new,
            );
            factor_members.push(direct);
        }
        let sizes: Vec<u64> = factor_members.iter().map(|m| m.iter().filter(|&&b| b).count() as u64).collect();
        for (i1, s1) in perms.iter().enumerate() {
            for (i2, s2) in perms.iter().enumerate() {
                let product = sizes[i1] * sizes[i2];
                let expect: u64 = perms
                    .iter()
                    .enumerate()
                    .filter(|(ia, _)| leq[*ia][s1.inverse().lex_index()])
                    .map(|(_, a)| q.pow(a.inversions() as u32))
                    .sum::<u64>()
                    * perms
                        .iter()
                        .enumerate()
                        .filter(|(ia, _)| leq[*ia][s2.inverse().lex_index()])
                        .map(|(_, a)| q.pow(a.inversions() as u32))
                        .sum::<u64>();
                c.holds(
                    product == expect,
                    "product-count-is-cell-sum-product",
                    || format!("q={q} sigma1={s1} sigma2={s2}: {product} vs {expect}"),
                    Vec::new,
                );
                if q == qs[0] {
                    c.count(format!("D[{s1}|{s2}] q={q}"), product);
                }
            }
        }
    }

    // Count-polynomial degree across the prime list equals
    // ℓ·C(d,2) − Σ coinversions.
    let mut samples: Vec<Vec<Vec<(i64, i64)>>> = vec![vec![Vec::new(); n]; n];
    for &q in &poly_qs {
        let field = FieldSpec::new(q)?;
        let coord = Flag::coordinate(field, d);
        let tally = relative_position_tally(&coord, cfg.budget)?;
        let rich = all_richardson_counts(&tally, &leq);
        let omega = Perm::descending(d).lex_index();
        for i1 in 0..n {
            let inv1 = perms[i1].inverse().lex_index();
            for i2 in 0..n {
                let inv2 = perms[i2].inverse().lex_index();
                let count = rich[inv1][omega] * rich[inv2][omega];
                samples[i1][i2].push((q as i64, count as i64));
            }
        }
    }
    for i1 in 0..n {
        for i2 in 0..n {
            let (s1, s2) = (&perms[i1], &perms[i2]);
            match interpolate(&samples[i1][i2], 2 * dim_fl) {
                Ok(poly) => {
                    let expect = (2 * dim_fl - s1.coinversions() - s2.coinversions()) as i64;
                    let got = poly.degree().map(|x| x as i64);
                    c.holds(
                        got == Some(expect),
                        "product-codimension",
                        || format!("sigma1={s1} sigma2={s2}: degree {got:?}, expected {expect}; poly {poly}"),
                        Vec::new,
                    );
                    c.poly(format!("D[{s1}|{s2}]"), &poly);
                }
                Err(e @ (PolyError::NotPolynomial { .. } | PolyError::NotIntegral)) => {
                    c.holds(
                        false,
                        "product-count-is-polynomial",
                        || format!("sigma1={s1} sigma2={s2}: {e}"),
                        Vec::new,
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    // Seeded ℓ = 3 spot checks at the first q.
    let q = qs[0];
    let field = FieldSpec::new(q)?;
    let coord = Flag::coordinate(field, d);
    let fv = FlagVariety::enumerate(field, (0..=d).collect(), cfg.budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..5 {
        let picks: Vec<&Perm> = (0..3).map(|_| &perms[rng.gen_range(0..n)]).collect();
        let mut product = 1u64;
        let mut expect = 1u64;
        for sigma in &picks {
            let spec = LocusSpec::schubert(sigma.inverse(), coord.clone())?;
            product *= locus_points(&spec, &fv, CondMode::Full)?.len() as u64;
            expect *= perms
                .iter()
                .filter(|a| bruhat_leq(a, &sigma.inverse()))
                .map(|a| q.pow(a.inversions() as u32))
                .sum::<u64>();
        }
        c.holds(
            product == expect,
            "triple-product-count",
            || format!("q={q} sigmas={},{},{}: {product} vs {expect}", picks[0], picks[1], picks[2]),
            Vec::new,
        );
    }
    c.count("length-2 products per q", (n * n) as u64);
    Ok(c.finish())
}

fn ess_reduction(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 4)?;
    let qs = qs_or(cfg, &[2]);
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!("full vs essential conditions, complete flags for 2 ≤ d ≤ {d} and one Grassmannian"),
    );
    for dd in 2..=d {
        for &q in &qs {
            let field = FieldSpec::new(q)?;
            let fv = FlagVariety::enumerate(field, (0..=dd).collect(), cfg.budget)?;
            let (_, q_ref) = adapted_flags(field, &Perm::descending(dd));
            let mut loci = 0u64;
            for reference in [Flag::coordinate(field, dd), q_ref] {
                for sigma in Perm::all(dd) {
                    let spec = LocusSpec::schubert(sigma.clone(), reference.clone())?;
                    let full = locus_points(&spec, &fv, CondMode::Full)?;
                    let essential = locus_points(&spec, &fv, CondMode::Essential)?;
                    let same = full.len() == essential.len()
                        && full.iter().zip(&essential).all(|(a, b)| a.coincides(b));
                    c.holds(
                        same,
                        "essential-set-suffices",
                        || format!("d={dd} q={q} sigma={sigma}: |full|={} |essential|={}", full.len(), essential.len()),
                        || vec![reference.to_text()],
                    );
                    loci += 1;
                }
            }
            c.count(format!("loci d={dd} q={q}"), loci);
        }
    }

    // The same reduction on a partial flag variety, where it only applies
    // to compatible conditions.
    let q = qs[0];
    let field = FieldSpec::new(q)?;
    let gr = FlagVariety::enumerate(field, vec![0, 2, 3], cfg.budget)?;
    let coord = Flag::coordinate(field, 3);
    let mut compatible = 0u64;
    for sigma in Perm::all(3) {
        let spec = LocusSpec::schubert(sigma.clone(), coord.clone())?;
        if !spec.compatible_with(gr.coranks()) {
            continue;
        }
        compatible += 1;
        let full = locus_points(&spec, &gr, CondMode::Full)?;
        let essential = locus_points(&spec, &gr, CondMode::Essential)?;
        let same = full.len() == essential.len()
            && full.iter().zip(&essential).all(|(a, b)| a.coincides(b));
        c.holds(
            same,
            "essential-set-suffices-on-grassmannian",
            || format!("q={q} sigma={sigma}: |full|={} |essential|={}", full.len(), essential.len()),
            Vec::new,
        );
    }
    c.count(format!("grassmannian loci q={q}"), compatible);
    Ok(c.finish())
}

fn schubert_counts(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 4)?;
    let qs = qs_or(cfg, &[2, 3]);
    let mut c = Check::new(cfg.kind, d, qs.clone(), format!("|X_sigma| for all of S_{d}"));
    let perms = Perm::all(d);
    let leq = bruhat_matrix(&perms);
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let coord = Flag::coordinate(field, d);
        let tally = relative_position_tally(&coord, cfg.budget)?;
        let total = flag_count(&(0..=d).collect::<Vec<_>>(), q)?;
        c.holds(
            tally.total() == total,
            "gaussian-factorial-count",
            || format!("q={q}: swept {} flags, Gaussian count {total}", tally.total()),
            Vec::new,
        );
        for (ia, alpha) in perms.iter().enumerate() {
            let cell = tally.count_by_lex(ia, ia);
            c.holds(
                cell == q.pow(alpha.inversions() as u32),
                "cell-size",
                || format!("q={q} alpha={alpha}: cell has {cell} points"),
                Vec::new,
            );
        }
        let rich = all_richardson_counts(&tally, &leq);
        let omega = Perm::descending(d).lex_index();
        for (is, sigma) in perms.iter().enumerate() {
            let got = rich[is][omega];
            let expect: u64 = perms
                .iter()
                .enumerate()
                .filter(|&(ia, _)| leq[ia][is])
                .map(|(_, a)| q.pow(a.inversions() as u32))
                .sum();
            c.holds(
                got == expect,
                "schubert-count-is-bruhat-cell-sum",
                || format!("q={q} sigma={sigma}: |X|={got}, cell sum {expect}"),
                Vec::new,
            );
            c.count(format!("X[{sigma}] q={q}"), got);
        }
    }
    Ok(c.finish())
}

fn lemma59(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let d = dim_in(cfg, 4, 2, 4)?;
    let qs = qs_or(cfg, &[2]);
    let mut c = Check::new(
        cfg.kind,
        d,
        qs.clone(),
        format!("R_id,sigma over every relative position, all sigma in S_{d}"),
    );
    let perms = Perm::all(d);
    let n = perms.len();
    let leq = bruhat_matrix(&perms);
    let id = Perm::identity(d).lex_index();
    for &q in &qs {
        let field = FieldSpec::new(q)?;
        let mut nonempty = 0u64;
        for (ip, pi) in perms.iter().enumerate() {
            let (p_ref, q_ref) = adapted_flags(field, pi);
            let tally = relative_position_tally(&q_ref, cfg.budget)?;
            let rich = all_richardson_counts(&tally, &leq);
            for (is, sigma) in perms.iter().enumerate() {
                let count = rich[id][is];
                nonempty += (count > 0) as u64;
                c.holds(
                    count <= 1,
                    "point-or-empty",
                    || format!("q={q} pi={pi} sigma={sigma}: |R_id,sigma| = {count}"),
                    || vec![p_ref.to_text(), q_ref.to_text()],
                );
                c.holds(
                    (count == 1) == leq[ip][is],
                    "nonempty-iff-position-below-sigma",
                    || format!("q={q} pi={pi} sigma={sigma}: |R_id,sigma| = {count}"),
                    || vec![p_ref.to_text(), q_ref.to_text()],
                );
            }
        }
        c.count(format!("nonempty q={q}"), nonempty);
        c.count(format!("cases q={q}"), (n * n) as u64);
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(kind: SuiteKind) -> SuiteReport {
        run_suite(&SuiteConfig::new(kind)).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for kind in SuiteKind::ALL {
            assert_eq!(SuiteKind::from_str(kind.name()).unwrap(), kind);
        }
        assert!(matches!(SuiteKind::from_str("nope"), Err(SuiteError::UnknownSuite(_))));
    }

    #[test]
    fn small_suites_pass_at_d3() {
        for kind in [
            SuiteKind::DemazureAxioms,
            SuiteKind::InvFix,
            SuiteKind::MDim,
            SuiteKind::ImageTheorem,
            SuiteKind::EssReduction,
            SuiteKind::SchubertCounts,
            SuiteKind::Lemma59,
            SuiteKind::SmoothLocus,
        ] {
            let cfg = SuiteConfig { d: Some(3), ..SuiteConfig::new(kind) };
            let report = run_suite(&cfg).unwrap();
            assert!(report.passed, "suite {} failed: {:?}", kind, report.counterexamples);
        }
    }

    #[test]
    fn codimension_passes_exhaustively_at_d3() {
        let report = run(SuiteKind::Codimension);
        assert!(report.passed, "{:?}", report.counterexamples);
        assert_eq!(report.counts["pairs"], 36);
        // R_{omega,omega} is the whole variety: Poincaré polynomial.
        assert_eq!(report.polynomials["R[2,1,0|2,1,0]"], vec![1, 2, 2, 1]);
        // R_{id,omega} is a single reduced point.
        assert_eq!(report.polynomials["R[0,1,2|2,1,0]"], vec![1]);
    }

    #[test]
    fn multi_product_passes_at_d3() {
        let report = run(SuiteKind::MultiProduct);
        assert!(report.passed, "{:?}", report.counterexamples);
        // D_{omega,omega} fills Fl × Fl: the squared Poincaré polynomial.
        assert_eq!(report.polynomials["D[2,1,0|2,1,0]"], vec![1, 4, 8, 10, 8, 4, 1]);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig { d: Some(3), seed: 7, ..SuiteConfig::new(SuiteKind::ImageTheorem) };
        let a = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_errors_are_recognized() {
        let cfg = SuiteConfig {
            d: Some(4),
            q_list: Some(vec![2]),
            budget: Budget::new(5),
            ..SuiteConfig::new(SuiteKind::SchubertCounts)
        };
        let err = run_suite(&cfg).unwrap_err();
        assert!(err.is_budget_exceeded());
    }
}
