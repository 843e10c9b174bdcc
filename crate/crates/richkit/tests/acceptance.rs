//! End-to-end acceptance: one test per advertised property, each printing a
//! single pass/fail line (visible with `--nocapture`). These run the named
//! verification suites at their reference configurations and pin a few
//! closed-form values on top.

use richkit::enumerate::Budget;
use richkit::perm::{bruhat_leq, Perm};
use richkit::suites::{run_suite, SuiteConfig, SuiteKind, SuiteReport};

fn run(kind: SuiteKind, d: usize, q_list: Option<Vec<u64>>, seed: u64) -> SuiteReport {
    let cfg = SuiteConfig { kind, d: Some(d), q_list, budget: Budget::default(), seed };
    run_suite(&cfg).unwrap_or_else(|e| panic!("suite {} failed to run: {e}", kind.name()))
}

fn verdict(number: usize, name: &str, ok: bool, detail: &str) {
    println!("criterion {number:02} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {number:02} ({name}) failed: {detail}");
}

fn require_passed(number: usize, name: &str, reports: &[SuiteReport]) {
    let ok = reports.iter().all(|r| r.passed);
    let detail = reports
        .iter()
        .filter(|r| !r.passed)
        .flat_map(|r| r.counterexamples.iter().take(3))
        .map(|c| format!("{}: {}", c.assertion, c.detail))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(number, name, ok, &detail);
}

#[test]
fn criterion_01_demazure_axioms() {
    let report = run(SuiteKind::DemazureAxioms, 4, None, 0);
    assert_eq!(report.counts["pairs"], 576);
    assert_eq!(report.counts["triples"], 13_824);
    require_passed(1, "demazure axioms, exhaustive S_4", &[report]);
}

#[test]
fn criterion_02_invfix_identity() {
    let report = run(SuiteKind::InvFix, 4, Some(vec![2, 3]), 0);
    assert_eq!(report.counts["pairs q=2"], 24);
    assert_eq!(report.counts["pairs q=3"], 24);
    require_passed(2, "fixed-endomorphism dimension identity", &[report]);
}

#[test]
fn criterion_03_m_dimension() {
    let report = run(SuiteKind::MDim, 4, Some(vec![2]), 0);
    assert_eq!(report.counts["pairs q=2"], 24);
    assert_eq!(report.counts["triples d=3 q=2"], 9_261);
    require_passed(3, "deformation-space dimension", &[report]);
}

#[test]
fn criterion_04_image_theorem() {
    let small = run(SuiteKind::ImageTheorem, 3, Some(vec![2, 3]), 0);
    let large = run(SuiteKind::ImageTheorem, 4, Some(vec![2]), 0);
    require_passed(4, "richardson image interval", &[small, large]);
}

#[test]
fn criterion_05_codimension() {
    let exhaustive = run(SuiteKind::Codimension, 3, None, 0);
    assert_eq!(exhaustive.counts["pairs"], 36);
    // The full pair gives the whole variety: its count polynomial is the
    // Poincaré polynomial of the d = 3 flag variety.
    assert_eq!(exhaustive.polynomials["R[2,1,0|2,1,0]"], vec![1, 2, 2, 1]);
    assert_eq!(exhaustive.polynomials["R[0,1,2|2,1,0]"], vec![1]);
    let sampled = run(SuiteKind::Codimension, 4, None, 0);
    assert_eq!(sampled.counts["pairs"], 50);
    require_passed(5, "codimension via count-polynomial degree", &[exhaustive, sampled]);
}

#[test]
fn criterion_06_schubert_counts() {
    let report = run(SuiteKind::SchubertCounts, 4, Some(vec![2, 3]), 0);
    assert_eq!(report.counts["X[3,2,1,0] q=2"], 315);
    assert_eq!(report.counts["X[3,2,1,0] q=3"], 2_080);
    assert_eq!(report.counts["X[0,1,2,3] q=2"], 1);
    require_passed(6, "schubert point counts", &[report]);
}

#[test]
fn criterion_07_smoothness() {
    let report = run(SuiteKind::SmoothLocus, 4, None, 0);
    // The two pattern-singular loci have singular points; a
    // pattern-avoiding one does not.
    assert!(!report.polynomials["sing[2,3,0,1]"].is_empty());
    assert!(!report.polynomials["sing[3,1,2,0]"].is_empty());
    assert!(report.polynomials["sing[1,0,3,2]"].is_empty());
    require_passed(7, "smooth locus and pattern avoidance", &[report]);
}

#[test]
fn criterion_08_essential_reduction() {
    let report = run(SuiteKind::EssReduction, 4, Some(vec![2]), 0);
    assert_eq!(report.counts["loci d=4 q=2"], 48);
    require_passed(8, "essential-set reduction", &[report]);
}

#[test]
fn criterion_09_identity_richardson() {
    let report = run(SuiteKind::Lemma59, 4, Some(vec![2]), 0);
    assert_eq!(report.counts["cases q=2"], 576);
    // Independent recount of the comparable Bruhat pairs.
    let perms = Perm::all(4);
    let comparable = perms
        .iter()
        .flat_map(|a| perms.iter().map(move |b| bruhat_leq(a, b) as u64))
        .sum::<u64>();
    assert_eq!(report.counts["nonempty q=2"], comparable);
    require_passed(9, "identity-condition richardson loci", &[report]);
}

#[test]
fn criterion_10_determinism() {
    let mut ok = true;
    let mut detail = String::new();
    for (kind, d, seed) in [
        (SuiteKind::Lemma59, 4, 0),
        (SuiteKind::SmoothLocus, 3, 9),
        (SuiteKind::ImageTheorem, 3, 5),
    ] {
        let cfg = SuiteConfig { kind, d: Some(d), q_list: None, budget: Budget::default(), seed };
        let a = serde_json::to_vec(&run_suite(&cfg).unwrap()).unwrap();
        let b = serde_json::to_vec(&run_suite(&cfg).unwrap()).unwrap();
        if a != b {
            ok = false;
            detail = format!("suite {} is not byte-deterministic", kind.name());
            break;
        }
    }
    verdict(10, "byte-identical reports", ok, &detail);
}
