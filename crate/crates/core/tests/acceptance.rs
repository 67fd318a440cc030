//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when the set of failing criteria differs from
//! [`KNOWN_FAILURES`].

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qtangle::grasscoh::{build_cohomology, epsilon_idempotent, nilhecke_check, wolffhardt_complex};
use qtangle::intertwiner::{
    charjw_check, jones_wenzl, jones_wenzl_divided, slide_identity_checks, Intertwiner,
};
use qtangle::invariant::{link_invariant, phi, verify_invariance, InvarianceParams};
use qtangle::qseries::{bigraded_expand_homofunknot, SeriesJson};
use qtangle::quiverkat::{
    euler_characteristic_gl2, ext_self_l1, gl2_algebra, gor_homology, gor_report,
    standard_modules_gl4, verify_projector_complexes, verify_repaired_p12,
};
use qtangle::tangle::{parse, random_link, GammaConvention, MoveKind, RandomConfig};
use qtangle::{quantum_integer, LaurentSeries};

const PRECISION: usize = 48;

/// The listed `(1,2)` complex of `gl_3` fails `d² = 0` from `f_2 ∘ f_3` on.
const KNOWN_FAILURES: &[u32] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn uncoloured_params(convention: GammaConvention) -> InvarianceParams {
    InvarianceParams {
        max_colour: 1,
        trials: 200,
        moves: vec![
            MoveKind::UncolouredR1,
            MoveKind::R2,
            MoveKind::R3,
            MoveKind::CupCapCrossingSlide,
            MoveKind::ZigZag,
            MoveKind::CrossingPastNestedCups,
        ],
        precision: PRECISION,
        seed: 1,
        max_points: 6,
        convention,
        ..Default::default()
    }
}

fn reidemeister_uncoloured() -> Outcome {
    let start = Instant::now();
    let r = verify_invariance(&uncoloured_params(GammaConvention::Standard));
    let elapsed = start.elapsed();
    let detail = format!(
        "{} passed, {} failed in {:.1?}",
        r.passed, r.failed, elapsed
    );
    Outcome::new(
        r.ok() && r.passed == 200 && elapsed < Duration::from_secs(300),
        detail,
    )
}

fn reidemeister_coloured() -> Outcome {
    let r = verify_invariance(&InvarianceParams {
        max_colour: 3,
        trials: 100,
        moves: vec![
            MoveKind::KinkPair,
            MoveKind::R2,
            MoveKind::R3,
            MoveKind::CupCapCrossingSlide,
            MoveKind::ZigZag,
            MoveKind::CrossingPastNestedCups,
        ],
        precision: PRECISION,
        seed: 2,
        max_cabled: 8,
        ..Default::default()
    });
    Outcome::new(
        r.ok() && r.passed == 100,
        format!("{} passed, {} failed", r.passed, r.failed),
    )
}

fn jones_wenzl_equivalence() -> Outcome {
    let mut windows = Vec::new();
    let ok = (1..=4).all(|n| {
        let a = jones_wenzl(n, PRECISION);
        let b = jones_wenzl_divided(n, PRECISION);
        windows.push(
            a.relative_precision()
                .unwrap_or(i64::MAX)
                .min(b.relative_precision().unwrap_or(i64::MAX)),
        );
        a.eq_upto(&b)
    });
    let wide = windows.iter().all(|&w| w >= PRECISION as i64);
    Outcome::new(
        ok && wide,
        format!("n = 1..4, relative windows {windows:?}"),
    )
}

fn projector_characterization() -> Outcome {
    let results: Vec<bool> = (1..=5)
        .map(|n| charjw_check(&jones_wenzl(n, PRECISION)))
        .collect();
    Outcome::new(results.iter().all(|&b| b), format!("n = 1..5: {results:?}"))
}

fn slide_identities() -> Outcome {
    let mut failed = Vec::new();
    for n in 1..=3usize {
        for k in 0..=n as u32 {
            if !slide_identity_checks(n, k, PRECISION).all() {
                failed.push((n, k));
            }
        }
    }
    Outcome::new(
        failed.is_empty(),
        format!("n <= 3, all k; failing (n, k): {failed:?}"),
    )
}

fn curl_calibration() -> Outcome {
    let id = Intertwiner::identity(&[1]);
    let pos = parse("bottom +1\ncup 2 1 u\npos 1\ncap 2").unwrap();
    let neg = parse("bottom +1\ncup 2 1 u\nneg 1\ncap 2").unwrap();
    let pos_ok = phi(&pos).unwrap() == id.scale(&LaurentSeries::q_pow(-3));
    let neg_ok = phi(&neg).unwrap() == id.scale(&LaurentSeries::q_pow(3));
    let control = verify_invariance(&uncoloured_params(GammaConvention::Flipped));
    let control_fails = !control.ok();
    Outcome::new(
        pos_ok && neg_ok && control_fails,
        format!(
            "Π-curl q^-3: {pos_ok}, Ω-curl q^3: {neg_ok}, flipped γ fails {} of 200 trials",
            control.failed
        ),
    )
}

fn coloured_unknot() -> Outcome {
    let unknot = |c: u32| parse(&format!("bottom\ncup 1 {c} u\ncap 1")).unwrap();
    let v1 = link_invariant(&unknot(1), PRECISION).unwrap();
    let v2 = link_invariant(&unknot(2), PRECISION).unwrap();
    let v3 = link_invariant(&unknot(3), PRECISION).unwrap();
    let one_ok = v1 == -quantum_integer(2);
    // the closed form at t = -1, truncated far below the compared window
    let homfly = bigraded_expand_homofunknot(-40).eval_t(-1);
    let two_ok =
        v2.eq_upto(&quantum_integer(3)) && (-20..=20).all(|d| v2.coeff(d) == homfly.coeff(d));
    let frozen: SeriesJson =
        serde_json::from_str(include_str!("fixtures/unknot_colour3.json")).unwrap();
    let three_ok = v3 == LaurentSeries::from_json(&frozen).unwrap();
    Outcome::new(
        one_ok && two_ok && three_ok,
        format!(
            "colour 1: {v1}; colour 2: {v2}; colour 3: {v3} (frozen value {})",
            if three_ok { "matches" } else { "differs" }
        ),
    )
}

fn grassmannian() -> Outcome {
    let dims: Vec<usize> = [(1, 2), (1, 3), (2, 4)]
        .iter()
        .map(|&(k, n)| build_cohomology(k, n).unwrap().dim())
        .collect();
    let mut ok = dims == [2, 3, 6];
    let mut notes = Vec::new();
    for (k, n) in [(1, 2), (1, 3)] {
        let r = wolffhardt_complex(k, n, -6).unwrap().check_resolution();
        ok &= r.ok();
        notes.push(format!(
            "Gr({k},{n}) to h = -6: d²=0 {}, resolution {}",
            r.d_squared_zero,
            r.ok()
        ));
    }
    let r = wolffhardt_complex(2, 4, -3).unwrap().check_resolution();
    ok &= r.d_squared_zero;
    notes.push(format!("Gr(2,4) to h = -3: d²=0 {}", r.d_squared_zero));
    Outcome::new(ok, format!("dims {dims:?}; {}", notes.join("; ")))
}

fn nil_hecke() -> Outcome {
    let reports: Vec<_> = (1..=3).map(|n| nilhecke_check(n, 8)).collect();
    let ok = reports.iter().all(|r| r.ok()) && epsilon_idempotent(3, 8);
    Outcome::new(
        ok,
        format!(
            "n = 1..3, degree <= 8: {:?}",
            reports.iter().map(|r| r.ok()).collect::<Vec<_>>()
        ),
    )
}

fn projector_complexes() -> Outcome {
    let dim = gl2_algebra().unwrap().dim();
    let checks = verify_projector_complexes(8).unwrap();
    let euler = euler_characteristic_gl2(12).unwrap();
    let repaired = verify_repaired_p12(8).unwrap();
    let summary: Vec<String> = checks
        .iter()
        .map(|c| {
            let first = c
                .failures
                .first()
                .map(|f| format!(" [{f}]"))
                .unwrap_or_default();
            format!(
                "{}: {}{first}",
                c.name,
                if c.ok() { "d²=0" } else { "d²!=0" }
            )
        })
        .collect();
    let ok = dim == 5 && checks.iter().all(|c| c.ok()) && euler.shift.is_some();
    Outcome::new(
        ok,
        format!(
            "dim A(gl2) = {dim}; {}; Euler characteristic shift {:?}; with three signs of f_3 repaired the (1,2) complex gives d²=0: {}",
            summary.join("; "),
            euler.shift,
            repaired.ok()
        ),
    )
}

fn unknot_homology() -> Outcome {
    let s = standard_modules_gl4().unwrap();
    let dims = (
        s.delta_dims.get(&1),
        s.delta_dims.get(&5),
        s.delta_dims.get(&6),
        s.bar_delta5_dim,
    );
    let dims_ok = dims == (Some(&4), Some(&8), Some(&1), 2);
    let r = ext_self_l1(-8).unwrap();
    let ok = dims_ok && s.ok() && r.ok();
    Outcome::new(
        ok,
        format!(
            "dims {:?}; filtration {:?}; resolution complex {} exact {} minimal {}; Ext {}; Poincaré {}",
            (dims.0, dims.1, dims.2, dims.3),
            s.filtration_quotients,
            r.resolution.is_complex,
            r.resolution.exact,
            r.resolution.minimal,
            r.ext_matches,
            r.poincare_matches
        ),
    )
}

fn integrality() -> Outcome {
    let cfg = RandomConfig {
        max_colour: 3,
        max_points: 6,
        max_cabled: 8,
    };
    let mut bad = Vec::new();
    for seed in 0..50u64 {
        let d = random_link(10, &cfg, seed);
        if !link_invariant(&d, PRECISION).unwrap().is_integral() {
            bad.push(seed);
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("50 links, non-integral seeds {bad:?}"),
    )
}

fn gor() -> Outcome {
    let (h, d2) = gor_homology(2, -8, 24).unwrap();
    let report = gor_report(2, -8, 24).unwrap();
    println!("     B_2 homology: {h}");
    println!("     closed form:  {}", bigraded_expand_homofunknot(-8));
    Outcome::new(
        d2,
        format!(
            "d²=0 {d2}; regradings matching the closed form: {:?}",
            report.dictionaries
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (
            1,
            "uncoloured Reidemeister invariance",
            reidemeister_uncoloured,
        ),
        (2, "coloured framed invariance", reidemeister_coloured),
        (3, "Jones-Wenzl equivalence", jones_wenzl_equivalence),
        (4, "projector characterization", projector_characterization),
        (5, "slide identities", slide_identities),
        (6, "curl calibration", curl_calibration),
        (7, "coloured unknot", coloured_unknot),
        (8, "Grassmannian cohomology", grassmannian),
        (9, "nil-Hecke relations", nil_hecke),
        (10, "projector complexes", projector_complexes),
        (11, "unknot homology over A(Γ)", unknot_homology),
        (12, "integrality", integrality),
        (13, "GOR complex", gor),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {id:>2} {name} ({:.1?}): {}",
            start.elapsed(),
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if failed == KNOWN_FAILURES {
        println!("failing criteria {failed:?} are the documented ones");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria {failed:?}, documented {KNOWN_FAILURES:?}");
        ExitCode::FAILURE
    }
}
