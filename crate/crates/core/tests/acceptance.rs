//! Acceptance checks, one PASS/FAIL line each. Runs as a plain binary so the
//! lines show up in `cargo test` output.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use paleylab::cayley::CayleyGraph;
use paleylab::character::{gauss_sum, Character};
use paleylab::clique::max_clique;
use paleylab::graph::Graph;
use paleylab::harness::report::VerificationReport;
use paleylab::harness::rng::SplitMix64;
use paleylab::harness::suites::{
    verify_fourier, verify_gauss_formulas, verify_inequalities, verify_main, verify_peisert, SuiteOptions, MAIN_GRID,
    PEISERT_GRID,
};
use paleylab::t5::t5_bound;
use paleylab::{FieldElement, FiniteField};
use serde_json::json;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn tag_counts(r: &VerificationReport, tag: &str) -> (usize, usize) {
    r.totals.by_tag.get(tag).map_or((0, 0), |v| (v[0], v[1]))
}

fn omega_of(r: &VerificationReport, q: u32, d: u32) -> Option<u64> {
    r.cases_tagged("square-order-clique-criterion")
        .find(|c| c.inputs == json!({ "q": q, "d": d }))
        .and_then(|c| c.computed["omega"].as_u64())
}

fn main_grid(main: &VerificationReport) -> Outcome {
    let anchors = [(9, 4, 3), (25, 3, 5), (81, 5, 9)];
    let anchors_ok = anchors.iter().all(|&(q, d, w)| omega_of(main, q, d) == Some(w));
    let (pass, total) = tag_counts(main, "square-order-clique-criterion");
    outcome(
        main.passed() && anchors_ok && total > 0 && pass == total,
        format!("{pass}/{total} (q, d) pairs, anchors {}, {}", if anchors_ok { "ok" } else { "WRONG" }, main.summary()),
    )
}

fn gauss_regression() -> Outcome {
    let (report, rows) = match verify_gauss_formulas(361, &SuiteOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let anchor = |p: u32, s: u32, d: u32, expected: i64| {
        let f = Arc::new(FiniteField::new(p, s).unwrap());
        let chi = Character::new(&f, d, 1).unwrap();
        gauss_sum(&chi, FieldElement::ONE).unwrap().value.as_rational() == Some(BigInt::from(expected))
    };
    let anchors_ok = anchor(3, 2, 2, 3) && anchor(3, 2, 4, -3) && anchor(5, 2, 3, 5) && anchor(7, 2, 4, 7);
    let kinds = ["quadratic", "stickelberger", "semi-primitive", "peisert-quartic"];
    let covered = kinds.iter().all(|k| rows.iter().any(|r| r.case == *k));
    let (pass, total) = tag_counts(&report, "closed-form-gauss-sum");
    outcome(
        report.passed() && anchors_ok && covered && pass == total,
        format!("{pass}/{total} closed-form comparisons, all four cases covered: {covered}, anchors ok: {anchors_ok}"),
    )
}

fn fourier() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (q, d) in [(9, 4), (9, 2), (25, 3), (49, 4)] {
        match verify_fourier(q, d) {
            Ok(r) => {
                let unique = r.cases_tagged("subfield-uniqueness").all(|c| c.passed());
                ok &= r.passed() && unique;
                details.push(format!("({q},{d}) {}/{}", r.totals.passed, r.totals.cases));
            }
            Err(e) => {
                ok = false;
                details.push(format!("({q},{d}) error: {e}"));
            }
        }
    }
    outcome(ok, details.join(", "))
}

fn inequality_tag(r: &VerificationReport, tag: &str, trials: usize) -> Outcome {
    let (pass, total) = tag_counts(r, tag);
    outcome(pass == trials && total == trials, format!("{pass}/{total}"))
}

fn peisert() -> Outcome {
    let r = match verify_peisert(&PEISERT_GRID, 200, 0, &SuiteOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let omega = |q: u32| {
        r.cases_tagged("peisert-clique-number")
            .find(|c| c.inputs == json!({ "q": q }))
            .and_then(|c| c.computed["omega"].as_u64())
    };
    let (pec_pass, pec_total) = tag_counts(&r, "vanishing-criterion");
    let (scan_pass, scan_total) = tag_counts(&r, "kernel-criterion-equivalence");
    let ok = omega(9) == Some(3)
        && omega(49) == Some(7)
        && pec_pass == 200
        && pec_total == 200
        && scan_total == 78
        && scan_pass == 78
        && r.passed();
    outcome(
        ok,
        format!(
            "omega(P*9)={:?}, omega(P*49)={:?}, vanishing {pec_pass}/{pec_total}, scan {scan_pass}/{scan_total}; {}",
            omega(9),
            omega(49),
            r.notes.join("; ")
        ),
    )
}

fn binomial_bound(main: &VerificationReport) -> Outcome {
    let (pass, total) = tag_counts(main, "binomial-bound-soundness");
    let worked = t5_bound(7, 49, 3).map(|b| b.bound).ok();
    let w = omega_of(main, 49, 3);
    let ok = total > 0 && pass == total && worked == Some(4) && w.is_some_and(|w| w <= 4);
    outcome(ok, format!("{pass}/{total} grid triples, t5(7,49,3)={worked:?} vs omega(GP(49,3))={w:?}"))
}

/// Exhaustive oracle: the largest clique found by extending every clique
/// in increasing vertex order.
fn naive_clique_number(g: &Graph) -> usize {
    fn grow(g: &Graph, clique: &mut Vec<usize>, from: usize, best: &mut usize) {
        *best = (*best).max(clique.len());
        for v in from..g.order() {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
                grow(g, clique, v + 1, best);
                clique.pop();
            }
        }
    }
    let mut best = 0;
    grow(g, &mut Vec::new(), 0, &mut best);
    best
}

fn oracle_equivalence() -> Outcome {
    let mut rng = SplitMix64::new(2024);
    let cayley = [(9, 2), (9, 4), (13, 2), (13, 3), (25, 2), (25, 3), (29, 2), (37, 3), (41, 4), (49, 4)];
    let mut mismatches = Vec::new();
    for i in 0..20 {
        let g = if i % 2 == 0 {
            let n = 10 + rng.below(40) as usize;
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.below(2) == 1 {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        } else {
            let (q, d) = cayley[i / 2];
            let (p, s) = paleylab::arith::prime_power(q as u64).unwrap();
            let f = Arc::new(FiniteField::new(p as u32, s).unwrap());
            let mut perm: Vec<usize> = (0..q as usize).collect();
            rng.shuffle(&mut perm);
            CayleyGraph::paley(&f, d).unwrap().graph().permuted(&perm).unwrap()
        };
        let solver = max_clique(&g).map(|c| c.omega);
        let naive = naive_clique_number(&g);
        if solver.as_ref().ok() != Some(&naive) {
            mismatches.push(format!("graph {i}: solver {solver:?}, oracle {naive}"));
        }
    }
    outcome(mismatches.is_empty(), if mismatches.is_empty() { "20/20 graphs".into() } else { mismatches.join("; ") })
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |n: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {n} ({name}): {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        all_ok &= o.ok;
    };

    let main_start = Instant::now();
    let main = verify_main(&MAIN_GRID, &SuiteOptions::default());
    let main_secs = main_start.elapsed().as_secs_f64();
    match &main {
        Ok(m) => {
            report(1, "clique number grid", &mut || {
                let mut o = main_grid(m);
                o.detail.push_str(&format!(", solved in {main_secs:.1}s"));
                o
            });
        }
        Err(e) => report(1, "clique number grid", &mut || outcome(false, e.to_string())),
    }
    report(2, "gauss sum closed forms", &mut gauss_regression);
    report(3, "fourier characterization", &mut fourier);
    let ineq = verify_inequalities(1000, 0, &SuiteOptions::default());
    match &ineq {
        Ok(r) => {
            report(4, "parseval identity", &mut || inequality_tag(r, "parseval-identity", 1000));
            report(5, "character sum bound", &mut || inequality_tag(r, "character-sum-bound", 1000));
        }
        Err(e) => {
            report(4, "parseval identity", &mut || outcome(false, e.to_string()));
            report(5, "character sum bound", &mut || outcome(false, e.to_string()));
        }
    }
    report(6, "peisert graphs", &mut peisert);
    match &main {
        Ok(m) => report(7, "binomial bound soundness", &mut || binomial_bound(m)),
        Err(e) => report(7, "binomial bound soundness", &mut || outcome(false, e.to_string())),
    }
    report(8, "solver vs exhaustive oracle", &mut oracle_equivalence);

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
