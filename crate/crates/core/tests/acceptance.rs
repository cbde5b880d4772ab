//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_BLOCKED` are evaluated exactly like the others
//! and print FAIL when they fail; they do not fail the process. Any other
//! failing criterion does.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use itertools::iproduct;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricolor_core::basis::MAX_LEVEL;
use tricolor_core::blowup::{case_label, check_domination_slack, check_functionals, BlowupSpec};
use tricolor_core::candidates::all_square_kinds;
use tricolor_core::certificate::{
    candidate_vector, derive_all, recheck_report, search_published_assignment, DeriveOptions, Verdict,
};
use tricolor_core::domination::{
    best_color_for, best_domination, exhaustive_theorem_check, kierstead, rainbow_block, rainbow_block_triangle,
    random_pair_bound,
};
use tricolor_core::epsilon::{admissible_interpretations, epsilon_case, EpsilonCase};
use tricolor_core::flag::enumerate_flags;
use tricolor_core::graph::COLORS;
use tricolor_core::{enumerate_unlabeled, FlagVector, Rational, RationalVector, TricoloredGraph, TypeSigma};

/// Criteria that cannot be met as stated, with the reason recorded in the
/// decisions ledger. Their lines still say FAIL.
const KNOWN_BLOCKED: &[u32] = &[3, 4, 9, 10];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(id: u32, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, detail) = f();
    Line { id, pass, detail, elapsed: start.elapsed() }
}

fn enumeration() -> (bool, String) {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=5).map(|l| enumerate_unlabeled(l).unwrap().len()).collect();
    let secs = start.elapsed().as_secs_f64();
    (counts == [1, 1, 3, 15, 142] && secs < 10.0, format!("counts {counts:?} in {secs:.2} s"))
}

fn types() -> Vec<TypeSigma> {
    let mut graphs: Vec<TricoloredGraph> =
        iproduct!(COLORS, COLORS, COLORS).map(|(a, b, c)| TricoloredGraph::new(3, vec![a, b, c]).unwrap()).collect();
    for interp in admissible_interpretations() {
        graphs.extend(interp.sigmas().iter().cloned());
    }
    graphs.sort();
    graphs.dedup();
    graphs.into_iter().map(TypeSigma::new).collect()
}

fn all_ones(sigma: &TypeSigma, level: usize) -> FlagVector {
    let mut v = FlagVector::new(sigma.clone(), level).unwrap();
    for f in enumerate_flags(sigma, level).unwrap() {
        v.add_term(&f, Rational::one()).unwrap();
    }
    v
}

fn algebra() -> (bool, String) {
    let types = types();
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for sigma in &types {
        let k = sigma.size();
        for level in k..=MAX_LEVEL {
            checks += 1;
            if sigma.unit().expand_to(level).unwrap() != all_ones(sigma, level) {
                failures.push(format!("unity {:?}@{level}", sigma.graph()));
            }
        }
        for l1 in k..=MAX_LEVEL {
            let mut v = FlagVector::new(sigma.clone(), l1).unwrap();
            for (i, f) in enumerate_flags(sigma, l1).unwrap().iter().enumerate() {
                v.add_term(f, Rational::new((i as i64 * 7 % 11 - 5).into(), (i as i64 % 3 + 1).into())).unwrap();
            }
            let top = v.expand_to(MAX_LEVEL).unwrap();
            for l2 in l1..=MAX_LEVEL {
                checks += 1;
                let mid = v.expand_to(l2).unwrap();
                if mid.expand_to(MAX_LEVEL).unwrap() != top || mid.average() != v.average() {
                    failures.push(format!("chain {:?} {l1}->{l2}", sigma.graph()));
                }
            }
        }
    }
    let detail = format!("{} types, {checks} identities, {} failures {failures:?}", types.len(), failures.len());
    (failures.is_empty(), detail)
}

fn certificate() -> (bool, String) {
    let start = Instant::now();
    let reports = derive_all(DeriveOptions::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let valid = reports.iter().filter(|r| r.verdict == Verdict::Valid).count();
    let infeasible_checked = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Infeasible && recheck_report(r).unwrap().verdict == Verdict::Infeasible)
        .count();
    let detail = format!(
        "{valid} of {} interpretations valid; {infeasible_checked} infeasible with an exactly checked separating weighting; {secs:.1} s",
        reports.len()
    );
    (valid > 0 && secs < 600.0, detail)
}

fn published_coefficients() -> (bool, String) {
    let mut valid = 0;
    let mut ruled_out = 0;
    let mut best: Option<Rational> = None;
    let mut tried = 0;
    for interp in admissible_interpretations() {
        let s = search_published_assignment(&interp).unwrap();
        tried += s.tried;
        valid += usize::from(s.best.is_valid());
        ruled_out += usize::from(s.ruled_out_by.is_some());
        let m = s.best.min_slack().1;
        if best.as_ref().is_none_or(|b| m > *b) {
            best = Some(m);
        }
    }
    let best = best.unwrap();
    let detail = format!(
        "{tried} assignments over 16 interpretations, {valid} valid; best minimum slack {:.4}; {ruled_out} interpretations admit no certificate at all",
        num_traits::ToPrimitive::to_f64(&best).unwrap()
    );
    (valid > 0, detail)
}

fn epsilon_table() -> (bool, String) {
    let interps = admissible_interpretations();
    let selected = &interps[0];
    let matching = interps.iter().filter(|i| i.matches_published()).count();
    let detail = format!(
        "selected {selected:?} {} all 21 entries; {matching} of {} interpretations do",
        if selected.matches_published() { "reproduces" } else { "does not reproduce" },
        interps.len()
    );
    (selected.matches_published(), detail)
}

fn theorem() -> (bool, String) {
    let start = Instant::now();
    let reports: Vec<_> = (2..=5).map(|n| exhaustive_theorem_check(n).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    let graphs: Vec<usize> = reports.iter().map(|r| r.graphs).collect();
    let counter: usize = reports.iter().map(|r| r.counterexamples).sum();
    let detail = format!("colorings {graphs:?}, {counter} counterexamples, {secs:.2} s");
    (graphs == [3, 27, 729, 59049] && counter == 0 && secs < 60.0, detail)
}

fn kierstead_extremal() -> (bool, String) {
    let start = Instant::now();
    let sizes: Vec<(usize, usize)> =
        [9, 12, 15].iter().map(|&n| (n, best_domination(&kierstead(n).unwrap(), 4).unwrap().size)).collect();
    let secs = start.elapsed().as_secs_f64();
    let pass = sizes.iter().all(|&(n, s)| 3 * s == 2 * n) && secs < 60.0;
    (pass, format!("(n, size) {sizes:?}, {secs:.2} s"))
}

fn rainbow() -> (bool, String) {
    let m = 300;
    let g = rainbow_block(m).unwrap();
    let (c, size) = best_color_for(&g, &rainbow_block_triangle(m)).unwrap();
    let f = size as f64 / g.n() as f64;
    ((0.45..=0.55).contains(&f), format!("m = {m}: {size} of {} vertices in color {c}, fraction {f:.4}", g.n()))
}

fn random_pairs() -> (bool, String) {
    let runs: Vec<_> = (0..5).map(|s| random_pair_bound(900, s, 2000).unwrap()).collect();
    let target = 5.0 / 9.0;
    let worst_mean = runs.iter().map(|r| (r.mean_fraction - target).abs()).fold(0.0, f64::max);
    let max = runs.iter().map(|r| r.max_fraction).fold(0.0, f64::max);
    let mean_ok = worst_mean <= 0.02;
    let max_ok = max <= 0.60;
    let detail = format!(
        "mean within {worst_mean:.4} of 5/9 ({}), max fraction {max:.4} ({})",
        if mean_ok { "ok" } else { "over 0.02" },
        if max_ok { "ok" } else { "over 0.60" }
    );
    (mean_ok && max_ok, detail)
}

fn random_base(seed: u64) -> TricoloredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=8);
    TricoloredGraph::from_fn(n, |_, _| rng.gen_range(1..=3))
}

fn blowups() -> (bool, String) {
    let start = Instant::now();
    let k = 120;
    let squares: Vec<(String, std::sync::Arc<RationalVector>)> =
        all_square_kinds().iter().map(|s| (s.key(), candidate_vector(s).unwrap())).collect();
    let named: Vec<(String, &RationalVector)> = squares.iter().map(|(n, v)| (n.clone(), v.as_ref())).collect();
    let interp = &admissible_interpretations()[0];
    let mut worst = f64::INFINITY;
    let mut below = 0;
    let mut per_case: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
    for case in [EpsilonCase::Covered, EpsilonCase::Zero, EpsilonCase::OneSixth, EpsilonCase::OneHalf] {
        per_case.insert(case_label(case), (0, 0));
    }
    for b in 0..10u64 {
        let base = random_base(100 + b);
        let spec = BlowupSpec::new(base.clone(), k, b).unwrap();
        for r in check_functionals(&spec, &named, 200_000, -0.01).unwrap() {
            worst = worst.min(r.estimate);
            below += usize::from(!r.pass);
        }
        for (i, c) in iproduct!(1..=7, COLORS) {
            let r = check_domination_slack(&base, interp.sigma(i), c, k, 200, b).unwrap();
            let e = per_case.get_mut(case_label(epsilon_case(interp.sigma(i), c))).unwrap();
            e.0 += r.trials;
            e.1 += r.violations;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let squares_ok = below == 0;
    let cases_ok = per_case.values().all(|&(t, v)| t > 0 && v * 100 <= t);
    let cases: Vec<String> = per_case
        .iter()
        .map(|(l, &(t, v))| format!("{l}: {v}/{t} ({:.2}%)", if t == 0 { 0.0 } else { 100.0 * v as f64 / t as f64 }))
        .collect();
    let detail = format!(
        "squares: worst normalized {worst:.4}, {below} below -0.01; slack at k = {k}: {}; {secs:.1} s",
        cases.join(", ")
    );
    (squares_ok && cases_ok && secs < 300.0, detail)
}

fn main() {
    type Check = fn() -> (bool, String);
    let criteria: Vec<(u32, &str, Check)> = vec![
        (1, "enumeration", enumeration),
        (2, "exact algebra", algebra),
        (3, "certificate re-derivation", certificate),
        (4, "published coefficients", published_coefficients),
        (5, "epsilon table", epsilon_table),
        (6, "theorem at desk scale", theorem),
        (7, "kierstead extremality", kierstead_extremal),
        (8, "rainbow block", rainbow),
        (9, "random pairs", random_pairs),
        (10, "blow-up validation", blowups),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, name, f) in criteria {
        let line = timed(id, f);
        let blocked = KNOWN_BLOCKED.contains(&line.id);
        let tag = match (line.pass, blocked) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known blocker, see decisions ledger)",
            (false, false) => "FAIL",
        };
        println!("{tag} criterion {id:>2} {name}: {} [{:.1} s]", line.detail, line.elapsed.as_secs_f64());
        if line.pass {
            passed += 1;
        } else if !blocked {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed} of 10 criteria pass");
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
