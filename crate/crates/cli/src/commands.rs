use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde_json::{json, Value};
use tricolor_core::basis::Basis;
use tricolor_core::blowup::{blow_up, check_domination_slack, check_functionals, BlowupSpec};
use tricolor_core::candidates::{all_square_kinds, count_nonzero};
use tricolor_core::certificate::{
    candidate_vector, derive_all, derive_certificate, derive_pooled, recheck_report, search_published_assignment,
    CertificateReport, DeriveOptions, ReportJson, Verdict,
};
use tricolor_core::domination::{
    best_domination, exhaustive_theorem_check, kierstead, rainbow_block, random_pair_bound, sampled_theorem_check,
};
use tricolor_core::epsilon::{admissible_interpretations, published_epsilon, Interpretation};
use tricolor_core::error::{CertificateError, DominationError};
use tricolor_core::graph::COLORS;
use tricolor_core::json::RationalJson;
use tricolor_core::{RationalVector, TricoloredGraph};

use crate::manifest::{sha256_hex, Context, RunManifest};
use crate::{Check, Cli, CliError, Command, Kind, Scope, EXIT_INFEASIBLE, EXIT_INTERNAL, EXIT_INVALID, EXIT_OK};

/// What a command produced, before the manifest is attached.
struct Outcome {
    report: Value,
    summary: String,
    code: u8,
    /// Raw text for standard output instead of the JSON document.
    text: Option<String>,
}

impl Outcome {
    fn json(report: Value, summary: String, code: u8) -> Self {
        Outcome { report, summary, code, text: None }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| usage(format!("writing {}: {e}", path.display())))
}

pub fn execute(cmd: &Command, argv: &[String]) -> Result<u8, CliError> {
    let mut ctx = Context::new(None);
    let outcome = run(cmd, &mut ctx)?;
    let manifest = ctx.finish(cmd.name(), argv, serde_json::to_value(cmd).map_err(internal)?);
    let stdout = match &outcome.text {
        Some(text) => {
            eprintln!("{}", serde_json::to_string(&manifest).map_err(internal)?);
            text.clone()
        }
        None => {
            let doc = json!({ "manifest": manifest, "report": outcome.report });
            serde_json::to_string_pretty(&doc).map_err(internal)? + "\n"
        }
    };
    // a closed pipe downstream is not our failure
    let _ = std::io::stdout().lock().write_all(stdout.as_bytes());
    eprintln!("{}", outcome.summary);
    Ok(outcome.code)
}

fn run(cmd: &Command, ctx: &mut Context) -> Result<Outcome, CliError> {
    match cmd {
        Command::Enumerate { level, out } => enumerate(*level as usize, out.as_deref()),
        Command::Epsilon { interpretation } => epsilon(interpretation),
        Command::Verify { coeffs, interpretations, interpretation } => {
            verify(ctx, coeffs, *interpretations, interpretation.as_deref())
        }
        Command::Derive { exclude_squares, interpretation, out } => {
            derive(*exclude_squares, interpretation, out.as_deref())
        }
        Command::CheckTheorem { n, exhaustive, samples, seed } => check_theorem(ctx, *n, *exhaustive, *samples, *seed),
        Command::Construct { kind, n, m, out } => construct(*kind, *n, *m, out.as_deref()),
        Command::BestDomination { t, graph } => domination(ctx, *t, graph),
        Command::Blowup { graph, k, seed, check, samples, trials, interpretation, out_graph } => {
            blowup(ctx, graph, *k, *seed, *check, *samples, *trials, interpretation.as_deref(), out_graph.as_deref())
        }
        Command::RandomPairs { n, pairs, seeds } => random_pairs(ctx, *n, *pairs, seeds),
        Command::Replay { report } => replay(ctx, report),
    }
}

fn interpretations(spec: &str) -> Result<Vec<Interpretation>, CliError> {
    if spec == "all" {
        return Ok(admissible_interpretations());
    }
    Interpretation::parse_id(spec).map(|i| vec![i]).ok_or_else(|| usage(format!("bad interpretation id {spec:?}")))
}

fn selected(spec: Option<&str>) -> Result<Interpretation, CliError> {
    match spec {
        Some(s) => Interpretation::parse_id(s).ok_or_else(|| usage(format!("bad interpretation id {s:?}"))),
        None => Ok(admissible_interpretations().swap_remove(0)),
    }
}

fn read_graph(ctx: &mut Context, path: &Path) -> Result<TricoloredGraph, CliError> {
    TricoloredGraph::parse_tcg(&ctx.read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn enumerate(level: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let basis = Basis::get(level).map_err(usage)?;
    let rows: Vec<(usize, String, String)> =
        (0..basis.len()).map(|i| (i + 1, basis.key(i).to_hex(), basis.representative(i).to_string())).collect();
    if let Some(path) = out {
        let text: String = rows.iter().map(|(i, k, c)| format!("{i} {k} {c}\n")).collect();
        write_file(path, &text)?;
    }
    let classes: Vec<Value> = rows.iter().map(|(i, k, c)| json!({ "index": i, "key": k, "colors": c })).collect();
    let report = json!({ "level": level, "count": basis.len(), "classes": classes });
    Ok(Outcome::json(report, format!("{} classes", basis.len()), EXIT_OK))
}

fn epsilon(spec: &str) -> Result<Outcome, CliError> {
    let interps = interpretations(spec)?;
    let mut rows = Vec::new();
    let mut matching = 0;
    for interp in &interps {
        let table = interp.epsilon_table();
        let mut entries = Vec::new();
        for i in 1..=7 {
            for c in COLORS {
                let (v, p) = (table.get(i, c), published_epsilon(i, c));
                entries.push(json!({
                    "type": i,
                    "color": c,
                    "value": RationalJson::from(v),
                    "published": RationalJson::from(&p),
                    "matches": *v == p,
                }));
            }
        }
        let ok = interp.matches_published();
        matching += usize::from(ok);
        rows.push(json!({ "interpretation": interp.id(), "matchesPublished": ok, "entries": entries }));
    }
    let summary = format!("{matching} of {} interpretations reproduce all 21 published values", interps.len());
    Ok(Outcome::json(json!({ "interpretations": rows }), summary, EXIT_OK))
}

fn min_slack_json(report: &CertificateReport) -> Value {
    let (i, v) = report.min_slack();
    json!({ "class": i + 1, "key": Basis::top().key(i).to_hex(), "value": RationalJson::from(&v) })
}

fn verify(ctx: &mut Context, coeffs: &str, scope: Scope, interp: Option<&str>) -> Result<Outcome, CliError> {
    if coeffs == "published" || coeffs == "paper" {
        return verify_published(scope, interp);
    }
    let path = coeffs
        .strip_prefix("file:")
        .ok_or_else(|| usage(format!("--coeffs expects published or file:PATH, got {coeffs:?}")))?;
    let text = ctx.read(Path::new(path))?;
    let rejected = |e: CertificateError| {
        let summary = format!("invalid certificate: {e}");
        Outcome::json(
            json!({ "source": path, "verdict": Verdict::Invalid, "error": e.to_string() }),
            summary,
            EXIT_INVALID,
        )
    };
    let stated = match ReportJson::parse(&text) {
        Ok(r) => r,
        Err(CertificateError::Json(e)) => return Err(usage(format!("{path}: {e}"))),
        Err(e) => return Ok(rejected(e)),
    };
    let checked = match recheck_report(&stated) {
        Ok(r) => r,
        Err(e) => return Ok(rejected(e)),
    };
    let slack_matches = checked.slack == stated.slack;
    let (code, summary) = match (stated.verdict, checked.verdict) {
        (Verdict::Valid, Verdict::Valid) if slack_matches => (EXIT_OK, "certificate valid".to_string()),
        (Verdict::Valid, Verdict::Valid) => {
            (EXIT_INVALID, "stated slack does not match the recomputed slack".to_string())
        }
        (Verdict::Infeasible, Verdict::Infeasible) => {
            (EXIT_INFEASIBLE, "infeasibility witness checked: no certificate over these candidates".to_string())
        }
        (Verdict::Infeasible, _) => (EXIT_INVALID, "infeasibility witness does not separate".to_string()),
        _ => {
            let (i, v) = checked.min_slack();
            (
                EXIT_INVALID,
                format!("certificate invalid: slack {v} at class {} ({})", i + 1, Basis::top().key(i).to_hex()),
            )
        }
    };
    let report = json!({
        "source": path,
        "interpretation": stated.interpretation,
        "statedVerdict": stated.verdict,
        "verdict": checked.verdict,
        "slackMatches": slack_matches,
        "minSlack": min_slack_json(&checked),
    });
    Ok(Outcome::json(report, summary, code))
}

fn verify_published(scope: Scope, interp: Option<&str>) -> Result<Outcome, CliError> {
    let interps = match scope {
        Scope::Selected => vec![selected(interp)?],
        Scope::All => admissible_interpretations(),
    };
    let mut rows = Vec::new();
    let mut valid = 0;
    let mut ruled_out = 0;
    let mut worst: Option<(CertificateReport, usize)> = None;
    for interp in &interps {
        let search = search_published_assignment(interp).map_err(internal)?;
        valid += usize::from(search.best.is_valid());
        ruled_out += usize::from(search.ruled_out_by.is_some());
        rows.push(json!({
            "interpretation": interp.id(),
            "assignmentsTried": search.tried,
            "verdict": search.best.verdict,
            "minSlack": min_slack_json(&search.best),
            "ruledOutByInfeasibility": search.ruled_out_by.is_some(),
            "best": search.best.to_json(),
        }));
        let (i, v) = search.best.min_slack();
        if worst.as_ref().is_none_or(|(r, _)| v > r.min_slack().1) {
            worst = Some((search.best.clone(), i));
        }
    }
    let report = json!({ "source": "published", "interpretations": rows });
    if valid > 0 {
        return Ok(Outcome::json(
            report,
            format!("published multipliers valid under {valid} interpretation(s)"),
            EXIT_OK,
        ));
    }
    let (best, i) = worst.expect("at least one interpretation");
    let summary = format!(
        "published multipliers: no valid assignment under {} interpretation(s); best minimum slack {} at class {} ({}); \
         {ruled_out} ruled out by an exact separating weighting; see `tricolor derive`",
        interps.len(),
        best.min_slack().1,
        i + 1,
        Basis::top().key(i).to_hex(),
    );
    Ok(Outcome::json(report, summary, EXIT_INVALID))
}

fn derive(exclude_squares: bool, spec: &str, out: Option<&Path>) -> Result<Outcome, CliError> {
    let opts = DeriveOptions { exclude_squares, ..Default::default() };
    let (summaries, chosen): (Vec<CertificateReport>, CertificateReport) = match spec {
        "all" => {
            let reports = derive_all(opts).map_err(internal)?;
            let chosen = match reports.iter().find(|r| r.is_valid()) {
                Some(r) => r.clone(),
                None => derive_pooled(opts).map_err(internal)?,
            };
            (reports, chosen)
        }
        "pooled" => (Vec::new(), derive_pooled(opts).map_err(internal)?),
        id => {
            let interp = selected(Some(id))?;
            let r = derive_certificate(&interp, opts).map_err(internal)?;
            (vec![r.clone()], r)
        }
    };
    if let Some(path) = out {
        write_file(path, &chosen.to_json_string())?;
    }
    let rows: Vec<Value> = summaries
        .iter()
        .map(|r| json!({ "interpretation": r.interpretation, "verdict": r.verdict, "candidates": r.candidates.len() }))
        .collect();
    let report = json!({
        "excludeSquares": exclude_squares,
        "interpretations": rows,
        "certificate": chosen.to_json(),
    });
    let (code, summary) = match chosen.verdict {
        Verdict::Valid => (EXIT_OK, format!("certificate valid under {}", chosen.interpretation)),
        Verdict::Infeasible => {
            let support = chosen.witness.as_ref().map_or(0, count_nonzero);
            (
                EXIT_INFEASIBLE,
                format!(
                    "LP infeasible ({} interpretation(s) tried); separating weighting on {support} classes, checked exactly",
                    summaries.len().max(1)
                ),
            )
        }
        Verdict::Invalid => (EXIT_INVALID, "solver returned an invalid combination".to_string()),
    };
    Ok(Outcome::json(report, summary, code))
}

fn theorem_error(e: DominationError) -> CliError {
    match e {
        DominationError::Counterexample { n, witness } => {
            CliError::Internal(format!("counterexample on {n} vertices, witness:\n{witness}"))
        }
        other => usage(other),
    }
}

fn check_theorem(
    ctx: &mut Context,
    n: usize,
    exhaustive: bool,
    samples: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let report = if exhaustive {
        exhaustive_theorem_check(n).map_err(theorem_error)?
    } else {
        ctx.seeds.push(seed);
        sampled_theorem_check(n, samples, seed).map_err(theorem_error)?
    };
    let noun = match report.mode.as_str() {
        "all-colorings" => "colorings",
        "classes" => "classes",
        _ => "sampled colorings",
    };
    let summary = format!(
        "{} {noun}, {} counterexamples (smallest best size {} of {})",
        report.graphs, report.counterexamples, report.min_size, report.n
    );
    Ok(Outcome::json(serde_json::to_value(&report).map_err(internal)?, summary, EXIT_OK))
}

fn construct(kind: Kind, n: Option<usize>, m: Option<usize>, out: Option<&Path>) -> Result<Outcome, CliError> {
    let g = match (kind, n, m) {
        (Kind::Kierstead, Some(n), None) => kierstead(n).map_err(usage)?,
        (Kind::Rainbow, None, Some(m)) => rainbow_block(m).map_err(usage)?,
        (Kind::Kierstead, _, _) => return Err(usage("--kind kierstead takes --n only")),
        (Kind::Rainbow, _, _) => return Err(usage("--kind rainbow takes --m only")),
    };
    let name = match kind {
        Kind::Kierstead => "kierstead",
        Kind::Rainbow => "rainbow",
    };
    let tcg = g.to_tcg();
    let summary = format!("{name} construction on {} vertices", g.n());
    let mut report = json!({ "kind": name, "vertices": g.n(), "sha256": sha256_hex(tcg.as_bytes()) });
    match out {
        Some(path) => {
            write_file(path, &tcg)?;
            report["file"] = json!(path.display().to_string());
            Ok(Outcome::json(report, summary, EXIT_OK))
        }
        None => Ok(Outcome { report, summary, code: EXIT_OK, text: Some(tcg) }),
    }
}

fn domination(ctx: &mut Context, t: usize, graph: &Path) -> Result<Outcome, CliError> {
    let g = read_graph(ctx, graph)?;
    let r = best_domination(&g, t).map_err(usage)?;
    let mut report = serde_json::to_value(r.to_json()).map_err(internal)?;
    report["dominated"] = json!(r.dominated);
    let ratio = r.ratio();
    let summary = format!(
        "size {} of {} (ratio {ratio}, color {}, dominators {:?}){}",
        r.size,
        r.n,
        r.color,
        r.dominators,
        if r.exhaustive { "" } else { ", sampled lower bound" }
    );
    Ok(Outcome::json(report, summary, EXIT_OK))
}

#[allow(clippy::too_many_arguments)]
fn blowup(
    ctx: &mut Context,
    graph: &Path,
    k: usize,
    seed: u64,
    check: Check,
    samples: usize,
    trials: usize,
    interp: Option<&str>,
    out_graph: Option<&Path>,
) -> Result<Outcome, CliError> {
    let base = read_graph(ctx, graph)?;
    ctx.seeds.push(seed);
    let spec = BlowupSpec::new(base.clone(), k, seed).map_err(usage)?;
    if let Some(path) = out_graph {
        write_file(path, &blow_up(&spec).to_tcg())?;
    }
    let mut report = json!({ "base": base.to_string(), "k": k, "seed": seed, "order": spec.order() });
    let (code, summary) = match check {
        Check::None => (EXIT_OK, format!("blow-up of order {}", spec.order())),
        Check::Squares => {
            let kinds = all_square_kinds();
            let vectors: Vec<(String, std::sync::Arc<RationalVector>)> = kinds
                .iter()
                .map(|k| Ok((k.key(), candidate_vector(k)?)))
                .collect::<Result<_, CertificateError>>()
                .map_err(internal)?;
            let named: Vec<(String, &RationalVector)> = vectors.iter().map(|(n, v)| (n.clone(), v.as_ref())).collect();
            let results = check_functionals(&spec, &named, samples, -0.01).map_err(usage)?;
            let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.functional.as_str()).collect();
            let worst = results.iter().map(|r| r.estimate).fold(f64::INFINITY, f64::min);
            report["functionals"] = serde_json::to_value(&results).map_err(internal)?;
            if failed.is_empty() {
                (EXIT_OK, format!("all {} square functionals >= -0.01 (smallest {worst:.5})", results.len()))
            } else {
                (EXIT_INTERNAL, format!("{} square functional(s) below -0.01: {}", failed.len(), failed.join(", ")))
            }
        }
        Check::Slack => {
            let interp = selected(interp)?;
            let mut rows = Vec::new();
            let mut failed = Vec::new();
            for (i, c) in (1..=7).flat_map(|i| COLORS.map(|c| (i, c))) {
                let r = check_domination_slack(&base, interp.sigma(i), c, k, trials, seed).map_err(usage)?;
                if !r.pass {
                    failed.push(format!("s{i}/color {c} ({} of {} over)", r.violations, r.trials));
                }
                let mut row = serde_json::to_value(&r).map_err(internal)?;
                row["type"] = json!(i);
                rows.push(row);
            }
            report["interpretation"] = json!(interp.id());
            report["slack"] = json!(rows);
            if failed.is_empty() {
                (EXIT_OK, format!("slack bound holds for all {} (type, color) pairs", rows.len()))
            } else {
                (EXIT_INTERNAL, format!("slack bound exceeded in more than 1% of samples: {}", failed.join(", ")))
            }
        }
    };
    Ok(Outcome::json(report, summary, code))
}

fn random_pairs(ctx: &mut Context, n: usize, pairs: usize, seeds: &[u64]) -> Result<Outcome, CliError> {
    if seeds.is_empty() {
        return Err(usage("at least one seed is required"));
    }
    ctx.seeds.extend_from_slice(seeds);
    let runs = seeds.iter().map(|&s| random_pair_bound(n, s, pairs)).collect::<Result<Vec<_>, _>>().map_err(usage)?;
    let mean = runs.iter().map(|r| r.mean_fraction).sum::<f64>() / runs.len() as f64;
    let max = runs.iter().map(|r| r.max_fraction).fold(0.0, f64::max);
    let report = json!({ "runs": runs, "meanFraction": mean, "maxFraction": max, "expected": 5.0 / 9.0 });
    let summary = format!("mean fraction {mean:.5} (5/9 = {:.5}), max fraction {max:.5}", 5.0 / 9.0);
    Ok(Outcome::json(report, summary, EXIT_OK))
}

fn replay(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let doc: Value = serde_json::from_str(&ctx.read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let manifest: RunManifest = serde_json::from_value(doc["manifest"].clone())
        .map_err(|e| usage(format!("{}: manifest: {e}", path.display())))?;
    let mut argv = vec!["tricolor".to_string()];
    argv.extend(manifest.argv.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| usage(format!("recorded arguments: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(usage("a replay report cannot be replayed"));
    }
    let mut inner = Context::new(None);
    let outcome = run(&cli.command, &mut inner)?;
    let same_inputs = inner.inputs.iter().map(|d| &d.sha256).eq(manifest.inputs.iter().map(|d| &d.sha256));
    let reproduced = outcome.report == doc["report"];
    let report = json!({
        "replayed": manifest.argv,
        "sameInputs": same_inputs,
        "reproduced": reproduced,
        "report": outcome.report,
    });
    if reproduced {
        Ok(Outcome::json(report, format!("{}: report reproduced exactly", manifest.command), outcome.code))
    } else {
        let note = if same_inputs { "" } else { " (inputs changed)" };
        Ok(Outcome::json(
            report,
            format!("{}: report differs from the recorded one{note}", manifest.command),
            EXIT_INTERNAL,
        ))
    }
}
