use serde_json::{json, Value};
use std::collections::BTreeMap;

use fislab::charfun::table_for;
use fislab::explain::{self, minimal_hitting_sets};
use fislab::model::ExplanationProblem;
use fislab::props::{
    check_duality, checks_for, gamma_value, search_counterexample, MatrixConfig, PropertyId,
    PropertyMatrix, Subject,
};
use fislab::random::ProblemStream;
use fislab::rational;
use fislab::repro;
use fislab::scores::{
    compute_fis, shapley_permutation_oracle, wvg_power_index, Definition, Fis, FisId, ScoreVector,
    TemplateId, MAX_ORACLE_FEATURES,
};
use fislab::{Execution, FeatureSet, WeightedVotingGame};

use crate::input::{self, list};
use crate::output::{csv_row, decimal, exact_and_decimal, json, table};
use crate::{Failure, Format, ModelArgs};

const DEFAULT_MATRIX_BUDGET: u64 = 200;
const DEFAULT_SEARCH_BUDGET: u64 = 10_000;
const DEFAULT_DUALITY_BUDGET: u64 = 100;

pub struct Context {
    pub format: Format,
    pub seed: u64,
    pub budget: Option<u64>,
    pub exec: Execution,
}

fn point_string(problem: &ExplanationProblem) -> String {
    let p: Vec<String> = problem
        .instance()
        .point
        .iter()
        .map(i64::to_string)
        .collect();
    format!("({})", p.join(","))
}

fn sets(members: &[FeatureSet]) -> Vec<String> {
    members.iter().map(FeatureSet::to_string).collect()
}

fn set_lists(members: &[FeatureSet]) -> Value {
    Value::from(members.iter().map(|s| s.to_vec()).collect::<Vec<_>>())
}

fn instance_json(problem: &ExplanationProblem) -> Value {
    json!({ "point": problem.instance().point, "label": problem.prediction() })
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn finish(report: String, ok: bool) -> Result<String, Failure> {
    if ok {
        Ok(report)
    } else {
        Err(Failure::Check(report))
    }
}

pub fn explain(ctx: &Context, args: &ModelArgs) -> Result<String, Failure> {
    let problem = input::problem(args)?;
    let axps = explain::enumerate_axps(&problem);
    let cxps = explain::enumerate_cxps(&problem);
    let universe = problem.all_features();
    let duality = minimal_hitting_sets(&cxps.members, universe) == axps.members
        && minimal_hitting_sets(&axps.members, universe) == cxps.members;
    let relevant = explain::relevant_features(&problem);
    let warnings = problem.classifier().warnings();
    let report = match ctx.format {
        Format::Text => {
            let mut out = format!(
                "instance v={} c={}\nAXps: {}\nCXps: {}\nrelevant features: {}\nMHS duality: {}\n",
                point_string(&problem),
                problem.prediction(),
                sets(&axps.members).join(" "),
                sets(&cxps.members).join(" "),
                relevant,
                pass_fail(duality)
            );
            for w in &warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
        Format::Json => json(&json!({
            "instance": instance_json(&problem),
            "axps": set_lists(&axps.members),
            "cxps": set_lists(&cxps.members),
            "relevant": relevant.to_vec(),
            "mhs_duality": pass_fail(duality),
            "warnings": warnings,
        })),
        Format::Csv => {
            let mut out = csv_row(["kind", "set"]);
            for s in &axps.members {
                out.push_str(&csv_row(["AXp".to_string(), s.to_string()]));
            }
            for s in &cxps.members {
                out.push_str(&csv_row(["CXp".to_string(), s.to_string()]));
            }
            out.push_str(&csv_row(["relevant".to_string(), relevant.to_string()]));
            out.push_str(&csv_row(["mhs_duality", pass_fail(duality)]));
            out
        }
    };
    finish(report, duality)
}

fn parse_scores(text: &str) -> Result<Vec<Fis>, Failure> {
    let mut out = Vec::new();
    for item in list(text) {
        if item.eq_ignore_ascii_case("all") {
            out.extend(FisId::ALL.into_iter().map(Fis::primal));
        } else {
            out.push(item.parse::<Fis>()?);
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("no score selected".into()));
    }
    out.dedup();
    Ok(out)
}

struct OracleCheck {
    label: String,
    outcome: Option<bool>,
}

fn oracle_check(
    problem: &ExplanationProblem,
    fis: Fis,
    sv: &ScoreVector,
) -> Result<Option<OracleCheck>, Failure> {
    let Definition::Template { template, charfn } = fis.definition()? else {
        return Ok(None);
    };
    if template.id != TemplateId::ShapleyShubik {
        return Ok(None);
    }
    let outcome = if problem.n_features() > MAX_ORACLE_FEATURES {
        None
    } else {
        let table = table_for(problem, &charfn)?;
        Some(shapley_permutation_oracle(&table)? == sv.values)
    };
    Ok(Some(OracleCheck {
        label: sv.label.clone(),
        outcome,
    }))
}

pub fn score(
    ctx: &Context,
    args: &ModelArgs,
    selection: &str,
    dual: bool,
    oracle: bool,
    ranking: bool,
) -> Result<String, Failure> {
    let problem = input::problem(args)?;
    let mut selected = parse_scores(selection)?;
    let mut notes = Vec::new();
    if dual {
        let duals: Vec<Fis> = selected
            .iter()
            .filter(|f| !f.dual)
            .map(|f| f.flipped())
            .collect();
        for d in duals {
            if d.definition().is_ok() {
                selected.push(d);
            } else {
                notes.push(format!("{} has no dual", d.id));
            }
        }
    }
    let scores: Vec<ScoreVector> = selected
        .iter()
        .map(|&f| compute_fis(f, &problem))
        .collect::<Result<_, _>>()?;
    let mut checks = Vec::new();
    if oracle {
        for (&f, sv) in selected.iter().zip(&scores) {
            checks.extend(oracle_check(&problem, f, sv)?);
        }
        if checks.is_empty() {
            notes.push("no Shapley-based score selected for the oracle check".into());
        }
    }
    let ok = checks.iter().all(|c| c.outcome != Some(false));
    let m = problem.n_features();
    let oracle_line = |c: &OracleCheck| match c.outcome {
        Some(pass) => format!("oracle check {}: {}", c.label, pass_fail(pass)),
        None => format!(
            "oracle check {}: skipped, more than {MAX_ORACLE_FEATURES} features",
            c.label
        ),
    };
    let report = match ctx.format {
        Format::Text => {
            let mut header = vec!["feature".to_string()];
            for sv in &scores {
                header.push(sv.label.clone());
                if ranking {
                    header.push(format!("rank {}", sv.label));
                }
            }
            let rankings: Vec<Vec<usize>> = scores.iter().map(ScoreVector::ranking).collect();
            let rows: Vec<Vec<String>> = (1..=m)
                .map(|i| {
                    let mut row = vec![i.to_string()];
                    for (sv, rank) in scores.iter().zip(&rankings) {
                        row.push(exact_and_decimal(sv.get(i)));
                        if ranking {
                            row.push(rank[i - 1].to_string());
                        }
                    }
                    row
                })
                .collect();
            let mut out = format!(
                "instance v={} c={}\n",
                point_string(&problem),
                problem.prediction()
            );
            out.push_str(&table(&header, &rows));
            out.push_str("decimals are rounded half-even to 6 places for display only\n");
            for c in &checks {
                out.push_str(&oracle_line(c));
                out.push('\n');
            }
            for n in &notes {
                out.push_str(&format!("note: {n}\n"));
            }
            out
        }
        Format::Json => {
            let entries: Vec<Value> = scores
                .iter()
                .map(|sv| {
                    let mut v = json!({
                        "fis": sv.label,
                        "template": sv.template.map(|t| t.to_string()),
                        "charfn": sv.charfn.as_ref().map(|c| c.to_string()),
                        "values": sv.rational_strings(),
                        "decimals": sv.values.iter().map(decimal).collect::<Vec<_>>(),
                    });
                    if ranking {
                        v["ranking"] = json!(sv.ranking());
                    }
                    v
                })
                .collect();
            let oracle: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "fis": c.label, "pass": c.outcome }))
                .collect();
            json(&json!({
                "instance": instance_json(&problem),
                "scores": entries,
                "oracle": oracle,
                "notes": notes,
            }))
        }
        Format::Csv => {
            let mut header = vec!["fis", "feature", "value", "decimal"];
            if ranking {
                header.push("rank");
            }
            let mut out = csv_row(header);
            for sv in &scores {
                let ranks = sv.ranking();
                for i in 1..=m {
                    let mut row = vec![
                        sv.label.clone(),
                        i.to_string(),
                        rational::to_string(sv.get(i)),
                        decimal(sv.get(i)),
                    ];
                    if ranking {
                        row.push(ranks[i - 1].to_string());
                    }
                    out.push_str(&csv_row(row));
                }
            }
            out
        }
    };
    finish(report, ok)
}

fn stream(seed: u64, max_features: usize) -> Result<ProblemStream, Failure> {
    if !(2..=16).contains(&max_features) {
        return Err(Failure::Usage("--max-features must lie in 2..=16".into()));
    }
    Ok(ProblemStream::new(seed).with_features(2..=max_features))
}

pub fn props(
    ctx: &Context,
    args: &ModelArgs,
    selection: Option<&str>,
    search: Option<&str>,
    duality: bool,
    max_features: usize,
) -> Result<String, Failure> {
    if let Some(property) = search {
        let property: PropertyId = property.parse()?;
        let scores = parse_scores(selection.unwrap_or("all"))?;
        return props_search(ctx, property, &scores, max_features);
    }
    if duality {
        let scores = parse_scores(selection.unwrap_or("S,B"))?;
        return props_duality(ctx, &scores, max_features);
    }
    if input::has_model(args) {
        let problem = input::problem(args)?;
        let scores = parse_scores(selection.unwrap_or("all"))?;
        return props_problem(ctx, &problem, &scores);
    }
    let matrix = PropertyMatrix::compute(MatrixConfig {
        seed: ctx.seed,
        budget: ctx.budget.unwrap_or(DEFAULT_MATRIX_BUDGET),
        exec: ctx.exec,
    })?;
    let report = match ctx.format {
        Format::Text => matrix.to_text(),
        Format::Json => format!("{}\n", matrix.to_json()),
        Format::Csv => {
            let mut header = vec!["fis".to_string()];
            header.extend(matrix.properties.iter().map(|p| p.to_string()));
            let mut out = csv_row(header);
            for row in &matrix.rows {
                let mut fields = vec![format!("sv_{}", row.fis.as_str())];
                fields.extend(row.cells.iter().map(|c| {
                    serde_json::to_value(c)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default()
                }));
                out.push_str(&csv_row(fields));
            }
            out
        }
    };
    finish(report, matrix.is_consistent())
}

fn props_search(
    ctx: &Context,
    property: PropertyId,
    scores: &[Fis],
    max_features: usize,
) -> Result<String, Failure> {
    let stream = stream(ctx.seed, max_features)?;
    let budget = ctx.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    for &fis in scores {
        let subject = Subject::Fis(fis);
        let found = search_counterexample(property, &subject, &stream, budget, ctx.exec)?;
        match found {
            Some(cx) => {
                lines.push(format!(
                    "{property} {fis}: witness at problem {} of seed {}\n  {}\n  model: {}",
                    cx.index,
                    cx.seed,
                    cx.verdict,
                    serde_json::to_string(&cx.verdict.check.problem().classifier().to_document())
                        .expect("model documents serialize")
                ));
                entries.push(json!({
                    "property": property,
                    "fis": fis.to_string(),
                    "index": cx.index,
                    "seed": cx.seed,
                    "witness": cx.verdict,
                }));
            }
            None => {
                lines.push(format!(
                    "{property} {fis}: no violation found within {budget} problems (seed {})",
                    ctx.seed
                ));
                entries.push(json!({
                    "property": property,
                    "fis": fis.to_string(),
                    "witness": Value::Null,
                }));
            }
        }
    }
    Ok(match ctx.format {
        Format::Text => format!("{}\n", lines.join("\n")),
        Format::Json => json(&json!({ "seed": ctx.seed, "budget": budget, "results": entries })),
        Format::Csv => {
            let mut out = csv_row(["property", "fis", "index", "witness"]);
            for e in &entries {
                let index = e.get("index").map(|v| v.to_string()).unwrap_or_default();
                let witness = e["witness"]
                    .get("outcome")
                    .map(|o| o.to_string())
                    .unwrap_or_else(|| "none".into());
                out.push_str(&csv_row([
                    property.to_string(),
                    e["fis"].as_str().unwrap_or_default().to_string(),
                    index,
                    witness,
                ]));
            }
            out
        }
    })
}

fn props_duality(ctx: &Context, scores: &[Fis], max_features: usize) -> Result<String, Failure> {
    let stream = stream(ctx.seed, max_features)?;
    let budget = ctx.budget.unwrap_or(DEFAULT_DUALITY_BUDGET);
    let n = usize::try_from(budget).map_err(|_| Failure::Usage("budget too large".into()))?;
    let mut tallies = Vec::new();
    for &fis in scores {
        if fis.dual {
            return Err(Failure::Usage(format!(
                "{fis}: select primal scores for --duality"
            )));
        }
        let levels = ctx.exec.map_range(n, |k| {
            check_duality(&stream.problem(k as u64), fis.id).map(|v| v.level)
        });
        let mut counts: BTreeMap<&'static str, u64> = ["strong", "equivalent", "weak", "none"]
            .iter()
            .map(|&k| (k, 0))
            .collect();
        for level in levels {
            let key = match level?.rank() {
                3 => "strong",
                2 => "equivalent",
                1 => "weak",
                _ => "none",
            };
            *counts.get_mut(key).expect("known level") += 1;
        }
        tallies.push((fis, counts));
    }
    let keys = ["strong", "equivalent", "weak", "none"];
    Ok(match ctx.format {
        Format::Text => {
            let header: Vec<String> = std::iter::once("fis".to_string())
                .chain(keys.iter().map(|k| k.to_string()))
                .collect();
            let rows: Vec<Vec<String>> = tallies
                .iter()
                .map(|(fis, c)| {
                    std::iter::once(fis.to_string())
                        .chain(keys.iter().map(|k| c[k].to_string()))
                        .collect()
                })
                .collect();
            format!(
                "duality levels over {budget} random problems (seed {})\n{}",
                ctx.seed,
                table(&header, &rows)
            )
        }
        Format::Json => json(&json!({
            "seed": ctx.seed,
            "budget": budget,
            "levels": tallies.iter().map(|(fis, c)| json!({"fis": fis.to_string(), "counts": c})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = csv_row(std::iter::once("fis").chain(keys));
            for (fis, c) in &tallies {
                out.push_str(&csv_row(
                    std::iter::once(fis.to_string()).chain(keys.iter().map(|k| c[k].to_string())),
                ));
            }
            out
        }
    })
}

fn props_problem(
    ctx: &Context,
    problem: &ExplanationProblem,
    scores: &[Fis],
) -> Result<String, Failure> {
    let mut rows = Vec::new();
    for &fis in scores {
        for property in PropertyId::ALL {
            let cell = if property == PropertyId::P06 {
                format!(
                    "gamma = {}",
                    rational::to_string(&gamma_value(problem, fis)?)
                )
            } else {
                match checks_for(property, &Subject::Fis(fis), problem) {
                    Err(e) => format!("n/a ({e})"),
                    Ok(checks) => {
                        let mut cell = "no violation found".to_string();
                        for c in checks {
                            let v = c.run()?;
                            if let Some(w) = v.outcome.witness() {
                                cell = format!("VIOLATED: {w}");
                                break;
                            }
                        }
                        cell
                    }
                }
            };
            rows.push(vec![fis.to_string(), property.to_string(), cell]);
        }
    }
    let header = vec![
        "fis".to_string(),
        "property".to_string(),
        "verdict".to_string(),
    ];
    Ok(match ctx.format {
        Format::Text => format!(
            "instance v={} c={}\n{}",
            point_string(problem),
            problem.prediction(),
            table(&header, &rows)
        ),
        Format::Json => json(&json!({
            "instance": instance_json(problem),
            "verdicts": rows.iter().map(|r| json!({"fis": r[0], "property": r[1], "verdict": r[2]})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = csv_row(&header);
            for r in &rows {
                out.push_str(&csv_row(r));
            }
            out
        }
    })
}

pub fn repro(ctx: &Context) -> Result<String, Failure> {
    let report = repro::run()?;
    let text = match ctx.format {
        Format::Text => report.to_text(),
        Format::Json => json(&serde_json::to_value(&report).expect("report serializes")),
        Format::Csv => {
            let mut out = csv_row([
                "section",
                "name",
                "provenance",
                "source",
                "expected",
                "computed",
                "pass",
            ]);
            for c in &report.checks {
                out.push_str(&csv_row([
                    c.section.to_string(),
                    c.name.clone(),
                    format!("{:?}", c.provenance).to_uppercase(),
                    c.source.to_string(),
                    c.expected.join(" "),
                    c.computed.join(" "),
                    pass_fail(c.pass).to_string(),
                ]));
            }
            out
        }
    };
    finish(text, report.all_pass())
}

pub fn wvg(ctx: &Context, quota: u64, weights: &str) -> Result<String, Failure> {
    let weights = list(weights)
        .iter()
        .map(|w| {
            w.parse::<u64>()
                .map_err(|_| Failure::Usage(format!("invalid weight `{w}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let game = WeightedVotingGame::new(quota, weights)?;
    let indices = TemplateId::ALL
        .iter()
        .map(|&id| wvg_power_index(&game, id).map(|sv| (id, sv)))
        .collect::<Result<Vec<_>, _>>()?;
    let minimal = game.minimal_winning_coalitions();
    let n = game.n_voters();
    Ok(match ctx.format {
        Format::Text => {
            let header: Vec<String> = std::iter::once("template".to_string())
                .chain((1..=n).map(|i| format!("voter {i}")))
                .collect();
            let rows: Vec<Vec<String>> = indices
                .iter()
                .map(|(id, sv)| {
                    std::iter::once(id.name().to_string())
                        .chain(sv.values.iter().map(exact_and_decimal))
                        .collect()
                })
                .collect();
            format!(
                "game {game}\nminimal winning coalitions: {}\n{}",
                sets(&minimal).join(" "),
                table(&header, &rows)
            )
        }
        Format::Json => json(&json!({
            "quota": game.quota(),
            "weights": game.weights(),
            "minimal_winning_coalitions": set_lists(&minimal),
            "indices": indices.iter().map(|(id, sv)| json!({
                "template": id.to_string(),
                "name": id.name(),
                "values": sv.rational_strings(),
                "decimals": sv.values.iter().map(decimal).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = csv_row(["template", "voter", "value", "decimal"]);
            for (id, sv) in &indices {
                for (k, v) in sv.values.iter().enumerate() {
                    out.push_str(&csv_row([
                        id.to_string(),
                        (k + 1).to_string(),
                        rational::to_string(v),
                        decimal(v),
                    ]));
                }
            }
            out
        }
    })
}
