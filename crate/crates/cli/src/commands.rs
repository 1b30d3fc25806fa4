use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gapshift::counting::{entropy_profile, growth_profile};
use gapshift::gapped::{
    build_oscillating_point, glue, min_gap_witness_search, Closure, GlueOutput, GlueRequest,
    OscillationSchedule, Precision, Segment,
};
use gapshift::measures::{empirical_measure, ergodic_optimum, orbit_averages, oscillation};
use gapshift::suite::{self, SuiteOptions};
use gapshift::{rational, Word, WordFormat};
use serde::Deserialize;
use serde_json::json;

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{
    write_csv, write_ndjson, CensusCsvRow, CheckpointCsvRow, EntropyCsvRow, MeasureJson,
    OptimizeCsvRow, SuiteSummary, SweepCsvRow,
};

/// What a command produced, for the run record.
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub suite: Option<SuiteSummary>,
    /// Set when a checked property failed; maps to exit code 1.
    pub property_failure: Option<String>,
    /// Set when a resource cap stopped a check; maps to exit code 3.
    pub cap_failure: Option<String>,
}

impl Outcome {
    fn files(files: Vec<PathBuf>) -> Self {
        Outcome {
            files,
            suite: None,
            property_failure: None,
            cap_failure: None,
        }
    }
}

pub fn entropy(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.build_spec()?;
    let p = entropy_profile(&spec, cfg.ranges.n_max, &cfg.limits())?;
    let rows: Vec<EntropyCsvRow> = p
        .rows
        .iter()
        .map(|r| EntropyCsvRow {
            n: r.n,
            count: r.count.to_string(),
            h_n: r.h_n,
            ref_log_a: p.ref_log_a,
            ref_mixed_bound: p.ref_mixed_bound,
        })
        .collect();
    let path = out.join("entropy.csv");
    write_csv(&path, &rows)?;
    Ok(Outcome::files(vec![path]))
}

pub fn periodic(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.build_spec()?;
    let g = growth_profile(&spec, cfg.ranges.period_max, &cfg.limits())?;
    let rows: Vec<CensusCsvRow> = g
        .rows
        .iter()
        .map(|r| CensusCsvRow {
            n: r.n,
            count: r.count.to_string(),
            growth: r.growth,
            ref_growth_bound: g.reference,
        })
        .collect();
    let path = out.join("census.csv");
    write_csv(&path, &rows)?;
    Ok(Outcome::files(vec![path]))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentSpec {
    word: String,
    start: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestFile {
    precision: Option<i64>,
    period: Option<usize>,
    #[serde(default)]
    periodic: bool,
    #[serde(default)]
    format: WordFormat,
    segments: Vec<SegmentSpec>,
}

fn load_request(cfg: &ExperimentConfig, path: &Path) -> Result<GlueRequest> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let file: RequestFile =
        toml::from_str(&text).map_err(|e| ConfigError(format!("request: {e}")))?;
    let spec = cfg.build_spec()?;
    let code = file.precision.unwrap_or(cfg.ranges.precision);
    let precision = Precision::from_code(code)
        .ok_or_else(|| ConfigError(format!("precision code {code} must be ≥ -1")))?;
    let words = file
        .segments
        .iter()
        .map(|s| Word::parse(&s.word, file.format))
        .collect::<gapshift::Result<Vec<_>>>()?;
    let explicit = file.segments.iter().filter(|s| s.start.is_some()).count();
    let mut req = if explicit == 0 {
        GlueRequest::with_default_layout(&spec, words, precision, Closure::OpenEnd)?
    } else if explicit == file.segments.len() {
        GlueRequest {
            segments: words
                .into_iter()
                .zip(&file.segments)
                .map(|(word, s)| Segment {
                    word,
                    start: s.start.expect("checked"),
                })
                .collect(),
            precision,
            closure: Closure::OpenEnd,
        }
    } else {
        return Err(ConfigError("either every segment has a start or none does".into()).into());
    };
    if let Some(period) = file.period {
        req.closure = Closure::Periodic { period };
    } else if file.periodic {
        let period = req.min_period(&spec).unwrap_or(1);
        req.closure = Closure::Periodic { period };
    }
    Ok(req)
}

pub fn glue_cmd(cfg: &ExperimentConfig, out: &Path, request: &Path) -> Result<Outcome> {
    let spec = cfg.build_spec()?;
    let req = load_request(cfg, request)?;
    let (output, report) = glue(&spec, &req)?;
    let (kind, text) = match &output {
        GlueOutput::Prefix(w) => ("prefix", w.render(WordFormat::Decimal)),
        GlueOutput::Cycle(c) => ("cycle", c.render(WordFormat::Decimal)),
    };
    let witness = out.join("witness.txt");
    std::fs::write(&witness, format!("{text}\n"))?;
    let mut records = vec![json!({
        "kind": "witness",
        "output": kind,
        "word": text,
        "precision": req.precision.code(),
        "admissible": report.admissible,
        "all_hold": report.all_hold(),
    })];
    for r in &report.records {
        let mut v = serde_json::to_value(r)?;
        v["kind"] = json!("shadow");
        records.push(v);
    }
    let path = out.join("glue_report.ndjson");
    write_ndjson(&path, &records)?;
    let mut outcome = Outcome::files(vec![witness, path]);
    if !report.all_hold() {
        outcome.property_failure = Some("shadowing certificate does not hold".into());
    }
    Ok(outcome)
}

pub fn sweep(
    cfg: &ExperimentConfig,
    out: &Path,
    request: &Path,
    max_gap: Option<usize>,
) -> Result<Outcome> {
    let spec = cfg.build_spec()?;
    let req = load_request(cfg, request)?;
    let [u, v, ..] = req.segments.as_slice() else {
        bail!(ConfigError("sweep mode needs two segments".into()));
    };
    let m = spec.gap_function().eval(u.word.len() as u64, req.precision) as usize;
    let max_gap = max_gap.unwrap_or(m + 1);
    let mut rows = Vec::new();
    for gap in 1..=max_gap {
        let s = min_gap_witness_search(&spec, &u.word, &v.word, req.precision, gap, &cfg.limits())?;
        rows.push(SweepCsvRow {
            gap,
            witness_found: s.witness.is_some(),
            witness: s
                .witness
                .map(|w| w.render(WordFormat::Decimal))
                .unwrap_or_else(|| "no witness".into()),
            visited: s.visited,
        });
    }
    let path = out.join("sweep.csv");
    write_csv(&path, &rows)?;
    Ok(Outcome::files(vec![path]))
}

pub fn optimize(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.build_spec()?;
    let phi = cfg.build_observable(&spec, "neg_chi0")?;
    let limits = cfg.limits();
    let r = ergodic_optimum(&spec, &phi, cfg.ranges.period_max, &limits)?;
    let rows: Vec<OptimizeCsvRow> = r
        .per_period
        .iter()
        .map(|p| OptimizeCsvRow {
            period: p.period,
            best_num: p.best.numer().to_string(),
            best_den: p.best.denom().to_string(),
            orbit: p.orbit.render(WordFormat::Decimal),
        })
        .collect();
    let table = out.join("optimize.csv");
    write_csv(&table, &rows)?;

    let fmt_best = |b: &Option<(gapshift::rational::Rational, gapshift::CyclicWord)>| {
        b.as_ref().map(
            |(v, w)| json!({"value": rational::format(v), "orbit": w.render(WordFormat::Decimal)}),
        )
    };
    let mut records = vec![json!({
        "kind": "optimum",
        "label": "periodic lower bound",
        "max_period": cfg.ranges.period_max,
        "best": rational::format(&r.best),
        "argmax": r.argmax.iter().map(|w| w.render(WordFormat::Decimal)).collect::<Vec<_>>(),
    })];
    records.push(json!({
        "kind": "dichotomy",
        "zero_free_best": fmt_best(&r.zero_free_best),
        "zero_containing_best": fmt_best(&r.zero_containing_best),
    }));
    if let (Some((lo, _)), Some((hi, _))) = (&r.zero_containing_best, &r.zero_free_best) {
        // orbits whose average falls strictly between the two class optima
        let inside = orbit_averages(&spec, &phi, cfg.ranges.period_max, &limits)?
            .iter()
            .filter(|(_, a)| a > lo && a < hi)
            .count();
        records.push(json!({
            "kind": "interval",
            "lower": rational::format(lo),
            "upper": rational::format(hi),
            "orbits_strictly_inside": inside,
        }));
    }
    let summary = out.join("optimize.ndjson");
    write_ndjson(&summary, &records)?;
    Ok(Outcome::files(vec![table, summary]))
}

pub fn irregular(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.build_spec()?;
    let phi = cfg.build_observable(&spec, "chi0")?;
    let sched = OscillationSchedule::default_for(&spec);
    let checkpoints = sched.checkpoints(&spec);
    let len = sched.total_len(&spec) + phi.depth();
    let x = build_oscillating_point(&spec, &sched, len)?;
    let osc = oscillation(x.symbols(), &phi, &checkpoints)?;
    let rows: Vec<CheckpointCsvRow> = osc
        .averages
        .iter()
        .map(|(n, a)| CheckpointCsvRow {
            checkpoint: *n,
            average_num: a.numer().to_string(),
            average_den: a.denom().to_string(),
        })
        .collect();
    let table = out.join("irregular.csv");
    write_csv(&table, &rows)?;
    let point = out.join("point.txt");
    std::fs::write(&point, format!("{}\n", x.render(WordFormat::Decimal)))?;
    let depth = phi.depth().max(1);
    let n = sched.total_len(&spec);
    let measure = empirical_measure(x.symbols(), n, depth)?;
    let mpath = out.join("measure.json");
    std::fs::write(
        &mpath,
        serde_json::to_string(&MeasureJson::from(&measure))? + "\n",
    )?;
    let summary = out.join("oscillation.ndjson");
    write_ndjson(
        &summary,
        &[json!({
            "kind": "oscillation",
            "min": rational::format(&osc.min),
            "max": rational::format(&osc.max),
            "gap": rational::format(&osc.gap),
            "checkpoints": checkpoints,
        })],
    )?;
    Ok(Outcome::files(vec![table, point, mpath, summary]))
}

pub fn verify(cfg: &ExperimentConfig, out: &Path, seed: u64) -> Result<Outcome> {
    let opts = SuiteOptions {
        seed,
        limits: cfg.limits(),
    };
    let mut records = Vec::new();
    let mut failed = Vec::new();
    let mut first_failure = None;
    let mut cap = None;
    for (id, _, _) in suite::CRITERIA.iter() {
        let r = suite::run_criterion(*id, &opts)?;
        println!("{}", r.line());
        if !r.passed {
            failed.push(r.id);
            let msg = format!("criterion {}: {}", r.id, r.detail);
            if r.cap_exceeded {
                cap.get_or_insert(msg);
            } else {
                first_failure.get_or_insert(msg);
            }
        }
        records.push(json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}));
    }
    let path = out.join("verify.ndjson");
    write_ndjson(&path, &records)?;
    println!(
        "{} of {} criteria passed",
        records.len() - failed.len(),
        records.len()
    );
    Ok(Outcome {
        files: vec![path],
        suite: Some(SuiteSummary {
            passed: records.len() - failed.len(),
            failed,
        }),
        property_failure: first_failure,
        cap_failure: cap,
    })
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}
