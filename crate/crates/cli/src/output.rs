//! Result files: CSV tables, newline-delimited JSON, and the run record.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use gapshift::measures::EmpiricalMeasure;
use gapshift::WordFormat;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCsvRow {
    pub n: usize,
    pub count: String,
    pub h_n: f64,
    #[serde(rename = "ref_logA")]
    pub ref_log_a: f64,
    #[serde(rename = "ref_thmB5")]
    pub ref_mixed_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusCsvRow {
    pub n: usize,
    pub count: String,
    pub growth: f64,
    pub ref_growth_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeCsvRow {
    pub period: usize,
    pub best_num: String,
    pub best_den: String,
    pub orbit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub gap: usize,
    pub witness_found: bool,
    pub witness: String,
    pub visited: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointCsvRow {
    pub checkpoint: usize,
    pub average_num: String,
    pub average_den: String,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_ndjson<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("writing {}", path.display()))?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub word: String,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub depth: usize,
    pub atoms: Vec<AtomJson>,
}

impl From<&EmpiricalMeasure> for MeasureJson {
    fn from(m: &EmpiricalMeasure) -> Self {
        MeasureJson {
            depth: m.depth,
            atoms: m
                .weights
                .iter()
                .map(|(w, q)| AtomJson {
                    word: w.render(WordFormat::Decimal),
                    num: q.numer().to_string(),
                    den: q.denom().to_string(),
                })
                .collect(),
        }
    }
}

/// Provenance of one invocation; written beside, never inside, the result files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub result_files: Vec<PathBuf>,
    pub suite: Option<SuiteSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub passed: usize,
    pub failed: Vec<u8>,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_run_record(dir: &Path, record: &RunRecord) -> Result<()> {
    let path = dir.join("run_record.json");
    std::fs::write(&path, serde_json::to_string_pretty(record)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gapshift::counting::entropy_profile;
    use gapshift::measures::empirical_measure;
    use gapshift::{GappedSubshiftSpec, Limits, Tau, Word};
    use num_bigint::BigUint;

    #[test]
    fn entropy_rows_round_trip() {
        let spec = GappedSubshiftSpec::full(1, Tau::integer(1)).unwrap();
        let p = entropy_profile(&spec, 6, &Limits::default()).unwrap();
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
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        write_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("n,count,h_n,ref_logA,ref_thmB5\n"));
        let back: Vec<EntropyCsvRow> = read_csv(&path).unwrap();
        assert_eq!(back, rows);
        for (b, r) in back.iter().zip(&p.rows) {
            assert_eq!(b.count.parse::<BigUint>().unwrap(), r.count);
        }
    }

    #[test]
    fn census_and_optimize_headers() {
        let dir = tempfile::tempdir().unwrap();
        let c = dir.path().join("c.csv");
        let rows = vec![CensusCsvRow {
            n: 3,
            count: "5".into(),
            growth: 5f64.ln() / 3.0,
            ref_growth_bound: 0.25,
        }];
        write_csv(&c, &rows).unwrap();
        assert!(std::fs::read_to_string(&c)
            .unwrap()
            .starts_with("n,count,growth,ref_growth_bound\n"));
        assert_eq!(read_csv::<CensusCsvRow>(&c).unwrap(), rows);

        let o = dir.path().join("o.csv");
        let rows = vec![OptimizeCsvRow {
            period: 2,
            best_num: "-1".into(),
            best_den: "2".into(),
            orbit: "0 1".into(),
        }];
        write_csv(&o, &rows).unwrap();
        assert!(std::fs::read_to_string(&o)
            .unwrap()
            .starts_with("period,best_num,best_den,orbit\n"));
        assert_eq!(read_csv::<OptimizeCsvRow>(&o).unwrap(), rows);
    }

    #[test]
    fn measure_json_shape() {
        let m = empirical_measure(Word::compact("10001000").symbols(), 4, 2).unwrap();
        let j = serde_json::to_value(MeasureJson::from(&m)).unwrap();
        assert_eq!(j["depth"], 2);
        assert_eq!(j["atoms"][0]["word"], "0 0");
        assert_eq!(j["atoms"][0]["num"], "1");
        assert_eq!(j["atoms"][0]["den"], "2");
        let back: MeasureJson = serde_json::from_value(j).unwrap();
        assert_eq!(back.atoms.len(), 3);
    }
}
