//! Batch computation over knot tables with an append-only JSON-lines store.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::{self, DetectError};
use crate::diagram::parse_pd;
use crate::khovanov::{DeltaSupport, Limits};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad input table: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad store line {line}: {msg}")]
    Store { line: usize, msg: String },
    #[error("bad filter: {0}")]
    Filter(String),
    #[error("cannot build thread pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CensusError + '_ {
    move |source| CensusError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub name: String,
    pub pd: String,
    #[serde(rename = "dim_Q")]
    pub dim_q: usize,
    #[serde(rename = "dim_F2")]
    pub dim_f2: usize,
    pub det: u64,
    pub delta_support: DeltaSupport,
    pub jones: String,
    pub alexander: String,
    pub verdict: String,
    pub compute_time_ms: u64,
    pub toolkit_version: String,
}

impl CensusRecord {
    /// The record without its timing, for comparing recomputations.
    pub fn content(&self) -> CensusRecord {
        CensusRecord {
            compute_time_ms: 0,
            ..self.clone()
        }
    }

    fn field(&self, name: &str) -> Option<Value> {
        Some(match name {
            "name" => Value::Str(self.name.clone()),
            "pd" => Value::Str(self.pd.clone()),
            "dim_Q" | "dim_q" => Value::Int(self.dim_q as i64),
            "dim_F2" | "dim_f2" => Value::Int(self.dim_f2 as i64),
            "det" => Value::Int(self.det as i64),
            "jones" => Value::Str(self.jones.clone()),
            "alexander" => Value::Str(self.alexander.clone()),
            "verdict" => Value::Str(self.verdict.clone()),
            "compute_time_ms" => Value::Int(self.compute_time_ms as i64),
            "toolkit_version" => Value::Str(self.toolkit_version.clone()),
            "delta_count" => Value::Int(self.delta_support.0.len() as i64),
            _ => return None,
        })
    }
}

/// One input row: a name and PD text.
#[derive(Clone, Debug, Deserialize)]
pub struct CensusInput {
    pub name: String,
    pub pd: String,
}

/// Computes the record for one knot.
pub fn compute_record(name: &str, pd: &str, limits: &Limits) -> Result<CensusRecord, String> {
    let start = Instant::now();
    let d = parse_pd(pd).map_err(|e| e.to_string())?;
    let report = detector::detect(name, &d, limits).map_err(|e: DetectError| e.to_string())?;
    Ok(CensusRecord {
        name: name.to_string(),
        pd: pd.trim().to_string(),
        dim_q: report.dim_q,
        dim_f2: report.dim_f2,
        det: report.det,
        delta_support: report.delta_support,
        jones: report.jones.to_string(),
        alexander: report.alexander.to_string(),
        verdict: report.verdict.to_string(),
        compute_time_ms: start.elapsed().as_millis() as u64,
        toolkit_version: TOOLKIT_VERSION.to_string(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub records: usize,
    pub by_verdict: BTreeMap<String, usize>,
    /// `(name, reason)` for every skipped row.
    pub failures: Vec<(String, String)>,
}

pub fn read_inputs(path: &Path) -> Result<Vec<CensusInput>, CensusError> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    reader
        .deserialize()
        .collect::<Result<Vec<CensusInput>, _>>()
        .map_err(CensusError::from)
}

/// Computes a record per row on `parallelism` threads and appends the
/// successful ones to `output` in input order.
pub fn census_run(
    input: &Path,
    output: &Path,
    parallelism: usize,
    limits: &Limits,
) -> Result<CensusSummary, CensusError> {
    let rows = read_inputs(input)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    let results: Vec<Result<CensusRecord, String>> =
        pool.install(|| rows.par_iter().map(|r| compute_record(&r.name, &r.pd, limits)).collect());

    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(output)
        .map_err(io_err(output))?;
    let mut summary = CensusSummary::default();
    let mut buf = String::new();
    for (row, result) in rows.iter().zip(results) {
        match result {
            Ok(rec) => {
                debug_assert!(rec.det as usize <= rec.dim_q);
                buf.push_str(&serde_json::to_string(&rec).expect("record serializes"));
                buf.push('\n');
                *summary.by_verdict.entry(rec.verdict.clone()).or_insert(0) += 1;
                summary.records += 1;
            }
            Err(reason) => {
                log::warn!("skipping {}: {reason}", row.name);
                summary.failures.push((row.name.clone(), reason));
            }
        }
    }
    file.write_all(buf.as_bytes()).map_err(io_err(output))?;
    Ok(summary)
}

/// All records in a store, oldest first. A missing store reads as empty.
pub fn load_store(path: &Path) -> Result<Vec<CensusRecord>, CensusError> {
    if !path.exists() {
        return Ok(vec![]);
    }
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| CensusError::Store {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Int(i64),
    Str(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
enum Operand {
    Field(String),
    Literal(Value),
}

/// A conjunction of comparisons such as `dim_Q == det && verdict != NoVerdict`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filter {
    clauses: Vec<(Operand, Op, Operand)>,
}

const FIELDS: &[&str] = &[
    "name",
    "pd",
    "dim_Q",
    "dim_q",
    "dim_F2",
    "dim_f2",
    "det",
    "jones",
    "alexander",
    "verdict",
    "compute_time_ms",
    "toolkit_version",
    "delta_count",
];

fn operand(tok: &str) -> Operand {
    let t = tok.trim();
    if FIELDS.contains(&t) {
        return Operand::Field(t.to_string());
    }
    if let Ok(v) = t.parse::<i64>() {
        return Operand::Literal(Value::Int(v));
    }
    let unquoted = t
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .or_else(|| t.strip_prefix('\'').and_then(|s| s.strip_suffix('\'')))
        .unwrap_or(t);
    Operand::Literal(Value::Str(unquoted.to_string()))
}

impl Filter {
    pub fn parse(expr: &str) -> Result<Self, CensusError> {
        let mut clauses = Vec::new();
        if expr.trim().is_empty() {
            return Ok(Self { clauses });
        }
        for clause in expr.split("&&") {
            let ops = [
                ("==", Op::Eq),
                ("!=", Op::Ne),
                ("<=", Op::Le),
                (">=", Op::Ge),
                ("<", Op::Lt),
                (">", Op::Gt),
            ];
            let (pos, sym, op) = ops
                .iter()
                .filter_map(|&(sym, op)| clause.find(sym).map(|p| (p, sym, op)))
                .min_by_key(|&(p, sym, _)| (p, std::cmp::Reverse(sym.len())))
                .ok_or_else(|| CensusError::Filter(format!("no comparison in {clause:?}")))?;
            let (lhs, rhs) = (&clause[..pos], &clause[pos + sym.len()..]);
            if lhs.trim().is_empty() || rhs.trim().is_empty() {
                return Err(CensusError::Filter(format!("missing operand in {clause:?}")));
            }
            let (l, r) = (operand(lhs), operand(rhs));
            if !matches!(l, Operand::Field(_)) && !matches!(r, Operand::Field(_)) {
                return Err(CensusError::Filter(format!("no known field in {clause:?}")));
            }
            clauses.push((l, op, r));
        }
        Ok(Self { clauses })
    }

    pub fn matches(&self, rec: &CensusRecord) -> bool {
        let get = |o: &Operand| match o {
            Operand::Field(f) => rec.field(f).expect("known field"),
            Operand::Literal(v) => v.clone(),
        };
        self.clauses.iter().all(|(l, op, r)| {
            let ord = match (get(l), get(r)) {
                (Value::Int(a), Value::Int(b)) => a.cmp(&b),
                (Value::Str(a), Value::Str(b)) => a.cmp(&b),
                (Value::Int(a), Value::Str(b)) => a.to_string().cmp(&b),
                (Value::Str(a), Value::Int(b)) => a.cmp(&b.to_string()),
            };
            match op {
                Op::Eq => ord.is_eq(),
                Op::Ne => ord.is_ne(),
                Op::Lt => ord.is_lt(),
                Op::Le => ord.is_le(),
                Op::Gt => ord.is_gt(),
                Op::Ge => ord.is_ge(),
            }
        })
    }
}

pub fn census_query(store: &Path, filter: &str) -> Result<Vec<CensusRecord>, CensusError> {
    let f = Filter::parse(filter)?;
    Ok(load_store(store)?.into_iter().filter(|r| f.matches(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(name: &str, dim_q: usize, det: u64, verdict: &str) -> CensusRecord {
        CensusRecord {
            name: name.into(),
            pd: "PD[]".into(),
            dim_q,
            dim_f2: dim_q,
            det,
            delta_support: DeltaSupport::default(),
            jones: "1".into(),
            alexander: "1".into(),
            verdict: verdict.into(),
            compute_time_ms: 0,
            toolkit_version: TOOLKIT_VERSION.into(),
        }
    }

    #[test]
    fn filters() {
        let a = rec("4_1", 5, 5, "FigureEight");
        let b = rec("8_19", 5, 3, "NoVerdict");
        let f = Filter::parse("dim_Q == det").unwrap();
        assert!(f.matches(&a) && !f.matches(&b));
        let f = Filter::parse("dim_Q == 5 && det == 5").unwrap();
        assert!(f.matches(&a) && !f.matches(&b));
        let f = Filter::parse("verdict == FigureEight").unwrap();
        assert!(f.matches(&a) && !f.matches(&b));
        let f = Filter::parse("det<=3").unwrap();
        assert!(!f.matches(&a) && f.matches(&b));
        let f = Filter::parse("name != '4_1'").unwrap();
        assert!(!f.matches(&a) && f.matches(&b));
        assert!(Filter::parse("dim_Q").is_err());
        assert!(Filter::parse("1 == 1").is_err());
        assert!(Filter::parse("dim_Q == ").is_err());
    }

    #[test]
    fn record_round_trip() {
        let r = rec("3_1", 3, 3, "NoVerdict");
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"dim_Q\":3"));
        assert_eq!(serde_json::from_str::<CensusRecord>(&s).unwrap(), r);
    }
}
