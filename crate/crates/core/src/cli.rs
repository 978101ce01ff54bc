//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 parse error, 2 validation error, 3 resource limit,
//! 4 internal error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::census;
use crate::corpus::named_knot;
use crate::cyclotomic::{self, CycloError, IntPoly};
use crate::detector::{self, DetectError};
use crate::diagram::{parse_pd, DiagramError, PlanarDiagram};
use crate::khovanov::{self, Field, KhovanovError, Limits, Method};
use crate::knotpoly::{self, PolyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "knotkit", version, about = "Knot invariants from planar diagram codes")]
pub struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Refuse diagrams with more crossings than this.
    #[arg(long, global = true, default_value_t = 16)]
    pub max_crossings: usize,
    /// Cap on generators held at once.
    #[arg(long, global = true, default_value_t = 4_000_000)]
    pub max_objects: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Khovanov homology.
    Kh {
        /// PD text, JSON tuples, a table name such as 4_1, or @file.
        knot: String,
        /// Q or F<p> with p ≤ 97 prime.
        #[arg(long, default_value = "Q")]
        field: String,
        /// Use the full cube of resolutions.
        #[arg(long)]
        naive: bool,
    },
    /// Jones polynomial from Khovanov homology.
    Jones { knot: String },
    /// Alexander polynomial by Fox calculus.
    Alexander { knot: String },
    /// Determinant, computed from both the Jones and Alexander polynomials.
    Det { knot: String },
    /// Detection report.
    Detect { knot: String },
    /// Cyclotomic polynomial tools.
    Cyclo {
        #[command(subcommand)]
        command: CycloCommand,
    },
    /// Batch runs and queries.
    Census {
        #[command(subcommand)]
        command: CensusCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum CycloCommand {
    /// Φ_n.
    Phi { n: u64 },
    /// (Φ_n(1), Φ_n(-1)).
    SpecialValues { n: u64 },
    /// One root-squaring step of the polynomial in a file (or inline with @-less text).
    Graeffe { poly: String },
    /// Cyclotomic factorization of the polynomial in a file.
    Check { poly: String },
    /// Factor p_h for h = 1..=H and run the divisibility checks.
    ScanPh { h_max: u64 },
}

#[derive(Subcommand, Debug)]
pub enum CensusCommand {
    /// Compute a record per row of a `name,pd` CSV and append to the store.
    Run {
        input: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Print stored records matching a filter such as `dim_Q == det`.
    Query { store: PathBuf, filter: String },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        let code = match e {
            DiagramError::Syntax { .. } => EXIT_PARSE,
            _ => EXIT_VALIDATION,
        };
        Self::new(code, e)
    }
}

impl From<KhovanovError> for CliError {
    fn from(e: KhovanovError) -> Self {
        let code = match e {
            KhovanovError::Field(_) => EXIT_PARSE,
            KhovanovError::Resource(_) => EXIT_RESOURCE,
            KhovanovError::Internal(_) => EXIT_INTERNAL,
        };
        Self::new(code, e)
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        let code = match e {
            PolyError::Parse(_) => EXIT_PARSE,
            _ => EXIT_INTERNAL,
        };
        Self::new(code, e)
    }
}

impl From<DetectError> for CliError {
    fn from(e: DetectError) -> Self {
        match e {
            DetectError::Khovanov(k) => k.into(),
            DetectError::Poly(p) => p.into(),
            DetectError::Invariant(_) => Self::new(EXIT_INTERNAL, e),
        }
    }
}

impl From<CycloError> for CliError {
    fn from(e: CycloError) -> Self {
        let code = match e {
            CycloError::Parse(_) | CycloError::Domain(_) => EXIT_PARSE,
            _ => EXIT_INTERNAL,
        };
        Self::new(code, e)
    }
}

impl From<census::CensusError> for CliError {
    fn from(e: census::CensusError) -> Self {
        let code = match e {
            census::CensusError::Filter(_) | census::CensusError::Csv(_) | census::CensusError::Store { .. } => {
                EXIT_PARSE
            }
            _ => EXIT_INTERNAL,
        };
        Self::new(code, e)
    }
}

/// Reads `@path` arguments from disk; anything else is returned as is.
fn read_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

/// PD text, JSON tuples, `@file`, or a knot name.
pub fn load_knot(arg: &str) -> Result<PlanarDiagram, CliError> {
    let text = read_arg(arg)?;
    let t = text.trim();
    if t.starts_with("PD") || t.starts_with('[') {
        return Ok(parse_pd(t)?);
    }
    named_knot(t).ok_or_else(|| {
        CliError::new(
            EXIT_PARSE,
            format!("{t:?} is neither PD text, JSON tuples, nor a known knot name"),
        )
    })
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> String {
    if json {
        serde_json::to_string_pretty(value).expect("serializable output")
    } else {
        text()
    }
}

/// Runs a parsed command and returns its output text.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let limits = Limits {
        max_crossings: cli.max_crossings,
        max_objects: cli.max_objects,
        ..Limits::default()
    };
    let json = cli.json;
    match &cli.command {
        Command::Kh { knot, field, naive } => {
            let d = load_knot(knot)?;
            let field: Field = field.parse()?;
            let method = if *naive { Method::Naive } else { Method::Scan };
            let dims = khovanov::homology_dims_with(&d, field, method, &limits)?;
            Ok(emit(json, &dims, || {
                let mut s = format!("reduced Khovanov homology over {field}, total dimension {}\n", dims.total_dim());
                for (&(h, q), &n) in dims.iter() {
                    s.push_str(&format!("h = {h:>3}  q = {q:>3}  dim = {n}\n"));
                }
                s.push_str(&format!("δ-support {}", dims.delta_support()));
                s
            }))
        }
        Command::Jones { knot } => {
            let d = load_knot(knot)?;
            let dims = khovanov::homology_dims_with(&d, Field::Rationals, Method::Scan, &limits)?;
            let v = knotpoly::jones_from_kh(&dims)?;
            Ok(emit(json, &v, || format!("V(t) = {v}")))
        }
        Command::Alexander { knot } => {
            let d = load_knot(knot)?;
            let a = knotpoly::alexander_fox(&d)?;
            Ok(emit(json, &a, || format!("Δ(t) = {a}")))
        }
        Command::Det { knot } => {
            let d = load_knot(knot)?;
            let dims = khovanov::homology_dims_with(&d, Field::Rationals, Method::Scan, &limits)?;
            let from_jones = knotpoly::determinant_from_jones(&knotpoly::jones_from_kh(&dims)?);
            let from_alex = knotpoly::determinant_from_alexander(&knotpoly::alexander_fox(&d)?);
            if from_jones != from_alex {
                return Err(CliError::new(
                    EXIT_INTERNAL,
                    format!("|V(-1)| = {from_jones} but |Δ(-1)| = {from_alex}"),
                ));
            }
            let value = serde_json::json!({ "det": from_jones.to_string().parse::<u64>().ok() });
            Ok(emit(json, &value, || format!("det = {from_jones}")))
        }
        Command::Detect { knot } => {
            let d = load_knot(knot)?;
            let report = detector::detect(knot, &d, &limits)?;
            Ok(emit(json, &report, || {
                let mut s = format!(
                    "verdict: {}\ndim_Q = {}  dim_F2 = {}  det = {}\nδ-support {}\nV(t) = {}\nΔ(t) = {}\n",
                    report.verdict,
                    report.dim_q,
                    report.dim_f2,
                    report.det,
                    report.delta_support,
                    report.jones,
                    report.alexander
                );
                if let Some(sv) = report.s_thin {
                    s.push_str(&format!("s = {sv} (thin)\n"));
                }
                for f in &report.inferred_facts {
                    s.push_str(&format!("inferred: {} [{}]\n", f.claim, f.citation));
                }
                if let Some(c) = &report.caveat {
                    s.push_str(&format!("caveat: {c}\n"));
                }
                s.push_str(&format!("convention: {}", report.convention_note));
                s
            }))
        }
        Command::Cyclo { command } => run_cyclo(command, json),
        Command::Census { command } => match command {
            CensusCommand::Run { input, out, parallel } => {
                let summary = census::census_run(input, out, *parallel, &limits)?;
                Ok(emit(json, &summary, || {
                    let mut s = format!("{} records appended to {}\n", summary.records, out.display());
                    for (v, n) in &summary.by_verdict {
                        s.push_str(&format!("  {v}: {n}\n"));
                    }
                    for (name, why) in &summary.failures {
                        s.push_str(&format!("  skipped {name}: {why}\n"));
                    }
                    s.trim_end().to_string()
                }))
            }
            CensusCommand::Query { store, filter } => {
                let recs = census::census_query(store, filter)?;
                let lines: Vec<String> = recs
                    .iter()
                    .map(|r| serde_json::to_string(r).expect("record serializes"))
                    .collect();
                Ok(lines.join("\n"))
            }
        },
    }
}

fn read_poly(arg: &str) -> Result<IntPoly, CliError> {
    Ok(IntPoly::parse(&read_arg(arg)?)?)
}

fn run_cyclo(command: &CycloCommand, json: bool) -> Result<String, CliError> {
    match command {
        CycloCommand::Phi { n } => {
            if *n == 0 {
                return Err(CliError::new(EXIT_PARSE, "n must be at least 1"));
            }
            let p = cyclotomic::cyclotomic_poly(*n);
            Ok(emit(json, &p, || format!("Φ_{n}(t) = {p}")))
        }
        CycloCommand::SpecialValues { n } => {
            let v = cyclotomic::special_values(*n)?;
            Ok(emit(json, &v, || {
                format!("Φ_{n}(1) = {}  Φ_{n}(-1) = {}", v.at_one, v.at_minus_one)
            }))
        }
        CycloCommand::Graeffe { poly } => {
            let p = read_poly(poly)?;
            if !p.is_monic() || p.degree().unwrap_or(0) == 0 {
                return Err(CliError::new(EXIT_PARSE, "graeffe needs a monic polynomial of degree ≥ 1"));
            }
            let q = cyclotomic::graeffe_step(&p);
            Ok(emit(json, &q, || q.to_string()))
        }
        CycloCommand::Check { poly } => {
            let p = read_poly(poly)?;
            let f = cyclotomic::is_cyclotomic_product(&p);
            Ok(emit(json, &f, || {
                format!(
                    "{}: {}",
                    if f.is_product() { "cyclotomic product" } else { "not a cyclotomic product" },
                    f.describe()
                )
            }))
        }
        CycloCommand::ScanPh { h_max } => {
            let report = cyclotomic::verify_ph_family(*h_max)?;
            Ok(emit(json, &report, || {
                let mut s = String::new();
                for row in &report.rows {
                    let what = if row.is_product { "product" } else { "not a product" };
                    s.push_str(&format!("h={}: {what}: {}\n", row.h, row.factorization));
                }
                if report.counterexamples.is_empty() {
                    s.push_str("all checks passed");
                } else {
                    for c in &report.counterexamples {
                        s.push_str(&format!("counterexample: {c}\n"));
                    }
                }
                s.trim_end().to_string()
            }))
        }
    }
}

/// Parses `args`, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
