//! Detection reports: computes the Khovanov-level invariants of a knot and
//! matches them against known detection results.
//!
//! Rules are tried in a fixed order and the first match wins:
//! 1. `dim_ℚ = 5`, single δ = 0: the figure-eight knot.
//! 2. `dim_ℚ = 5`, single δ = ±2: the cinquefoil `T(±2,5)`.
//! 3. `dim_ℚ = 5`, any other single δ: no knot has this homology.
//! 4. `dim_𝔽₂ = 5`, `det = 5`, several δ of one parity: the hyperbolic
//!    genus-4 profile, whose further properties are reported as inferred.
//! 5. Alexander polynomial of a nearly fibered knot: candidate narrowing.
//! 6. Otherwise no verdict.
//!
//! Conclusions that rest on instanton Floer homology cannot be computed here;
//! they appear only in `inferred_facts`, each with a citation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::khovanov::{self, BigradedDims, DeltaSupport, Field, KhovanovError, Limits, Method};
use crate::knotpoly::{self, LaurentPoly, PolyError};

#[derive(Debug, Error)]
pub enum DetectError {
    #[error(transparent)]
    Khovanov(#[from] KhovanovError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("report violates its invariants: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "candidates")]
pub enum Verdict {
    FigureEight,
    CinquefoilPositive,
    CinquefoilNegative,
    ImpossibleByThinness,
    MainOtherProfile,
    NearlyFiberedCandidates(Vec<String>),
    NoVerdict,
}

impl Verdict {
    /// The verdict for the mirror knot.
    pub fn mirrored(&self) -> Self {
        match self {
            Self::CinquefoilPositive => Self::CinquefoilNegative,
            Self::CinquefoilNegative => Self::CinquefoilPositive,
            v => v.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::FigureEight => "FigureEight",
            Self::CinquefoilPositive => "CinquefoilPositive",
            Self::CinquefoilNegative => "CinquefoilNegative",
            Self::ImpossibleByThinness => "ImpossibleByThinness",
            Self::MainOtherProfile => "MainOtherProfile",
            Self::NearlyFiberedCandidates(_) => "NearlyFiberedCandidates",
            Self::NoVerdict => "NoVerdict",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NearlyFiberedCandidates(c) => write!(f, "NearlyFiberedCandidates[{}]", c.join(", ")),
            v => f.write_str(v.name()),
        }
    }
}

/// A claim that follows from a cited theorem rather than from computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferredFact {
    pub claim: String,
    pub citation: String,
}

fn fact(claim: impl Into<String>, citation: &str) -> InferredFact {
    InferredFact {
        claim: claim.into(),
        citation: citation.to_string(),
    }
}

const CITE_FIGURE_EIGHT: &str =
    "Khovanov detection of the figure-eight knot: reduced Kh of dimension 5 in δ-grading 0";
const CITE_CINQUEFOIL: &str =
    "Khovanov detection of T(±2,5): reduced Kh of dimension 5 in the single δ-grading ±2";
const CITE_THIN_S: &str = "for δ-thin knots with δ = σ the Rasmussen invariant is s = 2σ";
const CITE_THIN_GENUS: &str = "a 5-dimensional δ-thin knot has Seifert genus |σ|, forcing σ ∈ {0, ±2}";
const CITE_GENUS_FOUR: &str =
    "classification of knots with 5-dimensional reduced Kh over 𝔽₂, determinant 5 and several δ-gradings";
const CITE_NEARLY_FIBERED: &str =
    "classification of nearly fibered knots by Alexander polynomial, with dim KHI(K,1) = 2";

/// The candidate list of the nearly fibered narrowing, which is only valid
/// under a hypothesis this toolkit cannot check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateList {
    pub candidates: Vec<String>,
    pub caveat: String,
}

const NEARLY_FIBERED_CAVEAT: &str = "candidates are consistent with, not detected by, the computed \
invariants: the narrowing assumes dim KHI(K,1) = 2, which is not computed here; knots are listed up to mirror";

/// Nearly fibered knots by Alexander polynomial, with their reduced Khovanov
/// dimension over ℚ.
const NEARLY_FIBERED: &[(&str, &[(&str, usize)])] = &[
    (
        "2*t - 3 + 2*t^-1",
        &[("5_2", 7), ("15n_43522", 17), ("16n_696530", 25)],
    ),
    ("-2*t + 5 - 2*t^-1", &[("P(-3,3,2n+1)", 9), ("15n_115646", 23)]),
];

/// Nearly fibered candidates with Alexander polynomial `alex` and Khovanov
/// dimension `dim_q`. Empty when `alex` matches no profile.
pub fn narrow_candidates(alex: &LaurentPoly, dim_q: usize) -> CandidateList {
    let mut candidates = Vec::new();
    for (profile, knots) in NEARLY_FIBERED {
        if LaurentPoly::parse(profile).expect("static profile") == *alex {
            candidates.extend(
                knots
                    .iter()
                    .filter(|(_, d)| *d == dim_q)
                    .map(|(n, _)| format!("{n} (up to mirror)")),
            );
        }
    }
    CandidateList {
        candidates,
        caveat: NEARLY_FIBERED_CAVEAT.to_string(),
    }
}

pub fn is_nearly_fibered_profile(alex: &LaurentPoly) -> bool {
    NEARLY_FIBERED
        .iter()
        .any(|(p, _)| LaurentPoly::parse(p).expect("static profile") == *alex)
}

pub const CONVENTION_NOTE: &str = "δ = q/2 - h with the right-handed trefoil at δ = +1 and the \
positive cinquefoil T(2,5) at δ = +2; tables using the opposite chirality convention see δ, s and \
the Cinquefoil verdicts flipped";

/// Computed invariants a verdict is drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub dims_q: BigradedDims,
    pub dims_f2: BigradedDims,
    pub alexander: LaurentPoly,
    pub det: u64,
}

impl Invariants {
    pub fn compute(d: &PlanarDiagram, limits: &Limits) -> Result<Self, DetectError> {
        let dims_q = khovanov::homology_dims_with(d, Field::Rationals, Method::Scan, limits)?;
        let dims_f2 = khovanov::homology_dims_with(d, Field::Prime(2), Method::Scan, limits)?;
        let alexander = knotpoly::alexander_fox(d)?;
        let det = knotpoly::determinant_from_alexander(&alexander);
        let det = u64::try_from(det).map_err(|e| DetectError::Invariant(e.to_string()))?;
        Ok(Self {
            dims_q,
            dims_f2,
            alexander,
            det,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub name: String,
    pub pd: String,
    pub dim_q: usize,
    pub dim_f2: usize,
    pub delta_support: DeltaSupport,
    pub det: u64,
    pub jones: LaurentPoly,
    pub alexander: LaurentPoly,
    pub s_thin: Option<i64>,
    pub verdict: Verdict,
    pub inferred_facts: Vec<InferredFact>,
    pub caveat: Option<String>,
    pub convention_note: String,
}

impl DetectionReport {
    /// Checks the report's type invariants.
    pub fn check(&self) -> Result<(), String> {
        let single = self.delta_support.single();
        match self.verdict {
            Verdict::FigureEight if self.dim_q != 5 || single != Some(0) => {
                return Err(format!("FigureEight with dim {} and δ {}", self.dim_q, self.delta_support));
            }
            Verdict::CinquefoilPositive if self.dim_q != 5 || single != Some(2) => {
                return Err(format!("CinquefoilPositive with dim {} and δ {}", self.dim_q, self.delta_support));
            }
            Verdict::CinquefoilNegative if self.dim_q != 5 || single != Some(-2) => {
                return Err(format!("CinquefoilNegative with dim {} and δ {}", self.dim_q, self.delta_support));
            }
            Verdict::NearlyFiberedCandidates(_) if self.caveat.is_none() => {
                return Err("candidate list without its caveat".into());
            }
            _ => {}
        }
        if let Some(f) = self.inferred_facts.iter().find(|f| f.citation.trim().is_empty()) {
            return Err(format!("inferred fact without citation: {}", f.claim));
        }
        Ok(())
    }
}

/// Applies the detection rules to precomputed invariants.
pub fn classify(name: &str, pd: &str, inv: &Invariants) -> Result<DetectionReport, DetectError> {
    let delta = inv.dims_q.delta_support();
    let dim_q = inv.dims_q.total_dim();
    let dim_f2 = inv.dims_f2.total_dim();
    let jones = knotpoly::jones_from_kh(&inv.dims_q)?;
    let s_thin = knotpoly::s_from_thin(&inv.dims_q);
    let mut facts = Vec::new();
    let mut caveat = None;

    let verdict = match (dim_q, delta.single()) {
        (5, Some(0)) => {
            facts.push(fact("K is the figure-eight knot", CITE_FIGURE_EIGHT));
            facts.push(fact("s(K) = 0", CITE_THIN_S));
            Verdict::FigureEight
        }
        (5, Some(sigma)) if sigma.abs() == 2 => {
            let (verdict, name) = if sigma > 0 {
                (Verdict::CinquefoilPositive, "T(2,5)")
            } else {
                (Verdict::CinquefoilNegative, "T(-2,5)")
            };
            facts.push(fact(format!("K is the torus knot {name}"), CITE_CINQUEFOIL));
            facts.push(fact(format!("s(K) = {}", 2 * sigma), CITE_THIN_S));
            verdict
        }
        (5, Some(sigma)) => {
            facts.push(fact(format!("s(K) would be {}", 2 * sigma), CITE_THIN_S));
            facts.push(fact(
                format!("genus |σ| = {} is incompatible with a 5-dimensional thin knot", sigma.abs()),
                CITE_THIN_GENUS,
            ));
            Verdict::ImpossibleByThinness
        }
        _ if dim_f2 == 5 && inv.det == 5 && delta.single().is_none() && delta.single_parity() => {
            for claim in [
                "Seifert genus 4",
                "Alexander polynomial t^4 - t^3 + 1 - t^-3 + t^-4",
                "fibered",
                "strongly quasipositive up to mirror",
                "signature ±8",
                "hyperbolic",
            ] {
                facts.push(fact(claim, CITE_GENUS_FOUR));
            }
            Verdict::MainOtherProfile
        }
        _ if is_nearly_fibered_profile(&inv.alexander) => {
            let list = narrow_candidates(&inv.alexander, dim_q);
            facts.push(fact("K is nearly fibered of genus 1 (if dim KHI(K,1) = 2)", CITE_NEARLY_FIBERED));
            caveat = Some(list.caveat);
            Verdict::NearlyFiberedCandidates(list.candidates)
        }
        _ => Verdict::NoVerdict,
    };

    let report = DetectionReport {
        name: name.to_string(),
        pd: pd.to_string(),
        dim_q,
        dim_f2,
        delta_support: delta,
        det: inv.det,
        jones,
        alexander: inv.alexander.clone(),
        s_thin,
        verdict,
        inferred_facts: facts,
        caveat,
        convention_note: CONVENTION_NOTE.to_string(),
    };
    report.check().map_err(DetectError::Invariant)?;
    Ok(report)
}

/// Computes all invariants of `d` and applies the detection rules.
pub fn detect(name: &str, d: &PlanarDiagram, limits: &Limits) -> Result<DetectionReport, DetectError> {
    let inv = Invariants::compute(d, limits)?;
    classify(name, &d.to_pd_string(), &inv)
}
