//! Reduced Khovanov homology of knots.
//!
//! Grading convention: for a resolution with `k` one-smoothings and a
//! labelling of its unmarked circles, `h = k - n₋` and
//! `q = #1 - #X + k + n₊ - 2n₋`. The reduced unknot sits at `(0, 0)` and the
//! right-handed trefoil at `(0,2), (2,6), (3,8)`, so positive knots have
//! positive `δ = q/2 - h`.
//!
//! The default method scans the diagram crossing by crossing and simplifies
//! as it goes (see [`scanner`]); [`Method::Naive`] builds the full cube.

mod cobordism;
mod cube;
mod ring;
mod scanner;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::exactlinalg::{ExactMatrix, ScalarDomain};

/// Largest characteristic accepted for 𝔽_p.
pub const MAX_PRIME: u64 = 97;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhovanovError {
    #[error("unsupported coefficient field: {0}")]
    Field(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Coefficient field: ℚ or 𝔽_p with `p ≤ 97` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, KhovanovError> {
        if p <= MAX_PRIME && crate::cyclotomic::is_prime_u64(p) {
            Ok(Self::Prime(p))
        } else {
            Err(KhovanovError::Field(format!("F{p}: need a prime p <= {MAX_PRIME}")))
        }
    }

    pub fn domain(self) -> ScalarDomain {
        match self {
            Self::Rationals => ScalarDomain::Rationals,
            Self::Prime(p) => ScalarDomain::PrimeField(p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => f.write_str("Q"),
            Self::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = KhovanovError;

    /// Accepts `Q` and `F<p>` (also `Fp` spelled `Z/p`), case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase();
        if t == "Q" || t == "QQ" {
            return Ok(Self::Rationals);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix("Z/"))
            .ok_or_else(|| KhovanovError::Field(s.to_string()))?;
        let p: u64 = digits.parse().map_err(|_| KhovanovError::Field(s.to_string()))?;
        Self::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dimensions of reduced Khovanov homology by `(h, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedDims {
    field: Field,
    dims: BTreeMap<(i64, i64), usize>,
}

impl BigradedDims {
    /// Zero dimensions are dropped.
    pub fn from_entries(field: Field, entries: impl IntoIterator<Item = ((i64, i64), usize)>) -> Self {
        let mut dims = BTreeMap::new();
        for (k, d) in entries {
            if d > 0 {
                *dims.entry(k).or_insert(0) += d;
            }
        }
        Self { field, dims }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &usize)> {
        self.dims.iter()
    }

    pub fn get(&self, h: i64, q: i64) -> usize {
        self.dims.get(&(h, q)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// `δ = q/2 - h` weighted by dimension. Odd `q` is rounded toward −∞.
    pub fn delta_support(&self) -> DeltaSupport {
        let mut m = BTreeMap::new();
        for (&(h, q), &d) in &self.dims {
            *m.entry(q.div_euclid(2) - h).or_insert(0) += d;
        }
        DeltaSupport(m)
    }

    /// Dimensions of the mirror knot: `(h, q) -> (-h, -q)`.
    pub fn mirror(&self) -> Self {
        Self::from_entries(self.field, self.dims.iter().map(|(&(h, q), &d)| ((-h, -q), d)))
    }

    /// `[[h, q, d], ...]` sorted lexicographically.
    pub fn triples(&self) -> Vec<[i64; 3]> {
        self.dims.iter().map(|(&(h, q), &d)| [h, q, d as i64]).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct DimsDoc {
    field: Field,
    dims: Vec<[i64; 3]>,
}

impl Serialize for BigradedDims {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DimsDoc {
            field: self.field,
            dims: self.triples(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigradedDims {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = DimsDoc::deserialize(d)?;
        let mut entries = Vec::with_capacity(doc.dims.len());
        for [h, q, n] in doc.dims {
            if n <= 0 {
                return Err(serde::de::Error::custom(format!("nonpositive dimension at ({h}, {q})")));
            }
            entries.push(((h, q), n as usize));
        }
        Ok(Self::from_entries(doc.field, entries))
    }
}

impl fmt::Display for BigradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.field)?;
        for (i, (&(h, q), &d)) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({h},{q}):{d}")?;
        }
        f.write_str("]")
    }
}

/// The multiset of δ-gradings, as `δ -> total dimension`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeltaSupport(pub BTreeMap<i64, usize>);

impl DeltaSupport {
    /// The δ-grading when there is exactly one.
    pub fn single(&self) -> Option<i64> {
        match self.0.len() {
            1 => self.0.keys().next().copied(),
            _ => None,
        }
    }

    /// Whether all δ-gradings have the same parity.
    pub fn single_parity(&self) -> bool {
        let mut parities = self.0.keys().map(|d| d.rem_euclid(2));
        match parities.next() {
            Some(p) => parities.all(|x| x == p),
            None => true,
        }
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &usize)> {
        self.0.iter()
    }
}

impl fmt::Display for DeltaSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}:{n}")?;
        }
        f.write_str("}")
    }
}

/// Resource caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_crossings: usize,
    /// Cap on simultaneously held generators.
    pub max_objects: usize,
    pub max_naive_crossings: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_crossings: 16,
            max_objects: 4_000_000,
            max_naive_crossings: 14,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    /// Crossing-by-crossing scan with delooping and cancellation.
    #[default]
    Scan,
    /// The full cube of resolutions.
    Naive,
}

/// A free complex with one generator per object, gradings before the global
/// shift, and scalar differential entries `(source, target, value)`.
pub(crate) struct ScalarComplex {
    pub objects: Vec<(i64, i64)>,
    pub entries: Vec<(usize, usize, BigRational)>,
}

fn check_limits(d: &PlanarDiagram, limits: &Limits) -> Result<(), KhovanovError> {
    if d.crossing_count() > limits.max_crossings {
        return Err(KhovanovError::Resource(format!(
            "{} crossings exceeds the cap of {}",
            d.crossing_count(),
            limits.max_crossings
        )));
    }
    Ok(())
}

fn scan_complex<R: ring::Ring>(r: &R, d: &PlanarDiagram, limits: &Limits) -> Result<ScalarComplex, KhovanovError> {
    let out = scanner::scan(r, d, limits)?;
    Ok(ScalarComplex {
        objects: out.objects,
        entries: out.entries.iter().map(|(s, t, v)| (*s, *t, r.to_rational(v))).collect(),
    })
}

fn build_complex(
    d: &PlanarDiagram,
    domain: ScalarDomain,
    method: Method,
    limits: &Limits,
) -> Result<ScalarComplex, KhovanovError> {
    check_limits(d, limits)?;
    match (method, domain) {
        (Method::Naive, _) => cube::cube_complex(d, limits),
        (Method::Scan, ScalarDomain::Rationals) => scan_complex(&ring::Rationals, d, limits),
        (Method::Scan, ScalarDomain::PrimeField(p)) => scan_complex(&ring::PrimeField(p), d, limits),
        (Method::Scan, ScalarDomain::Integers) => scan_complex(&ring::Integers, d, limits),
    }
}

/// One differential block `C^{h,q} -> C^{h+1,q}`.
struct Block {
    h: i64,
    q: i64,
    matrix: ExactMatrix,
}

/// Splits the complex into `(h, q)` summands; returns the summand sizes and
/// the nonzero differential blocks, all with the global shift applied.
fn blocks(
    cx: &ScalarComplex,
    d: &PlanarDiagram,
    domain: ScalarDomain,
) -> Result<(BTreeMap<(i64, i64), usize>, Vec<Block>), KhovanovError> {
    let (np, nn) = (d.positive_count() as i64, d.negative_count() as i64);
    let shift = |(h, q): (i64, i64)| (h - nn, q + np - 2 * nn);
    let mut sizes: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut local = Vec::with_capacity(cx.objects.len());
    for &o in &cx.objects {
        let k = shift(o);
        let n = sizes.entry(k).or_insert(0);
        local.push(*n);
        *n += 1;
    }
    let mut by_block: BTreeMap<(i64, i64), Vec<(usize, usize, &BigRational)>> = BTreeMap::new();
    for (s, t, v) in &cx.entries {
        let (ks, kt) = (shift(cx.objects[*s]), shift(cx.objects[*t]));
        if kt != (ks.0 + 1, ks.1) {
            return Err(KhovanovError::Internal(format!(
                "differential entry from {ks:?} to {kt:?} does not have bidegree (1, 0)"
            )));
        }
        by_block.entry(ks).or_default().push((local[*t], local[*s], v));
    }
    let mut out = Vec::with_capacity(by_block.len());
    for ((h, q), es) in by_block {
        let rows = sizes[&(h + 1, q)];
        let cols = sizes[&(h, q)];
        let mut m = ExactMatrix::zeros(rows, cols, domain);
        for (r, c, v) in es {
            let cur = m.get(r, c);
            m.set(r, c, cur + v)
                .map_err(|e| KhovanovError::Internal(e.to_string()))?;
        }
        out.push(Block { h, q, matrix: m });
    }
    Ok((sizes, out))
}

fn field_homology(cx: &ScalarComplex, d: &PlanarDiagram, field: Field) -> Result<BigradedDims, KhovanovError> {
    let (sizes, blocks) = blocks(cx, d, field.domain())?;
    let ranks: Vec<((i64, i64), usize)> = blocks
        .par_iter()
        .map(|b| {
            b.matrix
                .rank()
                .map(|r| ((b.h, b.q), r))
                .map_err(|e| KhovanovError::Internal(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let rank: BTreeMap<(i64, i64), usize> = ranks.into_iter().collect();
    let entries = sizes.iter().map(|(&(h, q), &n)| {
        let out = rank.get(&(h, q)).copied().unwrap_or(0);
        let inn = rank.get(&(h - 1, q)).copied().unwrap_or(0);
        ((h, q), n - out - inn)
    });
    Ok(BigradedDims::from_entries(field, entries))
}

/// Reduced Khovanov homology over `field` by the default scanning method.
pub fn homology_dims(d: &PlanarDiagram, field: Field) -> Result<BigradedDims, KhovanovError> {
    homology_dims_with(d, field, Method::Scan, &Limits::default())
}

pub fn homology_dims_with(
    d: &PlanarDiagram,
    field: Field,
    method: Method,
    limits: &Limits,
) -> Result<BigradedDims, KhovanovError> {
    let cx = build_complex(d, field.domain(), method, limits)?;
    field_homology(&cx, d, field)
}

/// Reduced Khovanov homology over ℤ: free ranks and torsion invariant
/// factors (those `> 1`) by grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralHomology {
    pub free: BigradedDims,
    #[serde(serialize_with = "graded_factors")]
    pub torsion: BTreeMap<(i64, i64), Vec<BigInt>>,
}

pub fn integral_homology(d: &PlanarDiagram, method: Method, limits: &Limits) -> Result<IntegralHomology, KhovanovError> {
    let cx = build_complex(d, ScalarDomain::Integers, method, limits)?;
    let (sizes, blocks) = blocks(&cx, d, ScalarDomain::Integers)?;
    let snfs: Vec<((i64, i64), Vec<BigInt>)> = blocks
        .par_iter()
        .map(|b| {
            b.matrix
                .smith_normal_form()
                .map(|f| ((b.h, b.q), f))
                .map_err(|e| KhovanovError::Internal(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let snf: BTreeMap<(i64, i64), Vec<BigInt>> = snfs.into_iter().collect();
    let rank = |k: (i64, i64)| snf.get(&k).map_or(0, |f| f.len());
    let free = BigradedDims::from_entries(
        Field::Rationals,
        sizes
            .iter()
            .map(|(&(h, q), &n)| ((h, q), n - rank((h, q)) - rank((h - 1, q)))),
    );
    let mut torsion = BTreeMap::new();
    for (&(h, q), factors) in &snf {
        let t: Vec<BigInt> = factors.iter().filter(|f| !f.is_one()).cloned().collect();
        if !t.is_empty() {
            torsion.insert((h + 1, q), t);
        }
    }
    Ok(IntegralHomology { free, torsion })
}

fn graded_factors<S: serde::Serializer>(m: &BTreeMap<(i64, i64), Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    use crate::bigint_serde::JsonInt;
    let v: Vec<(i64, i64, Vec<JsonInt>)> = m
        .iter()
        .map(|(&(h, q), f)| (h, q, f.iter().cloned().map(JsonInt).collect()))
        .collect();
    v.serialize(s)
}

fn graded_counts<S: serde::Serializer>(m: &BTreeMap<(i64, i64), usize>, s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<[i64; 3]> = m.iter().map(|(&(h, q), &n)| [h, q, n as i64]).collect();
    v.serialize(s)
}

/// Universal-coefficient comparison of ℚ and 𝔽_p dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldComparison {
    pub p: u64,
    pub dims_q: BigradedDims,
    pub dims_fp: BigradedDims,
    /// Number of invariant factors divisible by `p` in the torsion of each
    /// integral homology group.
    #[serde(serialize_with = "graded_counts")]
    pub p_torsion: BTreeMap<(i64, i64), usize>,
    pub torsion_count: usize,
    /// `dim_𝔽p(h,q) = dim_ℚ(h,q) + t_p(h,q) + t_p(h+1,q)` everywhere, and the
    /// totals differ by `2·torsion_count`.
    pub consistent: bool,
}

impl FieldComparison {
    pub fn dim_q(&self) -> usize {
        self.dims_q.total_dim()
    }

    pub fn dim_fp(&self) -> usize {
        self.dims_fp.total_dim()
    }
}

/// Computes dimensions over ℚ and 𝔽_p directly and the `p`-torsion of the
/// integral homology through Smith normal form, then checks that they fit
/// the universal coefficient theorem.
pub fn compare_fields(d: &PlanarDiagram, p: u64, limits: &Limits) -> Result<FieldComparison, KhovanovError> {
    let fp = Field::prime(p)?;
    let dims_q = homology_dims_with(d, Field::Rationals, Method::Scan, limits)?;
    let dims_fp = homology_dims_with(d, fp, Method::Scan, limits)?;
    let integral = integral_homology(d, Method::Scan, limits)?;
    let bp = BigInt::from(p);
    let mut p_torsion = BTreeMap::new();
    for (&k, factors) in &integral.torsion {
        let t = factors.iter().filter(|f| (*f % &bp).is_zero()).count();
        if t > 0 {
            p_torsion.insert(k, t);
        }
    }
    let torsion_count: usize = p_torsion.values().sum();
    let t = |h: i64, q: i64| p_torsion.get(&(h, q)).copied().unwrap_or(0);
    let mut gradings: Vec<(i64, i64)> = dims_q.iter().map(|(&k, _)| k).collect();
    gradings.extend(dims_fp.iter().map(|(&k, _)| k));
    gradings.extend(p_torsion.keys().map(|&(h, q)| (h - 1, q)));
    let pointwise = gradings
        .iter()
        .all(|&(h, q)| dims_fp.get(h, q) == dims_q.get(h, q) + t(h, q) + t(h + 1, q));
    let consistent = pointwise
        && integral.free == dims_q
        && dims_fp.total_dim() == dims_q.total_dim() + 2 * torsion_count;
    Ok(FieldComparison {
        p,
        dims_q,
        dims_fp,
        p_torsion,
        torsion_count,
        consistent,
    })
}
