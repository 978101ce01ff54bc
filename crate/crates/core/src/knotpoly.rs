//! Laurent-polynomial knot invariants.
//!
//! * `jones_from_kh`: the graded Euler characteristic of reduced Khovanov
//!   homology, `V(t) = Σ (-1)^h t^{q/2} dim Kh̄^{h,q}`.
//! * `alexander_fox`: Wirtinger presentation, Fox derivatives, one column
//!   deleted, determinant of the remaining minor, then normalized so that
//!   `Δ(t) = Δ(t^{-1})` and `Δ(1) = 1`.
//! * determinants from either polynomial, and `s` for thin homology.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigint_serde::JsonInt;
use crate::cyclotomic::IntPoly;
use crate::diagram::PlanarDiagram;
use crate::khovanov::BigradedDims;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("odd quantum grading {q} at h = {h}; reduced knot homology has even q")]
    OddQuantumGrading { h: i64, q: i64 },
    #[error("Alexander minor vanished identically for a knot diagram")]
    DegenerateMinor,
    #[error("Alexander polynomial has odd span {0}; cannot symmetrize")]
    OddSpan(i64),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Laurent polynomial in one variable with arbitrary-precision coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    pub fn from_terms<C: Into<BigInt> + Clone>(terms: &[(i64, C)]) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(*e, c.clone().into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Value at `t = x` for `x = ±1`.
    pub fn eval_unit(&self, x: i64) -> BigInt {
        assert!(x == 1 || x == -1);
        self.terms
            .iter()
            .map(|(e, c)| if x == -1 && e.rem_euclid(2) == 1 { -c } else { c.clone() })
            .sum()
    }

    /// `p(t^{-1})`
    pub fn invert_var(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_var()
    }

    /// Converts to an ordinary polynomial after multiplying by `t^{-min_exp}`.
    pub fn to_int_poly(&self) -> (IntPoly, i64) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        (IntPoly::new(coeffs), lo)
    }

    pub fn from_int_poly(p: &IntPoly, shift: i64) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(i as i64 + shift, c.clone());
        }
        out
    }

    /// Sorted `(exponent, coefficient)` pair list.
    pub fn to_pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c.clone())).collect()
    }

    /// Parses `2*t - 3 + 2*t^-1`, `t^2 - t + 1 - t^-1 + t^-2` and friends.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let s = text.trim();
        if s.starts_with('[') {
            let pairs: Vec<(i64, JsonInt)> =
                serde_json::from_str(s).map_err(|e| PolyError::Parse(e.to_string()))?;
            let mut p = Self::zero();
            for (e, c) in pairs {
                p.add_term(e, c.0);
            }
            return Ok(p);
        }
        let mut p = Self::zero();
        for (e, c) in parse_terms(s, 't').map_err(PolyError::Parse)? {
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigInt)> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        f.write_str(&format_terms(&terms, "t"))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, JsonInt)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, JsonInt(c.clone())))
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, JsonInt)>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (e, c) in pairs {
            p.add_term(e, c.0);
        }
        Ok(p)
    }
}

/// Formats terms given in display order as `2*t^2 - t + 1 - t^-1`.
pub(crate) fn format_terms(terms: &[(i64, BigInt)], var: &str) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match *e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

/// Parses a sum of terms `c*t^e` (with `*` optional and `^` exponents that
/// may be negative or parenthesized) into `(exponent, coefficient)` pairs.
pub(crate) fn parse_terms(text: &str, var: char) -> Result<Vec<(i64, BigInt)>, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    if s == "0" {
        return Ok(vec![]);
    }
    let chars: Vec<char> = s.chars().collect();
    let mut terms = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = BigInt::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(format!("expected '+' or '-' at offset {i}"));
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: BigInt = if i > start {
            chars[start..i].iter().collect::<String>().parse().unwrap()
        } else {
            BigInt::one()
        };
        let had_digits = i > start;
        if i < chars.len() && chars[i] == '*' {
            i += 1;
            if i >= chars.len() || chars[i] != var {
                return Err(format!("expected '{var}' after '*' at offset {i}"));
            }
        }
        let mut exp = 0i64;
        if i < chars.len() && chars[i] == var {
            i += 1;
            exp = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let paren = i < chars.len() && chars[i] == '(';
                if paren {
                    i += 1;
                }
                let es = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = chars[es..i].iter().collect();
                exp = txt
                    .parse()
                    .map_err(|_| format!("bad exponent {txt:?} at offset {es}"))?;
                if paren {
                    if i >= chars.len() || chars[i] != ')' {
                        return Err(format!("missing ')' at offset {i}"));
                    }
                    i += 1;
                }
            }
        } else if !had_digits {
            return Err(format!("expected a term at offset {start}"));
        }
        terms.push((exp, sign * coeff));
    }
    Ok(terms)
}

// ---------------------------------------------------------------------------
// Jones polynomial and determinants
// ---------------------------------------------------------------------------

/// `V(t) = Σ (-1)^h t^{q/2} dim Kh̄^{h,q}`.
pub fn jones_from_kh(dims: &BigradedDims) -> Result<LaurentPoly, PolyError> {
    let mut v = LaurentPoly::zero();
    for (&(h, q), &d) in dims.iter() {
        if q.rem_euclid(2) != 0 {
            return Err(PolyError::OddQuantumGrading { h, q });
        }
        let c = if h.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) };
        v.add_term(q / 2, BigInt::from(c));
    }
    Ok(v)
}

/// `|V(-1)|`
pub fn determinant_from_jones(v: &LaurentPoly) -> BigInt {
    v.eval_unit(-1).abs()
}

/// `|Δ(-1)|`
pub fn determinant_from_alexander(a: &LaurentPoly) -> BigInt {
    a.eval_unit(-1).abs()
}

/// `2σ` when the homology sits in the single δ-grading `σ`, else `None`.
pub fn s_from_thin(dims: &BigradedDims) -> Option<i64> {
    dims.delta_support().single().map(|sigma| 2 * sigma)
}

// ---------------------------------------------------------------------------
// Alexander polynomial via Fox calculus
// ---------------------------------------------------------------------------

/// A Wirtinger relation at one crossing, in terms of arc indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WirtingerRelation {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub positive: bool,
}

/// Arcs (generators) and one relation per crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WirtingerPresentation {
    pub arcs: usize,
    pub relations: Vec<WirtingerRelation>,
}

/// Arcs run from one undercrossing to the next. Edge `k` (the outgoing
/// under-edge of a crossing) starts a new arc; the incoming under-edge ends one.
pub fn wirtinger_presentation(d: &PlanarDiagram) -> WirtingerPresentation {
    let n_edges = d.edge_count();
    let crossings = d.crossings();
    // Edge labels are 1-based; edge e flows into e+1.
    let mut starts_arc = vec![false; n_edges + 1];
    for x in crossings {
        starts_arc[x.0[2] as usize] = true;
    }
    let mut arc_of = vec![usize::MAX; n_edges + 1];
    let first = (1..=n_edges).find(|&e| starts_arc[e]).unwrap_or(1);
    let mut arc = 0usize;
    for step in 0..n_edges {
        let e = (first - 1 + step) % n_edges + 1;
        if starts_arc[e] && step > 0 {
            arc += 1;
        }
        arc_of[e] = arc;
    }
    let arcs = if n_edges == 0 { 0 } else { arc + 1 };
    let relations = crossings
        .iter()
        .enumerate()
        .map(|(c, x)| WirtingerRelation {
            over: arc_of[x.0[1] as usize],
            under_in: arc_of[x.0[0] as usize],
            under_out: arc_of[x.0[2] as usize],
            positive: d.crossing_sign(c) > 0,
        })
        .collect();
    WirtingerPresentation { arcs, relations }
}

/// Abelianized Fox Jacobian, one row per relation, entries in `Z[t]`.
///
/// For a positive crossing the relator is `o·i·o⁻¹·k⁻¹`, giving
/// `∂/∂o = 1 - t`, `∂/∂i = t`, `∂/∂k = -1`. For a negative crossing the
/// relator is `o⁻¹·i·o·k⁻¹`; its row is multiplied by the unit `t` to stay
/// polynomial: `∂/∂o = t - 1`, `∂/∂i = 1`, `∂/∂k = -t`.
pub fn alexander_matrix(p: &WirtingerPresentation) -> Vec<Vec<IntPoly>> {
    let mut rows = Vec::with_capacity(p.relations.len());
    for r in &p.relations {
        let mut row = vec![IntPoly::zero(); p.arcs];
        let (o, i, k) = if r.positive {
            ([1, -1], [0, 1], [-1, 0])
        } else {
            ([-1, 1], [1, 0], [0, -1])
        };
        row[r.over] = &row[r.over] + &IntPoly::from_i64s(&o);
        row[r.under_in] = &row[r.under_in] + &IntPoly::from_i64s(&i);
        row[r.under_out] = &row[r.under_out] + &IntPoly::from_i64s(&k);
        rows.push(row);
    }
    rows
}

/// Fraction-free (Bareiss) determinant over `Z[t]`.
pub fn poly_determinant(mut m: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut sign = 1;
    let mut prev = IntPoly::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return IntPoly::zero();
        };
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss quotients are exact");
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -&det
    } else {
        det
    }
}

/// Symmetrizes exponents and fixes the sign so that `Δ(1) = 1`.
pub fn normalize_alexander(a: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    let (Some(lo), Some(hi)) = (a.min_exp(), a.max_exp()) else {
        return Err(PolyError::DegenerateMinor);
    };
    if (hi - lo) % 2 != 0 {
        return Err(PolyError::OddSpan(hi - lo));
    }
    let centered = a.shift(-(lo + hi) / 2);
    Ok(if centered.eval_unit(1).is_negative() {
        centered.neg()
    } else {
        centered
    })
}

/// Alexander polynomial from the Wirtinger presentation of `d`. The last
/// arc's column is deleted before taking the determinant.
pub fn alexander_fox(d: &PlanarDiagram) -> Result<LaurentPoly, PolyError> {
    if d.crossing_count() == 0 {
        return Ok(LaurentPoly::one());
    }
    let pres = wirtinger_presentation(d);
    let full = alexander_matrix(&pres);
    // n relations and n arcs; any one relation is a consequence of the others.
    let drop_col = pres.arcs - 1;
    let minor: Vec<Vec<IntPoly>> = full
        .iter()
        .take(pres.relations.len() - 1)
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != drop_col)
                .map(|(_, c)| c.clone())
                .collect()
        })
        .collect();
    let det = poly_determinant(minor);
    if det.is_zero() {
        return Err(PolyError::DegenerateMinor);
    }
    normalize_alexander(&LaurentPoly::from_int_poly(&det, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["2*t - 3 + 2*t^-1", "t^2 - t + 1 - t^-1 + t^-2", "1", "-t^4 + t^3 + t", "0"] {
            let p = LaurentPoly::parse(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p = LaurentPoly::parse("2t^(-1) + t").unwrap();
        assert_eq!(p, LaurentPoly::from_terms(&[(-1, 2), (1, 1)]));
        assert!(LaurentPoly::parse("2**t").is_err());
    }

    #[test]
    fn determinants_from_polys() {
        let a = LaurentPoly::parse("2*t - 3 + 2*t^-1").unwrap();
        assert_eq!(determinant_from_alexander(&a), 7.into());
        let a = LaurentPoly::parse("t^4 - t^3 + 1 - t^-3 + t^-4").unwrap();
        assert_eq!(determinant_from_alexander(&a), 5.into());
        assert_eq!(determinant_from_alexander(&LaurentPoly::one()), 1.into());
        let v = LaurentPoly::parse("t^2 - t + 1 - t^-1 + t^-2").unwrap();
        assert_eq!(determinant_from_jones(&v), 5.into());
        assert_eq!(determinant_from_jones(&LaurentPoly::one()), 1.into());
    }

    #[test]
    fn jones_rejects_odd_q() {
        let dims = BigradedDims::from_entries(crate::khovanov::Field::Rationals, [((0, 1), 1)]);
        assert_eq!(
            jones_from_kh(&dims),
            Err(PolyError::OddQuantumGrading { h: 0, q: 1 })
        );
    }

    #[test]
    fn jones_of_right_trefoil_dims() {
        let dims = BigradedDims::from_entries(
            crate::khovanov::Field::Rationals,
            [((0, 2), 1), ((2, 6), 1), ((3, 8), 1)],
        );
        let v = jones_from_kh(&dims).unwrap();
        assert_eq!(v, LaurentPoly::parse("-t^4 + t^3 + t").unwrap());
        assert_eq!(s_from_thin(&dims), Some(2));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let p = |c: &[i64]| IntPoly::from_i64s(c);
        let m = vec![
            vec![p(&[1, 1]), p(&[2]), p(&[0, 1])],
            vec![p(&[0]), p(&[1, -1]), p(&[3])],
            vec![p(&[1]), p(&[0, 0, 1]), p(&[-1])],
        ];
        // Cofactor expansion along the first row.
        let det2 = |a: &IntPoly, b: &IntPoly, c: &IntPoly, d: &IntPoly| &(a * d) - &(b * c);
        let e = &(&(&m[0][0] * &det2(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            - &(&m[0][1] * &det2(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
            + &(&m[0][2] * &det2(&m[1][0], &m[1][1], &m[2][0], &m[2][1]));
        assert_eq!(poly_determinant(m), e);
    }
}
