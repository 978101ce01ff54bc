//! Integer polynomials, cyclotomic polynomials and the `p_h` family.
//!
//! `IntPoly` is a dense polynomial with arbitrary-precision coefficients,
//! stored constant term first. On top of it this module provides:
//!
//! * `cyclotomic_poly`, built by exact division of `t^n - 1` by the
//!   cyclotomic factors of its proper divisors;
//! * `special_values`, the closed forms for `Φ_n(±1)` checked against direct
//!   evaluation;
//! * `graeffe_step`, one round of root squaring;
//! * `p_family` / `q_family`, the polynomials
//!   `p_h = t^{4h} - t^{4h-1} + t^{2h} - t + 1` and their root-squared partners;
//! * `is_cyclotomic_product`, a complete trial-division recognizer;
//! * `verify_ph_family`, which runs every divisibility statement about `p_h`
//!   for a range of `h` and reports counterexamples.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigint_serde::JsonInt;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("closed form and direct evaluation disagree for n = {n}: closed ({closed_one}, {closed_minus_one}) vs evaluated ({eval_one}, {eval_minus_one})")]
    Inconsistent {
        n: u64,
        closed_one: BigInt,
        closed_minus_one: BigInt,
        eval_one: BigInt,
        eval_minus_one: BigInt,
    },
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Dense integer polynomial, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds a polynomial from `(exponent, coefficient)` terms; repeated
    /// exponents are summed.
    pub fn from_terms(terms: &[(usize, i64)]) -> Self {
        let len = terms.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); len];
        for &(e, c) in terms {
            coeffs[e] += c;
        }
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// `t^n - 1`
    pub fn t_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// `p(-t)`
    pub fn negate_var(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::new(coeffs)
    }

    /// `p(t^k)` for `k >= 1`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `t^k * p(t)`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Splits `p(t) = p_e(t^2) + t * p_o(t^2)`.
    pub fn even_odd_parts(&self) -> (IntPoly, IntPoly) {
        let even = self.coeffs.iter().step_by(2).cloned().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (Self::new(even), Self::new(odd))
    }

    /// Division with remainder by a divisor whose leading coefficient is a unit.
    pub fn div_rem(&self, divisor: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let lead = divisor.leading()?;
        if !lead.abs().is_one() {
            return None;
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        let nonzero: Vec<(usize, &BigInt)> = divisor.coeffs[..dd]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for i in (0..quot.len()).rev() {
            let top = std::mem::take(&mut rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            let q = if lead.is_one() { top } else { -top };
            for &(j, c) in &nonzero {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient `self / divisor` over the integers, or `None` when the
    /// division leaves a remainder or a non-integral quotient.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let lead = divisor.leading()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(quot))
    }

    /// Coefficients as `i64`, when they all fit.
    fn small_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Parses either a coefficient list such as `[1, -1, 0, 1]` (constant term
    /// first) or an expression such as `t^4 - t^3 + 2*t - 1`.
    pub fn parse(text: &str) -> Result<IntPoly, CycloError> {
        let s = text.trim();
        if s.starts_with('[') {
            let items: Vec<JsonInt> =
                serde_json::from_str(s).map_err(|e| CycloError::Parse(e.to_string()))?;
            return Ok(Self::new(items.into_iter().map(|j| j.0).collect()));
        }
        let terms = crate::knotpoly::parse_terms(s, 't').map_err(CycloError::Parse)?;
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (e, c) in terms {
            let e = usize::try_from(e)
                .map_err(|_| CycloError::Parse(format!("negative exponent {e}")))?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c;
        }
        Ok(Self::new(coeffs))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as i64, c.clone()))
            .collect();
        f.write_str(&crate::knotpoly::format_terms(&terms, "t"))
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let items: Vec<JsonInt> = self.coeffs.iter().cloned().map(JsonInt).collect();
        items.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<JsonInt>::deserialize(d)?;
        Ok(IntPoly::new(items.into_iter().map(|j| j.0).collect()))
    }
}

// ---------------------------------------------------------------------------
// Elementary number theory
// ---------------------------------------------------------------------------

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn radical(n: u64) -> u64 {
    factorize(n).into_iter().map(|(p, _)| p).product()
}

/// The prime `p` when `n = p^e` with `e >= 1`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    match factorize(n).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

fn squarefree_cyclotomic(m: u64, memo: &mut HashMap<u64, IntPoly>) -> IntPoly {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    // Φ_m = (t^m - 1) / Π_{d | m, d < m} Φ_d. Dividing by the largest
    // divisors first shrinks the dividend fastest.
    let mut acc = IntPoly::t_pow_minus_one(m as usize);
    for &d in divisors(m).iter().rev().skip(1) {
        let phi_d = squarefree_cyclotomic(d, memo);
        let (q, r) = acc.div_rem(&phi_d).expect("cyclotomic polynomials are monic");
        debug_assert!(r.is_zero());
        acc = q;
    }
    memo.insert(m, acc.clone());
    acc
}

/// `Φ_n(t)` for `n >= 1`.
///
/// The squarefree kernel `m = rad(n)` is computed by iterated exact division of
/// `t^m - 1`; the general case follows from `Φ_n(t) = Φ_m(t^{n/m})`.
pub fn cyclotomic_poly(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic_poly needs n >= 1");
    let m = radical(n);
    let mut memo = HashMap::new();
    squarefree_cyclotomic(m, &mut memo).compose_power((n / m) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialValues {
    #[serde(with = "crate::bigint_serde")]
    pub at_one: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub at_minus_one: BigInt,
}

fn closed_form_at_one(n: u64) -> BigInt {
    match n {
        1 => BigInt::zero(),
        _ => BigInt::from(prime_power_base(n).unwrap_or(1)),
    }
}

/// `(Φ_n(1), Φ_n(-1))` from the closed form, cross-checked against direct
/// evaluation of `cyclotomic_poly(n)`.
pub fn special_values(n: u64) -> Result<SpecialValues, CycloError> {
    if n < 2 {
        return Err(CycloError::Domain(format!("special_values needs n >= 2, got {n}")));
    }
    let closed_one = closed_form_at_one(n);
    let closed_minus_one = if n % 2 == 1 {
        BigInt::one()
    } else {
        closed_form_at_one(n / 2)
    };
    let phi = cyclotomic_poly(n);
    let eval_one = phi.eval_i64(1);
    let eval_minus_one = phi.eval_i64(-1);
    if closed_one != eval_one || closed_minus_one != eval_minus_one {
        return Err(CycloError::Inconsistent {
            n,
            closed_one,
            closed_minus_one,
            eval_one,
            eval_minus_one,
        });
    }
    Ok(SpecialValues {
        at_one: closed_one,
        at_minus_one: closed_minus_one,
    })
}

/// One Graeffe root-squaring step: `(-1)^d (p_e(t)^2 - t p_o(t)^2)`.
pub fn graeffe_step(p: &IntPoly) -> IntPoly {
    let d = p.degree().unwrap_or(0);
    let (even, odd) = p.even_odd_parts();
    let q = &(&even * &even) - &(&odd * &odd).shift(1);
    if d % 2 == 1 {
        -&q
    } else {
        q
    }
}

/// `p_h(t) = t^{4h} - t^{4h-1} + t^{2h} - t + 1`
pub fn p_family(h: usize) -> IntPoly {
    assert!(h >= 1);
    IntPoly::from_terms(&[(4 * h, 1), (4 * h - 1, -1), (2 * h, 1), (1, -1), (0, 1)])
}

/// `q_h(t) = t^{4h} - t^{4h-1} + 2t^{3h} + t^{2h} + 2t^h - t + 1`
pub fn q_family(h: usize) -> IntPoly {
    assert!(h >= 1);
    IntPoly::from_terms(&[
        (4 * h, 1),
        (4 * h - 1, -1),
        (3 * h, 2),
        (2 * h, 1),
        (h, 2),
        (1, -1),
        (0, 1),
    ])
}

// ---------------------------------------------------------------------------
// Cyclotomic-product recognition
// ---------------------------------------------------------------------------

/// Cyclotomic factors `(n, multiplicity)` together with the cofactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloFactorization {
    pub factors: Vec<(u64, u32)>,
    pub remainder: IntPoly,
}

impl CycloFactorization {
    pub fn is_product(&self) -> bool {
        self.remainder.is_one()
    }

    /// `Π Φ_n^mult × remainder`.
    pub fn expand(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(self.remainder.clone(), |acc, &(n, k)| {
                &acc * &cyclotomic_poly(n).pow(k)
            })
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(n, k)| match k {
                1 => format!("Φ_{n}"),
                _ => format!("Φ_{n}^{k}"),
            })
            .collect();
        if !self.remainder.is_one() {
            parts.push(format!("({})", self.remainder));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A candidate index `n` with a prime `ell ≡ 1 (mod n)` and a primitive
/// `n`-th root of unity `omega` in `F_ell`, used to discard non-divisors
/// cheaply: `Φ_n | p` forces `p(omega) ≡ 0 (mod ell)`.
#[derive(Clone, Debug)]
struct Candidate {
    n: u64,
    phi: u64,
    ell: u64,
    omega: u64,
}

impl Candidate {
    fn new(n: u64, phi: u64) -> Self {
        let mut ell = n + 1;
        while !is_prime_u64(ell) {
            ell += n;
        }
        let prime_factors: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
        let omega = (2..)
            .map(|x| pow_mod(x, (ell - 1) / n, ell))
            .find(|&w| w != 0 && prime_factors.iter().all(|&q| pow_mod(w, n / q, ell) != 1))
            .expect("F_ell has primitive n-th roots when n | ell - 1");
        Candidate { n, phi, ell, omega }
    }

    fn may_divide(&self, small: &[i64]) -> bool {
        let ell = self.ell as i128;
        let acc = small.iter().rev().fold(0u64, |acc, &c| {
            let c = (c as i128).rem_euclid(ell) as u64;
            (mul_mod(acc, self.omega, self.ell) + c) % self.ell
        });
        acc == 0
    }
}

/// Every `n` with `φ(n) <= max_degree`. Since `φ(n) >= sqrt(n/2)`, all such
/// `n` satisfy `n <= 2·max_degree²`, which bounds the sieve.
fn candidates_up_to_degree(max_degree: u64) -> Vec<Candidate> {
    let bound = (2 * max_degree * max_degree).max(2) as usize;
    let mut phi: Vec<u64> = (0..=bound as u64).collect();
    for i in 2..=bound {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= bound {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    (1..=bound)
        .filter(|&n| phi[n] <= max_degree)
        .map(|n| Candidate::new(n as u64, phi[n]))
        .collect()
}

fn factor_against(p: &IntPoly, candidates: &[Candidate]) -> CycloFactorization {
    let not_product = |p: &IntPoly| CycloFactorization {
        factors: vec![],
        remainder: p.clone(),
    };
    let Some(deg) = p.degree() else {
        return not_product(p);
    };
    if deg == 0 {
        return not_product(p);
    }
    let small = p.small_coeffs();
    let mut remainder = p.clone();
    let mut factors = Vec::new();
    let mut memo = HashMap::new();
    for cand in candidates {
        let rdeg = remainder.degree().unwrap_or(0) as u64;
        if cand.phi > rdeg {
            continue;
        }
        if let Some(small) = &small {
            if !cand.may_divide(small) {
                continue;
            }
        }
        let m = radical(cand.n);
        let phi_n = squarefree_cyclotomic(m, &mut memo).compose_power((cand.n / m) as usize);
        let mut mult = 0u32;
        while let Some((q, r)) = remainder.div_rem(&phi_n) {
            if !r.is_zero() {
                break;
            }
            remainder = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((cand.n, mult));
        }
        if remainder.degree() == Some(0) {
            break;
        }
    }
    CycloFactorization { factors, remainder }
}

/// Complete cyclotomic factorization of `p` by trial division with every
/// `Φ_n` of degree `φ(n) <= deg p`. `p` is a product of cyclotomic
/// polynomials iff the returned remainder is `1`.
pub fn is_cyclotomic_product(p: &IntPoly) -> CycloFactorization {
    let deg = p.degree().unwrap_or(0) as u64;
    factor_against(p, &candidates_up_to_degree(deg))
}

// ---------------------------------------------------------------------------
// Verification of the divisibility lemmas for p_h
// ---------------------------------------------------------------------------

/// Results of every check for one value of `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhCheck {
    pub h: u64,
    pub factorization: String,
    pub factors: Vec<(u64, u32)>,
    pub is_product: bool,
    /// No `Φ_n` with `n` odd divides `p_h`.
    pub no_odd_factor: bool,
    /// Every `Φ_n | p_h` with `n ≡ 2 (mod 4)` is `Φ_10`, and only for `h ≡ 1, 2 (mod 5)`.
    pub two_mod_four_ok: bool,
    /// When `p_h` is a product: `Φ_10` once times `Φ_n` with `4 | n`, none a power of two.
    pub product_shape_ok: bool,
    /// `p_h` is a product exactly when `h ∈ {1, 2}`.
    pub product_iff_small: bool,
    pub phi10_divides: bool,
    pub graeffe_gives_q: bool,
}

impl PhCheck {
    pub fn passed(&self) -> bool {
        self.no_odd_factor
            && self.two_mod_four_ok
            && self.product_shape_ok
            && self.product_iff_small
            && self.graeffe_gives_q
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhFamilyReport {
    pub h_max: u64,
    pub rows: Vec<PhCheck>,
    pub products_at: Vec<u64>,
    pub counterexamples: Vec<String>,
    /// Whether `Φ_10 | p_h ⟺ h ≡ 1, 2 (mod 5)` held for every checked `h`.
    /// Only the forward direction is a proven statement; the converse is an
    /// observation over the checked range.
    pub phi10_iff_h_mod5_observed: bool,
}

impl PhFamilyReport {
    pub fn all_passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn check_one_h(h: u64, candidates: &[Candidate]) -> PhCheck {
    let p = p_family(h as usize);
    let fact = factor_against(&p, candidates);
    let is_product = fact.is_product();
    let h_mod5_ok = matches!(h % 5, 1 | 2);
    let no_odd_factor = fact.factors.iter().all(|&(n, _)| n % 2 == 0);
    let two_mod_four_ok = fact
        .factors
        .iter()
        .filter(|&&(n, _)| n % 4 == 2)
        .all(|&(n, _)| n == 10 && h_mod5_ok);
    let product_shape_ok = !is_product || {
        let tens: u32 = fact.factors.iter().filter(|f| f.0 == 10).map(|f| f.1).sum();
        tens == 1
            && fact
                .factors
                .iter()
                .filter(|f| f.0 != 10)
                .all(|&(n, _)| n % 4 == 0 && !n.is_power_of_two())
    };
    let product_iff_small = is_product == (h <= 2);
    let phi10_divides = fact.factors.iter().any(|f| f.0 == 10);
    let graeffe_gives_q = graeffe_step(&p) == q_family(h as usize);
    PhCheck {
        h,
        factorization: fact.describe(),
        factors: fact.factors,
        is_product,
        no_odd_factor,
        two_mod_four_ok,
        product_shape_ok,
        product_iff_small,
        phi10_divides,
        graeffe_gives_q,
    }
}

/// Runs every divisibility check on `p_h` for `1 <= h <= h_max`.
/// A failed check is reported as a counterexample, never as an error.
pub fn verify_ph_family(h_max: u64) -> Result<PhFamilyReport, CycloError> {
    if h_max < 1 {
        return Err(CycloError::Domain("h_max must be at least 1".into()));
    }
    let candidates = candidates_up_to_degree(4 * h_max);
    let rows: Vec<PhCheck> = (1..=h_max)
        .into_par_iter()
        .map(|h| {
            let usable: Vec<Candidate> = candidates
                .iter()
                .filter(|c| c.phi <= 4 * h)
                .cloned()
                .collect();
            check_one_h(h, &usable)
        })
        .collect();
    let mut counterexamples = Vec::new();
    for r in rows.iter().filter(|r| !r.passed()) {
        counterexamples.push(format!("h={}: {:?}", r.h, r));
    }
    let products_at = rows.iter().filter(|r| r.is_product).map(|r| r.h).collect();
    let phi10_iff_h_mod5_observed = rows
        .iter()
        .all(|r| r.phi10_divides == matches!(r.h % 5, 1 | 2));
    Ok(PhFamilyReport {
        h_max,
        rows,
        products_at,
        counterexamples,
        phi10_iff_h_mod5_observed,
    })
}
