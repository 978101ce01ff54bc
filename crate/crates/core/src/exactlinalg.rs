//! Exact sparse linear algebra over ℚ, 𝔽_p and ℤ.
//!
//! Ranks over ℚ use fraction-free row elimination on integer rows (each row
//! kept primitive by dividing out its content); ranks over 𝔽_p use modular
//! arithmetic in `u64`. Smith normal form first eliminates unit pivots
//! sparsely and then finishes the (usually tiny) remainder densely.
//! Pivots are chosen by the Markowitz cost `(row_nnz - 1) * (col_nnz - 1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a field; rank needs ℚ or 𝔽_p")]
    NotAField(ScalarDomain),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("entry {value} at ({row}, {col}) is not an integer")]
    NotIntegral { row: usize, col: usize, value: String },
    #[error("index ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
}

/// Scalar domain of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarDomain {
    Rationals,
    PrimeField(u64),
    Integers,
}

impl ScalarDomain {
    pub fn prime_field(p: u64) -> Result<Self, LinalgError> {
        if crate::cyclotomic::is_prime_u64(p) && p < (1 << 31) {
            Ok(Self::PrimeField(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => f.write_str("Q"),
            Self::PrimeField(p) => write!(f, "F{p}"),
            Self::Integers => f.write_str("Z"),
        }
    }
}

/// Sparse matrix with canonical entries: no stored zeros, entries reduced
/// into `0..p` over 𝔽_p, integral over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    domain: ScalarDomain,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, domain: ScalarDomain) -> Self {
        Self {
            rows,
            cols,
            domain,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, domain: ScalarDomain) -> Self {
        let mut m = Self::zeros(n, n, domain);
        for i in 0..n {
            m.entries.insert((i, i), BigRational::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>], domain: ScalarDomain) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols, domain);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(v.into())).expect("in bounds");
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> ScalarDomain {
        self.domain
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> BigRational {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &BigRational)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    /// Sets an entry, reducing it into the matrix's domain.
    pub fn set(&mut self, row: usize, col: usize, value: BigRational) -> Result<(), LinalgError> {
        if row >= self.rows || col >= self.cols {
            return Err(LinalgError::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let v = match self.domain {
            ScalarDomain::Rationals => value,
            ScalarDomain::Integers => {
                if !value.is_integer() {
                    return Err(LinalgError::NotIntegral {
                        row,
                        col,
                        value: value.to_string(),
                    });
                }
                value
            }
            ScalarDomain::PrimeField(p) => {
                let p = BigInt::from(p);
                let num = value.numer().mod_floor(&p);
                let den = value.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(LinalgError::NotIntegral {
                        row,
                        col,
                        value: format!("{value} (denominator divisible by {p})"),
                    });
                }
                let inv = den.modpow(&(&p - 2u32), &p);
                BigRational::from_integer((num * inv).mod_floor(&p))
            }
        };
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            domain: self.domain,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    /// Reorders rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            domain: self.domain,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((row_perm[r], col_perm[c]), v.clone()))
                .collect(),
        }
    }

    /// The same entries read in another domain.
    pub fn with_domain(&self, domain: ScalarDomain) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(self.rows, self.cols, domain);
        for (&(r, c), v) in &self.entries {
            m.set(r, c, v.clone())?;
        }
        Ok(m)
    }

    /// Exact rank over a field domain.
    pub fn rank(&self) -> Result<usize, LinalgError> {
        match self.domain {
            ScalarDomain::Integers => Err(LinalgError::NotAField(self.domain)),
            ScalarDomain::PrimeField(p) => {
                let rows = self.row_maps(|v| v.numer().to_u64().expect("reduced mod p"));
                Ok(SparseElim::new(rows, self.cols).rank_mod(p))
            }
            ScalarDomain::Rationals => {
                let rows = self.integral_rows();
                Ok(SparseElim::new(rows, self.cols).rank_fraction_free())
            }
        }
    }

    /// Nonzero invariant factors `d_1 | d_2 | ... | d_r` (all positive).
    pub fn smith_normal_form(&self) -> Result<Vec<BigInt>, LinalgError> {
        for (&(row, col), v) in &self.entries {
            if !v.is_integer() {
                return Err(LinalgError::NotIntegral {
                    row,
                    col,
                    value: v.to_string(),
                });
            }
        }
        let rows = self.row_maps(|v| v.to_integer());
        Ok(smith_invariants(rows, self.cols))
    }

    fn row_maps<T>(&self, conv: impl Fn(&BigRational) -> T) -> Vec<BTreeMap<usize, T>> {
        let mut rows: Vec<BTreeMap<usize, T>> = (0..self.rows).map(|_| BTreeMap::new()).collect();
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, conv(v));
        }
        rows
    }

    /// Rows scaled by the lcm of their denominators.
    fn integral_rows(&self) -> Vec<BTreeMap<usize, BigInt>> {
        let mut dens = vec![BigInt::one(); self.rows];
        for (&(r, _), v) in &self.entries {
            dens[r] = dens[r].lcm(v.denom());
        }
        self.row_maps_indexed(|r, v| (v * BigRational::from_integer(dens[r].clone())).to_integer())
    }

    fn row_maps_indexed<T>(&self, conv: impl Fn(usize, &BigRational) -> T) -> Vec<BTreeMap<usize, T>> {
        let mut rows: Vec<BTreeMap<usize, T>> = (0..self.rows).map(|_| BTreeMap::new()).collect();
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, conv(r, v));
        }
        rows
    }
}

/// Sparse row store with column occupancy for Markowitz pivoting.
struct SparseElim<T> {
    rows: Vec<Option<BTreeMap<usize, T>>>,
    cols: Vec<BTreeSet<usize>>,
}

impl<T: Clone> SparseElim<T> {
    fn new(rows: Vec<BTreeMap<usize, T>>, ncols: usize) -> Self {
        let mut cols = vec![BTreeSet::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                cols[c].insert(r);
            }
        }
        Self {
            rows: rows.into_iter().map(|r| (!r.is_empty()).then_some(r)).collect(),
            cols,
        }
    }

    /// Cheapest pivot among entries accepted by `ok`, ties broken by position.
    fn pick_pivot(&self, ok: impl Fn(&T) -> bool) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let Some(row) = row else { continue };
            let rn = row.len() - 1;
            if let Some((cost, _, _)) = best {
                if rn == 0 && cost == 0 {
                    break;
                }
            }
            for (&c, v) in row {
                if !ok(v) {
                    continue;
                }
                let cost = rn * (self.cols[c].len() - 1);
                if best.map_or(true, |(b, _, _)| cost < b) {
                    best = Some((cost, r, c));
                    if cost == 0 {
                        break;
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    fn take_row(&mut self, r: usize) -> BTreeMap<usize, T> {
        let row = self.rows[r].take().expect("row still active");
        for &c in row.keys() {
            self.cols[c].remove(&r);
        }
        row
    }

    fn replace_row(&mut self, r: usize, old: &BTreeMap<usize, T>, new: BTreeMap<usize, T>) {
        for c in old.keys() {
            if !new.contains_key(c) {
                self.cols[*c].remove(&r);
            }
        }
        for c in new.keys() {
            self.cols[*c].insert(r);
        }
        self.rows[r] = if new.is_empty() { None } else { Some(new) };
    }

    /// Eliminates every other row's entry in column `pc` using `pivot`,
    /// with `update(pivot_row, pivot_value, row, value)` producing the new row.
    fn eliminate_column(
        &mut self,
        pivot: &BTreeMap<usize, T>,
        pc: usize,
        update: impl Fn(&BTreeMap<usize, T>, &T, &BTreeMap<usize, T>, &T) -> BTreeMap<usize, T>,
    ) {
        let pv = pivot[&pc].clone();
        let targets: Vec<usize> = self.cols[pc].iter().copied().collect();
        for r in targets {
            let old = self.rows[r].take().expect("active row");
            let v = old[&pc].clone();
            let new = update(pivot, &pv, &old, &v);
            self.replace_row(r, &old, new);
        }
    }
}

impl SparseElim<u64> {
    fn rank_mod(mut self, p: u64) -> usize {
        let mut rank = 0;
        while let Some((pr, pc)) = self.pick_pivot(|_| true) {
            let pivot = self.take_row(pr);
            rank += 1;
            self.eliminate_column(&pivot, pc, |prow, pv, row, v| {
                // row - (v / pv) * prow
                let f = v * mod_inv(*pv, p) % p;
                let mut out = row.clone();
                for (&c, &x) in prow {
                    let sub = f * x % p;
                    let e = out.entry(c).or_insert(0);
                    *e = (*e + p - sub) % p;
                    if *e == 0 {
                        out.remove(&c);
                    }
                }
                out
            });
        }
        rank
    }
}

impl SparseElim<BigInt> {
    fn rank_fraction_free(mut self) -> usize {
        let mut rank = 0;
        while let Some((pr, pc)) = self.pick_pivot(|_| true) {
            let pivot = self.take_row(pr);
            rank += 1;
            self.eliminate_column(&pivot, pc, |prow, pv, row, v| {
                // pv * row - v * prow, then divide out the content.
                let g = pv.gcd(v);
                let (a, b) = (pv / &g, v / &g);
                let mut out: BTreeMap<usize, BigInt> =
                    row.iter().map(|(&c, x)| (c, x * &a)).collect();
                for (&c, x) in prow {
                    let e = out.entry(c).or_insert_with(BigInt::zero);
                    *e -= x * &b;
                    if e.is_zero() {
                        out.remove(&c);
                    }
                }
                make_primitive(&mut out);
                out
            });
        }
        rank
    }
}

fn make_primitive(row: &mut BTreeMap<usize, BigInt>) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

pub(crate) fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Invariant factors of an integer matrix given by sparse rows.
pub(crate) fn smith_invariants(rows: Vec<BTreeMap<usize, BigInt>>, ncols: usize) -> Vec<BigInt> {
    let mut elim = SparseElim::new(rows, ncols);
    let mut units = 0usize;
    // Unit pivots: the Schur complement stays integral.
    while let Some((pr, pc)) = elim.pick_pivot(|v| v.abs().is_one()) {
        let pivot = elim.take_row(pr);
        units += 1;
        elim.eliminate_column(&pivot, pc, |prow, pv, row, v| {
            let f = v * pv; // v / pv since pv = ±1
            let mut out = row.clone();
            for (&c, x) in prow {
                let e = out.entry(c).or_insert_with(BigInt::zero);
                *e -= x * &f;
                if e.is_zero() {
                    out.remove(&c);
                }
            }
            out
        });
    }
    // Dense remainder.
    let active: Vec<BTreeMap<usize, BigInt>> = elim.rows.into_iter().flatten().collect();
    let used_cols: BTreeSet<usize> = active.iter().flat_map(|r| r.keys().copied()).collect();
    let col_index: BTreeMap<usize, usize> =
        used_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense: Vec<Vec<BigInt>> = active
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); used_cols.len()];
            for (c, x) in r {
                v[col_index[c]] = x.clone();
            }
            v
        })
        .collect();
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_smith(&mut dense));
    factors.sort_by(|a, b| a.cmp(b));
    factors
}

/// Rank of a dense integer matrix and the last Bareiss pivot, which is a
/// nonzero `rank × rank` minor (zero when the rank is zero).
fn bareiss_rank_minor(mut m: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero())
        else {
            break;
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
        k += 1;
    }
    (k, if k == 0 { BigInt::zero() } else { prev })
}

/// `x` reduced into `(-n/2, n/2]`.
fn reduce_sym(x: &BigInt, n: &BigInt) -> BigInt {
    let r = x.mod_floor(n);
    if &r * 2 > *n {
        r - n
    } else {
        r
    }
}

/// Invariant factors of the diagonal matrix `diag(d)`, in divisibility order.
fn diagonal_invariants(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Nonzero invariant factors of a dense integer matrix.
///
/// With `r` the rank and `M` a nonzero `r × r` minor, every invariant factor
/// divides `M`. The reduction runs on the lattice spanned by the rows and
/// `N·ℤ^n` with `N = 2|M|`, so entries stay reduced mod `N`; its invariant
/// factors are `gcd(d_i, N)`, which is `d_i` for `i <= r` and `N` otherwise.
fn dense_smith(m: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let (rank, minor) = bareiss_rank_minor(m.to_vec());
    if rank == 0 {
        return vec![];
    }
    if minor.abs().is_one() {
        return vec![BigInt::one(); rank];
    }
    let n = minor.abs() * 2;
    let rows = m.len();
    let cols = m[0].len();
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = reduce_sym(x, &n);
        }
    }
    let mut diag = Vec::with_capacity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = reduce_sym(&(&m[i][j] - &q * &m[t][j]), &n);
                    m[i][j] = v;
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = reduce_sym(&(&row[j] - &q * &row[t]), &n);
                    row[j] = v;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.push(m[t][t].gcd(&n));
        t += 1;
    }
    diag.resize(cols, n.clone());
    let factors: Vec<BigInt> = diagonal_invariants(diag).into_iter().filter(|d| *d < n).collect();
    debug_assert_eq!(factors.len(), rank);
    factors
}
