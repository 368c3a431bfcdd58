//! Exact counting of k-winnable 321-avoiding permutations.
//!
//! Three independent routes produce the same numbers:
//!
//! - symbolic: [`t_combo`] / [`s_combo`] build integer combinations of
//!   shifted Catalan numbers through the path recurrences, and
//!   [`eval_combo`] evaluates them at a concrete `N`;
//! - closed form: [`t_closed`] (Catalan triangle) and [`s_closed`] (sum over
//!   partial Dyck paths);
//! - integer recurrence: [`RecurrenceTable`] fills `T_i(N)` and `S_i(N)`
//!   directly, for ranges where symbolic combos would be wasteful.
//!
//! `S_i(N)` counts the permutations that are `(N - i)`-winnable, so the
//! closed form is indexed by the strategy position `k` and the combos by the
//! distance `i = N - k` from the end.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, RangeInclusive, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dyck::count_partial_paths;
use crate::error::{domain, Error, Result};
use crate::perm::Pattern;

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Catalan numbers up to this index are kept in a shared table.
pub const CATALAN_MEMO_LIMIT: usize = 5000;

/// Largest `N` for which exact rational probabilities are produced; beyond it
/// only ratio-mode floats are available.
pub const EXACT_MODE_LIMIT: usize = 5000;

/// Number of symbolic `T_i`/`S_i` combinations that are memoized.
pub const COMBO_MEMO_LIMIT: usize = 64;

/// Width of the published tables: positions `N-11 ..= N-1`.
pub const TABLE_WIDTH: usize = 11;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

static CATALAN_TABLE: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

pub fn catalan(n: usize) -> BigCount {
    if n > CATALAN_MEMO_LIMIT {
        return binomial(2 * n as u64, n as u64) / (n as u64 + 1);
    }
    if let Some(c) = CATALAN_TABLE.read().expect("catalan table poisoned").get(n) {
        return c.clone();
    }
    let mut table = CATALAN_TABLE.write().expect("catalan table poisoned");
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let m = table.len() as u64;
        // C_m = C_{m-1} * 2(2m-1) / (m+1)
        let next = &table[table.len() - 1] * (2 * (2 * m - 1)) / (m + 1);
        table.push(next);
    }
    table[n].clone()
}

/// `C_{N-j} / C_N` as a telescoping product of consecutive ratios
/// `C_{n-1} / C_n = (n+1) / (2(2n-1))`; never forms large integers.
pub fn catalan_ratio(j: usize, n: usize) -> Result<f64> {
    if j > n {
        return Err(domain!("shift {j} exceeds N = {n}"));
    }
    let mut r = 1.0f64;
    for t in 0..j {
        let m = (n - t) as f64;
        r *= (m + 1.0) / (2.0 * (2.0 * m - 1.0));
    }
    Ok(r)
}

/// An integer combination `sum_j c_j * C_{N-j}` with every shift `j >= 1`,
/// kept symbolic in `N`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalanCombo {
    coeffs: BTreeMap<usize, BigInt>,
}

impl CatalanCombo {
    pub fn new() -> Self {
        Self::default()
    }

    /// `C_{N-j}`.
    pub fn shifted(j: usize) -> Result<Self> {
        Self::from_terms([(j, 1)])
    }

    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut out = CatalanCombo::new();
        for (j, c) in terms {
            if j == 0 {
                return Err(domain!("Catalan combinations use shifts j >= 1"));
            }
            out.add_term(j, BigInt::from(c));
        }
        Ok(out)
    }

    fn add_term(&mut self, j: usize, c: BigInt) {
        let entry = self.coeffs.entry(j).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(&j).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing shift order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().map(|(&j, c)| (j, c))
    }

    pub fn max_shift(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, factor: i64) -> CatalanCombo {
        let mut out = CatalanCombo::new();
        for (j, c) in self.terms() {
            out.add_term(j, c * factor);
        }
        out
    }
}

impl Add for &CatalanCombo {
    type Output = CatalanCombo;

    fn add(self, rhs: &CatalanCombo) -> CatalanCombo {
        let mut out = self.clone();
        for (j, c) in rhs.terms() {
            out.add_term(j, c.clone());
        }
        out
    }
}

impl Sub for &CatalanCombo {
    type Output = CatalanCombo;

    fn sub(self, rhs: &CatalanCombo) -> CatalanCombo {
        let mut out = self.clone();
        for (j, c) in rhs.terms() {
            out.add_term(j, -c);
        }
        out
    }
}

/// Renders as e.g. `3C_{N-1} - 4C_{N-2} - C_{N-3}`.
impl fmt::Display for CatalanCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (j, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "C_{{N-{j}}}")?;
        }
        Ok(())
    }
}

impl Serialize for CatalanCombo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .terms()
            .map(|(j, c)| (j.to_string(), c.to_string()))
            .collect();
        map.serialize(s)
    }
}

/// Substitutes `N - 1` for `N`: every shift grows by one.
pub fn delta(x: &CatalanCombo) -> CatalanCombo {
    CatalanCombo {
        coeffs: x.coeffs.iter().map(|(&j, c)| (j + 1, c.clone())).collect(),
    }
}

struct ComboMemo {
    t: Vec<CatalanCombo>,
    s: Vec<CatalanCombo>,
}

// Index 0 is a placeholder; both sequences start at i = 1.
fn extend_combos(t: &mut Vec<CatalanCombo>, s: &mut Vec<CatalanCombo>, upto: usize) {
    if t.is_empty() {
        t.push(CatalanCombo::new());
        s.push(CatalanCombo::new());
        let c1 = CatalanCombo::shifted(1).expect("shift 1");
        t.push(c1.clone());
        s.push(c1);
    }
    while t.len() <= upto {
        let i = t.len();
        let ti = if i == 2 {
            CatalanCombo::from_terms([(1, 1), (2, -1)]).expect("valid shifts")
        } else {
            &t[i - 1] - &delta(&t[i - 2])
        };
        let si = &ti.scaled(i as i64) + &delta(&s[i - 1]);
        t.push(ti);
        s.push(si);
    }
}

fn combo_memo() -> &'static ComboMemo {
    static MEMO: OnceLock<ComboMemo> = OnceLock::new();
    MEMO.get_or_init(|| {
        let (mut t, mut s) = (Vec::new(), Vec::new());
        extend_combos(&mut t, &mut s, COMBO_MEMO_LIMIT);
        ComboMemo { t, s }
    })
}

fn combo_pair(i: usize) -> Result<(CatalanCombo, CatalanCombo)> {
    if i == 0 {
        return Err(domain!("combination index must be >= 1"));
    }
    let memo = combo_memo();
    if i <= COMBO_MEMO_LIMIT {
        return Ok((memo.t[i].clone(), memo.s[i].clone()));
    }
    let (mut t, mut s) = (memo.t.clone(), memo.s.clone());
    extend_combos(&mut t, &mut s, i);
    Ok((t.swap_remove(i), s.swap_remove(i)))
}

/// `T_1 = C_{N-1}`, `T_2 = C_{N-1} - C_{N-2}`, `T_i = T_{i-1} - delta(T_{i-2})`.
pub fn t_combo(i: usize) -> Result<CatalanCombo> {
    combo_pair(i).map(|(t, _)| t)
}

/// `S_1 = C_{N-1}`, `S_i = i T_i + delta(S_{i-1})`.
pub fn s_combo(i: usize) -> Result<CatalanCombo> {
    combo_pair(i).map(|(_, s)| s)
}

pub fn eval_combo(x: &CatalanCombo, n: usize) -> Result<BigInt> {
    if let Some(j) = x.max_shift() {
        if n <= j {
            return Err(domain!("N = {n} must exceed the largest shift {j}"));
        }
    }
    Ok(x.terms()
        .map(|(j, c)| c * BigInt::from(catalan(n - j)))
        .sum())
}

/// Catalan triangle entry: `T_i(N) = (i+1)/N * binom(2(N-1)-i, N-1)`.
pub fn t_closed(i: usize, n: usize) -> Result<BigCount> {
    if i == 0 || i >= n {
        return Err(domain!("T_i(N) needs 1 <= i <= N-1, got i = {i}, N = {n}"));
    }
    let b = binomial((2 * (n - 1) - i) as u64, (n - 1) as u64);
    Ok(b * (i as u64 + 1) / n as u64)
}

/// Number of k-winnable 321-avoiding permutations of size `N` for
/// `1 <= k <= N-1`: every path through `(k-1, b)`, `k <= b <= N-1`, has
/// `b - k + 1` winning completions.
pub fn s_closed(k: usize, n: usize) -> Result<BigCount> {
    if k == 0 || k >= n {
        return Err(domain!("S needs 1 <= k <= N-1, got k = {k}, N = {n}"));
    }
    let a = (k - 1) as u64;
    // binom(a + b, a), advanced incrementally in b
    let mut paths_binom = binomial(a + k as u64, a);
    let mut total = BigUint::zero();
    for b in k as u64..n as u64 {
        if b > k as u64 {
            paths_binom = paths_binom * (a + b) / b;
        }
        let partial = &paths_binom * (b - a + 1) / (b + 1);
        total += partial * (b - k as u64 + 1);
    }
    Ok(total)
}

/// Count of k-winnable 321-avoiders, extended to `k = 0` where only
/// `N 1 2 ... N-1` qualifies.
pub fn winnable_count_321(k: usize, n: usize) -> Result<BigCount> {
    if n == 0 || k >= n {
        return Err(domain!("k = {k} outside 0..N-1 for N = {n}"));
    }
    if k == 0 {
        return Ok(BigUint::one());
    }
    s_closed(k, n)
}

/// Exact probability with a lazily computed float view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactProb {
    numerator: BigCount,
    denominator: BigCount,
}

impl ExactProb {
    pub fn new(numerator: BigCount, denominator: BigCount) -> Result<Self> {
        if denominator.is_zero() {
            return Err(domain!("zero denominator"));
        }
        if numerator > denominator {
            return Err(domain!("probability {numerator}/{denominator} exceeds 1"));
        }
        Ok(ExactProb {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &BigCount {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigCount {
        &self.denominator
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator.clone()),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ratio().to_f64().unwrap_or(0.0)
    }

    pub fn percent(&self) -> f64 {
        100.0 * self.to_f64()
    }
}

/// Unreduced `numerator/denominator`.
impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExactProb", 3)?;
        st.serialize_field("num", &self.numerator.to_string())?;
        st.serialize_field("den", &self.denominator.to_string())?;
        st.serialize_field("float", &self.to_f64())?;
        st.end()
    }
}

fn check_exact_size(n: usize) -> Result<()> {
    if n > EXACT_MODE_LIMIT {
        return Err(Error::Resource(format!(
            "exact mode supports N <= {EXACT_MODE_LIMIT}, got {n}; use ratio mode"
        )));
    }
    Ok(())
}

/// `S(k, N) / C_N`, exactly. `k = 0` is accepted (probability `1 / C_N`).
pub fn win_probability_321(k: usize, n: usize) -> Result<ExactProb> {
    check_exact_size(n)?;
    ExactProb::new(winnable_count_321(k, n)?, catalan(n))
}

/// Ratio-mode `S(k, N) / C_N` for any `N`.
///
/// The closed-form sum is evaluated term by term relative to `C_N`. Every
/// term is positive, so there is no cancellation; the largest term
/// (`b = N - 1`) is anchored through a product of `N - k` ratios and the
/// others follow from it by single-step ratios.
pub fn win_fraction_321(k: usize, n: usize) -> Result<f64> {
    if n == 0 || k >= n {
        return Err(domain!("k = {k} outside 0..N-1 for N = {n}"));
    }
    if k == 0 {
        return catalan_ratio(n, n);
    }
    let nf = n as f64;
    let a = k - 1;
    // binom(2N-2, N-1) / binom(2N, N)
    let mut r = nf / (2.0 * (2.0 * nf - 1.0));
    for m in (n + a..=2 * n - 2).rev() {
        r *= (m + 1 - n) as f64 / m as f64;
    }
    // partial paths to (a, N-1), relative to C_N
    let mut w = r * (n - a) as f64 / nf * (nf + 1.0);
    let mut total = 0.0;
    let mut b = n - 1;
    loop {
        total += w * (b + 1 - k) as f64;
        if b == k {
            break;
        }
        let (bf, af) = (b as f64, a as f64);
        w *= (bf - af) * (bf + 1.0) / ((af + bf) * (bf - af + 1.0));
        b -= 1;
    }
    Ok(total)
}

/// How a [`WinTable`] row is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Exact up to [`EXACT_MODE_LIMIT`], ratio mode beyond.
    #[default]
    Auto,
    Exact,
    Ratio,
}

impl EvalMode {
    fn exact_for(self, n: usize) -> Result<bool> {
        match self {
            EvalMode::Auto => Ok(n <= EXACT_MODE_LIMIT),
            EvalMode::Exact => check_exact_size(n).map(|_| true),
            EvalMode::Ratio => Ok(false),
        }
    }
}

/// Strategy positions shown for size `N`: `max(1, N-11) ..= N-1`.
pub fn table_window(n: usize) -> RangeInclusive<usize> {
    n.saturating_sub(TABLE_WIDTH).max(1)..=n.saturating_sub(1)
}

fn ser_opt_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_some(&b.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WinCell {
    pub k: usize,
    /// Exact count of k-winnable avoiders; absent in ratio mode.
    #[serde(serialize_with = "ser_opt_big")]
    pub count: Option<BigCount>,
    pub fraction: f64,
}

impl WinCell {
    pub fn percent(&self) -> f64 {
        100.0 * self.fraction
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WinRow {
    pub n: usize,
    /// `C_N`; absent in ratio mode.
    #[serde(serialize_with = "ser_opt_big")]
    pub total: Option<BigCount>,
    pub cells: Vec<WinCell>,
}

impl WinRow {
    pub fn cell(&self, k: usize) -> Option<&WinCell> {
        self.cells.iter().find(|c| c.k == k)
    }

    /// Positions attaining the row maximum, compared exactly when counts are
    /// available.
    pub fn argmax(&self) -> Vec<usize> {
        if self.cells.iter().all(|c| c.count.is_some()) {
            let best = self.cells.iter().filter_map(|c| c.count.as_ref()).max();
            self.cells
                .iter()
                .filter(|c| c.count.as_ref() == best)
                .map(|c| c.k)
                .collect()
        } else {
            let best = self.cells.iter().map(|c| c.fraction).fold(f64::MIN, f64::max);
            self.cells
                .iter()
                .filter(|c| c.fraction == best)
                .map(|c| c.k)
                .collect()
        }
    }
}

/// Counts and win fractions for every size in a set, over the window
/// [`table_window`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WinTable {
    pub pattern: Pattern,
    pub rows: Vec<WinRow>,
}

impl WinTable {
    pub fn build<I>(pattern: Pattern, sizes: I, mode: EvalMode) -> Result<WinTable>
    where
        I: IntoIterator<Item = usize>,
    {
        if !matches!(pattern, Pattern::P321 | Pattern::P231) {
            return Err(domain!("tables are available for 321 and 231 only"));
        }
        let mut rows = Vec::new();
        for n in sizes {
            if n < 2 {
                return Err(domain!("table rows need N >= 2, got {n}"));
            }
            let exact = mode.exact_for(n)?;
            let total = exact.then(|| catalan(n));
            let mut cells = Vec::new();
            for k in table_window(n) {
                let cell = match (pattern, exact) {
                    (Pattern::P321, true) => {
                        let p = win_probability_321(k, n)?;
                        WinCell {
                            k,
                            fraction: p.to_f64(),
                            count: Some(p.numerator().clone()),
                        }
                    }
                    (Pattern::P321, false) => WinCell {
                        k,
                        count: None,
                        fraction: win_fraction_321(k, n)?,
                    },
                    (_, true) => {
                        let p = ExactProb::new(catalan(n - 1), catalan(n))?;
                        WinCell {
                            k,
                            fraction: p.to_f64(),
                            count: Some(p.numerator().clone()),
                        }
                    }
                    (_, false) => WinCell {
                        k,
                        count: None,
                        fraction: catalan_ratio(1, n)?,
                    },
                };
                cells.push(cell);
            }
            rows.push(WinRow { n, total, cells });
        }
        if rows.is_empty() {
            return Err(domain!("empty size range"));
        }
        Ok(WinTable { pattern, rows })
    }

    pub fn row(&self, n: usize) -> Option<&WinRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Exact 321 table for `2 <= N <= n_max`.
pub fn win_table(n_max: usize) -> Result<WinTable> {
    if n_max < 2 {
        return Err(domain!("n_max must be >= 2"));
    }
    WinTable::build(Pattern::P321, 2..=n_max, EvalMode::Exact)
}

/// `T_i(N)` and `S_i(N)` for all `1 <= i <= N-1 <= n_max - 1`, filled by
/// the integer recurrences
/// `T_i(N) = T_{i-1}(N) - T_{i-2}(N-1)` and `S_i(N) = i T_i(N) + S_{i-1}(N-1)`.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    t: Vec<Vec<BigInt>>,
    s: Vec<Vec<BigInt>>,
}

impl RecurrenceTable {
    pub fn build(n_max: usize) -> RecurrenceTable {
        let mut t: Vec<Vec<BigInt>> = vec![Vec::new(); n_max + 1];
        let mut s: Vec<Vec<BigInt>> = vec![Vec::new(); n_max + 1];
        for n in 2..=n_max {
            let cat = |m: usize| BigInt::from(catalan(m));
            let mut tn = vec![BigInt::zero(); n];
            let mut sn = vec![BigInt::zero(); n];
            tn[1] = cat(n - 1);
            sn[1] = cat(n - 1);
            for i in 2..n {
                tn[i] = if i == 2 {
                    cat(n - 1) - cat(n - 2)
                } else {
                    &tn[i - 1] - &t[n - 1][i - 2]
                };
                sn[i] = &tn[i] * i + &s[n - 1][i - 1];
            }
            t[n] = tn;
            s[n] = sn;
        }
        RecurrenceTable { t, s }
    }

    pub fn n_max(&self) -> usize {
        self.t.len() - 1
    }

    /// `T_i(N)`, or `None` outside `1 <= i <= N-1 <= n_max - 1`.
    pub fn t(&self, i: usize, n: usize) -> Option<&BigInt> {
        (i >= 1).then(|| self.t.get(n)?.get(i)).flatten()
    }

    pub fn s(&self, i: usize, n: usize) -> Option<&BigInt> {
        (i >= 1).then(|| self.s.get(n)?.get(i)).flatten()
    }
}

/// Consistency check used by tests and the CLI: the three routes to `T` and
/// `S` agree for every valid index with `N <= n_max`.
pub fn routes_agree(n_max: usize) -> std::result::Result<(), String> {
    let rec = RecurrenceTable::build(n_max);
    for n in 2..=n_max {
        for i in 1..n {
            let closed = BigInt::from(t_closed(i, n).map_err(|e| e.to_string())?);
            let lattice = BigInt::from(count_partial_paths(n - 1 - i, n - 1).map_err(|e| e.to_string())?);
            let symbolic = eval_combo(&t_combo(i).map_err(|e| e.to_string())?, n)
                .map_err(|e| e.to_string())?;
            let recurrence = rec.t(i, n).cloned().unwrap_or_default();
            if closed != lattice || closed != symbolic || closed != recurrence {
                return Err(format!(
                    "T_{i}({n}): closed {closed}, lattice {lattice}, combo {symbolic}, recurrence {recurrence}"
                ));
            }
            let k = n - i;
            let closed = BigInt::from(s_closed(k, n).map_err(|e| e.to_string())?);
            let symbolic = eval_combo(&s_combo(i).map_err(|e| e.to_string())?, n)
                .map_err(|e| e.to_string())?;
            let recurrence = rec.s(i, n).cloned().unwrap_or_default();
            if closed != symbolic || closed != recurrence {
                return Err(format!(
                    "S_{i}({n}): closed {closed}, combo {symbolic}, recurrence {recurrence}"
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn combo(terms: &[(usize, i64)]) -> CatalanCombo {
        CatalanCombo::from_terms(terms.iter().copied()).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), big(1));
        assert_eq!(catalan(11), big(58786));
        assert_eq!(catalan(12), big(208012));
        // beyond the memo table
        let n = CATALAN_MEMO_LIMIT + 3;
        assert_eq!(catalan(n), binomial(2 * n as u64, n as u64) / (n as u64 + 1));
        assert_eq!(&catalan(n) * (n as u64 + 1), binomial(2 * n as u64, n as u64));
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(5, 5), big(1));
        assert_eq!(binomial(5, 6), big(0));
        assert_eq!(binomial(100, 49).to_string(), "98913082887808032681188722800");
    }

    #[test]
    fn delta_shifts() {
        assert_eq!(delta(&combo(&[(1, 1)])), combo(&[(2, 1)]));
        assert_eq!(delta(&CatalanCombo::new()), CatalanCombo::new());
        assert_eq!(delta(&combo(&[(1, 2), (2, -1)])), combo(&[(2, 2), (3, -1)]));
    }

    #[test]
    fn combo_rejects_zero_shift() {
        assert!(CatalanCombo::from_terms([(0, 1)]).is_err());
        assert!(t_combo(0).is_err());
    }

    #[test]
    fn worked_forms() {
        assert_eq!(t_combo(1).unwrap(), combo(&[(1, 1)]));
        assert_eq!(t_combo(2).unwrap(), combo(&[(1, 1), (2, -1)]));
        assert_eq!(t_combo(3).unwrap(), combo(&[(1, 1), (2, -2)]));
        assert_eq!(t_combo(4).unwrap(), combo(&[(1, 1), (2, -3), (3, 1)]));
        assert_eq!(t_combo(5).unwrap(), combo(&[(1, 1), (2, -4), (3, 3)]));
        assert_eq!(s_combo(1).unwrap(), combo(&[(1, 1)]));
        assert_eq!(s_combo(2).unwrap(), combo(&[(1, 2), (2, -1)]));
        assert_eq!(s_combo(3).unwrap(), combo(&[(1, 3), (2, -4), (3, -1)]));
        assert_eq!(s_combo(4).unwrap(), combo(&[(1, 4), (2, -9), (4, -1)]));
        assert_eq!(s_combo(5).unwrap(), combo(&[(1, 5), (2, -16), (3, 6), (5, -1)]));
        assert_eq!(s_combo(3).unwrap().to_string(), "3C_{N-1} - 4C_{N-2} - C_{N-3}");
    }

    #[test]
    fn combos_past_memo_continue_recurrence() {
        let i = COMBO_MEMO_LIMIT + 2;
        let t = t_combo(i).unwrap();
        let expect = &t_combo(i - 1).unwrap() - &delta(&t_combo(i - 2).unwrap());
        assert_eq!(t, expect);
        let s = s_combo(i).unwrap();
        let expect = &t.scaled(i as i64) + &delta(&s_combo(i - 1).unwrap());
        assert_eq!(s, expect);
        let n = i + 3;
        assert_eq!(eval_combo(&s, n).unwrap(), BigInt::from(s_closed(n - i, n).unwrap()));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_combo(&s_combo(3).unwrap(), 9).unwrap(), BigInt::from(2442));
        assert_eq!(eval_combo(&s_combo(1).unwrap(), 5).unwrap(), BigInt::from(14));
        assert_eq!(eval_combo(&t_combo(2).unwrap(), 5).unwrap(), BigInt::from(9));
        assert!(eval_combo(&s_combo(5).unwrap(), 5).is_err());
        assert_eq!(eval_combo(&CatalanCombo::new(), 1).unwrap(), BigInt::zero());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(t_closed(1, 5).unwrap(), big(14));
        assert_eq!(t_closed(4, 6).unwrap(), big(5));
        for n in 2..20 {
            assert_eq!(t_closed(n - 1, n).unwrap(), big(1));
            assert_eq!(t_closed(1, n).unwrap(), catalan(n - 1));
            assert_eq!(s_closed(n - 1, n).unwrap(), catalan(n - 1));
        }
        assert!(t_closed(0, 5).is_err() && t_closed(5, 5).is_err());
        assert_eq!(s_closed(2, 5).unwrap(), big(20));
        assert_eq!(s_closed(6, 8).unwrap(), big(726));
        assert_eq!(s_closed(4, 5).unwrap(), big(14));
        assert!(s_closed(0, 5).is_err() && s_closed(5, 5).is_err());
    }

    #[test]
    fn s_closed_matches_partial_path_sum() {
        // direct evaluation of the sum with count_partial_paths per term
        for n in 2..=30 {
            for k in 1..n {
                let direct: BigUint = (k..n)
                    .map(|b| count_partial_paths(k - 1, b).unwrap() * (b - k + 1))
                    .sum();
                assert_eq!(s_closed(k, n).unwrap(), direct, "k={k} N={n}");
            }
        }
    }

    #[test]
    fn three_routes_agree() {
        routes_agree(29).unwrap();
    }

    #[test]
    fn catalan_ratio_examples() {
        assert_eq!(catalan_ratio(1, 5).unwrap(), 1.0 / 3.0);
        assert_eq!(catalan_ratio(0, 77).unwrap(), 1.0);
        let n = 100_000f64;
        let r = catalan_ratio(1, 100_000).unwrap();
        assert!((r - (n + 1.0) / (2.0 * (2.0 * n - 1.0))).abs() < 1e-15);
        assert!((r - 0.25000375).abs() < 1e-10);
        assert!(catalan_ratio(6, 5).is_err());
    }

    #[test]
    fn catalan_ratio_matches_exact_rationals() {
        for n in [64usize, 100, 257, 500] {
            for j in 0..=64.min(n) {
                let exact = BigRational::new(catalan(n - j).into(), catalan(n).into())
                    .to_f64()
                    .unwrap();
                let got = catalan_ratio(j, n).unwrap();
                assert!(((got - exact) / exact).abs() <= 1e-12, "j={j} N={n}");
            }
        }
    }

    #[test]
    fn probability_examples() {
        let p = win_probability_321(2, 4).unwrap();
        assert_eq!(p.to_string(), "8/14");
        assert!((p.percent() - 57.142857).abs() < 1e-5);
        assert_eq!(win_probability_321(1, 2).unwrap().to_f64(), 0.5);
        assert_eq!(win_probability_321(6, 9).unwrap().to_string(), "2442/4862");
        assert_eq!(win_probability_321(0, 6).unwrap().to_string(), "1/132");
        assert!(win_probability_321(6, 6).is_err());
        assert!(matches!(win_probability_321(1, EXACT_MODE_LIMIT + 1), Err(Error::Resource(_))));
    }

    #[test]
    fn ratio_mode_matches_exact() {
        for n in 1..=80 {
            for k in 0..n {
                let exact = win_probability_321(k, n).unwrap().to_f64();
                let ratio = win_fraction_321(k, n).unwrap();
                assert!(
                    (exact - ratio).abs() <= 1e-12 * exact.max(1e-300),
                    "k={k} N={n}: {exact} vs {ratio}"
                );
            }
        }
        let n = 1500;
        for k in [1, 10, 700, 1000, 1350, 1497] {
            let exact = win_probability_321(k, n).unwrap().to_f64();
            let ratio = win_fraction_321(k, n).unwrap();
            if exact > 1e-250 {
                assert!(((exact - ratio) / exact).abs() < 1e-11, "k={k}: {exact} vs {ratio}");
            } else {
                assert!(ratio < 1e-240, "k={k}: {ratio}");
            }
        }
    }

    #[test]
    fn tables() {
        let t = win_table(2).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].cells.len(), 1);
        assert_eq!(t.rows[0].cells[0].count, Some(big(1)));
        let t = win_table(12).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.cells.len()).sum::<usize>(), 66);
        let pct: Vec<f64> = t.row(6).unwrap().cells.iter().map(|c| c.percent()).collect();
        for (got, shown) in pct.iter().zip([11.3, 30.3, 49.2, 53.0, 31.8]) {
            assert!(got - shown >= 0.0 && got - shown < 0.1, "{got} vs {shown}");
        }
        assert_eq!(t.row(9).unwrap().argmax(), vec![6]);
        assert!(win_table(1).is_err());
        assert_eq!(table_window(30), 19..=29);
        assert_eq!(table_window(5), 1..=4);
    }

    #[test]
    fn recurrence_table_bounds() {
        let rec = RecurrenceTable::build(10);
        assert_eq!(rec.n_max(), 10);
        assert_eq!(rec.s(3, 9), Some(&BigInt::from(2442)));
        assert_eq!(rec.t(0, 9), None);
        assert_eq!(rec.t(9, 9), None);
        assert_eq!(rec.t(1, 11), None);
    }
}
