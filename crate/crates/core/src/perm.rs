//! Permutations in one-line notation and the k-positional strategy.
//!
//! Positions and values are 1-based throughout, so `p.get(1)` is the first
//! candidate interviewed and the best candidate has value `p.len()`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A permutation of `1..=N` in one-line notation, `N >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `values` is a rearrangement of `1..=values.len()`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPermutation("empty sequence".into()));
        }
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let idx = v as usize;
            if idx == 0 || idx > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {v} outside 1..={n}"
                )));
            }
            if seen[idx] {
                return Err(Error::InvalidPermutation(format!("entry {v} repeated")));
            }
            seen[idx] = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Permutation::new((1..=n as u32).collect())
    }

    /// Relative order of an arbitrary sequence of distinct values.
    pub fn standardize(seq: &[u32]) -> Result<Self> {
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_by_key(|&i| seq[i]);
        if order.windows(2).any(|w| seq[w[0]] == seq[w[1]]) {
            return Err(Error::InvalidPermutation("repeated value".into()));
        }
        let mut ranks = vec![0u32; seq.len()];
        for (rank, &i) in order.iter().enumerate() {
            ranks[i] = rank as u32 + 1;
        }
        Permutation::new(ranks)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// Value at 1-based `position`.
    pub fn get(&self, position: usize) -> Option<u32> {
        position.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// Inserts the value `len + 1` before the 1-based `slot` (`slot = len + 1`
    /// appends).
    pub fn insert_max(&self, slot: usize) -> Result<Permutation> {
        let n = self.len();
        if slot == 0 || slot > n + 1 {
            return Err(domain!("insertion slot {slot} outside 1..={}", n + 1));
        }
        let mut values = Vec::with_capacity(n + 1);
        values.extend_from_slice(&self.0[..slot - 1]);
        values.push(n as u32 + 1);
        values.extend_from_slice(&self.0[slot - 1..]);
        Ok(Permutation(values))
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<u32>::deserialize(d)?;
        Permutation::new(values).map_err(serde::de::Error::custom)
    }
}

/// Digits are concatenated when `N <= 9`, otherwise entries are separated by
/// single spaces.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.len() <= 9;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Accepts `"574239618"` (one digit per entry) or whitespace/comma separated
/// integers such as `"5 7 4 2 3 9 6 1 8"` or `"10,1,2,3,4,5,6,7,8,9"`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let separated = s.contains(|c: char| c.is_whitespace() || c == ',');
        let values: Vec<u32> = if separated {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// The six permutation patterns of size three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pattern {
    P123,
    P132,
    P213,
    P231,
    P312,
    P321,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::P123,
        Pattern::P132,
        Pattern::P213,
        Pattern::P231,
        Pattern::P312,
        Pattern::P321,
    ];

    pub fn letters(self) -> [u8; 3] {
        match self {
            Pattern::P123 => [1, 2, 3],
            Pattern::P132 => [1, 3, 2],
            Pattern::P213 => [2, 1, 3],
            Pattern::P231 => [2, 3, 1],
            Pattern::P312 => [3, 1, 2],
            Pattern::P321 => [3, 2, 1],
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.letters();
        write!(f, "{a}{b}{c}")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['P', 'p']);
        Pattern::ALL
            .into_iter()
            .find(|q| q.to_string() == t)
            .ok_or_else(|| domain!("unknown pattern {s:?}; expected one of 123,132,213,231,312,321"))
    }
}

/// Left-to-right maxima as `(position, value)` pairs, ordered by position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrMaxima(Vec<(usize, u32)>);

impl LrMaxima {
    pub fn entries(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(pos, _)| pos)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hire {
    pub position: usize,
    pub value: u32,
}

/// Result of playing a positional strategy on one interview order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyOutcome {
    pub hired: Option<Hire>,
    pub win: bool,
}

impl StrategyOutcome {
    pub fn hired_position(&self) -> Option<usize> {
        self.hired.map(|h| h.position)
    }

    pub fn hired_value(&self) -> Option<u32> {
        self.hired.map(|h| h.value)
    }
}

/// Triple scan over all `i < j < k`; works for every size-3 pattern.
pub fn contains_pattern_naive(p: &Permutation, q: Pattern) -> bool {
    let v = p.values();
    let [a, b, c] = q.letters();
    let same = |x: u32, y: u32, qx: u8, qy: u8| (x < y) == (qx < qy);
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            if !same(v[i], v[j], a, b) {
                continue;
            }
            for k in j + 1..n {
                if same(v[i], v[k], a, c) && same(v[j], v[k], b, c) {
                    return true;
                }
            }
        }
    }
    false
}

/// Pattern containment. 321 and 231 use linear scans; the other patterns fall
/// back to [`contains_pattern_naive`].
pub fn contains_pattern(p: &Permutation, q: Pattern) -> bool {
    match q {
        Pattern::P321 => contains_321(p.values()),
        Pattern::P231 => contains_231(p.values()),
        _ => contains_pattern_naive(p, q),
    }
}

pub fn avoids(p: &Permutation, q: Pattern) -> bool {
    !contains_pattern(p, q)
}

// 321-avoiding iff the entries that are not left-to-right maxima increase.
fn contains_321(v: &[u32]) -> bool {
    let mut max = 0;
    let mut last_small = 0;
    for &x in v {
        if x > max {
            max = x;
        } else if x < last_small {
            return true;
        } else {
            last_small = x;
        }
    }
    false
}

// Stack-sorting test: an entry below a popped value closes a 231.
fn contains_231(v: &[u32]) -> bool {
    let mut stack: Vec<u32> = Vec::with_capacity(v.len());
    let mut bound = 0;
    for &x in v {
        if x < bound {
            return true;
        }
        while let Some(&top) = stack.last() {
            if top < x {
                bound = top;
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(x);
    }
    false
}

pub fn left_to_right_maxima(p: &Permutation) -> LrMaxima {
    let mut max = 0;
    let mut out = Vec::new();
    for (i, &v) in p.values().iter().enumerate() {
        if v > max {
            max = v;
            out.push((i + 1, v));
        }
    }
    LrMaxima(out)
}

fn check_k(p: &Permutation, k: usize) -> Result<()> {
    if k >= p.len() {
        return Err(domain!("k = {k} outside 0..={}", p.len() - 1));
    }
    Ok(())
}

/// Rejects the first `k` candidates, then hires the next left-to-right
/// maximum. When no left-to-right maximum follows position `k` nobody is
/// hired and the game is lost.
pub fn play_positional(p: &Permutation, k: usize) -> Result<StrategyOutcome> {
    check_k(p, k)?;
    let n = p.len() as u32;
    let mut max = 0;
    for (i, &v) in p.values().iter().enumerate() {
        if v > max {
            max = v;
            if i + 1 > k {
                return Ok(StrategyOutcome {
                    hired: Some(Hire {
                        position: i + 1,
                        value: v,
                    }),
                    win: v == n,
                });
            }
        }
    }
    Ok(StrategyOutcome {
        hired: None,
        win: false,
    })
}

pub fn is_k_winnable(p: &Permutation, k: usize) -> Result<bool> {
    Ok(play_positional(p, k)?.win)
}

/// The half-open range of `k` for which `p` is k-winnable: from the position
/// of the next-to-last left-to-right maximum (0 when there is only one) up to
/// the position of the last one.
pub fn winnable_interval(p: &Permutation) -> Range<usize> {
    let lr = left_to_right_maxima(p);
    let e = lr.entries();
    let hi = e[e.len() - 1].0;
    let lo = if e.len() >= 2 { e[e.len() - 2].0 } else { 0 };
    lo..hi
}

/// Relative orders of every prefix, i.e. what the interviewer can see after
/// each interview.
pub fn prefix_signature(p: &Permutation) -> Vec<Permutation> {
    let v = p.values();
    let mut sorted: Vec<u32> = Vec::with_capacity(v.len());
    let mut out = Vec::with_capacity(v.len());
    for j in 0..v.len() {
        let pos = sorted.partition_point(|&x| x < v[j]);
        sorted.insert(pos, v[j]);
        let ranks = v[..=j]
            .iter()
            .map(|x| sorted.partition_point(|y| y < x) as u32 + 1)
            .collect();
        out.push(Permutation::from_vec_unchecked(ranks));
    }
    out
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut current: Option<Vec<u32>> = (n >= 1).then(|| (1..=n as u32).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        current = next_permutation(&mut next).then_some(next);
        Some(Permutation::from_vec_unchecked(out))
    })
}

/// Advances `v` to its lexicographic successor; false when `v` was the last.
pub(crate) fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
