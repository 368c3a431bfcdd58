//! Dyck paths and their northeast corners.
//!
//! A path of size `N` runs from `(0,0)` to `(N,N)` with unit north and east
//! steps and never drops below the diagonal (touching it is allowed). A
//! northeast corner is a north step immediately followed by an east step and
//! is labelled `(column, height)` at the end of that east step, both
//! 1-based. The corners of a path are exactly the `(position, value)` pairs
//! of the left-to-right maxima of one 321-avoiding permutation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::count::binomial;
use crate::error::{domain, Error, Result};
use crate::perm::{contains_pattern, left_to_right_maxima, Pattern, Permutation};

/// Default largest size accepted by [`enumerate_dyck`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    North,
    East,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::North => 'N',
            Step::East => 'E',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        let mut height: i64 = 0;
        for (i, s) in steps.iter().enumerate() {
            height += if *s == Step::North { 1 } else { -1 };
            if height < 0 {
                return Err(Error::InvalidPath(format!(
                    "drops below the diagonal at step {}",
                    i + 1
                )));
            }
        }
        if height != 0 {
            return Err(Error::InvalidPath("north and east counts differ".into()));
        }
        Ok(DyckPath { steps })
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        debug_assert!(DyckPath::new(steps.clone()).is_ok());
        DyckPath { steps }
    }

    /// Number of north steps.
    pub fn size(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.letter())?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'N' => Ok(Step::North),
                'E' => Ok(Step::East),
                _ => Err(Error::InvalidPath(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyckPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub column: usize,
    pub height: usize,
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.column, self.height)
    }
}

/// Corners in path order. Invariants: the first corner is in column 1,
/// columns and heights strictly increase, and after each corner at most
/// `height - column` east steps occur before the next corner's column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerSet(Vec<Corner>);

impl CornerSet {
    pub fn new(corners: Vec<Corner>) -> Result<Self> {
        let Some(first) = corners.first() else {
            return Err(Error::InvalidCorners("no corners".into()));
        };
        if first.column != 1 {
            return Err(Error::InvalidCorners("first corner must be in column 1".into()));
        }
        for c in &corners {
            if c.column > c.height {
                return Err(Error::InvalidCorners(format!("corner {c} lies below the diagonal")));
            }
        }
        for w in corners.windows(2) {
            let (prev, next) = (w[0], w[1]);
            if next.column <= prev.column || next.height <= prev.height {
                return Err(Error::InvalidCorners(format!(
                    "corners {prev} and {next} are not strictly increasing"
                )));
            }
            if next.column > prev.height + 1 {
                return Err(Error::InvalidCorners(format!(
                    "more than {} east steps between {prev} and {next}",
                    prev.height - prev.column
                )));
            }
        }
        Ok(CornerSet(corners))
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<Self> {
        CornerSet::new(
            pairs
                .into_iter()
                .map(|(column, height)| Corner { column, height })
                .collect(),
        )
    }

    pub fn corners(&self) -> &[Corner] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CornerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

pub fn ne_corners(d: &DyckPath) -> CornerSet {
    let steps = d.steps();
    let mut corners = Vec::new();
    let (mut easts, mut norths) = (0, 0);
    for (i, s) in steps.iter().enumerate() {
        match s {
            Step::North => {
                norths += 1;
                if steps.get(i + 1) == Some(&Step::East) {
                    corners.push(Corner {
                        column: easts + 1,
                        height: norths,
                    });
                }
            }
            Step::East => easts += 1,
        }
    }
    CornerSet(corners)
}

/// The unique path of size `n` whose corner set is `c`: for each corner,
/// north steps up to its height, then east steps up to one column short of
/// the next corner; the remaining east steps close the path.
pub fn dyck_from_corners(c: &CornerSet, n: usize) -> Result<DyckPath> {
    let last = c.corners().last().expect("corner sets are nonempty");
    if last.height != n {
        return Err(domain!(
            "the last corner of a size-{n} path has height {n}, got {}",
            last.height
        ));
    }
    let mut steps = Vec::with_capacity(2 * n);
    let (mut norths, mut easts) = (0, 0);
    for (idx, corner) in c.corners().iter().enumerate() {
        while norths < corner.height {
            steps.push(Step::North);
            norths += 1;
        }
        let stop = c.corners().get(idx + 1).map_or(n, |next| next.column - 1);
        while easts < stop {
            steps.push(Step::East);
            easts += 1;
        }
    }
    DyckPath::new(steps)
}

/// Places each corner height at its column and fills the remaining columns
/// with the unused values in increasing order.
pub fn perm_from_dyck(d: &DyckPath) -> Permutation {
    let n = d.size();
    let corners = ne_corners(d);
    let mut values = vec![0u32; n];
    let mut used = vec![false; n + 1];
    for c in corners.corners() {
        values[c.column - 1] = c.height as u32;
        used[c.height] = true;
    }
    let mut fill = (1..=n as u32).filter(|&v| !used[v as usize]);
    for slot in values.iter_mut().filter(|v| **v == 0) {
        *slot = fill.next().expect("one free value per free column");
    }
    Permutation::from_vec_unchecked(values)
}

pub fn corners_of_perm(p: &Permutation) -> CornerSet {
    CornerSet(
        left_to_right_maxima(p)
            .entries()
            .iter()
            .map(|&(pos, v)| Corner {
                column: pos,
                height: v as usize,
            })
            .collect(),
    )
}

/// Inverse of [`perm_from_dyck`] on 321-avoiding permutations.
pub fn dyck_from_perm(p: &Permutation) -> Result<DyckPath> {
    if contains_pattern(p, Pattern::P321) {
        return Err(domain!("{p} contains 321"));
    }
    dyck_from_corners(&corners_of_perm(p), p.len())
}

/// Lattice paths from `(0,0)` to `(a,b)` that stay weakly above the
/// diagonal: `binom(a+b, a) (b-a+1) / (b+1)`.
pub fn count_partial_paths(a: usize, b: usize) -> Result<BigUint> {
    if a > b {
        return Err(domain!("partial path endpoint ({a},{b}) lies below the diagonal"));
    }
    Ok(binomial((a + b) as u64, a as u64) * (b - a + 1) / (b + 1))
}

/// Every Dyck path of size `n` in lexicographic order (`N < E`).
pub fn enumerate_dyck(n: usize) -> Result<DyckPaths> {
    enumerate_dyck_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_dyck_bounded(n: usize, bound: usize) -> Result<DyckPaths> {
    if n == 0 {
        return Err(domain!("Dyck paths need size >= 1"));
    }
    if n > bound {
        return Err(Error::Resource(format!(
            "Dyck enumeration bounded at N = {bound}, requested {n}"
        )));
    }
    let mut first = vec![Step::North; n];
    first.extend(std::iter::repeat_n(Step::East, n));
    Ok(DyckPaths {
        n,
        next: Some(first),
    })
}

/// Iterator returned by [`enumerate_dyck`].
#[derive(Clone, Debug)]
pub struct DyckPaths {
    n: usize,
    next: Option<Vec<Step>>,
}

impl Iterator for DyckPaths {
    type Item = DyckPath;

    fn next(&mut self) -> Option<DyckPath> {
        let current = self.next.take()?;
        self.next = successor(&current, self.n);
        Some(DyckPath::from_steps_unchecked(current))
    }
}

// Flip the rightmost north step that can become east, then complete with
// the smallest word: all remaining norths, then easts.
fn successor(w: &[Step], n: usize) -> Option<Vec<Step>> {
    let mut norths = w.iter().filter(|s| **s == Step::North).count();
    let mut easts = w.len() - norths;
    for i in (0..w.len()).rev() {
        match w[i] {
            Step::North => norths -= 1,
            Step::East => easts -= 1,
        }
        if w[i] == Step::North && norths > easts {
            let mut out = w[..i].to_vec();
            out.push(Step::East);
            out.extend(std::iter::repeat_n(Step::North, n - norths));
            out.extend(std::iter::repeat_n(Step::East, n - easts - 1));
            return Some(out);
        }
    }
    None
}
