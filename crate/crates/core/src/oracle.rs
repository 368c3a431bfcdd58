//! Exhaustive enumeration used as ground truth at small `N`.
//!
//! Two backends produce the avoiders of a pattern:
//!
//! - [`Backend::Filter`] scans all `N!` permutations and keeps the avoiders.
//!   It works for every size-3 pattern but is limited to `N <= 10` unless the
//!   caller raises the limit (at most 12).
//! - [`Backend::Structural`] generates the `C_N` avoiders directly from Dyck
//!   paths (corner construction for 321, first-return decomposition for
//!   231) and reaches `N = 16`.
//!
//! Counting partitions the work by first entry (filter) and merges the
//! per-part counts, so totals do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::count::table_window;
use crate::dyck::{enumerate_dyck_bounded, perm_from_dyck, DyckPath, Step};
use crate::error::{domain, Error, Result};
use crate::perm::{contains_pattern, next_permutation, play_positional, Pattern, Permutation};
use crate::strategy::extend_231;

pub const FILTER_DEFAULT_LIMIT: usize = 10;
pub const FILTER_HARD_LIMIT: usize = 12;
pub const STRUCTURAL_LIMIT: usize = 16;

/// Environment variable naming the directory for cached oracle counts.
pub const CACHE_DIR_ENV: &str = "BESTCHOICE_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Backend {
    Filter,
    Structural,
}

#[derive(Clone, Copy, Debug)]
pub struct Enumerator {
    pub backend: Backend,
    pub filter_limit: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            backend: Backend::Filter,
            filter_limit: FILTER_DEFAULT_LIMIT,
        }
    }
}

impl Enumerator {
    pub fn structural() -> Self {
        Enumerator {
            backend: Backend::Structural,
            ..Default::default()
        }
    }

    /// Filter backend with the limit raised to `limit` (at most
    /// [`FILTER_HARD_LIMIT`]).
    pub fn filter_up_to(limit: usize) -> Result<Self> {
        if limit > FILTER_HARD_LIMIT {
            return Err(Error::Resource(format!(
                "filter enumeration is capped at N = {FILTER_HARD_LIMIT}"
            )));
        }
        Ok(Enumerator {
            backend: Backend::Filter,
            filter_limit: limit,
        })
    }

    fn check(&self, n: usize, q: Pattern) -> Result<()> {
        if n == 0 {
            return Err(domain!("N must be >= 1"));
        }
        match self.backend {
            Backend::Filter if n > self.filter_limit => Err(Error::Resource(format!(
                "filter enumeration limited to N <= {}, requested {n}",
                self.filter_limit
            ))),
            Backend::Structural if !matches!(q, Pattern::P321 | Pattern::P231) => {
                Err(domain!("structural enumeration supports 321 and 231 only"))
            }
            Backend::Structural if n > STRUCTURAL_LIMIT => Err(Error::Resource(format!(
                "structural enumeration limited to N <= {STRUCTURAL_LIMIT}, requested {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Every avoider of `q` of size `n`, each exactly once.
    pub fn avoiders(&self, n: usize, q: Pattern) -> Result<Box<dyn Iterator<Item = Permutation> + Send>> {
        self.check(n, q)?;
        Ok(match self.backend {
            Backend::Filter => Box::new((1..=n as u32).flat_map(move |first| filtered_with_first(n, first, q))),
            Backend::Structural => {
                let paths = enumerate_dyck_bounded(n, STRUCTURAL_LIMIT)?;
                match q {
                    Pattern::P321 => Box::new(paths.map(|d| perm_from_dyck(&d))),
                    _ => Box::new(paths.map(|d| perm_231_from_dyck(&d))),
                }
            }
        })
    }

    /// `counts[k]` = number of k-winnable avoiders, by direct play, for
    /// every `0 <= k <= n-1`.
    pub fn winnable_counts(&self, n: usize, q: Pattern) -> Result<Vec<u64>> {
        self.check(n, q)?;
        let tally = |perms: &mut dyn Iterator<Item = Permutation>| {
            let mut counts = vec![0u64; n];
            for p in perms {
                for (k, c) in counts.iter_mut().enumerate() {
                    if play_positional(&p, k).expect("k < n").win {
                        *c += 1;
                    }
                }
            }
            counts
        };
        let merge = |mut a: Vec<u64>, b: Vec<u64>| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        };
        Ok(match self.backend {
            Backend::Filter => (1..=n as u32)
                .into_par_iter()
                .map(|first| tally(&mut filtered_with_first(n, first, q)))
                .reduce(|| vec![0; n], merge),
            Backend::Structural => tally(&mut self.avoiders(n, q)?),
        })
    }
}

// Permutations of 1..=n starting with `first`, lexicographic, filtered.
fn filtered_with_first(n: usize, first: u32, q: Pattern) -> impl Iterator<Item = Permutation> {
    let mut state: Option<Vec<u32>> =
        Some(std::iter::once(first).chain((1..=n as u32).filter(|&v| v != first)).collect());
    std::iter::from_fn(move || {
        let v = state.as_mut()?;
        let out = v.clone();
        if !next_permutation(&mut v[1..]) {
            state = None;
        }
        Some(Permutation::from_vec_unchecked(out))
    })
    .filter(move |p| !contains_pattern(p, q))
}

/// 231-avoider for a Dyck path by first-return decomposition: the path
/// `N A E B` maps to `L n R` with `L` built from `A` on the smallest values
/// and `R` from `B` on the values between.
pub fn perm_231_from_dyck(d: &DyckPath) -> Permutation {
    fn build(steps: &[Step], lo: u32, out: &mut Vec<u32>) {
        if steps.is_empty() {
            return;
        }
        let mut height = 0i32;
        let mut ret = 0;
        for (i, s) in steps.iter().enumerate() {
            height += if *s == Step::North { 1 } else { -1 };
            if height == 0 {
                ret = i;
                break;
            }
        }
        let size = (steps.len() / 2) as u32;
        let left = (ret / 2) as u32;
        build(&steps[1..ret], lo, out);
        out.push(lo + size - 1);
        build(&steps[ret + 1..], lo + left, out);
    }
    let mut out = Vec::with_capacity(d.size());
    build(d.steps(), 1, &mut out);
    Permutation::from_vec_unchecked(out)
}

/// Avoiders of `q` of size `n` with the default (filter, `N <= 10`) backend.
pub fn enumerate_avoiders(n: usize, q: Pattern) -> Result<Box<dyn Iterator<Item = Permutation> + Send>> {
    Enumerator::default().avoiders(n, q)
}

pub fn brute_count_winnable(n: usize, k: usize, q: Pattern) -> Result<BigUint> {
    if k >= n {
        return Err(domain!("k = {k} outside 0..N-1 for N = {n}"));
    }
    let counts = Enumerator::default().winnable_counts(n, q)?;
    Ok(BigUint::from(counts[k]))
}

/// Brute-force counts of k-winnable avoiders for a set of sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountGrid {
    pub pattern: Pattern,
    pub sizes: Vec<usize>,
    #[serde(skip)]
    entries: BTreeMap<(usize, usize), BigUint>,
}

impl CountGrid {
    pub fn get(&self, n: usize, k: usize) -> Option<&BigUint> {
        self.entries.get(&(n, k))
    }

    /// `((N, k), count)` for every `0 <= k <= N-1`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &BigUint)> {
        self.entries.iter().map(|(&key, v)| (key, v))
    }

    /// Table layout with columns `k-N = -11 .. -1`; cells outside
    /// `max(1, N-11) <= k <= N-1` are blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N");
        for off in (1..=crate::count::TABLE_WIDTH).rev() {
            let _ = write!(out, ",k_offset_-{off}");
        }
        out.push('\n');
        for &n in &self.sizes {
            let _ = write!(out, "{n}");
            let window = table_window(n);
            for off in (1..=crate::count::TABLE_WIDTH).rev() {
                out.push(',');
                if let Some(k) = n.checked_sub(off).filter(|k| window.contains(k)) {
                    if let Some(v) = self.get(n, k) {
                        let _ = write!(out, "{v}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn brute_count_grid<I>(sizes: I, q: Pattern, enumerator: &Enumerator) -> Result<CountGrid>
where
    I: IntoIterator<Item = usize>,
{
    brute_count_grid_cached(sizes, q, enumerator, None)
}

pub fn brute_count_grid_cached<I>(
    sizes: I,
    q: Pattern,
    enumerator: &Enumerator,
    cache: Option<&OracleCache>,
) -> Result<CountGrid>
where
    I: IntoIterator<Item = usize>,
{
    let mut grid = CountGrid {
        pattern: q,
        sizes: Vec::new(),
        entries: BTreeMap::new(),
    };
    for n in sizes {
        let counts = match cache {
            Some(c) => c.winnable_counts(n, q, enumerator)?,
            None => enumerator.winnable_counts(n, q)?,
        };
        for (k, c) in counts.into_iter().enumerate() {
            grid.entries.insert((n, k), BigUint::from(c));
        }
        grid.sizes.push(n);
    }
    Ok(grid)
}

/// On-disk cache of brute-force counts keyed by size, pattern and crate
/// version.
#[derive(Clone, Debug)]
pub struct OracleCache {
    dir: PathBuf,
}

impl OracleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OracleCache { dir: dir.into() }
    }

    /// Cache rooted at `$BESTCHOICE_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(OracleCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, n: usize, q: Pattern) -> PathBuf {
        self.dir.join(format!(
            "winnable-{q}-n{n}-v{}.json",
            env!("CARGO_PKG_VERSION")
        ))
    }

    /// Cached counts when present and well formed; otherwise computes and
    /// stores them. Write failures are ignored.
    pub fn winnable_counts(&self, n: usize, q: Pattern, enumerator: &Enumerator) -> Result<Vec<u64>> {
        let path = self.path(n, q);
        if let Some(counts) = fs::read_to_string(&path)
            .ok()
            .and_then(|s| serde_json::from_str::<Vec<u64>>(&s).ok())
            .filter(|c| c.len() == n)
        {
            return Ok(counts);
        }
        let counts = enumerator.winnable_counts(n, q)?;
        if fs::create_dir_all(&self.dir).is_ok() {
            let _ = fs::write(&path, serde_json::to_string(&counts).expect("serializable"));
        }
        Ok(counts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionFailure {
    pub base: String,
    pub k: usize,
    /// Every k-winnable 231-avoiding extension found.
    pub winners: Vec<String>,
    pub constructed: String,
}

/// Searches for a 231-avoiding base of size `n-1` and a position `k` where
/// the k-winnable 231-avoiding extensions are not exactly `{extend_231(p, k)}`.
pub fn find_extension_counterexample(n: usize) -> Result<Option<ExtensionFailure>> {
    if !(2..=11).contains(&n) {
        return Err(domain!("extension check supports 2 <= N <= 11, got {n}"));
    }
    let bases: Vec<Permutation> = enumerate_avoiders(n - 1, Pattern::P231)?.collect();
    let failure = bases.par_iter().find_map_any(|p| {
        (0..n).find_map(|k| {
            let winners: Vec<Permutation> = (1..=n)
                .map(|slot| p.insert_max(slot).expect("slot in range"))
                .filter(|q| {
                    !contains_pattern(q, Pattern::P231) && play_positional(q, k).expect("k < n").win
                })
                .collect();
            let constructed = extend_231(p, k).expect("base avoids 231");
            (winners.len() != 1 || winners[0] != constructed).then(|| ExtensionFailure {
                base: p.to_string(),
                k,
                winners: winners.iter().map(|w| w.to_string()).collect(),
                constructed: constructed.to_string(),
            })
        })
    });
    Ok(failure)
}

pub fn verify_unique_extension(n: usize) -> Result<bool> {
    Ok(find_extension_counterexample(n)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{catalan, s_closed};
    use std::collections::BTreeSet;

    fn strings(it: impl Iterator<Item = Permutation>) -> Vec<String> {
        it.map(|p| p.to_string()).collect()
    }

    #[test]
    fn size_three_avoiders() {
        assert_eq!(
            strings(enumerate_avoiders(3, Pattern::P321).unwrap()),
            ["123", "132", "213", "231", "312"]
        );
        assert_eq!(
            strings(enumerate_avoiders(3, Pattern::P231).unwrap()),
            ["123", "132", "213", "312", "321"]
        );
        assert_eq!(strings(enumerate_avoiders(1, Pattern::P321).unwrap()), ["1"]);
    }

    #[test]
    fn limits() {
        assert!(matches!(enumerate_avoiders(11, Pattern::P321), Err(Error::Resource(_))));
        assert!(Enumerator::filter_up_to(13).is_err());
        assert!(Enumerator::filter_up_to(11).unwrap().avoiders(11, Pattern::P321).is_ok());
        assert!(Enumerator::structural().avoiders(16, Pattern::P231).is_ok());
        assert!(Enumerator::structural().avoiders(17, Pattern::P231).is_err());
        assert!(Enumerator::structural().avoiders(5, Pattern::P123).is_err());
        assert!(enumerate_avoiders(0, Pattern::P321).is_err());
    }

    #[test]
    fn counts_are_catalan_for_every_pattern() {
        for n in 1..=8 {
            for q in Pattern::ALL {
                let count = enumerate_avoiders(n, q).unwrap().count();
                assert_eq!(BigUint::from(count), catalan(n), "{q} N={n}");
            }
        }
    }

    #[test]
    fn backends_agree() {
        for n in 1..=9 {
            for q in [Pattern::P321, Pattern::P231] {
                let filter: BTreeSet<_> = enumerate_avoiders(n, q).unwrap().collect();
                let structural: Vec<_> = Enumerator::structural().avoiders(n, q).unwrap().collect();
                assert_eq!(structural.len(), filter.len());
                assert_eq!(structural.into_iter().collect::<BTreeSet<_>>(), filter, "{q} N={n}");
            }
        }
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_count_winnable(8, 6, Pattern::P321).unwrap(), BigUint::from(726u32));
        assert_eq!(brute_count_winnable(5, 3, Pattern::P231).unwrap(), BigUint::from(14u32));
        assert_eq!(brute_count_winnable(2, 1, Pattern::P321).unwrap(), BigUint::from(1u32));
        assert!(brute_count_winnable(2, 2, Pattern::P321).is_err());
    }

    #[test]
    fn brute_matches_closed_form() {
        let grid = brute_count_grid(2..=9, Pattern::P321, &Enumerator::default()).unwrap();
        for ((n, k), v) in grid.entries() {
            if k == 0 {
                assert_eq!(v, &BigUint::from(1u8));
            } else {
                assert_eq!(v, &s_closed(k, n).unwrap(), "N={n} k={k}");
            }
        }
        let grid = brute_count_grid(2..=9, Pattern::P231, &Enumerator::structural()).unwrap();
        for ((n, _), v) in grid.entries() {
            assert_eq!(v, &catalan(n - 1));
        }
    }

    #[test]
    fn grid_csv_layout() {
        let grid = brute_count_grid(2..=4, Pattern::P321, &Enumerator::default()).unwrap();
        let csv = grid.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("N,k_offset_-11,"));
        assert!(lines[0].ends_with(",k_offset_-1"));
        assert_eq!(lines[1], "2,,,,,,,,,,,1");
        assert_eq!(lines[3], "4,,,,,,,,,6,8,5");
    }

    #[test]
    fn unique_extension() {
        assert!(verify_unique_extension(3).unwrap());
        assert!(verify_unique_extension(6).unwrap());
        assert!(verify_unique_extension(12).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OracleCache::new(dir.path());
        let e = Enumerator::default();
        let first = cache.winnable_counts(6, Pattern::P321, &e).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let second = cache.winnable_counts(6, Pattern::P321, &e).unwrap();
        assert_eq!(first, second);
        // a corrupt entry is recomputed
        let path = cache.path(6, Pattern::P321);
        fs::write(&path, "[1,2]").unwrap();
        assert_eq!(cache.winnable_counts(6, Pattern::P321, &e).unwrap(), first);
    }
}
