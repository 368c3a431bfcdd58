//! The two filtered game models.
//!
//! In the 231-avoiding model every positional strategy wins with the same
//! probability `C_{N-1} / C_N`. In the 321-avoiding model the best position
//! moves from `N-1` to `N-2` to `N-3` as `N` grows, and the winning chance
//! tends to 31/64.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::count::{catalan, s_combo, winnable_count_321, BigCount, CatalanCombo, ExactProb, RecurrenceTable};
use crate::error::{domain, Result};
use crate::perm::{contains_pattern, Pattern, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelId {
    /// Interview orders avoid 231 ("raising the bar").
    Model231,
    /// Interview orders avoid 321 ("avoiding disappointment").
    Model321,
}

impl ModelId {
    pub fn pattern(self) -> Pattern {
        match self {
            ModelId::Model231 => Pattern::P231,
            ModelId::Model321 => Pattern::P321,
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelId::Model231 => "MODEL_231",
            ModelId::Model321 => "MODEL_321",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalStrategy {
    pub n: usize,
    /// Largest optimal position.
    pub k_star: usize,
    pub win_prob: ExactProb,
    /// Every position attaining the maximum, ascending.
    pub ties: Vec<usize>,
}

/// The unique k-winnable 231-avoiding permutation obtained from `p` by
/// inserting the new maximum `N = p.len() + 1`.
///
/// With `m` the largest of the first `k` entries (0 when `k = 0`), `N` goes
/// directly before the first later entry exceeding `m`, or last if there is
/// none.
pub fn extend_231(p: &Permutation, k: usize) -> Result<Permutation> {
    let len = p.len();
    if k > len {
        return Err(domain!("k = {k} outside 0..={len} for an extension to size {}", len + 1));
    }
    if contains_pattern(p, Pattern::P231) {
        return Err(domain!("{p} contains 231"));
    }
    let v = p.values();
    let bar = v[..k].iter().copied().max().unwrap_or(0);
    let slot = v[k..]
        .iter()
        .position(|&x| x > bar)
        .map_or(len + 1, |off| k + off + 1);
    p.insert_max(slot)
}

/// Always `C_{N-1}`, whatever `k`.
pub fn winnable_count_231(n: usize, k: usize) -> Result<BigCount> {
    if n == 0 || k >= n {
        return Err(domain!("k = {k} outside 0..N-1 for N = {n}"));
    }
    Ok(catalan(n - 1))
}

pub fn win_probability_231(n: usize) -> Result<ExactProb> {
    if n == 0 {
        return Err(domain!("N must be >= 1"));
    }
    ExactProb::new(catalan(n - 1), catalan(n))
}

/// Optimal position from the piecewise law: `N-1` for `N = 2`, `N-2` for
/// `3 <= N <= 8`, `N-3` from 9 on.
pub fn predicted_optimal_k_321(n: usize) -> Option<usize> {
    match n {
        0 | 1 => None,
        2 => Some(1),
        3..=8 => Some(n - 2),
        _ => Some(n - 3),
    }
}

/// Argmax over every `0 <= k <= N-1` of the exact 321 win probability.
/// Ties resolve to the largest `k` and are all listed.
pub fn optimal_k_321(n: usize) -> Result<OptimalStrategy> {
    if n < 2 {
        return Err(domain!("N must be >= 2"));
    }
    let counts = (0..n)
        .map(|k| winnable_count_321(k, n))
        .collect::<Result<Vec<_>>>()?;
    optimal_from_counts(n, counts)
}

/// Same as [`optimal_k_321`] for every `2 <= N <= n_max`, sharing one
/// recurrence table instead of evaluating closed forms per cell.
pub fn optimal_k_321_range(n_max: usize) -> Result<Vec<OptimalStrategy>> {
    if n_max < 2 {
        return Err(domain!("n_max must be >= 2"));
    }
    let rec = RecurrenceTable::build(n_max);
    (2..=n_max)
        .map(|n| {
            let mut counts = vec![BigUint::one()];
            for k in 1..n {
                let s = rec.s(n - k, n).expect("index within table");
                counts.push(s.to_biguint().expect("counts are nonnegative"));
            }
            optimal_from_counts(n, counts)
        })
        .collect()
}

fn optimal_from_counts(n: usize, counts: Vec<BigUint>) -> Result<OptimalStrategy> {
    let best = counts.iter().max().expect("N >= 2").clone();
    let ties: Vec<usize> = (0..n).filter(|&k| counts[k] == best).collect();
    Ok(OptimalStrategy {
        n,
        k_star: *ties.last().expect("nonempty"),
        win_prob: ExactProb::new(best, catalan(n))?,
        ties,
    })
}

/// Limit of `eval_combo(x, N) / C_N` as `N` grows: each `C_{N-j} / C_N`
/// tends to `4^{-j}`.
pub fn limit_of_combo(x: &CatalanCombo) -> BigRational {
    x.terms().fold(BigRational::zero(), |acc, (j, c)| {
        acc + BigRational::new(c.clone(), BigInt::from(4u8).pow(j as u32))
    })
}

/// Index `i` of the asymptotically optimal `S_i`, i.e. position `N - i`.
pub const ASYMPTOTIC_OPTIMAL_SHIFT: usize = 3;

/// Limiting success probability of the best positional strategy.
pub fn asymptotic_success(m: ModelId) -> BigRational {
    let combo = match m {
        // every position wins C_{N-1} / C_N of the time
        ModelId::Model231 => s_combo(1),
        ModelId::Model321 => s_combo(ASYMPTOTIC_OPTIMAL_SHIFT),
    };
    limit_of_combo(&combo.expect("valid index"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceViolation {
    pub n: usize,
    pub i: usize,
    pub s3: String,
    pub si: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub n_max: usize,
    pub sizes_checked: usize,
    pub comparisons: usize,
    pub first_violation: Option<DominanceViolation>,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `S_3(N) > S_i(N)` for all `4 <= i <= N-1` and `9 <= N <= n_max`
/// with exact integers.
pub fn dominance_check_321(n_max: usize) -> Result<DominanceReport> {
    if n_max < 9 {
        return Err(domain!("dominance holds from N = 9; n_max = {n_max} is too small"));
    }
    let rec = RecurrenceTable::build(n_max);
    let mut comparisons = 0;
    for n in 9..=n_max {
        let s3 = rec.s(3, n).expect("in table");
        for i in 4..n {
            let si = rec.s(i, n).expect("in table");
            comparisons += 1;
            if si >= s3 {
                return Ok(DominanceReport {
                    n_max,
                    sizes_checked: n - 8,
                    comparisons,
                    first_violation: Some(DominanceViolation {
                        n,
                        i,
                        s3: s3.to_string(),
                        si: si.to_string(),
                    }),
                });
            }
        }
    }
    Ok(DominanceReport {
        n_max,
        sizes_checked: n_max - 8,
        comparisons,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{eval_combo, s_closed, win_probability_321};
    use crate::perm::{all_permutations, is_k_winnable};

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extend_231(&perm("3124"), 2).unwrap(), perm("31254"));
        assert_eq!(extend_231(&perm("21"), 2).unwrap(), perm("213"));
        assert_eq!(extend_231(&perm("12"), 0).unwrap(), perm("312"));
        assert!(extend_231(&perm("231"), 1).is_err());
        assert!(extend_231(&perm("12"), 3).is_err());
    }

    #[test]
    fn extension_is_the_unique_winnable_avoider() {
        for len in 1..=7 {
            for p in all_permutations(len).filter(|p| !contains_pattern(p, Pattern::P231)) {
                for k in 0..=len {
                    let good: Vec<Permutation> = (1..=len + 1)
                        .map(|slot| p.insert_max(slot).unwrap())
                        .filter(|q| !contains_pattern(q, Pattern::P231) && is_k_winnable(q, k).unwrap())
                        .collect();
                    assert_eq!(good, vec![extend_231(&p, k).unwrap()], "{p} k={k}");
                }
            }
        }
    }

    #[test]
    fn model_231_counts() {
        assert_eq!(winnable_count_231(5, 3).unwrap(), BigUint::from(14u8));
        assert_eq!(winnable_count_231(5, 0).unwrap(), BigUint::from(14u8));
        assert_eq!(winnable_count_231(2, 1).unwrap(), BigUint::from(1u8));
        assert!(winnable_count_231(2, 2).is_err());
        assert_eq!(win_probability_231(5).unwrap().to_ratio(), ratio(1, 3));
        assert_eq!(win_probability_231(2).unwrap().to_ratio(), ratio(1, 2));
        let far = win_probability_231(3000).unwrap().to_f64();
        assert!((far - 3001.0 / 11998.0).abs() < 1e-15);
        assert!((far - 0.25).abs() < 2e-4);
    }

    #[test]
    fn optimal_examples() {
        let s = optimal_k_321(2).unwrap();
        assert_eq!((s.k_star, s.win_prob.to_string()), (1, "1/2".to_string()));
        let s = optimal_k_321(5).unwrap();
        assert_eq!((s.k_star, s.win_prob.to_ratio()), (3, ratio(23, 42)));
        let s = optimal_k_321(9).unwrap();
        assert_eq!((s.k_star, s.win_prob.to_string()), (6, "2442/4862".to_string()));
        assert_eq!(s.ties, vec![6]);
        assert!(optimal_k_321(1).is_err());
    }

    #[test]
    fn optimal_range_matches_pointwise_and_law() {
        let all = optimal_k_321_range(60).unwrap();
        for s in &all {
            assert_eq!(s, &optimal_k_321(s.n).unwrap());
            assert_eq!(Some(s.k_star), predicted_optimal_k_321(s.n));
            assert_eq!(s.win_prob, win_probability_321(s.k_star, s.n).unwrap());
        }
    }

    #[test]
    fn limits() {
        assert_eq!(limit_of_combo(&s_combo(3).unwrap()), ratio(31, 64));
        assert_eq!(limit_of_combo(&s_combo(1).unwrap()), ratio(1, 4));
        assert_eq!(limit_of_combo(&CatalanCombo::new()), BigRational::zero());
        assert_eq!(asymptotic_success(ModelId::Model231), ratio(1, 4));
        assert_eq!(asymptotic_success(ModelId::Model321), ratio(31, 64));
        // each S_i limit is below 3/8 for 5 <= i <= 11
        for i in 5..=11 {
            assert!(limit_of_combo(&s_combo(i).unwrap()) < ratio(3, 8), "i={i}");
        }
    }

    #[test]
    fn dominance() {
        let r = dominance_check_321(12).unwrap();
        assert!(r.passed());
        assert_eq!(r.sizes_checked, 4);
        for (i, v) in [(4, 1817), (5, 1064), (6, 490), (7, 168), (8, 36)] {
            assert_eq!(s_closed(9 - i, 9).unwrap(), BigUint::from(v as u32));
            assert_eq!(eval_combo(&s_combo(i).unwrap(), 9).unwrap(), BigInt::from(v));
        }
        assert!(dominance_check_321(8).is_err());
    }
}
