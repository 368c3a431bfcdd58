//! The `verify` subcommand: every cross-module invariant, run in order,
//! stopping at the first counterexample.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use bestchoice::count::{catalan, routes_agree, s_closed, t_closed};
use bestchoice::dyck::{dyck_from_corners, dyck_from_perm, enumerate_dyck, ne_corners, perm_from_dyck};
use bestchoice::oracle::{find_extension_counterexample, Enumerator, FILTER_DEFAULT_LIMIT, STRUCTURAL_LIMIT};
use bestchoice::perm::{
    all_permutations, contains_pattern, contains_pattern_naive, play_positional, winnable_interval, Pattern,
};
use bestchoice::sampler::{AvoiderSampler, RngStream};
use bestchoice::strategy::{
    asymptotic_success, dominance_check_321, optimal_k_321_range, predicted_optimal_k_321, ModelId,
};

/// Largest size for the checks that walk all `N!` permutations.
const ALL_PERMS_LIMIT: usize = 8;
/// Largest size for the brute-force oracle (structural backend above the
/// filter limit).
const ORACLE_LIMIT: usize = 13;
const EXTENSION_LIMIT: usize = 11;
const DYCK_LIMIT: usize = 10;

pub struct Check {
    pub name: &'static str,
    /// Largest size exercised.
    pub upto: usize,
    pub outcome: Result<(), String>,
}

type CheckFn = fn(usize) -> (usize, Result<(), String>);

const CHECKS: &[(&str, CheckFn)] = &[
    ("pattern-containment", pattern_containment),
    ("winnable-interval", winnable_interval_check),
    ("backends-agree", backends_agree),
    ("oracle-321", oracle_321),
    ("oracle-231-flat", oracle_231),
    ("unique-extension", unique_extension),
    ("dyck-roundtrip", dyck_roundtrip),
    ("closed-forms", closed_forms),
    ("optimal-k-law", optimal_law),
    ("s3-dominance", dominance),
    ("catalan-ratio-bounds", ratio_bounds),
    ("t-geometric-bound", t_bound),
    ("limits", limits),
    ("sampler-support", sampler_support),
];

/// Runs the checks in order; the last element is the first failure, if any.
pub fn run_checks(n_max: usize, on_check: impl FnMut(&Check)) -> Vec<Check> {
    run_list(CHECKS, n_max, on_check)
}

fn run_list(list: &[(&'static str, CheckFn)], n_max: usize, mut on_check: impl FnMut(&Check)) -> Vec<Check> {
    let mut done = Vec::new();
    for &(name, f) in list {
        let (upto, outcome) = f(n_max);
        let check = Check { name, upto, outcome };
        on_check(&check);
        let failed = check.outcome.is_err();
        done.push(check);
        if failed {
            break;
        }
    }
    done
}

fn pattern_containment(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(ALL_PERMS_LIMIT);
    let r = (1..=m).try_for_each(|n| {
        all_permutations(n).try_for_each(|p| {
            Pattern::ALL.into_iter().try_for_each(|q| {
                let (fast, naive) = (contains_pattern(&p, q), contains_pattern_naive(&p, q));
                if fast == naive {
                    Ok(())
                } else {
                    Err(format!("{p} vs {q}: linear scan says {fast}, triple scan says {naive}"))
                }
            })
        })
    });
    (m, r)
}

fn winnable_interval_check(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(ALL_PERMS_LIMIT);
    let r = (1..=m).try_for_each(|n| {
        all_permutations(n).try_for_each(|p| {
            let iv = winnable_interval(&p);
            (0..n).try_for_each(|k| {
                let win = play_positional(&p, k).map_err(|e| e.to_string())?.win;
                if win == iv.contains(&k) {
                    Ok(())
                } else {
                    Err(format!("{p}: play at k={k} gives {win}, interval is {iv:?}"))
                }
            })
        })
    });
    (m, r)
}

fn backends_agree(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(FILTER_DEFAULT_LIMIT);
    let r = [Pattern::P321, Pattern::P231].into_iter().try_for_each(|q| {
        (1..=m).try_for_each(|n| {
            let filter: BTreeSet<_> = Enumerator::default()
                .avoiders(n, q)
                .map_err(|e| e.to_string())?
                .collect();
            let structural: Vec<_> = Enumerator::structural()
                .avoiders(n, q)
                .map_err(|e| e.to_string())?
                .collect();
            if BigUint::from(filter.len()) != catalan(n) {
                return Err(format!("{q} N={n}: {} avoiders, expected C_{n}", filter.len()));
            }
            if structural.len() != filter.len() || structural.iter().any(|p| !filter.contains(p)) {
                let stray = structural.iter().find(|p| !filter.contains(p));
                return Err(format!("{q} N={n}: structural backend differs (e.g. {stray:?})"));
            }
            Ok(())
        })
    });
    (m, r)
}

fn oracle_counts(n: usize, q: Pattern) -> Result<Vec<u64>, String> {
    let e = if n <= FILTER_DEFAULT_LIMIT {
        Enumerator::default()
    } else {
        Enumerator::structural()
    };
    e.winnable_counts(n, q).map_err(|e| e.to_string())
}

fn oracle_321(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(ORACLE_LIMIT).min(STRUCTURAL_LIMIT);
    let r = (2..=m).try_for_each(|n| {
        let counts = oracle_counts(n, Pattern::P321)?;
        (1..n).try_for_each(|k| {
            let closed = s_closed(k, n).map_err(|e| e.to_string())?;
            if BigUint::from(counts[k]) == closed {
                Ok(())
            } else {
                Err(format!("N={n} k={k}: brute force {} vs closed form {closed}", counts[k]))
            }
        })
    });
    (m, r)
}

fn oracle_231(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(ORACLE_LIMIT).min(STRUCTURAL_LIMIT);
    let r = (2..=m).try_for_each(|n| {
        let counts = oracle_counts(n, Pattern::P231)?;
        let expected = catalan(n - 1);
        counts.iter().enumerate().try_for_each(|(k, &c)| {
            if BigUint::from(c) == expected {
                Ok(())
            } else {
                Err(format!("N={n} k={k}: {c} winnable 231-avoiders, expected {expected}"))
            }
        })
    });
    (m, r)
}

fn unique_extension(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(EXTENSION_LIMIT);
    let r = (2..=m).try_for_each(|n| match find_extension_counterexample(n) {
        Ok(None) => Ok(()),
        Ok(Some(f)) => Err(format!(
            "base {} k={}: winners {:?}, constructed {}",
            f.base, f.k, f.winners, f.constructed
        )),
        Err(e) => Err(e.to_string()),
    });
    (m, r)
}

fn dyck_roundtrip(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(DYCK_LIMIT);
    let r = (1..=m).try_for_each(|n| {
        let mut images = BTreeSet::new();
        for d in enumerate_dyck(n).map_err(|e| e.to_string())? {
            let p = perm_from_dyck(&d);
            if contains_pattern(&p, Pattern::P321) {
                return Err(format!("{d} maps to {p}, which contains 321"));
            }
            let back = dyck_from_perm(&p).map_err(|e| e.to_string())?;
            if back != d {
                return Err(format!("{d} -> {p} -> {back}"));
            }
            let corners = ne_corners(&d);
            let rebuilt = dyck_from_corners(&corners, n).map_err(|e| e.to_string())?;
            if rebuilt != d {
                return Err(format!("{d} -> {corners} -> {rebuilt}"));
            }
            images.insert(p);
        }
        if BigUint::from(images.len()) != catalan(n) {
            return Err(format!("N={n}: {} distinct images, expected C_{n}", images.len()));
        }
        Ok(())
    });
    (m, r)
}

fn closed_forms(n_max: usize) -> (usize, Result<(), String>) {
    (n_max, routes_agree(n_max))
}

fn optimal_law(n_max: usize) -> (usize, Result<(), String>) {
    if n_max < 2 {
        return (n_max, Ok(()));
    }
    let r = optimal_k_321_range(n_max)
        .map_err(|e| e.to_string())
        .and_then(|all| {
            all.iter().try_for_each(|s| {
                let predicted = predicted_optimal_k_321(s.n);
                if Some(s.k_star) == predicted {
                    Ok(())
                } else {
                    Err(format!("N={}: argmax k={} (ties {:?}), law predicts {predicted:?}", s.n, s.k_star, s.ties))
                }
            })
        });
    (n_max, r)
}

fn dominance(n_max: usize) -> (usize, Result<(), String>) {
    if n_max < 9 {
        return (n_max, Ok(()));
    }
    let r = match dominance_check_321(n_max) {
        Ok(rep) => match rep.first_violation {
            None => Ok(()),
            Some(v) => Err(format!("N={} i={}: S_3 = {} <= S_i = {}", v.n, v.i, v.s3, v.si)),
        },
        Err(e) => Err(e.to_string()),
    };
    (n_max, r)
}

fn ratio_bounds(n_max: usize) -> (usize, Result<(), String>) {
    // 4 C_{N-1} > C_N >= 3 C_{N-1}, equality only at N = 5
    let r = (5..=n_max).try_for_each(|n| {
        let (a, b) = (catalan(n - 1), catalan(n));
        let ok = &a * 4u32 > b && &a * 3u32 <= b && ((&a * 3u32 == b) == (n == 5));
        if ok {
            Ok(())
        } else {
            Err(format!("N={n}: C_(N-1)/C_N = {a}/{b}"))
        }
    });
    (n_max, r)
}

fn t_bound(n_max: usize) -> (usize, Result<(), String>) {
    let r = (6..=n_max).try_for_each(|n| {
        let c = catalan(n);
        let mut prev: Option<BigUint> = None;
        for i in 1..n {
            let t = t_closed(i, n).map_err(|e| e.to_string())?;
            if prev.as_ref().is_some_and(|p| &t >= p) {
                return Err(format!("N={n}: T_{i} is not below T_{}", i - 1));
            }
            if i + 5 <= n {
                let lhs = BigUint::from(3u32) * BigUint::from(4u32).pow(i as u32 - 1) * &t;
                let rhs = BigUint::from(3u32).pow(i as u32 - 1) * &c;
                if lhs > rhs {
                    return Err(format!("N={n} i={i}: T_i/C_N = {t}/{c} exceeds (1/3)(3/4)^(i-1)"));
                }
            }
            prev = Some(t);
        }
        Ok(())
    });
    (n_max, r)
}

fn limits(_: usize) -> (usize, Result<(), String>) {
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let l321 = asymptotic_success(ModelId::Model321);
    let l231 = asymptotic_success(ModelId::Model231);
    let r = if l321 != q(31, 64) {
        Err(format!("321 limit {l321}, expected 31/64"))
    } else if l231 != q(1, 4) {
        Err(format!("231 limit {l231}, expected 1/4"))
    } else {
        Ok(())
    };
    (0, r)
}

fn sampler_support(n_max: usize) -> (usize, Result<(), String>) {
    let m = n_max.min(ALL_PERMS_LIMIT);
    let mut rng = RngStream::new(0);
    let r = [Pattern::P321, Pattern::P231].into_iter().try_for_each(|q| {
        (1..=m).try_for_each(|n| {
            let s = AvoiderSampler::new(n, q).map_err(|e| e.to_string())?;
            (0..1000).try_for_each(|_| {
                let p = s.sample(&mut rng);
                if p.len() != n || contains_pattern(&p, q) {
                    Err(format!("sampler for {q} at N={n} produced {p}"))
                } else {
                    Ok(())
                }
            })
        })
    });
    (m, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stops_at_first_failure() {
        let list: &[(&'static str, CheckFn)] = &[
            ("a", |n| (n, Ok(()))),
            ("b", |n| (n, Err(format!("broken at {n}")))),
            ("c", |_| unreachable!("runs after a failure")),
        ];
        let mut seen = Vec::new();
        let done = run_list(list, 4, |c| seen.push(c.name));
        assert_eq!(seen, ["a", "b"]);
        assert_eq!(done.last().unwrap().outcome, Err("broken at 4".to_string()));
    }
}
