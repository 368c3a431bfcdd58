use anyhow::{bail, Context, Result};

/// Parses a size set such as `2..12`, `2..18,100000`, `9` or `10^5`.
///
/// Ranges are inclusive (`a..b` and `a..=b` mean the same). Order is kept and
/// repeated sizes are dropped.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            bail!("empty item in size list {text:?}");
        }
        if let Some((a, b)) = item.split_once("..") {
            let lo = parse_one(a)?;
            let hi = parse_one(b.trim_start_matches('='))?;
            if hi < lo {
                bail!("empty range {item:?}");
            }
            out.extend(lo..=hi);
        } else {
            out.push(parse_one(item)?);
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|n| seen.insert(*n));
    Ok(out)
}

fn parse_one(s: &str) -> Result<usize> {
    let s = s.trim();
    let pow = |base: &str, exp: &str| -> Result<usize> {
        let base: usize = base.parse().with_context(|| format!("bad size {s:?}"))?;
        let exp: u32 = exp.parse().with_context(|| format!("bad size {s:?}"))?;
        base.checked_pow(exp).with_context(|| format!("size {s:?} overflows"))
    };
    if let Some((b, e)) = s.split_once('^') {
        pow(b, e)
    } else if let Some((b, e)) = s.split_once(['e', 'E']) {
        Ok(pow("10", e)? * b.parse::<usize>().with_context(|| format!("bad size {s:?}"))?)
    } else {
        s.parse().with_context(|| format!("bad size {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_sizes("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_sizes("2..=3,100000").unwrap(), vec![2, 3, 100000]);
        assert_eq!(parse_sizes("10^5").unwrap(), vec![100000]);
        assert_eq!(parse_sizes("1e5, 7").unwrap(), vec![100000, 7]);
        assert_eq!(parse_sizes("4,2..4").unwrap(), vec![4, 2, 3]);
        assert!(parse_sizes("5..2").is_err());
        assert!(parse_sizes("").is_err());
        assert!(parse_sizes("x").is_err());
    }
}
