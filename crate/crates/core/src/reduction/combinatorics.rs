//! Label-sum bounds for reduction trees.

use crate::error::{Error, Result};

/// `d(n) = n(n+1)/2 - 1`, the largest possible sum of labels `≥ 2` over
/// trees with root label `n`.
pub fn d(n: u64) -> u64 {
    assert!(n >= 1, "d(n) needs n ≥ 1");
    n * (n + 1) / 2 - 1
}

/// Largest brute-force allowed size.
pub const BRUTE_FORCE_MAX: u64 = 8;

/// Maximizes the label sum by enumerating every tree: each vertex labeled
/// `m ≥ 2` has children whose labels form a partition of `m` into at
/// least two parts.
pub fn brute_force_d(n: u64) -> Result<u64> {
    if n == 0 || n > BRUTE_FORCE_MAX {
        return Err(Error::Invalid(format!("brute force needs 1 ≤ n ≤ {BRUTE_FORCE_MAX}, got {n}")));
    }
    Ok(best(n))
}

fn best(m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut top = 0;
    for parts in partitions(m) {
        if parts.len() >= 2 {
            top = top.max(parts.iter().map(|&p| best(p)).sum());
        }
    }
    m + top
}

/// All partitions of `m` as non-increasing part lists.
pub fn partitions(m: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// Number of distinct trees with root label `n` (unordered children).
pub fn count_trees(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    partitions(n)
        .into_iter()
        .filter(|p| p.len() >= 2)
        .map(|p| p.iter().map(|&q| count_trees(q)).product::<u64>())
        .sum()
}
