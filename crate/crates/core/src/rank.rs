//! Baker–Norine rank by exhaustive chip removal, and the graph Riemann–Roch check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Divisor, Multigraph};
use crate::linear_system::{linear_system, LinearSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("degree must be nonnegative, got {0}")]
    NegativeDegree(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: i64,
    /// The lexicographically first removal `E` of degree `rank + 1` that
    /// leaves nothing effective.
    pub witness_failure: Option<Divisor>,
}

/// All nonnegative vectors of length `n` summing to `d`, in lexicographic order.
pub fn effective_divisors_of_degree(n: usize, d: i64) -> Result<Vec<Divisor>, RankError> {
    if d < 0 {
        return Err(RankError::NegativeDegree(d));
    }
    Ok(bounded_compositions(n, d, 0, d))
}

/// All integer vectors of length `n` with entries in `[-window, d + window]`
/// summing to `d`, in lexicographic order.
pub fn non_effective_divisors_of_degree(n: usize, d: i64, window: i64) -> Vec<Divisor> {
    let lo = -window;
    let hi = d + window;
    if lo > hi {
        return Vec::new();
    }
    bounded_compositions(n, d, lo, hi)
}

fn bounded_compositions(n: usize, total: i64, lo: i64, hi: i64) -> Vec<Divisor> {
    fn go(i: usize, n: usize, rest: i64, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Divisor>) {
        if i == n {
            if rest == 0 {
                out.push(Divisor::new(cur.clone()));
            }
            return;
        }
        let left = (n - i - 1) as i64;
        // remaining coordinates can absorb between left*lo and left*hi
        let first = lo.max(rest - left * hi);
        let last = hi.min(rest - left * lo);
        for x in first..=last {
            cur.push(x);
            go(i + 1, n, rest - x, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, total, lo, hi, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Shared skeleton of the graph and toric rank searches.
///
/// Tries removals `E` of degree 0, 1, 2, ... in lexicographic order and stops
/// at the first `E` for which `survives(E)` is false. `max_degree` must be an
/// upper bound past which nothing survives.
pub(crate) fn rank_search(n: usize, max_degree: i64, mut survives: impl FnMut(&Divisor) -> bool) -> RankResult {
    let mut k = 0;
    loop {
        for e in effective_divisors_of_degree(n, k).expect("k >= 0") {
            if !survives(&e) {
                return RankResult { rank: k - 1, witness_failure: Some(e) };
            }
        }
        k += 1;
        assert!(k <= max_degree + 1, "removal of degree {k} survived, beyond the divisor's degree");
    }
}

/// Baker–Norine rank of `d`.
pub fn rank(g: &Multigraph, d: &Divisor) -> RankResult {
    let ls = linear_system(g, d);
    rank_from_system(g, &ls)
}

/// Rank of the base divisor of an already computed `|D|`.
pub fn rank_from_system(g: &Multigraph, ls: &LinearSystem) -> RankResult {
    rank_search(g.vertex_count(), ls.base().degree(), |e| ls.iter().any(|m| m.dominates(e)))
}

/// `r(D) - r(K - D) - deg(D) - 1 + g`; zero whenever Riemann–Roch holds.
pub fn rr_residual(g: &Multigraph, d: &Divisor) -> i64 {
    let k = g.canonical_divisor();
    let r = rank(g, d).rank;
    let rk = rank(g, &(&k - d)).rank;
    r - rk - d.degree() - 1 + g.genus()
}

pub fn verify_rr_graph(g: &Multigraph, d: &Divisor) -> bool {
    rr_residual(g, d) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divs(v: &[&[i64]]) -> Vec<Divisor> {
        v.iter().map(|c| Divisor::new(c.to_vec())).collect()
    }

    #[test]
    fn effective_enumeration() {
        assert_eq!(effective_divisors_of_degree(3, 0).unwrap(), divs(&[&[0, 0, 0]]));
        assert_eq!(effective_divisors_of_degree(2, 2).unwrap(), divs(&[&[0, 2], &[1, 1], &[2, 0]]));
        assert_eq!(effective_divisors_of_degree(4, 2).unwrap().len(), 10);
        assert_eq!(effective_divisors_of_degree(2, -1), Err(RankError::NegativeDegree(-1)));
    }

    #[test]
    fn windowed_enumeration() {
        assert_eq!(non_effective_divisors_of_degree(2, 0, 0), divs(&[&[0, 0]]));
        assert_eq!(non_effective_divisors_of_degree(2, 0, 1), divs(&[&[-1, 1], &[0, 0], &[1, -1]]));
        assert_eq!(non_effective_divisors_of_degree(1, 3, 0), divs(&[&[3]]));
        assert!(non_effective_divisors_of_degree(2, -3, 1).is_empty());
        assert_eq!(non_effective_divisors_of_degree(2, -2, 1), divs(&[&[-1, -1]]));
    }

    #[test]
    fn zero_divisor_has_rank_zero() {
        for g in [Multigraph::cycle(4), Multigraph::path(3), Multigraph::complete(4)] {
            let r = rank(&g, &g.zero_divisor());
            assert_eq!(r.rank, 0);
            assert_eq!(r.witness_failure.unwrap().degree(), 1);
        }
    }

    #[test]
    fn trees_have_rank_equal_to_degree() {
        let g = Multigraph::path(4);
        for d in [vec![2, 0, -1, 1], vec![0, 0, 0, 3], vec![-2, 1, 1, 0]] {
            let d = Divisor::new(d);
            assert_eq!(rank(&g, &d).rank, d.degree());
        }
    }

    #[test]
    fn single_chip_on_four_cycle() {
        let r = rank(&Multigraph::cycle(4), &Divisor::unit(4, 0));
        assert_eq!(r.rank, 0);
        // |D| = {D}, so removing a chip anywhere else already fails
        assert_eq!(r.witness_failure, Some(Divisor::new(vec![0, 0, 0, 1])));
    }

    #[test]
    fn unwinnable_has_rank_minus_one() {
        let r = rank(&Multigraph::cycle(4), &Divisor::new(vec![1, -1, 0, 0]));
        assert_eq!(r.rank, -1);
        assert_eq!(r.witness_failure, Some(Divisor::zero(4)));
    }

    #[test]
    fn riemann_roch_examples() {
        let c4 = Multigraph::cycle(4);
        assert!(verify_rr_graph(&c4, &c4.canonical_divisor()));
        assert_eq!(rr_residual(&c4, &Divisor::new(vec![1, -1, 2, 0])), 0);
        let k4 = Multigraph::complete(4);
        assert!(verify_rr_graph(&k4, &Divisor::new(vec![2, -1, 0, 1])));
    }
}
