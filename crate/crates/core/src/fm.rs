//! Exact Fourier–Motzkin elimination over the rationals.
//!
//! Systems are stored as `coeffs · x >= bound`. Internally every row is
//! scaled to primitive integer form, so elimination never touches floating
//! point and every projection bound is an exact rational.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmError {
    #[error("row has {got} coefficients, system dimension is {expected}")]
    RowLength { got: usize, expected: usize },
    #[error("coordinate {0} is unbounded")]
    Unbounded(usize),
    #[error("system has no rational solution")]
    Infeasible,
    #[error("integer overflow during elimination")]
    Overflow,
}

/// One constraint `coeffs · x >= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceSystem {
    dim: usize,
    rows: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize) -> Self {
        HalfspaceSystem { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, bound: Rational) -> Result<(), FmError> {
        if coeffs.len() != self.dim {
            return Err(FmError::RowLength { got: coeffs.len(), expected: self.dim });
        }
        self.rows.push(Halfspace { coeffs, bound });
        Ok(())
    }

    pub fn push_integer(&mut self, coeffs: &[i64], bound: i64) -> Result<(), FmError> {
        self.push(
            coeffs.iter().map(|&c| Rational::from_integer(c as i128)).collect(),
            Rational::from_integer(bound as i128),
        )
    }

    /// Exact rational `(min, max)` of every coordinate over the polyhedron.
    pub fn exact_bounds(&self) -> Result<Vec<(Rational, Rational)>, FmError> {
        let base = self.integer_rows()?;
        let mut out = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let mut rows = base.clone();
            for j in (0..self.dim).filter(|&j| j != k) {
                rows = eliminate(rows, j)?;
            }
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for r in &rows {
                let a = r.coeffs[k];
                let v = Rational::new(r.bound, a);
                if a > 0 {
                    lo = Some(lo.map_or(v, |l| l.max(v)));
                } else {
                    hi = Some(hi.map_or(v, |h| h.min(v)));
                }
            }
            match (lo, hi) {
                (Some(l), Some(h)) if l > h => return Err(FmError::Infeasible),
                (Some(l), Some(h)) => out.push((l, h)),
                _ => return Err(FmError::Unbounded(k)),
            }
        }
        Ok(out)
    }

    fn integer_rows(&self) -> Result<Vec<IntRow>, FmError> {
        let mut out = Vec::with_capacity(self.rows.len());
        for h in &self.rows {
            let mut scale: i128 = 1;
            for c in h.coeffs.iter().chain(std::iter::once(&h.bound)) {
                scale = scale.lcm(c.denom());
            }
            let coeffs = h
                .coeffs
                .iter()
                .map(|c| c.numer().checked_mul(scale / c.denom()).ok_or(FmError::Overflow))
                .collect::<Result<Vec<_>, _>>()?;
            let bound =
                h.bound.numer().checked_mul(scale / h.bound.denom()).ok_or(FmError::Overflow)?;
            out.push(IntRow { coeffs, bound });
        }
        prune(out)
    }
}

/// Integer box containing every integer point of the polyhedron.
///
/// Exact rational bounds are rounded toward zero: floor when the bound is
/// nonnegative and ceiling when it is negative, on both ends. This can only
/// widen the box.
pub fn fm_bounds(system: &HalfspaceSystem) -> Result<Vec<(i64, i64)>, FmError> {
    system
        .exact_bounds()?
        .into_iter()
        .map(|(lo, hi)| Ok((round_toward_zero(lo)?, round_toward_zero(hi)?)))
        .collect()
}

fn round_toward_zero(x: Rational) -> Result<i64, FmError> {
    let r = if x >= Rational::from_integer(0) { x.floor() } else { x.ceil() };
    i64::try_from(r.to_integer()).map_err(|_| FmError::Overflow)
}

/// `coeffs · x >= bound` with integer data.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IntRow {
    coeffs: Vec<i128>,
    bound: i128,
}

/// Combine every lower bound on `x_k` with every upper bound, dropping `x_k`.
fn eliminate(rows: Vec<IntRow>, k: usize) -> Result<Vec<IntRow>, FmError> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        match r.coeffs[k].signum() {
            1 => pos.push(r),
            -1 => neg.push(r),
            _ => out.push(r),
        }
    }
    for p in &pos {
        for q in &neg {
            let sp = -q.coeffs[k];
            let sq = p.coeffs[k];
            let mut coeffs = Vec::with_capacity(p.coeffs.len());
            for (a, b) in p.coeffs.iter().zip(&q.coeffs) {
                coeffs.push(checked_comb(*a, sp, *b, sq)?);
            }
            coeffs[k] = 0;
            let bound = checked_comb(p.bound, sp, q.bound, sq)?;
            out.push(IntRow { coeffs, bound });
        }
    }
    prune(out)
}

fn checked_comb(a: i128, sa: i128, b: i128, sb: i128) -> Result<i128, FmError> {
    a.checked_mul(sa)
        .and_then(|x| b.checked_mul(sb).and_then(|y| x.checked_add(y)))
        .ok_or(FmError::Overflow)
}

/// Normalizes rows, rejects `0 >= positive`, and keeps only the tightest row
/// per primitive direction.
fn prune(rows: Vec<IntRow>) -> Result<Vec<IntRow>, FmError> {
    // direction -> (scale g, bound b); the row reads g·dir·x >= b, i.e. dir·x >= b/g.
    let mut best: BTreeMap<Vec<i128>, (i128, i128)> = BTreeMap::new();
    for r in rows {
        let g = r.coeffs.iter().fold(0i128, |acc, &c| acc.gcd(&c));
        if g == 0 {
            if r.bound > 0 {
                return Err(FmError::Infeasible);
            }
            continue;
        }
        let dir: Vec<i128> = r.coeffs.iter().map(|c| c / g).collect();
        let h = g.gcd(&r.bound);
        let (g, b) = (g / h, r.bound / h);
        match best.get_mut(&dir) {
            Some(slot) => {
                // b/g > slot.1/slot.0  <=>  b * slot.0 > slot.1 * g
                let lhs = b.checked_mul(slot.0).ok_or(FmError::Overflow)?;
                let rhs = slot.1.checked_mul(g).ok_or(FmError::Overflow)?;
                if lhs > rhs {
                    *slot = (g, b);
                }
            }
            None => {
                best.insert(dir, (g, b));
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|(dir, (g, b))| IntRow { coeffs: dir.into_iter().map(|c| c * g).collect(), bound: b })
        .collect())
}

/// Projection chain used to walk the integer points of a bounded polyhedron
/// in lexicographic order.
///
/// `levels[k]` holds rows that only involve `x_0..=x_k`; it is obtained from
/// the full system by eliminating `x_{k+1}, ..., x_{m-1}`. Fixing a prefix of
/// coordinates and reading off the range of the next one from its level
/// prunes every branch that has no rational completion.
pub(crate) struct ProjectionChain {
    dim: usize,
    levels: Vec<Vec<IntRow>>,
}

impl ProjectionChain {
    pub(crate) fn new(system: &HalfspaceSystem) -> Result<Self, FmError> {
        let dim = system.dim;
        let mut levels = vec![Vec::new(); dim];
        let mut rows = system.integer_rows()?;
        for k in (0..dim).rev() {
            levels[k] = rows.clone();
            if k > 0 {
                rows = eliminate(rows, k)?;
            }
        }
        Ok(ProjectionChain { dim, levels })
    }

    /// Visits every integer point inside `bbox` that satisfies the system,
    /// in lexicographic order.
    pub(crate) fn for_each_point(&self, bbox: &[(i64, i64)], mut visit: impl FnMut(&[i64])) {
        assert_eq!(bbox.len(), self.dim);
        let mut point = vec![0i64; self.dim];
        if self.dim == 0 {
            visit(&point);
            return;
        }
        self.descend(0, bbox, &mut point, &mut visit);
    }

    fn descend(&self, k: usize, bbox: &[(i64, i64)], point: &mut [i64], visit: &mut impl FnMut(&[i64])) {
        let (mut lo, mut hi) = (bbox[k].0 as i128, bbox[k].1 as i128);
        for r in &self.levels[k] {
            let rest: i128 = r.coeffs[..k].iter().zip(point.iter()).map(|(a, &x)| a * x as i128).sum();
            let s = r.bound - rest;
            let a = r.coeffs[k];
            if a > 0 {
                lo = lo.max(Integer::div_ceil(&s, &a));
            } else if a < 0 {
                // a·x >= s with a < 0  <=>  x <= s / a
                hi = hi.min(Integer::div_floor(&s, &a));
            } else if s > 0 {
                return;
            }
            if lo > hi {
                return;
            }
        }
        for x in lo..=hi {
            point[k] = x as i64;
            if k + 1 == self.dim {
                visit(point);
            } else {
                self.descend(k + 1, bbox, point, visit);
            }
        }
    }
}
