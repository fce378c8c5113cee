//! Chip-firing moves and complete enumeration of linear systems `|D|`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fm::{fm_bounds, FmError, HalfspaceSystem, ProjectionChain};
use crate::graph::{Divisor, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiringError {
    #[error("dimension mismatch: graph has {vertices} vertices, divisor {divisor}, firing vector {firing}")]
    DimensionMismatch { vertices: usize, divisor: usize, firing: usize },
}

/// Net borrowing count per vertex; negative entries are net lending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiringVector(pub Vec<i64>);

impl FiringVector {
    pub fn zero(n: usize) -> Self {
        FiringVector(vec![0; n])
    }

    pub fn constant(n: usize, c: i64) -> Self {
        FiringVector(vec![c; n])
    }
}

/// `D + L f`. A unit borrow at `v` adds `deg(v)` chips at `v` and takes
/// `adj(v, w)` chips from every neighbour `w`.
pub fn apply_firing(g: &Multigraph, d: &Divisor, f: &FiringVector) -> Result<Divisor, FiringError> {
    let n = g.vertex_count();
    if d.len() != n || f.0.len() != n {
        return Err(FiringError::DimensionMismatch { vertices: n, divisor: d.len(), firing: f.0.len() });
    }
    let lf = g.laplacian().mul_vec(&f.0);
    Ok(Divisor::new(d.coeffs().iter().zip(lf).map(|(a, b)| a + b).collect()))
}

/// The effective divisors linearly equivalent to `base`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    base: Divisor,
    members: Vec<Divisor>,
}

impl LinearSystem {
    pub fn base(&self) -> &Divisor {
        &self.base
    }

    pub fn members(&self) -> &[Divisor] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, d: &Divisor) -> bool {
        self.members.binary_search(d).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Divisor> {
        self.members.iter()
    }
}

/// The firing polytope `{f : D + L f >= 0}` with `f_0` pinned to zero,
/// written over the remaining `n - 1` coordinates.
///
/// With one coordinate pinned the polytope is bounded: its recession cone is
/// `{f : L f >= 0, f_0 = 0}`, and for a connected graph `L f >= 0` forces `f`
/// to be constant (the entries of `L f` sum to zero, so they are all zero).
pub fn firing_polytope(g: &Multigraph, d: &Divisor) -> HalfspaceSystem {
    let n = g.vertex_count();
    let l = g.laplacian();
    let mut sys = HalfspaceSystem::new(n - 1);
    for k in 0..n {
        sys.push_integer(&l.row(k)[1..], -d[k]).expect("row length is n - 1");
    }
    sys
}

/// Every effective divisor equivalent to `d`.
///
/// Divisors of negative degree short-circuit to the empty system. Otherwise
/// the integer points of the pinned firing polytope are walked in
/// lexicographic order inside its Fourier–Motzkin bounding box.
pub fn linear_system(g: &Multigraph, d: &Divisor) -> LinearSystem {
    assert_eq!(d.len(), g.vertex_count(), "divisor length must match vertex count");
    let base = d.clone();
    if d.degree() <= -1 {
        return LinearSystem { base, members: Vec::new() };
    }
    let n = g.vertex_count();
    let sys = firing_polytope(g, d);
    let bbox = match fm_bounds(&sys) {
        Ok(b) => b,
        Err(FmError::Infeasible) => return LinearSystem { base, members: Vec::new() },
        Err(e) => panic!("firing polytope of a connected graph must be bounded: {e}"),
    };
    let chain = ProjectionChain::new(&sys).expect("firing polytope elimination");
    let l = g.laplacian();
    let mut found = BTreeSet::new();
    let mut image = vec![0i64; n];
    chain.for_each_point(&bbox, |f| {
        for (k, slot) in image.iter_mut().enumerate() {
            let row = &l.row(k)[1..];
            *slot = d[k] + row.iter().zip(f).map(|(a, b)| a * b).sum::<i64>();
        }
        if image.iter().all(|&c| c >= 0) {
            found.insert(Divisor::new(image.clone()));
        }
    });
    LinearSystem { base, members: found.into_iter().collect() }
}

/// True iff `d` is equivalent to an effective divisor.
pub fn is_effective_equivalent(g: &Multigraph, d: &Divisor) -> bool {
    !linear_system(g, d).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Multigraph {
        Multigraph::cycle(4)
    }

    #[test]
    fn identity_and_constant_firings() {
        let g = c4();
        let d = Divisor::new(vec![1, -1, 3, 0]);
        assert_eq!(apply_firing(&g, &d, &FiringVector::zero(4)).unwrap(), d);
        assert_eq!(apply_firing(&g, &d, &FiringVector::constant(4, 1)).unwrap(), d);
        assert_eq!(apply_firing(&g, &d, &FiringVector::constant(4, -7)).unwrap(), d);
    }

    #[test]
    fn single_borrow_takes_a_chip_from_each_neighbour() {
        // Star with the centre at vertex 0.
        let g = Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let d = Divisor::new(vec![0, 1, 1, 1]);
        let out = apply_firing(&g, &d, &FiringVector(vec![1, 0, 0, 0])).unwrap();
        assert_eq!(out, Divisor::new(vec![3, 0, 0, 0]));
    }

    #[test]
    fn firing_dimension_mismatch() {
        let g = c4();
        assert!(apply_firing(&g, &Divisor::zero(3), &FiringVector::zero(4)).is_err());
        assert!(apply_firing(&g, &Divisor::zero(4), &FiringVector::zero(2)).is_err());
    }

    #[test]
    fn negative_degree_is_empty() {
        let g = c4();
        assert!(linear_system(&g, &Divisor::new(vec![0, -1, 0, 0])).is_empty());
    }

    #[test]
    fn zero_divisor_system() {
        let g = c4();
        let ls = linear_system(&g, &Divisor::zero(4));
        assert_eq!(ls.members(), &[Divisor::zero(4)]);
    }

    #[test]
    fn single_chip_on_a_cycle_cannot_move() {
        // v0 - v1 generates the Jacobian Z/4 of C4, so no two single-chip
        // divisors are equivalent.
        let g = c4();
        let ls = linear_system(&g, &Divisor::unit(4, 0));
        assert_eq!(ls.members(), &[Divisor::unit(4, 0)]);
    }

    #[test]
    fn unwinnable_degree_zero_on_cycle() {
        let g = c4();
        assert!(!is_effective_equivalent(&g, &Divisor::new(vec![1, -1, 0, 0])));
        assert!(is_effective_equivalent(&g, &Divisor::new(vec![2, -1, 0, 0])));
    }

    #[test]
    fn single_vertex() {
        let g = Multigraph::single_vertex();
        assert_eq!(linear_system(&g, &Divisor::new(vec![3])).members(), &[Divisor::new(vec![3])]);
        assert!(linear_system(&g, &Divisor::new(vec![-1])).is_empty());
    }

    #[test]
    fn firing_polytope_box_contains_brute_force_witnesses() {
        // (1,-1,0,0) is not winnable on C4, so its witness set is empty but the
        // rational polytope is not; (2,-1,0,0) has witnesses.
        let g = c4();
        let l = g.laplacian();
        for (coeffs, expect_witness) in [(vec![1, -1, 0, 0], false), (vec![2, -1, 0, 0], true)] {
            let d = Divisor::new(coeffs);
            let bbox = fm_bounds(&firing_polytope(&g, &d)).unwrap();
            let mut witnesses = 0;
            for a in -10..=10 {
                for b in -10..=10 {
                    for c in -10..=10 {
                        let lf = l.mul_vec(&[0, a, b, c]);
                        if (0..4).all(|k| d[k] + lf[k] >= 0) {
                            witnesses += 1;
                            for (i, &x) in [a, b, c].iter().enumerate() {
                                assert!(bbox[i].0 <= x && x <= bbox[i].1);
                            }
                        }
                    }
                }
            }
            assert_eq!(witnesses > 0, expect_witness);
        }
    }
}
