//! Node-constraint matrices and their kernels over a prime field.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::PrimeField;
use super::ToricError;
use crate::graph::{Divisor, Multigraph};
use crate::seed::derive_seed;

/// One row per node, one column block per component.
///
/// Block `i` has one column per basis function of the component's local
/// sections, so its width is the local degree plus one. A row may only be
/// nonzero inside the blocks of the two components meeting at its node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeConstraintMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    /// `block_offsets[b]..block_offsets[b + 1]` are the columns of block `b`.
    block_offsets: Vec<usize>,
    entries: Vec<u64>,
}

/// How generic entries are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntrySampling {
    pub field: PrimeField,
    /// Restrict to nonzero field elements.
    pub nonzero: bool,
}

/// Entry at `(row, col)`, uniform in the field and a pure function of the
/// seed and the position.
fn draw_entry(sampling: &EntrySampling, seed: u64, row: usize, col: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, row as u64, col as u64]));
    sampling.field.random(&mut rng, sampling.nonzero)
}

impl NodeConstraintMatrix {
    /// Generic matrix with the given block widths where row `r` is supported
    /// on the blocks `b` with `support[r][b] == true`.
    pub fn generic_with_support(
        widths: &[usize],
        support: &[Vec<bool>],
        seed: u64,
        sampling: EntrySampling,
    ) -> Self {
        let mut block_offsets = Vec::with_capacity(widths.len() + 1);
        block_offsets.push(0);
        for w in widths {
            block_offsets.push(block_offsets.last().unwrap() + w);
        }
        let rows = support.len();
        let cols = *block_offsets.last().unwrap();
        let mut entries = vec![0u64; rows * cols];
        for (r, blocks) in support.iter().enumerate() {
            assert_eq!(blocks.len(), widths.len(), "support row {r} has the wrong block count");
            for (b, &on) in blocks.iter().enumerate() {
                if on {
                    for c in block_offsets[b]..block_offsets[b + 1] {
                        entries[r * cols + c] = draw_entry(&sampling, seed, r, c);
                    }
                }
            }
        }
        NodeConstraintMatrix { field: sampling.field, rows, cols, block_offsets, entries }
    }

    pub fn from_entries(field: PrimeField, widths: &[usize], rows: Vec<Vec<u64>>) -> Self {
        let mut block_offsets = vec![0];
        for w in widths {
            block_offsets.push(block_offsets.last().unwrap() + w);
        }
        let cols = *block_offsets.last().unwrap();
        assert!(rows.iter().all(|r| r.len() == cols), "row width must equal total block width");
        NodeConstraintMatrix {
            field,
            rows: rows.len(),
            cols,
            block_offsets,
            entries: rows.into_iter().flatten().map(|x| x % field.modulus()).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn block_count(&self) -> usize {
        self.block_offsets.len() - 1
    }

    pub fn block_columns(&self, b: usize) -> std::ops::Range<usize> {
        self.block_offsets[b]..self.block_offsets[b + 1]
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    /// Basis of `{v : M v = 0}` from the reduced row echelon form. Empty iff
    /// the matrix has full column rank.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = &self.field;
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rref[r * self.cols + free]);
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.get(r, c), v[c]))))
            .collect()
    }

    fn rref(&self) -> (Vec<u64>, Vec<usize>) {
        let f = &self.field;
        let cols = self.cols;
        let mut a = self.entries.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(a[r * cols + c]);
            for j in c..cols {
                a[r * cols + j] = f.mul(a[r * cols + j], inv);
            }
            for i in 0..self.rows {
                let factor = a[i * cols + c];
                if i != r && factor != 0 {
                    for j in c..cols {
                        let t = f.mul(factor, a[r * cols + j]);
                        a[i * cols + j] = f.sub(a[i * cols + j], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }
}

/// The node-constraint matrix of an effective divisor `d` on `g`.
///
/// Rows follow the canonical edge order; block `i` has width `d_i + 1`. The
/// random entries stand in for evaluations, at generic node points, of a
/// basis of the sections on each component.
pub fn build_constraint_matrix(
    g: &Multigraph,
    d: &Divisor,
    seed: u64,
    sampling: EntrySampling,
) -> Result<NodeConstraintMatrix, ToricError> {
    g.check_divisor(d)?;
    if !d.is_effective() {
        return Err(ToricError::NotEffective(d.clone()));
    }
    let n = g.vertex_count();
    let widths: Vec<usize> = d.coeffs().iter().map(|&c| c as usize + 1).collect();
    let support: Vec<Vec<bool>> = g
        .edges()
        .into_iter()
        .map(|(i, j)| (0..n).map(|b| b == i || b == j).collect())
        .collect();
    Ok(NodeConstraintMatrix::generic_with_support(&widths, &support, seed, sampling))
}
