//! Multigraphs, divisors and the integer matrices derived from them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("adjacency matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("adjacency entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: i64 },
    #[error("adjacency matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("vertex {0} has a loop; loops are not allowed")]
    Loop(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("component index {index} out of range for {n} components")]
    ComponentOutOfRange { index: usize, n: usize },
    #[error("divisor has {got} entries but the graph has {expected} vertices")]
    DivisorLength { got: usize, expected: usize },
}

/// True iff the symmetric loopless adjacency matrix describes a connected graph.
///
/// Breadth-first search from vertex 0. The empty matrix is treated as not
/// connected; a single vertex is connected.
pub fn is_connected(adj: &[Vec<u32>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for (w, &m) in adj[v].iter().enumerate() {
            if m > 0 && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// A connected, loopless multigraph stored as its adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    adj: Vec<Vec<u32>>,
}

impl Multigraph {
    /// Validates symmetry, the zero diagonal and connectivity.
    pub fn from_adjacency(adj: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::NotSquare { row: i, len: row.len(), expected: n });
            }
        }
        for i in 0..n {
            if adj[i][i] != 0 {
                return Err(GraphError::Loop(i));
            }
            for j in (i + 1)..n {
                if adj[i][j] != adj[j][i] {
                    return Err(GraphError::Asymmetric { row: i, col: j });
                }
            }
        }
        if !is_connected(&adj) {
            return Err(GraphError::Disconnected);
        }
        Ok(Multigraph { adj })
    }

    /// Same as [`Multigraph::from_adjacency`] but accepts signed input, as
    /// read from files, rejecting negative entries.
    pub fn from_signed_adjacency(adj: Vec<Vec<i64>>) -> Result<Self, GraphError> {
        let mut out = Vec::with_capacity(adj.len());
        for (i, row) in adj.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, v) in row.into_iter().enumerate() {
                if v < 0 {
                    return Err(GraphError::NegativeEntry { row: i, col: j, value: v });
                }
                r.push(u32::try_from(v).map_err(|_| GraphError::NegativeEntry {
                    row: i,
                    col: j,
                    value: v,
                })?);
            }
            out.push(r);
        }
        Self::from_adjacency(out)
    }

    /// Builds a graph on `n` vertices from an edge list; repeated pairs add multiplicity.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![vec![0u32; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::ComponentOutOfRange { index: a.max(b), n });
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
        Self::from_adjacency(adj)
    }

    pub fn single_vertex() -> Self {
        Multigraph { adj: vec![vec![0]] }
    }

    /// Path v0 - v1 - ... - v(n-1).
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("paths are connected")
    }

    /// Cycle on `n >= 3` vertices; `n == 2` gives a double edge.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "a cycle needs at least two vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycles are connected")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Self::from_edges(n, &edges).expect("complete graphs are connected")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.adj[i][j]
    }

    /// Number of edges at `v`, counted with multiplicity.
    pub fn vertex_degree(&self, v: usize) -> u32 {
        self.adj[v].iter().sum()
    }

    /// The largest vertex degree. Not used by any rank computation.
    pub fn max_degree(&self) -> u32 {
        (0..self.vertex_count()).map(|v| self.vertex_degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        let n = self.vertex_count();
        let mut e = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                e += self.adj[i][j] as usize;
            }
        }
        e
    }

    /// Edges with multiplicity in canonical order: `i < j` lexicographically,
    /// each pair repeated once per parallel edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..n {
            for j in (i + 1)..n {
                for _ in 0..self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn genus(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64 + 1
    }

    /// `D - A`, the degree matrix minus the adjacency matrix.
    pub fn laplacian(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == j {
                    self.vertex_degree(i) as i64
                } else {
                    -(self.adj[i][j] as i64)
                };
                m.set(i, j, v);
            }
        }
        m
    }

    /// `K = sum (deg(v) - 2) v`.
    pub fn canonical_divisor(&self) -> Divisor {
        Divisor::new((0..self.vertex_count()).map(|v| self.vertex_degree(v) as i64 - 2).collect())
    }

    pub fn zero_divisor(&self) -> Divisor {
        Divisor::zero(self.vertex_count())
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<(), GraphError> {
        if d.len() != self.vertex_count() {
            return Err(GraphError::DivisorLength { got: d.len(), expected: self.vertex_count() });
        }
        Ok(())
    }

    /// Collapses a placement of curve points onto the dual graph: each vertex
    /// receives the total multiplicity placed on its component.
    pub fn specialize(&self, placement: &PointPlacement) -> Result<Divisor, GraphError> {
        let n = self.vertex_count();
        let mut coeffs = vec![0i64; n];
        for &(c, m) in &placement.points {
            if c >= n {
                return Err(GraphError::ComponentOutOfRange { index: c, n });
            }
            coeffs[c] += m;
        }
        Ok(Divisor::new(coeffs))
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let rows: Vec<String> = self
            .adj
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Integer chip counts per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Divisor(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// The divisor with a single chip at `v`.
    pub fn unit(n: usize, v: usize) -> Self {
        let mut c = vec![0; n];
        c[v] = 1;
        Divisor(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    /// Total number of chips.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Coefficient-wise `self >= other`.
    pub fn dominates(&self, other: &Divisor) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl Index<usize> for Divisor {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl AddAssign<&Divisor> for Divisor {
    fn add_assign(&mut self, rhs: &Divisor) {
        assert_eq!(self.len(), rhs.len(), "divisor length mismatch");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&Divisor> for Divisor {
    fn sub_assign(&mut self, rhs: &Divisor) {
        assert_eq!(self.len(), rhs.len(), "divisor length mismatch");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Add<&Divisor> for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Divisor> for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor(self.0.iter().map(|c| -c).collect())
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// A divisor on a graph curve, recorded only by which component each point
/// lies on. Component indices are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointPlacement {
    pub points: Vec<(usize, i64)>,
}

impl PointPlacement {
    pub fn new(points: Vec<(usize, i64)>) -> Self {
        PointPlacement { points }
    }

    /// Disjoint union of two placements.
    pub fn union(&self, other: &PointPlacement) -> PointPlacement {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        PointPlacement { points }
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.points.iter().map(|&(_, m)| m).sum()
    }
}
