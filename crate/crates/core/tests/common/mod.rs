//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the elimination or rank code of the library;
//! only the plain data types are shared.

#![allow(dead_code)]

use std::collections::BTreeSet;

use chipfire::{Divisor, Multigraph};

/// Every vector of length `n` with entries in `lo..=hi`, lexicographic.
pub fn boxed_vectors(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every divisor on `n` vertices with entries in `lo..=hi`.
pub fn divisors_in_box(n: usize, lo: i64, hi: i64) -> Vec<Divisor> {
    boxed_vectors(n, lo, hi).into_iter().map(Divisor::new).collect()
}

/// Effective divisors of degree `d` on `n` vertices, by plain recursion.
pub fn effective_of_degree(n: usize, d: i64) -> Vec<Divisor> {
    fn go(n: usize, d: i64, prefix: &mut Vec<i64>, out: &mut Vec<Divisor>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Divisor::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for x in 0..=d {
            prefix.push(x);
            go(n, d - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// `L f` computed from the adjacency matrix directly.
pub fn laplacian_times(g: &Multigraph, f: &[i64]) -> Vec<i64> {
    let adj = g.adjacency();
    let n = adj.len();
    (0..n)
        .map(|i| {
            let deg: i64 = adj[i].iter().map(|&m| m as i64).sum();
            deg * f[i] - (0..n).map(|j| adj[i][j] as i64 * f[j]).sum::<i64>()
        })
        .collect()
}

/// All distinct `L f` where `f` has some coordinate equal to zero and all
/// others in `[-range, range]`. The union over every choice of the zero
/// coordinate; each single choice is one `[-range, range]^{n-1}` box.
pub fn principal_images(g: &Multigraph, range: i64) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut images = BTreeSet::new();
    for pin in 0..n {
        for rest in boxed_vectors(n - 1, -range, range) {
            let mut f = rest;
            f.insert(pin, 0);
            images.insert(laplacian_times(g, &f));
        }
    }
    images.into_iter().collect()
}

/// Brute-force `|D|`: effective divisors among `D + L f` for the images
/// produced by [`principal_images`].
pub fn brute_linear_system(d: &Divisor, images: &[Vec<i64>]) -> BTreeSet<Divisor> {
    images
        .iter()
        .map(|lf| Divisor::new(d.coeffs().iter().zip(lf).map(|(a, b)| a + b).collect()))
        .filter(|e| e.is_effective())
        .collect()
}

/// Greedy winnability: while some vertex is in debt, let it borrow. Once
/// every vertex has borrowed at least once the position is lost.
pub fn winnable(g: &Multigraph, d: &Divisor) -> bool {
    let adj = g.adjacency();
    let n = adj.len();
    let mut c = d.coeffs().to_vec();
    let mut borrowed = vec![false; n];
    loop {
        let Some(v) = (0..n).find(|&v| c[v] < 0) else {
            return true;
        };
        if borrowed.iter().all(|&b| b) {
            return false;
        }
        borrowed[v] = true;
        for u in 0..n {
            let m = adj[v][u] as i64;
            c[v] += m;
            c[u] -= m;
        }
    }
}

/// Baker–Norine rank through greedy winnability only.
pub fn oracle_rank(g: &Multigraph, d: &Divisor) -> i64 {
    if !winnable(g, d) {
        return -1;
    }
    let n = g.vertex_count();
    let mut r = 0;
    while r < d.degree() && effective_of_degree(n, r + 1).iter().all(|e| winnable(g, &(d - e))) {
        r += 1;
    }
    r
}

/// Connected simple graphs on exactly `n` labelled vertices.
pub fn labelled_simple_connected(n: usize) -> Vec<Multigraph> {
    labelled_connected(n, 1)
}

/// Connected loopless multigraphs on exactly `n` labelled vertices.
pub fn labelled_connected(n: usize, max_mult: u32) -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    boxed_vectors(pairs.len(), 0, max_mult as i64)
        .into_iter()
        .filter_map(|mults| {
            let mut adj = vec![vec![0i64; n]; n];
            for (&(i, j), &m) in pairs.iter().zip(&mults) {
                adj[i][j] = m;
                adj[j][i] = m;
            }
            Multigraph::from_signed_adjacency(adj).ok()
        })
        .collect()
}

/// A cycle on `k` vertices with a path of `tail` extra vertices hanging off vertex 0.
pub fn cycle_with_tail(k: usize, tail: usize) -> Multigraph {
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    let mut prev = 0;
    for t in 0..tail {
        edges.push((prev, k + t));
        prev = k + t;
    }
    Multigraph::from_edges(k + tail, &edges).unwrap()
}

/// [`principal_images`] restricted to vectors with every entry at least
/// `floor`. If every divisor under test has entries at most `-floor`, the
/// dropped images cannot make any of them effective.
pub fn principal_images_above(g: &Multigraph, range: i64, floor: i64) -> Vec<Vec<i64>> {
    principal_images(g, range).into_iter().filter(|v| v.iter().all(|&x| x >= floor)).collect()
}

/// Support pattern of a 5 x 6 node-constraint matrix with six blocks of width
/// one: row `r` is nonzero exactly in the listed columns.
pub fn five_by_six_pattern() -> Vec<Vec<bool>> {
    let rows: [&[usize]; 5] = [&[0, 1, 2], &[0, 3, 4], &[1, 2, 3, 4], &[1, 2, 5], &[3, 4, 5]];
    rows.iter().map(|cols| (0..6).map(|c| cols.contains(&c)).collect()).collect()
}
