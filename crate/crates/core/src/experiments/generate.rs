//! Graph and divisor generators.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{is_connected, Divisor, Multigraph};

/// Random simple graph on `n` vertices, each edge present with probability
/// 1/2, redrawn until connected. Deterministic in `seed`.
pub fn random_connected_graph(n: usize, seed: u64) -> Multigraph {
    assert!(n >= 1, "need at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut adj = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let bit = rng.gen_range(0..=1u32);
                adj[i][j] = bit;
                adj[j][i] = bit;
            }
        }
        if is_connected(&adj) {
            return Multigraph::from_adjacency(adj).expect("validated above");
        }
    }
}

/// Uniformly random effective divisor of degree `d` on `n` vertices
/// (stars and bars: choose the positions of the `n - 1` bars).
pub fn random_effective_divisor<R: Rng + ?Sized>(n: usize, d: i64, rng: &mut R) -> Divisor {
    assert!(d >= 0 && n >= 1);
    let slots = d as usize + n - 1;
    let mut bars = rand::seq::index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut coeffs = Vec::with_capacity(n);
    let mut prev = 0usize;
    for (k, &b) in bars.iter().enumerate() {
        // bar k sits at slot b; chips before it and after the previous bar
        coeffs.push((b - prev - if k == 0 { 0 } else { 1 }) as i64);
        prev = b;
    }
    let last = if n == 1 { slots } else { slots - prev - 1 };
    coeffs.push(last as i64);
    Divisor::new(coeffs)
}

/// Upper triangle of the adjacency matrix under the vertex order `perm`.
fn upper_triangle(adj: &[Vec<u32>], perm: &[usize]) -> Vec<u32> {
    let n = adj.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(adj[perm[i]][perm[j]]);
        }
    }
    out
}

/// Lexicographically largest upper triangle over all vertex relabellings.
/// Two graphs are isomorphic iff their canonical forms agree.
pub fn canonical_form(g: &Multigraph) -> Vec<u32> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    (0..n).permutations(n).map(|p| upper_triangle(adj, &p)).max().unwrap_or_default()
}

fn from_upper_triangle(n: usize, tri: &[u32]) -> Vec<Vec<u32>> {
    let mut adj = vec![vec![0u32; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            adj[i][j] = tri[k];
            adj[j][i] = tri[k];
            k += 1;
        }
    }
    adj
}

/// Every connected loopless multigraph on exactly `n` labelled vertices with
/// edge multiplicities at most `max_mult` and at most `max_edges` edges.
pub fn labelled_connected_multigraphs(n: usize, max_mult: u32, max_edges: usize) -> Vec<Multigraph> {
    let pairs = n * (n.saturating_sub(1)) / 2;
    let mut out = Vec::new();
    let mut tri = vec![0u32; pairs];
    fn go(k: usize, budget: usize, max_mult: u32, n: usize, tri: &mut Vec<u32>, out: &mut Vec<Multigraph>) {
        if k == tri.len() {
            let adj = from_upper_triangle(n, tri);
            if is_connected(&adj) {
                out.push(Multigraph::from_adjacency(adj).expect("valid by construction"));
            }
            return;
        }
        for m in 0..=max_mult.min(budget as u32) {
            tri[k] = m;
            go(k + 1, budget - m as usize, max_mult, n, tri, out);
        }
        tri[k] = 0;
    }
    if n == 0 {
        return out;
    }
    go(0, max_edges, max_mult, n, &mut tri, &mut out);
    out
}

/// Connected multigraphs with `1..=max_n` vertices, multiplicity at most
/// `max_mult` and genus in `genus`, one per isomorphism class, passing
/// `keep`. Ordered by vertex count, then genus, then canonical form.
pub fn unlabelled_connected_multigraphs(
    max_n: usize,
    max_mult: u32,
    genus: RangeInclusive<i64>,
    keep: impl Fn(&Multigraph) -> bool,
) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let max_edges = *genus.end() + n as i64 - 1;
        if max_edges < 0 {
            continue;
        }
        let mut seen = BTreeSet::new();
        for g in labelled_connected_multigraphs(n, max_mult, max_edges as usize) {
            if !genus.contains(&g.genus()) || !keep(&g) {
                continue;
            }
            seen.insert((g.genus(), canonical_form(&g)));
        }
        out.extend(seen.into_iter().map(|(_, tri)| {
            Multigraph::from_adjacency(from_upper_triangle(n, &tri)).expect("canonical relabelling is valid")
        }));
    }
    out
}

/// Connected multigraphs equal to their own 2-core (minimum degree at least
/// two), up to isomorphism, with multiplicity at most `max_mult`.
///
/// Pendant trees are left out: attaching a tree at a single vertex neither
/// creates nor destroys Riemann–Roch, so these are the interesting cases.
pub fn enumerate_treeless_graphs(max_n: usize, genus: RangeInclusive<i64>, max_mult: u32) -> Vec<Multigraph> {
    unlabelled_connected_multigraphs(max_n, max_mult, genus, |g| {
        (0..g.vertex_count()).all(|v| g.vertex_degree(v) >= 2)
    })
}

/// All trees on exactly `n` vertices up to isomorphism.
pub fn trees(n: usize) -> Vec<Multigraph> {
    unlabelled_connected_multigraphs(n, 1, 0..=0, |_| true)
        .into_iter()
        .filter(|g| g.vertex_count() == n)
        .collect()
}
