#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use backbone_core::graph::{GraphBuilder, NodeId, WeightedGraph};
use backbone_core::io::read_edge_list;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn karate() -> WeightedGraph {
    read_edge_list(data("karate.txt"), 1.0).unwrap().0
}

pub fn lesmis() -> WeightedGraph {
    read_edge_list(data("lesmis.txt"), 1.0).unwrap().0
}

/// Nodes `n0..n{n-1}` in index order; self-loops and repeated pairs are skipped.
pub fn graph_from_triples(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
    let mut b = GraphBuilder::with_capacity(n);
    let ids: Vec<NodeId> = (0..n).map(|i| b.add_node(&format!("n{i}"))).collect();
    for &(u, v, w) in edges {
        if u != v && !b.has_edge(ids[u], ids[v]) {
            b.add_edge(ids[u], ids[v], w).unwrap();
        }
    }
    b.build()
}

#[derive(Clone, Copy, Debug)]
pub enum Weights {
    /// A permutation of `1..=m`.
    Distinct,
    /// Integers in `1..=3`, so ties are common.
    Coarse,
    /// Uniform reals in `(0, 10]`.
    Real,
}

fn weights(rng: &mut ChaCha8Rng, m: usize, mode: Weights) -> Vec<f64> {
    match mode {
        Weights::Distinct => {
            let mut w: Vec<f64> = (1..=m).map(|x| x as f64).collect();
            w.shuffle(rng);
            w
        }
        Weights::Coarse => (0..m).map(|_| rng.random_range(1..=3) as f64).collect(),
        Weights::Real => (0..m).map(|_| 10.0 - rng.random_range(0.0..10.0)).collect(),
    }
}

/// A uniformly random simple graph with `n` nodes and up to `m` edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, mode: Weights) -> WeightedGraph {
    let max = n * n.saturating_sub(1) / 2;
    let m = m.min(max);
    let mut pairs = BTreeSet::new();
    while pairs.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
    pairs.shuffle(rng);
    let w = weights(rng, pairs.len(), mode);
    let triples: Vec<(usize, usize, f64)> = pairs.iter().zip(w).map(|(&(u, v), w)| (u, v, w)).collect();
    graph_from_triples(n, &triples)
}

/// A random spanning tree plus random extra edges, `m` edges in total.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, m: usize, mode: Weights) -> WeightedGraph {
    let max = n * n.saturating_sub(1) / 2;
    let m = m.clamp(n.saturating_sub(1), max);
    let mut pairs = BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        pairs.insert((u, v));
    }
    while pairs.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
    pairs.shuffle(rng);
    let w = weights(rng, pairs.len(), mode);
    let triples: Vec<(usize, usize, f64)> = pairs.iter().zip(w).map(|(&(u, v), w)| (u, v, w)).collect();
    graph_from_triples(n, &triples)
}

/// Edge set as sorted label pairs with weights.
pub fn edge_set(g: &WeightedGraph) -> BTreeSet<(String, String, u64)> {
    g.edges()
        .iter()
        .map(|e| {
            let (a, b) = (g.label(e.src).to_string(), g.label(e.dst).to_string());
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a, b, e.weight.to_bits())
        })
        .collect()
}

pub fn components_by_search(g: &WeightedGraph, skip_edge: Option<usize>) -> usize {
    let mut seen = vec![false; g.node_count()];
    let mut count = 0;
    for s in 0..g.node_count() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (i, e) in g.edges().iter().enumerate() {
                if Some(i) == skip_edge {
                    continue;
                }
                let y = if e.src.0 == x {
                    e.dst.0
                } else if e.dst.0 == x {
                    e.src.0
                } else {
                    continue;
                };
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// Maximum spanning forest by Kruskal. Edges are taken heaviest first and,
/// among equal weights, in descending `(src, dst)` order: the reverse of the
/// order in which pruning considers them.
pub fn kruskal_max_forest(g: &WeightedGraph) -> BTreeSet<usize> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&g.edges()[a], &g.edges()[b]);
        eb.weight
            .total_cmp(&ea.weight)
            .then((eb.src, eb.dst).cmp(&(ea.src, ea.dst)))
    });
    let mut parent: Vec<usize> = (0..g.node_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = BTreeSet::new();
    for i in order {
        let e = &g.edges()[i];
        let (a, b) = (find(&mut parent, e.src.0), find(&mut parent, e.dst.0));
        if a != b {
            parent[a] = b;
            tree.insert(i);
        }
    }
    tree
}

fn hop_distances(g: &WeightedGraph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in g.neighbors(NodeId(x)) {
            if dist[y.0].is_none() {
                dist[y.0] = Some(dist[x].unwrap() + 1);
                queue.push_back(y.0);
            }
        }
    }
    dist
}

/// Betweenness by listing every shortest path of every pair explicitly,
/// normalized by `(n-1)(n-2)/2` unordered pairs.
pub fn brute_betweenness(g: &WeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut out = vec![0.0; n];
    if n < 3 {
        return out;
    }
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|s| hop_distances(g, s)).collect();
    for s in 0..n {
        for (t, to_t) in dist[s].iter().enumerate().skip(s + 1) {
            let Some(d) = *to_t else { continue };
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut path = vec![s];
            enumerate(g, &dist[t], t, d, &mut path, &mut paths);
            let total = paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    out[v] += 1.0 / total;
                }
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    out.iter().map(|x| x / norm).collect()
}

fn enumerate(
    g: &WeightedGraph,
    to_t: &[Option<usize>],
    t: usize,
    remaining: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let x = *path.last().unwrap();
    if x == t {
        out.push(path.clone());
        return;
    }
    for &(y, _) in g.neighbors(NodeId(x)) {
        if to_t[y.0] == Some(remaining - 1) {
            path.push(y.0);
            enumerate(g, to_t, t, remaining - 1, path, out);
            path.pop();
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f((a + b) / 2.0), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, eps, 50)
}

/// Probability under the uniform null model that one of `k` links carries a
/// normalized weight of at least `p`: one minus the integral of the density
/// `(k-1)(1-x)^(k-2)` over `[0, p]`.
pub fn null_model_alpha(p: f64, k: usize) -> f64 {
    let density = move |x: f64| (k as f64 - 1.0) * (1.0 - x).powi(k as i32 - 2);
    1.0 - integrate(&density, 0.0, p, 1e-14)
}

pub fn brute_kendall(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut c, mut d) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let s = (x[i] - x[j]) * (y[i] - y[j]);
            if s > 0.0 {
                c += 1;
            } else if s < 0.0 {
                d += 1;
            }
        }
    }
    (c - d) as f64 / (n * (n - 1) / 2) as f64
}

pub fn direct_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx.sqrt() * syy.sqrt())
}

/// Prefix overlaps recomputed from scratch at every depth.
pub fn naive_rbo(x: &[u32], y: &[u32], p: f64) -> f64 {
    let depth = x.len().min(y.len());
    let (mut sum, mut mass) = (0.0, 0.0);
    for d in 1..=depth {
        let a: HashSet<u32> = x[..d].iter().copied().collect();
        let b: HashSet<u32> = y[..d].iter().copied().collect();
        let w = (1.0 - p) * p.powi(d as i32 - 1);
        sum += w * a.intersection(&b).count() as f64 / d as f64;
        mass += w;
    }
    sum / mass
}

/// A random permutation of `0..universe`, cut to `len`.
pub fn random_list(rng: &mut ChaCha8Rng, universe: u32, len: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..universe).collect();
    all.shuffle(rng);
    all.truncate(len);
    all
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
