//! Prime cycles: backtrackless, tailless, primitive closed paths up to
//! rotation, in graphs and (through `B_H`) in hypergraphs.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::hypergraph::{incidence_graph, BipartiteTag, Graph, Hypergraph};

/// Lexicographically least rotation of a cyclic sequence.
pub fn least_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    if n == 0 {
        return Vec::new();
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| &seq[(a + k) % n])
                .cmp((0..n).map(|k| &seq[(b + k) % n]))
        })
        .unwrap();
    rotate(seq, best)
}

pub fn rotate<T: Clone>(seq: &[T], by: usize) -> Vec<T> {
    let n = seq.len();
    (0..n).map(|k| seq[(by + k) % n].clone()).collect()
}

/// True when `seq` is not a proper power `D^m`, `m > 1`, of a shorter cycle.
pub fn is_primitive<T: PartialEq>(seq: &[T]) -> bool {
    let n = seq.len();
    (1..n)
        .filter(|p| n % p == 0)
        .all(|p| (0..n).any(|k| seq[k] != seq[(k + p) % n]))
}

/// Checks that a closed sequence of directed edges is a cycle without
/// backtracking and without tail.
pub fn is_reduced_cycle(g: &Graph, edges: &[usize]) -> bool {
    let n = edges.len();
    n > 0
        && (0..n).all(|k| {
            let a = edges[k];
            let b = edges[(k + 1) % n];
            g.head(a) == g.tail(b) && b != Graph::inverse(a)
        })
}

/// Rotation class of a prime cycle in a graph, stored by its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeCycleClass {
    pub edges: Vec<usize>,
}

impl PrimeCycleClass {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The vertex sequence `(i(a₁), t(a₁), …, t(a_ℓ))`.
    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        let mut out = vec![g.tail(self.edges[0])];
        out.extend(self.edges.iter().map(|&d| g.head(d)));
        out
    }

    pub fn render(&self, g: &Graph) -> String {
        let names: Vec<&str> = self.vertices(g).iter().map(|&v| g.vertex_id(v)).collect();
        format!("({})", names.join(","))
    }
}

/// All prime-cycle classes of length `≤ max_len`, sorted by length and then
/// by representative. A cycle and its reversal are distinct classes.
pub fn enumerate_graph_primes(g: &Graph, max_len: usize) -> Vec<PrimeCycleClass> {
    let m = g.num_directed();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    for s in 0..m {
        // Distances back to i(s) using only directed edges ≥ s.
        let dist = distances_to(g, g.tail(s), s);
        path.clear();
        path.push(s);
        dfs(g, s, max_len, &dist, &mut path, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edges.cmp(&b.edges)));
    out
}

fn distances_to(g: &Graph, target: usize, min_edge: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.num_vertices()];
    dist[target] = 0;
    let mut queue = std::collections::VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        // Edges d with head(d) = v, i.e. inverses of edges leaving v.
        for &out in g.out_edges(v) {
            let d = Graph::inverse(out);
            if d < min_edge {
                continue;
            }
            let w = g.tail(d);
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn dfs(
    g: &Graph,
    s: usize,
    max_len: usize,
    dist: &[usize],
    path: &mut Vec<usize>,
    out: &mut Vec<PrimeCycleClass>,
) {
    let last = *path.last().unwrap();
    let here = g.head(last);
    if here == g.tail(s)
        && s != Graph::inverse(last)
        && is_primitive(path)
        && least_rotation(path) == *path
    {
        out.push(PrimeCycleClass {
            edges: path.clone(),
        });
    }
    if path.len() == max_len {
        return;
    }
    for b in g.successors(last) {
        if b < s {
            continue;
        }
        let d = dist[g.head(b)];
        if d == usize::MAX || path.len() + 1 + d > max_len {
            continue;
        }
        path.push(b);
        dfs(g, s, max_len, dist, path, out);
        path.pop();
    }
}

/// A prime cycle of a hypergraph, stored as its `B_H` form: the least
/// rotation among those starting with a vertex-to-edge step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HypergraphPrimeClass {
    pub bipartite_edges: Vec<usize>,
}

impl HypergraphPrimeClass {
    /// Length in the hypergraph (half the bipartite length).
    pub fn len(&self) -> usize {
        self.bipartite_edges.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.bipartite_edges.is_empty()
    }

    /// Alternating `(v₁, e₁, v₂, …, e_ℓ, v₁)` as `B_H` node indices.
    pub fn nodes(&self, b: &BipartiteTag) -> Vec<usize> {
        let g = b.graph();
        let mut out = vec![g.tail(self.bipartite_edges[0])];
        out.extend(self.bipartite_edges.iter().map(|&d| g.head(d)));
        out
    }

    /// Hypergraph vertex indices `v₁, …, v_ℓ`.
    pub fn vertices(&self, b: &BipartiteTag) -> Vec<usize> {
        let g = b.graph();
        self.bipartite_edges.iter().step_by(2).map(|&d| g.tail(d)).collect()
    }

    /// Hyperedge indices `e₁, …, e_ℓ`.
    pub fn hyperedges(&self, b: &BipartiteTag) -> Vec<usize> {
        let g = b.graph();
        self.bipartite_edges
            .iter()
            .step_by(2)
            .map(|&d| g.head(d) - b.num_hyper_vertices())
            .collect()
    }

    pub fn render(&self, b: &BipartiteTag) -> String {
        let g = b.graph();
        let names: Vec<&str> = self.nodes(b).iter().map(|&n| g.vertex_id(n)).collect();
        format!("({})", names.join(","))
    }
}

/// Canonical hypergraph form of a bipartite prime: least even rotation whose
/// first step leaves a vertex node.
pub fn hypergraph_canonical(edges: &[usize]) -> Vec<usize> {
    let n = edges.len();
    let start_ok = |k: usize| edges[k] % 2 == 0;
    (0..n)
        .filter(|&k| start_ok(k))
        .map(|k| rotate(edges, k))
        .min()
        .unwrap_or_default()
}

/// Prime classes of a hypergraph of length `≤ max_len`, found from the
/// bipartite primes of length `≤ 2·max_len`.
pub fn enumerate_hypergraph_primes(h: &Hypergraph, max_len: usize) -> Vec<HypergraphPrimeClass> {
    let b = incidence_graph(h);
    enumerate_hypergraph_primes_in(&b, max_len)
}

pub fn enumerate_hypergraph_primes_in(b: &BipartiteTag, max_len: usize) -> Vec<HypergraphPrimeClass> {
    let mut out: Vec<HypergraphPrimeClass> = enumerate_graph_primes(b.graph(), 2 * max_len)
        .into_iter()
        .map(|p| {
            debug_assert!(p.len() % 2 == 0);
            HypergraphPrimeClass {
                bipartite_edges: hypergraph_canonical(&p.edges),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.bipartite_edges.cmp(&b.bipartite_edges))
    });
    out
}

/// `a_n = tr(W₁ⁿ)`: the number of based closed paths of length `n` without
/// backtracking or tail. Returns `a_0 = 0, a_1, …, a_max`.
pub fn closed_walk_counts(g: &Graph, max: usize) -> Vec<BigUint> {
    let m = g.num_directed();
    let mut counts = vec![BigUint::zero(); max + 1];
    if m == 0 {
        return counts;
    }
    let succ: Vec<Vec<usize>> = (0..m).map(|d| g.successors(d).collect()).collect();
    // power[a][b] = number of paths of the current length from a ending in b.
    let mut power: Vec<Vec<BigUint>> = (0..m)
        .map(|a| {
            let mut row = vec![BigUint::zero(); m];
            row[a] = BigUint::from(1u32);
            row
        })
        .collect();
    for n in 1..=max {
        for row in power.iter_mut() {
            let mut next = vec![BigUint::zero(); m];
            for (b, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &x in &succ[b] {
                    next[x] += c;
                }
            }
            *row = next;
        }
        counts[n] = (0..m).map(|a| &power[a][a]).sum();
    }
    counts
}

pub fn count_closed_walks(g: &Graph, n: usize) -> BigUint {
    closed_walk_counts(g, n).pop().unwrap()
}

fn mobius(mut n: usize) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of prime classes of each length from the trace counts:
/// `π(ℓ) = (1/ℓ) Σ_{d | ℓ} μ(ℓ/d) a_d`.
pub fn prime_counts_from_traces(traces: &[BigUint]) -> Vec<BigUint> {
    let max = traces.len().saturating_sub(1);
    let mut out = vec![BigUint::zero(); max + 1];
    for (l, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = BigInt::zero();
        for d in (1..=l).filter(|d| l % d == 0) {
            acc += BigInt::from(mobius(l / d)) * BigInt::from(traces[d].clone());
        }
        let (q, r) = (&acc / BigInt::from(l), &acc % BigInt::from(l));
        assert!(r.is_zero() && q >= BigInt::zero(), "trace counts are inconsistent");
        *slot = q.to_biguint().unwrap();
    }
    out
}

/// Histogram of class lengths, indexed `0..=max`.
pub fn length_histogram(lengths: impl IntoIterator<Item = usize>, max: usize) -> Vec<usize> {
    let mut out = vec![0; max + 1];
    for l in lengths {
        if l <= max {
            out[l] += 1;
        }
    }
    out
}

/// Number of non-backtracking paths of length exactly `n` (any start), a
/// proxy for the cost of exhaustive enumeration.
pub fn nonbacktracking_path_count(g: &Graph, n: usize) -> f64 {
    let m = g.num_directed();
    let succ: Vec<Vec<usize>> = (0..m).map(|d| g.successors(d).collect()).collect();
    let mut v = vec![1.0f64; m];
    for _ in 1..n {
        let mut next = vec![0.0; m];
        for (a, c) in v.iter().enumerate() {
            for &b in &succ[a] {
                next[b] += c;
            }
        }
        v = next;
    }
    if n == 0 {
        0.0
    } else {
        v.iter().sum()
    }
}

/// Largest `L ≤ max` whose exhaustive enumeration visits at most about
/// `budget` partial paths.
pub fn feasible_enumeration_length(g: &Graph, max: usize, budget: f64) -> usize {
    let mut total = 0.0;
    let mut best = 0;
    for l in 1..=max {
        total += nonbacktracking_path_count(g, l);
        if total > budget {
            break;
        }
        best = l;
    }
    best
}
