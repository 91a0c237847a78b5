#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use hyperzeta::action::{FiniteGroup, HypergraphAction};
use hyperzeta::algebra::CycloPoly;
use hyperzeta::covering::{build_sheets, FreeCovering, SheetAssignment, SheetChoice};
use hyperzeta::hypergraph::Hypergraph;
use hyperzeta::representation::Representation;

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn hypergraph(name: &str) -> Hypergraph {
    Hypergraph::from_json(&fixture(name)).unwrap()
}

pub fn covering(prefix: &str) -> FreeCovering {
    let y = hypergraph(&format!("{prefix}_Y.json"));
    let a = HypergraphAction::from_json(&fixture(&format!("{prefix}_action.json")), &y).unwrap();
    FreeCovering::new(y, a).unwrap()
}

pub fn running() -> FreeCovering {
    covering("running")
}

pub fn small() -> FreeCovering {
    covering("small")
}

pub fn default_sheets(c: &FreeCovering) -> SheetAssignment {
    build_sheets(c, &SheetChoice::default()).unwrap()
}

pub fn pictured_sheets(c: &FreeCovering) -> SheetAssignment {
    let tree: Vec<String> = serde_json::from_str(&fixture("small_tree.json")).unwrap();
    let choice = SheetChoice::from_ids(c, Some(&tree), Some("v1"), Some("v1")).unwrap();
    build_sheets(c, &choice).unwrap()
}

pub fn rep(group: &Arc<FiniteGroup>, name: &str) -> Representation {
    Representation::from_json(group.clone(), &fixture(name)).unwrap()
}

pub fn poly(coeffs: &[i64]) -> CycloPoly {
    CycloPoly::from_ints(1, coeffs)
}

/// Multiplies out a product of integer polynomials.
pub fn product(factors: &[&[i64]]) -> CycloPoly {
    factors.iter().fold(CycloPoly::one(1), |acc, f| &acc * &poly(f))
}

pub fn ints(p: &CycloPoly) -> Vec<i64> {
    p.rational_coeffs()
        .expect("rational coefficients")
        .iter()
        .map(|r| {
            assert!(r.is_integer());
            i64::try_from(r.to_integer()).unwrap()
        })
        .collect()
}

pub mod random {
    use std::sync::Arc;

    use hyperzeta::action::FiniteGroup;
    use hyperzeta::covering::{voltage_cover, FreeCovering, SheetChoice};
    use hyperzeta::hypergraph::{incidence_graph, Graph, Hypergraph};
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    /// Connected multigraph without loops on `2..=max_v` vertices with at
    /// most `max_e` edges: a random tree plus random extra edges.
    pub fn connected_graph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> Graph {
        let n = rng.gen_range(2..=max_v);
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        let extra = rng.gen_range(0..=max_e - (n - 1));
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a, b));
        }
        Graph::from_indices(
            (0..n).map(|i| format!("x{i}")).collect(),
            edges
                .into_iter()
                .enumerate()
                .map(|(k, (a, b))| (format!("k{k}"), a, b))
                .collect(),
        )
        .unwrap()
    }

    /// Connected hypergraph on `2..=max_v` vertices with `1..=max_e` edges.
    pub fn connected_hypergraph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> Hypergraph {
        loop {
            let n = rng.gen_range(2..=max_v);
            let m = rng.gen_range(1..=max_e);
            let mut edges = Vec::new();
            for k in 0..m {
                let size = rng.gen_range(1..=n.min(4));
                let mut vs: Vec<usize> = (0..n).collect();
                vs.shuffle(rng);
                let mut members = vs[..size].to_vec();
                members.sort_unstable();
                edges.push((format!("e{k}"), members));
            }
            let vertices = (0..n).map(|i| format!("v{i}")).collect();
            if let Ok(h) = Hypergraph::from_indices(vertices, edges) {
                if h.is_connected() {
                    return h;
                }
            }
        }
    }

    /// A connected voltage covering of a random connected base with the
    /// cyclic group of order `m`.
    pub fn cyclic_covering(rng: &mut ChaCha8Rng, m: usize, max_v: usize, max_e: usize) -> FreeCovering {
        let group = Arc::new(FiniteGroup::cyclic(m));
        loop {
            let base = connected_hypergraph(rng, max_v, max_e);
            let k = incidence_graph(&base).incidences().len();
            let voltage: Vec<usize> = (0..k).map(|_| rng.gen_range(0..m)).collect();
            let (y, a) = voltage_cover(&base, group.clone(), &voltage).unwrap();
            if let Ok(c) = FreeCovering::new(y, a) {
                return c;
            }
        }
    }

    /// Random spanning tree of `g` (random edge order, union-find).
    pub fn spanning_tree(rng: &mut ChaCha8Rng, g: &Graph) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut order: Vec<usize> = (0..g.num_edges()).collect();
        order.shuffle(rng);
        let mut tree = Vec::new();
        for k in order {
            let (a, b) = g.endpoints(k);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                tree.push(k);
            }
        }
        tree.sort_unstable();
        tree
    }

    /// Random tree, base vertex and base lift.
    pub fn sheet_choice(rng: &mut ChaCha8Rng, c: &FreeCovering) -> SheetChoice {
        let tree = spanning_tree(rng, c.base_incidence().graph());
        let base_vertex = rng.gen_range(0..c.base().num_vertices());
        let fiber: Vec<usize> = (0..c.cover().num_vertices())
            .filter(|&v| c.projection().vertex_map[v] == base_vertex)
            .collect();
        SheetChoice {
            tree: Some(tree),
            base_vertex: Some(base_vertex),
            base_lift: Some(*fiber.choose(rng).unwrap()),
        }
    }

    /// A random walk in `g` of the given length starting at node `start`
    /// (backtracking allowed).
    pub fn walk(rng: &mut ChaCha8Rng, g: &Graph, start: usize, len: usize) -> Vec<usize> {
        let mut at = start;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let d = *g.out_edges(at).choose(rng).unwrap();
            out.push(d);
            at = g.head(d);
        }
        out
    }
}

/// The symmetric group on three letters, generated by `r = (0 1 2)` and
/// `s = (0 1)`, with its three irreducibles `1`, sign and the standard
/// 2-dimensional representation.
pub fn s3_with_irreps() -> (Arc<FiniteGroup>, Vec<Representation>) {
    use hyperzeta::algebra::ScalarMatrix;
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let table = (0..6)
        .map(|a| (0..6).map(|b| idx([0, 1, 2].map(|x| perms[a][perms[b][x]]))).collect())
        .collect();
    let names = ["id", "r", "r2", "s", "sr", "rs"].map(String::from).to_vec();
    let g = Arc::new(FiniteGroup::from_table(names, table, vec![1, 3]).unwrap());
    let (r, s) = (1, 3);
    let sign = Representation::from_generator_images(
        g.clone(),
        1,
        1,
        &[(r, ScalarMatrix::from_ints(&[vec![1]])), (s, ScalarMatrix::from_ints(&[vec![-1]]))],
    )
    .unwrap();
    let standard = Representation::from_generator_images(
        g.clone(),
        1,
        2,
        &[
            (r, ScalarMatrix::from_ints(&[vec![0, -1], vec![1, -1]])),
            (s, ScalarMatrix::from_ints(&[vec![0, 1], vec![1, 0]])),
        ],
    )
    .unwrap();
    (g.clone(), vec![Representation::trivial(g), sign, standard])
}
