mod common;

use std::collections::{BTreeSet, VecDeque};

use common::random::*;
use common::*;
use hyperzeta::action::{check_automorphism, deck_group, incidence_hypergraph};
use hyperzeta::covering::{build_sheets, frobenius, hyperpath_frobenius, voltage_cover, FreeCovering, HyperPath};
use hyperzeta::cycles::enumerate_hypergraph_primes_in;
use hyperzeta::hypergraph::{induced_morphism, HypergraphMorphism, DEFAULT_SEARCH_BUDGET};
use hyperzeta::zeta::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn incidence_functor_is_faithful_on_automorphisms() {
    // brute force over every pair of vertex and edge bijections
    let y = small().cover().clone();
    let b = hyperzeta::hypergraph::incidence_graph(&y);
    let mut autos = Vec::new();
    for vp in permutations(y.num_vertices()) {
        for ep in permutations(y.num_edges()) {
            let m = HypergraphMorphism {
                vertex_map: vp.clone(),
                edge_map: ep,
            };
            if check_automorphism(&m, &y).is_ok() {
                autos.push(m);
            }
        }
    }
    assert!(autos.len() >= 2);
    let images: Vec<HypergraphMorphism> = autos
        .iter()
        .map(|m| induced_morphism(m, &y, &b, &y, &b).unwrap())
        .collect();
    let distinct: BTreeSet<_> = images.iter().map(|m| (m.vertex_map.clone(), m.edge_map.clone())).collect();
    assert_eq!(distinct.len(), autos.len());
    for (i, f) in autos.iter().enumerate() {
        images[i].validate_graph(b.graph(), b.graph()).unwrap();
        for (j, g) in autos.iter().enumerate() {
            let fg = induced_morphism(&f.compose(g), &y, &b, &y, &b).unwrap();
            assert_eq!(fg, images[i].compose(&images[j]));
        }
    }
}

#[test]
fn deck_groups_of_examples_have_group_order() {
    for c in [running(), small()] {
        let decks = deck_group(c.cover(), c.projection(), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(decks.len(), c.group().order());
        let by = incidence_hypergraph(c.cover_incidence());
        let decks = deck_group(&by, c.incidence_projection(), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(decks.len(), c.group().order());
    }
}

fn assert_sheet_criterion(c: &FreeCovering, s: &hyperzeta::covering::SheetAssignment) {
    // nodes of B_Y joined by a path whose projection stays in T
    let gy = c.cover_incidence().graph();
    let in_tree: BTreeSet<usize> = s.tree.iter().copied().collect();
    let n = gy.num_vertices();
    let mut comp = vec![usize::MAX; n];
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &d in gy.out_edges(x) {
                let k = d / 2;
                if in_tree.contains(&c.incidence_projection().edge_map[k]) && comp[gy.head(d)] == usize::MAX {
                    comp[gy.head(d)] = root;
                    queue.push_back(gy.head(d));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            assert_eq!(
                s.node_sheet(a) == s.node_sheet(b),
                comp[a] == comp[b],
                "{} {}",
                gy.vertex_id(a),
                gy.vertex_id(b)
            );
        }
    }
}

#[test]
fn sheet_criterion_on_examples() {
    let c = small();
    assert_sheet_criterion(&c, &pictured_sheets(&c));
    assert_sheet_criterion(&c, &default_sheets(&c));
    let c = running();
    assert_sheet_criterion(&c, &default_sheets(&c));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let choice = sheet_choice(&mut rng, &c);
        assert_sheet_criterion(&c, &build_sheets(&c, &choice).unwrap());
    }
}

#[test]
fn sheets_agree_between_hypergraph_and_incidence_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in [running(), small(), cyclic_covering(&mut rng, 3, 4, 4)] {
        let s = default_sheets(&c);
        let b = c.cover_incidence();
        for v in 0..c.cover().num_vertices() {
            assert_eq!(s.vertex_sheet(v), s.node_sheet(b.vertex_node(v)));
        }
        for e in 0..c.cover().num_edges() {
            assert_eq!(s.edge_sheet(e), s.node_sheet(b.edge_node(e)));
        }
        // F(C, Y/X) = F(B_C, B_Y/B_X)
        let bx = c.base_incidence();
        for p in enumerate_hypergraph_primes_in(bx, 4) {
            let mut vertices = p.vertices(bx);
            vertices.push(vertices[0]);
            let path = HyperPath {
                vertices,
                edges: p.hyperedges(bx),
            };
            assert_eq!(
                hyperpath_frobenius(&c, &s, &path).unwrap(),
                frobenius(&c, &s, &p.bipartite_edges).unwrap()
            );
        }
    }
}

fn s3_covering(seed: u64) -> (FreeCovering, Vec<hyperzeta::representation::Representation>) {
    let (g, irreps) = s3_with_irreps();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let base = connected_hypergraph(&mut rng, 3, 3);
        let k = hyperzeta::hypergraph::incidence_graph(&base).incidences().len();
        let voltage: Vec<usize> = (0..k).map(|_| rng.gen_range(0..6)).collect();
        let (y, a) = voltage_cover(&base, g.clone(), &voltage).unwrap();
        if let Ok(c) = FreeCovering::new(y, a) {
            if hyperzeta::hypergraph::incidence_graph(c.base()).graph().cycle_rank() >= 2 {
                return (c, irreps);
            }
        }
    }
}

#[test]
fn nonabelian_covering_factorizes() {
    for seed in 0..3 {
        let (c, irreps) = s3_covering(seed);
        assert!(c.verify(None).unwrap().free);
        let s = default_sheets(&c);
        let report = verify_factorization(&c, &s, &irreps).unwrap();
        assert!(report.all_pass(), "{report:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let classes = c.group().conjugacy_classes();
        let census = |s: &hyperzeta::covering::SheetAssignment| {
            let mut by_len = vec![Vec::new(); 4];
            for p in enumerate_hypergraph_primes_in(c.base_incidence(), 3) {
                by_len[p.len()].push(classes[frobenius(&c, s, &p.bipartite_edges).unwrap()]);
            }
            by_len.iter_mut().for_each(|v| v.sort_unstable());
            by_len
        };
        let before = census(&s);
        let standard = hypergraph_lfunction(&c, &s, &irreps[2]).unwrap();
        for _ in 0..3 {
            let s2 = build_sheets(&c, &sheet_choice(&mut rng, &c)).unwrap();
            assert_eq!(census(&s2), before);
            assert_eq!(hypergraph_lfunction(&c, &s2, &irreps[2]).unwrap(), standard);
        }
        let n = 6;
        let e = lfunction_euler(&c, &s, &irreps[2], n).unwrap();
        assert_eq!(e.reciprocal, standard.truncate(n));
        let t = lfunction_trace_exp(&c, &s, &irreps[2], n).unwrap();
        assert_eq!(t.reciprocal, standard.truncate(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bass_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = connected_graph(&mut rng, 6, 8);
        prop_assert_eq!(
            graph_zeta_three_term(&g).unwrap().into_polynomial().unwrap(),
            graph_zeta_edge_det(&g)
        );
    }

    #[test]
    fn transfer_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cyclic_covering(&mut rng, 2, 4, 3);
        let s = default_sheets(&c);
        let rho = hyperzeta::representation::Representation::cyclic_character(c.group_arc().clone(), 1).unwrap();
        let l = hypergraph_lfunction(&c, &s, &rho).unwrap();
        prop_assert_eq!(l.substitute_power(2), lfunction_edge_det(&c, &s, &rho).unwrap());
    }

    #[test]
    fn regular_representation_gives_cover_zeta(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cyclic_covering(&mut rng, 3, 3, 3);
        let s = default_sheets(&c);
        let reg = hyperzeta::representation::Representation::regular(c.group_arc().clone());
        let l = hypergraph_lfunction(&c, &s, &reg).unwrap();
        prop_assert!(same_polynomial(&l, &hypergraph_zeta(c.cover()).unwrap()));
    }
}
