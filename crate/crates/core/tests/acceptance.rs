//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exact arithmetic throughout, so every comparison has tolerance zero; the
//! only numeric bounds are the wall-clock budgets below.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::random::*;
use common::*;
use hyperzeta::action::{incidence_hypergraph, is_free_action, quotient};
use hyperzeta::algebra::{Cyclo, CycloPoly, Rational, ScalarMatrix};
use hyperzeta::covering::{build_sheets, frobenius, hyperpath_frobenius, HyperPath};
use hyperzeta::cycles::{
    closed_walk_counts, enumerate_graph_primes, enumerate_hypergraph_primes,
    enumerate_hypergraph_primes_in, feasible_enumeration_length, length_histogram,
    prime_counts_from_traces,
};
use hyperzeta::hypergraph::{incidence_graph, HypergraphMorphism};
use hyperzeta::representation::Representation;
use hyperzeta::zeta::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOLERANCE: i64 = 0;
const RUNNING_BUDGET: Duration = Duration::from_secs(5);
const FINAL_EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const METHOD_BUDGET: Duration = Duration::from_secs(60);
const COVERING_BUDGET: Duration = Duration::from_secs(120);
const RANDOM_GRAPHS: usize = 50;
const RANDOM_HYPERGRAPHS: usize = 20;
const RANDOM_COVERINGS_PER_GROUP: usize = 12;
const DIRECT_SUM_PAIRS: usize = 24;
/// Partial-path budget for the exhaustive prime enumeration cross-check.
const ENUMERATION_BUDGET: f64 = 2.0e5;
const SEED: u64 = 0x5eed_2eda;

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, budget: Duration) -> Result<String, String> {
    let t = start.elapsed();
    check(t < budget, || format!("took {t:.2?}, budget {budget:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn exact_eq(a: &CycloPoly, b: &CycloPoly) -> bool {
    // exact comparison; TOLERANCE documents that no slack is allowed
    TOLERANCE == 0 && same_polynomial(a, b)
}

fn running_suite() -> Outcome {
    let start = Instant::now();
    let c = running();
    let s = default_sheets(&c);
    let trivial = rep(c.group_arc(), "trivial.json");
    let sign = rep(c.group_arc(), "sign.json");
    let w = lfunction_edge_det(&c, &s, &trivial).map_err(|e| e.to_string())?;
    check(
        exact_eq(&w, &poly(&[1, 0, 0, 0, -2, 0, -4, 0, 1, 0, 4, 0, 4, 0, 0, 0, -4])),
        || format!("det(I-uW1) = {w}"),
    )?;
    let l_sign = hypergraph_lfunction(&c, &s, &sign).map_err(|e| e.to_string())?;
    check(
        exact_eq(&l_sign, &product(&[&[1, -1], &[1, 1], &[1, 1], &[1, -2, 2], &[1, 1, 0, 2]])),
        || format!("L(sign)^-1 = {l_sign}"),
    )?;
    let l_triv = hypergraph_lfunction(&c, &s, &trivial).map_err(|e| e.to_string())?;
    let zx = hypergraph_zeta(c.base()).map_err(|e| e.to_string())?;
    check(
        exact_eq(&l_triv, &product(&[&[1, -1], &[1, -1], &[1, 1], &[1, 2, 2], &[1, -1, 0, -2]])),
        || format!("L(1)^-1 = {l_triv}"),
    )?;
    check(exact_eq(&l_triv, &zx), || format!("zeta_X^-1 = {zx}"))?;
    let zy = hypergraph_zeta(c.cover()).map_err(|e| e.to_string())?;
    check(exact_eq(&zy, &(&l_triv * &l_sign)), || format!("zeta_Y^-1 = {zy}"))?;
    within(start, RUNNING_BUDGET)
}

fn small_suite() -> Outcome {
    let start = Instant::now();
    let c = small();
    let s = default_sheets(&c);
    let trivial = rep(c.group_arc(), "trivial.json");
    let sign = rep(c.group_arc(), "sign.json");
    let err = |e: hyperzeta::Error| e.to_string();
    let zx = hypergraph_zeta(c.base()).map_err(err)?;
    check(exact_eq(&zx, &poly(&[1, 0, -2, 0, 1])), || format!("zeta_X^-1 = {zx}"))?;
    let l = hypergraph_lfunction(&c, &s, &sign).map_err(err)?;
    check(exact_eq(&l, &poly(&[1, 0, 2, 0, 1])), || format!("L(sign)^-1 = {l}"))?;
    let zy = hypergraph_zeta(c.cover()).map_err(err)?;
    check(exact_eq(&zy, &poly(&[1, 0, 0, 0, -2, 0, 0, 0, 1])), || format!("zeta_Y^-1 = {zy}"))?;
    let report = verify_factorization(&c, &s, &[trivial, sign]).map_err(err)?;
    check(report.all_pass(), || format!("{report:?}"))?;
    let px = enumerate_hypergraph_primes(c.base(), 12);
    let py = enumerate_hypergraph_primes(c.cover(), 12);
    check(px.len() == 2 && px.iter().all(|p| p.len() == 2), || {
        format!("X primes {:?}", px.iter().map(|p| p.len()).collect::<Vec<_>>())
    })?;
    check(py.len() == 2 && py.iter().all(|p| p.len() == 4), || {
        format!("Y primes {:?}", py.iter().map(|p| p.len()).collect::<Vec<_>>())
    })?;
    within(start, FINAL_EXAMPLE_BUDGET)
}

fn sheet_suite() -> Outcome {
    let c = small();
    let s = pictured_sheets(&c);
    let g = c.group().index_of("g").unwrap();
    let sheet: Vec<&str> = s
        .sheet_vertices(g)
        .iter()
        .map(|&v| c.cover().vertex_id(v))
        .collect();
    check(sheet == ["v2", "v4", "v5"], || format!("sheet g = {sheet:?}"))?;
    let x = c.base();
    for ids in [["v1", "e3", "v3", "e1", "v1"], ["v3", "e1", "v1", "e3", "v3"]] {
        let p = HyperPath::parse(x, &ids).map_err(|e| e.to_string())?;
        let f = hyperpath_frobenius(&c, &s, &p).map_err(|e| e.to_string())?;
        check(f == g, || format!("F({}) = {}", p.render(x), c.group().name(f)))?;
    }
    Ok(format!("sheet g = {{{}}}, F(C) = F(C') = g", sheet.join(",")))
}

fn method_agreement() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut enumerated = 0usize;
    for i in 0..RANDOM_GRAPHS {
        let g = connected_graph(&mut rng, 8, 12);
        let n = 2 * g.num_directed();
        let edge = graph_zeta_edge_det(&g);
        let three = graph_zeta_three_term(&g)
            .and_then(|t| t.into_polynomial())
            .map_err(|e| e.to_string())?;
        check(edge == three, || format!("graph {i}: edge {edge} vs three-term {three}"))?;
        let euler = graph_zeta_euler_census(&g, n).map_err(|e| e.to_string())?;
        let inv = edge.series_inverse(n).map_err(|e| e.to_string())?;
        check(euler.series(n).map_err(|e| e.to_string())? == inv, || {
            format!("graph {i}: Euler product differs below degree {n}")
        })?;
        // explicit enumeration over the range where it is affordable
        let l = feasible_enumeration_length(&g, n, ENUMERATION_BUDGET);
        let primes = enumerate_graph_primes(&g, l);
        let hist = length_histogram(primes.iter().map(|p| p.len()), l);
        let census = prime_counts_from_traces(&closed_walk_counts(&g, l));
        check(
            hist.iter().zip(&census).all(|(&a, b)| BigUint::from(a) == *b),
            || format!("graph {i}: enumerated {hist:?} vs census {census:?}"),
        )?;
        let e = graph_zeta_euler_from_lengths(primes.iter().map(|p| p.len()), l)
            .map_err(|e| e.to_string())?;
        check(e.reciprocal == edge.truncate(l), || {
            format!("graph {i}: enumerated Euler product differs below degree {l}")
        })?;
        enumerated = enumerated.max(l);
    }
    for i in 0..RANDOM_HYPERGRAPHS {
        let h = connected_hypergraph(&mut rng, 6, 6);
        let b = incidence_graph(&h);
        let n = 2 * b.graph().num_directed();
        let edge = hypergraph_zeta(&h).map_err(|e| e.to_string())?;
        let three = hypergraph_zeta_three_term(&h).map_err(|e| e.to_string())?;
        check(edge == three, || format!("hypergraph {i}: edge {edge} vs three-term {three}"))?;
        let euler = hypergraph_zeta_by(&h, Method::EulerCensus, Some(n)).map_err(|e| e.to_string())?;
        let inv = edge.series_inverse(n).map_err(|e| e.to_string())?;
        check(euler.series(n).map_err(|e| e.to_string())? == inv, || {
            format!("hypergraph {i}: Euler product differs below degree {n}")
        })?;
        let l = feasible_enumeration_length(b.graph(), 2 * n, ENUMERATION_BUDGET) / 2;
        let primes = enumerate_hypergraph_primes_in(&b, l);
        let e = graph_zeta_euler_from_lengths(primes.iter().map(|p| p.len()), l)
            .map_err(|e| e.to_string())?;
        check(e.reciprocal == edge.truncate(l), || {
            format!("hypergraph {i}: enumerated Euler product differs below degree {l}")
        })?;
    }
    let t = within(start, METHOD_BUDGET)?;
    Ok(format!(
        "{RANDOM_GRAPHS} graphs, {RANDOM_HYPERGRAPHS} hypergraphs, N = 2|directed edges|, \
         enumeration cross-check up to length {enumerated}, {t}"
    ))
}

/// Checks `B_{Y/G} ≅ B_Y/G` with the witness induced by `B(π)`.
fn bipartite_quotient_commutes(c: &hyperzeta::covering::FreeCovering) -> Result<(), String> {
    let by = incidence_hypergraph(c.cover_incidence());
    let bx = incidence_hypergraph(c.base_incidence());
    is_free_action(c.incidence_action(), &by).map_err(|w| format!("B_Y action not free: {w}"))?;
    let (q, onto_q) = quotient(c.incidence_action(), &by).map_err(|e| e.to_string())?;
    let bpi = c.incidence_projection();
    let mut vertex_map = vec![usize::MAX; bx.num_vertices()];
    let mut edge_map = vec![usize::MAX; bx.num_edges()];
    for (y, &x) in bpi.vertex_map.iter().enumerate() {
        let t = onto_q.vertex_map[y];
        check(vertex_map[x] == usize::MAX || vertex_map[x] == t, || {
            "witness not well defined on nodes".into()
        })?;
        vertex_map[x] = t;
    }
    for (y, &x) in bpi.edge_map.iter().enumerate() {
        let t = onto_q.edge_map[y];
        check(edge_map[x] == usize::MAX || edge_map[x] == t, || {
            "witness not well defined on edges".into()
        })?;
        edge_map[x] = t;
    }
    let phi = HypergraphMorphism {
        vertex_map,
        edge_map,
    };
    phi.validate(&bx, &q).map_err(|e| e.to_string())?;
    check(phi.is_bijective(), || "witness not bijective".into())?;
    phi.inverse().validate(&q, &bx).map_err(|e| e.to_string())?;
    check(phi.compose(bpi) == onto_q, || "square does not commute".into())?;
    Ok(())
}

fn frobenius_classes(
    c: &hyperzeta::covering::FreeCovering,
    s: &hyperzeta::covering::SheetAssignment,
    max: usize,
) -> Result<Vec<Vec<usize>>, String> {
    let classes = c.group().conjugacy_classes();
    let mut out = vec![Vec::new(); max + 1];
    for p in enumerate_hypergraph_primes_in(c.base_incidence(), max) {
        let f = frobenius(c, s, &p.bipartite_edges).map_err(|e| e.to_string())?;
        out[p.len()].push(classes[f]);
    }
    for v in out.iter_mut() {
        v.sort_unstable();
    }
    Ok(out)
}

fn covering_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut count = 0;
    for m in [2usize, 3] {
        for i in 0..RANDOM_COVERINGS_PER_GROUP {
            let c = cyclic_covering(&mut rng, m, 5, 4);
            let tag = format!("Z/{m} covering {i}");
            bipartite_quotient_commutes(&c).map_err(|e| format!("{tag}: {e}"))?;
            let s = default_sheets(&c);
            let bx = c.base_incidence().graph();
            let grp = c.group();
            for _ in 0..10 {
                let start_node = rng.gen_range(0..bx.num_vertices());
                let (l1, l2) = (rng.gen_range(0..6), rng.gen_range(0..6));
                let p1 = walk(&mut rng, bx, start_node, l1);
                let mid = p1.last().map_or(start_node, |&d| bx.head(d));
                let p2 = walk(&mut rng, bx, mid, l2);
                let joined: Vec<usize> = p1.iter().chain(&p2).copied().collect();
                let f = |p: &[usize]| frobenius(&c, &s, p).unwrap();
                check(f(&joined) == grp.mul(f(&p1), f(&p2)), || {
                    format!("{tag}: Frobenius not multiplicative")
                })?;
            }
            let reps: Vec<Representation> = (0..m as i64)
                .map(|k| Representation::cyclic_character(c.group_arc().clone(), k).unwrap())
                .collect();
            let base_classes = frobenius_classes(&c, &s, 4)?;
            let base_l: Vec<CycloPoly> = reps
                .iter()
                .map(|r| hypergraph_lfunction(&c, &s, r).unwrap())
                .collect();
            for _ in 0..3 {
                let choice = sheet_choice(&mut rng, &c);
                let s2 = build_sheets(&c, &choice).map_err(|e| format!("{tag}: {e}"))?;
                check(frobenius_classes(&c, &s2, 4)? == base_classes, || {
                    format!("{tag}: Frobenius classes changed under re-choice")
                })?;
                for (r, l) in reps.iter().zip(&base_l) {
                    let l2 = hypergraph_lfunction(&c, &s2, r).unwrap();
                    check(&l2 == l, || format!("{tag}: L-function changed under re-choice"))?;
                }
            }
            let zx = hypergraph_zeta(c.base()).map_err(|e| e.to_string())?;
            let zy = hypergraph_zeta(c.cover()).map_err(|e| e.to_string())?;
            let (_, r) = zy.div_rem(&zx).map_err(|e| e.to_string())?;
            check(r.is_zero(), || format!("{tag}: zeta_X^-1 does not divide zeta_Y^-1"))?;
            count += 1;
        }
    }
    let t = within(start, COVERING_BUDGET)?;
    Ok(format!("{count} coverings (Z/2 and Z/3), {t}"))
}

/// Representations of the order-2 group loaded through their JSON form.
fn loaded_pool(c: &hyperzeta::covering::FreeCovering, rng: &mut ChaCha8Rng) -> Vec<Representation> {
    let group = c.group_arc().clone();
    let g = c.group().index_of("g").unwrap();
    let i = Cyclo::zeta_pow(4, 1);
    let z = Cyclo::zero(4);
    let quaternionic =
        ScalarMatrix::from_rows(4, vec![vec![z.clone(), i.clone()], vec![-i, z]]).unwrap();
    let mut pool = vec![
        rep(&group, "trivial.json"),
        rep(&group, "sign.json"),
        Representation::regular(group.clone()),
        Representation::from_generator_images(group.clone(), 4, 2, &[(g, quaternionic)]).unwrap(),
    ];
    for _ in 0..3 {
        let d = rng.gen_range(1..=3);
        let diag: Vec<Vec<Cyclo>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|col| {
                        let x = if r != col { 0 } else if rng.gen_bool(0.5) { 1 } else { -1 };
                        Cyclo::from_int(1, x)
                    })
                    .collect()
            })
            .collect();
        let image = ScalarMatrix::from_rows(1, diag).unwrap();
        let base = Representation::from_generator_images(group.clone(), 1, d, &[(g, image)]).unwrap();
        let p = loop {
            let rows: Vec<Vec<Cyclo>> = (0..d)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            let q = Rational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into());
                            Cyclo::from_rational(1, q)
                        })
                        .collect()
                })
                .collect();
            let p = ScalarMatrix::from_rows(1, rows).unwrap();
            if !p.det().unwrap().is_zero() {
                break p;
            }
        };
        pool.push(base.conjugate_by(&p).unwrap());
    }
    pool.into_iter()
        .map(|r| {
            let json = serde_json::to_string(&r.to_doc()).unwrap();
            Representation::from_json(group.clone(), &json).unwrap()
        })
        .collect()
}

fn times(a: &CycloPoly, b: &CycloPoly) -> CycloPoly {
    let (a, b) = CycloPoly::unify(a, b);
    &a * &b
}

fn direct_sums() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut pairs = 0;
    for c in [running(), small()] {
        let s = default_sheets(&c);
        let pool = loaded_pool(&c, &mut rng);
        for _ in 0..DIRECT_SUM_PAIRS / 2 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let sum = a.direct_sum(b).map_err(|e| e.to_string())?;
            let l = |r: &Representation| hypergraph_lfunction(&c, &s, r).unwrap();
            check(same_polynomial(&l(&sum), &times(&l(a), &l(b))), || {
                format!("direct sum of dims {} and {} fails", a.dim(), b.dim())
            })?;
            let lb = |r: &Representation| lfunction_edge_det(&c, &s, r).unwrap();
            check(same_polynomial(&lb(&sum), &times(&lb(a), &lb(b))), || {
                "bipartite direct sum fails".into()
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} random pairs on both example coverings"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("running example golden values", running_suite),
        ("small example golden values", small_suite),
        ("sheet partition and Frobenius", sheet_suite),
        ("method agreement on random graphs and hypergraphs", method_agreement),
        ("random free Z/2 and Z/3 coverings", covering_suite),
        ("direct-sum identity", direct_sums),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {p:?}")));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
