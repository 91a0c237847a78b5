//! Finite groups given by multiplication tables and their actions on
//! hypergraphs: closure, freeness, quotients, induced actions, deck groups.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    incidence_graph, is_isomorphic, node_map_to_morphism, search_bipartite_isos, BipartiteTag,
    Hypergraph, HypergraphMorphism, DEFAULT_SEARCH_BUDGET,
};

/// A finite group stored as a full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a table with `table[a][b] = a·b`.
    pub fn from_table(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("group must be nonempty".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not |G|x|G| over G".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[a])))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup("table is not associative".into()));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::InvalidGroup("generator out of range".into()));
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverses,
            generators,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// ℤ/m with elements `id, g, g^2, …` and generator `g`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m > 0);
        let names = (0..m)
            .map(|k| match k {
                0 => "id".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        let generators = if m > 1 { vec![1] } else { Vec::new() };
        Self::from_table(names, table, generators).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `h · g · h⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, a| num_integer::lcm(acc, self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// An element generating the whole group, preferring declared generators.
    pub fn cyclic_generator(&self) -> Option<usize> {
        let n = self.order();
        if n == 1 {
            return Some(self.identity);
        }
        self.generators
            .iter()
            .copied()
            .chain(0..n)
            .find(|&a| self.element_order(a) == n)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Conjugacy class index of every element; classes are numbered in order
    /// of their least member.
    pub fn conjugacy_classes(&self) -> Vec<usize> {
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for g in 0..n {
            if class[g] != usize::MAX {
                continue;
            }
            for h in 0..n {
                class[self.conjugate(g, h)] = next;
            }
            next += 1;
        }
        class
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("elements", &self.names)
            .finish()
    }
}

/// A generator given as permutations of vertex and edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub vertex_perm: Vec<usize>,
    pub edge_perm: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    #[serde(default)]
    pub vertices: BTreeMap<String, String>,
    #[serde(default)]
    pub edges: BTreeMap<String, String>,
}

/// Action JSON: `{"generators": [{"name", "vertices": {..}, "edges": {..}}]}`.
/// Objects missing from a map are fixed by that generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub generators: Vec<GeneratorDoc>,
}

impl Generator {
    pub fn from_doc(doc: &GeneratorDoc, h: &Hypergraph) -> Result<Self> {
        let mut vertex_perm: Vec<usize> = (0..h.num_vertices()).collect();
        for (from, to) in &doc.vertices {
            let a = h.vertex(from).ok_or_else(|| Error::UnknownId(from.clone()))?;
            let b = h.vertex(to).ok_or_else(|| Error::UnknownId(to.clone()))?;
            vertex_perm[a] = b;
        }
        let mut edge_perm: Vec<usize> = (0..h.num_edges()).collect();
        for (from, to) in &doc.edges {
            let a = h.edge_by_id(from).ok_or_else(|| Error::UnknownId(from.clone()))?;
            let b = h.edge_by_id(to).ok_or_else(|| Error::UnknownId(to.clone()))?;
            edge_perm[a] = b;
        }
        Ok(Generator {
            name: doc.name.clone(),
            vertex_perm,
            edge_perm,
        })
    }

    fn as_morphism(&self) -> HypergraphMorphism {
        HypergraphMorphism {
            vertex_map: self.vertex_perm.clone(),
            edge_map: self.edge_perm.clone(),
        }
    }
}

/// Checks that a pair of maps is a hypergraph automorphism.
pub fn check_automorphism(m: &HypergraphMorphism, h: &Hypergraph) -> std::result::Result<(), String> {
    if m.vertex_map.len() != h.num_vertices() || m.edge_map.len() != h.num_edges() {
        return Err("map sizes do not match the hypergraph".into());
    }
    if !m.is_bijective() {
        return Err("not a bijection".into());
    }
    for e in 0..h.num_edges() {
        let mut image: Vec<usize> = h.members(e).iter().map(|&v| m.vertex_map[v]).collect();
        image.sort_unstable();
        if image != h.members(m.edge_map[e]) {
            return Err(format!(
                "edge {} is not mapped onto {}",
                h.edge_id(e),
                h.edge_id(m.edge_map[e])
            ));
        }
    }
    Ok(())
}

/// Default cap on the size of a generated group.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// A finite group acting on a hypergraph on the left:
/// `(g·h)(x) = g(h(x))`.
#[derive(Debug, Clone)]
pub struct HypergraphAction {
    group: Arc<FiniteGroup>,
    vertex_perms: Vec<Vec<usize>>,
    edge_perms: Vec<Vec<usize>>,
}

impl PartialEq for HypergraphAction {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group
            && self.vertex_perms == other.vertex_perms
            && self.edge_perms == other.edge_perms
    }
}

impl HypergraphAction {
    /// Builds an action from permutations per element, checking that each is an
    /// automorphism and that the assignment is a homomorphism.
    pub fn new(
        group: Arc<FiniteGroup>,
        vertex_perms: Vec<Vec<usize>>,
        edge_perms: Vec<Vec<usize>>,
        h: &Hypergraph,
    ) -> Result<Self> {
        let n = group.order();
        if vertex_perms.len() != n || edge_perms.len() != n {
            return Err(Error::InvalidGroup("one permutation per element required".into()));
        }
        let action = HypergraphAction {
            group,
            vertex_perms,
            edge_perms,
        };
        for g in 0..n {
            check_automorphism(&action.morphism(g), h).map_err(|reason| Error::NotAutomorphism {
                generator: action.group.name(g).to_string(),
                reason,
            })?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = action.group.mul(a, b);
                let ok_v = (0..h.num_vertices())
                    .all(|v| action.vertex_perms[ab][v] == action.act_vertex(a, action.act_vertex(b, v)));
                let ok_e = (0..h.num_edges())
                    .all(|e| action.edge_perms[ab][e] == action.act_edge(a, action.act_edge(b, e)));
                if !ok_v || !ok_e {
                    return Err(Error::InvalidGroup("assignment is not a homomorphism".into()));
                }
            }
        }
        Ok(action)
    }

    /// The trivial group acting trivially.
    pub fn trivial(h: &Hypergraph) -> Self {
        HypergraphAction {
            group: Arc::new(FiniteGroup::trivial()),
            vertex_perms: vec![(0..h.num_vertices()).collect()],
            edge_perms: vec![(0..h.num_edges()).collect()],
        }
    }

    pub fn from_doc(doc: &ActionDoc, h: &Hypergraph) -> Result<Self> {
        let gens = doc
            .generators
            .iter()
            .map(|g| Generator::from_doc(g, h))
            .collect::<Result<Vec<_>>>()?;
        closure_from_generators(h, &gens, DEFAULT_GROUP_CAP)
    }

    pub fn from_json(s: &str, h: &Hypergraph) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?, h)
    }

    /// Exports the generators (fixed points omitted).
    pub fn to_doc(&self, h: &Hypergraph) -> ActionDoc {
        let generators = self
            .group
            .generators()
            .iter()
            .map(|&g| GeneratorDoc {
                name: self.group.name(g).to_string(),
                vertices: (0..h.num_vertices())
                    .filter(|&v| self.act_vertex(g, v) != v)
                    .map(|v| (h.vertex_id(v).to_string(), h.vertex_id(self.act_vertex(g, v)).to_string()))
                    .collect(),
                edges: (0..h.num_edges())
                    .filter(|&e| self.act_edge(g, e) != e)
                    .map(|e| (h.edge_id(e).to_string(), h.edge_id(self.act_edge(g, e)).to_string()))
                    .collect(),
            })
            .collect();
        ActionDoc { generators }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.vertex_perms[g][v]
    }

    pub fn act_edge(&self, g: usize, e: usize) -> usize {
        self.edge_perms[g][e]
    }

    pub fn morphism(&self, g: usize) -> HypergraphMorphism {
        HypergraphMorphism {
            vertex_map: self.vertex_perms[g].clone(),
            edge_map: self.edge_perms[g].clone(),
        }
    }

    /// The element sending vertex `from` to `to`, if any (unique for free actions).
    pub fn vertex_transporter(&self, from: usize, to: usize) -> Option<usize> {
        (0..self.group.order()).find(|&g| self.act_vertex(g, from) == to)
    }

    pub fn edge_transporter(&self, from: usize, to: usize) -> Option<usize> {
        (0..self.group.order()).find(|&g| self.act_edge(g, from) == to)
    }

    /// Vertex orbit index per vertex together with orbit representatives
    /// (least index), orbits ordered by representative.
    pub fn vertex_orbits(&self) -> (Vec<usize>, Vec<usize>) {
        orbits(&self.vertex_perms)
    }

    pub fn edge_orbits(&self) -> (Vec<usize>, Vec<usize>) {
        orbits(&self.edge_perms)
    }
}

fn orbits(perms: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let n = perms.first().map_or(0, Vec::len);
    let mut orbit = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if orbit[x] != usize::MAX {
            continue;
        }
        for p in perms {
            orbit[p[x]] = reps.len();
        }
        reps.push(x);
    }
    (orbit, reps)
}

/// Generates the group spanned by `gens` (BFS over words), naming the
/// identity `id` and every other element by its first-found word `s*x`.
pub fn closure_from_generators(
    h: &Hypergraph,
    gens: &[Generator],
    cap: usize,
) -> Result<HypergraphAction> {
    for g in gens {
        check_automorphism(&g.as_morphism(), h).map_err(|reason| Error::NotAutomorphism {
            generator: g.name.clone(),
            reason,
        })?;
    }
    type Elem = (Vec<usize>, Vec<usize>);
    let id: Elem = ((0..h.num_vertices()).collect(), (0..h.num_edges()).collect());
    let mut elems: Vec<Elem> = vec![id.clone()];
    let mut names = vec!["id".to_string()];
    let mut index: HashMap<Elem, usize> = HashMap::from([(id, 0)]);
    let mut gen_index = Vec::with_capacity(gens.len());
    let mut queue = VecDeque::from([0usize]);
    let compose = |a: &Elem, b: &Elem| -> Elem {
        (
            b.0.iter().map(|&v| a.0[v]).collect(),
            b.1.iter().map(|&e| a.1[e]).collect(),
        )
    };
    for g in gens {
        let e: Elem = (g.vertex_perm.clone(), g.edge_perm.clone());
        let k = match index.get(&e) {
            Some(&k) => k,
            None => {
                if elems.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                index.insert(e.clone(), elems.len());
                elems.push(e);
                names.push(g.name.clone());
                queue.push_back(elems.len() - 1);
                elems.len() - 1
            }
        };
        if !gen_index.contains(&k) && k != 0 {
            gen_index.push(k);
        }
    }
    while let Some(x) = queue.pop_front() {
        for (s, g) in gens.iter().enumerate() {
            let sx = compose(&(gens[s].vertex_perm.clone(), gens[s].edge_perm.clone()), &elems[x]);
            if index.contains_key(&sx) {
                continue;
            }
            if elems.len() >= cap {
                return Err(Error::GroupTooLarge { cap });
            }
            let name = if x == 0 {
                g.name.clone()
            } else {
                format!("{}*{}", g.name, names[x])
            };
            index.insert(sx.clone(), elems.len());
            elems.push(sx);
            names.push(name);
            queue.push_back(elems.len() - 1);
        }
    }
    let n = elems.len();
    let table = (0..n)
        .map(|a| (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect())
        .collect();
    let group = FiniteGroup::from_table(names, table, gen_index)?;
    let (vertex_perms, edge_perms) = elems.into_iter().unzip();
    Ok(HypergraphAction {
        group: Arc::new(group),
        vertex_perms,
        edge_perms,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreeViolation {
    FixedVertex { element: String, vertex: String },
    FixedEdge { element: String, edge: String },
    SharedEdge { element: String, vertex: String, edge: String },
}

impl fmt::Display for FreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeViolation::FixedVertex { element, vertex } => {
                write!(f, "{element} fixes vertex {vertex}")
            }
            FreeViolation::FixedEdge { element, edge } => write!(f, "{element} fixes edge {edge}"),
            FreeViolation::SharedEdge {
                element,
                vertex,
                edge,
            } => write!(f, "{vertex} and its image under {element} both lie in {edge}"),
        }
    }
}

/// Checks freeness: no nonidentity element fixes a vertex or an edge, and
/// `v ∈ e` implies `g(v) ∉ e` for every `g ≠ id`.
pub fn is_free_action(a: &HypergraphAction, h: &Hypergraph) -> std::result::Result<(), FreeViolation> {
    let group = a.group();
    for g in (0..group.order()).filter(|&g| g != group.identity()) {
        let element = group.name(g).to_string();
        if let Some(v) = (0..h.num_vertices()).find(|&v| a.act_vertex(g, v) == v) {
            return Err(FreeViolation::FixedVertex {
                element,
                vertex: h.vertex_id(v).to_string(),
            });
        }
        for (e, edge) in h.edges().iter().enumerate() {
            if let Some(&v) = edge.members.iter().find(|&&v| h.contains(e, a.act_vertex(g, v))) {
                return Err(FreeViolation::SharedEdge {
                    element,
                    vertex: h.vertex_id(v).to_string(),
                    edge: edge.id.clone(),
                });
            }
        }
        if let Some(e) = (0..h.num_edges()).find(|&e| a.act_edge(g, e) == e) {
            return Err(FreeViolation::FixedEdge {
                element,
                edge: h.edge_id(e).to_string(),
            });
        }
    }
    Ok(())
}

/// The quotient `H/G` and the projection `π`.
///
/// Orbits are named after their least-index representative and listed in
/// representative order; an edge orbit `[e]` has members `{[v] : v ∈ e}`.
pub fn quotient(a: &HypergraphAction, h: &Hypergraph) -> Result<(Hypergraph, HypergraphMorphism)> {
    let (v_orbit, v_reps) = a.vertex_orbits();
    let (e_orbit, e_reps) = a.edge_orbits();
    let vertices = v_reps.iter().map(|&v| h.vertex_id(v).to_string()).collect();
    let edges = e_reps
        .iter()
        .map(|&e| {
            let mut m: Vec<usize> = h.members(e).iter().map(|&v| v_orbit[v]).collect();
            m.sort_unstable();
            m.dedup();
            (h.edge_id(e).to_string(), m)
        })
        .collect();
    let q = Hypergraph::from_indices(vertices, edges)?;
    let pi = HypergraphMorphism {
        vertex_map: v_orbit,
        edge_map: e_orbit,
    };
    pi.validate(h, &q)?;
    Ok((q, pi))
}

/// `B_H` viewed as a hypergraph whose edges are the incidences.
pub fn incidence_hypergraph(b: &BipartiteTag) -> Hypergraph {
    b.graph()
        .to_hypergraph()
        .expect("incidence graph has no isolated nodes")
}

/// The action induced on `B_H` (each group element acts by `B(g)`),
/// expressed on the incidence graph viewed as a hypergraph.
pub fn induced_action_on_incidence(
    a: &HypergraphAction,
    h: &Hypergraph,
    b: &BipartiteTag,
) -> Result<HypergraphAction> {
    let n = a.group().order();
    let mut vertex_perms = Vec::with_capacity(n);
    let mut edge_perms = Vec::with_capacity(n);
    for g in 0..n {
        let m = crate::hypergraph::induced_morphism(&a.morphism(g), h, b, h, b)?;
        vertex_perms.push(m.vertex_map);
        edge_perms.push(m.edge_map);
    }
    HypergraphAction::new(
        a.group_arc().clone(),
        vertex_perms,
        edge_perms,
        &incidence_hypergraph(b),
    )
}

/// All automorphisms `σ` of `y` with `π∘σ = π`, by fiber-preserving
/// backtracking on the incidence graph.
pub fn deck_group(
    y: &Hypergraph,
    pi: &HypergraphMorphism,
    budget: u64,
) -> Result<Vec<HypergraphMorphism>> {
    let b = incidence_graph(y);
    let nv = y.num_vertices();
    let fiber = |node: usize| -> (bool, usize) {
        if node < nv {
            (false, pi.vertex_map[node])
        } else {
            (true, pi.edge_map[node - nv])
        }
    };
    let found = search_bipartite_isos(&b, &b, &|x, t| fiber(x) == fiber(t), true, budget)?;
    Ok(found
        .into_iter()
        .map(|nodes| node_map_to_morphism(&nodes, &b, &b))
        .collect())
}

/// Checks that `π` restricts to bijections on neighbourhoods: edges at `y`
/// onto edges at `π(y)`, and members of `e` onto members of `π(e)`.
pub fn is_local_isomorphism(y: &Hypergraph, x: &Hypergraph, pi: &HypergraphMorphism) -> bool {
    let bijects = |src: &[usize], dst: &[usize], f: &dyn Fn(usize) -> usize| {
        let mut img: Vec<usize> = src.iter().map(|&s| f(s)).collect();
        img.sort_unstable();
        img == dst
    };
    (0..y.num_vertices()).all(|v| {
        bijects(
            y.incident_edges(v),
            x.incident_edges(pi.vertex_map[v]),
            &|e| pi.edge_map[e],
        )
    }) && (0..y.num_edges()).all(|e| {
        bijects(y.members(e), x.members(pi.edge_map[e]), &|v| pi.vertex_map[v])
    })
}

/// Outcome of the covering checks for an action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisReport {
    pub free: bool,
    pub free_witness: Option<FreeViolation>,
    pub local_isomorphism: bool,
    pub base_matches: Option<bool>,
    pub group_order: usize,
    pub deck_order: Option<usize>,
    pub action_in_deck: Option<bool>,
    pub deck_error: Option<String>,
}

impl GaloisReport {
    /// Condition (2): the quotient map is a covering onto the expected base.
    pub fn quotient_ok(&self) -> bool {
        self.local_isomorphism && self.base_matches.unwrap_or(true)
    }

    /// Condition (3): the deck group is exactly the acting group.
    pub fn deck_ok(&self) -> bool {
        self.deck_order == Some(self.group_order) && self.action_in_deck == Some(true)
    }

    pub fn all_pass(&self) -> bool {
        self.free && self.quotient_ok() && self.deck_ok()
    }
}

/// Runs the three covering conditions; `base`, if given, must be isomorphic
/// to the computed quotient.
pub fn verify_galois(
    a: &HypergraphAction,
    y: &Hypergraph,
    base: Option<&Hypergraph>,
) -> Result<GaloisReport> {
    let free_witness = is_free_action(a, y).err();
    let (x, pi) = quotient(a, y)?;
    let local_isomorphism = is_local_isomorphism(y, &x, &pi);
    let base_matches = match base {
        Some(b) => Some(is_isomorphic(&x, b)?.is_some()),
        None => None,
    };
    let (deck_order, action_in_deck, deck_error) = match deck_group(y, &pi, DEFAULT_SEARCH_BUDGET) {
        Ok(deck) => {
            let inside = (0..a.group().order()).all(|g| deck.contains(&a.morphism(g)));
            (Some(deck.len()), Some(inside), None)
        }
        Err(e) => (None, None, Some(e.to_string())),
    };
    Ok(GaloisReport {
        free: free_witness.is_none(),
        free_witness,
        local_isomorphism,
        base_matches,
        group_order: a.group().order(),
        deck_order,
        action_in_deck,
        deck_error,
    })
}
