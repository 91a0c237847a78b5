//! Hypergraphs, multigraphs, incidence bipartite graphs and morphisms.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub id: String,
    /// Member vertex indices, strictly increasing.
    pub members: Vec<usize>,
}

/// A finite hypergraph `(V, E)` with `E` a multiset of nonempty vertex subsets.
///
/// Edges carry their own ids, so repeated member sets stay distinguishable.
/// Vertex and edge ids must be pairwise distinct, and every vertex must lie in
/// at least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: Vec<String>,
    edges: Vec<Hyperedge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    incident: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperedgeDoc {
    pub id: String,
    pub members: Vec<String>,
}

/// JSON form: `{"vertices": [...], "edges": [{"id": .., "members": [..]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<HyperedgeDoc>,
}

fn index_ids(ids: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if map.insert(id.clone(), i).is_some() {
            return Err(Error::InvalidHypergraph(format!("duplicate {what} id {id:?}")));
        }
    }
    Ok(map)
}

impl Hypergraph {
    /// Builds a hypergraph from ids; `edges` pairs an edge id with member ids.
    pub fn new<V, E, M>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, M)>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let vertex_index = index_ids(&vertices, "vertex")?;
        let mut out = Vec::new();
        for (id, members) in edges {
            let mut idx = Vec::new();
            for m in members {
                let m: String = m.into();
                let &i = vertex_index.get(&m).ok_or_else(|| {
                    Error::InvalidHypergraph(format!("edge {id:?} uses undeclared vertex {m:?}"))
                })?;
                idx.push(i);
            }
            out.push((id, idx));
        }
        Self::from_indices(vertices, out)
    }

    /// Builds a hypergraph whose edges are given by member indices.
    pub fn from_indices(vertices: Vec<String>, edges: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let vertex_index = index_ids(&vertices, "vertex")?;
        let edge_ids: Vec<String> = edges.iter().map(|(id, _)| id.clone()).collect();
        let edge_index = index_ids(&edge_ids, "edge")?;
        if vertices.is_empty() || edges.is_empty() {
            return Err(Error::InvalidHypergraph(
                "vertex and edge sets must be nonempty".into(),
            ));
        }
        if let Some(id) = edge_ids.iter().find(|id| vertex_index.contains_key(*id)) {
            return Err(Error::InvalidHypergraph(format!(
                "id {id:?} names both a vertex and an edge"
            )));
        }
        let mut incident = vec![Vec::new(); vertices.len()];
        let mut hedges = Vec::with_capacity(edges.len());
        for (j, (id, mut members)) in edges.into_iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge {id:?} is empty")));
            }
            members.sort_unstable();
            if members.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {id:?} lists a vertex twice"
                )));
            }
            if let Some(&bad) = members.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {id:?} uses vertex index {bad} out of range"
                )));
            }
            for &v in &members {
                incident[v].push(j);
            }
            hedges.push(Hyperedge { id, members });
        }
        if let Some(v) = incident.iter().position(Vec::is_empty) {
            return Err(Error::InvalidHypergraph(format!(
                "vertex {:?} lies in no edge",
                vertices[v]
            )));
        }
        Ok(Hypergraph {
            vertices,
            edges: hedges,
            vertex_index,
            edge_index,
            incident,
        })
    }

    pub fn from_doc(doc: &HypergraphDoc) -> Result<Self> {
        Self::new(
            doc.vertices.iter().cloned(),
            doc.edges
                .iter()
                .map(|e| (e.id.clone(), e.members.iter().cloned())),
        )
    }

    pub fn to_doc(&self) -> HypergraphDoc {
        HypergraphDoc {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| HyperedgeDoc {
                    id: e.id.clone(),
                    members: e.members.iter().map(|&v| self.vertices[v].clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("hypergraph serializes")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Hyperedge {
        &self.edges[e]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn members(&self, e: usize) -> &[usize] {
        &self.edges[e].members
    }

    /// Edges containing `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn contains(&self, e: usize, v: usize) -> bool {
        self.edges[e].members.binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn num_incidences(&self) -> usize {
        self.edges.iter().map(|e| e.members.len()).sum()
    }

    pub fn has_degree_one_vertex(&self) -> bool {
        self.incident.iter().any(|i| i.len() == 1)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &e in &self.incident[v] {
                for &w in &self.edges[e].members {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        count == self.num_vertices()
    }

    /// Reads a hypergraph with only 2-element edges as a multigraph.
    pub fn as_graph(&self) -> Result<Graph> {
        let edges = self
            .edges
            .iter()
            .map(|e| match e.members[..] {
                [a, b] => Ok((e.id.clone(), a, b)),
                _ => Err(Error::InvalidGraph(format!(
                    "edge {:?} has {} members",
                    e.id,
                    e.members.len()
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::from_indices(self.vertices.clone(), edges)
    }
}

/// Finite multigraph without loops; isolated vertices are allowed.
///
/// Edge `k` yields the directed edges `2k` (first endpoint to second) and
/// `2k + 1` (reverse), so the inverse of `d` is `d ^ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edge_ids: Vec<String>,
    endpoints: Vec<(usize, usize)>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new<V>(vertices: V, edges: Vec<(String, String, String)>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let vertex_index = index_ids(&vertices, "vertex")
            .map_err(|e| Error::InvalidGraph(e.to_string()))?;
        let mut out = Vec::with_capacity(edges.len());
        for (id, a, b) in edges {
            let look = |x: &String| {
                vertex_index.get(x).copied().ok_or_else(|| {
                    Error::InvalidGraph(format!("edge {id:?} uses undeclared vertex {x:?}"))
                })
            };
            out.push((id.clone(), look(&a)?, look(&b)?));
        }
        Self::from_indices(vertices, out)
    }

    pub fn from_indices(vertices: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self> {
        let vertex_index = index_ids(&vertices, "vertex")
            .map_err(|e| Error::InvalidGraph(e.to_string()))?;
        let edge_ids: Vec<String> = edges.iter().map(|e| e.0.clone()).collect();
        let edge_index =
            index_ids(&edge_ids, "edge").map_err(|e| Error::InvalidGraph(e.to_string()))?;
        let mut out = vec![Vec::new(); vertices.len()];
        let mut endpoints = Vec::with_capacity(edges.len());
        for (k, (id, a, b)) in edges.into_iter().enumerate() {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::InvalidGraph(format!("edge {id:?} out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("edge {id:?} is a loop")));
            }
            out[a].push(2 * k);
            out[b].push(2 * k + 1);
            endpoints.push((a, b));
        }
        Ok(Graph {
            vertices,
            edge_ids,
            endpoints,
            vertex_index,
            edge_index,
            out,
        })
    }

    /// Graph JSON uses the hypergraph layout with 2-element member lists;
    /// isolated vertices are permitted here.
    pub fn from_doc(doc: &HypergraphDoc) -> Result<Self> {
        let edges = doc
            .edges
            .iter()
            .map(|e| match &e.members[..] {
                [a, b] => Ok((e.id.clone(), a.clone(), b.clone())),
                _ => Err(Error::InvalidGraph(format!(
                    "edge {:?} must have exactly 2 endpoints",
                    e.id
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.vertices.iter().cloned(), edges)
    }

    pub fn to_doc(&self) -> HypergraphDoc {
        HypergraphDoc {
            vertices: self.vertices.clone(),
            edges: (0..self.num_edges())
                .map(|k| {
                    let (a, b) = self.endpoints[k];
                    HyperedgeDoc {
                        id: self.edge_ids[k].clone(),
                        members: vec![self.vertices[a].clone(), self.vertices[b].clone()],
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.endpoints.len()
    }

    pub fn num_directed(&self) -> usize {
        2 * self.endpoints.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_id(&self, k: usize) -> &str {
        &self.edge_ids[k]
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn endpoints(&self, k: usize) -> (usize, usize) {
        self.endpoints[k]
    }

    /// Initial vertex of a directed edge.
    pub fn tail(&self, d: usize) -> usize {
        let (a, b) = self.endpoints[d / 2];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    /// Terminal vertex of a directed edge.
    pub fn head(&self, d: usize) -> usize {
        self.tail(d ^ 1)
    }

    pub fn inverse(d: usize) -> usize {
        d ^ 1
    }

    /// Directed edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// Directed edges that may follow `d` without backtracking.
    pub fn successors(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[self.head(d)].iter().copied().filter(move |&b| b != d ^ 1)
    }

    /// The cycle rank `|E| - |V| + 1` (for connected graphs).
    pub fn cycle_rank(&self) -> i64 {
        self.num_edges() as i64 - self.num_vertices() as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.out[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.num_vertices()
    }

    /// Adjacency matrix entries: number of edges between each pair.
    pub fn adjacency_counts(&self) -> Vec<Vec<i64>> {
        let n = self.num_vertices();
        let mut a = vec![vec![0; n]; n];
        for &(x, y) in &self.endpoints {
            a[x][y] += 1;
            a[y][x] += 1;
        }
        a
    }

    /// Reads the graph as a hypergraph with 2-element edges.
    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        Hypergraph::from_indices(
            self.vertices.clone(),
            (0..self.num_edges())
                .map(|k| {
                    let (a, b) = self.endpoints[k];
                    (self.edge_ids[k].clone(), vec![a, b])
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Vertex,
    Edge,
}

/// The incidence bipartite graph `B_H` of a hypergraph.
///
/// Graph vertex `v` (for `v < |V(H)|`) is hypergraph vertex `v`; graph vertex
/// `|V(H)| + e` is hyperedge `e`. Graph edges are the incidences `(v, e)`,
/// listed edge by edge with members ascending, oriented vertex-to-edge and
/// named `"v:e"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteTag {
    graph: Graph,
    sides: Vec<Side>,
    num_hyper_vertices: usize,
    incidences: Vec<(usize, usize)>,
    incidence_index: HashMap<(usize, usize), usize>,
}

impl BipartiteTag {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn side(&self, node: usize) -> Side {
        self.sides[node]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn num_hyper_vertices(&self) -> usize {
        self.num_hyper_vertices
    }

    pub fn vertex_node(&self, v: usize) -> usize {
        v
    }

    pub fn edge_node(&self, e: usize) -> usize {
        self.num_hyper_vertices + e
    }

    /// `(vertex, edge)` indices of each incidence, in graph-edge order.
    pub fn incidences(&self) -> &[(usize, usize)] {
        &self.incidences
    }

    pub fn incidence(&self, v: usize, e: usize) -> Option<usize> {
        self.incidence_index.get(&(v, e)).copied()
    }

    pub fn is_properly_bipartite(&self) -> bool {
        (0..self.graph.num_edges()).all(|k| {
            let (a, b) = self.graph.endpoints(k);
            self.sides[a] != self.sides[b]
        })
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        (0..self.graph.num_edges()).all(|k| {
            let (a, b) = self.graph.endpoints(k);
            seen.insert((a.min(b), a.max(b)))
        })
    }
}

pub fn incidence_graph(h: &Hypergraph) -> BipartiteTag {
    let nv = h.num_vertices();
    let mut nodes: Vec<String> = h.vertex_ids().to_vec();
    nodes.extend(h.edges().iter().map(|e| e.id.clone()));
    let mut sides = vec![Side::Vertex; nv];
    sides.extend(std::iter::repeat(Side::Edge).take(h.num_edges()));
    let mut edges = Vec::with_capacity(h.num_incidences());
    let mut incidences = Vec::with_capacity(h.num_incidences());
    let mut incidence_index = HashMap::new();
    for (e, edge) in h.edges().iter().enumerate() {
        for &v in &edge.members {
            incidence_index.insert((v, e), incidences.len());
            incidences.push((v, e));
            edges.push((format!("{}:{}", h.vertex_id(v), edge.id), v, nv + e));
        }
    }
    let graph = Graph::from_indices(nodes, edges).expect("incidence graph is well formed");
    BipartiteTag {
        graph,
        sides,
        num_hyper_vertices: nv,
        incidences,
        incidence_index,
    }
}

/// A pair of maps `(φ_V, φ_E)` given by indices. Also used for graph
/// morphisms, where incidence means "is an endpoint of".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypergraphMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

pub type GraphMorphism = HypergraphMorphism;

impl HypergraphMorphism {
    pub fn identity(num_vertices: usize, num_edges: usize) -> Self {
        HypergraphMorphism {
            vertex_map: (0..num_vertices).collect(),
            edge_map: (0..num_edges).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Checks that `v ∈ e ⇒ φ_V(v) ∈ φ_E(e)`.
    pub fn validate(&self, from: &Hypergraph, to: &Hypergraph) -> Result<()> {
        if self.vertex_map.len() != from.num_vertices() || self.edge_map.len() != from.num_edges()
        {
            return Err(Error::InvalidMorphism("map sizes do not match the source".into()));
        }
        if self.vertex_map.iter().any(|&v| v >= to.num_vertices())
            || self.edge_map.iter().any(|&e| e >= to.num_edges())
        {
            return Err(Error::InvalidMorphism("map leaves the target".into()));
        }
        for (e, edge) in from.edges().iter().enumerate() {
            for &v in &edge.members {
                if !to.contains(self.edge_map[e], self.vertex_map[v]) {
                    return Err(Error::InvalidMorphism(format!(
                        "{} ∈ {} but {} ∉ {}",
                        from.vertex_id(v),
                        edge.id,
                        to.vertex_id(self.vertex_map[v]),
                        to.edge_id(self.edge_map[e])
                    )));
                }
            }
        }
        Ok(())
    }

    /// Graph-morphism check: each edge goes to an edge on the image endpoints.
    pub fn validate_graph(&self, from: &Graph, to: &Graph) -> Result<()> {
        if self.vertex_map.len() != from.num_vertices() || self.edge_map.len() != from.num_edges()
        {
            return Err(Error::InvalidMorphism("map sizes do not match the source".into()));
        }
        for k in 0..from.num_edges() {
            let (a, b) = from.endpoints(k);
            let &t = self.edge_map.get(k).ok_or_else(|| Error::InvalidMorphism("edge".into()))?;
            if t >= to.num_edges() {
                return Err(Error::InvalidMorphism("map leaves the target".into()));
            }
            let (x, y) = to.endpoints(t);
            let (fa, fb) = (self.vertex_map[a], self.vertex_map[b]);
            if !((fa, fb) == (x, y) || (fa, fb) == (y, x)) {
                return Err(Error::InvalidMorphism(format!(
                    "edge {} does not map onto its image's endpoints",
                    from.edge_id(k)
                )));
            }
        }
        Ok(())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &HypergraphMorphism) -> HypergraphMorphism {
        HypergraphMorphism {
            vertex_map: first.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: first.edge_map.iter().map(|&e| self.edge_map[e]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        fn perm(m: &[usize]) -> bool {
            let mut seen = vec![false; m.len()];
            m.iter().all(|&x| x < m.len() && !std::mem::replace(&mut seen[x], true))
        }
        perm(&self.vertex_map) && perm(&self.edge_map)
    }

    pub fn inverse(&self) -> HypergraphMorphism {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (i, &j) in self.vertex_map.iter().enumerate() {
            vertex_map[j] = i;
        }
        let mut edge_map = vec![0; self.edge_map.len()];
        for (i, &j) in self.edge_map.iter().enumerate() {
            edge_map[j] = i;
        }
        HypergraphMorphism {
            vertex_map,
            edge_map,
        }
    }
}

/// The graph morphism `B_φ : B_{h1} → B_{h2}` induced by a hypergraph morphism.
pub fn induced_morphism(
    phi: &HypergraphMorphism,
    h1: &Hypergraph,
    b1: &BipartiteTag,
    h2: &Hypergraph,
    b2: &BipartiteTag,
) -> Result<GraphMorphism> {
    phi.validate(h1, h2)?;
    let mut vertex_map: Vec<usize> = phi.vertex_map.iter().map(|&v| b2.vertex_node(v)).collect();
    vertex_map.extend(phi.edge_map.iter().map(|&e| b2.edge_node(e)));
    let edge_map = b1
        .incidences()
        .iter()
        .map(|&(v, e)| {
            b2.incidence(phi.vertex_map[v], phi.edge_map[e])
                .ok_or_else(|| Error::Internal("image incidence missing".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphMorphism {
        vertex_map,
        edge_map,
    })
}

/// Converts a node map of incidence graphs back into a hypergraph morphism.
pub(crate) fn node_map_to_morphism(
    nodes: &[usize],
    b_from: &BipartiteTag,
    b_to: &BipartiteTag,
) -> HypergraphMorphism {
    let nv = b_from.num_hyper_vertices();
    HypergraphMorphism {
        vertex_map: nodes[..nv].to_vec(),
        edge_map: nodes[nv..]
            .iter()
            .map(|&n| n - b_to.num_hyper_vertices())
            .collect(),
    }
}

/// Default node budget for backtracking searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

/// Backtracking search for node bijections between two simple bipartite
/// graphs that preserve sides and adjacency, subject to `allowed(x, y)`.
/// Returns all solutions when `all`, otherwise at most one.
pub(crate) fn search_bipartite_isos(
    b1: &BipartiteTag,
    b2: &BipartiteTag,
    allowed: &dyn Fn(usize, usize) -> bool,
    all: bool,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let g1 = b1.graph();
    let g2 = b2.graph();
    let n = g1.num_vertices();
    if n != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return Ok(Vec::new());
    }
    let nbrs = |g: &Graph, x: usize| -> Vec<usize> {
        g.out_edges(x).iter().map(|&d| g.head(d)).collect()
    };
    let adj1: Vec<Vec<usize>> = (0..n).map(|x| nbrs(g1, x)).collect();
    let adj2: Vec<Vec<usize>> = (0..n).map(|x| nbrs(g2, x)).collect();
    let adj2_set: Vec<HashSet<usize>> = adj2.iter().map(|a| a.iter().copied().collect()).collect();

    // BFS order so each node after a component root has an earlier neighbour.
    let mut order = Vec::with_capacity(n);
    let mut anchor = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for &y in &adj1[x] {
                if !seen[y] {
                    seen[y] = true;
                    anchor[y] = Some(x);
                    q.push_back(y);
                }
            }
        }
    }

    struct State<'a> {
        map: Vec<Option<usize>>,
        used: Vec<bool>,
        steps: u64,
        budget: u64,
        out: Vec<Vec<usize>>,
        all: bool,
        order: &'a [usize],
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        st: &mut State<'_>,
        depth: usize,
        b1: &BipartiteTag,
        b2: &BipartiteTag,
        adj1: &[Vec<usize>],
        adj2: &[Vec<usize>],
        adj2_set: &[HashSet<usize>],
        anchor: &[Option<usize>],
        allowed: &dyn Fn(usize, usize) -> bool,
    ) -> Result<bool> {
        if depth == st.order.len() {
            st.out.push(st.map.iter().map(|m| m.unwrap()).collect());
            return Ok(!st.all);
        }
        let x = st.order[depth];
        let candidates: Vec<usize> = match anchor[x] {
            Some(a) => adj2[st.map[a].unwrap()].clone(),
            None => (0..adj2.len()).collect(),
        };
        for y in candidates {
            st.steps += 1;
            if st.steps > st.budget {
                return Err(Error::SearchLimit { budget: st.budget });
            }
            if st.used[y]
                || b1.side(x) != b2.side(y)
                || adj1[x].len() != adj2[y].len()
                || !allowed(x, y)
            {
                continue;
            }
            let mut mapped_nbrs = 0;
            let consistent = adj1[x].iter().all(|&z| match st.map[z] {
                Some(fz) => {
                    mapped_nbrs += 1;
                    adj2_set[y].contains(&fz)
                }
                None => true,
            });
            if !consistent {
                continue;
            }
            let image_nbrs = adj2[y].iter().filter(|&&w| st.used[w]).count();
            if image_nbrs != mapped_nbrs {
                continue;
            }
            st.map[x] = Some(y);
            st.used[y] = true;
            let done = go(st, depth + 1, b1, b2, adj1, adj2, adj2_set, anchor, allowed)?;
            st.map[x] = None;
            st.used[y] = false;
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let mut st = State {
        map: vec![None; n],
        used: vec![false; n],
        steps: 0,
        budget,
        out: Vec::new(),
        all,
        order: &order,
    };
    go(&mut st, 0, b1, b2, &adj1, &adj2, &adj2_set, &anchor, allowed)?;
    Ok(st.out)
}

/// Finds an isomorphism `h1 → h2`, if one exists.
pub fn is_isomorphic(h1: &Hypergraph, h2: &Hypergraph) -> Result<Option<HypergraphMorphism>> {
    if h1.num_vertices() != h2.num_vertices()
        || h1.num_edges() != h2.num_edges()
        || h1.num_incidences() != h2.num_incidences()
    {
        return Ok(None);
    }
    let b1 = incidence_graph(h1);
    let b2 = incidence_graph(h2);
    let found = search_bipartite_isos(&b1, &b2, &|_, _| true, false, DEFAULT_SEARCH_BUDGET)?;
    Ok(found
        .into_iter()
        .next()
        .map(|nodes| node_map_to_morphism(&nodes, &b1, &b2)))
}

/// Finds a side-preserving isomorphism between two incidence graphs, as a
/// node map.
pub fn bipartite_isomorphism(b1: &BipartiteTag, b2: &BipartiteTag) -> Result<Option<Vec<usize>>> {
    Ok(search_bipartite_isos(b1, b2, &|_, _| true, false, DEFAULT_SEARCH_BUDGET)?
        .into_iter()
        .next())
}
