//! Free coverings `Y → Y/G`: sheet numbers from a spanning tree of `B_X`,
//! unique path lifting, and Frobenius elements.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::action::{
    induced_action_on_incidence, is_free_action, quotient, verify_galois, FiniteGroup,
    GaloisReport, HypergraphAction,
};
use crate::error::{Error, Result};
use crate::hypergraph::{
    incidence_graph, induced_morphism, BipartiteTag, Graph, GraphMorphism, Hypergraph,
    HypergraphMorphism,
};

/// A free action on a connected hypergraph together with its quotient and
/// the induced data on incidence graphs.
#[derive(Debug, Clone)]
pub struct FreeCovering {
    y: Hypergraph,
    action: HypergraphAction,
    x: Hypergraph,
    pi: HypergraphMorphism,
    b_y: BipartiteTag,
    b_x: BipartiteTag,
    b_action: HypergraphAction,
    b_pi: GraphMorphism,
}

impl FreeCovering {
    pub fn new(y: Hypergraph, action: HypergraphAction) -> Result<Self> {
        if let Err(w) = is_free_action(&action, &y) {
            return Err(Error::NotFree(w.to_string()));
        }
        if !y.is_connected() {
            return Err(Error::Disconnected("covering hypergraph".into()));
        }
        let (x, pi) = quotient(&action, &y)?;
        let b_y = incidence_graph(&y);
        let b_x = incidence_graph(&x);
        let b_action = induced_action_on_incidence(&action, &y, &b_y)?;
        let b_pi = induced_morphism(&pi, &y, &b_y, &x, &b_x)?;
        Ok(FreeCovering {
            y,
            action,
            x,
            pi,
            b_y,
            b_x,
            b_action,
            b_pi,
        })
    }

    pub fn cover(&self) -> &Hypergraph {
        &self.y
    }

    pub fn base(&self) -> &Hypergraph {
        &self.x
    }

    pub fn action(&self) -> &HypergraphAction {
        &self.action
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        self.action.group_arc()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn projection(&self) -> &HypergraphMorphism {
        &self.pi
    }

    pub fn cover_incidence(&self) -> &BipartiteTag {
        &self.b_y
    }

    pub fn base_incidence(&self) -> &BipartiteTag {
        &self.b_x
    }

    /// The group acting on `B_Y` (viewed as a hypergraph on its nodes).
    pub fn incidence_action(&self) -> &HypergraphAction {
        &self.b_action
    }

    /// `B(π) : B_Y → B_X`.
    pub fn incidence_projection(&self) -> &GraphMorphism {
        &self.b_pi
    }

    /// Runs all three covering conditions.
    pub fn verify(&self, base: Option<&Hypergraph>) -> Result<GaloisReport> {
        verify_galois(&self.action, &self.y, base)
    }

    /// Lifts the directed edge `d` of `B_X` to the directed edge of `B_Y` that
    /// leaves `start`.
    pub fn lift_edge(&self, d: usize, start: usize) -> Result<usize> {
        let gx = self.b_x.graph();
        let gy = self.b_y.graph();
        if self.b_pi.vertex_map[start] != gx.tail(d) {
            return Err(Error::InvalidPath(format!(
                "{} does not lie over {}",
                gy.vertex_id(start),
                gx.vertex_id(gx.tail(d))
            )));
        }
        gy.out_edges(start)
            .iter()
            .copied()
            .find(|&e| e % 2 == d % 2 && self.b_pi.edge_map[e / 2] == d / 2)
            .ok_or_else(|| Error::Internal("projection is not a local isomorphism".into()))
    }

    /// Unique lift of a `B_X` path starting at the `B_Y` node `start`.
    pub fn lift_bipartite_path(&self, path: &[usize], start: usize) -> Result<Vec<usize>> {
        check_bipartite_path(self.b_x.graph(), path)?;
        let gy = self.b_y.graph();
        let mut here = start;
        let mut out = Vec::with_capacity(path.len());
        for &d in path {
            let e = self.lift_edge(d, here)?;
            here = gy.head(e);
            out.push(e);
        }
        Ok(out)
    }

    /// Unique lift of a hypergraph path of `X` starting at vertex `start` of
    /// `Y`, computed in `Y` itself: at each step take the unique edge over
    /// `f` through the current vertex, then its unique member over the next
    /// vertex.
    pub fn lift_hyperpath(&self, p: &HyperPath, start: usize) -> Result<HyperPath> {
        p.validate(&self.x)?;
        if self.pi.vertex_map[start] != p.vertices[0] {
            return Err(Error::InvalidPath(format!(
                "{} does not lie over {}",
                self.y.vertex_id(start),
                self.x.vertex_id(p.vertices[0])
            )));
        }
        let mut vertices = vec![start];
        let mut edges = Vec::with_capacity(p.edges.len());
        for (k, &f) in p.edges.iter().enumerate() {
            let here = *vertices.last().unwrap();
            let e = unique(
                self.y
                    .incident_edges(here)
                    .iter()
                    .copied()
                    .filter(|&e| self.pi.edge_map[e] == f),
            )?;
            let next = unique(
                self.y
                    .members(e)
                    .iter()
                    .copied()
                    .filter(|&v| self.pi.vertex_map[v] == p.vertices[k + 1]),
            )?;
            edges.push(e);
            vertices.push(next);
        }
        Ok(HyperPath { vertices, edges })
    }
}

fn unique(mut it: impl Iterator<Item = usize>) -> Result<usize> {
    match (it.next(), it.next()) {
        (Some(x), None) => Ok(x),
        _ => Err(Error::Internal("projection is not a local isomorphism".into())),
    }
}

fn check_bipartite_path(g: &Graph, path: &[usize]) -> Result<()> {
    if let Some(&bad) = path.iter().find(|&&d| d >= g.num_directed()) {
        return Err(Error::InvalidPath(format!("directed edge {bad} out of range")));
    }
    if path.windows(2).any(|w| g.head(w[0]) != g.tail(w[1])) {
        return Err(Error::InvalidPath("consecutive edges do not meet".into()));
    }
    Ok(())
}

/// A hypergraph path `(v₀, e₁, v₁, …, e_k, v_k)` with `v_{i-1}, v_i ∈ e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HyperPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl HyperPath {
    pub fn trivial(v: usize) -> Self {
        HyperPath {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    /// Parses alternating ids `v₀, e₁, v₁, …`.
    pub fn parse(h: &Hypergraph, ids: &[&str]) -> Result<Self> {
        if ids.len() % 2 == 0 {
            return Err(Error::InvalidPath("expected an odd number of ids".into()));
        }
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (k, id) in ids.iter().enumerate() {
            if k % 2 == 0 {
                vertices.push(h.vertex(id).ok_or_else(|| Error::UnknownId(id.to_string()))?);
            } else {
                edges.push(h.edge_by_id(id).ok_or_else(|| Error::UnknownId(id.to_string()))?);
            }
        }
        let p = HyperPath { vertices, edges };
        p.validate(h)?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        if self.vertices.len() != self.edges.len() + 1 {
            return Err(Error::InvalidPath("vertex/edge counts do not alternate".into()));
        }
        for (k, &e) in self.edges.iter().enumerate() {
            if !(h.contains(e, self.vertices[k]) && h.contains(e, self.vertices[k + 1])) {
                return Err(Error::InvalidPath(format!(
                    "step {k} leaves edge {}",
                    h.edge_id(e)
                )));
            }
        }
        Ok(())
    }

    /// The corresponding path in `B_H`, of twice the length.
    pub fn to_bipartite(&self, b: &BipartiteTag) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for (k, &e) in self.edges.iter().enumerate() {
            let go = b
                .incidence(self.vertices[k], e)
                .ok_or_else(|| Error::InvalidPath("missing incidence".into()))?;
            let back = b
                .incidence(self.vertices[k + 1], e)
                .ok_or_else(|| Error::InvalidPath("missing incidence".into()))?;
            out.push(2 * go);
            out.push(2 * back + 1);
        }
        Ok(out)
    }

    pub fn render(&self, h: &Hypergraph) -> String {
        let mut parts = vec![h.vertex_id(self.vertices[0]).to_string()];
        for (k, &e) in self.edges.iter().enumerate() {
            parts.push(h.edge_id(e).to_string());
            parts.push(h.vertex_id(self.vertices[k + 1]).to_string());
        }
        format!("({})", parts.join(","))
    }
}

/// Overrides for the sheet construction; `None` picks the default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SheetChoice {
    /// Spanning tree of `B_X` as graph-edge indices.
    pub tree: Option<Vec<usize>>,
    pub base_vertex: Option<usize>,
    pub base_lift: Option<usize>,
}

impl SheetChoice {
    /// Resolves ids: tree edges as `"v:e"` names of `B_X`, bases as vertex ids.
    pub fn from_ids(
        cover: &FreeCovering,
        tree: Option<&[String]>,
        base_vertex: Option<&str>,
        base_lift: Option<&str>,
    ) -> Result<Self> {
        let gx = cover.base_incidence().graph();
        let tree = tree
            .map(|ids| {
                ids.iter()
                    .map(|id| gx.edge_by_id(id).ok_or_else(|| Error::UnknownId(id.clone())))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let base_vertex = base_vertex
            .map(|id| cover.base().vertex(id).ok_or_else(|| Error::UnknownId(id.into())))
            .transpose()?;
        let base_lift = base_lift
            .map(|id| cover.cover().vertex(id).ok_or_else(|| Error::UnknownId(id.into())))
            .transpose()?;
        Ok(SheetChoice {
            tree,
            base_vertex,
            base_lift,
        })
    }
}

/// Sheet numbers of every vertex and edge of `Y` (equivalently every node of
/// `B_Y`): the lift `T'` of the spanning tree through the base lift is sheet
/// `id`, and `g·T'` is sheet `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetAssignment {
    pub base_vertex: usize,
    pub base_lift: usize,
    pub tree: Vec<usize>,
    /// For each node of `B_X`, its preimage on sheet `id`.
    identity_lift: Vec<usize>,
    /// Sheet number of each node of `B_Y`.
    node_sheet: Vec<usize>,
    num_cover_vertices: usize,
}

impl SheetAssignment {
    pub fn node_sheet(&self, node: usize) -> usize {
        self.node_sheet[node]
    }

    pub fn vertex_sheet(&self, v: usize) -> usize {
        self.node_sheet[v]
    }

    pub fn edge_sheet(&self, e: usize) -> usize {
        self.node_sheet[self.num_cover_vertices + e]
    }

    /// The preimage of a `B_X` node lying on sheet `id`.
    pub fn identity_lift(&self, base_node: usize) -> usize {
        self.identity_lift[base_node]
    }

    /// Vertices of `Y` with sheet number `g`.
    pub fn sheet_vertices(&self, g: usize) -> Vec<usize> {
        (0..self.num_cover_vertices)
            .filter(|&v| self.node_sheet[v] == g)
            .collect()
    }

    /// Edges of `Y` with sheet number `g`.
    pub fn sheet_edges(&self, g: usize) -> Vec<usize> {
        (self.num_cover_vertices..self.node_sheet.len())
            .filter(|&n| self.node_sheet[n] == g)
            .map(|n| n - self.num_cover_vertices)
            .collect()
    }
}

/// Spanning tree of a connected graph by BFS from `root`, as edge indices in
/// discovery order.
pub fn bfs_spanning_tree(g: &Graph, root: usize) -> Vec<usize> {
    let mut seen = vec![false; g.num_vertices()];
    seen[root] = true;
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &d in g.out_edges(v) {
            let w = g.head(d);
            if !seen[w] {
                seen[w] = true;
                tree.push(d / 2);
                queue.push_back(w);
            }
        }
    }
    tree
}

fn check_spanning_tree(g: &Graph, tree: &[usize]) -> Result<()> {
    let n = g.num_vertices();
    if tree.len() + 1 != n {
        return Err(Error::InvalidTree(format!(
            "{} edges for {} nodes",
            tree.len(),
            n
        )));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &k in tree {
        if k >= g.num_edges() {
            return Err(Error::InvalidTree(format!("edge index {k} out of range")));
        }
        let (a, b) = g.endpoints(k);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(Error::InvalidTree(format!("edge {} closes a cycle", g.edge_id(k))));
        }
        parent[ra] = rb;
    }
    Ok(())
}

/// Builds the sheet partition. Defaults: BFS tree of `B_X` from node 0, base
/// vertex 0 of `X`, base lift the least-index preimage.
pub fn build_sheets(cover: &FreeCovering, choice: &SheetChoice) -> Result<SheetAssignment> {
    let gx = cover.b_x.graph();
    let gy = cover.b_y.graph();
    let tree = match &choice.tree {
        Some(t) => t.clone(),
        None => bfs_spanning_tree(gx, 0),
    };
    check_spanning_tree(gx, &tree)?;

    let base_vertex = match (choice.base_vertex, choice.base_lift) {
        (Some(v), _) => v,
        (None, Some(l)) => cover.pi.vertex_map[l],
        (None, None) => 0,
    };
    if base_vertex >= cover.x.num_vertices() {
        return Err(Error::UnknownId(format!("base vertex index {base_vertex}")));
    }
    let base_lift = match choice.base_lift {
        Some(l) => {
            if cover.pi.vertex_map.get(l) != Some(&base_vertex) {
                return Err(Error::InvalidTree(format!(
                    "{} does not lie over {}",
                    cover.y.vertex_id(l),
                    cover.x.vertex_id(base_vertex)
                )));
            }
            l
        }
        None => (0..cover.y.num_vertices())
            .find(|&v| cover.pi.vertex_map[v] == base_vertex)
            .ok_or_else(|| Error::Internal("empty fiber".into()))?,
    };

    // Lift T along its own edges, starting from the base lift.
    let mut in_tree = vec![Vec::new(); gx.num_vertices()];
    for &k in &tree {
        let (a, b) = gx.endpoints(k);
        in_tree[a].push(2 * k);
        in_tree[b].push(2 * k + 1);
    }
    let mut identity_lift = vec![usize::MAX; gx.num_vertices()];
    identity_lift[base_vertex] = base_lift;
    let mut queue = VecDeque::from([base_vertex]);
    while let Some(p) = queue.pop_front() {
        for &d in &in_tree[p] {
            let q = gx.head(d);
            if identity_lift[q] != usize::MAX {
                continue;
            }
            let e = cover.lift_edge(d, identity_lift[p])?;
            identity_lift[q] = gy.head(e);
            queue.push_back(q);
        }
    }

    let node_sheet = (0..gy.num_vertices())
        .map(|n| {
            let r = identity_lift[cover.b_pi.vertex_map[n]];
            cover
                .b_action
                .vertex_transporter(r, n)
                .ok_or_else(|| Error::Internal("fiber is not a single orbit".into()))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SheetAssignment {
        base_vertex,
        base_lift,
        tree,
        identity_lift,
        node_sheet,
        num_cover_vertices: cover.y.num_vertices(),
    })
}

/// Sheet number of the end of the lift of a `B_X` path started on sheet `id`.
/// For closed paths this is the Frobenius element.
pub fn frobenius(cover: &FreeCovering, sheets: &SheetAssignment, path: &[usize]) -> Result<usize> {
    let Some(&first) = path.first() else {
        return Ok(cover.group().identity());
    };
    let gx = cover.b_x.graph();
    let start = sheets.identity_lift(gx.tail(first));
    let lift = cover.lift_bipartite_path(path, start)?;
    let end = cover.b_y.graph().head(*lift.last().unwrap());
    Ok(sheets.node_sheet(end))
}

/// Frobenius element of a hypergraph path of `X`, lifted directly in `Y`.
pub fn hyperpath_frobenius(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    p: &HyperPath,
) -> Result<usize> {
    let start = sheets.identity_lift(cover.b_x.vertex_node(p.vertices[0]));
    let lift = cover.lift_hyperpath(p, start)?;
    Ok(sheets.vertex_sheet(*lift.vertices.last().unwrap()))
}

/// `σ(d) = s_i⁻¹·s_t` for a lift of `d` from sheet `s_i` to sheet `s_t`;
/// independent of the lift. Path Frobenius elements are the left-to-right
/// products of these.
pub fn edge_frobenius(cover: &FreeCovering, sheets: &SheetAssignment, d: usize) -> usize {
    let gx = cover.b_x.graph();
    let start = sheets.identity_lift(gx.tail(d));
    let e = cover
        .lift_edge(d, start)
        .expect("identity lift lies over the tail");
    sheets.node_sheet(cover.b_y.graph().head(e))
}

/// `σ` on every directed edge of `B_X`.
pub fn edge_frobenius_table(cover: &FreeCovering, sheets: &SheetAssignment) -> Vec<usize> {
    (0..cover.b_x.graph().num_directed())
        .map(|d| edge_frobenius(cover, sheets, d))
        .collect()
}

/// Voltage-style covering of `base` with group `group`: vertices `(v, g)`,
/// edges `(e, h)`, and `(v, g) ∈ (e, h)` iff `g = h·volt(v, e)`, where
/// `voltage[i]` is the voltage of the `i`-th incidence of `B_base`. The group
/// acts by left multiplication on the second coordinate, which is free.
pub fn voltage_cover(
    base: &Hypergraph,
    group: Arc<FiniteGroup>,
    voltage: &[usize],
) -> Result<(Hypergraph, HypergraphAction)> {
    let n = group.order();
    let b = incidence_graph(base);
    if voltage.len() != b.incidences().len() || voltage.iter().any(|&g| g >= n) {
        return Err(Error::InvalidGroup("one voltage per incidence required".into()));
    }
    let nv = base.num_vertices();
    let vid = |v: usize, g: usize| v * n + g;
    let vertices: Vec<String> = (0..nv)
        .flat_map(|v| (0..n).map(move |g| (v, g)))
        .map(|(v, g)| format!("{}_{}", base.vertex_id(v), group.name(g)))
        .collect();
    let mut edges = Vec::with_capacity(base.num_edges() * n);
    for e in 0..base.num_edges() {
        for h in 0..n {
            let members = base
                .members(e)
                .iter()
                .map(|&v| {
                    let i = b.incidence(v, e).unwrap();
                    vid(v, group.mul(h, voltage[i]))
                })
                .collect();
            edges.push((format!("{}_{}", base.edge_id(e), group.name(h)), members));
        }
    }
    let y = Hypergraph::from_indices(vertices, edges)?;
    let vertex_perms = (0..n)
        .map(|k| (0..nv * n).map(|x| vid(x / n, group.mul(k, x % n))).collect())
        .collect();
    let edge_perms = (0..n)
        .map(|k| {
            (0..base.num_edges() * n)
                .map(|x| (x / n) * n + group.mul(k, x % n))
                .collect()
        })
        .collect();
    let action = HypergraphAction::new(group, vertex_perms, edge_perms, &y)?;
    Ok((y, action))
}
