//! Finite graphs, graph automorphisms, and the action they induce on `π1`.

use std::collections::{HashMap, VecDeque};

use crate::endo::Endo;
use crate::error::{Error, Result};
use crate::word::{push_reduced, Letter, Word};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

/// Which constructor built the graph; used to pick a rotation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Rose(usize),
    Hairy(usize),
    RGraph(usize, usize),
    ClosedChain(usize),
    OpenChain(usize),
}

/// Oriented edges; loops and multi-edges allowed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    family: Option<Family>,
}

/// A graph automorphism: a vertex permutation plus, for every edge, its image
/// edge and whether the orientation flips.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphAut {
    vertex_map: Vec<VertexId>,
    edge_map: Vec<(EdgeId, bool)>,
}

/// An edge path: `(edge, reversed)` steps from `start`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgePath {
    pub start: VertexId,
    pub steps: Vec<(EdgeId, bool)>,
}

/// `π1(graph, base)` with the free basis given by the non-tree edges of a BFS
/// spanning tree. Generator `k` is the loop `tree(src) e_k tree(dst)^-1`.
#[derive(Clone, Debug)]
pub struct Pi1Presentation {
    graph: Graph,
    base: VertexId,
    in_tree: Vec<bool>,
    generators: Vec<EdgeId>,
    generator_of_edge: Vec<Option<usize>>,
    tree_path: Vec<EdgePath>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if self.vertex_id(name).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate vertex {name}")));
        }
        self.vertices.push(name.to_string());
        self.family = None;
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, name: &str, src: VertexId, dst: VertexId) -> Result<EdgeId> {
        if self.edge_id(name).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate edge {name}")));
        }
        if src >= self.vertices.len() || dst >= self.vertices.len() {
            return Err(Error::InvalidGraph(format!("edge {name} has unknown endpoint")));
        }
        self.edges.push(Edge {
            name: name.to_string(),
            src,
            dst,
        });
        self.family = None;
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// Incident edges of every vertex in ascending edge id.
    fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (id, e) in self.edges.iter().enumerate() {
            inc[e.src].push(id);
            if e.dst != e.src {
                inc[e.dst].push(id);
            }
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &inc[v] {
                let ed = &self.edges[e];
                for w in [ed.src, ed.dst] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Rank of `π1` (connected graphs only).
    pub fn rank(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    /// One vertex `v0` with loops `s1..sn`.
    pub fn rose(n: usize) -> Graph {
        let mut g = Graph::new();
        let v = g.add_vertex("v0").unwrap();
        for i in 1..=n {
            g.add_edge(&format!("s{i}"), v, v).unwrap();
        }
        g.family = Some(Family::Rose(n));
        g
    }

    /// Vertices `v0`, `v1` joined by edges `s1..sn` oriented `v0 -> v1`.
    pub fn hairy(n: usize) -> Graph {
        let mut g = Graph::new();
        let a = g.add_vertex("v0").unwrap();
        let b = g.add_vertex("v1").unwrap();
        for i in 1..=n {
            g.add_edge(&format!("s{i}"), a, b).unwrap();
        }
        g.family = Some(Family::Hairy(n));
        g
    }

    /// A cycle `s_i : v_{i-1} -> v_i` (indices mod `r`) with loops
    /// `l[i,j]` at `v_i` for `1 <= j <= m-1`.
    pub fn r_graph(r: usize, m: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..r {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        for i in 1..=r {
            g.add_edge(&format!("s{i}"), i - 1, i % r).unwrap();
        }
        for i in 0..r {
            for j in 1..m {
                g.add_edge(&format!("l[{i},{j}]"), i, i).unwrap();
            }
        }
        g.family = Some(Family::RGraph(r, m));
        g
    }

    /// A cycle of `k` vertices with doubled edges `s[i,1], s[i,2] : v_{i-1} -> v_i`.
    pub fn closed_chain(k: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..k {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        for i in 1..=k {
            for j in 1..=2 {
                g.add_edge(&format!("s[{i},{j}]"), i - 1, i % k).unwrap();
            }
        }
        g.family = Some(Family::ClosedChain(k));
        g
    }

    /// A path of `k` vertices with doubled edges `s[i,1], s[i,2] : v_{i-1} -> v_i`,
    /// a loop `s0` at `v0` and a loop `s{k}` at `v_{k-1}`.
    pub fn open_chain(k: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..k {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        g.add_edge("s0", 0, 0).unwrap();
        for i in 1..k {
            for j in 1..=2 {
                g.add_edge(&format!("s[{i},{j}]"), i - 1, i).unwrap();
            }
        }
        g.add_edge(&format!("s{k}"), k - 1, k - 1).unwrap();
        g.family = Some(Family::OpenChain(k));
        g
    }
}

impl GraphAut {
    /// Checks that both maps are bijections and that incidence is preserved.
    pub fn new(graph: &Graph, vertex_map: Vec<VertexId>, edge_map: Vec<(EdgeId, bool)>) -> Result<GraphAut> {
        let nv = graph.vertex_count();
        let ne = graph.edge_count();
        if vertex_map.len() != nv || edge_map.len() != ne {
            return Err(Error::InvalidGraphAut("map sizes do not match graph".into()));
        }
        if !is_permutation(&vertex_map) {
            return Err(Error::InvalidGraphAut("vertex map is not a bijection".into()));
        }
        let targets: Vec<EdgeId> = edge_map.iter().map(|p| p.0).collect();
        if !is_permutation(&targets) {
            return Err(Error::InvalidGraphAut("edge map is not a bijection".into()));
        }
        for (e, &(t, rev)) in edge_map.iter().enumerate() {
            let src = &graph.edges[e];
            let dst = &graph.edges[t];
            let (a, b) = if rev { (dst.dst, dst.src) } else { (dst.src, dst.dst) };
            if vertex_map[src.src] != a || vertex_map[src.dst] != b {
                return Err(Error::InvalidGraphAut(format!(
                    "edge {} -> {} does not respect endpoints",
                    src.name, dst.name
                )));
            }
        }
        Ok(GraphAut {
            vertex_map,
            edge_map,
        })
    }

    /// Derives the vertex map from the edge map. Vertices without edges are
    /// mapped by `explicit_vertices` or fixed.
    pub fn from_edge_map(
        graph: &Graph,
        edge_map: Vec<(EdgeId, bool)>,
        explicit_vertices: &[(VertexId, VertexId)],
    ) -> Result<GraphAut> {
        let mut vm: Vec<Option<VertexId>> = vec![None; graph.vertex_count()];
        let mut set = |v: VertexId, w: VertexId| -> Result<()> {
            match vm[v] {
                Some(old) if old != w => Err(Error::InvalidGraphAut(format!(
                    "vertex {} sent to both {} and {}",
                    graph.vertex_name(v),
                    graph.vertex_name(old),
                    graph.vertex_name(w)
                ))),
                _ => {
                    vm[v] = Some(w);
                    Ok(())
                }
            }
        };
        for &(v, w) in explicit_vertices {
            set(v, w)?;
        }
        if edge_map.len() != graph.edge_count() {
            return Err(Error::InvalidGraphAut("edge map size mismatch".into()));
        }
        for (e, &(t, rev)) in edge_map.iter().enumerate() {
            let src = &graph.edges[e];
            let dst = graph
                .edges
                .get(t)
                .ok_or_else(|| Error::InvalidGraphAut("unknown edge".into()))?;
            let (a, b) = if rev { (dst.dst, dst.src) } else { (dst.src, dst.dst) };
            set(src.src, a)?;
            set(src.dst, b)?;
        }
        let vertex_map = vm
            .into_iter()
            .enumerate()
            .map(|(v, w)| w.unwrap_or(v))
            .collect();
        GraphAut::new(graph, vertex_map, edge_map)
    }

    pub fn identity(graph: &Graph) -> GraphAut {
        GraphAut {
            vertex_map: (0..graph.vertex_count()).collect(),
            edge_map: (0..graph.edge_count()).map(|e| (e, false)).collect(),
        }
    }

    /// The order-`n` symmetry of a rose, hairy graph or `R(r,m)` graph that
    /// shifts every index by one.
    pub fn rotation(graph: &Graph) -> Result<GraphAut> {
        let shift = |n: usize, i: usize| i % n + 1;
        let mut em = Vec::with_capacity(graph.edge_count());
        match graph.family {
            Some(Family::Rose(n)) | Some(Family::Hairy(n)) => {
                for i in 1..=n {
                    em.push((graph.edge_id(&format!("s{}", shift(n, i))).unwrap(), false));
                }
            }
            Some(Family::RGraph(r, m)) => {
                for i in 1..=r {
                    em.push((graph.edge_id(&format!("s{}", shift(r, i))).unwrap(), false));
                }
                for i in 0..r {
                    for j in 1..m {
                        let t = graph.edge_id(&format!("l[{},{j}]", (i + 1) % r)).unwrap();
                        em.push((t, false));
                    }
                }
            }
            _ => {
                return Err(Error::InvalidGraphAut(
                    "rotation needs a rose, hairy or R(r,m) graph".into(),
                ))
            }
        }
        GraphAut::from_edge_map(graph, em, &[])
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }

    pub fn edge_image(&self, e: EdgeId) -> (EdgeId, bool) {
        self.edge_map[e]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GraphAut) -> GraphAut {
        GraphAut {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other
                .edge_map
                .iter()
                .map(|&(e, r)| {
                    let (t, r2) = self.edge_map[e];
                    (t, r ^ r2)
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.edge_map.iter().enumerate().all(|(i, &(e, r))| i == e && !r)
    }

    pub fn order(&self) -> usize {
        let mut g = self.clone();
        let mut k = 1;
        while !g.is_identity() {
            g = self.compose(&g);
            k += 1;
        }
        k
    }

    pub fn map_path(&self, path: &EdgePath) -> EdgePath {
        EdgePath {
            start: self.vertex_map[path.start],
            steps: path
                .steps
                .iter()
                .map(|&(e, r)| {
                    let (t, flip) = self.edge_map[e];
                    (t, r ^ flip)
                })
                .collect(),
        }
    }
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    for &x in v {
        if x >= v.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

impl EdgePath {
    /// Checks that consecutive steps meet.
    pub fn new(graph: &Graph, start: VertexId, steps: Vec<(EdgeId, bool)>) -> Result<EdgePath> {
        let mut at = start;
        for &(e, rev) in &steps {
            let ed = graph
                .edges
                .get(e)
                .ok_or_else(|| Error::InvalidPath("unknown edge".into()))?;
            let (from, to) = if rev { (ed.dst, ed.src) } else { (ed.src, ed.dst) };
            if from != at {
                return Err(Error::InvalidPath(format!(
                    "edge {}{} does not start at {}",
                    ed.name,
                    if rev { "^-1" } else { "" },
                    graph.vertex_name(at)
                )));
            }
            at = to;
        }
        Ok(EdgePath { start, steps })
    }

    pub fn trivial(start: VertexId) -> EdgePath {
        EdgePath {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self, graph: &Graph) -> VertexId {
        match self.steps.last() {
            None => self.start,
            Some(&(e, rev)) => {
                let ed = &graph.edges[e];
                if rev {
                    ed.src
                } else {
                    ed.dst
                }
            }
        }
    }

    pub fn inverse(&self, graph: &Graph) -> EdgePath {
        EdgePath {
            start: self.end(graph),
            steps: self.steps.iter().rev().map(|&(e, r)| (e, !r)).collect(),
        }
    }

    pub fn concat(&self, graph: &Graph, other: &EdgePath) -> Result<EdgePath> {
        if self.end(graph) != other.start {
            return Err(Error::InvalidPath("paths do not meet".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(EdgePath {
            start: self.start,
            steps,
        })
    }
}

/// BFS spanning tree from `base`; ties broken by edge id.
pub fn spanning_tree_presentation(graph: &Graph, base: VertexId) -> Result<Pi1Presentation> {
    if base >= graph.vertex_count() {
        return Err(Error::InvalidGraph("base vertex out of range".into()));
    }
    if !graph.is_connected() {
        return Err(Error::InvalidGraph("graph is not connected".into()));
    }
    let inc = graph.incidence();
    let nv = graph.vertex_count();
    let mut in_tree = vec![false; graph.edge_count()];
    let mut tree_path: Vec<Option<EdgePath>> = vec![None; nv];
    tree_path[base] = Some(EdgePath::trivial(base));
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &e in &inc[v] {
            let ed = &graph.edges[e];
            let (w, rev) = if ed.src == v { (ed.dst, false) } else { (ed.src, true) };
            if tree_path[w].is_none() {
                in_tree[e] = true;
                let mut p = tree_path[v].clone().unwrap();
                p.steps.push((e, rev));
                tree_path[w] = Some(p);
                queue.push_back(w);
            }
        }
    }
    let generators: Vec<EdgeId> = (0..graph.edge_count()).filter(|&e| !in_tree[e]).collect();
    let mut generator_of_edge = vec![None; graph.edge_count()];
    for (k, &e) in generators.iter().enumerate() {
        generator_of_edge[e] = Some(k);
    }
    Ok(Pi1Presentation {
        graph: graph.clone(),
        base,
        in_tree,
        generators,
        generator_of_edge,
        tree_path: tree_path.into_iter().map(Option::unwrap).collect(),
    })
}

impl Pi1Presentation {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.in_tree[e]
    }

    /// Edge behind generator `k` (1-based).
    pub fn generator_edge(&self, k: usize) -> EdgeId {
        self.generators[k - 1]
    }

    /// Tree path from the base to `v`.
    pub fn tree_path(&self, v: VertexId) -> &EdgePath {
        &self.tree_path[v]
    }

    /// The loop that generator `k` (1-based) stands for.
    pub fn generator_loop(&self, k: usize) -> EdgePath {
        let e = self.generators[k - 1];
        let ed = &self.graph.edges[e];
        let mut p = self.tree_path[ed.src].clone();
        p.steps.push((e, false));
        p.concat(&self.graph, &self.tree_path[ed.dst].inverse(&self.graph))
            .expect("tree paths meet")
    }

    /// Reads off the word of a path; tree edges contribute nothing.
    fn steps_to_word(&self, steps: &[(EdgeId, bool)]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &(e, rev) in steps {
            if let Some(k) = self.generator_of_edge[e] {
                let l = (k + 1) as Letter;
                push_reduced(&mut out, if rev { -l } else { l });
            }
        }
        Word::from_reduced(self.rank(), out)
    }

    /// Word of a closed path at the base.
    pub fn path_to_word(&self, path: &EdgePath) -> Result<Word> {
        if path.start != self.base || path.end(&self.graph) != self.base {
            return Err(Error::InvalidPath("path is not a loop at the base".into()));
        }
        Ok(self.steps_to_word(&path.steps))
    }
}

/// The automorphism of `π1(X, base)` induced by a graph automorphism fixing
/// the base.
pub fn induced_endo(pres: &Pi1Presentation, aut: &GraphAut) -> Result<Endo> {
    if aut.vertex_image(pres.base) != pres.base {
        return Err(Error::InvalidGraphAut(
            "automorphism moves the base vertex; use induced_out_rep".into(),
        ));
    }
    let images = (1..=pres.rank())
        .map(|k| pres.steps_to_word(&aut.map_path(&pres.generator_loop(k)).steps))
        .collect();
    Endo::new(pres.rank(), images)
}

/// `γ -> δ · a(γ) · δ^-1` where `δ` runs from the base to `a(base)`.
pub fn induced_out_rep(pres: &Pi1Presentation, aut: &GraphAut, delta: &EdgePath) -> Result<Endo> {
    let g = &pres.graph;
    if delta.start != pres.base || delta.end(g) != aut.vertex_image(pres.base) {
        return Err(Error::InvalidPath(
            "delta must run from the base to the image of the base".into(),
        ));
    }
    let dinv = delta.inverse(g);
    let images = (1..=pres.rank())
        .map(|k| {
            let img = aut.map_path(&pres.generator_loop(k));
            let p = delta.concat(g, &img)?.concat(g, &dinv)?;
            pres.path_to_word(&p)
        })
        .collect::<Result<Vec<_>>>()?;
    Endo::new(pres.rank(), images)
}

/// Expresses `f` in the basis `basis`: returns `β^-1 ∘ f ∘ β` where
/// `β(x_i) = basis[i]`.
pub fn change_basis(f: &Endo, basis: &[Word]) -> Result<Endo> {
    let beta = Endo::new(f.rank(), basis.to_vec())?;
    let beta_inv = beta.invert()?;
    beta_inv.compose(&f.compose(&beta)?)
}

/// Result of collapsing an invariant forest.
#[derive(Clone, Debug)]
pub struct Collapsed {
    pub graph: Graph,
    pub aut: GraphAut,
    /// Vertex of the quotient containing each original vertex.
    pub vertex_class: Vec<VertexId>,
    /// Quotient edge for each surviving original edge.
    pub edge_class: Vec<Option<EdgeId>>,
}

/// Contracts each tree of `forest` to a point. The forest must have no cycles
/// and be carried to itself by `aut`.
pub fn collapse_forest(graph: &Graph, forest: &[EdgeId], aut: &GraphAut) -> Result<Collapsed> {
    let mut in_forest = vec![false; graph.edge_count()];
    for &e in forest {
        if e >= graph.edge_count() {
            return Err(Error::InvalidGraph("forest edge out of range".into()));
        }
        in_forest[e] = true;
    }
    for &e in forest {
        if !in_forest[aut.edge_image(e).0] {
            return Err(Error::InvalidGraph(format!(
                "forest is not invariant: {} leaves it",
                graph.edge(e).name
            )));
        }
    }
    let mut parent: Vec<usize> = (0..graph.vertex_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nxt = p[y];
            p[y] = r;
            y = nxt;
        }
        r
    }
    for &e in forest {
        let ed = graph.edge(e);
        let (a, b) = (find(&mut parent, ed.src), find(&mut parent, ed.dst));
        if a == b {
            return Err(Error::InvalidGraph(format!(
                "forest contains a cycle through {}",
                ed.name
            )));
        }
        parent[a.max(b)] = a.min(b);
    }
    let mut q = Graph::new();
    let mut class_of_root: HashMap<usize, VertexId> = HashMap::new();
    let mut vertex_class = Vec::with_capacity(graph.vertex_count());
    for v in 0..graph.vertex_count() {
        let r = find(&mut parent, v);
        let id = match class_of_root.get(&r) {
            Some(&id) => id,
            None => {
                let id = q.add_vertex(graph.vertex_name(r))?;
                class_of_root.insert(r, id);
                id
            }
        };
        vertex_class.push(id);
    }
    let mut edge_class = vec![None; graph.edge_count()];
    for (e, ed) in graph.edges().iter().enumerate() {
        if !in_forest[e] {
            edge_class[e] = Some(q.add_edge(&ed.name, vertex_class[ed.src], vertex_class[ed.dst])?);
        }
    }
    let mut vm = vec![usize::MAX; q.vertex_count()];
    for v in 0..graph.vertex_count() {
        vm[vertex_class[v]] = vertex_class[aut.vertex_image(v)];
    }
    let mut em = vec![(0, false); q.edge_count()];
    for e in 0..graph.edge_count() {
        if let Some(qe) = edge_class[e] {
            let (t, r) = aut.edge_image(e);
            em[qe] = (edge_class[t].expect("forest is invariant"), r);
        }
    }
    let qaut = GraphAut::new(&q, vm, em)?;
    Ok(Collapsed {
        graph: q,
        aut: qaut,
        vertex_class,
        edge_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_ranks() {
        assert_eq!(Graph::rose(4).rank().unwrap(), 4);
        assert_eq!(Graph::hairy(5).rank().unwrap(), 4);
        assert_eq!(Graph::r_graph(5, 3).rank().unwrap(), 11);
        assert_eq!(Graph::closed_chain(4).rank().unwrap(), 5);
        assert_eq!(Graph::open_chain(4).rank().unwrap(), 5);
    }

    #[test]
    fn rotation_orders() {
        for g in [Graph::rose(5), Graph::hairy(3), Graph::r_graph(5, 3)] {
            let r = GraphAut::rotation(&g).unwrap();
            let n = match g.family().unwrap() {
                Family::Rose(n) | Family::Hairy(n) | Family::RGraph(n, _) => n,
                _ => unreachable!(),
            };
            assert_eq!(r.order(), n);
        }
    }

    #[test]
    fn endpoint_violation_rejected() {
        let g = Graph::hairy(2);
        // s1 -> s2 reversed would swap v0 and v1 on s1 but s2 is fixed.
        let err = GraphAut::from_edge_map(&g, vec![(1, true), (1, false)], &[]);
        assert!(err.is_err());
    }

    #[test]
    fn rose_rotation_induces_cyclic_shift() {
        let g = Graph::rose(3);
        let pres = spanning_tree_presentation(&g, 0).unwrap();
        let f = induced_endo(&pres, &GraphAut::rotation(&g).unwrap()).unwrap();
        assert_eq!(f.to_string(), "{ x1 -> x2; x2 -> x3; x3 -> x1 }");
    }

    #[test]
    fn hairy_generators_skip_tree_edge() {
        let g = Graph::hairy(3);
        let pres = spanning_tree_presentation(&g, 0).unwrap();
        assert!(pres.is_tree_edge(0));
        assert_eq!(pres.rank(), 2);
        let loop2 = pres.generator_loop(1);
        assert_eq!(loop2.steps, vec![(1, false), (0, true)]);
    }

    #[test]
    fn out_rep_needs_matching_delta() {
        let g = Graph::r_graph(3, 2);
        let pres = spanning_tree_presentation(&g, 0).unwrap();
        let rot = GraphAut::rotation(&g).unwrap();
        assert!(induced_endo(&pres, &rot).is_err());
        let bad = EdgePath::trivial(0);
        assert!(induced_out_rep(&pres, &rot, &bad).is_err());
        let s1 = EdgePath::new(&g, 0, vec![(0, false)]).unwrap();
        let phi = induced_out_rep(&pres, &rot, &s1).unwrap();
        assert!(phi.is_automorphism());
    }

    #[test]
    fn collapse_keeps_rank() {
        let g = Graph::closed_chain(3);
        let mut em = Vec::new();
        for e in 0..g.edge_count() {
            em.push((e ^ 1, false));
        }
        let swap = GraphAut::from_edge_map(&g, em, &[]).unwrap();
        // One edge from each pair is not invariant; collapsing it must fail.
        assert!(collapse_forest(&g, &[0], &swap).is_err());
        let id = GraphAut::identity(&g);
        let c = collapse_forest(&g, &[0, 2], &id).unwrap();
        assert_eq!(c.graph.vertex_count(), 1);
        assert_eq!(c.graph.rank().unwrap(), g.rank().unwrap());
        assert!(c.aut.is_identity());
    }
}
