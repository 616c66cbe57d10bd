//! Undirected simple graphs: construction, traversal and edge alterations.
//!
//! Nodes are dense integer ids (`0..n`). Graphs read from an edge list keep
//! the original node tokens in a sidecar label table so results can be
//! written back under the input's naming.

mod generate;

pub use generate::{generate_model, ModelKind};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Distance sentinel for unreachable nodes in internal BFS buffers.
pub(crate) const UNREACHABLE: u32 = u32::MAX;

/// An undirected edge with endpoints stored in sorted order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.0, self.1)
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// One graph alteration. Rewiring keeps the orientation of its two source
/// edges: removing `{v, w}` and `{x, y}` inserts `{v, y}` and `{x, w}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alteration {
    Deletion(Edge),
    Addition(Edge),
    Rewiring {
        first: (NodeId, NodeId),
        second: (NodeId, NodeId),
    },
}

impl Alteration {
    /// Edges removed by this alteration.
    pub fn removed_edges(&self) -> Vec<Edge> {
        match *self {
            Alteration::Deletion(e) => vec![e],
            Alteration::Addition(_) => vec![],
            Alteration::Rewiring { first, second } => {
                vec![Edge::new(first.0, first.1), Edge::new(second.0, second.1)]
            }
        }
    }

    /// Edges inserted by this alteration.
    pub fn added_edges(&self) -> Vec<Edge> {
        match *self {
            Alteration::Deletion(_) => vec![],
            Alteration::Addition(e) => vec![e],
            Alteration::Rewiring { first, second } => {
                vec![Edge::new(first.0, second.1), Edge::new(second.0, first.1)]
            }
        }
    }
}

/// Undirected simple graph over dense node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<NodeId>>,
    edge_count: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Empty graph on `n` isolated nodes.
    pub fn with_nodes(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            edge_count: 0,
            labels: None,
        }
    }

    /// Build from an edge slice; node count is `n`. Panics on out-of-range
    /// endpoints. Self-loops and duplicates are ignored.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut g = Graph::with_nodes(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.adj.len() as NodeId).into_iter()
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        (v as usize) < self.adj.len()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.contains_node(a) && self.adj[a as usize].contains(&b)
    }

    /// Insert edge `{a, b}`; returns false if it already existed or is a
    /// self-loop.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        if a == b {
            return false;
        }
        assert!(self.contains_node(a) && self.contains_node(b), "node out of range");
        if !self.adj[a as usize].insert(b) {
            return false;
        }
        self.adj[b as usize].insert(a);
        self.edge_count += 1;
        true
    }

    /// Remove edge `{a, b}`; returns false if it was absent.
    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        if !self.contains_node(a) || !self.adj[a as usize].remove(&b) {
            return false;
        }
        self.adj[b as usize].remove(&a);
        self.edge_count -= 1;
        true
    }

    /// All edges in sorted order, each reported once with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(v, nbrs)| {
            let v = v as NodeId;
            nbrs.range(v + 1..).map(move |&w| Edge(v, w))
        })
    }

    /// Original label of a node: the input token if the graph was parsed,
    /// the numeric id otherwise.
    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(labels) => labels[v as usize].clone(),
            None => v.to_string(),
        }
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    /// Apply one alteration after validating its preconditions.
    pub fn apply_alteration(&mut self, alt: &Alteration) -> Result<()> {
        match *alt {
            Alteration::Deletion(e) => {
                let (a, b) = e.endpoints();
                self.check_node(a)?;
                self.check_node(b)?;
                if !self.has_edge(a, b) {
                    return Err(Error::EdgeAbsent(a, b));
                }
                self.remove_edge(a, b);
            }
            Alteration::Addition(e) => {
                let (a, b) = e.endpoints();
                self.check_node(a)?;
                self.check_node(b)?;
                if a == b {
                    return Err(Error::InvalidParameter("self-loop".into()));
                }
                if self.has_edge(a, b) {
                    return Err(Error::EdgePresent(a, b));
                }
                self.add_edge(a, b);
            }
            Alteration::Rewiring { first, second } => {
                let (v, w) = first;
                let (x, y) = second;
                for &n in &[v, w, x, y] {
                    self.check_node(n)?;
                }
                let mut ids = [v, w, x, y];
                ids.sort_unstable();
                if ids.windows(2).any(|p| p[0] == p[1]) {
                    return Err(Error::InvalidRewiring(
                        "endpoints are not four distinct nodes".into(),
                    ));
                }
                if !self.has_edge(v, w) {
                    return Err(Error::EdgeAbsent(v, w));
                }
                if !self.has_edge(x, y) {
                    return Err(Error::EdgeAbsent(x, y));
                }
                if self.has_edge(v, y) {
                    return Err(Error::EdgePresent(v, y));
                }
                if self.has_edge(x, w) {
                    return Err(Error::EdgePresent(x, w));
                }
                self.remove_edge(v, w);
                self.remove_edge(x, y);
                self.add_edge(v, y);
                self.add_edge(x, w);
            }
        }
        Ok(())
    }

    /// BFS distance from `v` to every node; `UNREACHABLE` marks other
    /// components.
    pub(crate) fn bfs_levels(&self, v: NodeId) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[v as usize] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in &self.adj[u as usize] {
                if dist[w as usize] == UNREACHABLE {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Distances from `v`; unreachable nodes are absent from the map.
    pub fn bfs_distances(&self, v: NodeId) -> Result<HashMap<NodeId, u32>> {
        self.check_node(v)?;
        let levels = self.bfs_levels(v);
        Ok(levels
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d != UNREACHABLE)
            .map(|(u, d)| (u as NodeId, d))
            .collect())
    }

    /// Nodes within distance `d` of `v`, including `v`, in ascending order.
    pub fn nodes_within(&self, v: NodeId, d: u32) -> Vec<NodeId> {
        if d == 1 {
            // hot path: closed neighborhood
            let mut out: Vec<NodeId> = Vec::with_capacity(self.degree(v) + 1);
            let mut inserted_self = false;
            for &w in &self.adj[v as usize] {
                if !inserted_self && w > v {
                    out.push(v);
                    inserted_self = true;
                }
                out.push(w);
            }
            if !inserted_self {
                out.push(v);
            }
            return out;
        }
        let mut dist: HashMap<NodeId, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(v, 0);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du == d {
                continue;
            }
            for &w in &self.adj[u as usize] {
                dist.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    du + 1
                });
            }
        }
        let mut out: Vec<NodeId> = dist.into_keys().collect();
        out.sort_unstable();
        out
    }

    /// Induced subgraph on the nodes within distance `d` of `v`.
    pub fn neighborhood_subgraph(&self, v: NodeId, d: u32) -> Result<Subgraph> {
        self.check_node(v)?;
        if d == 0 {
            return Err(Error::InvalidParameter("distance must be at least 1".into()));
        }
        let nodes = self.nodes_within(v, d);
        Ok(Subgraph::induced(self, nodes, v))
    }

    /// Connected components as sorted node sets, largest first; ties broken
    /// by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n as NodeId {
            if seen[start as usize] {
                continue;
            }
            let mut comp = vec![start];
            seen[start as usize] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        components
    }

    /// Fraction of nodes in the largest connected component.
    pub fn lcc_fraction(&self) -> f64 {
        if self.adj.is_empty() {
            return 0.0;
        }
        let largest = self
            .connected_components()
            .first()
            .map_or(0, |c| c.len());
        largest as f64 / self.adj.len() as f64
    }

    /// Parse a whitespace-separated edge list. Lines starting with `#` or
    /// `%` and blank lines are skipped; every other line must hold exactly
    /// two node tokens. Self-loops are dropped and duplicate edges (in
    /// either orientation) collapse. Tokens are remapped to dense ids in
    /// first-seen order.
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
        let mut ids: HashMap<String, NodeId> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    found: tokens.len(),
                });
            }
            let mut id_of = |tok: &str| -> NodeId {
                if let Some(&id) = ids.get(tok) {
                    id
                } else {
                    let id = labels.len() as NodeId;
                    ids.insert(tok.to_string(), id);
                    labels.push(tok.to_string());
                    id
                }
            };
            let a = id_of(tokens[0]);
            let b = id_of(tokens[1]);
            edges.push((a, b));
        }
        let mut g = Graph::from_edges(labels.len(), &edges);
        g.labels = Some(labels);
        Ok(g)
    }

    /// Write one edge per line under the original labels, in sorted id
    /// order. Isolated nodes do not appear.
    pub fn write_edge_list<W: Write>(&self, mut writer: W) -> Result<()> {
        for e in self.edges() {
            let (a, b) = e.endpoints();
            writeln!(writer, "{} {}", self.label(a), self.label(b))?;
        }
        Ok(())
    }

    /// Debug-only structural consistency check.
    #[cfg(test)]
    pub(crate) fn assert_consistent(&self) {
        let mut total = 0usize;
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &w in nbrs {
                assert_ne!(v as NodeId, w, "self-loop at {v}");
                assert!(
                    self.adj[w as usize].contains(&(v as NodeId)),
                    "asymmetric edge {v}-{w}"
                );
            }
            total += nbrs.len();
        }
        assert_eq!(total / 2, self.edge_count, "edge_count mismatch");
    }
}

/// Induced subgraph extracted for a node's `d`-neighborhood.
///
/// Member nodes keep their parent ids in `nodes` (ascending); adjacency is
/// stored over local indices `0..nodes.len()`.
#[derive(Debug, Clone)]
pub struct Subgraph {
    nodes: Vec<NodeId>,
    local_adj: Vec<Vec<u32>>,
    edge_count: usize,
    anchor: NodeId,
}

impl Subgraph {
    /// Induce on `nodes` (must be sorted, deduped, and contain `anchor`).
    pub(crate) fn induced(parent: &Graph, nodes: Vec<NodeId>, anchor: NodeId) -> Subgraph {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(nodes.binary_search(&anchor).is_ok());
        let index_of = |v: NodeId| nodes.binary_search(&v).ok();
        let mut local_adj = vec![Vec::new(); nodes.len()];
        let mut edge_count = 0;
        for (i, &v) in nodes.iter().enumerate() {
            for w in parent.neighbors(v) {
                if let Some(j) = index_of(w) {
                    local_adj[i].push(j as u32);
                    if i < j {
                        edge_count += 1;
                    }
                }
            }
        }
        Subgraph {
            nodes,
            local_adj,
            edge_count,
            anchor,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn anchor(&self) -> NodeId {
        self.anchor
    }

    /// Parent ids of the member nodes, ascending.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Adjacency over local indices.
    pub(crate) fn local_adjacency(&self) -> &[Vec<u32>] {
        &self.local_adj
    }

    /// Degrees of the member nodes *in the parent graph*, in member order.
    pub(crate) fn parent_degrees(&self, parent: &Graph) -> Vec<u32> {
        self.nodes.iter().map(|&v| parent.degree(v) as u32).collect()
    }
}
