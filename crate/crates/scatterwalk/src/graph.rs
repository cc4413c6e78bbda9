//! Graph and gadget data model.
//!
//! A [`Gadget`] is a finite simple graph together with an ordered list of
//! *terminal* vertices, the attachment points of the semi-infinite paths.
//! Terminal order fixes the row/column order of every S-matrix, so it is part
//! of the value.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected simple graph on vertices `0 .. vertex_count`.
///
/// Edges are stored as ordered pairs `(u, v)` with `u < v`, kept in a sorted
/// set so serialization is canonical. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a as usize >= vertex_count || b as usize >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a vertex >= {vertex_count}"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Neighbor lists for all vertices, each sorted ascending.
    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// The adjacency matrix as a dense real symmetric matrix; this is the
    /// Hamiltonian of the walk.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.vertex_count;
        let mut m = DMatrix::zeros(n, n);
        for &(a, b) in &self.edges {
            m[(a as usize, b as usize)] = 1.0;
            m[(b as usize, a as usize)] = 1.0;
        }
        m
    }

    /// Subgraph induced on `keep` (which need not be sorted). Returns the
    /// subgraph and, per new vertex, the original id.
    pub fn induced_subgraph(&self, keep: &[u32]) -> Result<(Graph, Vec<u32>)> {
        let mut remap = vec![None; self.vertex_count];
        for (new, &old) in keep.iter().enumerate() {
            if old as usize >= self.vertex_count {
                return Err(Error::InvalidGraph(format!("vertex {old} out of range")));
            }
            if remap[old as usize].is_some() {
                return Err(Error::InvalidGraph(format!("vertex {old} listed twice")));
            }
            remap[old as usize] = Some(new as u32);
        }
        let edges = self.edges.iter().filter_map(|&(a, b)| {
            match (remap[a as usize], remap[b as usize]) {
                (Some(x), Some(y)) => Some((x, y)),
                _ => None,
            }
        });
        Ok((Graph::new(keep.len(), edges)?, keep.to_vec()))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count`.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, u32) {
        let offset = self.vertex_count as u32;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + offset, b + offset)));
        let g = Graph::new(self.vertex_count + other.vertex_count, edges)
            .expect("both inputs are valid simple graphs");
        (g, offset)
    }
}

/// A gadget: finite simple graph plus an ordered list of distinct terminals.
#[derive(Clone, Debug, PartialEq)]
pub struct Gadget {
    graph: Graph,
    terminals: Vec<u32>,
    name: Option<String>,
}

/// JSON interchange form. Edges are 0-based unordered pairs; canonical output
/// sorts each pair and then the pair list.
#[derive(Serialize, Deserialize)]
struct GadgetDoc {
    vertices: usize,
    edges: Vec<[u32; 2]>,
    terminals: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl Gadget {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
        terminals: Vec<u32>,
    ) -> Result<Self> {
        let graph = Graph::new(vertex_count, edges)?;
        Self::from_graph(graph, terminals)
    }

    pub fn from_graph(graph: Graph, terminals: Vec<u32>) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::InvalidGraph("terminal list is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for &t in &terminals {
            if t as usize >= graph.vertex_count() {
                return Err(Error::InvalidGraph(format!("terminal {t} out of range")));
            }
            if !seen.insert(t) {
                return Err(Error::InvalidGraph(format!("duplicate terminal {t}")));
            }
        }
        Ok(Gadget {
            graph,
            terminals,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn terminals(&self) -> &[u32] {
        &self.terminals
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Internal (non-terminal) vertices, ascending.
    pub fn internal_vertices(&self) -> Vec<u32> {
        let terminal: BTreeSet<u32> = self.terminals.iter().copied().collect();
        (0..self.graph.vertex_count() as u32)
            .filter(|v| !terminal.contains(v))
            .collect()
    }

    /// Removes terminal `index` from the terminal list; the vertex stays in
    /// the graph as an internal vertex.
    pub fn downgrade_terminal(&self, index: usize) -> Result<Gadget> {
        if index >= self.terminals.len() {
            return Err(Error::TerminalIndex {
                index,
                count: self.terminals.len(),
            });
        }
        if self.terminals.len() < 2 {
            return Err(Error::TerminalCount {
                expected: 2,
                actual: self.terminals.len(),
            });
        }
        let mut terminals = self.terminals.clone();
        terminals.remove(index);
        Gadget::from_graph(self.graph.clone(), terminals)
    }

    /// Merges this gadget with `other` by identifying the vertex behind our
    /// terminal `out_terminal` with the vertex behind `other`'s terminal
    /// `in_terminal`. The identified vertex becomes internal; remaining
    /// terminals keep their order, ours first.
    pub fn series_merge(
        &self,
        out_terminal: usize,
        other: &Gadget,
        in_terminal: usize,
    ) -> Result<Gadget> {
        let out_v = *self.terminals.get(out_terminal).ok_or(Error::TerminalIndex {
            index: out_terminal,
            count: self.terminals.len(),
        })?;
        let in_v = *other.terminals.get(in_terminal).ok_or(Error::TerminalIndex {
            index: in_terminal,
            count: other.terminals.len(),
        })?;

        // `other`'s vertices keep their relative order after the merged one
        // is removed; ids are shifted past ours.
        let n1 = self.graph.vertex_count() as u32;
        let map_other = |v: u32| -> u32 {
            if v == in_v {
                out_v
            } else if v < in_v {
                n1 + v
            } else {
                n1 + v - 1
            }
        };

        let total = self.graph.vertex_count() + other.graph.vertex_count() - 1;
        let mut edges: BTreeSet<(u32, u32)> = self.graph.edges.clone();
        for (a, b) in other.graph.edges() {
            let (x, y) = (map_other(a), map_other(b));
            if x == y {
                return Err(Error::MergeConflict("self-loop"));
            }
            let e = (x.min(y), x.max(y));
            if !edges.insert(e) {
                return Err(Error::MergeConflict("duplicate edge"));
            }
        }

        let terminals: Vec<u32> = self
            .terminals
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != out_terminal)
            .map(|(_, &t)| t)
            .chain(
                other
                    .terminals
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != in_terminal)
                    .map(|(_, &t)| map_other(t)),
            )
            .collect();

        let graph = Graph {
            vertex_count: total,
            edges,
        };
        Gadget::from_graph(graph, terminals)
    }

    /// Parses and validates the JSON interchange document.
    pub fn load(document: &str) -> Result<Gadget> {
        let doc: GadgetDoc =
            serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
        let mut g = Gadget::new(
            doc.vertices,
            doc.edges.iter().map(|&[a, b]| (a, b)),
            doc.terminals,
        )?;
        g.name = doc.name;
        Ok(g)
    }

    /// Canonical JSON document: edges sorted lexicographically with each pair
    /// ascending. `load(save(g))` reproduces `g` and the document bit-exactly.
    pub fn save(&self) -> String {
        let doc = GadgetDoc {
            vertices: self.graph.vertex_count(),
            edges: self.graph.edges().map(|(a, b)| [a, b]).collect(),
            terminals: self.terminals.clone(),
            name: self.name.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("gadget document serializes")
    }

    /// Terminal-respecting isomorphism: terminal `i` must map to terminal `i`.
    pub fn isomorphic_to(&self, other: &Gadget) -> bool {
        if self.graph.vertex_count() != other.graph.vertex_count()
            || self.graph.edge_count() != other.graph.edge_count()
            || self.terminals.len() != other.terminals.len()
        {
            return false;
        }
        canonical_key(&self.graph, &self.terminal_colors())
            == canonical_key(&other.graph, &other.terminal_colors())
    }

    fn terminal_colors(&self) -> Vec<u64> {
        let mut colors = vec![0u64; self.graph.vertex_count()];
        for (i, &t) in self.terminals.iter().enumerate() {
            colors[t as usize] = i as u64 + 1;
        }
        colors
    }
}

/// A closed finite graph obtained by replacing each semi-infinite path with a
/// pendant path of `length` vertices. Site `(x, j)` for `x = 1 ..= length+1`
/// addresses arm `j`, with `(1, j)` the original terminal.
#[derive(Clone, Debug)]
pub struct TruncatedGraph {
    graph: Graph,
    arms: Vec<Vec<u32>>,
    base_vertex_count: usize,
}

impl TruncatedGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Vertex id of site `x ≥ 1` on arm `j`; `x = 1` is the old terminal.
    pub fn site(&self, x: usize, arm: usize) -> Option<u32> {
        if x == 0 {
            return None;
        }
        self.arms.get(arm)?.get(x - 1).copied()
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    /// Sites of arm `j`, innermost (the old terminal) first.
    pub fn arm(&self, j: usize) -> &[u32] {
        &self.arms[j]
    }

    /// Number of vertices per arm, i.e. truncation length + 1.
    pub fn arm_sites(&self) -> usize {
        self.arms.first().map_or(0, Vec::len)
    }

    pub fn base_vertex_count(&self) -> usize {
        self.base_vertex_count
    }

    /// The outermost `count` vertex ids of every arm.
    pub fn outer_sites(&self, count: usize) -> Vec<u32> {
        self.arms
            .iter()
            .flat_map(|arm| arm.iter().rev().take(count).copied())
            .collect()
    }
}

/// Finite proxy for the infinite scattering graph: every terminal of `g`
/// gains a pendant path of `length` new vertices. The result has
/// `g.vertex_count() + N·length` vertices and `g.edge_count() + N·length`
/// edges and no terminals.
pub fn attach_truncated_paths(g: &Gadget, length: usize) -> Result<TruncatedGraph> {
    if length == 0 {
        return Err(Error::Precondition("truncation length must be >= 1".into()));
    }
    let n = g.vertex_count();
    let mut edges: Vec<(u32, u32)> = g.graph().edges().collect();
    let mut arms = Vec::with_capacity(g.terminal_count());
    let mut next = n as u32;
    for &t in g.terminals() {
        let mut arm = Vec::with_capacity(length + 1);
        arm.push(t);
        let mut prev = t;
        for _ in 0..length {
            edges.push((prev, next));
            arm.push(next);
            prev = next;
            next += 1;
        }
        arms.push(arm);
    }
    Ok(TruncatedGraph {
        graph: Graph::new(next as usize, edges)?,
        arms,
        base_vertex_count: n,
    })
}

/// Canonical edge list of a vertex-colored graph: the lexicographically
/// smallest sorted edge list over all color-respecting relabelings. Two
/// colored graphs are isomorphic iff their keys agree.
///
/// Uses individualization-refinement; fine for the small gadgets handled
/// here, exponential in the worst case.
pub fn canonical_key(graph: &Graph, colors: &[u64]) -> Vec<(u32, u32)> {
    assert_eq!(colors.len(), graph.vertex_count());
    let adj = graph.adjacency_lists();
    let mut best: Option<Vec<(u32, u32)>> = None;
    canon_search(&adj, colors.to_vec(), graph, &mut best);
    best.unwrap_or_default()
}

fn canon_search(
    adj: &[Vec<u32>],
    colors: Vec<u64>,
    graph: &Graph,
    best: &mut Option<Vec<(u32, u32)>>,
) {
    let colors = refine(adj, colors);
    // Cells of equal color, in color order.
    let n = colors.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| (colors[v as usize], v));
    // Find the first non-singleton cell.
    let mut cell: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && colors[order[j] as usize] == colors[order[i] as usize] {
            j += 1;
        }
        if j - i > 1 {
            cell = Some((i, j));
            break;
        }
        i = j;
    }
    match cell {
        None => {
            // Discrete coloring: read the edge list under this labeling.
            let mut position = vec![0u32; n];
            for (rank, &v) in order.iter().enumerate() {
                position[v as usize] = rank as u32;
            }
            let mut key: Vec<(u32, u32)> = graph
                .edges()
                .map(|(a, b)| {
                    let (x, y) = (position[a as usize], position[b as usize]);
                    (x.min(y), x.max(y))
                })
                .collect();
            key.sort_unstable();
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
        }
        Some((i, j)) => {
            for t in i..j {
                let v = order[t];
                let mut split = colors.clone();
                // Individualize v: strictly smaller color than its cell mates.
                for c in &mut split {
                    *c = *c * 2 + 1;
                }
                split[v as usize] -= 1;
                canon_search(adj, split, graph, best);
            }
        }
    }
}

/// Stable color refinement: repeatedly extend each vertex color by the
/// multiset of neighbor colors until the partition stops splitting.
fn refine(adj: &[Vec<u32>], mut colors: Vec<u64>) -> Vec<u64> {
    let n = colors.len();
    loop {
        let mut sigs: Vec<(u64, Vec<u64>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u64> = adj[v].iter().map(|&u| colors[u as usize]).collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut sorted: Vec<&(u64, Vec<u64>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u64> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).expect("present") as u64)
            .collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}
