use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{Diagram, VertexId};

/// An undirected simple graph on arbitrary vertex ids. Self-loops are
/// dropped and parallel edges merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl SimpleGraph {
    pub fn new<V, E>(vertices: V, edges: E) -> SimpleGraph
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        for (a, b) in edges {
            adj.entry(a).or_default();
            adj.entry(b).or_default();
            if a != b {
                adj.get_mut(&a).expect("inserted").insert(b);
                adj.get_mut(&b).expect("inserted").insert(a);
            }
        }
        SimpleGraph { adj }
    }

    /// T(Γ): edges and arcs on all vertices.
    pub fn t_graph(d: &Diagram) -> SimpleGraph {
        let arcs = d.arcs();
        SimpleGraph::new(
            d.vertices(),
            d.edges().iter().map(|e| (e.a, e.b)).chain(arcs.iter().map(|a| (a.from, a.to))),
        )
    }

    /// U(Γ): edges only.
    pub fn u_graph(d: &Diagram) -> SimpleGraph {
        SimpleGraph::new(d.vertices(), d.edges().iter().map(|e| (e.a, e.b)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().flat_map(|(&a, s)| s.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> SimpleGraph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, s)| (v, s.iter().copied().filter(|u| keep.contains(u)).collect()))
            .collect();
        SimpleGraph { adj }
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = vec![v];
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for u in self.neighbors(x) {
                    if seen.insert(u) {
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().len() == 1
    }

    /// At least three vertices, connected, and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        if self.vertex_count() < 3 || !self.is_connected() {
            return false;
        }
        let b = blocks_and_tree(self);
        b.blocks.len() == 1
    }
}

/// Blocks, cut vertices and the block-cut forest Υ.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BlockDecomposition {
    /// Sorted vertex sets, sorted lexicographically.
    pub blocks: Vec<Vec<VertexId>>,
    pub cut_vertices: Vec<VertexId>,
    /// `(block index, cut vertex)` incidences.
    pub tree_edges: Vec<(usize, VertexId)>,
}

/// Terms of the block counting identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockCounting {
    pub block_vertex_sum: usize,
    /// Vertices lying on at least one edge.
    pub vertices: usize,
    pub tree_edges: usize,
    pub cut_vertices: usize,
}

impl BlockCounting {
    pub fn corrected_holds(&self) -> bool {
        self.block_vertex_sum + self.cut_vertices == self.vertices + self.tree_edges
    }

    /// The uncorrected form without the cut-vertex term.
    pub fn literal_holds(&self) -> bool {
        self.block_vertex_sum == self.vertices + self.tree_edges
    }
}

impl BlockDecomposition {
    pub fn counting(&self, g: &SimpleGraph) -> BlockCounting {
        BlockCounting {
            block_vertex_sum: self.blocks.iter().map(|b| b.len()).sum(),
            vertices: g.vertices().filter(|&v| g.neighbors(v).next().is_some()).count(),
            tree_edges: self.tree_edges.len(),
            cut_vertices: self.cut_vertices.len(),
        }
    }
}

struct Tarjan<'a> {
    g: &'a SimpleGraph,
    index: BTreeMap<VertexId, usize>,
    low: BTreeMap<VertexId, usize>,
    counter: usize,
    stack: Vec<(VertexId, VertexId)>,
    blocks: Vec<BTreeSet<VertexId>>,
    cuts: BTreeSet<VertexId>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: VertexId, parent: Option<VertexId>) {
        self.counter += 1;
        self.index.insert(v, self.counter);
        self.low.insert(v, self.counter);
        let mut children = 0;
        let nbrs: Vec<VertexId> = self.g.neighbors(v).collect();
        for u in nbrs {
            if Some(u) == parent {
                continue;
            }
            match self.index.get(&u).copied() {
                None => {
                    children += 1;
                    self.stack.push((v, u));
                    self.visit(u, Some(v));
                    let lu = self.low[&u];
                    if lu < self.low[&v] {
                        self.low.insert(v, lu);
                    }
                    if lu >= self.index[&v] {
                        if parent.is_some() {
                            self.cuts.insert(v);
                        }
                        let mut block = BTreeSet::new();
                        while let Some((a, b)) = self.stack.pop() {
                            block.insert(a);
                            block.insert(b);
                            if (a, b) == (v, u) {
                                break;
                            }
                        }
                        self.blocks.push(block);
                    }
                }
                Some(iu) => {
                    if iu < self.index[&v] {
                        self.stack.push((v, u));
                        if iu < self.low[&v] {
                            self.low.insert(v, iu);
                        }
                    }
                }
            }
        }
        if parent.is_none() && children > 1 {
            self.cuts.insert(v);
        }
    }
}

/// Biconnected components by Tarjan's algorithm. Isolated vertices belong
/// to no block.
pub fn blocks_and_tree(g: &SimpleGraph) -> BlockDecomposition {
    let mut t = Tarjan {
        g,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        counter: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
        cuts: BTreeSet::new(),
    };
    for v in g.vertices() {
        if !t.index.contains_key(&v) {
            t.visit(v, None);
        }
    }
    let mut blocks: Vec<Vec<VertexId>> = t.blocks.into_iter().map(|b| b.into_iter().collect()).collect();
    blocks.sort();
    let cut_vertices: Vec<VertexId> = t.cuts.into_iter().collect();
    let mut tree_edges = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &c in &cut_vertices {
            if b.binary_search(&c).is_ok() {
                tree_edges.push((i, c));
            }
        }
    }
    let out = BlockDecomposition { blocks, cut_vertices, tree_edges };
    debug_assert!(out.counting(g).corrected_holds());
    out
}
