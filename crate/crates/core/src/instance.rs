//! List-coloring reconfiguration instances and the validators every other
//! module checks its output against.

use std::fmt;

use thiserror::Error;

use crate::graph::{CaterpillarStructure, Graph, Vertex};

/// A color of the global universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A total assignment vertex → color.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(pub Vec<Color>);

impl Coloring {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }
}

impl From<Vec<u32>> for Coloring {
    fn from(ids: Vec<u32>) -> Self {
        Coloring(ids.into_iter().map(Color).collect())
    }
}

/// One reconfiguration move: recolor `vertex` to `color`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecolorStep {
    pub vertex: Vertex,
    pub color: Color,
}

impl RecolorStep {
    pub fn new(vertex: Vertex, color: Color) -> Self {
        RecolorStep { vertex, color }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("expected {expected} lists, got {got}")]
    ListCount { expected: usize, got: usize },
    #[error("vertex {0} has an empty list")]
    EmptyList(Vertex),
    #[error("coloring covers {got} vertices, graph has {expected}")]
    PartialColoring { expected: usize, got: usize },
    #[error("the {which} coloring is not a proper list coloring")]
    ImproperEndpoint { which: &'static str },
    #[error("list of vertex {0} became empty during normalization")]
    InfeasibleList(Vertex),
    #[error("recoloring sequence is not valid on the instance")]
    InvalidSequence,
    #[error("prefix size {size} out of range 1..={n}")]
    OutOfRange { size: usize, n: usize },
}

/// `(G, L, f0, fr)`. Lists are sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcrInstance {
    graph: Graph,
    lists: Vec<Vec<Color>>,
    source: Coloring,
    target: Coloring,
}

impl LcrInstance {
    /// Checks shapes (one nonempty list and one color per vertex). Properness
    /// of the endpoints is left to [`LcrInstance::check_endpoints`].
    pub fn new(
        graph: Graph,
        mut lists: Vec<Vec<Color>>,
        source: Coloring,
        target: Coloring,
    ) -> Result<Self, InstanceError> {
        let n = graph.vertex_count();
        if lists.len() != n {
            return Err(InstanceError::ListCount {
                expected: n,
                got: lists.len(),
            });
        }
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(InstanceError::EmptyList(v));
            }
        }
        for f in [&source, &target] {
            if f.len() != n {
                return Err(InstanceError::PartialColoring {
                    expected: n,
                    got: f.len(),
                });
            }
        }
        Ok(LcrInstance {
            graph,
            lists,
            source,
            target,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn list(&self, v: Vertex) -> &[Color] {
        &self.lists[v]
    }

    pub fn source(&self) -> &Coloring {
        &self.source
    }

    pub fn target(&self) -> &Coloring {
        &self.target
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// One more than the largest color id in any list.
    pub fn color_universe(&self) -> u32 {
        self.lists
            .iter()
            .flatten()
            .map(|c| c.0 + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn check_endpoints(&self) -> Result<(), InstanceError> {
        if !self.is_proper(&self.source)? {
            return Err(InstanceError::ImproperEndpoint { which: "source" });
        }
        if !self.is_proper(&self.target)? {
            return Err(InstanceError::ImproperEndpoint { which: "target" });
        }
        Ok(())
    }

    /// True iff `f` respects every list and no edge is monochromatic.
    pub fn is_proper(&self, f: &Coloring) -> Result<bool, InstanceError> {
        let n = self.vertex_count();
        if f.len() != n {
            return Err(InstanceError::PartialColoring {
                expected: n,
                got: f.len(),
            });
        }
        let in_lists = (0..n).all(|v| self.lists[v].binary_search(&f.get(v)).is_ok());
        Ok(in_lists && self.graph.edges().all(|(u, v)| f.get(u) != f.get(v)))
    }

    /// True iff applying `seq` to the source keeps every intermediate coloring
    /// proper, changes one vertex per step, and ends at the target.
    pub fn is_valid_sequence(&self, seq: &[RecolorStep]) -> bool {
        if !matches!(self.is_proper(&self.source), Ok(true)) {
            return false;
        }
        let mut current = self.source.clone();
        for step in seq {
            if !self.can_recolor(&current, *step) {
                return false;
            }
            current.0[step.vertex] = step.color;
        }
        current == self.target
    }

    /// Whether `step` is a legal move from the proper coloring `current`.
    pub fn can_recolor(&self, current: &Coloring, step: RecolorStep) -> bool {
        let RecolorStep { vertex, color } = step;
        vertex < self.vertex_count()
            && current.get(vertex) != color
            && self.lists[vertex].binary_search(&color).is_ok()
            && self
                .graph
                .neighbors(vertex)
                .iter()
                .all(|&w| current.get(w) != color)
    }

    /// The sub-instance induced by `keep` (new id `i` is old vertex `keep[i]`).
    pub fn induced(&self, keep: &[Vertex]) -> LcrInstance {
        let (graph, _) = self.graph.induced_subgraph(keep);
        LcrInstance {
            graph,
            lists: keep.iter().map(|&v| self.lists[v].clone()).collect(),
            source: Coloring(keep.iter().map(|&v| self.source.get(v)).collect()),
            target: Coloring(keep.iter().map(|&v| self.target.get(v)).collect()),
        }
    }

    /// The same instance on a different graph over the same vertex set.
    pub fn with_graph(&self, graph: Graph) -> LcrInstance {
        assert_eq!(graph.vertex_count(), self.vertex_count());
        LcrInstance {
            graph,
            ..self.clone()
        }
    }

    /// `G_i` with the fixed lists, vertex `j` standing for ordering position `j`,
    /// and the endpoints restricted to it.
    pub fn prefix(&self, cat: &CaterpillarStructure, prefix_size: usize) -> Result<LcrInstance, InstanceError> {
        let n = self.vertex_count();
        if prefix_size == 0 || prefix_size > n {
            return Err(InstanceError::OutOfRange {
                size: prefix_size,
                n,
            });
        }
        Ok(self.induced(&cat.ordering()[..prefix_size]))
    }
}

/// `f[V_i]`: the colors of `v_1..v_i`, indexed by ordering position.
pub fn restrict(
    cat: &CaterpillarStructure,
    f: &Coloring,
    prefix_size: usize,
) -> Result<Coloring, InstanceError> {
    let n = cat.len();
    if prefix_size == 0 || prefix_size > n {
        return Err(InstanceError::OutOfRange {
            size: prefix_size,
            n,
        });
    }
    Ok(Coloring(
        cat.ordering()[..prefix_size]
            .iter()
            .map(|&v| f.get(v))
            .collect(),
    ))
}
