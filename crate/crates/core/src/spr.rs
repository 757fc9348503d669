//! Shortest-path rerouting: layers, S-paths and a brute-force solver.
//!
//! An S-path is stored as its vertex sequence `s, v_1, .., v_{d-1}, t`, one
//! vertex per layer.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub const DEFAULT_SPATH_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SprError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("s and t are disconnected")]
    Disconnected,
    #[error("{which} is not a shortest s-t path")]
    NotAnSPath { which: &'static str },
    #[error("more than {cap} S-paths")]
    StateSpaceTooLarge { cap: usize },
}

/// Raw rerouting data as read from a file, in the ids of the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SprData {
    pub graph: Graph,
    pub s: Vertex,
    pub t: Vertex,
    pub p0: Vec<Vertex>,
    pub pr: Vec<Vertex>,
}

/// Layer structure of `(H, s, t)` after pruning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layers {
    pub distance: usize,
    /// `layers[i]` lists the pruned ids at distance `i` from `s`, ascending.
    pub layers: Vec<Vec<Vertex>>,
    pub graph: Graph,
    /// Pruned id to original id.
    pub kept: Vec<Vertex>,
}

/// `L_i = D_{s,i} ∩ D_{t,d-i}`. Vertices outside every layer are dropped.
pub fn compute_layers(g: &Graph, s: Vertex, t: Vertex) -> Result<Layers, SprError> {
    let n = g.vertex_count();
    for v in [s, t] {
        if v >= n {
            return Err(SprError::VertexOutOfRange { vertex: v, n });
        }
    }
    let from_s = g.bfs_distances(s);
    let from_t = g.bfs_distances(t);
    let d = from_s[t].ok_or(SprError::Disconnected)?;
    let kept: Vec<Vertex> = (0..n)
        .filter(|&v| matches!((from_s[v], from_t[v]), (Some(a), Some(b)) if a + b == d))
        .collect();
    let (graph, _) = g.induced_subgraph(&kept);
    let mut layers = vec![Vec::new(); d + 1];
    for (new, &old) in kept.iter().enumerate() {
        layers[from_s[old].unwrap()].push(new);
    }
    Ok(Layers {
        distance: d,
        layers,
        graph,
        kept,
    })
}

/// A pruned rerouting instance with validated endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SprInstance {
    data: SprData,
    layers: Layers,
    layer_of: Vec<usize>,
    s: Vertex,
    t: Vertex,
    p0: Vec<Vertex>,
    pr: Vec<Vertex>,
}

impl SprInstance {
    pub fn new(data: SprData) -> Result<Self, SprError> {
        let layers = compute_layers(&data.graph, data.s, data.t)?;
        let mut layer_of = vec![0; layers.kept.len()];
        for (i, layer) in layers.layers.iter().enumerate() {
            for &v in layer {
                layer_of[v] = i;
            }
        }
        let mut pruned_id = vec![usize::MAX; data.graph.vertex_count()];
        for (new, &old) in layers.kept.iter().enumerate() {
            pruned_id[old] = new;
        }
        let translate = |p: &[Vertex]| -> Vec<Vertex> {
            p.iter()
                .map(|&v| pruned_id.get(v).copied().unwrap_or(usize::MAX))
                .collect()
        };
        let inst = SprInstance {
            s: layers.layers[0][0],
            t: layers.layers[layers.distance][0],
            p0: translate(&data.p0),
            pr: translate(&data.pr),
            data,
            layers,
            layer_of,
        };
        if !inst.is_s_path(&inst.p0) {
            return Err(SprError::NotAnSPath { which: "p0" });
        }
        if !inst.is_s_path(&inst.pr) {
            return Err(SprError::NotAnSPath { which: "pr" });
        }
        Ok(inst)
    }

    pub fn data(&self) -> &SprData {
        &self.data
    }

    /// The pruned graph. All other ids of this type refer to it.
    pub fn graph(&self) -> &Graph {
        &self.layers.graph
    }

    pub fn distance(&self) -> usize {
        self.layers.distance
    }

    pub fn layers(&self) -> &[Vec<Vertex>] {
        &self.layers.layers
    }

    pub fn layer(&self, i: usize) -> &[Vertex] {
        &self.layers.layers[i]
    }

    pub fn layer_of(&self, v: Vertex) -> usize {
        self.layer_of[v]
    }

    /// Position of `v` inside its layer.
    pub fn index_in_layer(&self, v: Vertex) -> usize {
        let layer = self.layer(self.layer_of[v]);
        layer.binary_search(&v).expect("vertex lies in its layer")
    }

    pub fn s(&self) -> Vertex {
        self.s
    }

    pub fn t(&self) -> Vertex {
        self.t
    }

    pub fn p0(&self) -> &[Vertex] {
        &self.p0
    }

    pub fn pr(&self) -> &[Vertex] {
        &self.pr
    }

    /// Maps a pruned-id path back to the ids of the input graph.
    pub fn to_original(&self, path: &[Vertex]) -> Vec<Vertex> {
        path.iter().map(|&v| self.layers.kept[v]).collect()
    }

    pub fn is_s_path(&self, p: &[Vertex]) -> bool {
        let g = self.graph();
        p.len() == self.distance() + 1
            && p[0] == self.s
            && p[p.len() - 1] == self.t
            && p.iter().all(|&v| v < g.vertex_count())
            && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    /// All S-paths in lexicographic order of their vertex sequences.
    pub fn enumerate_s_paths(&self, cap: usize) -> Result<Vec<Vec<Vertex>>, SprError> {
        let d = self.distance();
        let g = self.graph();
        let mut out = Vec::new();
        let mut path = vec![self.s];
        // Next neighbor index to try at each depth.
        let mut cursor = vec![0usize];
        while let Some(&v) = path.last() {
            if path.len() == d + 1 {
                if out.len() == cap {
                    return Err(SprError::StateSpaceTooLarge { cap });
                }
                out.push(path.clone());
                path.pop();
                cursor.pop();
                continue;
            }
            let depth = path.len() - 1;
            let neighbors = g.neighbors(v);
            let next = neighbors[cursor[depth]..]
                .iter()
                .position(|&w| self.layer_of[w] == depth + 1);
            match next {
                Some(offset) => {
                    let w = neighbors[cursor[depth] + offset];
                    cursor[depth] += offset + 1;
                    path.push(w);
                    cursor.push(0);
                }
                None => {
                    path.pop();
                    cursor.pop();
                }
            }
        }
        Ok(out)
    }

    /// Shortest rerouting sequence from `p0` to `pr` (both included), or
    /// `None` when `pr` is unreachable.
    pub fn brute_solve(&self, cap: usize) -> Result<Option<Vec<Vec<Vertex>>>, SprError> {
        if self.p0 == self.pr {
            return Ok(Some(vec![self.p0.clone()]));
        }
        let paths = self.enumerate_s_paths(cap)?;
        let index: HashMap<&[Vertex], usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let start = index[self.p0.as_slice()];
        let goal = index[self.pr.as_slice()];
        let g = self.graph();
        let mut parent = vec![usize::MAX; paths.len()];
        parent[start] = start;
        let mut queue = VecDeque::from([start]);
        let mut scratch = Vec::new();
        while let Some(a) = queue.pop_front() {
            if a == goal {
                break;
            }
            let p = &paths[a];
            for j in 1..self.distance() {
                for &w in self.layer(j) {
                    if w == p[j] || !g.has_edge(p[j - 1], w) || !g.has_edge(w, p[j + 1]) {
                        continue;
                    }
                    scratch.clear();
                    scratch.extend_from_slice(p);
                    scratch[j] = w;
                    let b = index[scratch.as_slice()];
                    if parent[b] == usize::MAX {
                        parent[b] = a;
                        queue.push_back(b);
                    }
                }
            }
        }
        if parent[goal] == usize::MAX {
            return Ok(None);
        }
        let mut seq = vec![paths[goal].clone()];
        let mut cur = goal;
        while cur != start {
            cur = parent[cur];
            seq.push(paths[cur].clone());
        }
        seq.reverse();
        Ok(Some(seq))
    }
}

/// Two S-paths are adjacent when each has exactly one vertex the other lacks.
pub fn adjacent_s_paths(p: &[Vertex], q: &[Vertex]) -> bool {
    let only_in = |a: &[Vertex], b: &[Vertex]| a.iter().filter(|v| !b.contains(v)).count();
    only_in(p, q) == 1 && only_in(q, p) == 1
}

/// Whether `seq` starts at `p0`, ends at `pr`, and moves between adjacent
/// S-paths.
pub fn is_valid_rerouting(inst: &SprInstance, seq: &[Vec<Vertex>]) -> bool {
    seq.first().map(Vec::as_slice) == Some(inst.p0())
        && seq.last().map(Vec::as_slice) == Some(inst.pr())
        && seq.iter().all(|p| inst.is_s_path(p))
        && seq.windows(2).all(|w| adjacent_s_paths(&w[0], &w[1]))
}
