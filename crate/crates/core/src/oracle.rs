//! Exact reconfiguration graphs by exhaustive enumeration. This is the ground
//! truth every other solver in the crate is checked against, so it stays as
//! direct as possible: enumerate proper list colorings, join those that
//! differ on one vertex, search.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::encoding::{ENode, EncodingGraph};
use crate::graph::{Graph, Vertex};
use crate::instance::{Color, Coloring, RecolorStep};

/// Default bound on the product of list sizes.
pub const DEFAULT_STATE_CAP: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("state space too large: product of list sizes is {product}, cap is {cap}")]
    StateSpaceTooLarge { product: u128, cap: u64 },
    #[error("coloring is not a node of the reconfiguration graph")]
    UnknownNode,
}

/// Mixed-radix code of a coloring: digit `v` is the index of `f(v)` in `L(v)`,
/// vertex 0 most significant, so code order is lexicographic order.
#[derive(Debug, Clone)]
struct Codec {
    lists: Vec<Vec<Color>>,
    radix: Vec<u64>,
}

impl Codec {
    fn new(lists: &[Vec<Color>], cap: u64) -> Result<Self, OracleError> {
        let product = lists
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
        if product > cap as u128 {
            return Err(OracleError::StateSpaceTooLarge { product, cap });
        }
        let mut radix = vec![1u64; lists.len()];
        for v in (0..lists.len().saturating_sub(1)).rev() {
            radix[v] = radix[v + 1] * lists[v + 1].len() as u64;
        }
        Ok(Codec {
            lists: lists.to_vec(),
            radix,
        })
    }

    fn digit(&self, code: u64, v: Vertex) -> usize {
        ((code / self.radix[v]) % self.lists[v].len() as u64) as usize
    }

    fn decode(&self, code: u64) -> Coloring {
        Coloring(
            (0..self.lists.len())
                .map(|v| self.lists[v][self.digit(code, v)])
                .collect(),
        )
    }

    fn encode(&self, f: &Coloring) -> Option<u64> {
        if f.len() != self.lists.len() {
            return None;
        }
        let mut code = 0;
        for (v, list) in self.lists.iter().enumerate() {
            let idx = list.binary_search(&f.get(v)).ok()?;
            code += idx as u64 * self.radix[v];
        }
        Some(code)
    }
}

/// Proper list colorings as codes, in lexicographic order.
fn enumerate_codes(g: &Graph, codec: &Codec) -> Vec<u64> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n == 0 {
        out.push(0);
        return out;
    }
    let lists = &codec.lists;
    let earlier: Vec<Vec<Vertex>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().filter(|&w| w < v).collect())
        .collect();
    let mut idx = vec![0usize; n];
    let mut v = 0usize;
    // Iterative backtracking: idx[v] is the next candidate index at depth v.
    loop {
        if idx[v] == lists[v].len() {
            idx[v] = 0;
            if v == 0 {
                break;
            }
            v -= 1;
            idx[v] += 1;
            continue;
        }
        let c = lists[v][idx[v]];
        if earlier[v].iter().any(|&w| lists[w][idx[w]] == c) {
            idx[v] += 1;
            continue;
        }
        if v + 1 == n {
            out.push((0..n).map(|w| idx[w] as u64 * codec.radix[w]).sum());
            idx[v] += 1;
        } else {
            v += 1;
        }
    }
    out
}

/// Every proper list coloring of `(g, lists)` in lexicographic order.
pub fn enumerate_colorings(
    g: &Graph,
    lists: &[Vec<Color>],
    cap: u64,
) -> Result<Vec<Coloring>, OracleError> {
    let codec = Codec::new(lists, cap)?;
    Ok(enumerate_codes(g, &codec)
        .into_iter()
        .map(|code| codec.decode(code))
        .collect())
}

/// `R(G, L)`, fully materialized. Node ids follow lexicographic order.
#[derive(Debug, Clone)]
pub struct ReconfigurationGraph {
    codec: Codec,
    codes: Vec<u64>,
    index: HashMap<u64, usize>,
    /// `(neighbor node, recolored vertex)`.
    adj: Vec<Vec<(usize, Vertex)>>,
}

impl ReconfigurationGraph {
    pub fn build(g: &Graph, lists: &[Vec<Color>], cap: u64) -> Result<Self, OracleError> {
        let codec = Codec::new(lists, cap)?;
        let codes = enumerate_codes(g, &codec);
        let index: HashMap<u64, usize> = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut adj = vec![Vec::new(); codes.len()];
        for (i, &code) in codes.iter().enumerate() {
            for (v, list) in lists.iter().enumerate() {
                let d = codec.digit(code, v) as u64;
                // Only larger digits, so every edge is found exactly once.
                for alt in d + 1..list.len() as u64 {
                    let other = code + (alt - d) * codec.radix[v];
                    if let Some(&j) = index.get(&other) {
                        adj[i].push((j, v));
                        adj[j].push((i, v));
                    }
                }
            }
        }
        Ok(ReconfigurationGraph {
            codec,
            codes,
            index,
            adj,
        })
    }

    pub fn node_count(&self) -> usize {
        self.codes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn node(&self, id: usize) -> Coloring {
        self.codec.decode(self.codes[id])
    }

    pub fn nodes(&self) -> impl Iterator<Item = Coloring> + '_ {
        self.codes.iter().map(|&c| self.codec.decode(c))
    }

    pub fn node_id(&self, f: &Coloring) -> Option<usize> {
        self.codec
            .encode(f)
            .and_then(|code| self.index.get(&code).copied())
    }

    /// Neighbors of a node with the vertex whose color differs.
    pub fn neighbors(&self, id: usize) -> &[(usize, Vertex)] {
        &self.adj[id]
    }

    /// Component label per node plus the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        let mut count = 0;
        for root in 0..self.node_count() {
            if seen[root] {
                continue;
            }
            for x in self.flood(root, |_| true, &mut seen) {
                label[x] = count;
            }
            count += 1;
        }
        (label, count)
    }

    /// Unseen nodes reachable from `root` along edges accepted by
    /// `allow(vertex)`; marks them in `seen`.
    fn flood(&self, root: usize, allow: impl Fn(Vertex) -> bool, seen: &mut [bool]) -> Vec<usize> {
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &(y, v) in &self.adj[x] {
                if !seen[y] && allow(v) {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }
}

/// A shortest recoloring sequence from `f0` to `fr`, or `None`.
pub fn reachable(
    rg: &ReconfigurationGraph,
    f0: &Coloring,
    fr: &Coloring,
) -> Result<Option<Vec<RecolorStep>>, OracleError> {
    let start = rg.node_id(f0).ok_or(OracleError::UnknownNode)?;
    let goal = rg.node_id(fr).ok_or(OracleError::UnknownNode)?;
    let mut parent: Vec<Option<(usize, Vertex)>> = vec![None; rg.node_count()];
    let mut seen = vec![false; rg.node_count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        if x == goal {
            break;
        }
        for &(y, v) in rg.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, v));
                queue.push_back(y);
            }
        }
    }
    if !seen[goal] {
        return Ok(None);
    }
    let mut steps = Vec::new();
    let mut x = goal;
    while let Some((prev, v)) = parent[x] {
        steps.push(RecolorStep::new(v, rg.node(x).get(v)));
        x = prev;
    }
    steps.reverse();
    Ok(Some(steps))
}

/// Node ids of the component of `f`, sorted.
pub fn component_of(rg: &ReconfigurationGraph, f: &Coloring) -> Result<Vec<usize>, OracleError> {
    let start = rg.node_id(f).ok_or(OracleError::UnknownNode)?;
    let mut seen = vec![false; rg.node_count()];
    let mut comp = rg.flood(start, |_| true, &mut seen);
    comp.sort_unstable();
    Ok(comp)
}

/// Contracts `component` by "reachable without recoloring `spine_vertex`".
/// E-nodes are numbered by `(color, smallest node id)`.
pub fn contract_encoding(
    rg: &ReconfigurationGraph,
    component: &[usize],
    spine_vertex: Vertex,
    f0: &Coloring,
    fr: &Coloring,
) -> EncodingGraph {
    let mut class = vec![usize::MAX; rg.node_count()];
    let mut seen = vec![false; rg.node_count()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in component {
        if seen[x] {
            continue;
        }
        let members = rg.flood(x, |v| v != spine_vertex, &mut seen);
        for &y in &members {
            class[y] = classes.len();
        }
        classes.push(members);
    }
    let color_of = |members: &[usize]| rg.node(members[0]).get(spine_vertex);
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&k| (color_of(&classes[k]), classes[k].iter().min().copied()));
    let mut renumber = vec![0; classes.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }

    let ini_node = rg.node_id(f0);
    let tar_node = rg.node_id(fr);
    let nodes: Vec<ENode> = order
        .iter()
        .map(|&k| {
            let members = &classes[k];
            ENode {
                col: color_of(members),
                ini: ini_node.is_some_and(|i| class[i] == k),
                tar: tar_node.is_some_and(|t| class[t] == k),
            }
        })
        .collect();
    let mut edges = Vec::new();
    for &x in component {
        for &(y, v) in rg.neighbors(x) {
            if v == spine_vertex && x < y {
                edges.push((renumber[class[x]], renumber[class[y]]));
            }
        }
    }
    EncodingGraph::new(nodes, edges)
}
