use std::collections::{BTreeSet, VecDeque};

use super::{Graph, Vertex};

/// Two color classes of a bipartite graph. BFS roots (the lowest id of each
/// component) land in `left`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
}

pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    let n = g.vertex_count();
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &w in g.neighbors(u) {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let (right, left): (Vec<Vertex>, Vec<Vertex>) = (0..n).partition(|&v| side[v] == Some(true));
    Some(Bipartition { left, right })
}

/// Treewidth at most two, decided by elimination: repeatedly remove a vertex
/// of degree at most two, joining the two neighbors of a removed degree-2
/// vertex. The graph is a partial 2-tree iff this empties it.
pub fn is_partial_two_tree(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| adj[v].len() <= 2).collect();
    let mut remaining = n;
    while let Some(v) = queue.pop_front() {
        if removed[v] || adj[v].len() > 2 {
            continue;
        }
        removed[v] = true;
        remaining -= 1;
        let nbrs: Vec<Vertex> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &w in &nbrs {
            adj[w].remove(&v);
        }
        if let [a, b] = nbrs[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        for &w in &nbrs {
            if adj[w].len() <= 2 {
                queue.push_back(w);
            }
        }
    }
    remaining == 0
}

/// Vertex weights and a threshold with `uv ∈ E` iff `w(u) + w(v) >= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdWitness {
    pub weights: Vec<f64>,
    pub threshold: f64,
}

impl ThresholdWitness {
    /// Checks the characterization over every vertex pair.
    pub fn verify(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if self.weights.len() != n {
            return false;
        }
        (0..n).all(|u| {
            (u + 1..n).all(|v| {
                let heavy = self.weights[u] + self.weights[v] >= self.threshold;
                heavy == g.has_edge(u, v)
            })
        })
    }
}

/// Recognizes threshold graphs by peeling isolated or dominating vertices,
/// and builds integer weights from the peeling order.
pub fn recognize_threshold(g: &Graph) -> Option<ThresholdWitness> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut weights = vec![0.0; n];
    let big = 2 * n;
    for step in 1..=n {
        let remaining = n - step + 1;
        let pick = (0..n)
            .filter(|&v| alive[v])
            .find(|&v| degree[v] == 0)
            .map(|v| (v, false))
            .or_else(|| {
                (0..n)
                    .filter(|&v| alive[v])
                    .find(|&v| degree[v] == remaining - 1)
                    .map(|v| (v, true))
            });
        let (v, dominating) = pick?;
        // Dominating vertices get large weights, isolated ones small, so
        // that each peeled vertex relates uniformly to everything after it.
        weights[v] = if dominating {
            (big - step) as f64
        } else {
            step as f64
        };
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
            }
        }
    }
    Some(ThresholdWitness {
        weights,
        threshold: big as f64,
    })
}
