//! Encoding graphs: one connected component of a reconfiguration graph with
//! every class of "reachable without recoloring the current spine vertex"
//! contracted to a single e-node.

use std::collections::{BTreeMap, VecDeque};

use crate::instance::Color;

/// Labels of an e-node: the spine color shared by its colorings, and whether
/// it holds the (restricted) source or target coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ENode {
    pub col: Color,
    pub ini: bool,
    pub tar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EncodingGraph {
    nodes: Vec<ENode>,
    adj: Vec<Vec<usize>>,
}

impl EncodingGraph {
    /// Builds from labels and an edge list; duplicate edges collapse.
    pub fn new(nodes: Vec<ENode>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); nodes.len()];
        for (x, y) in edges {
            assert!(x != y, "encoding graphs have no loops");
            adj[x].push(y);
            adj[y].push(x);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        EncodingGraph { nodes, adj }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ENode] {
        &self.nodes
    }

    pub fn node(&self, x: usize) -> ENode {
        self.nodes[x]
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, list)| list.iter().filter(move |&&y| x < y).map(move |&y| (x, y)))
    }

    pub fn ini(&self) -> Option<usize> {
        self.nodes.iter().position(|e| e.ini)
    }

    pub fn tar(&self) -> Option<usize> {
        self.nodes.iter().position(|e| e.tar)
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.reach(0).iter().all(|&r| r)
    }

    fn reach(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// The component containing `start`, renumbered in increasing old id.
    pub fn component_of(&self, start: usize) -> EncodingGraph {
        let seen = self.reach(start);
        if seen.iter().all(|&s| s) {
            return self.clone();
        }
        let mut new_id = vec![usize::MAX; self.len()];
        let mut nodes = Vec::new();
        for x in 0..self.len() {
            if seen[x] {
                new_id[x] = nodes.len();
                nodes.push(self.nodes[x]);
            }
        }
        let adj = (0..self.len())
            .filter(|&x| seen[x])
            .map(|x| self.adj[x].iter().map(|&y| new_id[y]).collect())
            .collect();
        EncodingGraph { nodes, adj }
    }

    /// Label-preserving isomorphism: a bijection keeping `(col, ini, tar)`
    /// and adjacency. Color refinement first, then backtracking.
    pub fn is_isomorphic(&self, other: &EncodingGraph) -> bool {
        if self.len() != other.len() || self.edge_count() != other.edge_count() {
            return false;
        }
        let (ca, cb) = refine_jointly(self, other);
        let mut ha = ca.clone();
        let mut hb = cb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return false;
        }

        // Map vertices of the rarest classes first, in BFS order within them.
        let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &ca {
            *class_size.entry(c).or_default() += 1;
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (class_size[&ca[x]], x));
        let mut mapping = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        backtrack(self, other, &ca, &cb, &order, 0, &mut mapping, &mut used)
    }
}

/// Stable color refinement run on the disjoint union of both graphs so that
/// class ids are comparable.
fn refine_jointly(a: &EncodingGraph, b: &EncodingGraph) -> (Vec<usize>, Vec<usize>) {
    let initial = |g: &EncodingGraph| -> Vec<(ENode, usize)> {
        (0..g.len()).map(|x| (g.nodes[x], g.adj[x].len())).collect()
    };
    let mut ids: BTreeMap<(ENode, usize), usize> = BTreeMap::new();
    for key in initial(a).into_iter().chain(initial(b)) {
        let next = ids.len();
        ids.entry(key).or_insert(next);
    }
    let mut ca: Vec<usize> = initial(a).iter().map(|k| ids[k]).collect();
    let mut cb: Vec<usize> = initial(b).iter().map(|k| ids[k]).collect();
    let mut classes = ids.len();
    loop {
        let signature = |g: &EncodingGraph, c: &[usize], x: usize| {
            let mut around: Vec<usize> = g.adj[x].iter().map(|&y| c[y]).collect();
            around.sort_unstable();
            (c[x], around)
        };
        let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let sa: Vec<_> = (0..a.len()).map(|x| signature(a, &ca, x)).collect();
        let sb: Vec<_> = (0..b.len()).map(|x| signature(b, &cb, x)).collect();
        for key in sa.iter().chain(sb.iter()) {
            let next = ids.len();
            ids.entry(key.clone()).or_insert(next);
        }
        ca = sa.iter().map(|k| ids[k]).collect();
        cb = sb.iter().map(|k| ids[k]).collect();
        if ids.len() == classes {
            return (ca, cb);
        }
        classes = ids.len();
    }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &EncodingGraph,
    b: &EncodingGraph,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    for y in 0..b.len() {
        if used[y] || cb[y] != ca[x] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&p| {
            let q = mapping[p];
            a.adj[x].binary_search(&p).is_ok() == b.adj[y].binary_search(&q).is_ok()
        });
        if !consistent {
            continue;
        }
        mapping[x] = y;
        used[y] = true;
        if backtrack(a, b, ca, cb, order, depth + 1, mapping, used) {
            return true;
        }
        used[y] = false;
        mapping[x] = usize::MAX;
    }
    false
}
