use super::{Graph, GraphError, Vertex};

/// Spine/leaf split of a caterpillar together with the leaf-first BFS
/// ordering `v_1..v_n` used by the dynamic program.
///
/// Both spine endpoints have degree one in the whole graph (for graphs with
/// at least two vertices), so `v_1` is always a degree-1 spine vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaterpillarStructure {
    spine: Vec<Vertex>,
    /// `leaf_parent[v]` is the spine neighbor of leaf `v`, `None` on the spine.
    leaf_parent: Vec<Option<Vertex>>,
    ordering: Vec<Vertex>,
    position: Vec<usize>,
    /// `spine_of_prefix[i]` is the latest spine vertex among the first `i + 1`
    /// vertices of the ordering.
    spine_of_prefix: Vec<Vertex>,
}

impl CaterpillarStructure {
    pub fn spine(&self) -> &[Vertex] {
        &self.spine
    }

    pub fn is_spine(&self, v: Vertex) -> bool {
        self.leaf_parent[v].is_none()
    }

    pub fn leaf_parent(&self, v: Vertex) -> Option<Vertex> {
        self.leaf_parent[v]
    }

    /// Leaves as `(leaf, spine neighbor)` pairs in increasing leaf id.
    pub fn leaves(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.leaf_parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (v, p)))
    }

    /// The vertex ordering `v_1..v_n` (0-based here).
    pub fn ordering(&self) -> &[Vertex] {
        &self.ordering
    }

    /// Position of `v` in the ordering.
    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    /// Latest spine vertex within the first `prefix_len` vertices of the ordering.
    pub fn spine_of_prefix(&self, prefix_len: usize) -> Vertex {
        self.spine_of_prefix[prefix_len - 1]
    }

    pub fn len(&self) -> usize {
        self.ordering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.is_empty()
    }

    /// Re-derives the edge set from spine and leaves, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges: Vec<_> = self
            .spine
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .chain(self.leaves().map(|(l, p)| (l.min(p), l.max(p))))
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// Recognizes caterpillars. Returns `Ok(None)` for connected graphs that are
/// not caterpillars and an error for disconnected or empty ones.
pub fn recognize_caterpillar(g: &Graph) -> Result<Option<CaterpillarStructure>, GraphError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    if g.edge_count() != n - 1 {
        return Ok(None);
    }
    if n == 1 {
        return Ok(Some(build(g, vec![0])));
    }
    if n == 2 {
        return Ok(Some(build(g, vec![0, 1])));
    }

    // Internal vertices of the tree must induce a path.
    let internal: Vec<bool> = g.vertices().map(|v| g.degree(v) > 1).collect();
    let internal_degree = |v: Vertex| g.neighbors(v).iter().filter(|&&w| internal[w]).count();
    let core: Vec<Vertex> = g.vertices().filter(|&v| internal[v]).collect();
    if core.iter().any(|&v| internal_degree(v) > 2) {
        return Ok(None);
    }

    // A tree whose internal vertices have internal degree <= 2 has a path as
    // its internal part; walk it from the lowest-id end.
    let start = *core
        .iter()
        .find(|&&v| internal_degree(v) <= 1)
        .expect("a finite tree path has an endpoint");
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| internal[w] && w != prev);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
                path.push(w);
            }
            None => break,
        }
    }
    debug_assert_eq!(path.len(), core.len());

    // Promote the lowest-id leaf at each end so both endpoints have degree 1.
    let first = path[0];
    let last = *path.last().unwrap();
    let leaves_of = |v: Vertex| g.neighbors(v).iter().copied().filter(|&w| !internal[w]);
    let head = leaves_of(first).next().expect("internal endpoint has a leaf");
    let tail = if first == last {
        leaves_of(last).nth(1).expect("center of a star has two leaves")
    } else {
        leaves_of(last).next().expect("internal endpoint has a leaf")
    };
    let mut spine = Vec::with_capacity(path.len() + 2);
    spine.push(head);
    spine.extend(path);
    spine.push(tail);
    if spine[0] > *spine.last().unwrap() {
        spine.reverse();
    }
    Ok(Some(build(g, spine)))
}

fn build(g: &Graph, spine: Vec<Vertex>) -> CaterpillarStructure {
    let n = g.vertex_count();
    let mut on_spine = vec![false; n];
    for &v in &spine {
        on_spine[v] = true;
    }
    let mut leaf_parent = vec![None; n];
    let mut ordering = Vec::with_capacity(n);
    let mut spine_of_prefix = Vec::with_capacity(n);
    for &s in &spine {
        ordering.push(s);
        spine_of_prefix.push(s);
        // Adjacency lists are sorted, so leaves come out in increasing id.
        for &w in g.neighbors(s) {
            if !on_spine[w] {
                leaf_parent[w] = Some(s);
                ordering.push(w);
                spine_of_prefix.push(s);
            }
        }
    }
    let mut position = vec![0; n];
    for (i, &v) in ordering.iter().enumerate() {
        position[v] = i;
    }
    CaterpillarStructure {
        spine,
        leaf_parent,
        ordering,
        position,
        spine_of_prefix,
    }
}
