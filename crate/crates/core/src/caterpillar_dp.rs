//! Polynomial-time decision procedure for list-coloring reconfiguration on
//! caterpillars.
//!
//! Vertices are processed in the leaf-first BFS order `v_1..v_n`. After step
//! `i` the state is the encoding graph `E_i` of the component of `R(G_i, L)`
//! containing `f0[V_i]`: each e-node stands for the colorings that are
//! mutually reachable without recoloring the latest spine vertex `s_i`, and
//! carries that vertex's color plus `ini`/`tar` flags. Only `E_{i-1}` is
//! needed to compute `E_i` because `v_i` touches `G_{i-1}` only at `s_{i-1}`.
//!
//! * Leaf `v_i` with list `{c1, c2}`: keep every e-node and every edge that
//!   survives deleting the `c1`-colored or the `c2`-colored e-nodes.
//! * Spine `v_i`: for each color `c` of `L(v_i)`, every component of `E_{i-1}`
//!   minus its `c`-colored e-nodes becomes one new e-node colored `c`; two new
//!   e-nodes are adjacent iff their components share an old e-node.
//!
//! Each step keeps only the component of the `ini` e-node. The instance is a
//! yes-instance iff `E_n` has a `tar` e-node.

use thiserror::Error;

use crate::encoding::{ENode, EncodingGraph};
use crate::graph::{recognize_caterpillar, CaterpillarStructure, GraphError, Vertex};
use crate::instance::{Color, LcrInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph is not a caterpillar")]
    NotCaterpillar,
    #[error("graph is empty or disconnected")]
    NotConnected,
    #[error("vertex {vertex} violates 2 <= |L(v)| <= d(v) + 1")]
    NotNormalized { vertex: Vertex },
    #[error("source coloring left the encoding graph at step {step}")]
    IniLost { step: usize },
}

impl From<GraphError> for SolveError {
    fn from(_: GraphError) -> Self {
        SolveError::NotConnected
    }
}

/// Result of one update: the new encoding graph and the e-node count before
/// the component of `ini` was extracted.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub graph: EncodingGraph,
    pub unpruned: usize,
}

/// Size bookkeeping for step `i` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSize {
    pub step: usize,
    pub vertex: Vertex,
    pub degree: usize,
    /// `|V(E_{i-1})|`, zero at the first step.
    pub previous: usize,
    /// `|V(E'_i)|`, before component extraction.
    pub unpruned: usize,
    /// `|V(E_i)|`.
    pub kept: usize,
}

#[derive(Debug, Clone)]
pub struct DpRun {
    pub answer: bool,
    pub sizes: Vec<StepSize>,
    /// `E_1..E_n` when requested.
    pub trace: Vec<EncodingGraph>,
}

impl DpRun {
    pub fn max_enodes(&self) -> usize {
        self.sizes.iter().map(|s| s.kept).max().unwrap_or(0)
    }
}

/// `E_1`: the two colorings of `v_1` joined by an edge.
pub fn init_encoding(list: &[Color], f0: Color, fr: Color) -> Result<EncodingGraph, SolveError> {
    let [a, b] = list else {
        return Err(SolveError::NotNormalized { vertex: 0 });
    };
    let enode = |c: Color| ENode {
        col: c,
        ini: c == f0,
        tar: c == fr,
    };
    Ok(EncodingGraph::new(vec![enode(*a), enode(*b)], [(0, 1)]))
}

/// Leaf update.
pub fn step_leaf(prev: &EncodingGraph, leaf_list: [Color; 2]) -> Result<StepOutcome, SolveError> {
    let [c1, c2] = leaf_list;
    let ini = prev.ini().ok_or(SolveError::IniLost { step: 0 })?;
    // An edge survives unless its endpoints carry exactly c1 and c2: then one
    // of them blocks each possible leaf color.
    let edges = prev.edges().filter(|&(x, y)| {
        let (a, b) = (prev.node(x).col, prev.node(y).col);
        (a != c1 && b != c1) || (a != c2 && b != c2)
    });
    let unpruned = EncodingGraph::new(prev.nodes().to_vec(), edges);
    Ok(StepOutcome {
        unpruned: unpruned.len(),
        graph: unpruned.component_of(ini),
    })
}

/// Spine update. `spine_list` must be sorted.
pub fn step_spine(
    prev: &EncodingGraph,
    spine_list: &[Color],
    f0: Color,
    fr: Color,
) -> Result<StepOutcome, SolveError> {
    let old_ini = prev.ini().ok_or(SolveError::IniLost { step: 0 })?;
    let old_tar = prev.tar();
    let m = prev.len();

    let mut nodes = Vec::new();
    // New e-nodes whose aggregated set contains each old e-node.
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut label = vec![usize::MAX; m];
    let mut stack = Vec::new();
    for &c in spine_list {
        label.iter_mut().for_each(|l| *l = usize::MAX);
        for root in 0..m {
            if label[root] != usize::MAX || prev.node(root).col == c {
                continue;
            }
            // Components of prev minus the c-colored e-nodes, discovered in
            // increasing smallest member.
            let x = nodes.len();
            let mut has_ini = false;
            let mut has_tar = false;
            label[root] = x;
            stack.push(root);
            while let Some(a) = stack.pop() {
                containing[a].push(x);
                has_ini |= a == old_ini;
                has_tar |= Some(a) == old_tar;
                for &b in prev.neighbors(a) {
                    if label[b] == usize::MAX && prev.node(b).col != c {
                        label[b] = x;
                        stack.push(b);
                    }
                }
            }
            nodes.push(ENode {
                col: c,
                ini: has_ini && c == f0,
                tar: has_tar && c == fr,
            });
        }
    }
    let edges = containing.iter().flat_map(|xs| {
        xs.iter()
            .enumerate()
            .flat_map(move |(i, &x)| xs[i + 1..].iter().map(move |&y| (x, y)))
    });
    let unpruned = EncodingGraph::new(nodes, edges);
    let ini = unpruned.ini().ok_or(SolveError::IniLost { step: 0 })?;
    Ok(StepOutcome {
        unpruned: unpruned.len(),
        graph: unpruned.component_of(ini),
    })
}

/// Checks `|V(E'_1)| <= 2` and `|V(E'_i)| <= |V(E_{i-1})| + d(v_i)`.
/// Returns the first violating step.
pub fn check_size_bound(sizes: &[StepSize]) -> Result<(), usize> {
    for s in sizes {
        let bound = if s.step == 1 { 2 } else { s.previous + s.degree };
        if s.unpruned > bound {
            return Err(s.step);
        }
    }
    Ok(())
}

/// Rejects instances whose lists violate `2 <= |L(v)| <= d(v) + 1`. A lone
/// vertex may carry two colors.
pub fn check_normalized(inst: &LcrInstance) -> Result<(), SolveError> {
    let g = inst.graph();
    for v in g.vertices() {
        let len = inst.list(v).len();
        if len < 2 || len > g.degree(v).max(1) + 1 {
            return Err(SolveError::NotNormalized { vertex: v });
        }
    }
    Ok(())
}

/// Decides reachability on a connected, normalized caterpillar instance.
pub fn solve(inst: &LcrInstance) -> Result<bool, SolveError> {
    if inst.source() == inst.target() {
        return Ok(true);
    }
    Ok(run(inst, false)?.answer)
}

/// Runs the full dynamic program (also when source equals target) and
/// records step sizes, plus every `E_i` when `keep_trace` is set.
pub fn run(inst: &LcrInstance, keep_trace: bool) -> Result<DpRun, SolveError> {
    let cat = recognize_caterpillar(inst.graph())?.ok_or(SolveError::NotCaterpillar)?;
    check_normalized(inst)?;
    run_with_structure(inst, &cat, keep_trace)
}

pub fn run_with_structure(
    inst: &LcrInstance,
    cat: &CaterpillarStructure,
    keep_trace: bool,
) -> Result<DpRun, SolveError> {
    let g = inst.graph();
    let (f0, fr) = (inst.source(), inst.target());
    let order = cat.ordering();

    let v1 = order[0];
    let mut current = init_encoding(inst.list(v1), f0.get(v1), fr.get(v1))?;
    let mut sizes = vec![StepSize {
        step: 1,
        vertex: v1,
        degree: g.degree(v1),
        previous: 0,
        unpruned: current.len(),
        kept: current.len(),
    }];
    let mut trace = Vec::new();
    if keep_trace {
        trace.push(current.clone());
    }

    for (i, &v) in order.iter().enumerate().skip(1) {
        let step = i + 1;
        let outcome = if cat.is_spine(v) {
            step_spine(&current, inst.list(v), f0.get(v), fr.get(v))
        } else {
            match inst.list(v) {
                &[a, b] => step_leaf(&current, [a, b]),
                _ => Err(SolveError::NotNormalized { vertex: v }),
            }
        }
        .map_err(|e| match e {
            SolveError::IniLost { .. } => SolveError::IniLost { step },
            other => other,
        })?;
        sizes.push(StepSize {
            step,
            vertex: v,
            degree: g.degree(v),
            previous: current.len(),
            unpruned: outcome.unpruned,
            kept: outcome.graph.len(),
        });
        current = outcome.graph;
        if keep_trace {
            trace.push(current.clone());
        }
    }

    Ok(DpRun {
        answer: current.tar().is_some(),
        sizes,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Coloring;

    fn c(id: u32) -> Color {
        Color(id)
    }

    fn e(col: u32, ini: bool, tar: bool) -> ENode {
        ENode { col: c(col), ini, tar }
    }

    fn colors(ids: &[u32]) -> Vec<Color> {
        ids.iter().copied().map(Color).collect()
    }

    #[test]
    fn init_matches_the_displayed_definitions() {
        let g = init_encoding(&colors(&[1, 2]), c(1), c(2)).unwrap();
        assert_eq!(g.nodes(), &[e(1, true, false), e(2, false, true)]);
        assert_eq!(g.edge_count(), 1);

        let g = init_encoding(&colors(&[1, 2]), c(1), c(1)).unwrap();
        assert_eq!(g.nodes(), &[e(1, true, true), e(2, false, false)]);

        let g = init_encoding(&colors(&[5, 9]), c(9), c(5)).unwrap();
        assert_eq!(g.nodes(), &[e(5, false, true), e(9, true, false)]);

        assert!(init_encoding(&colors(&[1, 2, 3]), c(1), c(2)).is_err());
    }

    #[test]
    fn leaf_step_on_k2_splits_it() {
        let prev = init_encoding(&colors(&[1, 2]), c(1), c(2)).unwrap();
        let out = step_leaf(&prev, [c(1), c(2)]).unwrap();
        assert_eq!(out.unpruned, 2);
        assert_eq!(out.graph.nodes(), &[e(1, true, false)]);
    }

    #[test]
    fn leaf_step_with_foreign_colors_is_identity() {
        let prev = init_encoding(&colors(&[1, 2]), c(1), c(2)).unwrap();
        let out = step_leaf(&prev, [c(3), c(4)]).unwrap();
        assert_eq!(out.graph, prev);
    }

    #[test]
    fn leaf_step_on_alternating_path_isolates_ini() {
        let prev = EncodingGraph::new(
            vec![e(1, false, false), e(2, true, false), e(1, false, true)],
            [(0, 1), (1, 2)],
        );
        let out = step_leaf(&prev, [c(1), c(2)]).unwrap();
        assert_eq!(out.unpruned, 3);
        assert_eq!(out.graph.nodes(), &[e(2, true, false)]);
    }

    #[test]
    fn spine_step_on_k2_with_same_colors() {
        let prev = init_encoding(&colors(&[1, 2]), c(1), c(1)).unwrap();
        let out = step_spine(&prev, &colors(&[1, 2]), c(2), c(2)).unwrap();
        assert_eq!(out.unpruned, 2);
        assert_eq!(out.graph.nodes(), &[e(2, true, true)]);
        assert_eq!(out.graph.edge_count(), 0);
    }

    #[test]
    fn spine_step_from_single_enode_links_all_colors() {
        let prev = EncodingGraph::new(vec![e(1, true, true)], []);
        let out = step_spine(&prev, &colors(&[2, 3]), c(2), c(3)).unwrap();
        assert_eq!(out.graph.nodes(), &[e(2, true, false), e(3, false, true)]);
        assert_eq!(out.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn spine_color_absent_from_prev_aggregates_everything() {
        let prev = EncodingGraph::new(
            vec![e(1, true, false), e(2, false, false), e(3, false, true)],
            [(0, 1), (1, 2)],
        );
        let out = step_spine(&prev, &colors(&[4, 5]), c(4), c(5)).unwrap();
        assert_eq!(out.unpruned, 2);
        assert_eq!(out.graph.nodes(), &[e(4, true, false), e(5, false, true)]);
        assert_eq!(out.graph.edge_count(), 1);
    }

    #[test]
    fn spine_step_without_the_source_color_loses_ini() {
        let prev = EncodingGraph::new(vec![e(1, true, true)], []);
        assert!(matches!(
            step_spine(&prev, &colors(&[2, 3]), c(4), c(3)),
            Err(SolveError::IniLost { .. })
        ));
    }

    fn instance(g: Graph, lists: &[&[u32]], f0: Vec<u32>, fr: Vec<u32>) -> LcrInstance {
        LcrInstance::new(
            g,
            lists.iter().map(|l| colors(l)).collect(),
            Coloring::from(f0),
            Coloring::from(fr),
        )
        .unwrap()
    }

    #[test]
    fn solve_examples() {
        let single = instance(Graph::new(1), &[&[1, 2]], vec![1], vec![2]);
        assert_eq!(solve(&single), Ok(true));

        let edge = || Graph::from_edges(2, [(0, 1)]).unwrap();
        let frozen = instance(edge(), &[&[1, 2], &[1, 2]], vec![1, 2], vec![2, 1]);
        assert_eq!(solve(&frozen), Ok(false));

        let free = instance(edge(), &[&[1, 2], &[2, 3]], vec![1, 2], vec![2, 3]);
        assert_eq!(solve(&free), Ok(true));
    }

    #[test]
    fn solve_rejects_bad_inputs() {
        let cycle = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let tri = instance(cycle, &[&[1, 2], &[1, 2], &[1, 3]], vec![1, 2, 3], vec![2, 1, 3]);
        assert_eq!(solve(&tri), Err(SolveError::NotCaterpillar));

        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let rich = instance(edge, &[&[1, 2, 3], &[1, 2]], vec![1, 2], vec![3, 2]);
        assert_eq!(solve(&rich), Err(SolveError::NotNormalized { vertex: 0 }));

        let apart = instance(Graph::new(2), &[&[1, 2], &[1, 2]], vec![1, 1], vec![2, 2]);
        assert_eq!(solve(&apart), Err(SolveError::NotConnected));
    }

    #[test]
    fn size_bound_checker_flags_the_first_violation() {
        let ok = StepSize { step: 1, vertex: 0, degree: 1, previous: 0, unpruned: 2, kept: 2 };
        let bad = StepSize { step: 2, vertex: 1, degree: 2, previous: 2, unpruned: 5, kept: 3 };
        assert_eq!(check_size_bound(&[ok]), Ok(()));
        assert_eq!(check_size_bound(&[ok, bad]), Err(2));
        assert_eq!(check_size_bound(&[StepSize { unpruned: 3, ..ok }]), Err(1));
    }
}
