//! Compiles shortest-path rerouting into list-coloring reconfiguration on
//! bipartite graphs of pathwidth two, and on threshold graphs.
//!
//! Layer vertex `u_i` (`1 <= i <= d-1`) has one color per vertex of layer
//! `L_i`; giving it color `c_{i,j}` selects the `j`-th vertex of that layer.
//! For every non-adjacent pair `(v_{i,x}, v_{i+1,y})` a forbidden vertex
//! joined to `u_i` and `u_{i+1}` with list `{c_{i,x}, c_{i+1,y}}` makes that
//! selection improper.

use thiserror::Error;

use crate::graph::{Graph, PathDecomposition, ThresholdWitness, Vertex};
use crate::instance::{Color, Coloring, InstanceError, LcrInstance, RecolorStep};
use crate::spr::{adjacent_s_paths, SprInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("s-t distance {0} is at most one; the instance is decided directly")]
    DegenerateDistance(usize),
    #[error("coloring is not a proper list coloring of the compiled instance")]
    ImproperColoring,
    #[error("not a valid rerouting sequence from p0 to pr")]
    InvalidRerouting,
    #[error("not a valid recoloring sequence of the compiled instance")]
    InvalidSequence,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A `(v_{i,x}, v_{i+1,y})`-forbidden vertex. `x` and `y` index into the
/// layers `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForbiddenVertex {
    pub vertex: Vertex,
    pub layer: usize,
    pub x: usize,
    pub y: usize,
}

/// Color `color` stands for vertex `index` of layer `layer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorEntry {
    pub color: Color,
    pub layer: usize,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct ReducedInstance {
    lcr: LcrInstance,
    layer_vertices: Vec<Vertex>,
    forbidden: Vec<ForbiddenVertex>,
    /// First color id of each layer; `offsets[i]` for layer `i`, `offsets[0]` unused.
    offsets: Vec<u32>,
    color_map: Vec<ColorEntry>,
    spr: SprInstance,
}

impl ReducedInstance {
    pub fn lcr(&self) -> &LcrInstance {
        &self.lcr
    }

    /// `u_1..u_{d-1}`.
    pub fn layer_vertices(&self) -> &[Vertex] {
        &self.layer_vertices
    }

    /// `u_i` for `1 <= i <= d-1`.
    pub fn layer_vertex(&self, i: usize) -> Vertex {
        self.layer_vertices[i - 1]
    }

    pub fn forbidden(&self) -> &[ForbiddenVertex] {
        &self.forbidden
    }

    pub fn color_map(&self) -> &[ColorEntry] {
        &self.color_map
    }

    pub fn spr(&self) -> &SprInstance {
        &self.spr
    }

    /// `c_{i,j}`.
    pub fn color(&self, layer: usize, index: usize) -> Color {
        Color(self.offsets[layer] + index as u32)
    }

    /// Inverse of [`ReducedInstance::color`].
    pub fn decode_color(&self, c: Color) -> Option<ColorEntry> {
        self.color_map.get(c.0 as usize).copied()
    }

    /// Layer vertices select `path`; each forbidden vertex takes its lowest
    /// color not used by its two neighbors.
    fn endpoint_coloring(&self, path: &[Vertex]) -> Coloring {
        let spr = &self.spr;
        let mut f = vec![Color(0); self.lcr.vertex_count()];
        for i in 1..spr.distance() {
            f[self.layer_vertex(i)] = self.color(i, spr.index_in_layer(path[i]));
        }
        for w in &self.forbidden {
            let (a, b) = (f[self.layer_vertex(w.layer)], f[self.layer_vertex(w.layer + 1)]);
            f[w.vertex] = [self.color(w.layer, w.x), self.color(w.layer + 1, w.y)]
                .into_iter()
                .find(|&c| c != a && c != b)
                .expect("the pair selected by an S-path is adjacent");
        }
        Coloring(f)
    }
}

/// Builds `(G, L, f0, fr)` from a pruned rerouting instance with `d >= 2`.
pub fn compile(spr: &SprInstance) -> Result<ReducedInstance, ReductionError> {
    let d = spr.distance();
    if d <= 1 {
        return Err(ReductionError::DegenerateDistance(d));
    }
    let h = spr.graph();

    let mut offsets = vec![0u32; d];
    let mut color_map = Vec::new();
    for (i, offset) in offsets.iter_mut().enumerate().skip(1) {
        *offset = color_map.len() as u32;
        for index in 0..spr.layer(i).len() {
            color_map.push(ColorEntry {
                color: Color(color_map.len() as u32),
                layer: i,
                index,
            });
        }
    }

    let layer_vertices: Vec<Vertex> = (0..d - 1).collect();
    let mut graph = Graph::new(d - 1);
    let mut lists: Vec<Vec<Color>> = (1..d)
        .map(|i| (0..spr.layer(i).len()).map(|j| Color(offsets[i] + j as u32)).collect())
        .collect();
    let mut forbidden = Vec::new();
    for i in 1..d - 1 {
        for (x, &a) in spr.layer(i).iter().enumerate() {
            for (y, &b) in spr.layer(i + 1).iter().enumerate() {
                if h.has_edge(a, b) {
                    continue;
                }
                let w = graph.add_vertex();
                graph.add_edge(w, i - 1).expect("fresh vertex");
                graph.add_edge(w, i).expect("fresh vertex");
                lists.push(vec![Color(offsets[i] + x as u32), Color(offsets[i + 1] + y as u32)]);
                forbidden.push(ForbiddenVertex { vertex: w, layer: i, x, y });
            }
        }
    }

    let placeholder = Coloring(vec![Color(0); graph.vertex_count()]);
    let mut red = ReducedInstance {
        lcr: LcrInstance::new(graph, lists, placeholder.clone(), placeholder)?,
        layer_vertices,
        forbidden,
        offsets,
        color_map,
        spr: spr.clone(),
    };
    let f0 = red.endpoint_coloring(spr.p0());
    let fr = red.endpoint_coloring(spr.pr());
    red.lcr = LcrInstance::new(red.lcr.graph().clone(), red.lcr.lists().to_vec(), f0, fr)?;
    Ok(red)
}

/// Adds a clique on the layer vertices and joins every forbidden vertex to
/// every layer vertex. The new edges only join list-disjoint vertices.
pub fn to_threshold(red: &ReducedInstance) -> (LcrInstance, ThresholdWitness) {
    let mut g = red.lcr.graph().clone();
    let layer = red.layer_vertices();
    for (k, &a) in layer.iter().enumerate() {
        for &b in &layer[k + 1..] {
            if !g.has_edge(a, b) {
                g.add_edge(a, b).expect("new edge");
            }
        }
    }
    for w in red.forbidden() {
        for &a in layer {
            if !g.has_edge(w.vertex, a) {
                g.add_edge(w.vertex, a).expect("new edge");
            }
        }
    }
    let mut weights = vec![0.0; g.vertex_count()];
    for &a in layer {
        weights[a] = 1.0;
    }
    let witness = ThresholdWitness {
        weights,
        threshold: 1.0,
    };
    (red.lcr.with_graph(g), witness)
}

/// Per layer pair `i, i+1`: a connector bag `{u_i, u_{i+1}}` followed by one
/// bag `{u_i, u_{i+1}, w}` per forbidden vertex `w` between them.
pub fn emit_path_decomposition(red: &ReducedInstance) -> PathDecomposition {
    let d = red.spr.distance();
    if d == 2 {
        return PathDecomposition::new(vec![vec![red.layer_vertex(1)]]);
    }
    let mut bags = Vec::new();
    for i in 1..d - 1 {
        let (a, b) = (red.layer_vertex(i), red.layer_vertex(i + 1));
        bags.push(vec![a, b]);
        bags.extend(
            red.forbidden
                .iter()
                .filter(|w| w.layer == i)
                .map(|w| vec![a, b, w.vertex]),
        );
    }
    PathDecomposition::new(bags)
}

/// The S-path selected by a proper coloring.
pub fn coloring_to_spath(red: &ReducedInstance, f: &Coloring) -> Result<Vec<Vertex>, ReductionError> {
    if !red.lcr.is_proper(f)? {
        return Err(ReductionError::ImproperColoring);
    }
    Ok(spath_of(red, f))
}

fn spath_of(red: &ReducedInstance, f: &Coloring) -> Vec<Vertex> {
    let spr = &red.spr;
    let d = spr.distance();
    let mut path = Vec::with_capacity(d + 1);
    path.push(spr.s());
    for i in 1..d {
        let entry = red
            .decode_color(f.get(red.layer_vertex(i)))
            .expect("layer colors come from the color map");
        path.push(spr.layer(i)[entry.index]);
    }
    path.push(spr.t());
    path
}

/// Translates a rerouting sequence into recoloring steps from `f0` to `fr`.
///
/// When `v_{i,x}` is replaced by `v_{i,y}`, the forbidden neighbors of `u_i`
/// holding `c_{i,y}` move to their other color first, then `u_i` takes
/// `c_{i,y}`. Forbidden vertices not matching `fr` are fixed at the end.
pub fn spath_sequence_to_recoloring(
    red: &ReducedInstance,
    seq: &[Vec<Vertex>],
) -> Result<Vec<RecolorStep>, ReductionError> {
    let spr = &red.spr;
    let valid = seq.first().map(Vec::as_slice) == Some(spr.p0())
        && seq.last().map(Vec::as_slice) == Some(spr.pr())
        && seq.iter().all(|p| spr.is_s_path(p))
        && seq.windows(2).all(|w| w[0] == w[1] || adjacent_s_paths(&w[0], &w[1]));
    if !valid {
        return Err(ReductionError::InvalidRerouting);
    }

    let mut current = red.lcr.source().clone();
    let mut steps = Vec::new();
    let mut apply = |current: &mut Coloring, step: RecolorStep| {
        debug_assert!(red.lcr.can_recolor(current, step));
        current.0[step.vertex] = step.color;
        steps.push(step);
    };
    for pair in seq.windows(2) {
        let Some(i) = (1..spr.distance()).find(|&i| pair[0][i] != pair[1][i]) else {
            continue;
        };
        let u = red.layer_vertex(i);
        let target = red.color(i, spr.index_in_layer(pair[1][i]));
        for &w in red.lcr.graph().neighbors(u) {
            if current.get(w) == target {
                let other = *red.lcr.list(w).iter().find(|&&c| c != target).unwrap();
                apply(&mut current, RecolorStep::new(w, other));
            }
        }
        apply(&mut current, RecolorStep::new(u, target));
    }
    let fr = red.lcr.target();
    for w in &red.forbidden {
        if current.get(w.vertex) != fr.get(w.vertex) {
            apply(&mut current, RecolorStep::new(w.vertex, fr.get(w.vertex)));
        }
    }
    Ok(steps)
}

/// Projects a recoloring sequence onto its layer-vertex moves.
pub fn recoloring_to_spath_sequence(
    red: &ReducedInstance,
    steps: &[RecolorStep],
) -> Result<Vec<Vec<Vertex>>, ReductionError> {
    if !red.lcr.is_valid_sequence(steps) {
        return Err(ReductionError::InvalidSequence);
    }
    let is_layer = |v: Vertex| v < red.layer_vertices.len();
    let mut current = red.lcr.source().clone();
    let mut seq = vec![spath_of(red, &current)];
    for step in steps {
        current.0[step.vertex] = step.color;
        if is_layer(step.vertex) {
            seq.push(spath_of(red, &current));
        }
    }
    Ok(seq)
}
