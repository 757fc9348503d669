//! List-size normalization: afterwards every vertex satisfies
//! `2 <= |L(v)| <= d(v) + 1`, and reachability is unchanged.
//!
//! Two removals are applied until neither fires:
//! * a vertex with a single-color list is deleted and its color is struck
//!   from the lists of its neighbors;
//! * a vertex whose list has at least `d(v) + 2` colors is deleted outright,
//!   since it can always step aside for a neighbor.
//!
//! Singletons are drained to a fixpoint before each rich-list removal, lowest
//! id first. The trace records everything needed to lift a reconfiguration
//! sequence of the normalized instance back to the original.

use std::collections::BTreeSet;

use crate::graph::Vertex;
use crate::instance::{Color, InstanceError, LcrInstance, RecolorStep};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Removal {
    /// `vertex` had the single color `color`; it was struck from the lists of
    /// `affected` (the neighbors still present at that time).
    Singleton {
        vertex: Vertex,
        color: Color,
        affected: Vec<Vertex>,
    },
    /// `vertex` had `list` with at least `neighbors.len() + 2` colors.
    RichList {
        vertex: Vertex,
        list: Vec<Color>,
        neighbors: Vec<Vertex>,
    },
}

impl Removal {
    pub fn vertex(&self) -> Vertex {
        match self {
            Removal::Singleton { vertex, .. } | Removal::RichList { vertex, .. } => *vertex,
        }
    }
}

/// Removals in application order (original ids) and the surviving vertices:
/// normalized vertex `i` is original vertex `kept[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalizationTrace {
    pub removals: Vec<Removal>,
    pub kept: Vec<Vertex>,
}

impl NormalizationTrace {
    pub fn is_identity(&self) -> bool {
        self.removals.is_empty()
    }

    /// Re-applies the recorded removals to `original`.
    pub fn replay(&self, original: &LcrInstance) -> Result<LcrInstance, InstanceError> {
        let mut lists = original.lists().to_vec();
        for removal in &self.removals {
            if let Removal::Singleton { color, affected, .. } = removal {
                for &u in affected {
                    lists[u].retain(|c| c != color);
                    if lists[u].is_empty() {
                        return Err(InstanceError::InfeasibleList(u));
                    }
                }
            }
        }
        let restricted = original.induced(&self.kept);
        LcrInstance::new(
            restricted.graph().clone(),
            self.kept.iter().map(|&v| lists[v].clone()).collect(),
            restricted.source().clone(),
            restricted.target().clone(),
        )
    }
}

struct Workspace<'a> {
    inst: &'a LcrInstance,
    lists: Vec<Vec<Color>>,
    degree: Vec<usize>,
    alive: Vec<bool>,
    singles: BTreeSet<Vertex>,
    rich: BTreeSet<Vertex>,
}

impl Workspace<'_> {
    fn classify(&mut self, v: Vertex) {
        let len = self.lists[v].len();
        if len == 1 {
            self.singles.insert(v);
        } else {
            self.singles.remove(&v);
        }
        if len >= self.degree[v] + 2 {
            self.rich.insert(v);
        } else {
            self.rich.remove(&v);
        }
    }

    fn live_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.inst
            .graph()
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.alive[w])
            .collect()
    }

    fn delete(&mut self, v: Vertex) -> Vec<Vertex> {
        self.alive[v] = false;
        self.singles.remove(&v);
        self.rich.remove(&v);
        let nbrs = self.live_neighbors(v);
        for &w in &nbrs {
            self.degree[w] -= 1;
        }
        nbrs
    }
}

/// Normalizes `inst`. The endpoints must be proper; an emptied list means
/// they were not.
pub fn normalize(inst: &LcrInstance) -> Result<(LcrInstance, NormalizationTrace), InstanceError> {
    let n = inst.vertex_count();
    let mut ws = Workspace {
        inst,
        lists: inst.lists().to_vec(),
        degree: inst.graph().vertices().map(|v| inst.graph().degree(v)).collect(),
        alive: vec![true; n],
        singles: BTreeSet::new(),
        rich: BTreeSet::new(),
    };
    for v in 0..n {
        ws.classify(v);
    }

    let mut removals = Vec::new();
    loop {
        if let Some(v) = ws.singles.pop_first() {
            let color = ws.lists[v][0];
            let affected = ws.delete(v);
            for &u in &affected {
                ws.lists[u].retain(|&c| c != color);
                if ws.lists[u].is_empty() {
                    return Err(InstanceError::InfeasibleList(u));
                }
                ws.classify(u);
            }
            removals.push(Removal::Singleton {
                vertex: v,
                color,
                affected,
            });
        } else if let Some(v) = ws.rich.pop_first() {
            let list = ws.lists[v].clone();
            let neighbors = ws.delete(v);
            for &u in &neighbors {
                ws.classify(u);
            }
            removals.push(Removal::RichList {
                vertex: v,
                list,
                neighbors,
            });
        } else {
            break;
        }
    }

    let kept: Vec<Vertex> = (0..n).filter(|&v| ws.alive[v]).collect();
    let restricted = inst.induced(&kept);
    let normalized = LcrInstance::new(
        restricted.graph().clone(),
        kept.iter().map(|&v| ws.lists[v].clone()).collect(),
        restricted.source().clone(),
        restricted.target().clone(),
    )?;
    Ok((normalized, NormalizationTrace { removals, kept }))
}

/// Lifts a valid sequence of the normalized instance to one of `original`.
///
/// Removals are undone in reverse. Singleton vertices keep their forced color.
/// Before a neighbor of a rich-list vertex `v` takes `v`'s current color,
/// `v` moves to the lowest color of its list not used by that step or by any
/// neighbor; at the end `v` moves to its target color.
pub fn lift_sequence(
    trace: &NormalizationTrace,
    original: &LcrInstance,
    normalized: &LcrInstance,
    seq: &[RecolorStep],
) -> Result<Vec<RecolorStep>, InstanceError> {
    if !normalized.is_valid_sequence(seq) {
        return Err(InstanceError::InvalidSequence);
    }
    let mut steps: Vec<RecolorStep> = seq
        .iter()
        .map(|s| RecolorStep::new(trace.kept[s.vertex], s.color))
        .collect();

    let source = original.source();
    let target = original.target();
    for removal in trace.removals.iter().rev() {
        let Removal::RichList {
            vertex: v,
            list,
            neighbors,
        } = removal
        else {
            continue;
        };
        let mut current = source.clone();
        let mut lifted = Vec::with_capacity(steps.len() + 1);
        for step in steps {
            if current.get(*v) == step.color && neighbors.contains(&step.vertex) {
                let spare = list
                    .iter()
                    .copied()
                    .find(|&c| c != step.color && neighbors.iter().all(|&w| current.get(w) != c))
                    .expect("a rich list always has a spare color");
                current.0[*v] = spare;
                lifted.push(RecolorStep::new(*v, spare));
            }
            current.0[step.vertex] = step.color;
            lifted.push(step);
        }
        if current.get(*v) != target.get(*v) {
            lifted.push(RecolorStep::new(*v, target.get(*v)));
        }
        steps = lifted;
    }
    Ok(steps)
}
