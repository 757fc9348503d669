//! Seeded instance generators. Every generator draws from a `ChaCha8Rng`
//! seeded with the given 64-bit seed, so equal parameters give equal output.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::instance::{Color, Coloring, LcrInstance};
use crate::spr::SprData;

const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no valid instance after {0} attempts")]
    GenerationFailed(usize),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaterpillarParams {
    pub spine_len: usize,
    pub leaves_min: usize,
    pub leaves_max: usize,
    /// Colors are drawn from `0..colors`.
    pub colors: u32,
    pub list_min: usize,
    pub list_max: usize,
    pub seed: u64,
}

impl Default for CaterpillarParams {
    fn default() -> Self {
        CaterpillarParams {
            spine_len: 4,
            leaves_min: 0,
            leaves_max: 2,
            colors: 4,
            list_min: 2,
            list_max: 3,
            seed: 0,
        }
    }
}

/// A random caterpillar whose lists already satisfy
/// `2 <= |L(v)| <= max(d(v), 1) + 1`, with randomly relabeled vertices.
pub fn gen_caterpillar(p: &CaterpillarParams) -> Result<LcrInstance, GenerateError> {
    if p.spine_len == 0 || p.colors < 2 || p.list_min < 2 || p.list_min > p.list_max || p.leaves_min > p.leaves_max {
        return Err(GenerateError::InvalidParams(format!("{p:?}")));
    }
    let mut rng = rng(p.seed);
    let mut edges = Vec::new();
    for i in 1..p.spine_len {
        edges.push((i - 1, i));
    }
    let mut n = p.spine_len;
    for i in 0..p.spine_len {
        for _ in 0..rng.gen_range(p.leaves_min..=p.leaves_max) {
            edges.push((i, n));
            n += 1;
        }
    }
    let mut label: Vec<Vertex> = (0..n).collect();
    label.shuffle(&mut rng);
    let g = Graph::from_edges(n, edges.into_iter().map(|(u, v)| (label[u], label[v])))
        .expect("tree edges are simple");

    let size_range = |g: &Graph, v: Vertex| {
        let hi = p.list_max.min(g.degree(v).max(1) + 1).min(p.colors as usize);
        (p.list_min.min(hi), hi)
    };
    colored_instance(g, &mut rng, p.colors, size_range)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraphParams {
    pub n: usize,
    pub edge_prob: f64,
    pub colors: u32,
    pub list_min: usize,
    pub list_max: usize,
    pub seed: u64,
}

/// A `G(n, p)` graph with random lists of sizes in `list_min..=list_max`.
pub fn gen_random_instance(p: &RandomGraphParams) -> Result<LcrInstance, GenerateError> {
    if p.list_min == 0 || p.list_min > p.list_max || p.list_max > p.colors as usize || !(0.0..=1.0).contains(&p.edge_prob) {
        return Err(GenerateError::InvalidParams(format!("{p:?}")));
    }
    let mut rng = rng(p.seed);
    let mut g = Graph::new(p.n);
    for u in 0..p.n {
        for v in u + 1..p.n {
            if rng.gen_bool(p.edge_prob) {
                g.add_edge(u, v).expect("each pair once");
            }
        }
    }
    colored_instance(g, &mut rng, p.colors, |_, _| (p.list_min, p.list_max))
}

/// Draws lists, then two independent randomized greedy colorings, retrying
/// with fresh lists when either gets stuck.
fn colored_instance(
    g: Graph,
    rng: &mut ChaCha8Rng,
    colors: u32,
    size_range: impl Fn(&Graph, Vertex) -> (usize, usize),
) -> Result<LcrInstance, GenerateError> {
    let universe: Vec<Color> = (0..colors).map(Color).collect();
    for _ in 0..MAX_ATTEMPTS {
        let lists: Vec<Vec<Color>> = g
            .vertices()
            .map(|v| {
                let (lo, hi) = size_range(&g, v);
                let size = rng.gen_range(lo..=hi);
                universe.choose_multiple(rng, size).copied().collect()
            })
            .collect();
        let Some(f0) = greedy_coloring(&g, &lists, rng) else {
            continue;
        };
        let Some(fr) = greedy_coloring(&g, &lists, rng) else {
            continue;
        };
        return Ok(LcrInstance::new(g, lists, f0, fr).expect("shapes match"));
    }
    Err(GenerateError::GenerationFailed(MAX_ATTEMPTS))
}

/// Colors vertices in BFS order from random roots, each with a uniformly
/// random available color. On forests every vertex sees at most one colored
/// neighbor, so lists of size two always suffice there.
pub fn greedy_coloring(g: &Graph, lists: &[Vec<Color>], rng: &mut impl Rng) -> Option<Coloring> {
    let n = g.vertex_count();
    let mut roots: Vec<Vertex> = g.vertices().collect();
    roots.shuffle(rng);
    let mut f: Vec<Option<Color>> = vec![None; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    let mut free = Vec::new();
    for root in roots {
        if queued[root] {
            continue;
        }
        queued[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            free.clear();
            free.extend(
                lists[v]
                    .iter()
                    .filter(|&&c| g.neighbors(v).iter().all(|&w| f[w] != Some(c))),
            );
            f[v] = Some(*free.choose(rng)?);
            for &w in g.neighbors(v) {
                if !queued[w] {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    Some(Coloring(f.into_iter().map(Option::unwrap).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredParams {
    pub depth: usize,
    pub max_width: usize,
    pub edge_prob: f64,
    pub seed: u64,
}

/// A layered graph with `s = 0`, middle layers of width `1..=max_width`
/// and `t` last. Consecutive middle layers are joined with probability
/// `edge_prob`; every vertex then gets at least one neighbor in each adjacent
/// layer, so `dist(s, t) = depth` and no vertex is pruned. `p0` and `pr` are
/// independent random S-paths.
pub fn gen_layered_spr(p: &LayeredParams) -> Result<SprData, GenerateError> {
    if p.depth == 0 || p.max_width == 0 || !(0.0..=1.0).contains(&p.edge_prob) {
        return Err(GenerateError::InvalidParams(format!("{p:?}")));
    }
    let mut rng = rng(p.seed);
    let mut layers: Vec<Vec<Vertex>> = vec![vec![0]];
    let mut n = 1;
    for _ in 1..p.depth {
        let width = rng.gen_range(1..=p.max_width);
        layers.push((n..n + width).collect());
        n += width;
    }
    layers.push(vec![n]);
    n += 1;

    let mut g = Graph::new(n);
    for i in 0..p.depth {
        let (a, b) = (&layers[i], &layers[i + 1]);
        let full = i == 0 || i + 1 == p.depth;
        for &u in a {
            for &v in b {
                if full || rng.gen_bool(p.edge_prob) {
                    g.add_edge(u, v).expect("each pair once");
                }
            }
        }
        for &u in a {
            if !b.iter().any(|&v| g.has_edge(u, v)) {
                g.add_edge(u, *b.choose(&mut rng).unwrap()).expect("missing edge");
            }
        }
        for &v in b {
            if !a.iter().any(|&u| g.has_edge(u, v)) {
                g.add_edge(*a.choose(&mut rng).unwrap(), v).expect("missing edge");
            }
        }
    }

    let random_path = |rng: &mut ChaCha8Rng| {
        let mut path = vec![0];
        for layer in &layers[1..=p.depth] {
            let last = *path.last().unwrap();
            let forward: Vec<Vertex> = layer.iter().copied().filter(|&v| g.has_edge(last, v)).collect();
            path.push(*forward.choose(rng).unwrap());
        }
        path
    };
    let p0 = random_path(&mut rng);
    let pr = random_path(&mut rng);
    Ok(SprData {
        s: 0,
        t: n - 1,
        p0,
        pr,
        graph: g,
    })
}
