//! Property tests pairing library routines with small independent oracles.

use std::collections::HashMap;

use proptest::prelude::*;

use lcr_core::caterpillar_dp;
use lcr_core::generate::{
    gen_caterpillar, gen_layered_spr, gen_random_instance, CaterpillarParams, LayeredParams, RandomGraphParams,
};
use lcr_core::graph::{
    is_bipartite, is_partial_two_tree, recognize_caterpillar, recognize_threshold, Graph, PathDecomposition,
};
use lcr_core::instance::{Color, RecolorStep};
use lcr_core::io;
use lcr_core::normalize::{lift_sequence, normalize};
use lcr_core::oracle::{reachable, ReconfigurationGraph, DEFAULT_STATE_CAP};
use lcr_core::reduction::{compile, ColorEntry};
use lcr_core::spr::{adjacent_s_paths, SprInstance, DEFAULT_SPATH_CAP};

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                g.add_edge(u, v).unwrap();
            }
            k += 1;
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// A random tree plus a few extra edges: always connected.
fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
            proptest::collection::vec((0..n, 0..n), 0..3),
        )
            .prop_map(move |(parents, extra)| {
                let mut g = Graph::new(n);
                for (i, p) in parents.iter().enumerate() {
                    g.add_edge(i + 1, p.index(i + 1)).unwrap();
                }
                for (u, v) in extra {
                    if u != v && !g.has_edge(u, v) {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
    })
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    g.vertices().map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect()
}

/// Vertex separation number by a DP over vertex subsets.
fn vertex_separation(g: &Graph) -> usize {
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    let boundary = |s: u32| (0..n).filter(|&v| s >> v & 1 == 1 && adj[v] & !s & full != 0).count();
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let inner = (0..n).filter(|&v| s >> v & 1 == 1).map(|v| best[(s & !(1 << v)) as usize]).min().unwrap();
        best[s as usize] = inner.max(boundary(s));
    }
    best[full as usize]
}

fn brute_bipartite(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0..1u32 << n).any(|side| g.edges().all(|(u, v)| (side >> u & 1) != (side >> v & 1)))
}

/// Treewidth at most 2: some elimination order removes every vertex while it
/// has at most two neighbors in the filled graph.
fn brute_treewidth_at_most_two(g: &Graph) -> bool {
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    // Filled-graph neighbors of v after eliminating `gone`: vertices outside
    // `gone` reachable from v through eliminated vertices.
    let filled_degree = |gone: u32, v: usize| {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut reach = 0u32;
        while let Some(x) = stack.pop() {
            for w in 0..n {
                if adj[x] >> w & 1 == 1 && seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    if gone >> w & 1 == 1 {
                        stack.push(w);
                    } else {
                        reach |= 1 << w;
                    }
                }
            }
        }
        reach.count_ones()
    };
    let mut ok = vec![false; 1 << n];
    ok[0] = true;
    for s in 0..full {
        if !ok[s as usize] {
            continue;
        }
        for v in 0..n {
            if s >> v & 1 == 0 && filled_degree(s, v) <= 2 {
                ok[(s | 1 << v) as usize] = true;
            }
        }
    }
    ok[full as usize]
}

/// No induced 2K2, P4 or C4.
fn brute_threshold(g: &Graph) -> bool {
    let n = g.vertex_count();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let mut degrees = [0; 4];
                    let mut edges = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if g.has_edge(q[i], q[j]) {
                                degrees[i] += 1;
                                degrees[j] += 1;
                                edges += 1;
                            }
                        }
                    }
                    degrees.sort_unstable();
                    let bad = matches!((edges, degrees), (2, [1, 1, 1, 1]) | (3, [1, 1, 2, 2]) | (4, [2, 2, 2, 2]));
                    if bad {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn random_params(seed: u64, n: usize, edge_prob: f64) -> RandomGraphParams {
    RandomGraphParams {
        n,
        edge_prob,
        colors: 4,
        list_min: 1,
        list_max: 4,
        seed,
    }
}

fn caterpillar_params(seed: u64, spine_len: usize, colors: u32) -> CaterpillarParams {
    CaterpillarParams {
        spine_len,
        leaves_min: 0,
        leaves_max: 2,
        colors,
        list_min: 2,
        list_max: 3,
        seed,
    }
}

fn layered(seed: u64, depth: usize, width: usize) -> SprInstance {
    let data = gen_layered_spr(&LayeredParams { depth, max_width: width, edge_prob: 0.6, seed }).unwrap();
    SprInstance::new(data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn caterpillars_are_connected_graphs_of_pathwidth_one(g in arb_connected(8)) {
        let recognized = recognize_caterpillar(&g).unwrap();
        prop_assert_eq!(recognized.is_some(), vertex_separation(&g) <= 1);
        if let Some(cat) = recognized {
            let mut order = cat.ordering().to_vec();
            order.sort_unstable();
            prop_assert_eq!(order, g.vertices().collect::<Vec<_>>());
            for (i, &v) in cat.ordering().iter().enumerate() {
                prop_assert_eq!(cat.position(v), i);
            }
        }
    }

    #[test]
    fn bipartiteness_matches_two_coloring_search(g in arb_graph(8)) {
        let found = is_bipartite(&g);
        prop_assert_eq!(found.is_some(), brute_bipartite(&g));
        if let Some(parts) = found {
            prop_assert_eq!(parts.left.len() + parts.right.len(), g.vertex_count());
            for (u, v) in g.edges() {
                prop_assert_ne!(parts.left.contains(&u), parts.left.contains(&v));
            }
        }
    }

    #[test]
    fn partial_two_trees_match_elimination_search(g in arb_graph(7)) {
        prop_assert_eq!(is_partial_two_tree(&g), brute_treewidth_at_most_two(&g));
    }

    #[test]
    fn threshold_recognition_matches_forbidden_subgraphs(g in arb_graph(7)) {
        let witness = recognize_threshold(&g);
        prop_assert_eq!(witness.is_some(), brute_threshold(&g));
        if let Some(w) = witness {
            prop_assert!(w.verify(&g));
        }
    }

    #[test]
    fn normalization_is_idempotent_and_bounded(seed in any::<u64>(), n in 1usize..10, p in 0.1f64..0.7) {
        let Ok(inst) = gen_random_instance(&random_params(seed, n, p)) else { return Ok(()) };
        let (norm, _) = normalize(&inst).unwrap();
        for v in norm.graph().vertices() {
            let size = norm.list(v).len();
            let degree = norm.graph().degree(v);
            prop_assert!(size >= 2 && size <= degree.max(1) + 1, "vertex {} has {} colors, degree {}", v, size, degree);
        }
        prop_assert!(norm.check_endpoints().is_ok());
        let (again, trace) = normalize(&norm).unwrap();
        prop_assert!(trace.is_identity());
        prop_assert_eq!(again, norm);
    }

    #[test]
    fn lifted_witnesses_are_valid(seed in any::<u64>(), n in 1usize..9, p in 0.1f64..0.7) {
        let Ok(inst) = gen_random_instance(&random_params(seed, n, p)) else { return Ok(()) };
        let (norm, trace) = normalize(&inst).unwrap();
        let rg = ReconfigurationGraph::build(norm.graph(), norm.lists(), DEFAULT_STATE_CAP).unwrap();
        if let Some(seq) = reachable(&rg, norm.source(), norm.target()).unwrap() {
            let lifted = lift_sequence(&trace, &inst, &norm, &seq).unwrap();
            prop_assert!(inst.is_valid_sequence(&lifted));
        }
    }

    #[test]
    fn lcr_files_round_trip(seed in any::<u64>(), n in 1usize..10, p in 0.1f64..0.7) {
        let Ok(inst) = gen_random_instance(&random_params(seed, n, p)) else { return Ok(()) };
        let text = io::write_lcr(&inst);
        prop_assert_eq!(io::parse_lcr(&text).unwrap(), inst.clone());
        let graph_text = io::write_graph(inst.graph());
        prop_assert_eq!(&io::parse_graph(&graph_text).unwrap(), inst.graph());
    }

    #[test]
    fn spr_files_round_trip(seed in any::<u64>(), depth in 2usize..6, width in 1usize..4) {
        let inst = layered(seed, depth, width);
        let text = io::write_spr(inst.data());
        prop_assert_eq!(&io::parse_spr(&text).unwrap(), inst.data());
    }

    #[test]
    fn small_formats_round_trip(
        steps in proptest::collection::vec((0usize..50, 0u32..20), 0..12),
        bags in proptest::collection::vec(proptest::collection::vec(0usize..30, 0..5), 0..6),
        entries in proptest::collection::vec((0u32..40, 1usize..8, 0usize..5), 0..10),
    ) {
        let steps: Vec<RecolorStep> = steps.into_iter().map(|(v, c)| RecolorStep::new(v, Color(c))).collect();
        prop_assert_eq!(io::parse_sequence(&io::write_sequence(&steps)).unwrap(), steps);
        let pd = PathDecomposition::new(bags);
        prop_assert_eq!(io::parse_decomposition(&io::write_decomposition(&pd)).unwrap(), pd);
        let entries: Vec<ColorEntry> =
            entries.into_iter().map(|(c, layer, index)| ColorEntry { color: Color(c), layer, index }).collect();
        prop_assert_eq!(io::parse_colormap(&io::write_colormap(&entries)).unwrap(), entries);
    }

    #[test]
    fn reduced_instances_round_trip(seed in any::<u64>(), depth in 2usize..5, width in 1usize..4) {
        let red = compile(&layered(seed, depth, width)).unwrap();
        let text = io::write_lcr(red.lcr());
        prop_assert_eq!(&io::parse_lcr(&text).unwrap(), red.lcr());
        let map = io::write_colormap(red.color_map());
        prop_assert_eq!(io::parse_colormap(&map).unwrap(), red.color_map().to_vec());
    }

    #[test]
    fn s_path_count_matches_layer_dp(seed in any::<u64>(), depth in 1usize..6, width in 1usize..4) {
        let inst = layered(seed, depth, width);
        let paths = inst.enumerate_s_paths(DEFAULT_SPATH_CAP).unwrap();
        let g = inst.graph();
        let mut counts: HashMap<usize, u64> = HashMap::from([(inst.s(), 1)]);
        for i in 1..=inst.distance() {
            let next = inst
                .layer(i)
                .iter()
                .map(|&w| (w, g.neighbors(w).iter().filter_map(|u| counts.get(u)).sum()))
                .collect();
            counts = next;
        }
        prop_assert_eq!(paths.len() as u64, counts[&inst.t()]);
        for p in &paths {
            prop_assert!(inst.is_s_path(p));
        }
    }

    #[test]
    fn s_path_adjacency_is_a_single_swap(seed in any::<u64>(), depth in 2usize..5, width in 1usize..4) {
        let inst = layered(seed, depth, width);
        let paths = inst.enumerate_s_paths(DEFAULT_SPATH_CAP).unwrap();
        for p in paths.iter().take(20) {
            prop_assert!(!adjacent_s_paths(p, p));
            for q in paths.iter().take(20) {
                let adjacent = adjacent_s_paths(p, q);
                prop_assert_eq!(adjacent, adjacent_s_paths(q, p));
                let differing = p.iter().zip(q).filter(|(a, b)| a != b).count();
                prop_assert_eq!(adjacent, differing == 1);
            }
        }
    }

    #[test]
    fn encoding_graphs_keep_their_invariants(seed in any::<u64>(), spine in 1usize..6, colors in 2u32..5) {
        let inst = gen_caterpillar(&caterpillar_params(seed, spine, colors)).unwrap();
        let cat = recognize_caterpillar(inst.graph()).unwrap().unwrap();
        let run = caterpillar_dp::run_with_structure(&inst, &cat, true).unwrap();
        prop_assert_eq!(run.trace.len(), inst.vertex_count());
        for (i, e) in run.trace.iter().enumerate() {
            prop_assert_eq!(e.nodes().iter().filter(|x| x.ini).count(), 1);
            prop_assert!(e.nodes().iter().filter(|x| x.tar).count() <= 1);
            prop_assert!(e.is_connected());
            let spine_list = inst.list(cat.spine_of_prefix(i + 1));
            for x in e.nodes() {
                prop_assert!(spine_list.contains(&x.col));
            }
        }
        prop_assert_eq!(run.answer, run.trace.last().unwrap().tar().is_some());
    }
}
