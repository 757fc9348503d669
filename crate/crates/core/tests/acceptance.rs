//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints one PASS/FAIL line; exits non-zero if any criterion fails.
//!
//! Criterion 9 runs first so the peak-memory reading is not inflated by the
//! exhaustive searches of the others.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lcr_core::caterpillar_dp::{self, check_size_bound, DpRun};
use lcr_core::generate::{
    gen_caterpillar, gen_layered_spr, gen_random_instance, CaterpillarParams, LayeredParams, RandomGraphParams,
};
use lcr_core::graph::{
    check_path_decomposition, is_bipartite, is_partial_two_tree, recognize_caterpillar, CaterpillarStructure,
};
use lcr_core::instance::{Coloring, LcrInstance};
use lcr_core::normalize::{lift_sequence, normalize};
use lcr_core::oracle::{component_of, contract_encoding, enumerate_colorings, reachable, ReconfigurationGraph};
use lcr_core::reduction::{
    compile, emit_path_decomposition, recoloring_to_spath_sequence, spath_sequence_to_recoloring, to_threshold,
    ReducedInstance,
};
use lcr_core::spr::{is_valid_rerouting, SprInstance, DEFAULT_SPATH_CAP};

const ORACLE_CAP: u64 = 4_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn oracle_answer(inst: &LcrInstance) -> bool {
    let rg = ReconfigurationGraph::build(inst.graph(), inst.lists(), ORACLE_CAP).expect("within oracle reach");
    reachable(&rg, inst.source(), inst.target()).unwrap().is_some()
}

/// Seeded normalized caterpillars with `n <= 12`, `k <= 4`, lists of size 2..3.
fn small_caterpillars(count: usize) -> Vec<(LcrInstance, CaterpillarStructure)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let params = CaterpillarParams {
            spine_len: 1 + (seed % 6) as usize,
            leaves_min: 0,
            leaves_max: 2,
            colors: 2 + (seed % 3) as u32,
            list_min: 2,
            list_max: 3,
            seed,
        };
        seed += 1;
        let inst = gen_caterpillar(&params).expect("generator parameters are valid");
        if inst.vertex_count() > 12 {
            continue;
        }
        let cat = recognize_caterpillar(inst.graph()).unwrap().unwrap();
        out.push((inst, cat));
    }
    out
}

fn criterion_1_and_3(cases: &[(LcrInstance, CaterpillarStructure)], runs: &[DpRun]) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut agree = 0;
    let mut yes = 0;
    for ((inst, _), run) in cases.iter().zip(runs) {
        let expected = oracle_answer(inst);
        let dp = caterpillar_dp::solve(inst).unwrap();
        agree += usize::from(dp == expected && run.answer == expected);
        yes += usize::from(expected);
    }
    let elapsed = start.elapsed();
    let one = outcome(
        agree == cases.len() && cases.len() >= 1000 && elapsed <= Duration::from_secs(60),
        format!(
            "{agree}/{} agree ({yes} yes, {} no), {:.2}s",
            cases.len(),
            cases.len() - yes,
            elapsed.as_secs_f64()
        ),
    );

    let mut violations = 0;
    let mut steps = 0;
    for ((inst, _), run) in cases.iter().zip(runs) {
        steps += run.sizes.len();
        violations += usize::from(check_size_bound(&run.sizes).is_err());
        let last = run.sizes.last().unwrap().kept;
        violations += usize::from(last > 2 + 2 * inst.graph().edge_count());
    }
    let three = outcome(violations == 0, format!("{violations} violations over {steps} steps"));
    (one, three)
}

fn criterion_2(cases: &[(LcrInstance, CaterpillarStructure)], runs: &[DpRun]) -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    let mut prefixes = 0;
    for ((inst, cat), run) in cases.iter().zip(runs).take(250) {
        checked += 1;
        let mut ok = true;
        for i in 1..=inst.vertex_count() {
            let prefix = inst.prefix(cat, i).unwrap();
            let rg = ReconfigurationGraph::build(prefix.graph(), prefix.lists(), ORACLE_CAP).unwrap();
            let comp = component_of(&rg, prefix.source()).unwrap();
            let spine = cat.position(cat.spine_of_prefix(i));
            let expected = contract_encoding(&rg, &comp, spine, prefix.source(), prefix.target());
            ok &= run.trace[i - 1].is_isomorphic(&expected);
            prefixes += 1;
        }
        failures += usize::from(!ok);
    }
    outcome(
        failures == 0 && checked >= 200,
        format!("{}/{checked} instances isomorphic at all {prefixes} prefixes", checked - failures),
    )
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut agree = 0;
    let mut lifted = 0;
    let mut lifted_ok = 0;
    let mut changed = 0;
    let mut seed = 0u64;
    while checked < 500 {
        let params = RandomGraphParams {
            n: 3 + (seed % 7) as usize,
            edge_prob: [0.25, 0.4, 0.6][(seed % 3) as usize],
            colors: 4,
            list_min: 1,
            list_max: 4,
            seed,
        };
        seed += 1;
        let Ok(inst) = gen_random_instance(&params) else {
            continue;
        };
        checked += 1;
        let (norm, trace) = normalize(&inst).unwrap();
        changed += usize::from(!trace.is_identity());
        let before = oracle_answer(&inst);
        let rg = ReconfigurationGraph::build(norm.graph(), norm.lists(), ORACLE_CAP).unwrap();
        let witness = reachable(&rg, norm.source(), norm.target()).unwrap();
        agree += usize::from(before == witness.is_some());
        if let Some(seq) = witness {
            lifted += 1;
            let up = lift_sequence(&trace, &inst, &norm, &seq);
            lifted_ok += usize::from(up.is_ok_and(|s| inst.is_valid_sequence(&s)));
        }
    }
    outcome(
        agree == checked && lifted_ok == lifted,
        format!("{agree}/{checked} agree ({changed} changed by normalization), {lifted_ok}/{lifted} lifted witnesses valid"),
    )
}

/// Compiled layered instances: `(spr, reduced, oracle fits)`.
fn layered_instances(wanted: usize) -> (Vec<(SprInstance, ReducedInstance)>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    let mut seed = 0u64;
    while out.len() < wanted {
        let params = LayeredParams {
            depth: 2 + (seed % 4) as usize,
            max_width: 1 + (seed % 3) as usize,
            edge_prob: [0.5, 0.65, 0.8][(seed / 4 % 3) as usize],
            seed,
        };
        seed += 1;
        let spr = SprInstance::new(gen_layered_spr(&params).unwrap()).unwrap();
        let red = compile(&spr).unwrap();
        let product: u128 = red.lcr().lists().iter().map(|l| l.len() as u128).product();
        if product > ORACLE_CAP as u128 {
            skipped += 1;
            continue;
        }
        out.push((spr, red));
    }
    (out, skipped)
}

fn criterion_5(cases: &[(SprInstance, ReducedInstance)], skipped: usize) -> Outcome {
    let mut agree = 0;
    let mut yes = 0;
    let mut translations = 0;
    let mut translations_ok = 0;
    for (spr, red) in cases {
        let brute = spr.brute_solve(DEFAULT_SPATH_CAP).unwrap();
        let lcr = red.lcr();
        let rg = ReconfigurationGraph::build(lcr.graph(), lcr.lists(), ORACLE_CAP).unwrap();
        let oracle = reachable(&rg, lcr.source(), lcr.target()).unwrap();
        agree += usize::from(brute.is_some() == oracle.is_some());
        if let (Some(paths), Some(steps)) = (brute, oracle) {
            yes += 1;
            translations += 1;
            let forward = spath_sequence_to_recoloring(red, &paths).unwrap();
            let forward_ok = lcr.is_valid_sequence(&forward);
            let back = recoloring_to_spath_sequence(red, &steps).unwrap();
            let back_ok = is_valid_rerouting(spr, &back);
            let round_trip = recoloring_to_spath_sequence(red, &forward).unwrap();
            translations_ok += usize::from(forward_ok && back_ok && dedup(round_trip) == dedup(paths));
        }
    }
    let no = cases.len() - yes;
    outcome(
        agree == cases.len() && cases.len() >= 200 && yes > 0 && no > 0 && translations_ok == translations,
        format!(
            "{agree}/{} agree ({yes} yes, {no} no, {skipped} skipped over the oracle cap), {translations_ok}/{translations} witness translations valid",
            cases.len()
        ),
    )
}

fn dedup(mut seq: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    seq.dedup();
    seq
}

fn criterion_6(cases: &[(SprInstance, ReducedInstance)]) -> Outcome {
    let mut ok = 0;
    for (_, red) in cases {
        let g = red.lcr().graph();
        let layer: HashSet<usize> = red.layer_vertices().iter().copied().collect();
        let parts_ok = is_bipartite(g).is_some() && g.edges().all(|(u, v)| layer.contains(&u) != layer.contains(&v));
        let pd = emit_path_decomposition(red);
        let check = check_path_decomposition(g, &pd);
        ok += usize::from(parts_ok && is_partial_two_tree(g) && check.valid && check.width <= 2);
    }
    outcome(ok == cases.len(), format!("{ok}/{} compiled graphs certified", cases.len()))
}

fn criterion_7(cases: &[(SprInstance, ReducedInstance)]) -> Outcome {
    let mut checked = 0;
    let mut ok = 0;
    for (_, red) in cases.iter().take(150) {
        let lcr = red.lcr();
        let (dense, witness) = to_threshold(red);
        let sparse_set: HashSet<Coloring> = enumerate_colorings(lcr.graph(), lcr.lists(), ORACLE_CAP).unwrap().into_iter().collect();
        let dense_set: HashSet<Coloring> = enumerate_colorings(dense.graph(), dense.lists(), ORACLE_CAP).unwrap().into_iter().collect();
        checked += 1;
        ok += usize::from(sparse_set == dense_set && witness.verify(dense.graph()) && oracle_answer(lcr) == oracle_answer(&dense));
    }
    outcome(ok == checked && checked >= 100, format!("{ok}/{checked} threshold extensions equivalent"))
}

fn criterion_8(cases: &[(LcrInstance, CaterpillarStructure)]) -> Outcome {
    let mut checked = 0;
    let mut ok = 0;
    let mut pairs = 0u64;
    for (inst, cat) in cases.iter().filter(|(inst, _)| inst.vertex_count() <= 10).take(120) {
        checked += 1;
        // comps[i - 1]: colorings of G_i reachable from f0[V_i].
        let comps: Vec<HashSet<Coloring>> = (1..=inst.vertex_count())
            .map(|i| {
                let prefix = inst.prefix(cat, i).unwrap();
                let rg = ReconfigurationGraph::build(prefix.graph(), prefix.lists(), ORACLE_CAP).unwrap();
                component_of(&rg, prefix.source()).unwrap().into_iter().map(|x| rg.node(x)).collect()
            })
            .collect();
        let mut good = true;
        for i in 1..comps.len() {
            for g in &comps[i] {
                for (j, earlier) in comps[..i].iter().enumerate() {
                    pairs += 1;
                    good &= earlier.contains(&Coloring(g.as_slice()[..=j].to_vec()));
                }
            }
        }
        ok += usize::from(good);
    }
    outcome(ok == checked && checked >= 100, format!("{ok}/{checked} instances, {pairs} restrictions checked"))
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn criterion_9() -> Outcome {
    let mut worst = Duration::ZERO;
    let mut details = Vec::new();
    let mut pass = true;
    for (seed, leaves_max, colors, list_max) in [(1u64, 2usize, 4u32, 3usize), (2, 3, 6, 6), (3, 1, 3, 2)] {
        // Spine length chosen so the expected vertex count is just over 100 000.
        let spine_len = 2 * 100_500 / (2 + leaves_max);
        let params = CaterpillarParams { spine_len, leaves_min: 0, leaves_max, colors, list_min: 2, list_max, seed };
        let inst = gen_caterpillar(&params).unwrap();
        let mut same = inst.clone();
        same = LcrInstance::new(same.graph().clone(), same.lists().to_vec(), same.source().clone(), same.source().clone()).unwrap();
        for (label, case) in [("random", &inst), ("identical", &same)] {
            let start = Instant::now();
            let run = caterpillar_dp::run(case, false).unwrap();
            let elapsed = start.elapsed();
            let bound_ok = check_size_bound(&run.sizes).is_ok();
            worst = worst.max(elapsed);
            pass &= case.vertex_count() >= 100_000 && elapsed < Duration::from_secs(10) && bound_ok;
            details.push(format!(
                "n={} k={colors} {label}: {} in {:.2}s, max |E_i| {}",
                case.vertex_count(),
                if run.answer { "yes" } else { "no" },
                elapsed.as_secs_f64(),
                run.max_enodes()
            ));
        }
    }
    let peak = peak_rss_kib();
    pass &= peak.is_some_and(|kib| kib < 1024 * 1024);
    let peak = peak.map_or("unknown".into(), |kib| format!("{:.1} MiB", kib as f64 / 1024.0));
    outcome(pass, format!("slowest {:.2}s, peak RSS {peak}; {}", worst.as_secs_f64(), details.join("; ")))
}

fn main() -> ExitCode {
    let nine = criterion_9();

    let cases = small_caterpillars(1000);
    let runs: Vec<DpRun> = cases
        .iter()
        .map(|(inst, cat)| caterpillar_dp::run_with_structure(inst, cat, true).unwrap())
        .collect();
    let (one, three) = criterion_1_and_3(&cases, &runs);
    let two = criterion_2(&cases, &runs);
    let four = criterion_4();
    let (layered, skipped) = layered_instances(240);
    let five = criterion_5(&layered, skipped);
    let six = criterion_6(&layered);
    let seven = criterion_7(&layered);
    let eight = criterion_8(&cases);

    let results = [
        ("1 DP and oracle decisions agree", one),
        ("2 encoding graphs match oracle contractions", two),
        ("3 encoding-graph size bound", three),
        ("4 normalization preserves answers", four),
        ("5 reduction preserves answers", five),
        ("6 compiled graphs are certified", six),
        ("7 threshold extension is equivalent", seven),
        ("8 restriction property", eight),
        ("9 polynomial scaling", nine),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        println!("{} criterion {name}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
        failed += usize::from(!result.pass);
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", results.len());
        ExitCode::FAILURE
    }
}
