//! Batch experiments: generate seeded instances, solve each with several
//! algorithms and report one CSV row per (instance, algorithm).
//!
//! The config is line oriented. `key = value` lines set defaults for every
//! later `run` line; a `run` line is a list of `key=value` tokens:
//!
//! ```text
//! cap = 2000000
//! run kind=caterpillar spine_len=4 seeds=0..100 algos=caterpillar,bruteforce
//! run kind=random n=7 edge_prob=0.4 seeds=0..50 algos=auto,bruteforce
//! run kind=layered depth=4 width=3 edge_prob=0.5 seeds=0..20 algos=spr,bruteforce
//! ```

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::driver::{solve_driver, Algorithm, DriverError};
use crate::generate::{
    gen_caterpillar, gen_layered_spr, gen_random_instance, CaterpillarParams, LayeredParams, RandomGraphParams,
};
use crate::io::ParseError;
use crate::oracle::{reachable, OracleError, ReconfigurationGraph, DEFAULT_STATE_CAP};
use crate::reduction::compile;
use crate::spr::{SprError, SprInstance, DEFAULT_SPATH_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Caterpillar,
    Random,
    Layered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpAlgorithm {
    Auto,
    Caterpillar,
    BruteForce,
    /// Brute-force search over S-paths (layered runs only).
    Spr,
}

impl ExpAlgorithm {
    fn name(self) -> &'static str {
        match self {
            ExpAlgorithm::Auto => "auto",
            ExpAlgorithm::Caterpillar => "caterpillar",
            ExpAlgorithm::BruteForce => "bruteforce",
            ExpAlgorithm::Spr => "spr",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub kind: Kind,
    pub params: BTreeMap<String, String>,
    pub seeds: Range<u64>,
    pub algos: Vec<ExpAlgorithm>,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub runs: Vec<RunSpec>,
}

const PARAM_KEYS: &[&str] = &[
    "spine_len", "leaves_min", "leaves_max", "colors", "list_min", "list_max", "n", "edge_prob", "depth", "width",
];

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ParseError> {
    let mut defaults: BTreeMap<String, String> = BTreeMap::new();
    let mut runs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("run") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let mut settings = defaults.clone();
                for token in rest.split_whitespace() {
                    let (k, v) = token
                        .split_once('=')
                        .ok_or_else(|| ParseError::new(line, format!("expected key=value, got `{token}`")))?;
                    settings.insert(k.to_string(), v.to_string());
                }
                runs.push(run_spec(settings, line)?);
                continue;
            }
        }
        let (k, v) = trimmed
            .split_once('=')
            .ok_or_else(|| ParseError::new(line, "expected `key = value` or a `run` line"))?;
        defaults.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(ExperimentConfig { runs })
}

fn run_spec(mut s: BTreeMap<String, String>, line: usize) -> Result<RunSpec, ParseError> {
    let err = |m: String| ParseError::new(line, m);
    let kind = match s.remove("kind").as_deref() {
        Some("caterpillar") => Kind::Caterpillar,
        Some("random") => Kind::Random,
        Some("layered") => Kind::Layered,
        other => return Err(err(format!("unknown or missing kind {other:?}"))),
    };
    let seeds = match s.remove("seeds") {
        Some(raw) => parse_range(&raw).ok_or_else(|| err(format!("invalid seed range `{raw}`")))?,
        None => 0..1,
    };
    let algos = s
        .remove("algos")
        .unwrap_or_else(|| "auto".into())
        .split(',')
        .map(|a| match (a, kind) {
            ("auto", Kind::Caterpillar | Kind::Random) => Ok(ExpAlgorithm::Auto),
            ("caterpillar", Kind::Caterpillar) => Ok(ExpAlgorithm::Caterpillar),
            ("bruteforce", _) => Ok(ExpAlgorithm::BruteForce),
            ("spr", Kind::Layered) => Ok(ExpAlgorithm::Spr),
            _ => Err(err(format!("algorithm `{a}` does not apply to {kind:?} runs"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cap = match s.remove("cap") {
        Some(raw) => raw.parse().map_err(|_| err(format!("invalid cap `{raw}`")))?,
        None => DEFAULT_STATE_CAP,
    };
    if let Some(k) = s.keys().find(|k| !PARAM_KEYS.contains(&k.as_str())) {
        return Err(err(format!("unknown key `{k}`")));
    }
    let spec = RunSpec {
        kind,
        params: s,
        seeds,
        algos,
        cap,
    };
    // Surface bad parameter values now rather than mid-batch.
    spec.check_params().map_err(err)?;
    Ok(spec)
}

/// `a..b` or a single seed.
fn parse_range(raw: &str) -> Option<Range<u64>> {
    match raw.split_once("..") {
        Some((a, b)) => Some(a.parse().ok()?..b.parse().ok()?),
        None => {
            let x: u64 = raw.parse().ok()?;
            Some(x..x + 1)
        }
    }
}

impl RunSpec {
    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, String> {
        match self.params.get(key) {
            Some(raw) => raw.parse().map_err(|_| format!("invalid value `{raw}` for `{key}`")),
            None => Ok(default),
        }
    }

    fn check_params(&self) -> Result<(), String> {
        match self.kind {
            Kind::Caterpillar => self.caterpillar(0).map(drop),
            Kind::Random => self.random(0).map(drop),
            Kind::Layered => self.layered(0).map(drop),
        }
    }

    fn caterpillar(&self, seed: u64) -> Result<CaterpillarParams, String> {
        let d = CaterpillarParams::default();
        Ok(CaterpillarParams {
            spine_len: self.get("spine_len", d.spine_len)?,
            leaves_min: self.get("leaves_min", d.leaves_min)?,
            leaves_max: self.get("leaves_max", d.leaves_max)?,
            colors: self.get("colors", d.colors)?,
            list_min: self.get("list_min", d.list_min)?,
            list_max: self.get("list_max", d.list_max)?,
            seed,
        })
    }

    fn random(&self, seed: u64) -> Result<RandomGraphParams, String> {
        Ok(RandomGraphParams {
            n: self.get("n", 6)?,
            edge_prob: self.get("edge_prob", 0.4)?,
            colors: self.get("colors", 4)?,
            list_min: self.get("list_min", 1)?,
            list_max: self.get("list_max", 3)?,
            seed,
        })
    }

    fn layered(&self, seed: u64) -> Result<LayeredParams, String> {
        Ok(LayeredParams {
            depth: self.get("depth", 4)?,
            max_width: self.get("width", 3)?,
            edge_prob: self.get("edge_prob", 0.5)?,
            seed,
        })
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub run: usize,
    pub kind: Kind,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub algorithm: ExpAlgorithm,
    /// `None` when the algorithm hit its resource cap.
    pub answer: Option<bool>,
    pub states: Option<usize>,
    pub max_enodes: Option<usize>,
    pub min_slack: Option<i64>,
    /// Every decided algorithm on this instance gave the same answer.
    pub agree: bool,
    pub millis: f64,
}

pub const CSV_HEADER: [&str; 12] = [
    "run", "kind", "seed", "vertices", "edges", "algorithm", "answer", "states", "max_enodes", "min_slack", "agree",
    "time_ms",
];

/// Runs every instance, in parallel across instances. Row order is
/// deterministic: by run, seed, then the order of `algos`.
pub fn run_experiments(cfg: &ExperimentConfig) -> Result<Vec<Row>, String> {
    let jobs: Vec<(usize, &RunSpec, u64)> = cfg
        .runs
        .iter()
        .enumerate()
        .flat_map(|(r, spec)| spec.seeds.clone().map(move |seed| (r, spec, seed)))
        .collect();
    let per_instance: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(r, spec, seed)| run_instance(r, spec, seed))
        .collect::<Result<_, _>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}

fn run_instance(run: usize, spec: &RunSpec, seed: u64) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    let base = |vertices, edges, algorithm| Row {
        run,
        kind: spec.kind,
        seed,
        vertices,
        edges,
        algorithm,
        answer: None,
        states: None,
        max_enodes: None,
        min_slack: None,
        agree: true,
        millis: 0.0,
    };
    match spec.kind {
        Kind::Caterpillar | Kind::Random => {
            let inst = if spec.kind == Kind::Caterpillar {
                gen_caterpillar(&spec.caterpillar(seed)?)
            } else {
                gen_random_instance(&spec.random(seed)?)
            }
            .map_err(|e| e.to_string())?;
            let (n, m) = (inst.vertex_count(), inst.graph().edge_count());
            for &algo in &spec.algos {
                let driver_algo = match algo {
                    ExpAlgorithm::Auto => Algorithm::Auto,
                    ExpAlgorithm::Caterpillar => Algorithm::Caterpillar,
                    _ => Algorithm::BruteForce,
                };
                let start = Instant::now();
                let mut row = base(n, m, algo);
                match solve_driver(&inst, driver_algo, false, spec.cap) {
                    Ok(report) => {
                        row.answer = Some(report.answer);
                        let states: usize = report.components.iter().filter_map(|c| c.states).sum();
                        row.states = (states > 0).then_some(states);
                        let dp: Vec<_> = report.components.iter().filter(|c| !c.sizes.is_empty()).collect();
                        if !dp.is_empty() {
                            row.max_enodes = dp.iter().map(|c| c.max_enodes()).max();
                            row.min_slack = dp.iter().filter_map(|c| c.min_slack()).min();
                        }
                    }
                    Err(DriverError::StateSpaceTooLarge { .. }) => {}
                    Err(e) => return Err(format!("run {run} seed {seed}: {e}")),
                }
                row.millis = start.elapsed().as_secs_f64() * 1e3;
                rows.push(row);
            }
        }
        Kind::Layered => {
            let data = gen_layered_spr(&spec.layered(seed)?).map_err(|e| e.to_string())?;
            let inst = SprInstance::new(data).map_err(|e| e.to_string())?;
            let (n, m) = (inst.graph().vertex_count(), inst.graph().edge_count());
            for &algo in &spec.algos {
                let start = Instant::now();
                let mut row = base(n, m, algo);
                match algo {
                    ExpAlgorithm::Spr => match inst.brute_solve(DEFAULT_SPATH_CAP) {
                        Ok(seq) => row.answer = Some(seq.is_some()),
                        Err(SprError::StateSpaceTooLarge { .. }) => {}
                        Err(e) => return Err(e.to_string()),
                    },
                    _ if inst.distance() <= 1 => row.answer = Some(inst.p0() == inst.pr()),
                    _ => {
                        let red = compile(&inst).map_err(|e| e.to_string())?;
                        let lcr = red.lcr();
                        match ReconfigurationGraph::build(lcr.graph(), lcr.lists(), spec.cap) {
                            Ok(rg) => {
                                row.states = Some(rg.node_count());
                                let found = reachable(&rg, lcr.source(), lcr.target()).map_err(|e| e.to_string())?;
                                row.answer = Some(found.is_some());
                            }
                            Err(OracleError::StateSpaceTooLarge { .. }) => {}
                            Err(e) => return Err(e.to_string()),
                        }
                    }
                }
                row.millis = start.elapsed().as_secs_f64() * 1e3;
                rows.push(row);
            }
        }
    }
    let decided: Vec<bool> = rows.iter().filter_map(|r| r.answer).collect();
    let agree = decided.windows(2).all(|w| w[0] == w[1]);
    for row in &mut rows {
        row.agree = agree;
    }
    Ok(rows)
}

pub fn write_csv(rows: &[Row], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in rows {
        w.write_record([
            r.run.to_string(),
            format!("{:?}", r.kind).to_lowercase(),
            r.seed.to_string(),
            r.vertices.to_string(),
            r.edges.to_string(),
            r.algorithm.name().to_string(),
            match r.answer {
                Some(true) => "yes".into(),
                Some(false) => "no".into(),
                None => "capped".into(),
            },
            opt(r.states.map(|x| x.to_string())),
            opt(r.max_enodes.map(|x| x.to_string())),
            opt(r.min_slack.map(|x| x.to_string())),
            r.agree.to_string(),
            format!("{:.3}", r.millis),
        ])?;
    }
    w.flush()?;
    Ok(())
}
