//! End-to-end solving: validate, normalize, split into components, decide
//! each component with the caterpillar DP or the exhaustive oracle, and lift
//! oracle witnesses back to the input instance.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::caterpillar_dp::{self, SolveError, StepSize};
use crate::graph::{recognize_caterpillar, Vertex};
use crate::instance::{InstanceError, LcrInstance, RecolorStep};
use crate::normalize::{lift_sequence, normalize, NormalizationTrace};
use crate::oracle::{reachable, OracleError, ReconfigurationGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Auto,
    Caterpillar,
    BruteForce,
}

/// How one component was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Source and target already agree.
    Trivial,
    Caterpillar,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Trivial => "trivial",
            Method::Caterpillar => "caterpillar",
            Method::BruteForce => "bruteforce",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DriverError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("{source}; try --algo caterpillar on caterpillars or raise --cap")]
    StateSpaceTooLarge {
        #[source]
        source: OracleError,
    },
    #[error("component containing vertex {0} is not a caterpillar")]
    NotCaterpillar(Vertex),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl From<OracleError> for DriverError {
    fn from(source: OracleError) -> Self {
        DriverError::StateSpaceTooLarge { source }
    }
}

#[derive(Debug, Clone)]
pub struct ComponentReport {
    /// Vertices of the normalized instance, in input ids.
    pub vertices: Vec<Vertex>,
    pub method: Method,
    pub answer: bool,
    /// Nodes of the reconfiguration graph, for oracle runs.
    pub states: Option<usize>,
    /// Per-step sizes, for DP runs.
    pub sizes: Vec<StepSize>,
}

impl ComponentReport {
    pub fn max_enodes(&self) -> usize {
        self.sizes.iter().map(|s| s.kept).max().unwrap_or(0)
    }

    /// Smallest `|V(E_{i-1})| + d(v_i) - |V(E'_i)|` over the run; negative
    /// values are size-bound violations.
    pub fn min_slack(&self) -> Option<i64> {
        self.sizes
            .iter()
            .map(|s| {
                let bound = if s.step == 1 { 2 } else { s.previous + s.degree };
                bound as i64 - s.unpruned as i64
            })
            .min()
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub answer: bool,
    pub components: Vec<ComponentReport>,
    /// Present when requested, the answer is yes and the oracle could run.
    pub witness: Option<Vec<RecolorStep>>,
    pub elapsed: Duration,
}

impl SolveReport {
    /// The methods used, deduplicated, in component order.
    pub fn methods(&self) -> Vec<Method> {
        let mut out: Vec<Method> = Vec::new();
        for c in &self.components {
            if !out.contains(&c.method) {
                out.push(c.method);
            }
        }
        out
    }
}

pub fn solve_driver(
    inst: &LcrInstance,
    algo: Algorithm,
    want_witness: bool,
    cap: u64,
) -> Result<SolveReport, DriverError> {
    let start = Instant::now();
    inst.check_endpoints()?;
    if inst.source() == inst.target() {
        return Ok(SolveReport {
            answer: true,
            components: Vec::new(),
            witness: want_witness.then(Vec::new),
            elapsed: start.elapsed(),
        });
    }

    let (norm, trace) = normalize(inst)?;
    let mut components = Vec::new();
    for comp in norm.graph().components() {
        let sub = norm.induced(&comp);
        let vertices = comp.iter().map(|&v| trace.kept[v]).collect();
        let mut report = ComponentReport {
            vertices,
            method: Method::Trivial,
            answer: true,
            states: None,
            sizes: Vec::new(),
        };
        if sub.source() != sub.target() {
            let cat = match algo {
                Algorithm::BruteForce => None,
                _ => recognize_caterpillar(sub.graph()).expect("components are connected"),
            };
            match cat {
                Some(cat) => {
                    let run = caterpillar_dp::run_with_structure(&sub, &cat, false)?;
                    report.method = Method::Caterpillar;
                    report.answer = run.answer;
                    report.sizes = run.sizes;
                }
                None if algo == Algorithm::Caterpillar => {
                    return Err(DriverError::NotCaterpillar(report.vertices[0]));
                }
                None => {
                    let rg = ReconfigurationGraph::build(sub.graph(), sub.lists(), cap)?;
                    report.method = Method::BruteForce;
                    report.answer = reachable(&rg, sub.source(), sub.target())?.is_some();
                    report.states = Some(rg.node_count());
                }
            }
        }
        components.push((comp, sub, report));
    }

    let answer = components.iter().all(|(_, _, r)| r.answer);
    let witness = if answer && want_witness {
        witness(inst, &norm, &trace, &components, cap)
    } else {
        None
    };
    Ok(SolveReport {
        answer,
        components: components.into_iter().map(|(_, _, r)| r).collect(),
        witness,
        elapsed: start.elapsed(),
    })
}

/// Per-component oracle sequences concatenated, then lifted. `None` when a
/// component exceeds the cap.
fn witness(
    inst: &LcrInstance,
    norm: &LcrInstance,
    trace: &NormalizationTrace,
    components: &[(Vec<Vertex>, LcrInstance, ComponentReport)],
    cap: u64,
) -> Option<Vec<RecolorStep>> {
    let mut seq = Vec::new();
    for (comp, sub, _) in components {
        if sub.source() == sub.target() {
            continue;
        }
        let rg = ReconfigurationGraph::build(sub.graph(), sub.lists(), cap).ok()?;
        let steps = reachable(&rg, sub.source(), sub.target()).ok()??;
        seq.extend(steps.into_iter().map(|s| RecolorStep::new(comp[s.vertex], s.color)));
    }
    lift_sequence(trace, inst, norm, &seq).ok()
}
