use std::fmt::Write as _;
use std::fs;
use std::io::{ErrorKind, Write as _};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lcr_core::caterpillar_dp::{self, check_size_bound};
use lcr_core::driver::{solve_driver, Algorithm, DriverError};
use lcr_core::experiments::{parse_config, run_experiments, write_csv};
use lcr_core::generate::{gen_caterpillar, gen_layered_spr, CaterpillarParams, LayeredParams};
use lcr_core::graph::{check_path_decomposition, recognize_caterpillar, recognize_threshold, Graph};
use lcr_core::instance::LcrInstance;
use lcr_core::io::{self, with_header};
use lcr_core::normalize::{normalize, Removal};
use lcr_core::oracle::{reachable, OracleError, ReconfigurationGraph};
use lcr_core::reduction::{compile, emit_path_decomposition, to_threshold};
use lcr_core::spr::{SprError, SprInstance};

use crate::{AlgoArg, Command, GenCommand, OracleCommand, ReduceArgs, SolveArgs, VerifyCommand};

/// `println!` through [`emit`], so a closed pipe is not an error.
macro_rules! outln {
    ($($arg:tt)*) => {
        emit(None, &format!("{}\n", format_args!($($arg)*)))?
    };
}

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Solve(args) => solve(args),
        Command::Normalize { file, output } => normalize_cmd(&file, output),
        Command::Reduce(args) => reduce(args),
        Command::Verify(v) => verify(v),
        Command::Gen(g) => generate(g),
        Command::Oracle(OracleCommand::Stats { file, cap }) => oracle_stats(&file, cap),
        Command::Experiments { config, output } => experiments(&config, output),
    }
}

/// 3 for resource caps, 2 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let capped = e.chain().any(|cause| {
        matches!(cause.downcast_ref(), Some(DriverError::StateSpaceTooLarge { .. }))
            || matches!(cause.downcast_ref(), Some(OracleError::StateSpaceTooLarge { .. }))
            || matches!(cause.downcast_ref(), Some(SprError::StateSpaceTooLarge { .. }))
    });
    if capped {
        3
    } else {
        2
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_lcr(path: &Path) -> Result<LcrInstance> {
    io::parse_lcr(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A `p graph` file, or the graph of a `p lcr` file.
fn read_any_graph(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    let is_lcr = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("p lcr"));
    let parsed = if is_lcr {
        io::parse_lcr(&text).map(|inst| inst.graph().clone())
    } else {
        io::parse_graph(&text)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn yes_no(answer: bool) -> &'static str {
    if answer {
        "YES"
    } else {
        "NO"
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let inst = read_lcr(&args.file)?;
    let algo = match args.algo {
        AlgoArg::Auto => Algorithm::Auto,
        AlgoArg::Caterpillar => Algorithm::Caterpillar,
        AlgoArg::Bruteforce => Algorithm::BruteForce,
    };
    let report = solve_driver(&inst, algo, args.witness, args.cap)?;
    let mut out = format!("{}\n", yes_no(report.answer));
    if args.witness && report.answer {
        match &report.witness {
            Some(steps) => out.push_str(&io::write_sequence(steps)),
            None => eprintln!("note: no witness; a component exceeds the exhaustive-search cap"),
        }
    }
    if args.trace {
        out.push_str(&trace(&inst)?);
    }
    emit(None, &out)?;

    if args.report {
        let methods: Vec<String> = report.methods().iter().map(ToString::to_string).collect();
        eprintln!(
            "answer {} methods [{}] components {} time {:.3}ms",
            yes_no(report.answer),
            methods.join(","),
            report.components.len(),
            report.elapsed.as_secs_f64() * 1e3
        );
        for (i, c) in report.components.iter().enumerate() {
            eprintln!(
                "component {i}: vertices {} method {} answer {} states {} max_enodes {} min_slack {}",
                c.vertices.len(),
                c.method,
                yes_no(c.answer),
                c.states.map_or("-".into(), |s| s.to_string()),
                c.max_enodes(),
                c.min_slack().map_or("-".into(), |s| s.to_string()),
            );
        }
    }
    Ok(())
}

/// Encoding graphs of every caterpillar component of the normalized instance.
fn trace(inst: &LcrInstance) -> Result<String> {
    let (norm, _) = normalize(inst)?;
    let mut out = String::new();
    for (k, comp) in norm.graph().components().into_iter().enumerate() {
        let sub = norm.induced(&comp);
        let Some(cat) = recognize_caterpillar(sub.graph())? else {
            writeln!(out, "# component {k}: not a caterpillar").unwrap();
            continue;
        };
        let run = caterpillar_dp::run_with_structure(&sub, &cat, true)?;
        writeln!(out, "# component {k}").unwrap();
        for (i, e) in run.trace.iter().enumerate() {
            io::write_trace_step(&mut out, i + 1, e);
        }
        if let Err(step) = check_size_bound(&run.sizes) {
            bail!("size bound violated at step {step}");
        }
    }
    Ok(out)
}

fn normalize_cmd(file: &Path, output: Option<PathBuf>) -> Result<()> {
    let inst = read_lcr(file)?;
    let (norm, trace) = normalize(&inst)?;
    let singles = trace
        .removals
        .iter()
        .filter(|r| matches!(r, Removal::Singleton { .. }))
        .count();
    let header = format!(
        "normalized from {}\nremoved {} singleton and {} rich-list vertices\nkept {}",
        file.display(),
        singles,
        trace.removals.len() - singles,
        trace.kept.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
    );
    emit(output.as_ref(), &with_header(&header, &io::write_lcr(&norm)))
}

fn reduce(args: ReduceArgs) -> Result<()> {
    let data = io::parse_spr(&read(&args.file)?).with_context(|| format!("parsing {}", args.file.display()))?;
    let spr = SprInstance::new(data)?;
    if spr.distance() <= 1 {
        bail!(
            "s-t distance is {}: the only S-path is s-t, so the answer is {}",
            spr.distance(),
            yes_no(spr.p0() == spr.pr())
        );
    }
    let red = compile(&spr)?;
    let header = format!(
        "reduced from {}\nlayer vertices 0..{}\nforbidden vertices {}",
        args.file.display(),
        red.layer_vertices().len(),
        red.forbidden().len()
    );
    let body = if args.threshold {
        let (lcr, witness) = to_threshold(&red);
        let weights: Vec<String> = witness.weights.iter().map(ToString::to_string).collect();
        let header = format!("{header}\nthreshold {}\nweights {}", witness.threshold, weights.join(" "));
        with_header(&header, &io::write_lcr(&lcr))
    } else {
        with_header(&header, &io::write_lcr(red.lcr()))
    };
    emit(args.output.as_ref(), &body)?;
    if let Some(path) = &args.emit_decomposition {
        emit(Some(path), &io::write_decomposition(&emit_path_decomposition(&red)))?;
    }
    if let Some(path) = &args.emit_colormap {
        emit(Some(path), &io::write_colormap(red.color_map()))?;
    }
    Ok(())
}

fn verify(v: VerifyCommand) -> Result<()> {
    match v {
        VerifyCommand::Coloring { file } => {
            let inst = read_lcr(&file)?;
            match inst.check_endpoints() {
                Ok(()) => outln!("VALID"),
                Err(e) => outln!("INVALID {e}"),
            }
        }
        VerifyCommand::Sequence { file, sequence } => {
            let inst = read_lcr(&file)?;
            let steps = io::parse_sequence(&read(&sequence)?)
                .with_context(|| format!("parsing {}", sequence.display()))?;
            if inst.is_valid_sequence(&steps) {
                outln!("VALID {} steps", steps.len());
            } else {
                outln!("INVALID");
            }
        }
        VerifyCommand::Decomposition { file, decomposition } => {
            let g = read_any_graph(&file)?;
            let pd = io::parse_decomposition(&read(&decomposition)?)
                .with_context(|| format!("parsing {}", decomposition.display()))?;
            let check = check_path_decomposition(&g, &pd);
            outln!("{} width {}", if check.valid { "VALID" } else { "INVALID" }, check.width);
        }
        VerifyCommand::Threshold { file } => {
            let g = read_any_graph(&file)?;
            match recognize_threshold(&g) {
                Some(w) => {
                    let weights: Vec<String> = w.weights.iter().map(ToString::to_string).collect();
                    outln!("THRESHOLD\nthreshold {}\nweights {}", w.threshold, weights.join(" "));
                }
                None => outln!("NOT-THRESHOLD"),
            }
        }
    }
    Ok(())
}

fn generate(g: GenCommand) -> Result<()> {
    match g {
        GenCommand::Caterpillar {
            spine_len,
            leaves_min,
            leaves_max,
            colors,
            list_min,
            list_max,
            seed,
            output,
        } => {
            let params = CaterpillarParams {
                spine_len,
                leaves_min,
                leaves_max,
                colors,
                list_min,
                list_max,
                seed,
            };
            let inst = gen_caterpillar(&params)?;
            let header = format!(
                "lcr gen caterpillar\nrng ChaCha8 seed {seed}\nspine_len {spine_len} leaves {leaves_min}..={leaves_max} colors {colors} lists {list_min}..={list_max}"
            );
            emit(output.as_ref(), &with_header(&header, &io::write_lcr(&inst)))
        }
        GenCommand::Layered {
            depth,
            width,
            edge_prob,
            seed,
            output,
        } => {
            let params = LayeredParams {
                depth,
                max_width: width,
                edge_prob,
                seed,
            };
            let data = gen_layered_spr(&params)?;
            let header = format!(
                "lcr gen layered\nrng ChaCha8 seed {seed}\ndepth {depth} width {width} edge_prob {edge_prob}"
            );
            emit(output.as_ref(), &with_header(&header, &io::write_spr(&data)))
        }
    }
}

fn oracle_stats(file: &Path, cap: u64) -> Result<()> {
    let inst = read_lcr(file)?;
    inst.check_endpoints()?;
    let rg = ReconfigurationGraph::build(inst.graph(), inst.lists(), cap)?;
    let (labels, count) = rg.component_labels();
    let source = rg.node_id(inst.source()).expect("proper source is a node");
    let size = labels.iter().filter(|&&l| l == labels[source]).count();
    let path = reachable(&rg, inst.source(), inst.target())?;
    outln!("nodes {}", rg.node_count());
    outln!("edges {}", rg.edge_count());
    outln!("components {count}");
    outln!("source_component {size}");
    match path {
        Some(steps) => outln!("reachable yes distance {}", steps.len()),
        None => outln!("reachable no"),
    }
    Ok(())
}

fn experiments(config: &Path, output: Option<PathBuf>) -> Result<()> {
    let cfg = parse_config(&read(config)?).with_context(|| format!("parsing {}", config.display()))?;
    let rows = run_experiments(&cfg).map_err(anyhow::Error::msg)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(output.as_ref(), &String::from_utf8(buf)?)?;
    let disagreements = rows.iter().filter(|r| !r.agree).count();
    if disagreements > 0 {
        eprintln!("warning: {disagreements} rows disagree across algorithms");
    }
    Ok(())
}
