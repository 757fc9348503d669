//! Line-oriented text formats. Every format ignores blank lines and lines
//! starting with `#`; errors carry the 1-based line number.

mod instances;

pub use instances::{parse_lcr, parse_spr, write_lcr, write_spr};

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::encoding::EncodingGraph;
use crate::graph::{Graph, PathDecomposition};
use crate::instance::{Color, RecolorStep};
use crate::reduction::ColorEntry;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// One significant line split into its keyword and arguments.
struct Record<'a> {
    line: usize,
    key: &'a str,
    args: Vec<&'a str>,
}

impl Record<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, message)
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        if self.args.len() == n {
            Ok(())
        } else {
            Err(self.error(format!("`{}` expects {n} arguments, got {}", self.key, self.args.len())))
        }
    }

    fn num<T: FromStr>(&self, k: usize) -> Result<T, ParseError> {
        let raw = self.args[k];
        raw.parse()
            .map_err(|_| self.error(format!("invalid number `{raw}`")))
    }

    fn nums<T: FromStr>(&self, from: usize) -> Result<Vec<T>, ParseError> {
        (from..self.args.len()).map(|k| self.num(k)).collect()
    }
}

fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut parts = trimmed.split_whitespace();
        let key = parts.next()?;
        Some(Record {
            line: i + 1,
            key,
            args: parts.collect(),
        })
    })
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

/// Reads the `p <kind> ...` header, which must precede everything else.
fn header<'a>(
    recs: &mut impl Iterator<Item = Record<'a>>,
    kind: &str,
    arity: usize,
) -> Result<(usize, Vec<usize>), ParseError> {
    let rec = recs
        .next()
        .ok_or_else(|| ParseError::new(1, format!("missing `p {kind}` header")))?;
    if rec.key != "p" || rec.args.first() != Some(&kind) {
        return Err(rec.error(format!("expected `p {kind}` header")));
    }
    rec.arity(arity + 1)?;
    Ok((rec.line, rec.nums(1)?))
}

fn add_edge_record(g: &mut Graph, rec: &Record) -> Result<(), ParseError> {
    rec.arity(2)?;
    let (u, v) = (rec.num(0)?, rec.num(1)?);
    g.add_edge(u, v).map_err(|e| rec.error(e.to_string()))
}

fn check_edge_count(g: &Graph, declared: usize, line: usize) -> Result<(), ParseError> {
    if g.edge_count() == declared {
        Ok(())
    } else {
        Err(ParseError::new(
            line,
            format!("header declares {declared} edges, found {}", g.edge_count()),
        ))
    }
}

/// `p graph <n> <m>` followed by `e <u> <v>` lines.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut recs = records(text);
    let (line, h) = header(&mut recs, "graph", 2)?;
    let mut g = Graph::new(h[0]);
    for rec in recs {
        match rec.key {
            "e" => add_edge_record(&mut g, &rec)?,
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    check_edge_count(&g, h[1], line)?;
    Ok(g)
}

fn write_edges(out: &mut String, g: &Graph) {
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p graph {} {}\n", g.vertex_count(), g.edge_count());
    write_edges(&mut out, g);
    out
}

/// `r <v> <c>` lines. A leading `YES` line, as printed by `solve`, is skipped.
pub fn parse_sequence(text: &str) -> Result<Vec<RecolorStep>, ParseError> {
    let mut steps = Vec::new();
    for (k, rec) in records(text).enumerate() {
        match rec.key {
            "YES" if k == 0 && rec.args.is_empty() => {}
            "r" => {
                rec.arity(2)?;
                steps.push(RecolorStep::new(rec.num(0)?, Color(rec.num(1)?)));
            }
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    Ok(steps)
}

pub fn write_sequence(steps: &[RecolorStep]) -> String {
    let mut out = String::new();
    for s in steps {
        writeln!(out, "r {} {}", s.vertex, s.color).unwrap();
    }
    out
}

/// One `b <v...>` line per bag.
pub fn parse_decomposition(text: &str) -> Result<PathDecomposition, ParseError> {
    let mut bags = Vec::new();
    for rec in records(text) {
        match rec.key {
            "b" => bags.push(rec.nums(0)?),
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    Ok(PathDecomposition::new(bags))
}

pub fn write_decomposition(pd: &PathDecomposition) -> String {
    let mut out = String::new();
    for bag in &pd.bags {
        out.push('b');
        for v in bag {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `c <color> <layer> <index>` lines.
pub fn parse_colormap(text: &str) -> Result<Vec<ColorEntry>, ParseError> {
    records(text)
        .map(|rec| match rec.key {
            "c" => {
                rec.arity(3)?;
                Ok(ColorEntry {
                    color: Color(rec.num(0)?),
                    layer: rec.num(1)?,
                    index: rec.num(2)?,
                })
            }
            other => Err(rec.error(format!("unknown record `{other}`"))),
        })
        .collect()
}

pub fn write_colormap(entries: &[ColorEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(out, "c {} {} {}", e.color, e.layer, e.index).unwrap();
    }
    out
}

/// Dumps `E_i` as `enode` and `eedge` lines under a `# step i` comment.
pub fn write_trace_step(out: &mut String, step: usize, e: &EncodingGraph) {
    writeln!(out, "# step {step}").unwrap();
    for (id, node) in e.nodes().iter().enumerate() {
        writeln!(
            out,
            "enode {id} col {} ini {} tar {}",
            node.col,
            u8::from(node.ini),
            u8::from(node.tar)
        )
        .unwrap();
    }
    for (x, y) in e.edges() {
        writeln!(out, "eedge {x} {y}").unwrap();
    }
}

/// Prefixes every line of `comment` with `# `.
pub fn with_header(comment: &str, body: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        writeln!(out, "# {line}").unwrap();
    }
    out.push_str(body);
    out
}
