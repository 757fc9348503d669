use std::fmt::Write as _;

use super::{add_edge_record, check_edge_count, header, last_line, records, write_edges, ParseError, Record};
use crate::graph::{Graph, Vertex};
use crate::instance::{Color, Coloring, LcrInstance};
use crate::spr::SprData;

/// Fills `slots[v]` once per vertex.
fn assign<T>(slots: &mut [Option<T>], rec: &Record, v: Vertex, value: T) -> Result<(), ParseError> {
    let n = slots.len();
    let slot = slots
        .get_mut(v)
        .ok_or_else(|| rec.error(format!("vertex {v} out of range for {n} vertices")))?;
    if slot.is_some() {
        return Err(rec.error(format!("duplicate `{}` record for vertex {v}", rec.key)));
    }
    *slot = Some(value);
    Ok(())
}

fn complete<T>(slots: Vec<Option<T>>, what: &str, line: usize) -> Result<Vec<T>, ParseError> {
    slots
        .into_iter()
        .enumerate()
        .map(|(v, s)| s.ok_or_else(|| ParseError::new(line, format!("missing {what} for vertex {v}"))))
        .collect()
}

/// `p lcr <n> <m> <k>`, then `e <u> <v>`, `l <v> <c...>`, `s <v> <c>` and
/// `t <v> <c>` records. Colors must be below `k`.
pub fn parse_lcr(text: &str) -> Result<LcrInstance, ParseError> {
    let mut recs = records(text);
    let (line, h) = header(&mut recs, "lcr", 3)?;
    let (n, m, k) = (h[0], h[1], h[2]);
    let mut g = Graph::new(n);
    let mut lists = vec![None; n];
    let mut source = vec![None; n];
    let mut target = vec![None; n];
    let color = |rec: &Record, c: u32| {
        if (c as usize) < k {
            Ok(Color(c))
        } else {
            Err(rec.error(format!("color {c} not below k = {k}")))
        }
    };
    for rec in recs {
        match rec.key {
            "e" => add_edge_record(&mut g, &rec)?,
            "l" => {
                if rec.args.len() < 2 {
                    return Err(rec.error("`l` expects a vertex and at least one color"));
                }
                let list = rec
                    .nums::<u32>(1)?
                    .into_iter()
                    .map(|c| color(&rec, c))
                    .collect::<Result<Vec<_>, _>>()?;
                assign(&mut lists, &rec, rec.num(0)?, list)?;
            }
            "s" | "t" => {
                rec.arity(2)?;
                let c = color(&rec, rec.num(1)?)?;
                let slots = if rec.key == "s" { &mut source } else { &mut target };
                assign(slots, &rec, rec.num(0)?, c)?;
            }
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    let end = last_line(text);
    check_edge_count(&g, m, line)?;
    let lists = complete(lists, "list", end)?;
    let source = Coloring(complete(source, "source color", end)?);
    let target = Coloring(complete(target, "target color", end)?);
    LcrInstance::new(g, lists, source, target).map_err(|e| ParseError::new(end, e.to_string()))
}

pub fn write_lcr(inst: &LcrInstance) -> String {
    let g = inst.graph();
    let endpoint_max = inst
        .source()
        .as_slice()
        .iter()
        .chain(inst.target().as_slice())
        .map(|c| c.0 + 1)
        .max()
        .unwrap_or(0);
    let k = inst.color_universe().max(endpoint_max);
    let mut out = format!("p lcr {} {} {k}\n", g.vertex_count(), g.edge_count());
    write_edges(&mut out, g);
    for v in g.vertices() {
        out.push_str(&format!("l {v}"));
        for c in inst.list(v) {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    for v in g.vertices() {
        writeln!(out, "s {v} {}", inst.source().get(v)).unwrap();
    }
    for v in g.vertices() {
        writeln!(out, "t {v} {}", inst.target().get(v)).unwrap();
    }
    out
}

/// `p spr <n> <m>`, then `e <u> <v>`, `src <s>`, `dst <t>`, `p0 <v...>` and
/// `pr <v...>` records.
pub fn parse_spr(text: &str) -> Result<SprData, ParseError> {
    let mut recs = records(text);
    let (line, h) = header(&mut recs, "spr", 2)?;
    let mut g = Graph::new(h[0]);
    let (mut s, mut t, mut p0, mut pr) = (None, None, None, None);
    for rec in recs {
        match rec.key {
            "e" => add_edge_record(&mut g, &rec)?,
            "src" | "dst" => {
                rec.arity(1)?;
                let slot = if rec.key == "src" { &mut s } else { &mut t };
                once(slot, &rec)?;
                *slot = Some(rec.num::<Vertex>(0)?);
            }
            "p0" | "pr" => {
                let slot = if rec.key == "p0" { &mut p0 } else { &mut pr };
                once(slot, &rec)?;
                *slot = Some(rec.nums::<Vertex>(0)?);
            }
            other => return Err(rec.error(format!("unknown record `{other}`"))),
        }
    }
    check_edge_count(&g, h[1], line)?;
    let end = last_line(text);
    let missing = |what: &str| ParseError::new(end, format!("missing `{what}` record"));
    Ok(SprData {
        graph: g,
        s: s.ok_or_else(|| missing("src"))?,
        t: t.ok_or_else(|| missing("dst"))?,
        p0: p0.ok_or_else(|| missing("p0"))?,
        pr: pr.ok_or_else(|| missing("pr"))?,
    })
}

fn once<T>(slot: &Option<T>, rec: &Record) -> Result<(), ParseError> {
    match slot {
        Some(_) => Err(rec.error(format!("duplicate `{}` record", rec.key))),
        None => Ok(()),
    }
}

pub fn write_spr(data: &SprData) -> String {
    let g = &data.graph;
    let mut out = format!("p spr {} {}\n", g.vertex_count(), g.edge_count());
    write_edges(&mut out, g);
    writeln!(out, "src {}\ndst {}", data.s, data.t).unwrap();
    for (key, path) in [("p0", &data.p0), ("pr", &data.pr)] {
        out.push_str(key);
        for v in path {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}
