//! File formats: graph JSON, metric CSV, DOT, tower and verdict reports.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boxspace::{BoxSpace, EnvelopePair};
use crate::cover::{CoverData, TowerReport};
use crate::embedding::PointCloud;
use crate::error::{Error, Result};
use crate::graph::{Edge, Girth, LabeledMultigraph};
use crate::group::{QuotientGroup, EXHAUSTIVE_ORDER};
use crate::linalg::DenseMatrix;
use crate::metric::MetricMatrix;
use crate::semidirect::ExtensionTriple;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertex_count: usize,
    #[serde(default)]
    basepoint: usize,
    edges: Vec<[usize; 3]>,
}

pub fn graph_to_json(g: &LabeledMultigraph) -> Value {
    let edges: Vec<[usize; 3]> = g.edges().iter().map(|e| [e.src, e.dst, e.label]).collect();
    json!({
        "vertex_count": g.vertex_count(),
        "basepoint": g.basepoint(),
        "edges": edges,
    })
}

pub fn graph_from_json(v: Value) -> Result<LabeledMultigraph> {
    let raw: GraphJson = serde_json::from_value(v)?;
    let edges = raw
        .edges
        .iter()
        .map(|&[s, d, l]| Edge::new(s, d, l))
        .collect();
    LabeledMultigraph::new(raw.vertex_count, edges, raw.basepoint)
}

pub fn read_graph_json(r: impl Read) -> Result<LabeledMultigraph> {
    graph_from_json(serde_json::from_reader(r)?)
}

pub fn write_json(w: impl Write, v: &impl Serialize) -> Result<()> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    Ok(())
}

/// Header row of point indices, then one row per point.
pub fn write_metric_csv(m: &MetricMatrix, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record((0..m.size()).map(|i| i.to_string()))?;
    for row in m.rows() {
        out.write_record(row.iter().map(|v| v.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_metric_csv(r: impl Read) -> Result<MetricMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let n = rdr.headers()?.len();
    let mut rows = Vec::with_capacity(n);
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad metric entry {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::InvalidMetric(format!(
            "header names {n} points but {} rows follow",
            rows.len()
        )));
    }
    MetricMatrix::from_rows(rows)
}

pub fn graph_to_dot(g: &LabeledMultigraph) -> String {
    let mut s = String::from("digraph G {\n");
    let _ = writeln!(s, "  {} [shape=doublecircle];", g.basepoint());
    for v in 0..g.vertex_count() {
        if v != g.basepoint() {
            let _ = writeln!(s, "  {v};");
        }
    }
    for e in g.edges() {
        let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", e.src, e.dst, e.label);
    }
    s.push_str("}\n");
    s
}

fn girth_json(g: &Girth) -> Value {
    match g.finite() {
        Some(n) => json!(n),
        None => Value::Null,
    }
}

pub fn tower_to_json(t: &TowerReport) -> Value {
    json!({
        "sizes": t.sizes,
        "girths": t.girths.iter().map(girth_json).collect::<Vec<_>>(),
        "diameters": t.diameters,
        "deck_ranks": t.levels.iter().map(|l| l.deck_rank).collect::<Vec<_>>(),
        "truncated": t.truncated,
    })
}

/// Columns `level, size, girth, diameter`; an empty girth is infinite.
pub fn write_tower_csv(t: &TowerReport, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["level", "size", "girth", "diameter"])?;
    for i in 0..t.sizes.len() {
        out.write_record([
            i.to_string(),
            t.sizes[i].to_string(),
            t.girths[i].finite().map(|g| g.to_string()).unwrap_or_default(),
            t.diameters[i].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// One row of wall bits per cover vertex, columns named by base edge.
pub fn write_walls_csv(c: &CoverData, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let m = c.base.edge_count();
    let mut header = vec!["vertex".to_string()];
    header.extend((0..m).map(|e| format!("e{e}")));
    out.write_record(&header)?;
    for (x, row) in c.walls.iter().enumerate() {
        let mut rec = vec![x.to_string()];
        rec.extend((0..m).map(|e| if row[e] { "1" } else { "0" }.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_multiplication_csv(q: &QuotientGroup, w: impl Write) -> Result<()> {
    if q.order() > EXHAUSTIVE_ORDER {
        return Err(Error::GroupTooLarge {
            order: q.order(),
            cap: EXHAUSTIVE_ORDER,
        });
    }
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["*".to_string()];
    header.extend((0..q.order()).map(|v| v.to_string()));
    out.write_record(&header)?;
    for u in 0..q.order() {
        let mut rec = vec![u.to_string()];
        rec.extend((0..q.order()).map(|v| q.multiply(u, v).to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn subgroup_to_json(q: &QuotientGroup, members: &[usize]) -> Value {
    json!({
        "group_order": q.order(),
        "order": members.len(),
        "members": members,
    })
}

pub fn triple_to_json(t: &ExtensionTriple) -> Value {
    json!({
        "gamma": graph_to_json(t.gamma.graph()),
        "h": t.h_elements,
        "g": graph_to_json(t.g_quotient.graph()),
        "pi": t.pi_table,
        "sigma": t.sigma_table,
    })
}

pub fn write_envelope_csv(e: &EnvelopePair, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "rho_minus", "rho_plus"])?;
    for i in 0..e.t.len() {
        out.write_record([
            e.t[i].to_string(),
            e.rho_minus[i].to_string(),
            e.rho_plus[i].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_point_cloud_csv(p: &PointCloud, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["point".to_string()];
    header.extend((0..p.dimension()).map(|i| format!("x{i}")));
    out.write_record(&header)?;
    for (i, row) in p.points.iter().enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_gram_csv(g: &DenseMatrix, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record((0..g.dim()).map(|i| i.to_string()))?;
    for i in 0..g.dim() {
        out.write_record((0..g.dim()).map(|j| format!("{:.12}", g.get(i, j))))?;
    }
    out.flush()?;
    Ok(())
}

/// Box-space description pointing at one metric file per component.
pub fn boxspace_to_json(b: &BoxSpace, metric_files: &[String]) -> Value {
    let comps: Vec<Value> = (0..b.component_count())
        .map(|k| {
            json!({
                "size": b.component(k).size(),
                "basepoint": b.basepoint(k),
                "diameter": b.component(k).diameter(),
                "metric": metric_files.get(k),
            })
        })
        .collect();
    json!({ "components": comps, "gaps": b.gaps() })
}
