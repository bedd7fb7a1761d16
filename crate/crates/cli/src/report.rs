//! Machine-readable reports. Objects are `serde_json::Value` maps, whose keys
//! serialize in sorted order, so identical inputs give identical bytes.

use process_duality_core::certify::{Certificate, EfficiencyStatus, Frontier, GheSource, ProperStatus};
use process_duality_core::exactlp::Rational;
use process_duality_core::model::SlaterPoint;
use process_duality_core::polyhedra::{HalfSpace, Polyhedron, Region, Relation};
use process_duality_core::process::{LagrangeProcess, Separator, SeparatorCone};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format::{emit, format_rational, show_rational, show_row, show_vector, ProblemFile};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the canonical problem text.
pub fn instance_hash(file: &ProblemFile) -> String {
    hex::encode(Sha256::digest(emit(file).as_bytes()))
}

/// Adds tool identification and the instance hash to a report body.
pub fn envelope(file: &ProblemFile, command: &str, body: Value) -> Value {
    json!({
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "instance_hash": instance_hash(file),
        "command": command,
        "result": body,
    })
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn vectors(vs: &[Vec<Rational>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

fn row(r: &HalfSpace) -> Value {
    json!({
        "normal": vector(&r.normal),
        "offset": q(&r.offset),
        "relation": match r.relation { Relation::Le => "le", Relation::Eq => "eq" },
    })
}

/// Both representations, canonical.
pub fn polyhedron(p: &Polyhedron) -> Value {
    let c = p.canonical();
    let v = c.generators();
    json!({
        "h_rep": c.rows().iter().map(row).collect::<Vec<_>>(),
        "v_rep": { "vertices": vectors(&v.vertices), "rays": vectors(&v.rays), "lines": vectors(&v.lines) },
    })
}

pub fn region(r: &Region) -> Value {
    match r {
        Region::Closed(p) => json!({ "kind": "closed", "closure": polyhedron(p) }),
        Region::Restricted(b) => json!({
            "kind": "restricted",
            "outer": polyhedron(b.closure()),
            "closure": r.closure().map(|c| polyhedron(&c)).unwrap_or(Value::Null),
            "facet_restrictions": b.restrictions().iter().map(|f| json!({
                "facet": row(&b.facet_row(f.facet)),
                "retained": polyhedron(&f.retained),
            })).collect::<Vec<_>>(),
        }),
        Region::Finite { points, .. } => json!({ "kind": "finite", "points": vectors(points) }),
    }
}

fn separator(h: &Separator) -> Value {
    json!({ "z_star": vector(&h.z_star), "y_star": vector(&h.y_star), "joined": vector(&h.joined()) })
}

pub fn separators(s: &SeparatorCone) -> Value {
    json!({ "empty": s.empty, "generators": s.generators.iter().map(separator).collect::<Vec<_>>() })
}

pub fn process(l: &LagrangeProcess) -> Value {
    json!({
        "whole": l.is_whole(),
        "graph": polyhedron(&l.graph.to_polyhedron()),
    })
}

fn proper(p: &ProperStatus) -> Value {
    json!({
        "pos": p.pos,
        "ghe": p.ghe,
        "he": p.he,
        "se": p.se,
        "witnesses": {
            "pos_functional": p.pos_witness.as_deref().map(vector),
            "ghe_source": p.ghe_source.map(|s| match s { GheSource::Positive => "pos", GheSource::Dilation => "dilation" }),
            "he_eta": p.he_eta.as_ref().map(q),
            "se_rho": p.se_rho.as_ref().map(q),
        },
    })
}

/// Proper notions are `"not-applicable"` when the order cone is not pointed.
pub fn status(s: &EfficiencyStatus) -> Value {
    let mut v = json!({ "minimal": s.minimal, "weak_minimal": s.weak_minimal });
    let extra = match &s.proper {
        Some(p) => proper(p),
        None => json!({
            "pos": "not-applicable", "ghe": "not-applicable", "he": "not-applicable", "se": "not-applicable",
        }),
    };
    if let (Value::Object(a), Value::Object(b)) = (&mut v, extra) {
        a.extend(b);
    }
    v
}

fn slater(s: &Option<SlaterPoint>) -> Value {
    match s {
        None => Value::Null,
        Some(SlaterPoint::Point(x)) => json!({ "x": vector(x) }),
        Some(SlaterPoint::Sample { id, g_value }) => {
            json!({ "id": id, "g_value": vector(g_value) })
        }
    }
}

pub fn certificate(c: &Certificate) -> Value {
    let structure = &c.graph_structure;
    json!({
        "y0": vector(&c.y0),
        "separators": separators(&c.separators),
        "process": process(&c.process),
        "graph_structure": {
            "lineality_dim": structure.lineality_dim,
            "pointed": structure.is_pointed,
            "bounded_base": structure.has_bounded_base,
        },
        "w0": region(&c.w0),
        "dual_image": { "exact": c.dual.exact, "region": region(&c.dual.region) },
        "slater": slater(&c.slater),
        "status_p0": status(&c.status_p0),
        "status_d": c.status_d.as_ref().map(status),
        "status_sampled": c.status_sampled.as_ref().map(status),
        "multipliers": c.multipliers.as_ref().map(|m| vectors(m)),
        "positive_separator": c.positive_separator.as_ref().map(separator),
        "clauses": c.clauses.iter().map(|k| json!({
            "id": k.id.as_str(),
            "verdict": k.verdict.as_str(),
            "detail": k.detail,
        })).collect::<Vec<_>>(),
        "clean": c.is_clean(),
    })
}

pub fn frontier(f: &Frontier) -> Value {
    json!({
        "truncated": f.truncated,
        "points": f.points.iter().map(|p| json!({ "y": vector(&p.y), "status": status(&p.status) })).collect::<Vec<_>>(),
    })
}

/// `z1 … zp, y1 … ym` (or `z`, `y` in dimension one).
pub fn variable_names(z_dim: usize, y_dim: usize) -> Vec<String> {
    let names = |s: &str, n: usize| -> Vec<String> {
        if n == 1 {
            vec![s.to_string()]
        } else {
            (1..=n).map(|i| format!("{s}{i}")).collect()
        }
    };
    let mut v = names("z", z_dim);
    v.extend(names("y", y_dim));
    v
}

fn flag(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

fn status_line(s: &EfficiencyStatus) -> String {
    format!(
        "minimal={} weak_minimal={} pos={} ghe={} he={} se={}",
        s.minimal,
        s.weak_minimal,
        flag(s.pos()),
        flag(s.ghe()),
        flag(s.he()),
        flag(s.se())
    )
}

pub fn process_text(s: &SeparatorCone, l: &LagrangeProcess) -> String {
    let names = variable_names(s.z_dim(), s.y_dim());
    let mut out = String::new();
    out.push_str(&format!("separator generators: {}\n", s.generators.len()));
    for h in &s.generators {
        out.push_str(&format!("  {}\n", show_vector(&h.joined())));
    }
    if l.is_whole() {
        out.push_str("graph = Z x Y\n");
        return out;
    }
    let graph = l.graph.to_polyhedron().canonical();
    out.push_str("graph H-rep:\n");
    for r in graph.rows() {
        out.push_str(&format!("  {}\n", show_row(&r, &names)));
    }
    let v = graph.generators();
    out.push_str("graph V-rep:\n");
    for r in &v.rays {
        out.push_str(&format!("  ray  {}\n", show_vector(r)));
    }
    for r in &v.lines {
        out.push_str(&format!("  line {}\n", show_vector(r)));
    }
    out
}

pub fn fiber_text(z: &[Rational], fiber: &Polyhedron) -> String {
    let names = variable_names(0, fiber.dim());
    let rows: Vec<String> = fiber.canonical().rows().iter().map(|r| show_row(r, &names)).collect();
    let set = if rows.is_empty() { "Y".to_string() } else { rows.join(", ") };
    let z = if z.len() == 1 { show_rational(&z[0]) } else { show_vector(z) };
    format!("L({z}) = {{{set}}}\n")
}

pub fn certificate_text(c: &Certificate) -> String {
    let mut out = format!("y0 = {}\n", show_vector(&c.y0));
    out.push_str(&process_text(&c.separators, &c.process));
    out.push_str(&format!(
        "graph structure: lineality {} pointed {} bounded base {}\n",
        c.graph_structure.lineality_dim, c.graph_structure.is_pointed, c.graph_structure.has_bounded_base
    ));
    out.push_str(&format!("dual image exact: {}\n", c.dual.exact));
    if let Ok(m) = c.dual.region.closure() {
        let names = variable_names(0, c.y0.len());
        let rows: Vec<String> = m.canonical().rows().iter().map(|r| show_row(r, &names)).collect();
        out.push_str(&format!("dual image closure: {{{}}}\n", rows.join(", ")));
    }
    out.push_str(&format!("slater point: {}\n", if c.slater.is_some() { "found" } else { "none" }));
    out.push_str(&format!("P(0): {}\n", status_line(&c.status_p0)));
    match &c.status_d {
        Some(s) => out.push_str(&format!("D:    {}\n", status_line(s))),
        None => out.push_str("D:    y0 outside the dual image\n"),
    }
    if let Some(s) = &c.status_sampled {
        out.push_str(&format!("sampled: {}\n", status_line(s)));
    }
    if let Some(m) = &c.multipliers {
        let parts: Vec<String> = m.iter().map(|v| show_vector(v)).collect();
        out.push_str(&format!("multipliers: {}\n", parts.join(" ")));
    }
    for k in &c.clauses {
        let detail = if k.detail.is_empty() { String::new() } else { format!("  ({})", k.detail) };
        out.push_str(&format!("  {:<9} {}{}\n", k.id.as_str(), k.verdict.as_str(), detail));
    }
    out
}

pub fn status_text(label: &str, s: &EfficiencyStatus) -> String {
    format!("{label}: {}\n", status_line(s))
}

pub fn frontier_text(f: &Frontier) -> String {
    let mut out = format!("minimal vertices: {}{}\n", f.points.len(), if f.truncated { " (truncated)" } else { "" });
    for p in &f.points {
        out.push_str(&format!("  {}  {}\n", show_vector(&p.y), status_line(&p.status)));
    }
    out
}
