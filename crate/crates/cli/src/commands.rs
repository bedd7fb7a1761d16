//! Subcommand bodies. Each returns the text to print and an exit status;
//! anything that goes wrong with the input surfaces as an `Err`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use process_duality_core::certify::{
    certify_multiplier, efficiency_status, frontier_of, minimal_frontier, Certificate, ClauseId, Prepared, Verdict,
};
use process_duality_core::exactlp::{zeros, Rational, RationalVector};
use process_duality_core::model::VectorProgram;
use process_duality_core::process::{lagrange_process, process_eval, separator_cone};
use process_duality_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::format::{emit, load, parse_vector, show_vector, ProblemFile};
use crate::fuzz::{self, Dims, FuzzConfig, Mutant};
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Clean = 0,
    Violated = 1,
    InputError = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Primal,
    Dual,
    Both,
}

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub exit: Exit,
}

impl Output {
    fn new(stdout: String, exit: Exit) -> Self {
        Output { stdout, stderr: String::new(), exit }
    }
}

fn read(path: &Path) -> Result<(ProblemFile, VectorProgram)> {
    load(path).with_context(|| format!("reading {}", path.display()))
}

pub fn parse_point(s: &str, dim: usize) -> Result<RationalVector> {
    let v = parse_vector(s).map_err(|e| anyhow!("--y0: {e}"))?;
    if v.len() != dim {
        bail!("--y0: expected {dim} entries, found {}", v.len());
    }
    Ok(v)
}

fn certify_error(y0: &[Rational], e: Error) -> anyhow::Error {
    match e {
        Error::NotInW0 => anyhow!("y0 = {} is not in W(0)", show_vector(y0)),
        e => anyhow!(e),
    }
}

fn certify_at(p: &VectorProgram, y0: &[Rational]) -> Result<Certificate> {
    certify_multiplier(p, y0).map_err(|e| certify_error(y0, e))
}

fn violations_summary(certs: &[Certificate]) -> String {
    let mut s = String::new();
    for c in certs {
        for v in c.violations() {
            s.push_str(&format!("counterexample: y0 = {} violates {} {}\n", show_vector(&c.y0), v.id, v.detail));
        }
    }
    s
}

pub fn certify(path: &Path, y0: Option<&str>, frontier_limit: Option<usize>, fmt: OutputFormat) -> Result<Output> {
    let (file, p) = read(path)?;
    let (certs, frontier) = match (y0, frontier_limit) {
        (Some(y), _) => (vec![certify_at(&p, &parse_point(y, p.y_dim())?)?], None),
        (None, Some(limit)) => {
            let f = minimal_frontier(&p, limit)?;
            let certs = if f.points.is_empty() {
                Vec::new()
            } else {
                let prepared = Prepared::new(&p)?;
                f.points
                    .par_iter()
                    .map(|q| prepared.certify(&q.y).map_err(|e| certify_error(&q.y, e)))
                    .collect::<Result<_>>()?
            };
            (certs, Some(f))
        }
        (None, None) => bail!("either --y0 or --frontier is required"),
    };
    let exit = if certs.iter().all(Certificate::is_clean) { Exit::Clean } else { Exit::Violated };
    let stdout = match fmt {
        OutputFormat::Json => {
            let mut body = json!({ "certificates": certs.iter().map(report::certificate).collect::<Vec<_>>() });
            if let Some(f) = &frontier {
                body["frontier"] = report::frontier(f);
            }
            report::to_text(&report::envelope(&file, "certify", body))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            if let Some(f) = &frontier {
                s.push_str(&report::frontier_text(f));
            }
            for c in &certs {
                s.push_str(&report::certificate_text(c));
            }
            s.push_str(if exit == Exit::Clean { "all applicable clauses verified\n" } else { "VIOLATED\n" });
            s
        }
    };
    Ok(Output { stdout, stderr: violations_summary(&certs), exit })
}

/// Separators and graph at `y0`, plus the fibers `L(z)` for each `at`.
pub fn process(path: &Path, y0: &str, at: &[String], fmt: OutputFormat) -> Result<Output> {
    let (file, p) = read(path)?;
    let y0 = parse_point(y0, p.y_dim())?;
    let cp = p.convex_form()?;
    if !cp.image_set(&zeros(p.z_dim()))?.contains(&y0)? {
        bail!("y0 = {} is not in W(0)", show_vector(&y0));
    }
    let graph = cp.upper_image_graph()?.closure()?;
    let s = separator_cone(&graph, p.z_dim(), &y0)?;
    let l = lagrange_process(&s)?;
    let mut fibers = Vec::new();
    for z in at {
        let z = parse_vector(z).map_err(|e| anyhow!("--at: {e}"))?;
        if z.len() != p.z_dim() {
            bail!("--at: expected {} entries, found {}", p.z_dim(), z.len());
        }
        let fiber = process_eval(&l, &z)?;
        fibers.push((z, fiber));
    }
    let stdout = match fmt {
        OutputFormat::Json => {
            let body = json!({
                "y0": report::vector(&y0),
                "separators": report::separators(&s),
                "process": report::process(&l),
                "fibers": fibers.iter().map(|(z, f)| json!({ "z": report::vector(z), "value": report::polyhedron(f) })).collect::<Vec<_>>(),
            });
            report::to_text(&report::envelope(&file, "process", body))
        }
        OutputFormat::Text => {
            let mut out = report::process_text(&s, &l);
            for (z, f) in &fibers {
                out.push_str(&report::fiber_text(z, f));
            }
            out
        }
    };
    Ok(Output::new(stdout, Exit::Clean))
}

pub fn classify(path: &Path, y0: &str, side: Side, fmt: OutputFormat) -> Result<Output> {
    let (file, p) = read(path)?;
    let y0 = parse_point(y0, p.y_dim())?;
    let mut body = json!({ "y0": report::vector(&y0) });
    let mut text = String::new();
    let mut exit = Exit::Clean;
    if side != Side::Dual {
        let w0 = p.image_set(&zeros(p.z_dim()))?;
        let s = efficiency_status(&w0, &y0, p.y_plus()).map_err(|e| match e {
            Error::NotMember => anyhow!("y0 = {} is not in W(0)", show_vector(&y0)),
            e => anyhow!(e),
        })?;
        body["primal"] = report::status(&s);
        text.push_str(&report::status_text("P", &s));
    }
    if side != Side::Primal {
        let c = certify_at(&p, &y0)?;
        body["dual"] = c.status_d.as_ref().map_or(Value::Null, report::status);
        match &c.status_d {
            Some(s) => text.push_str(&report::status_text("D", s)),
            None => text.push_str("D: y0 outside the dual image\n"),
        }
        if side == Side::Both {
            let transfer: serde_json::Map<String, Value> =
                [ClauseId::C6Pos, ClauseId::C6Ghe, ClauseId::C6He, ClauseId::C7Se]
                    .into_iter()
                    .map(|id| (id.as_str().to_string(), Value::String(c.verdict(id).as_str().to_string())))
                    .collect();
            if transfer.values().any(|v| v == Verdict::Violated.as_str()) {
                exit = Exit::Violated;
            }
            for (k, v) in &transfer {
                text.push_str(&format!("  {k:<7} {}\n", v.as_str().unwrap_or_default()));
            }
            body["transfer"] = Value::Object(transfer);
        }
    }
    let stdout = match fmt {
        OutputFormat::Json => report::to_text(&report::envelope(&file, "classify", body)),
        OutputFormat::Text => text,
    };
    Ok(Output::new(stdout, exit))
}

/// Minimal vertices of `W(0)`, or of the dual image at `dual_at`.
pub fn frontier(path: &Path, limit: usize, dual_at: Option<&str>, fmt: OutputFormat) -> Result<Output> {
    let (file, p) = read(path)?;
    let f = match dual_at {
        None => minimal_frontier(&p, limit)?,
        Some(y) => {
            let c = certify_at(&p, &parse_point(y, p.y_dim())?)?;
            frontier_of(&c.dual.region, p.y_plus(), limit)?
        }
    };
    let stdout = match fmt {
        OutputFormat::Json => {
            let mut body = report::frontier(&f);
            body["set"] = Value::String(if dual_at.is_some() { "dual" } else { "primal" }.into());
            report::to_text(&report::envelope(&file, "frontier", body))
        }
        OutputFormat::Text => report::frontier_text(&f),
    };
    Ok(Output::new(stdout, Exit::Clean))
}

pub fn fuzz(
    seed: u64,
    count: usize,
    dims: Option<Dims>,
    mutant: Option<Mutant>,
    out_dir: Option<&Path>,
    fmt: OutputFormat,
) -> Result<Output> {
    let summary = fuzz::run(&FuzzConfig { seed, count, dims, mutant });
    let mut verdicts = serde_json::Map::new();
    for ((id, v), n) in &summary.verdicts {
        let entry = verdicts.entry(id.as_str().to_string()).or_insert_with(|| json!({}));
        entry[v.as_str()] = json!(n);
    }
    let mut body = json!({
        "seed": seed,
        "count": count,
        "dims": dims.map(|d| json!([d.x, d.y, d.z])),
        "mutant": mutant.map(|_| "sign-flip"),
        "certified_points": summary.points,
        "unsupported_instances": summary.unsupported,
        "verdicts": verdicts,
        "failure": Value::Null,
    });
    let mut stderr = String::new();
    if let Some(f) = &summary.failure {
        let problem = f.shrunk.program().map(|p| ProblemFile::from_program(&p));
        let (y0, violated) = match &f.report.violation {
            Some((y, v)) => (
                Some(report::vector(y)),
                v.iter().map(|c| json!({ "id": c.id.as_str(), "detail": c.detail })).collect(),
            ),
            None => (None, Vec::new()),
        };
        body["failure"] = json!({
            "index": f.index,
            "y0": y0,
            "violated": violated,
            "error": f.report.error,
            "problem": problem.as_ref().map(|p| serde_json::to_value(p).expect("serializable")),
        });
        if let (Some(dir), Some(p)) = (out_dir, &problem) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let target = dir.join(format!("counterexample-{seed}-{}.json", f.index));
            std::fs::write(&target, emit(p)).with_context(|| format!("writing {}", target.display()))?;
            stderr.push_str(&format!("counterexample written to {}\n", target.display()));
        }
        stderr.push_str(&format!("instance {} failed after shrinking\n", f.index));
    }
    let exit = if summary.failure.is_some() { Exit::Violated } else { Exit::Clean };
    let stdout = match fmt {
        OutputFormat::Json => report::to_text(&body),
        OutputFormat::Text => format!(
            "{} instances ({} unsupported), {} certified points, {}\n",
            count,
            summary.unsupported,
            summary.points,
            if exit == Exit::Clean { "no violations" } else { "FAILED" }
        ),
    };
    Ok(Output { stdout, stderr, exit })
}
