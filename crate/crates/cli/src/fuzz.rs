//! Random instances and the falsification harness.
//!
//! Instances are kept as small-integer data so that a failing case can be
//! shrunk entry by entry and written back out as a problem file.

use std::collections::BTreeMap;

use process_duality_core::certify::{minimal_frontier, ClauseId, ClauseVerdict, Prepared, Verdict};
use process_duality_core::exactlp::{integer, neg, RationalVector};
use process_duality_core::model::{AffineVectorProgram, FiniteProgram, OrderCone, SampledPoint, VectorProgram};
use process_duality_core::polyhedra::{
    AffineMap, BoundaryRestrictedPolyhedron, FacetRestriction, HalfSpace, PolyhedralCone, Polyhedron, Region,
};
use process_duality_core::process::{halfspace_process, Separator};
use process_duality_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::format::show_vector;

/// Half-width of the box every generated `Ω` lives in.
const BOX: i64 = 2;
/// Most extreme rays generated for a random cone.
const MAX_GENERATORS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl std::str::FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [x, y, z] if x > 0 && y > 0 && z > 0 => Ok(Dims { x, y, z }),
            _ => Err("expected three positive integers x,y,z".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutant {
    /// Negates `z*` before building each half-space process.
    SignFlip,
}

type Row = (Vec<i64>, i64);

/// Affine program data. `Ω` is the box `[-BOX, BOX]^x` cut by `cuts`, with
/// an optional restriction of one box facet to the part meeting `retained`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub x: usize,
    pub cuts: Vec<Row>,
    pub restriction: Option<(usize, Vec<Row>)>,
    pub f: Vec<Vec<i64>>,
    pub cf: Vec<i64>,
    pub g: Vec<Vec<i64>>,
    pub cg: Vec<i64>,
    pub y_rays: Vec<Vec<i64>>,
    pub y_lines: Vec<Vec<i64>>,
    pub z_rays: Vec<Vec<i64>>,
    pub z_lines: Vec<Vec<i64>>,
}

fn ints(v: &[i64]) -> RationalVector {
    v.iter().map(|&a| integer(a)).collect()
}

fn box_rows(n: usize) -> Vec<HalfSpace> {
    (0..n)
        .flat_map(|i| {
            let e: Vec<i64> = (0..n).map(|j| i64::from(i == j)).collect();
            [HalfSpace::le(ints(&e), integer(BOX)), HalfSpace::le(neg(&ints(&e)), integer(BOX))]
        })
        .collect()
}

fn rows(list: &[Row]) -> Vec<HalfSpace> {
    list.iter().map(|(a, b)| HalfSpace::le(ints(a), integer(*b))).collect()
}

fn cone(dim: usize, rays: &[Vec<i64>], lines: &[Vec<i64>]) -> Option<OrderCone> {
    OrderCone::from_generators(dim, rays.iter().map(|r| ints(r)).collect(), lines.iter().map(|r| ints(r)).collect())
        .ok()
}

impl Instance {
    /// `None` when the data no longer describes a valid program.
    pub fn build(&self) -> Option<AffineVectorProgram> {
        let n = self.x;
        let mut h = box_rows(n);
        h.extend(rows(&self.cuts));
        let closure = Polyhedron::from_h(n, h.clone()).ok()?;
        let omega = match &self.restriction {
            None => Region::Closed(closure),
            Some((facet, extra)) => {
                let mut r = h.clone();
                r.push(HalfSpace::eq(h[*facet].normal.clone(), h[*facet].offset.clone()));
                r.extend(rows(extra));
                let retained = Polyhedron::from_h(n, r).ok()?;
                let restriction = FacetRestriction { facet: *facet, retained };
                Region::Restricted(BoundaryRestrictedPolyhedron::new(closure, vec![restriction]).ok()?)
            }
        };
        let map = |m: &[Vec<i64>], c: &[i64]| AffineMap::new(n, m.iter().map(|r| ints(r)).collect(), ints(c)).ok();
        AffineVectorProgram::new(
            omega,
            map(&self.f, &self.cf)?,
            map(&self.g, &self.cg)?,
            cone(self.f.len(), &self.y_rays, &self.y_lines)?,
            cone(self.g.len(), &self.z_rays, &self.z_lines)?,
        )
        .ok()
    }

    pub fn program(&self) -> Option<VectorProgram> {
        self.build().map(VectorProgram::Affine)
    }

    /// Smaller variants, most aggressive first.
    fn shrink_candidates(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        if self.restriction.is_some() {
            out.push(Instance { restriction: None, ..self.clone() });
        }
        for i in 0..self.cuts.len() {
            let mut c = self.clone();
            c.cuts.remove(i);
            out.push(c);
        }
        for (which, list) in [(0, &self.y_rays), (1, &self.y_lines), (2, &self.z_rays), (3, &self.z_lines)] {
            for i in 0..list.len() {
                let mut c = self.clone();
                [&mut c.y_rays, &mut c.y_lines, &mut c.z_rays, &mut c.z_lines][which].remove(i);
                out.push(c);
            }
        }
        let count = self.f.iter().chain(&self.g).map(Vec::len).sum::<usize>() + self.cf.len();
        for k in 0..count {
            let cur = self.entry(k);
            if cur == 0 {
                continue;
            }
            for next in [0, cur - cur.signum()] {
                let mut c = self.clone();
                c.set_entry(k, next);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn entry(&self, k: usize) -> i64 {
        let flat: Vec<i64> = self.f.iter().chain(&self.g).flatten().chain(&self.cf).copied().collect();
        flat[k]
    }

    fn set_entry(&mut self, mut k: usize, value: i64) {
        for r in self.f.iter_mut().chain(self.g.iter_mut()) {
            if k < r.len() {
                r[k] = value;
                return;
            }
            k -= r.len();
        }
        self.cf[k] = value;
    }
}

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_vec(rng: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.random_range(lo..=hi)).collect()
}

fn random_nonzero(rng: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> Vec<i64> {
    loop {
        let v = random_vec(rng, dim, lo, hi);
        if v.iter().any(|&a| a != 0) {
            return v;
        }
    }
}

/// Generators of a full-dimensional cone other than the whole space: the
/// orthant a third of the time, otherwise random rays and occasionally a
/// line.
pub fn random_order_generators(rng: &mut impl Rng, dim: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    if rng.random_range(0..3) == 0 {
        let rays = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        return (rays, Vec::new());
    }
    loop {
        let lines: Vec<Vec<i64>> =
            if dim >= 2 && rng.random_range(0..5) == 0 { vec![random_nonzero(rng, dim, -2, 2)] } else { Vec::new() };
        let k = rng.random_range(dim - lines.len()..=MAX_GENERATORS);
        let rays: Vec<Vec<i64>> = (0..k).map(|_| random_nonzero(rng, dim, -2, 2)).collect();
        if cone(dim, &rays, &lines).is_some() {
            return (rays, lines);
        }
    }
}

/// Integer point in the interior of the cone: the sum of its rays.
fn interior_point(rays: &[Vec<i64>], dim: usize) -> Vec<i64> {
    (0..dim).map(|i| rays.iter().map(|r| r[i]).sum()).collect()
}

/// Random affine instance with a Slater point at the origin.
pub fn random_instance(rng: &mut impl Rng, dims: Option<Dims>) -> Instance {
    let Dims { x, y, z } = dims.unwrap_or_else(|| Dims {
        x: rng.random_range(1..=3),
        y: rng.random_range(1..=3),
        z: rng.random_range(1..=3),
    });
    let cuts = (0..rng.random_range(0..=2)).map(|_| (random_nonzero(rng, x, -2, 2), rng.random_range(1..=3))).collect();
    let restriction = (rng.random_range(0..4) == 0).then(|| {
        let facet = rng.random_range(0..2 * x);
        (facet, vec![(random_nonzero(rng, x, -2, 2), rng.random_range(-1..=2))])
    });
    let (y_rays, y_lines) = random_order_generators(rng, y);
    let (z_rays, z_lines) = random_order_generators(rng, z);
    let cg = interior_point(&z_rays, z).into_iter().map(|a| -a).collect();
    Instance {
        x,
        cuts,
        restriction,
        f: (0..y).map(|_| random_vec(rng, x, -2, 2)).collect(),
        cf: random_vec(rng, y, -2, 2),
        g: (0..z).map(|_| random_vec(rng, x, -2, 2)).collect(),
        cg,
        y_rays,
        y_lines,
        z_rays,
        z_lines,
    }
}

/// Scalar instance: `Y = ℝ`, `Y₊ = ℝ₊`, `Z₊` the orthant, `g(0) = −1`.
pub fn random_scalar_instance(rng: &mut impl Rng) -> Instance {
    let x = rng.random_range(1..=3);
    let z = rng.random_range(1..=3);
    Instance {
        x,
        cuts: (0..rng.random_range(0..=2)).map(|_| (random_nonzero(rng, x, -2, 2), rng.random_range(1..=3))).collect(),
        restriction: None,
        f: vec![random_vec(rng, x, -3, 3)],
        cf: vec![0],
        g: (0..z).map(|_| random_vec(rng, x, -2, 2)).collect(),
        cg: vec![-1; z],
        y_rays: vec![vec![1]],
        y_lines: Vec::new(),
        z_rays: (0..z).map(|i| (0..z).map(|j| i64::from(i == j)).collect()).collect(),
        z_lines: Vec::new(),
    }
}

/// Discrete or set-valued program with at most six points and dims ≤ 3.
pub fn random_finite(rng: &mut impl Rng) -> FiniteProgram {
    let y = rng.random_range(1..=3);
    let z = rng.random_range(1..=3);
    let single = rng.random_bool(0.5);
    let (yr, yl) = random_order_generators(rng, y);
    let (zr, zl) = random_order_generators(rng, z);
    let y_plus = cone(y, &yr, &yl).expect("generated cone is valid");
    let z_plus = cone(z, &zr, &zl).expect("generated cone is valid");
    let n = rng.random_range(1..=6);
    let values = |rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64| -> Vec<RationalVector> {
        let k = if single { 1 } else { rng.random_range(1..=2) };
        (0..k).map(|_| ints(&random_vec(rng, dim, lo, hi))).collect()
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.random());
    let points: Vec<SampledPoint> = (0..n)
        .map(|i| SampledPoint {
            id: format!("x{i}"),
            f_values: values(&mut local, y, -2, 2),
            g_values: values(&mut local, z, -2, 1),
        })
        .collect();
    if single {
        let triples = points.into_iter().map(|p| (p.id, p.f_values[0].clone(), p.g_values[0].clone())).collect();
        FiniteProgram::discrete(triples, y_plus, z_plus).expect("valid discrete program")
    } else {
        FiniteProgram::set_valued(points, y_plus, z_plus).expect("valid set-valued program")
    }
}

/// Random cone in dimension ≤ `max_dim`: up to six rays, sometimes a line,
/// sometimes nothing at all.
pub fn random_cone(rng: &mut impl Rng, max_dim: usize) -> PolyhedralCone {
    let d = rng.random_range(1..=max_dim);
    let rays = (0..rng.random_range(0..=MAX_GENERATORS)).map(|_| ints(&random_nonzero(rng, d, -3, 3))).collect();
    let lines = if rng.random_range(0..4) == 0 { vec![ints(&random_nonzero(rng, d, -3, 3))] } else { Vec::new() };
    PolyhedralCone::from_generators(d, rays, lines).expect("nonzero generators of matching dimension")
}

fn sign_flip(h: &Separator) -> process_duality_core::Result<PolyhedralCone> {
    halfspace_process(&Separator::new(neg(&h.z_star), h.y_star.clone()))
}

/// Outcome of certifying every frontier point of one instance.
#[derive(Clone, Debug, Default)]
pub struct InstanceReport {
    pub points: usize,
    pub verdicts: BTreeMap<(ClauseId, Verdict), usize>,
    /// First violation: the point and the violated clauses.
    pub violation: Option<(RationalVector, Vec<ClauseVerdict>)>,
    /// Error raised by the pipeline, treated as a failure.
    pub error: Option<String>,
    /// Instance data did not build into a program.
    pub invalid: bool,
    /// Some image needs a restriction nested inside another one, which the
    /// region type does not represent.
    pub unsupported: bool,
}

impl InstanceReport {
    pub fn failed(&self) -> bool {
        self.violation.is_some() || self.error.is_some()
    }
}

pub const FRONTIER_LIMIT: usize = 16;

pub fn check_program(p: &VectorProgram, mutant: Option<Mutant>) -> InstanceReport {
    let mut report = InstanceReport::default();
    let front = match minimal_frontier(p, FRONTIER_LIMIT) {
        Ok(f) => f,
        Err(Error::EmptyFeasible) => return report,
        Err(Error::NestedRestriction) => return InstanceReport { unsupported: true, ..report },
        Err(e) => {
            report.error = Some(format!("frontier: {e}"));
            return report;
        }
    };
    if front.points.is_empty() {
        return report;
    }
    let prepared = match Prepared::new(p) {
        Ok(prepared) => prepared,
        Err(Error::NestedRestriction) => return InstanceReport { unsupported: true, ..report },
        Err(e) => {
            report.error = Some(format!("prepare: {e}"));
            return report;
        }
    };
    for point in front.points {
        let result = match mutant {
            None => prepared.certify_with(&point.y, &halfspace_process),
            Some(Mutant::SignFlip) => prepared.certify_with(&point.y, &sign_flip),
        };
        let cert = match result {
            Ok(c) => c,
            Err(Error::NestedRestriction) => return InstanceReport { unsupported: true, ..report },
            Err(e) => {
                report.error = Some(format!("certify at {}: {e}", show_vector(&point.y)));
                return report;
            }
        };
        report.points += 1;
        for c in &cert.clauses {
            *report.verdicts.entry((c.id, c.verdict)).or_default() += 1;
        }
        if report.violation.is_none() && !cert.is_clean() {
            report.violation = Some((point.y.clone(), cert.violations().cloned().collect()));
        }
    }
    report
}

pub fn check_instance(inst: &Instance, mutant: Option<Mutant>) -> InstanceReport {
    match inst.program() {
        Some(p) => check_program(&p, mutant),
        None => InstanceReport { invalid: true, ..InstanceReport::default() },
    }
}

/// Greedy shrink: accept the first smaller variant that still fails, until
/// none does.
pub fn shrink(mut inst: Instance, mutant: Option<Mutant>) -> Instance {
    'outer: for _ in 0..500 {
        for c in inst.shrink_candidates() {
            if check_instance(&c, mutant).failed() {
                inst = c;
                continue 'outer;
            }
        }
        break;
    }
    inst
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub dims: Option<Dims>,
    pub mutant: Option<Mutant>,
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub index: usize,
    pub original: Instance,
    pub shrunk: Instance,
    pub report: InstanceReport,
}

#[derive(Clone, Debug, Default)]
pub struct FuzzSummary {
    pub instances: usize,
    /// Instances skipped as outside the supported region class.
    pub unsupported: usize,
    pub points: usize,
    pub verdicts: BTreeMap<(ClauseId, Verdict), usize>,
    pub failure: Option<Failure>,
}

/// Runs `count` instances in parallel; instance `i` is drawn from stream `i`
/// of the seed, so results do not depend on scheduling. The failure with the
/// lowest index is shrunk and returned.
pub fn run(config: &FuzzConfig) -> FuzzSummary {
    let reports: Vec<(Instance, InstanceReport)> = (0..config.count)
        .into_par_iter()
        .map(|i| {
            let inst = random_instance(&mut instance_rng(config.seed, i as u64), config.dims);
            let r = check_instance(&inst, config.mutant);
            (inst, r)
        })
        .collect();
    let mut summary = FuzzSummary { instances: config.count, ..FuzzSummary::default() };
    for (i, (inst, r)) in reports.into_iter().enumerate() {
        summary.points += r.points;
        summary.unsupported += usize::from(r.unsupported);
        for (k, v) in &r.verdicts {
            *summary.verdicts.entry(*k).or_default() += v;
        }
        if summary.failure.is_none() && r.failed() {
            let shrunk = shrink(inst.clone(), config.mutant);
            let report = check_instance(&shrunk, config.mutant);
            summary.failure = Some(Failure { index: i, original: inst, shrunk, report });
        }
    }
    summary
}
