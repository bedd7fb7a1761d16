//! Separator cones and Lagrange processes.
//!
//! The separator cone at `y0` is the positive polar of
//! `cone(cl Graph(W_{Y₊}) − (0, y0))`. Each nonzero separator `h = (z*, y*)`
//! gives the half-space process `{(z, y) : ⟨z*, z⟩ − ⟨y*, y⟩ ≤ 0}` and the
//! Lagrange process is their intersection, which is already attained on the
//! generators of the separator cone.

use alloc::vec::Vec;
use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlp::{dot, is_zero, neg, sub, Rational, RationalVector};
use crate::model::SlaterPoint;
use crate::polyhedra::{polar_cone, HalfSpace, PolarSign, PolyhedralCone, Polyhedron, Relation};

/// `h(z, y) = ⟨z*, z⟩ + ⟨y*, y⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Separator {
    pub z_star: RationalVector,
    pub y_star: RationalVector,
}

impl Separator {
    pub fn new(z_star: RationalVector, y_star: RationalVector) -> Self {
        Self { z_star, y_star }
    }

    fn split(w: &[Rational], z_dim: usize) -> Self {
        Self { z_star: w[..z_dim].to_vec(), y_star: w[z_dim..].to_vec() }
    }

    pub fn eval(&self, z: &[Rational], y: &[Rational]) -> Rational {
        dot(&self.z_star, z) + dot(&self.y_star, y)
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.z_star) && is_zero(&self.y_star)
    }

    /// `(z*, y*)` as one vector of `Z × Y`.
    pub fn joined(&self) -> RationalVector {
        self.z_star.iter().chain(&self.y_star).cloned().collect()
    }

    /// `z* / y*` for a scalar objective with `y* > 0`.
    pub fn normalized_multiplier(&self) -> Option<RationalVector> {
        match self.y_star.as_slice() {
            [y] if y.is_positive() => Some(self.z_star.iter().map(|z| z / y).collect()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorCone {
    pub generators: Vec<Separator>,
    pub y0: RationalVector,
    pub empty: bool,
    z_dim: usize,
    y_dim: usize,
}

impl SeparatorCone {
    pub fn z_dim(&self) -> usize {
        self.z_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    /// A separator cone given directly by generators (used for injected
    /// or hand-built data).
    pub fn from_generators(z_dim: usize, y_dim: usize, y0: RationalVector, generators: Vec<Separator>) -> Result<Self> {
        check_dim(y_dim, y0.len())?;
        for h in &generators {
            check_dim(z_dim, h.z_star.len())?;
            check_dim(y_dim, h.y_star.len())?;
        }
        let generators: Vec<Separator> = generators.into_iter().filter(|h| !h.is_zero()).collect();
        Ok(Self { empty: generators.is_empty(), generators, y0, z_dim, y_dim })
    }
}

/// Generators of the positive polar of `cone(cl graph − (0, y0))`, where
/// `graph` lives in `Z × Y` with `Z` first.
pub fn separator_cone(graph: &Polyhedron, z_dim: usize, y0: &[Rational]) -> Result<SeparatorCone> {
    let dim = graph.dim();
    check_dim(dim, z_dim + y0.len())?;
    let apex: RationalVector = core::iter::repeat_n(Rational::zero(), z_dim).chain(y0.iter().cloned()).collect();
    let v = graph.generators();
    let mut rays: Vec<RationalVector> = v.vertices.iter().map(|p| sub(p, &apex)).filter(|r| !is_zero(r)).collect();
    rays.extend(v.rays.iter().cloned());
    let k = PolyhedralCone::from_generators(dim, rays, v.lines.clone())?;
    let polar = polar_cone(&k, PolarSign::Positive);
    let mut generators: Vec<Separator> = polar.rays().iter().map(|r| Separator::split(r, z_dim)).collect();
    for l in polar.lines() {
        generators.push(Separator::split(l, z_dim));
        generators.push(Separator::split(&neg(l), z_dim));
    }
    Ok(SeparatorCone { empty: generators.is_empty(), generators, y0: y0.to_vec(), z_dim, y_dim: y0.len() })
}

/// Whether every generator has `y* ≠ 0`. Needs a Slater witness.
pub fn check_nonvertical(s: &SeparatorCone, slater: Option<&SlaterPoint>) -> Result<bool> {
    if slater.is_none() {
        return Err(Error::SlaterMissing);
    }
    Ok(s.generators.iter().all(|h| !is_zero(&h.y_star)))
}

/// `{(z, y) : ⟨z*, z⟩ − ⟨y*, y⟩ ≤ 0}`.
pub fn halfspace_process(h: &Separator) -> Result<PolyhedralCone> {
    if h.is_zero() {
        return Err(Error::Invalid("separator is zero".into()));
    }
    let normal: RationalVector = h.z_star.iter().cloned().chain(neg(&h.y_star)).collect();
    PolyhedralCone::from_constraints(normal.len(), alloc::vec![normal], Vec::new())
}

/// `{y : ⟨y*, y⟩ = ⟨z*, z⟩}`.
pub fn fiber_bar(h: &Separator, z: &[Rational]) -> Result<Polyhedron> {
    check_dim(h.z_star.len(), z.len())?;
    if is_zero(&h.y_star) {
        return Err(Error::DegenerateFunctional);
    }
    Polyhedron::from_h(h.y_star.len(), alloc::vec![HalfSpace::eq(h.y_star.clone(), dot(&h.z_star, z))])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProcessSource {
    Separators(SeparatorCone),
    /// `S` is empty and the graph is all of `Z × Y`.
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeProcess {
    pub graph: PolyhedralCone,
    pub source: ProcessSource,
    z_dim: usize,
}

impl LagrangeProcess {
    pub fn z_dim(&self) -> usize {
        self.z_dim
    }

    pub fn y_dim(&self) -> usize {
        self.graph.dim() - self.z_dim
    }

    pub fn is_whole(&self) -> bool {
        matches!(self.source, ProcessSource::Whole)
    }

    /// Rows of the graph as half-spaces in `Z × Y`.
    pub fn graph_rows(&self) -> Vec<HalfSpace> {
        let mut rows: Vec<HalfSpace> =
            self.graph.inequalities().iter().map(|a| HalfSpace::le(a.clone(), Rational::zero())).collect();
        rows.extend(self.graph.equalities().iter().map(|e| HalfSpace::eq(e.clone(), Rational::zero())));
        rows
    }
}

pub fn lagrange_process(s: &SeparatorCone) -> Result<LagrangeProcess> {
    lagrange_process_with(s, &halfspace_process)
}

/// As [`lagrange_process`], with the half-space construction supplied by
/// the caller.
pub fn lagrange_process_with(
    s: &SeparatorCone,
    halfspace: &dyn Fn(&Separator) -> Result<PolyhedralCone>,
) -> Result<LagrangeProcess> {
    let dim = s.z_dim + s.y_dim;
    if s.empty {
        return Ok(LagrangeProcess { graph: PolyhedralCone::whole(dim), source: ProcessSource::Whole, z_dim: s.z_dim });
    }
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for h in &s.generators {
        let c = halfspace(h)?;
        check_dim(dim, c.dim())?;
        ineqs.extend(c.inequalities().iter().cloned());
        eqs.extend(c.equalities().iter().cloned());
    }
    Ok(LagrangeProcess {
        graph: PolyhedralCone::from_constraints(dim, ineqs, eqs)?,
        source: ProcessSource::Separators(s.clone()),
        z_dim: s.z_dim,
    })
}

/// `L(z) = {y : (z, y) ∈ Graph L}`.
pub fn process_eval(l: &LagrangeProcess, z: &[Rational]) -> Result<Polyhedron> {
    check_dim(l.z_dim, z.len())?;
    let rows = l
        .graph_rows()
        .into_iter()
        .map(|r| {
            let offset = -dot(&r.normal[..l.z_dim], z);
            let normal = r.normal[l.z_dim..].to_vec();
            match r.relation {
                Relation::Le => HalfSpace::le(normal, offset),
                Relation::Eq => HalfSpace::eq(normal, offset),
            }
        })
        .collect();
    Ok(Polyhedron::from_h(l.y_dim(), rows)?.canonical())
}
