//! Finitely generated cones, polars, and the pointedness / bounded-base test.

use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use super::{cone_generators, ConeGenerators, HalfSpace, Polyhedron, VRep};
use crate::error::{check_dim, Error, Result};
use crate::exactlp::{dot, is_zero, neg, scale, zeros, Rational, RationalVector};

/// A polyhedral cone carrying both generators and constraints
/// `{w : a·w ≤ 0 (a ∈ ineqs), e·w = 0 (e ∈ eqs)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralCone {
    dim: usize,
    generators: ConeGenerators,
    ineqs: Vec<RationalVector>,
    eqs: Vec<RationalVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarSign {
    /// `{e : e·g ≤ 0}`
    Negative,
    /// `{e : e·g ≥ 0}`
    Positive,
}

impl PolyhedralCone {
    pub fn from_generators(dim: usize, rays: Vec<RationalVector>, lines: Vec<RationalVector>) -> Result<Self> {
        for g in rays.iter().chain(&lines) {
            check_dim(dim, g.len())?;
        }
        let rays: Vec<_> = rays.into_iter().filter(|r| !is_zero(r)).collect();
        let lines: Vec<_> = lines.into_iter().filter(|l| !is_zero(l)).collect();
        // The polar's generators are the constraint normals.
        let polar = cone_generators(dim, &rays, &lines);
        let generators = canonical_generators(dim, rays, lines);
        Ok(Self { dim, generators, ineqs: polar.rays, eqs: polar.lines })
    }

    pub fn from_constraints(dim: usize, ineqs: Vec<RationalVector>, eqs: Vec<RationalVector>) -> Result<Self> {
        for a in ineqs.iter().chain(&eqs) {
            check_dim(dim, a.len())?;
        }
        let g = cone_generators(dim, &ineqs, &eqs);
        Self::from_generators(dim, g.rays, g.lines)
    }

    pub fn whole(dim: usize) -> Self {
        Self::from_generators(dim, Vec::new(), (0..dim).map(|i| crate::exactlp::unit(dim, i)).collect())
            .expect("unit vectors have the right width")
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(dim, Vec::new(), Vec::new()).expect("no generators")
    }

    /// `ℝⁿ₊`.
    pub fn orthant(dim: usize) -> Self {
        Self::from_generators(dim, (0..dim).map(|i| crate::exactlp::unit(dim, i)).collect(), Vec::new())
            .expect("unit vectors have the right width")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme rays (modulo lineality) in canonical form.
    pub fn rays(&self) -> &[RationalVector] {
        &self.generators.rays
    }

    /// Lineality basis in reduced echelon form.
    pub fn lines(&self) -> &[RationalVector] {
        &self.generators.lines
    }

    pub fn generators(&self) -> &ConeGenerators {
        &self.generators
    }

    /// Normals `a` with `a·w ≤ 0` on the cone.
    pub fn inequalities(&self) -> &[RationalVector] {
        &self.ineqs
    }

    /// Normals `e` with `e·w = 0` on the cone.
    pub fn equalities(&self) -> &[RationalVector] {
        &self.eqs
    }

    pub fn contains(&self, w: &[Rational]) -> Result<bool> {
        check_dim(self.dim, w.len())?;
        Ok(self.ineqs.iter().all(|a| !dot(a, w).is_positive()) && self.eqs.iter().all(|e| dot(e, w).is_zero()))
    }

    /// Strict interior membership (never true for a lower-dimensional cone).
    pub fn contains_interior(&self, w: &[Rational]) -> Result<bool> {
        check_dim(self.dim, w.len())?;
        Ok(self.eqs.is_empty() && self.ineqs.iter().all(|a| dot(a, w).is_negative()))
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.generators.lines.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.rays.is_empty() && self.generators.lines.is_empty()
    }

    pub fn contains_cone(&self, other: &PolyhedralCone) -> bool {
        other.rays().iter().all(|r| self.contains(r).unwrap_or(false))
            && other
                .lines()
                .iter()
                .all(|l| self.contains(l).unwrap_or(false) && self.contains(&neg(l)).unwrap_or(false))
    }

    pub fn same_cone(&self, other: &PolyhedralCone) -> bool {
        self.dim == other.dim && self.generators == other.generators
    }

    /// The cone as a polyhedron with apex 0.
    pub fn to_polyhedron(&self) -> Polyhedron {
        let mut rows: Vec<HalfSpace> = self.ineqs.iter().map(|a| HalfSpace::le(a.clone(), Rational::zero())).collect();
        rows.extend(self.eqs.iter().map(|e| HalfSpace::eq(e.clone(), Rational::zero())));
        let v = VRep {
            vertices: alloc::vec![zeros(self.dim)],
            rays: self.generators.rays.clone(),
            lines: self.generators.lines.clone(),
        };
        Polyhedron::from_v(self.dim, v).expect("generators validated").with_rows_kept(rows)
    }
}

fn canonical_generators(dim: usize, rays: Vec<RationalVector>, lines: Vec<RationalVector>) -> ConeGenerators {
    // Recompute extreme rays so redundant generators disappear.
    let polar = cone_generators(dim, &rays, &lines);
    let g = cone_generators(dim, &polar.rays, &polar.lines);
    let v = VRep { vertices: alloc::vec![zeros(dim)], rays: g.rays, lines: g.lines }.canonical(dim);
    ConeGenerators { rays: v.rays, lines: v.lines }
}

pub fn polar_cone(k: &PolyhedralCone, sign: PolarSign) -> PolyhedralCone {
    let flip = |v: &[RationalVector]| -> Vec<RationalVector> { v.iter().map(|x| neg(x)).collect() };
    let (rays, lines) = match sign {
        PolarSign::Negative => (k.ineqs.clone(), k.eqs.clone()),
        PolarSign::Positive => (flip(&k.ineqs), k.eqs.clone()),
    };
    PolyhedralCone::from_generators(k.dim, rays, lines).expect("normals have the cone's width")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeStructure {
    pub lineality_dim: usize,
    pub is_pointed: bool,
    pub has_bounded_base: bool,
    /// Convex hull of the rays scaled onto `functional · w = 1`.
    pub base: Option<Polyhedron>,
    /// Strictly positive on every nonzero element when the cone is pointed.
    pub functional: Option<RationalVector>,
}

pub fn cone_structure(k: &PolyhedralCone) -> ConeStructure {
    let lineality_dim = k.lines().len();
    let is_pointed = lineality_dim == 0;
    if !is_pointed || k.is_trivial() {
        return ConeStructure { lineality_dim, is_pointed, has_bounded_base: false, base: None, functional: None };
    }
    let dual = polar_cone(k, PolarSign::Positive);
    let phi = dual.rays().iter().fold(zeros(k.dim), |acc, r| crate::exactlp::add(&acc, r));
    debug_assert!(k.rays().iter().all(|r| dot(&phi, r).is_positive()));
    let vertices = k.rays().iter().map(|r| scale(r, &dot(&phi, r).recip())).collect();
    let base = Polyhedron::from_v(k.dim, VRep { vertices, ..VRep::default() }).expect("widths agree").canonical();
    ConeStructure { lineality_dim, is_pointed, has_bounded_base: true, base: Some(base), functional: Some(phi) }
}

/// An interior point of a full-dimensional cone, namely the sum of its
/// generators (lines contribute nothing). Fails for lower-dimensional cones.
pub fn interior_witness(k: &PolyhedralCone) -> Result<RationalVector> {
    let w = k.rays().iter().fold(zeros(k.dim), |acc, r| crate::exactlp::add(&acc, r));
    if k.contains_interior(&w)? {
        return Ok(w);
    }
    // Full space: every point is interior.
    if k.is_full_dimensional() && k.inequalities().is_empty() {
        return Ok(w);
    }
    Err(Error::NotFullDimensional)
}

/// `⟨y*, r⟩ ≥ 1` on every ray and `= 0` on every line, if such `y*` exists.
pub fn positive_functional(k: &PolyhedralCone) -> Result<Option<RationalVector>> {
    use crate::exactlp::{lp_solve, LinearSystem, Sense};
    let mut s = LinearSystem::new(k.dim);
    for r in k.rays() {
        s.push_le(neg(r), -Rational::one());
    }
    for l in k.lines() {
        s.push_eq(l.clone(), Rational::zero());
    }
    Ok(lp_solve(&zeros(k.dim), &s, Sense::Min)?.optimal().map(|sol| sol.point.clone()))
}

impl Polyhedron {
    /// Attaches an H-representation known to describe the same set.
    pub(crate) fn with_rows_kept(mut self, rows: Vec<HalfSpace>) -> Polyhedron {
        self.h = Some(rows);
        self
    }
}
