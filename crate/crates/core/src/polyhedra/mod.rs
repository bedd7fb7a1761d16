//! Polyhedra, polyhedral cones and boundary-restricted polyhedra.
//!
//! A [`Polyhedron`] may carry an H-representation, a V-representation, or
//! both. [`Polyhedron::dd_convert`] fills in the missing one with the double
//! description method in [`dd`].

pub mod cone;
pub mod dd;
pub mod region;

use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlp::{
    add, dot, is_zero, mat_vec, normalize_direction, normalize_line, rref, scale, sub, zeros, LinearSystem, Rational,
    RationalMatrix, RationalVector,
};

pub use cone::{cone_structure, polar_cone, ConeStructure, PolarSign, PolyhedralCone};
pub use dd::{cone_generators, ConeGenerators};
pub use region::{
    intersect_empty, BoundaryRestrictedPolyhedron, FacetRestriction, Intersection, Region, StrictHalfspace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Le,
    Eq,
}

/// `normal · x ≤ offset` or `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: RationalVector,
    pub offset: Rational,
    pub relation: Relation,
}

impl HalfSpace {
    pub fn le(normal: RationalVector, offset: Rational) -> Self {
        Self { normal, offset, relation: Relation::Le }
    }

    pub fn eq(normal: RationalVector, offset: Rational) -> Self {
        Self { normal, offset, relation: Relation::Eq }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = dot(&self.normal, x);
        match self.relation {
            Relation::Le => v <= self.offset,
            Relation::Eq => v == self.offset,
        }
    }

    /// The row is tight (on its hyperplane) at `x`.
    pub fn is_tight(&self, x: &[Rational]) -> bool {
        dot(&self.normal, x) == self.offset
    }

    fn holds_for_direction(&self, d: &[Rational]) -> bool {
        let v = dot(&self.normal, d);
        match self.relation {
            Relation::Le => !v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }
}

impl PartialOrd for HalfSpace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HalfSpace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.relation, &self.normal, &self.offset).cmp(&(other.relation, &other.normal, &other.offset))
    }
}

/// `conv(vertices) + cone(rays) + span(lines)`; no vertices means empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<RationalVector>,
    pub rays: Vec<RationalVector>,
    pub lines: Vec<RationalVector>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    /// Canonical form: lines in reduced echelon form, rays and vertices
    /// reduced modulo the lines, directions scaled to a unit leading entry,
    /// duplicates removed, everything sorted.
    pub fn canonical(&self, dim: usize) -> VRep {
        let (lines, pivots) = rref(self.lines.iter().map(|l| normalize_line(l)).collect(), dim);
        let reduce = |v: &RationalVector| -> RationalVector {
            let mut v = v.clone();
            for (l, &p) in lines.iter().zip(&pivots) {
                if !v[p].is_zero() {
                    let f = v[p].clone();
                    v = sub(&v, &scale(l, &f));
                }
            }
            v
        };
        let mut rays: Vec<RationalVector> =
            self.rays.iter().map(|r| normalize_direction(&reduce(r))).filter(|r| !is_zero(r)).collect();
        rays.sort();
        rays.dedup();
        let mut vertices: Vec<RationalVector> = self.vertices.iter().map(reduce).collect();
        vertices.sort();
        vertices.dedup();
        VRep { vertices, rays, lines }
    }
}

/// Canonical H-representation: equalities in reduced echelon form,
/// inequalities reduced modulo the equalities and scaled to a unit leading
/// coefficient, trivial rows dropped, rows sorted. An infeasible system
/// collapses to the single row `0·x ≤ -1`.
pub fn canonical_h(dim: usize, rows: &[HalfSpace]) -> Vec<HalfSpace> {
    let infeasible = || alloc::vec![HalfSpace::le(zeros(dim), -Rational::one())];
    let aug: RationalMatrix = rows
        .iter()
        .filter(|r| r.relation == Relation::Eq)
        .map(|r| {
            let mut v = normalize_line(&r.normal);
            let s = first_nonzero(&r.normal).map(|x| x.recip()).unwrap_or_else(Rational::one);
            v.push(&r.offset * s);
            v
        })
        .collect();
    let (eqs, pivots) = rref(aug, dim);
    if eqs.iter().any(|e| is_zero(&e[..dim])) {
        return infeasible();
    }
    let mut out: Vec<HalfSpace> = eqs.iter().map(|e| HalfSpace::eq(e[..dim].to_vec(), e[dim].clone())).collect();
    let mut ineqs = Vec::new();
    for r in rows.iter().filter(|r| r.relation == Relation::Le) {
        let mut normal = r.normal.clone();
        let mut offset = r.offset.clone();
        for (e, &p) in eqs.iter().zip(&pivots) {
            if !normal[p].is_zero() {
                let f = normal[p].clone();
                normal = sub(&normal, &scale(&e[..dim], &f));
                offset -= &f * &e[dim];
            }
        }
        match first_nonzero(&normal) {
            None => {
                if offset.is_negative() {
                    return infeasible();
                }
            }
            Some(lead) => {
                let s = lead.abs().recip();
                ineqs.push(HalfSpace::le(scale(&normal, &s), offset * s));
            }
        }
    }
    ineqs.sort();
    ineqs.dedup();
    out.extend(ineqs);
    out
}

fn first_nonzero(v: &[Rational]) -> Option<&Rational> {
    v.iter().find(|x| !x.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    HtoV,
    VtoH,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    h: Option<Vec<HalfSpace>>,
    v: Option<VRep>,
}

impl Polyhedron {
    pub fn from_h(dim: usize, rows: Vec<HalfSpace>) -> Result<Self> {
        for r in &rows {
            check_dim(dim, r.normal.len())?;
        }
        Ok(Self { dim, h: Some(rows), v: None })
    }

    pub fn from_v(dim: usize, v: VRep) -> Result<Self> {
        for g in v.vertices.iter().chain(&v.rays).chain(&v.lines) {
            check_dim(dim, g.len())?;
        }
        if v.rays.iter().chain(&v.lines).any(|g| is_zero(g)) {
            return Err(Error::Invalid("zero ray or line in V-representation".into()));
        }
        Ok(Self { dim, h: None, v: Some(v) })
    }

    pub fn from_system(system: &LinearSystem) -> Result<Self> {
        if !system.strict.is_empty() {
            return Err(Error::Invalid("strict rows do not define a closed polyhedron".into()));
        }
        let rows = system
            .le
            .iter()
            .map(|r| HalfSpace::le(r.coeffs.clone(), r.rhs.clone()))
            .chain(system.eq.iter().map(|r| HalfSpace::eq(r.coeffs.clone(), r.rhs.clone())))
            .collect();
        Self::from_h(system.dim(), rows)
    }

    pub fn universe(dim: usize) -> Self {
        Self {
            dim,
            h: Some(Vec::new()),
            v: Some(VRep {
                vertices: alloc::vec![zeros(dim)],
                rays: Vec::new(),
                lines: (0..dim).map(|i| crate::exactlp::unit(dim, i)).collect(),
            }),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, h: Some(alloc::vec![HalfSpace::le(zeros(dim), -Rational::one())]), v: Some(VRep::default()) }
    }

    pub fn point(p: RationalVector) -> Self {
        let dim = p.len();
        Self { dim, h: None, v: Some(VRep { vertices: alloc::vec![p], ..VRep::default() }) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_rep(&self) -> Option<&[HalfSpace]> {
        self.h.as_deref()
    }

    pub fn v_rep(&self) -> Option<&VRep> {
        self.v.as_ref()
    }

    /// H-representation, converting if necessary. Rows are returned in their
    /// stored order when present.
    pub fn rows(&self) -> Vec<HalfSpace> {
        match &self.h {
            Some(h) => h.clone(),
            None => v_to_h(self.dim, self.v.as_ref().expect("polyhedron has a representation")),
        }
    }

    pub fn generators(&self) -> VRep {
        match &self.v {
            Some(v) => v.clone(),
            None => h_to_v(self.dim, self.h.as_ref().expect("polyhedron has a representation")),
        }
    }

    /// Converts from the representation named by `direction`'s source; the
    /// result carries both. An empty set is signalled by a V-representation
    /// without vertices.
    pub fn dd_convert(&self, direction: Direction) -> Result<Polyhedron> {
        match direction {
            Direction::HtoV => {
                let h = self.h.as_ref().ok_or_else(|| Error::Invalid("no H-representation to convert".into()))?;
                Ok(Polyhedron { dim: self.dim, h: Some(h.clone()), v: Some(h_to_v(self.dim, h)) })
            }
            Direction::VtoH => {
                let v = self.v.as_ref().ok_or_else(|| Error::Invalid("no V-representation to convert".into()))?;
                Ok(Polyhedron { dim: self.dim, h: Some(v_to_h(self.dim, v)), v: Some(v.clone()) })
            }
        }
    }

    /// Both representations, keeping any stored one unchanged.
    pub fn complete(&self) -> Polyhedron {
        match (&self.h, &self.v) {
            (Some(_), Some(_)) => self.clone(),
            (Some(_), None) => self.dd_convert(Direction::HtoV).expect("has H"),
            (None, Some(_)) => self.dd_convert(Direction::VtoH).expect("has V"),
            (None, None) => unreachable!("polyhedron without representation"),
        }
    }

    /// Minimal canonical form of both representations.
    pub fn canonical(&self) -> Polyhedron {
        let v = self.generators();
        if v.is_empty() {
            return Polyhedron::empty(self.dim);
        }
        let h = canonical_h(self.dim, &v_to_h(self.dim, &v));
        let v = h_to_v(self.dim, &h).canonical(self.dim);
        Polyhedron { dim: self.dim, h: Some(h), v: Some(v) }
    }

    pub fn is_empty(&self) -> bool {
        match &self.v {
            Some(v) => v.is_empty(),
            None => {
                crate::exactlp::strict_feasible(&self.system()).expect("dimensions checked at construction").is_none()
            }
        }
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(self.rows().iter().all(|r| r.holds(x)))
    }

    /// Whether `d` is a recession direction.
    pub fn recedes(&self, d: &[Rational]) -> bool {
        self.rows().iter().all(|r| r.holds_for_direction(d))
    }

    /// Every generator of `other` lies in `self` (so `other ⊆ self`).
    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        let rows = self.rows();
        let g = other.generators();
        g.vertices.iter().all(|v| rows.iter().all(|r| r.holds(v)))
            && g.rays.iter().all(|d| rows.iter().all(|r| r.holds_for_direction(d)))
            && g.lines.iter().all(|l| rows.iter().all(|r| dot(&r.normal, l).is_zero()))
    }

    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.dim == other.dim && self.contains_polyhedron(other) && other.contains_polyhedron(self)
    }

    /// Stored representations describe the same set.
    pub fn is_consistent(&self) -> bool {
        match (&self.h, &self.v) {
            (Some(h), Some(v)) => {
                let from_h = Polyhedron::from_h(self.dim, h.clone()).expect("valid");
                let from_v = Polyhedron::from_v(self.dim, v.clone()).expect("valid");
                from_h.same_set(&from_v)
            }
            _ => true,
        }
    }

    pub fn system(&self) -> LinearSystem {
        let mut s = LinearSystem::new(self.dim);
        for r in self.rows() {
            match r.relation {
                Relation::Le => s.push_le(r.normal, r.offset),
                Relation::Eq => s.push_eq(r.normal, r.offset),
            }
        }
        s
    }

    /// Intersection by concatenating H-rows (`self` rows first).
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim(self.dim, other.dim)?;
        let mut rows = self.rows();
        rows.extend(other.rows());
        Polyhedron::from_h(self.dim, rows)
    }

    pub fn with_rows(&self, extra: Vec<HalfSpace>) -> Result<Polyhedron> {
        let mut rows = self.rows();
        rows.extend(extra);
        Polyhedron::from_h(self.dim, rows)
    }

    /// Orthogonal projection onto the coordinates in `keep` (in that order),
    /// computed by projecting generators.
    pub fn project(&self, keep: &[usize]) -> Result<Polyhedron> {
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.dim) {
            return Err(Error::Invalid(alloc::format!("coordinate {bad} out of range")));
        }
        let v = self.generators();
        let pick = |g: &RationalVector| -> RationalVector { keep.iter().map(|&k| g[k].clone()).collect() };
        let img = VRep {
            vertices: v.vertices.iter().map(pick).collect(),
            rays: v.rays.iter().map(pick).filter(|r| !is_zero(r)).collect(),
            lines: v.lines.iter().map(pick).filter(|l| !is_zero(l)).collect(),
        };
        Ok(Polyhedron::from_v(keep.len(), img)?.canonical())
    }

    /// Image under `map` plus the cone generated by `extra`.
    pub fn image(&self, map: &AffineMap, extra: &ConeGenerators) -> Result<Polyhedron> {
        check_dim(self.dim, map.in_dim())?;
        let v = self.generators();
        let mut img = VRep {
            vertices: v.vertices.iter().map(|x| map.apply(x)).collect(),
            rays: v.rays.iter().map(|r| map.apply_linear(r)).collect(),
            lines: v.lines.iter().map(|l| map.apply_linear(l)).collect(),
        };
        img.rays.extend(extra.rays.iter().cloned());
        img.lines.extend(extra.lines.iter().cloned());
        img.rays.retain(|r| !is_zero(r));
        img.lines.retain(|l| !is_zero(l));
        Ok(Polyhedron::from_v(map.out_dim(), img)?.canonical())
    }
}

/// `x ↦ matrix·x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    in_dim: usize,
    pub matrix: RationalMatrix,
    pub offset: RationalVector,
}

impl AffineMap {
    pub fn new(in_dim: usize, matrix: RationalMatrix, offset: RationalVector) -> Result<Self> {
        check_dim(offset.len(), matrix.len())?;
        for row in &matrix {
            check_dim(in_dim, row.len())?;
        }
        Ok(Self { in_dim, matrix, offset })
    }

    pub fn identity(n: usize) -> Self {
        Self { in_dim: n, matrix: (0..n).map(|i| crate::exactlp::unit(n, i)).collect(), offset: zeros(n) }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, x: &[Rational]) -> RationalVector {
        add(&mat_vec(&self.matrix, x), &self.offset)
    }

    pub fn apply_linear(&self, x: &[Rational]) -> RationalVector {
        mat_vec(&self.matrix, x)
    }

    /// `x ↦ (self(x), other(x))`.
    pub fn stack(&self, other: &AffineMap) -> Result<AffineMap> {
        check_dim(self.in_dim, other.in_dim)?;
        let mut matrix = self.matrix.clone();
        matrix.extend(other.matrix.iter().cloned());
        let mut offset = self.offset.clone();
        offset.extend(other.offset.iter().cloned());
        Ok(AffineMap { in_dim: self.in_dim, matrix, offset })
    }
}

/// Homogenised cone `{(x,t): a·x - b·t ≤ 0, t ≥ 0}` → generators.
pub(crate) fn h_to_v(dim: usize, rows: &[HalfSpace]) -> VRep {
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for r in rows {
        let mut w = r.normal.clone();
        w.push(-&r.offset);
        match r.relation {
            Relation::Le => ineqs.push(w),
            Relation::Eq => eqs.push(w),
        }
    }
    let mut t_nonneg = zeros(dim + 1);
    t_nonneg[dim] = -Rational::one();
    ineqs.push(t_nonneg);
    let g = cone_generators(dim + 1, &ineqs, &eqs);
    let mut out = VRep::default();
    for r in g.rays {
        let t = r[dim].clone();
        let head = r[..dim].to_vec();
        if t.is_zero() {
            out.rays.push(head);
        } else {
            out.vertices.push(scale(&head, &t.recip()));
        }
    }
    out.lines = g.lines.into_iter().map(|l| l[..dim].to_vec()).collect();
    if out.vertices.is_empty() {
        return VRep::default();
    }
    out.canonical(dim)
}

/// Facets from generators via the polar of the homogenised cone.
pub(crate) fn v_to_h(dim: usize, v: &VRep) -> Vec<HalfSpace> {
    if v.is_empty() {
        return alloc::vec![HalfSpace::le(zeros(dim), -Rational::one())];
    }
    let lift = |g: &RationalVector, t: i64| {
        let mut w = g.clone();
        w.push(Rational::from_integer(t.into()));
        w
    };
    let ineqs: Vec<RationalVector> =
        v.vertices.iter().map(|x| lift(x, 1)).chain(v.rays.iter().map(|r| lift(r, 0))).collect();
    let eqs: Vec<RationalVector> = v.lines.iter().map(|l| lift(l, 0)).collect();
    let polar = cone_generators(dim + 1, &ineqs, &eqs);
    let mut rows = Vec::new();
    for w in polar.rays {
        let normal = w[..dim].to_vec();
        if is_zero(&normal) {
            continue;
        }
        rows.push(HalfSpace::le(normal, -&w[dim]));
    }
    for w in polar.lines {
        let normal = w[..dim].to_vec();
        debug_assert!(!is_zero(&normal));
        rows.push(HalfSpace::eq(normal, -&w[dim]));
    }
    canonical_h(dim, &rows)
}
