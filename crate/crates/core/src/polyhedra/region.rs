//! Convex sets that are polyhedra except on some facets, and finite point
//! sets.
//!
//! A [`BoundaryRestrictedPolyhedron`] is a polyhedron `P` together with
//! restrictions `(i, Rᵢ)`: a point `x ∈ P` with `aᵢ·x = bᵢ` belongs to the set
//! only if `x ∈ Rᵢ`. Restrictions act conjunctively and only one level deep
//! (the retained sets are closed polyhedra).
//!
//! Every region splits into finitely many cells, each a system of `≤`, `=`
//! and `<` rows, and all emptiness questions reduce to
//! [`strict_feasible`] on those cells.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;
use num_traits::Zero;

use super::{AffineMap, ConeGenerators, HalfSpace, Polyhedron, Relation, VRep};
use crate::error::{check_dim, Error, Result};
use crate::exactlp::{dot, neg, strict_feasible, LinearSystem, Rational, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetRestriction {
    /// Index into the closure's H-representation (an inequality row).
    pub facet: usize,
    /// The part of the facet hyperplane that belongs to the set.
    pub retained: Polyhedron,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRestrictedPolyhedron {
    closure: Polyhedron,
    restrictions: Vec<FacetRestriction>,
}

impl BoundaryRestrictedPolyhedron {
    /// `closure` must carry an H-representation; facet indices refer to it.
    pub fn new(closure: Polyhedron, restrictions: Vec<FacetRestriction>) -> Result<Self> {
        let rows = closure
            .h_rep()
            .ok_or_else(|| Error::Invalid("restricted polyhedron needs an H-representation".into()))?
            .to_vec();
        let mut seen = Vec::new();
        for r in &restrictions {
            let row = rows
                .get(r.facet)
                .ok_or_else(|| Error::Invalid(alloc::format!("facet index {} out of range", r.facet)))?;
            if row.relation != Relation::Le {
                return Err(Error::Invalid(alloc::format!("row {} is an equality", r.facet)));
            }
            if seen.contains(&r.facet) {
                return Err(Error::Invalid(alloc::format!("facet {} restricted twice", r.facet)));
            }
            seen.push(r.facet);
            check_dim(closure.dim(), r.retained.dim())?;
            let face = closure.with_rows(alloc::vec![HalfSpace::eq(row.normal.clone(), row.offset.clone())])?;
            if !face.contains_polyhedron(&r.retained) {
                return Err(Error::Invalid(alloc::format!("retained set of facet {} leaves the facet", r.facet)));
            }
        }
        Ok(Self { closure, restrictions })
    }

    /// The outer polyhedron (the closure when every cell is nonempty).
    pub fn closure(&self) -> &Polyhedron {
        &self.closure
    }

    pub fn restrictions(&self) -> &[FacetRestriction] {
        &self.restrictions
    }

    pub fn facet_row(&self, i: usize) -> HalfSpace {
        self.closure.rows()[self.restrictions[i].facet].clone()
    }

    pub fn dim(&self) -> usize {
        self.closure.dim()
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if !self.closure.contains(x)? {
            return Ok(false);
        }
        let rows = self.closure.rows();
        for r in &self.restrictions {
            if rows[r.facet].is_tight(x) && !r.retained.contains(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The nonempty cells, one per subset `T` of restrictions: rows in `T`
    /// tight and the retained rows imposed, the other restricted rows strict.
    /// Subsets are explored depth first and infeasible prefixes pruned; the
    /// all-strict cell comes first.
    pub fn cells(&self) -> Result<Vec<LinearSystem>> {
        let rows = self.closure.rows();
        let mut out = Vec::new();
        let mut stack = alloc::vec![(0usize, self.closure.system())];
        while let Some((j, s)) = stack.pop() {
            if strict_feasible(&s)?.is_none() {
                continue;
            }
            let Some(r) = self.restrictions.get(j) else {
                out.push(s);
                continue;
            };
            let row = &rows[r.facet];
            let mut tight = s.clone();
            tight.push_eq(row.normal.clone(), row.offset.clone());
            tight.extend(&r.retained.system())?;
            let mut strict = s;
            strict.push_strict(row.normal.clone(), row.offset.clone());
            stack.push((j + 1, tight));
            stack.push((j + 1, strict));
        }
        Ok(out)
    }

    /// Adds closed rows to the outer polyhedron and every retained set.
    pub fn with_rows(&self, extra: &[HalfSpace]) -> Result<Self> {
        let closure = self.closure.with_rows(extra.to_vec())?;
        let restrictions = self
            .restrictions
            .iter()
            .map(|r| Ok(FacetRestriction { facet: r.facet, retained: r.retained.with_rows(extra.to_vec())? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { closure, restrictions })
    }

    /// Pads every row with `extra` zero columns (the set times `ℝ^extra`).
    pub fn lift(&self, extra: usize) -> Result<Self> {
        let closure = lift_polyhedron(&self.closure, extra)?;
        let restrictions = self
            .restrictions
            .iter()
            .map(|r| Ok(FacetRestriction { facet: r.facet, retained: lift_polyhedron(&r.retained, extra)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { closure, restrictions })
    }
}

fn lift_polyhedron(p: &Polyhedron, extra: usize) -> Result<Polyhedron> {
    let rows = p
        .rows()
        .into_iter()
        .map(|mut r| {
            r.normal.extend((0..extra).map(|_| Rational::zero()));
            r
        })
        .collect();
    Polyhedron::from_h(p.dim() + extra, rows)
}

/// `normal · x < offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictHalfspace {
    pub normal: RationalVector,
    pub offset: Rational,
}

impl StrictHalfspace {
    pub fn new(normal: RationalVector, offset: Rational) -> Self {
        Self { normal, offset }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    NonEmpty(RationalVector),
}

impl Intersection {
    pub fn is_empty(&self) -> bool {
        matches!(self, Intersection::Empty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Closed(Polyhedron),
    Restricted(BoundaryRestrictedPolyhedron),
    Finite { dim: usize, points: Vec<RationalVector> },
}

impl Region {
    pub fn dim(&self) -> usize {
        match self {
            Region::Closed(p) => p.dim(),
            Region::Restricted(b) => b.dim(),
            Region::Finite { dim, .. } => *dim,
        }
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        match self {
            Region::Closed(p) => p.contains(x),
            Region::Restricted(b) => b.contains(x),
            Region::Finite { points, .. } => Ok(points.iter().any(|p| p.as_slice() == x)),
        }
    }

    /// Systems whose solution sets partition the region. Restricted regions
    /// list only their nonempty cells.
    pub fn cells(&self) -> Result<Vec<LinearSystem>> {
        Ok(match self {
            Region::Closed(p) => alloc::vec![p.system()],
            Region::Restricted(b) => b.cells()?,
            Region::Finite { dim, points } => points
                .iter()
                .map(|p| {
                    let mut s = LinearSystem::new(*dim);
                    for (i, v) in p.iter().enumerate() {
                        s.push_eq(crate::exactlp::unit(*dim, i), v.clone());
                    }
                    s
                })
                .collect(),
        })
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(intersect_empty(core::slice::from_ref(self), &[])?.is_empty())
    }

    /// Topological closure: the outer polyhedron when the all-strict cell is
    /// nonempty, else the convex hull of the closed nonempty cells.
    pub fn closure(&self) -> Result<Polyhedron> {
        match self {
            Region::Closed(p) => Ok(p.clone()),
            Region::Finite { dim, points } => {
                Polyhedron::from_v(*dim, VRep { vertices: points.clone(), ..VRep::default() })
            }
            Region::Restricted(b) => {
                let rows = b.closure().rows();
                let mut all_strict = b.closure().system();
                for r in b.restrictions() {
                    let row = &rows[r.facet];
                    all_strict.push_strict(row.normal.clone(), row.offset.clone());
                }
                if strict_feasible(&all_strict)?.is_some() {
                    return Ok(b.closure().clone());
                }
                let mut hull = VRep::default();
                for cell in b.cells()? {
                    let mut closed = cell.clone();
                    closed.le.append(&mut closed.strict);
                    let g = Polyhedron::from_system(&closed)?.generators();
                    hull.vertices.extend(g.vertices);
                    hull.rays.extend(g.rays);
                    hull.lines.extend(g.lines);
                }
                if hull.is_empty() {
                    return Ok(Polyhedron::empty(b.dim()));
                }
                Ok(Polyhedron::from_v(b.dim(), hull)?.canonical())
            }
        }
    }

    /// Intersection with closed rows.
    pub fn with_rows(&self, extra: &[HalfSpace]) -> Result<Region> {
        for r in extra {
            check_dim(self.dim(), r.normal.len())?;
        }
        Ok(match self {
            Region::Closed(p) => Region::Closed(p.with_rows(extra.to_vec())?),
            Region::Restricted(b) => Region::Restricted(b.with_rows(extra)?),
            Region::Finite { dim, points } => Region::Finite {
                dim: *dim,
                points: points.iter().filter(|p| extra.iter().all(|r| r.holds(p))).cloned().collect(),
            },
        })
    }

    /// Whether the region lies inside the closed polyhedron `p`.
    pub fn subset_of(&self, p: &Polyhedron) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok(escape(&self.cells()?, &p.rows())?.is_none())
    }

    /// Whether the region lies inside `other` (exact, any variants).
    pub fn subset_of_region(&self, other: &Region) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        match other {
            Region::Closed(p) => self.subset_of(p),
            Region::Restricted(b) => {
                if !self.subset_of(b.closure())? {
                    return Ok(false);
                }
                let rows = b.closure().rows();
                for r in b.restrictions() {
                    let row = &rows[r.facet];
                    let on_facet = self.with_rows(&[HalfSpace::eq(row.normal.clone(), row.offset.clone())])?;
                    if !on_facet.subset_of(&r.retained)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Region::Finite { points, .. } => {
                // A convex region inside a finite set is empty or a point.
                for cell in self.cells()? {
                    let Some(w) = strict_feasible(&cell)? else {
                        continue;
                    };
                    if !points.contains(&w) {
                        return Ok(false);
                    }
                    for (i, wi) in w.iter().enumerate() {
                        let e = crate::exactlp::unit(self.dim(), i);
                        let mut other_side = cell.clone();
                        other_side.push_strict(neg(&e), -wi.clone());
                        let mut below = cell.clone();
                        below.push_strict(e, wi.clone());
                        if strict_feasible(&other_side)?.is_some() || strict_feasible(&below)?.is_some() {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn same_set(&self, other: &Region) -> Result<bool> {
        Ok(self.subset_of_region(other)? && other.subset_of_region(self)?)
    }

    /// The region times `ℝ^extra`.
    pub fn lift(&self, extra: usize) -> Result<Region> {
        Ok(match self {
            Region::Closed(p) => Region::Closed(lift_polyhedron(p, extra)?),
            Region::Restricted(b) => Region::Restricted(b.lift(extra)?),
            Region::Finite { .. } => {
                return Err(Error::Invalid("cannot lift a finite region".into()));
            }
        })
    }
}

/// A point of some cell violating some row, if any.
fn escape(cells: &[LinearSystem], rows: &[HalfSpace]) -> Result<Option<RationalVector>> {
    for cell in cells {
        for r in rows {
            let mut sides = alloc::vec![StrictHalfspace::new(neg(&r.normal), -r.offset.clone())];
            if r.relation == Relation::Eq {
                sides.push(StrictHalfspace::new(r.normal.clone(), r.offset.clone()));
            }
            for side in sides {
                let mut s = cell.clone();
                s.push_strict(side.normal, side.offset);
                if let Some(w) = strict_feasible(&s)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Decides whether the regions and open half-spaces have a common point,
/// returning one when they do.
pub fn intersect_empty(parts: &[Region], strict_halfspaces: &[StrictHalfspace]) -> Result<Intersection> {
    let dim = match (parts.first(), strict_halfspaces.first()) {
        (Some(p), _) => p.dim(),
        (None, Some(h)) => h.normal.len(),
        (None, None) => return Err(Error::Invalid("nothing to intersect".into())),
    };
    for p in parts {
        check_dim(dim, p.dim())?;
    }
    let mut base = LinearSystem::new(dim);
    for h in strict_halfspaces {
        check_dim(dim, h.normal.len())?;
        base.push_strict(h.normal.clone(), h.offset.clone());
    }
    let cell_lists: Vec<Vec<LinearSystem>> = parts.iter().map(Region::cells).collect::<Result<_>>()?;
    let mut idx = alloc::vec![0usize; parts.len()];
    if cell_lists.iter().any(Vec::is_empty) {
        return Ok(Intersection::Empty);
    }
    loop {
        let mut s = base.clone();
        for (list, &i) in cell_lists.iter().zip(&idx) {
            s.extend(&list[i])?;
        }
        if let Some(w) = strict_feasible(&s)? {
            return Ok(Intersection::NonEmpty(w));
        }
        // odometer over the cartesian product of cells
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(Intersection::Empty);
            }
            idx[k] += 1;
            if idx[k] < cell_lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn hyperplane(dim: usize, row: &HalfSpace) -> Result<Polyhedron> {
    Polyhedron::from_h(dim, alloc::vec![HalfSpace::eq(row.normal.clone(), row.offset.clone())])
}

/// The rays of `cone` orthogonal to `normal`, and all its lines.
fn flat_part(cone: &ConeGenerators, normal: &[Rational]) -> ConeGenerators {
    ConeGenerators {
        rays: cone.rays.iter().filter(|k| dot(normal, k).is_zero()).cloned().collect(),
        lines: cone.lines.clone(),
    }
}

/// Points of `g` (a closed subset of the closure) mapped onto the face of
/// the image cut out by `a·y = b`.
fn preimage_face(g: &Polyhedron, map: &AffineMap, facet: &HalfSpace) -> Result<Polyhedron> {
    let pulled = crate::exactlp::vec_mat(&facet.normal, &map.matrix, map.in_dim());
    let face = g.with_rows(alloc::vec![HalfSpace::eq(pulled, &facet.offset - dot(&facet.normal, &map.offset))])?;
    Ok(Polyhedron::from_h(face.dim(), face.rows())?.canonical())
}

struct ImageContext<'a> {
    region: &'a BoundaryRestrictedPolyhedron,
    inner_rows: Vec<HalfSpace>,
    map: &'a AffineMap,
    /// Restricted facets of the image found so far: hyperplane and retained set.
    outer: Vec<(Polyhedron, Polyhedron)>,
    /// Faces are reached along many facet sequences.
    memo: RefCell<BTreeMap<CoverKey, bool>>,
}

type CoverKey = (Vec<HalfSpace>, Vec<RationalVector>, Vec<RationalVector>, Vec<HalfSpace>);

impl ImageContext<'_> {
    /// Applies the restrictions whose hyperplanes contain `g`. Returns the
    /// closed remainder and whether some other restriction cuts it outside
    /// its retained set.
    fn split(&self, g: &Polyhedron) -> Result<(Polyhedron, bool)> {
        let dim = self.region.dim();
        let mut gc = g.clone();
        let mut others = Vec::new();
        for r in self.region.restrictions() {
            let row = &self.inner_rows[r.facet];
            if hyperplane(dim, row)?.contains_polyhedron(g) {
                gc = gc.intersect(&r.retained)?.canonical();
            } else {
                others.push((row, &r.retained));
            }
        }
        let mut cut = false;
        for (row, retained) in others {
            let part = gc.with_rows(alloc::vec![HalfSpace::eq(row.normal.clone(), row.offset.clone())])?;
            cut |= !retained.contains_polyhedron(&part);
        }
        Ok((gc, cut))
    }

    /// Whether every point of `(map(g) + cone) ∩ need` is the image of a
    /// region point of `g` plus an element of `cone`.
    ///
    /// The remainder `gc` of `split` has its relative interior inside the
    /// region, and the image of that relative interior is the relative
    /// interior of `map(gc) + cone`. Only the relative boundary is left, and
    /// it is checked facet by facet. On a facet that lies in a restricted
    /// facet of the image, points outside its retained set are excluded by
    /// the representation anyway, so `need` shrinks accordingly.
    fn covers(&self, g: &Polyhedron, cone: &ConeGenerators, need: &Polyhedron) -> Result<bool> {
        if g.is_empty() {
            return Ok(true);
        }
        let (gc, cut) = self.split(g)?;
        if !cut && gc.same_set(g) {
            return Ok(true);
        }
        let directions = VRep { vertices: Vec::new(), rays: cone.rays.clone(), lines: cone.lines.clone() }
            .canonical(self.map.out_dim());
        let key = (g.canonical().rows(), directions.rays, directions.lines, need.canonical().rows());
        if let Some(&known) = self.memo.borrow().get(&key) {
            return Ok(known);
        }
        let result = self.covers_split(g, &gc, cut, cone, need)?;
        self.memo.borrow_mut().insert(key, result);
        Ok(result)
    }

    fn covers_split(
        &self,
        g: &Polyhedron,
        gc: &Polyhedron,
        cut: bool,
        cone: &ConeGenerators,
        need: &Polyhedron,
    ) -> Result<bool> {
        let need = g.image(self.map, cone)?.intersect(need)?;
        if need.is_empty() {
            return Ok(true);
        }
        if gc.is_empty() {
            return Ok(false);
        }
        let s = gc.image(self.map, cone)?.canonical();
        if !s.contains_polyhedron(&need) {
            return Ok(false);
        }
        if !cut {
            return Ok(true);
        }
        for facet in s.rows() {
            if facet.relation != Relation::Le {
                continue;
            }
            let face = s.with_rows(alloc::vec![HalfSpace::eq(facet.normal.clone(), facet.offset.clone())])?;
            let mut narrowed = need.intersect(&face)?;
            if narrowed.is_empty() {
                continue;
            }
            for (hyper, retained) in &self.outer {
                if hyper.contains_polyhedron(&face) {
                    narrowed = narrowed.intersect(retained)?;
                }
            }
            let face_g = preimage_face(gc, self.map, &facet)?;
            if !self.covers(&face_g, &flat_part(cone, &facet.normal), &narrowed)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `map(region) + cone`, exactly.
///
/// The closure of the image is `map(cl region) + cone`. A facet `a·y ≤ b` of
/// it meets the image in `map(Gc) + (cone ∩ a⊥)`, where `Gc` is the part of
/// the preimage face `G` of the closure that belongs to the region. The
/// restrictions whose hyperplanes contain `G` cut it to a closed set, whose
/// image becomes the retained set of the facet. Restrictions that cut `G`
/// along a proper face are harmless when every point they remove is either
/// still reached from elsewhere or excluded by another restricted facet of
/// the image; otherwise the image would need a nested restriction, which is
/// refused.
pub fn image(region: &Region, map: &AffineMap, cone: &ConeGenerators) -> Result<Region> {
    check_dim(region.dim(), map.in_dim())?;
    for g in cone.rays.iter().chain(&cone.lines) {
        check_dim(map.out_dim(), g.len())?;
    }
    let b = match region {
        Region::Closed(p) => return Ok(Region::Closed(p.image(map, cone)?)),
        Region::Finite { .. } => {
            return Err(Error::Invalid("image of a finite region is not convex".into()));
        }
        Region::Restricted(b) => b,
    };
    let closure = region.closure()?;
    let outer = closure.image(map, cone)?;
    if outer.is_empty() {
        return Ok(Region::Closed(outer));
    }
    let mut ctx = ImageContext {
        region: b,
        inner_rows: b.closure().rows(),
        map,
        outer: Vec::new(),
        memo: RefCell::new(BTreeMap::new()),
    };
    let mut restrictions = Vec::new();
    let mut pending = Vec::new();
    for (idx, facet) in outer.rows().iter().enumerate() {
        if facet.relation != Relation::Le {
            continue;
        }
        let g = preimage_face(&closure, map, facet)?;
        let (gc, cut) = ctx.split(&g)?;
        let flat = flat_part(cone, &facet.normal);
        let face = outer.with_rows(alloc::vec![HalfSpace::eq(facet.normal.clone(), facet.offset.clone())])?;
        let retained = if gc.is_empty() { Polyhedron::empty(map.out_dim()) } else { gc.image(map, &flat)? };
        if cut {
            pending.push((gc.clone(), flat, retained.clone()));
        }
        if gc.same_set(&g) || retained.same_set(&face) {
            continue;
        }
        ctx.outer.push((hyperplane(map.out_dim(), facet)?, retained.clone()));
        restrictions.push(FacetRestriction { facet: idx, retained });
    }
    for (gc, flat, retained) in &pending {
        if !ctx.covers(gc, flat, retained)? {
            return Err(Error::NestedRestriction);
        }
    }
    if restrictions.is_empty() {
        return Ok(Region::Closed(outer));
    }
    Ok(Region::Restricted(BoundaryRestrictedPolyhedron::new(outer, restrictions)?))
}
