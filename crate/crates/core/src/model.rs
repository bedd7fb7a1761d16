//! Problem data: order cones, affine / discrete / set-valued vector
//! programs, feasible sets `Λ(z)`, images `W(z)` and the graph of the upper
//! image `z ↦ W(z) + Y₊`.

use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlp::{dot, neg, strict_feasible, sub, unit, vec_mat, zeros, Rational, RationalVector};
use crate::polyhedra::cone::interior_witness;
use crate::polyhedra::region::image;
use crate::polyhedra::{AffineMap, ConeGenerators, HalfSpace, PolyhedralCone, Polyhedron, Region, VRep};

/// A full-dimensional polyhedral cone `K ≠ Y` inducing `a ≤ b ⟺ b − a ∈ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCone {
    cone: PolyhedralCone,
    interior: RationalVector,
}

impl OrderCone {
    pub fn new(cone: PolyhedralCone) -> Result<Self> {
        let interior = interior_witness(&cone)?;
        if cone.inequalities().is_empty() {
            return Err(Error::WholeSpace);
        }
        Ok(Self { cone, interior })
    }

    pub fn from_generators(dim: usize, rays: Vec<RationalVector>, lines: Vec<RationalVector>) -> Result<Self> {
        Self::new(PolyhedralCone::from_generators(dim, rays, lines)?)
    }

    pub fn orthant(dim: usize) -> Self {
        Self::new(PolyhedralCone::orthant(dim)).expect("orthant is full-dimensional")
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    pub fn interior(&self) -> &RationalVector {
        &self.interior
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn is_pointed(&self) -> bool {
        self.cone.is_pointed()
    }

    pub fn contains(&self, w: &[Rational]) -> Result<bool> {
        self.cone.contains(w)
    }

    pub fn contains_interior(&self, w: &[Rational]) -> Result<bool> {
        self.cone.contains_interior(w)
    }

    /// Rows of `{y : y0 − y ∈ K}`.
    pub fn below(&self, y0: &[Rational]) -> Vec<HalfSpace> {
        self.cone.inequalities().iter().map(|a| HalfSpace::le(neg(a), -dot(a, y0))).collect()
    }

    /// Strict rows `(c, s)` of `{y : y0 − y ∈ Int K}`.
    pub fn strictly_below(&self, y0: &[Rational]) -> Vec<(RationalVector, Rational)> {
        self.cone.inequalities().iter().map(|a| (neg(a), -dot(a, y0))).collect()
    }

    /// `a ≤ b` in this order.
    pub fn le(&self, a: &[Rational], b: &[Rational]) -> Result<bool> {
        self.contains(&sub(b, a))
    }
}

/// Rows of `{x : z − (G·x + c) ∈ K}` for the affine map `g`.
fn constraint_rows(g: &AffineMap, z_plus: &OrderCone, z: &[Rational]) -> Vec<HalfSpace> {
    z_plus
        .cone()
        .inequalities()
        .iter()
        .map(|a| {
            let pulled = vec_mat(a, &g.matrix, g.in_dim());
            HalfSpace::le(neg(&pulled), dot(a, &g.offset) - dot(a, z))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineVectorProgram {
    omega: Region,
    f: AffineMap,
    g: AffineMap,
    y_plus: OrderCone,
    z_plus: OrderCone,
}

impl AffineVectorProgram {
    pub fn new(omega: Region, f: AffineMap, g: AffineMap, y_plus: OrderCone, z_plus: OrderCone) -> Result<Self> {
        if matches!(omega, Region::Finite { .. }) {
            return Err(Error::Invalid("affine programs need a convex domain".into()));
        }
        check_dim(omega.dim(), f.in_dim())?;
        check_dim(omega.dim(), g.in_dim())?;
        check_dim(f.out_dim(), y_plus.dim())?;
        check_dim(g.out_dim(), z_plus.dim())?;
        if omega.is_empty()? {
            return Err(Error::EmptyProgram);
        }
        Ok(Self { omega, f, g, y_plus, z_plus })
    }

    pub fn omega(&self) -> &Region {
        &self.omega
    }

    pub fn f(&self) -> &AffineMap {
        &self.f
    }

    pub fn g(&self) -> &AffineMap {
        &self.g
    }

    pub fn x_dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn y_plus(&self) -> &OrderCone {
        &self.y_plus
    }

    pub fn z_plus(&self) -> &OrderCone {
        &self.z_plus
    }

    /// `Λ(z) = {x ∈ Ω : g(x) ≤ z}`.
    pub fn feasible_region(&self, z: &[Rational]) -> Result<Region> {
        check_dim(self.z_plus.dim(), z.len())?;
        self.omega.with_rows(&constraint_rows(&self.g, &self.z_plus, z))
    }

    /// `f(Λ(z))`, exactly.
    pub fn image_set(&self, z: &[Rational]) -> Result<Region> {
        image(&self.feasible_region(z)?, &self.f, &ConeGenerators::default())
    }

    /// `f(Λ(z)) + Y₊`, exactly.
    pub fn upper_image(&self, z: &[Rational]) -> Result<Region> {
        image(&self.feasible_region(z)?, &self.f, self.y_plus.cone().generators())
    }

    /// `{(g(x) + z₊, f(x) + y₊) : x ∈ Ω}` in `Z × Y`.
    pub fn upper_image_graph(&self) -> Result<Region> {
        let stacked = self.g.stack(&self.f)?;
        image(&self.omega, &stacked, &product_generators(&self.z_plus, &self.y_plus))
    }

    /// `x₁ ∈ Ω` with `−g(x₁) ∈ Int Z₊`.
    pub fn slater_point(&self) -> Result<Option<RationalVector>> {
        for mut cell in self.omega.cells()? {
            for a in self.z_plus.cone().inequalities() {
                let pulled = vec_mat(a, &self.g.matrix, self.g.in_dim());
                cell.push_strict(neg(&pulled), dot(a, &self.g.offset));
            }
            if let Some(x) = strict_feasible(&cell)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// Generators of `Z₊ × Y₊`.
pub fn product_generators(z_plus: &OrderCone, y_plus: &OrderCone) -> ConeGenerators {
    let (p, m) = (z_plus.dim(), y_plus.dim());
    let pad = |v: &RationalVector, front: bool| -> RationalVector {
        if front {
            v.iter().cloned().chain(zeros(m)).collect()
        } else {
            zeros(p).into_iter().chain(v.iter().cloned()).collect()
        }
    };
    let z = z_plus.cone().generators();
    let y = y_plus.cone().generators();
    ConeGenerators {
        rays: z.rays.iter().map(|r| pad(r, true)).chain(y.rays.iter().map(|r| pad(r, false))).collect(),
        lines: z.lines.iter().map(|l| pad(l, true)).chain(y.lines.iter().map(|l| pad(l, false))).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledPoint {
    pub id: String,
    pub f_values: Vec<RationalVector>,
    pub g_values: Vec<RationalVector>,
}

/// Finite program; single-valued (`f_values`, `g_values` of length one) for
/// the discrete kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteProgram {
    points: Vec<SampledPoint>,
    y_plus: OrderCone,
    z_plus: OrderCone,
    single_valued: bool,
}

pub type DiscreteVectorProgram = FiniteProgram;
pub type SetValuedProgram = FiniteProgram;

impl FiniteProgram {
    /// Discrete program from `(id, f(x), g(x))` triples.
    pub fn discrete(
        points: Vec<(String, RationalVector, RationalVector)>,
        y_plus: OrderCone,
        z_plus: OrderCone,
    ) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|(id, f, g)| SampledPoint { id, f_values: alloc::vec![f], g_values: alloc::vec![g] })
            .collect();
        Self::build(points, y_plus, z_plus, true)
    }

    pub fn set_valued(points: Vec<SampledPoint>, y_plus: OrderCone, z_plus: OrderCone) -> Result<Self> {
        Self::build(points, y_plus, z_plus, false)
    }

    fn build(points: Vec<SampledPoint>, y_plus: OrderCone, z_plus: OrderCone, single_valued: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyProgram);
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q.id == p.id) {
                return Err(Error::Invalid(alloc::format!("duplicate id {}", p.id)));
            }
            if p.f_values.is_empty() || p.g_values.is_empty() {
                return Err(Error::Invalid(alloc::format!("point {} has an empty value set", p.id)));
            }
            for f in &p.f_values {
                check_dim(y_plus.dim(), f.len())?;
            }
            for g in &p.g_values {
                check_dim(z_plus.dim(), g.len())?;
            }
        }
        Ok(Self { points, y_plus, z_plus, single_valued })
    }

    pub fn points(&self) -> &[SampledPoint] {
        &self.points
    }

    pub fn y_plus(&self) -> &OrderCone {
        &self.y_plus
    }

    pub fn z_plus(&self) -> &OrderCone {
        &self.z_plus
    }

    pub fn is_single_valued(&self) -> bool {
        self.single_valued
    }

    /// Ids `x` with `G(x) ∩ (z − Z₊) ≠ ∅`.
    pub fn feasible_ids(&self, z: &[Rational]) -> Result<Vec<String>> {
        check_dim(self.z_plus.dim(), z.len())?;
        let mut out = Vec::new();
        for p in &self.points {
            let mut ok = false;
            for g in &p.g_values {
                if self.z_plus.le(g, z)? {
                    ok = true;
                    break;
                }
            }
            if ok {
                out.push(p.id.clone());
            }
        }
        Ok(out)
    }

    /// `F(Λ(z))` as a finite point set.
    pub fn image_set(&self, z: &[Rational]) -> Result<Region> {
        let ids = self.feasible_ids(z)?;
        let mut points: Vec<RationalVector> = Vec::new();
        for p in self.points.iter().filter(|p| ids.contains(&p.id)) {
            for f in &p.f_values {
                if !points.contains(f) {
                    points.push(f.clone());
                }
            }
        }
        Ok(Region::Finite { dim: self.y_plus.dim(), points })
    }

    /// Convex hull of all `(g', f')` pairs plus `Z₊ × Y₊`.
    pub fn upper_image_graph(&self) -> Result<Region> {
        let cone = product_generators(&self.z_plus, &self.y_plus);
        let vertices = self.pairs().map(|(_, f, g)| g.iter().chain(f).cloned().collect()).collect();
        let v = VRep { vertices, rays: cone.rays, lines: cone.lines };
        Ok(Region::Closed(Polyhedron::from_v(self.z_plus.dim() + self.y_plus.dim(), v)?.canonical()))
    }

    fn pairs(&self) -> impl Iterator<Item = (&str, &RationalVector, &RationalVector)> {
        self.points
            .iter()
            .flat_map(|p| p.f_values.iter().flat_map(move |f| p.g_values.iter().map(move |g| (p.id.as_str(), f, g))))
    }

    /// A point with some value `g' ∈ G(x)` satisfying `−g' ∈ Int Z₊`.
    pub fn slater_point(&self) -> Result<Option<(String, RationalVector)>> {
        for p in &self.points {
            for g in &p.g_values {
                if self.z_plus.contains_interior(&neg(g))? {
                    return Ok(Some((p.id.clone(), g.clone())));
                }
            }
        }
        Ok(None)
    }

    /// The convex relaxation: weights `λ` on the simplex over all
    /// `(id, f', g')` pairs, with `f(λ) = Σ λₖ f'ₖ` and `g(λ) = Σ λₖ g'ₖ`.
    pub fn relax(&self) -> Result<AffineVectorProgram> {
        let pairs: Vec<_> = self.pairs().collect();
        let n = pairs.len();
        let mut rows: Vec<HalfSpace> = (0..n).map(|i| HalfSpace::le(neg(&unit(n, i)), Rational::zero())).collect();
        rows.push(HalfSpace::eq((0..n).map(|_| Rational::one()).collect(), Rational::one()));
        let omega = Region::Closed(Polyhedron::from_h(n, rows)?);
        let columns = |dim: usize, pick: &dyn Fn(&(&str, &RationalVector, &RationalVector)) -> RationalVector| {
            (0..dim).map(|r| pairs.iter().map(|p| pick(p)[r].clone()).collect()).collect::<Vec<RationalVector>>()
        };
        let f = AffineMap::new(n, columns(self.y_plus.dim(), &|p| p.1.clone()), zeros(self.y_plus.dim()))?;
        let g = AffineMap::new(n, columns(self.z_plus.dim(), &|p| p.2.clone()), zeros(self.z_plus.dim()))?;
        AffineVectorProgram::new(omega, f, g, self.y_plus.clone(), self.z_plus.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum VectorProgram {
    Affine(AffineVectorProgram),
    Discrete(DiscreteVectorProgram),
    SetValued(SetValuedProgram),
}

/// What `feasible_region` returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasible {
    Region(Region),
    Ids(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlaterPoint {
    Point(RationalVector),
    Sample { id: String, g_value: RationalVector },
}

impl VectorProgram {
    pub fn y_plus(&self) -> &OrderCone {
        match self {
            VectorProgram::Affine(p) => &p.y_plus,
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => &p.y_plus,
        }
    }

    pub fn z_plus(&self) -> &OrderCone {
        match self {
            VectorProgram::Affine(p) => &p.z_plus,
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => &p.z_plus,
        }
    }

    pub fn y_dim(&self) -> usize {
        self.y_plus().dim()
    }

    pub fn z_dim(&self) -> usize {
        self.z_plus().dim()
    }

    pub fn feasible_region(&self, z: &[Rational]) -> Result<Feasible> {
        match self {
            VectorProgram::Affine(p) => p.feasible_region(z).map(Feasible::Region),
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => p.feasible_ids(z).map(Feasible::Ids),
        }
    }

    /// `W(z)`.
    pub fn image_set(&self, z: &[Rational]) -> Result<Region> {
        match self {
            VectorProgram::Affine(p) => p.image_set(z),
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => p.image_set(z),
        }
    }

    pub fn upper_image_graph(&self) -> Result<Region> {
        match self {
            VectorProgram::Affine(p) => p.upper_image_graph(),
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => p.upper_image_graph(),
        }
    }

    pub fn slater_point(&self) -> Result<Option<SlaterPoint>> {
        Ok(match self {
            VectorProgram::Affine(p) => p.slater_point()?.map(SlaterPoint::Point),
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => {
                p.slater_point()?.map(|(id, g_value)| SlaterPoint::Sample { id, g_value })
            }
        })
    }

    /// The affine program the duality construction runs on.
    pub fn convex_form(&self) -> Result<AffineVectorProgram> {
        match self {
            VectorProgram::Affine(p) => Ok(p.clone()),
            VectorProgram::Discrete(p) | VectorProgram::SetValued(p) => p.relax(),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, VectorProgram::Affine(_))
    }
}
