//! Primal and dual efficiency, the dual image, and the per-point
//! certificate checking every transfer statement between `(P(0))` and the
//! dual program built from the Lagrange process.

mod frontier;
pub mod oracle;
mod status;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlp::{dot, lp_solve, neg, sub, unit, zeros, LinearSystem, Rational, RationalVector, Sense};
use crate::model::{AffineVectorProgram, SlaterPoint, VectorProgram};
use crate::polyhedra::region::image;
use crate::polyhedra::{
    cone_structure, AffineMap, ConeGenerators, ConeStructure, HalfSpace, PolyhedralCone, Polyhedron, Region, Relation,
};
use crate::process::{
    halfspace_process, lagrange_process_with, separator_cone, LagrangeProcess, Separator, SeparatorCone,
};

pub use frontier::{frontier_of, minimal_frontier, Frontier, FrontierPoint, DEFAULT_FRONTIER_LIMIT};
pub use oracle::{brute_force_status, OracleStatus};
pub use status::{
    classify_proper, efficiency_status, is_minimal, is_weak_minimal, EfficiencyStatus, GheSource, ProperStatus,
};

/// `M = {f(x) + y : x ∈ Ω, (g(x), y) ∈ Graph L}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualImage {
    pub region: Region,
    /// `false` when boundary restrictions could not be carried through and
    /// `region` is the closure.
    pub exact: bool,
}

pub fn dual_image(p: &AffineVectorProgram, l: &LagrangeProcess) -> Result<DualImage> {
    let (n, m) = (p.x_dim(), l.y_dim());
    let g = p.g();
    let rows: Vec<HalfSpace> = l
        .graph_rows()
        .into_iter()
        .map(|r| {
            let (a_z, a_y) = r.normal.split_at(l.z_dim());
            let mut normal = crate::exactlp::vec_mat(a_z, &g.matrix, n);
            normal.extend(a_y.iter().cloned());
            let offset = -dot(a_z, &g.offset);
            match r.relation {
                Relation::Le => HalfSpace::le(normal, offset),
                Relation::Eq => HalfSpace::eq(normal, offset),
            }
        })
        .collect();
    let lifted = p.omega().lift(m)?.with_rows(&rows)?;
    let matrix =
        p.f().matrix.iter().enumerate().map(|(i, row)| row.iter().cloned().chain(unit(m, i)).collect()).collect();
    let map = AffineMap::new(n + m, matrix, p.f().offset.clone())?;
    match image(&lifted, &map, &ConeGenerators::default()) {
        Ok(region) => Ok(DualImage { region, exact: true }),
        Err(Error::NestedRestriction) => Ok(DualImage {
            region: Region::Closed(lifted.closure()?.image(&map, &ConeGenerators::default())?),
            exact: false,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseId {
    /// `S ≠ ∅` when `y0` is minimal for `(P(0))`.
    SeparatorNonempty,
    /// Every separator has `y* ≠ 0` (needs Slater).
    Nonvertical,
    /// `(−z₊, 0) ∈ Graph L` for `z₊ ∈ Z₊`.
    ProcessContainsNegZ,
    /// `W(0) ⊆ M`.
    PrimalInDual,
    /// `Graph W_{Y₊} ⊆ (0, y0) + {(z, y) : (−z, y) ∈ Graph L}`.
    GraphInProcess,
    /// minimal for `(P(0))` ⇒ weak minimal for the dual.
    C1,
    /// minimal for the dual ⇒ minimal for `(P(0))`.
    C2Min,
    /// weak minimal for the dual ⇒ weak minimal for `(P(0))`.
    C2Weak,
    /// minimality equivalence when `Y₊ \ {0}` is open.
    C3,
    /// minimality equivalence when `Graph L` has a bounded base.
    C4,
    /// minimality equivalence when some separator is positive on `Y₊ \ {0}`.
    C5,
    C6Pos,
    C6Ghe,
    C6He,
    C7Se,
}

impl ClauseId {
    pub const ALL: [ClauseId; 15] = [
        ClauseId::SeparatorNonempty,
        ClauseId::Nonvertical,
        ClauseId::ProcessContainsNegZ,
        ClauseId::PrimalInDual,
        ClauseId::GraphInProcess,
        ClauseId::C1,
        ClauseId::C2Min,
        ClauseId::C2Weak,
        ClauseId::C3,
        ClauseId::C4,
        ClauseId::C5,
        ClauseId::C6Pos,
        ClauseId::C6Ghe,
        ClauseId::C6He,
        ClauseId::C7Se,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClauseId::SeparatorNonempty => "S-nonempty",
            ClauseId::Nonvertical => "NV",
            ClauseId::ProcessContainsNegZ => "L-negZ",
            ClauseId::PrimalInDual => "W0-in-M",
            ClauseId::GraphInProcess => "graph-in-L",
            ClauseId::C1 => "C1",
            ClauseId::C2Min => "C2-min",
            ClauseId::C2Weak => "C2-weak",
            ClauseId::C3 => "C3",
            ClauseId::C4 => "C4",
            ClauseId::C5 => "C5",
            ClauseId::C6Pos => "C6-pos",
            ClauseId::C6Ghe => "C6-ghe",
            ClauseId::C6He => "C6-he",
            ClauseId::C7Se => "C7-se",
        }
    }

    /// Clauses whose statement assumes a Slater point.
    pub fn needs_slater(self) -> bool {
        matches!(
            self,
            ClauseId::Nonvertical
                | ClauseId::C1
                | ClauseId::C3
                | ClauseId::C4
                | ClauseId::C5
                | ClauseId::C6Pos
                | ClauseId::C6Ghe
                | ClauseId::C6He
                | ClauseId::C7Se
        )
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Verified,
    Violated,
    NotApplicable,
    /// Applicable, but the Slater point the statement needs is missing.
    PreconditionUnverified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
            Verdict::PreconditionUnverified => "precondition-unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseVerdict {
    pub id: ClauseId,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub y0: RationalVector,
    pub separators: SeparatorCone,
    pub process: LagrangeProcess,
    pub graph_structure: ConeStructure,
    pub w0: Region,
    pub dual: DualImage,
    pub slater: Option<SlaterPoint>,
    pub status_p0: EfficiencyStatus,
    /// `None` when `y0 ∉ M` (then the inclusion clause is violated).
    pub status_d: Option<EfficiencyStatus>,
    /// Status within the sampled image, for finite programs.
    pub status_sampled: Option<EfficiencyStatus>,
    /// `z* / y*` per separator with `y* > 0`, when `Y = ℝ`.
    pub multipliers: Option<Vec<RationalVector>>,
    /// `h₀` positive on `Y₊ \ {0}`, when one exists.
    pub positive_separator: Option<Separator>,
    pub clauses: Vec<ClauseVerdict>,
}

impl Certificate {
    pub fn clause(&self, id: ClauseId) -> Option<&ClauseVerdict> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn verdict(&self, id: ClauseId) -> Verdict {
        self.clause(id).map_or(Verdict::NotApplicable, |c| c.verdict)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ClauseVerdict> {
        self.clauses.iter().filter(|c| c.verdict == Verdict::Violated)
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}

pub fn certify_multiplier(p: &VectorProgram, y0: &[Rational]) -> Result<Certificate> {
    certify_multiplier_with(p, y0, &halfspace_process)
}

/// As [`certify_multiplier`], with the half-space process construction
/// supplied by the caller (used to check that the harness notices a broken
/// construction).
pub fn certify_multiplier_with(
    p: &VectorProgram,
    y0: &[Rational],
    halfspace: &dyn Fn(&Separator) -> Result<PolyhedralCone>,
) -> Result<Certificate> {
    crate::error::check_dim(p.y_dim(), y0.len())?;
    let (convex, w0) = Prepared::base(p)?;
    if !w0.contains(y0)? {
        return Err(Error::NotInW0);
    }
    Prepared::finish(p, convex, w0)?.certify_with(y0, halfspace)
}

/// Everything in a certificate that does not depend on `y0`, computed once
/// for certifying many points of the same program.
#[derive(Clone, Debug)]
pub struct Prepared<'a> {
    program: &'a VectorProgram,
    convex: AffineVectorProgram,
    w0: Region,
    sampled: Option<Region>,
    graph: Polyhedron,
    slater: Option<SlaterPoint>,
}

impl<'a> Prepared<'a> {
    pub fn new(p: &'a VectorProgram) -> Result<Self> {
        let (convex, w0) = Self::base(p)?;
        Self::finish(p, convex, w0)
    }

    fn base(p: &VectorProgram) -> Result<(AffineVectorProgram, Region)> {
        let convex = p.convex_form()?;
        let w0 = convex.image_set(&zeros(p.z_dim()))?;
        Ok((convex, w0))
    }

    fn finish(p: &'a VectorProgram, convex: AffineVectorProgram, w0: Region) -> Result<Self> {
        let sampled = if p.is_finite() { Some(p.image_set(&zeros(p.z_dim()))?) } else { None };
        let graph = convex.upper_image_graph()?.closure()?;
        let slater = p.slater_point()?;
        Ok(Self { program: p, convex, w0, sampled, graph, slater })
    }

    pub fn certify(&self, y0: &[Rational]) -> Result<Certificate> {
        self.certify_with(y0, &halfspace_process)
    }

    pub fn certify_with(
        &self,
        y0: &[Rational],
        halfspace: &dyn Fn(&Separator) -> Result<PolyhedralCone>,
    ) -> Result<Certificate> {
        let p = self.program;
        crate::error::check_dim(p.y_dim(), y0.len())?;
        let (cp, w0, graph) = (&self.convex, &self.w0, &self.graph);
        if !w0.contains(y0)? {
            return Err(Error::NotInW0);
        }
        let (y_plus, z_plus) = (p.y_plus(), p.z_plus());
        let status_sampled = match &self.sampled {
            Some(sampled) if sampled.contains(y0)? => Some(efficiency_status(sampled, y0, y_plus)?),
            _ => None,
        };

        let separators = separator_cone(graph, p.z_dim(), y0)?;
        let slater = self.slater.clone();
        let process = lagrange_process_with(&separators, halfspace)?;
        let graph_structure = cone_structure(&process.graph);
        let dual = dual_image(cp, &process)?;

        let status_p0 = efficiency_status(w0, y0, y_plus)?;
        let status_d =
            if dual.region.contains(y0)? { Some(efficiency_status(&dual.region, y0, y_plus)?) } else { None };

        let positive_separator =
            if y_plus.is_pointed() { positive_separator(&separators, y_plus.cone())? } else { None };
        let multipliers = (p.y_dim() == 1)
            .then(|| separators.generators.iter().filter_map(Separator::normalized_multiplier).collect());

        let mut clauses = Vec::new();
        let has_slater = slater.is_some();
        let mut push = |id: ClauseId, applicable: bool, holds: bool, detail: String| {
            let verdict = if !applicable {
                Verdict::NotApplicable
            } else if id.needs_slater() && !has_slater {
                Verdict::PreconditionUnverified
            } else if holds {
                Verdict::Verified
            } else {
                Verdict::Violated
            };
            clauses.push(ClauseVerdict { id, verdict, detail });
        };

        let min_p = status_p0.minimal;
        let weak_p = status_p0.weak_minimal;

        push(
            ClauseId::SeparatorNonempty,
            min_p,
            !separators.empty,
            alloc::format!("{} generator(s)", separators.generators.len()),
        );
        let vertical = separators.generators.iter().filter(|h| crate::exactlp::is_zero(&h.y_star)).count();
        push(ClauseId::Nonvertical, true, vertical == 0, alloc::format!("{vertical} vertical generator(s)"));

        let neg_z_ok = z_plus
            .cone()
            .rays()
            .iter()
            .map(|r| neg(r))
            .chain(z_plus.cone().lines().iter().flat_map(|l| [l.clone(), neg(l)]))
            .all(|r| {
                let w: RationalVector = r.into_iter().chain(zeros(p.y_dim())).collect();
                process.graph.contains(&w).unwrap_or(false)
            });
        push(ClauseId::ProcessContainsNegZ, true, neg_z_ok, String::new());

        let inclusion = w0.subset_of_region(&dual.region)?;
        push(
            ClauseId::PrimalInDual,
            true,
            inclusion,
            if dual.exact { String::new() } else { "dual image is a closure".into() },
        );

        push(ClauseId::GraphInProcess, true, graph_in_process(graph, &process, p.z_dim(), y0), String::new());

        let (min_d, weak_d) = match &status_d {
            Some(s) => (s.minimal, s.weak_minimal),
            None => (false, false),
        };
        let d_known = status_d.is_some();

        push(ClauseId::C1, min_p, d_known && weak_d, String::new());
        push(ClauseId::C2Min, d_known && min_d, min_p, String::new());
        push(ClauseId::C2Weak, d_known && weak_d, weak_p, String::new());

        let open_order =
            p.y_dim() == 1 && y_plus.cone().rays() == [crate::exactlp::ivec(&[1])] && y_plus.cone().lines().is_empty();
        push(ClauseId::C3, open_order, d_known && min_p == min_d, String::new());
        push(ClauseId::C4, graph_structure.has_bounded_base, d_known && min_p == min_d, String::new());
        push(ClauseId::C5, positive_separator.is_some(), d_known && min_p == min_d, String::new());

        let pointed = y_plus.is_pointed();
        let pair = |f: fn(&EfficiencyStatus) -> Option<bool>| -> (bool, String) {
            let a = f(&status_p0);
            let b = status_d.as_ref().and_then(f);
            let show = |v: Option<bool>| v.map_or("n/a", |v| if v { "true" } else { "false" });
            (a.is_some() && a == b, alloc::format!("primal {}, dual {}", show(a), show(b)))
        };
        for (id, f) in [
            (ClauseId::C6Pos, EfficiencyStatus::pos as fn(&EfficiencyStatus) -> Option<bool>),
            (ClauseId::C6Ghe, EfficiencyStatus::ghe),
            (ClauseId::C6He, EfficiencyStatus::he),
            (ClauseId::C7Se, EfficiencyStatus::se),
        ] {
            let (holds, detail) = pair(f);
            push(id, pointed, holds, detail);
        }

        Ok(Certificate {
            y0: y0.to_vec(),
            separators,
            process,
            graph_structure,
            w0: w0.clone(),
            dual,
            slater,
            status_p0,
            status_d,
            status_sampled,
            multipliers,
            positive_separator,
            clauses,
        })
    }
}

/// `(−w_z, w_y − y0) ∈ Graph L` on vertices, and `(−d_z, d_y)` on rays and
/// lines of the graph of the upper image.
fn graph_in_process(graph: &Polyhedron, l: &LagrangeProcess, z_dim: usize, y0: &[Rational]) -> bool {
    let v = graph.generators();
    let flip = |w: &RationalVector, shift: bool| -> RationalVector {
        let (wz, wy) = w.split_at(z_dim);
        let tail: RationalVector = if shift { sub(wy, y0) } else { wy.to_vec() };
        neg(wz).into_iter().chain(tail).collect()
    };
    let member = |w: RationalVector| l.graph.contains(&w).unwrap_or(false);
    v.vertices.iter().all(|w| member(flip(w, true)))
        && v.rays.iter().all(|d| member(flip(d, false)))
        && v.lines.iter().all(|d| member(flip(d, false)) && member(neg(&flip(d, false))))
}

/// `h₀ ∈ cone(S)` with `⟨y*₀, r⟩ ≥ 1` on the extreme rays of `Y₊`.
fn positive_separator(s: &SeparatorCone, y_plus: &PolyhedralCone) -> Result<Option<Separator>> {
    if s.empty {
        return Ok(None);
    }
    let k = s.generators.len();
    let mut sys = LinearSystem::new(k);
    for r in y_plus.rays() {
        let row: RationalVector = s.generators.iter().map(|h| -dot(&h.y_star, r)).collect();
        sys.push_le(row, -Rational::one());
    }
    for i in 0..k {
        sys.push_le(neg(&unit(k, i)), Rational::zero());
    }
    let ones: RationalVector = (0..k).map(|_| Rational::one()).collect();
    let Some(sol) = lp_solve(&ones, &sys, Sense::Min)?.optimal().cloned() else {
        return Ok(None);
    };
    let mut h = Separator::new(zeros(s.z_dim()), zeros(s.y_dim()));
    for (mu, g) in sol.point.iter().zip(&s.generators) {
        if mu.is_zero() {
            continue;
        }
        h.z_star = crate::exactlp::add(&h.z_star, &crate::exactlp::scale(&g.z_star, mu));
        h.y_star = crate::exactlp::add(&h.y_star, &crate::exactlp::scale(&g.y_star, mu));
    }
    debug_assert!(y_plus.rays().iter().all(|r| dot(&h.y_star, r).is_positive()));
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::{integer, ivec, rational};
    use crate::model::OrderCone;
    use crate::polyhedra::{BoundaryRestrictedPolyhedron, FacetRestriction, Polyhedron};
    use alloc::vec;

    fn example() -> VectorProgram {
        let closure = Polyhedron::from_h(2, vec![HalfSpace::le(ivec(&[0, -1]), integer(0))]).unwrap();
        let d = BoundaryRestrictedPolyhedron::new(
            closure,
            vec![FacetRestriction { facet: 0, retained: Polyhedron::point(ivec(&[0, 0])) }],
        )
        .unwrap();
        VectorProgram::Affine(
            AffineVectorProgram::new(
                Region::Restricted(d),
                AffineMap::identity(2),
                AffineMap::new(2, vec![ivec(&[0, 1])], ivec(&[-1])).unwrap(),
                OrderCone::orthant(2),
                OrderCone::orthant(1),
            )
            .unwrap(),
        )
    }

    fn scalar_i2() -> VectorProgram {
        VectorProgram::Affine(
            AffineVectorProgram::new(
                Region::Closed(Polyhedron::universe(1)),
                AffineMap::identity(1),
                AffineMap::new(1, vec![ivec(&[-1])], ivec(&[1])).unwrap(),
                OrderCone::orthant(1),
                OrderCone::orthant(1),
            )
            .unwrap(),
        )
    }

    #[test]
    fn example_certificate() {
        let c = certify_multiplier(&example(), &ivec(&[0, 0])).unwrap();
        assert_eq!(c.separators.generators, vec![Separator::new(ivec(&[0]), ivec(&[0, 1]))]);
        assert!(c.status_p0.minimal);
        let d = c.status_d.as_ref().unwrap();
        assert!(d.weak_minimal && !d.minimal);
        assert!(c.dual.exact);
        let m = Region::Closed(Polyhedron::from_h(2, vec![HalfSpace::le(ivec(&[0, -1]), integer(0))]).unwrap());
        assert!(c.dual.region.same_set(&m).unwrap());
        assert_eq!(c.verdict(ClauseId::C1), Verdict::Verified);
        assert_eq!(c.verdict(ClauseId::C3), Verdict::NotApplicable);
        assert_eq!(c.verdict(ClauseId::C4), Verdict::NotApplicable);
        assert!(c.is_clean(), "{:?}", c.clauses);
    }

    #[test]
    fn scalar_certificate() {
        let c = certify_multiplier(&scalar_i2(), &ivec(&[1])).unwrap();
        assert_eq!(c.multipliers, Some(vec![ivec(&[1])]));
        assert_eq!(c.verdict(ClauseId::C3), Verdict::Verified);
        assert!(c.is_clean(), "{:?}", c.clauses);
        let m = Region::Closed(Polyhedron::from_h(1, vec![HalfSpace::le(ivec(&[-1]), integer(-1))]).unwrap());
        assert!(c.dual.region.same_set(&m).unwrap());
    }

    #[test]
    fn i3_certificate() {
        let omega = Polyhedron::from_h(
            2,
            vec![HalfSpace::le(ivec(&[-1, 0]), integer(0)), HalfSpace::le(ivec(&[0, -1]), integer(0))],
        )
        .unwrap();
        let p = VectorProgram::Affine(
            AffineVectorProgram::new(
                Region::Closed(omega),
                AffineMap::identity(2),
                AffineMap::new(2, vec![ivec(&[-1, -1])], ivec(&[1])).unwrap(),
                OrderCone::orthant(2),
                OrderCone::orthant(1),
            )
            .unwrap(),
        );
        let y0 = vec![rational(1, 2), rational(1, 2)];
        let c = certify_multiplier(&p, &y0).unwrap();
        for id in [ClauseId::C1, ClauseId::C2Min, ClauseId::C6Pos, ClauseId::C6He, ClauseId::C7Se] {
            assert_eq!(c.verdict(id), Verdict::Verified, "{id}");
        }
        assert_eq!(c.verdict(ClauseId::C4), Verdict::NotApplicable);
        assert!(c.is_clean(), "{:?}", c.clauses);
    }

    #[test]
    fn flipped_halfspace_is_caught() {
        let flipped = |h: &Separator| halfspace_process(&Separator::new(neg(&h.z_star), h.y_star.clone()));
        let c = certify_multiplier_with(&scalar_i2(), &ivec(&[1]), &flipped).unwrap();
        assert!(!c.is_clean());
    }

    #[test]
    fn point_outside_w0_is_refused() {
        assert_eq!(certify_multiplier(&scalar_i2(), &ivec(&[0])).unwrap_err(), Error::NotInW0);
    }
}
