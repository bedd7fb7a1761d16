//! Minimality, weak minimality and proper efficiency of a point in a set.

use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlp::{add, inf_norm, lp_solve, neg, scale, sub, zeros, LinearSystem, Rational, RationalVector, Sense};
use crate::model::OrderCone;
use crate::polyhedra::{cone_structure, intersect_empty, PolyhedralCone, Polyhedron, Region, StrictHalfspace, VRep};

fn require_member(a: &Region, y0: &[Rational]) -> Result<()> {
    if a.contains(y0)? {
        Ok(())
    } else {
        Err(Error::NotMember)
    }
}

/// `A ∩ (y0 − Int Y₊) = ∅`.
pub fn is_weak_minimal(a: &Region, y0: &[Rational], yplus: &OrderCone) -> Result<bool> {
    require_member(a, y0)?;
    weak_minimal_unchecked(a, y0, yplus)
}

pub(crate) fn weak_minimal_unchecked(a: &Region, y0: &[Rational], yplus: &OrderCone) -> Result<bool> {
    let strict: Vec<StrictHalfspace> =
        yplus.strictly_below(y0).into_iter().map(|(c, s)| StrictHalfspace::new(c, s)).collect();
    Ok(intersect_empty(core::slice::from_ref(a), &strict)?.is_empty())
}

/// `A ∩ (y0 − Y₊) ⊆ y0 + Y₊`, one strict test per facet of `Y₊`.
pub fn is_minimal(a: &Region, y0: &[Rational], yplus: &OrderCone) -> Result<bool> {
    require_member(a, y0)?;
    minimal_unchecked(a, y0, yplus)
}

pub(crate) fn minimal_unchecked(a: &Region, y0: &[Rational], yplus: &OrderCone) -> Result<bool> {
    let below = Region::Closed(Polyhedron::from_h(y0.len(), yplus.below(y0))?);
    for n in yplus.cone().inequalities() {
        // n·(y − y0) > 0 leaves y0 + Y₊
        let leave = StrictHalfspace::new(neg(n), -crate::exactlp::dot(n, y0));
        if !intersect_empty(&[a.clone(), below.clone()], &[leave])?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which certificate established Henig global proper efficiency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GheSource {
    Positive,
    Dilation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperStatus {
    pub pos: bool,
    pub pos_witness: Option<RationalVector>,
    pub ghe: bool,
    pub ghe_source: Option<GheSource>,
    pub he: bool,
    /// `η` with `cone(A − y0) ∩ −cone(Θ + η·B∞) = {0}`.
    pub he_eta: Option<Rational>,
    pub se: bool,
    pub se_rho: Option<Rational>,
}

const ETA_HALVINGS: usize = 64;

/// Positive, Henig global, Henig and super efficiency of `y0` in `A`
/// (closed), with `B` the ∞-norm unit ball.
pub fn classify_proper(a: &Polyhedron, y0: &[Rational], yplus: &OrderCone) -> Result<ProperStatus> {
    if !yplus.is_pointed() {
        return Err(Error::NotPointed);
    }
    if !a.contains(y0)? {
        return Err(Error::NotMember);
    }
    let m = y0.len();
    let g = a.generators();
    let mut rays: Vec<RationalVector> = g.vertices.iter().map(|v| sub(v, y0)).collect();
    rays.extend(g.rays.iter().cloned());
    let cone_a = PolyhedralCone::from_generators(m, rays, g.lines.clone())?;
    let y_rays = yplus.cone().rays();

    // Pos: y*·r ≥ 1 on Y₊ rays, y* ≥ 0 on cone(A − y0).
    let mut s = LinearSystem::new(m);
    for r in y_rays {
        s.push_le(neg(r), -Rational::one());
    }
    for r in cone_a.rays() {
        s.push_le(neg(r), Rational::zero());
    }
    for l in cone_a.lines() {
        s.push_eq(l.clone(), Rational::zero());
    }
    let total = y_rays.iter().fold(zeros(m), |acc, r| add(&acc, r));
    let pos_witness = lp_solve(&total, &s, Sense::Min)?.optimal().map(|sol| sol.point.clone());
    let pos = pos_witness.is_some();

    // He: no u ∈ cone(A − y0) ∩ −Y₊ with ψ·u ≤ −1.
    let structure = cone_structure(yplus.cone());
    let psi = structure.functional.clone().ok_or(Error::NotFullDimensional)?;
    let mut s = LinearSystem::new(m);
    for a_row in cone_a.inequalities() {
        s.push_le(a_row.clone(), Rational::zero());
    }
    for e in cone_a.equalities() {
        s.push_eq(e.clone(), Rational::zero());
    }
    for a_row in yplus.cone().inequalities() {
        s.push_le(neg(a_row), Rational::zero());
    }
    s.push_le(psi.clone(), -Rational::one());
    let he = !lp_solve(&zeros(m), &s, Sense::Min)?.is_feasible();

    let mut he_eta = None;
    let mut dilation_ok = false;
    if he {
        let base: Vec<RationalVector> =
            y_rays.iter().map(|r| scale(r, &crate::exactlp::dot(&psi, r).recip())).collect();
        let mut eta = Rational::one();
        for _ in 0..ETA_HALVINGS {
            let k = dilated_cone(&base, &eta)?;
            if k.is_pointed() && separated(&cone_a, &k)? {
                dilation_ok = y_rays.iter().all(|r| k.contains_interior(r).unwrap_or(false));
                he_eta = Some(eta);
                break;
            }
            eta /= Rational::from_integer(2.into());
        }
    }
    let ghe_source = if pos {
        Some(GheSource::Positive)
    } else if dilation_ok {
        Some(GheSource::Dilation)
    } else {
        None
    };

    // SE: cone(A − y0) ∩ (B∞ − Y₊) bounded.
    let ball_minus = Polyhedron::from_v(
        m,
        VRep { vertices: sign_vectors(m), rays: y_rays.iter().map(|r| neg(r)).collect(), lines: Vec::new() },
    )?;
    let q = cone_a.to_polyhedron().intersect(&ball_minus)?;
    let qv = q.generators();
    let se = qv.is_bounded();
    let se_rho = se.then(|| {
        let rho = qv.vertices.iter().map(|v| inf_norm(v)).max().unwrap_or_else(Rational::zero);
        if rho.is_zero() {
            Rational::one()
        } else {
            rho
        }
    });

    Ok(ProperStatus { pos, pos_witness, ghe: ghe_source.is_some(), ghe_source, he, he_eta, se, se_rho })
}

/// `{±1}^m`.
fn sign_vectors(m: usize) -> Vec<RationalVector> {
    (0..(1usize << m))
        .map(|mask| (0..m).map(|i| if mask & (1 << i) != 0 { -Rational::one() } else { Rational::one() }).collect())
        .collect()
}

/// `cone(Θ + η·B∞)` from the vertices of `Θ`.
fn dilated_cone(base: &[RationalVector], eta: &Rational) -> Result<PolyhedralCone> {
    let m = base.first().map_or(0, Vec::len);
    let mut rays = Vec::with_capacity(base.len() << m);
    for theta in base {
        for s in sign_vectors(m) {
            rays.push(add(theta, &scale(&s, eta)));
        }
    }
    PolyhedralCone::from_generators(m, rays, Vec::new())
}

/// `p ∩ (−k) = {0}`.
fn separated(p: &PolyhedralCone, k: &PolyhedralCone) -> Result<bool> {
    let mut ineqs = p.inequalities().to_vec();
    ineqs.extend(k.inequalities().iter().map(|a| neg(a)));
    let mut eqs = p.equalities().to_vec();
    eqs.extend(k.equalities().iter().cloned());
    Ok(PolyhedralCone::from_constraints(p.dim(), ineqs, eqs)?.is_trivial())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfficiencyStatus {
    pub minimal: bool,
    pub weak_minimal: bool,
    /// `None` when `Y₊` is not pointed.
    pub proper: Option<ProperStatus>,
}

impl EfficiencyStatus {
    pub fn pos(&self) -> Option<bool> {
        self.proper.as_ref().map(|p| p.pos)
    }

    pub fn ghe(&self) -> Option<bool> {
        self.proper.as_ref().map(|p| p.ghe)
    }

    pub fn he(&self) -> Option<bool> {
        self.proper.as_ref().map(|p| p.he)
    }

    pub fn se(&self) -> Option<bool> {
        self.proper.as_ref().map(|p| p.se)
    }

    /// `minimal ⇒ weak`, `pos ⇒ ghe`, `se ⇒ minimal ∧ ghe ∧ he`.
    pub fn is_consistent(&self) -> bool {
        if self.minimal && !self.weak_minimal {
            return false;
        }
        match &self.proper {
            None => true,
            Some(p) => (!p.pos || p.ghe) && (!p.se || (self.minimal && p.ghe && p.he)),
        }
    }
}

/// Full status of `y0` in `A`; the proper notions use the closure of `A`.
pub fn efficiency_status(a: &Region, y0: &[Rational], yplus: &OrderCone) -> Result<EfficiencyStatus> {
    require_member(a, y0)?;
    let proper = if yplus.is_pointed() { Some(classify_proper(&a.closure()?, y0, yplus)?) } else { None };
    Ok(EfficiencyStatus {
        minimal: minimal_unchecked(a, y0, yplus)?,
        weak_minimal: weak_minimal_unchecked(a, y0, yplus)?,
        proper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::{integer, ivec, rational};
    use crate::polyhedra::HalfSpace;
    use alloc::vec;

    fn closed(rows: Vec<HalfSpace>, dim: usize) -> Region {
        Region::Closed(Polyhedron::from_h(dim, rows).unwrap())
    }

    #[test]
    fn upper_halfplane_is_weak_but_not_minimal() {
        let m = closed(vec![HalfSpace::le(ivec(&[0, -1]), integer(0))], 2);
        let y = OrderCone::orthant(2);
        assert!(is_weak_minimal(&m, &ivec(&[0, 0]), &y).unwrap());
        assert!(!is_minimal(&m, &ivec(&[0, 0]), &y).unwrap());
        let p = classify_proper(&m.closure().unwrap(), &ivec(&[0, 0]), &y).unwrap();
        assert!(!p.pos && !p.he && !p.ghe && !p.se);
    }

    #[test]
    fn full_plane_is_not_weak_minimal() {
        let a = Region::Closed(Polyhedron::universe(2));
        assert!(!is_weak_minimal(&a, &ivec(&[0, 0]), &OrderCone::orthant(2)).unwrap());
    }

    #[test]
    fn scalar_half_line() {
        let a = closed(vec![HalfSpace::le(ivec(&[-1]), integer(-1))], 1);
        assert!(is_weak_minimal(&a, &ivec(&[1]), &OrderCone::orthant(1)).unwrap());
        assert!(is_minimal(&a, &ivec(&[1]), &OrderCone::orthant(1)).unwrap());
        assert_eq!(is_minimal(&a, &ivec(&[0]), &OrderCone::orthant(1)), Err(Error::NotMember));
    }

    #[test]
    fn i3_dual_image_point() {
        let m = closed(vec![HalfSpace::le(ivec(&[-1, -1]), integer(-1))], 2);
        let y0 = vec![rational(1, 2), rational(1, 2)];
        let y = OrderCone::orthant(2);
        assert!(is_minimal(&m, &y0, &y).unwrap());
        let p = classify_proper(&m.closure().unwrap(), &y0, &y).unwrap();
        assert!(p.pos && p.he && p.ghe && p.se);
        assert_eq!(p.pos_witness, Some(ivec(&[1, 1])));
        assert_eq!(p.se_rho, Some(integer(1)));
        assert!(p.he_eta.is_some());
    }

    #[test]
    fn orthant_apex() {
        let a = Region::Closed(crate::polyhedra::PolyhedralCone::orthant(2).to_polyhedron());
        let s = efficiency_status(&a, &ivec(&[0, 0]), &OrderCone::orthant(2)).unwrap();
        assert!(s.minimal && s.weak_minimal && s.is_consistent());
        let p = s.proper.unwrap();
        assert_eq!(p.pos_witness, Some(ivec(&[1, 1])));
        assert!(p.se);
    }

    #[test]
    fn non_pointed_order_is_refused() {
        let y = OrderCone::from_generators(2, vec![ivec(&[0, 1])], vec![ivec(&[1, 0])]).unwrap();
        let a = Polyhedron::point(ivec(&[0, 0]));
        assert_eq!(classify_proper(&a, &ivec(&[0, 0]), &y), Err(Error::NotPointed));
    }

    #[test]
    fn weak_but_not_proper_corner() {
        // (1,0) in the triangle conv{(0,0), (1,0), (0,1)} is dominated by (0,0)
        let a = Region::Closed(
            Polyhedron::from_v(
                2,
                VRep { vertices: vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])], ..VRep::default() },
            )
            .unwrap(),
        );
        let y = OrderCone::orthant(2);
        assert!(!is_minimal(&a, &ivec(&[1, 0]), &y).unwrap());
        assert!(is_weak_minimal(&a, &ivec(&[1, 0]), &y).unwrap());
        let s = efficiency_status(&a, &ivec(&[1, 0]), &y).unwrap();
        assert!(s.is_consistent());
        assert_eq!(s.pos(), Some(false));
        assert_eq!(s.se(), Some(false));
    }
}
