//! Exhaustive reference answers for finite programs.
//!
//! Everything here works from generators of the order cones and pairwise
//! comparisons of image points, never from the H-representations and cell
//! decompositions used by the main pipeline.

use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlp::{add, dot, lp_solve, neg, sub, unit, zeros, LinearSystem, Rational, RationalVector, Sense};
use crate::model::{FiniteProgram, OrderCone};

/// `w = Σ μᵢ rᵢ + Σ νⱼ lⱼ` with `μ ≥ 0`.
pub fn in_cone_by_generators(k: &OrderCone, w: &[Rational]) -> Result<bool> {
    Ok(combination(k, w, false)?.is_some())
}

/// `w − ε·Σ rᵢ` is a conic combination for some `ε > 0`.
pub fn in_interior_by_generators(k: &OrderCone, w: &[Rational]) -> Result<bool> {
    Ok(combination(k, w, true)?.is_some_and(|eps| eps.is_positive()))
}

fn combination(k: &OrderCone, w: &[Rational], with_slack: bool) -> Result<Option<Rational>> {
    let m = k.dim();
    check_dim(m, w.len())?;
    let gens = k.cone().generators();
    let (nr, nl) = (gens.rays.len(), gens.lines.len());
    let n = nr + nl + usize::from(with_slack);
    let direction = gens.rays.iter().fold(zeros(m), |acc, r| add(&acc, r));
    let mut s = LinearSystem::new(n);
    for i in 0..m {
        let mut row: RationalVector = gens.rays.iter().chain(&gens.lines).map(|g| g[i].clone()).collect();
        if with_slack {
            row.push(direction[i].clone());
        }
        s.push_eq(row, w[i].clone());
    }
    for i in 0..nr {
        s.push_le(neg(&unit(n, i)), Rational::zero());
    }
    let mut objective = zeros(n);
    if with_slack {
        s.push_le(unit(n, n - 1), Rational::one());
        objective[n - 1] = Rational::one();
    }
    Ok(lp_solve(&objective, &s, Sense::Max)?.optimal().map(|sol| {
        if with_slack {
            sol.point[n - 1].clone()
        } else {
            Rational::zero()
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleStatus {
    pub minimal: bool,
    pub weak_minimal: bool,
    /// `None` when `Y₊` is not pointed.
    pub pos: Option<bool>,
}

/// Image points of `W(0)` for a finite program, using generator tests for
/// the feasibility rule `G(x) ∩ (−Z₊) ≠ ∅`.
pub fn brute_force_image(p: &FiniteProgram) -> Result<Vec<RationalVector>> {
    let z_plus = p.z_plus();
    let mut out: Vec<RationalVector> = Vec::new();
    for point in p.points() {
        let mut feasible = false;
        for g in &point.g_values {
            if in_cone_by_generators(z_plus, &neg(g))? {
                feasible = true;
                break;
            }
        }
        if feasible {
            for f in &point.f_values {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        }
    }
    Ok(out)
}

pub fn brute_force_status(p: &FiniteProgram, y0: &[Rational]) -> Result<OracleStatus> {
    let image = brute_force_image(p)?;
    if !image.iter().any(|a| a.as_slice() == y0) {
        return Err(Error::NotMember);
    }
    let y_plus = p.y_plus();
    let mut minimal = true;
    let mut weak_minimal = true;
    for a in &image {
        let down = sub(y0, a);
        if minimal && in_cone_by_generators(y_plus, &down)? && !in_cone_by_generators(y_plus, &neg(&down))? {
            minimal = false;
        }
        if weak_minimal && in_interior_by_generators(y_plus, &down)? {
            weak_minimal = false;
        }
    }
    let pos = if y_plus.is_pointed() {
        let m = y0.len();
        let mut s = LinearSystem::new(m);
        for r in &y_plus.cone().generators().rays {
            s.push_le(neg(r), -Rational::one());
        }
        for a in &image {
            s.push_le(sub(y0, a), Rational::zero());
        }
        Some(lp_solve(&zeros(m), &s, Sense::Min)?.is_feasible())
    } else {
        None
    };
    Ok(OracleStatus { minimal, weak_minimal, pos })
}

/// `y*·y0 ≤ y*·a` for all `a`, with `y*` strictly positive on `Y₊ \ {0}`.
pub fn positive_witness_holds(y_star: &[Rational], y0: &[Rational], image: &[RationalVector], k: &OrderCone) -> bool {
    k.cone().rays().iter().all(|r| dot(y_star, r).is_positive())
        && image.iter().all(|a| dot(y_star, a) >= dot(y_star, y0))
}
