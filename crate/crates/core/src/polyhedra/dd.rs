//! Double description for polyhedral cones `{w : A·w ≤ 0, E·w = 0}`.
//!
//! Starts from the whole space (one line per coordinate) and adds one
//! constraint at a time. Lines not orthogonal to the new constraint are used
//! up first; otherwise the rays are split by sign and adjacent pairs across
//! the hyperplane are combined. Adjacency uses the combinatorial test on
//! zero sets.

use alloc::vec::Vec;
use num_traits::{Signed, Zero};

use crate::exactlp::{dot, normalize_direction, scale, sub, unit, Rational, RationalVector};

/// Generators of a polyhedral cone: `cone(rays) + span(lines)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<RationalVector>,
    pub lines: Vec<RationalVector>,
}

struct Ray {
    v: RationalVector,
    zero: Vec<bool>,
}

fn contains_all(big: &[bool], small: &[bool]) -> bool {
    big.iter().zip(small).all(|(b, s)| *b || !*s)
}

/// Extreme rays and a lineality basis of `{w ∈ ℝ^dim : a·w ≤ 0 ∀a ∈ ineqs,
/// e·w = 0 ∀e ∈ eqs}`.
pub fn cone_generators(dim: usize, ineqs: &[RationalVector], eqs: &[RationalVector]) -> ConeGenerators {
    let mut lines: Vec<RationalVector> = (0..dim).map(|i| unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut seen = 0usize;

    let mut constraints: Vec<RationalVector> = Vec::with_capacity(ineqs.len() + 2 * eqs.len());
    for e in eqs {
        constraints.push(e.clone());
        constraints.push(e.iter().map(|x| -x).collect());
    }
    constraints.extend(ineqs.iter().cloned());

    for a in &constraints {
        if let Some(idx) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut lp = lines.remove(idx);
            let mut alp = dot(a, &lp);
            if alp.is_positive() {
                lp = lp.iter().map(|x| -x).collect();
                alp = -alp;
            }
            for l in lines.iter_mut() {
                let al = dot(a, l);
                if !al.is_zero() {
                    *l = sub(l, &scale(&lp, &(al / &alp)));
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    r.v = normalize_direction(&sub(&r.v, &scale(&lp, &(ar / &alp))));
                }
                r.zero.push(true);
            }
            let mut zero = alloc::vec![true; seen];
            zero.push(false);
            rays.push(Ray { v: normalize_direction(&lp), zero });
        } else {
            let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
            let mut next: Vec<Ray> = Vec::new();
            for (p, vp) in vals.iter().enumerate() {
                if !vp.is_positive() {
                    continue;
                }
                for (n, vn) in vals.iter().enumerate() {
                    if !vn.is_negative() {
                        continue;
                    }
                    let common: Vec<bool> = rays[p].zero.iter().zip(&rays[n].zero).map(|(x, y)| *x && *y).collect();
                    let blocked =
                        rays.iter().enumerate().any(|(k, r)| k != p && k != n && contains_all(&r.zero, &common));
                    if blocked {
                        continue;
                    }
                    let v: RationalVector = rays[n].v.iter().zip(&rays[p].v).map(|(x, y)| vp * x - vn * y).collect();
                    let mut zero = common;
                    zero.push(true);
                    next.push(Ray { v: normalize_direction(&v), zero });
                }
            }
            let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
            for (r, v) in rays.into_iter().zip(&vals) {
                if v.is_positive() {
                    continue;
                }
                let mut r = r;
                r.zero.push(v.is_zero());
                kept.push(r);
            }
            kept.extend(next);
            rays = kept;
        }
        seen += 1;
    }

    ConeGenerators { rays: rays.into_iter().map(|r| r.v).collect(), lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::ivec;
    use alloc::vec;

    #[test]
    fn orthant_rays() {
        let g = cone_generators(2, &[ivec(&[-1, 0]), ivec(&[0, -1])], &[]);
        assert!(g.lines.is_empty());
        let mut rays = g.rays;
        rays.sort();
        assert_eq!(rays, vec![ivec(&[0, 1]), ivec(&[1, 0])]);
    }

    #[test]
    fn halfspace_keeps_lines() {
        let g = cone_generators(3, &[ivec(&[0, 0, -1])], &[]);
        assert_eq!(g.lines.len(), 2);
        assert_eq!(g.rays, vec![ivec(&[0, 0, 1])]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over the square |x|,|y| <= z
        let ineqs = [ivec(&[1, 0, -1]), ivec(&[-1, 0, -1]), ivec(&[0, 1, -1]), ivec(&[0, -1, -1])];
        let g = cone_generators(3, &ineqs, &[]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[2], Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn equality_cuts_dimension() {
        let g = cone_generators(2, &[ivec(&[-1, 0])], &[ivec(&[1, -1])]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![ivec(&[1, 1])]);
    }

    #[test]
    fn trivial_cone() {
        let g = cone_generators(1, &[ivec(&[1]), ivec(&[-1])], &[]);
        assert!(g.rays.is_empty() && g.lines.is_empty());
    }
}
