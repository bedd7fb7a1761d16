#![allow(dead_code)]

use process_duality_core::exactlp::{integer, lp_solve, neg, LinearSystem, Rational, RationalVector, Sense};
use process_duality_core::model::{AffineVectorProgram, FiniteProgram, OrderCone, SampledPoint};
use process_duality_core::polyhedra::{AffineMap, HalfSpace, PolyhedralCone, Polyhedron, Region};
use proptest::prelude::*;

pub fn small_vec(dim: usize, lo: i64, hi: i64) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(lo..=hi, dim).prop_map(|v| v.into_iter().map(integer).collect())
}

pub fn nonzero_vec(dim: usize) -> impl Strategy<Value = RationalVector> {
    small_vec(dim, -3, 3).prop_filter("nonzero", |v| v.iter().any(|x| *x != integer(0)))
}

/// `(dim, rays, lines)` with dim ≤ 4, at most five rays and rarely a line.
pub fn cone_parts() -> impl Strategy<Value = (usize, Vec<RationalVector>, Vec<RationalVector>)> {
    (1usize..=4).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(nonzero_vec(d), 0..=5),
            prop::collection::vec(nonzero_vec(d), 0..=1).prop_map(|l| if l.len() == 1 { l } else { vec![] }),
            0u8..4,
        )
            .prop_map(|(d, rays, lines, keep)| (d, rays, if keep == 0 { lines } else { vec![] }))
    })
}

pub fn cone() -> impl Strategy<Value = PolyhedralCone> {
    cone_parts().prop_map(|(d, r, l)| PolyhedralCone::from_generators(d, r, l).unwrap())
}

/// Bounded polyhedron: box `[-3, 3]^dim` cut by up to three random rows.
pub fn polytope(dim: usize) -> impl Strategy<Value = Polyhedron> {
    prop::collection::vec((nonzero_vec(dim), -2i64..=4), 0..=3).prop_map(move |cuts| {
        let mut rows = boxed(dim, 3);
        rows.extend(cuts.into_iter().map(|(a, b)| HalfSpace::le(a, integer(b))));
        Polyhedron::from_h(dim, rows).unwrap()
    })
}

pub fn boxed(dim: usize, r: i64) -> Vec<HalfSpace> {
    let mut rows = Vec::new();
    for i in 0..dim {
        let mut e = vec![integer(0); dim];
        e[i] = integer(1);
        rows.push(HalfSpace::le(e.clone(), integer(r)));
        rows.push(HalfSpace::le(neg(&e), integer(r)));
    }
    rows
}

/// Order cone: the orthant, or the orthant plus extra rays (possibly not
/// pointed, never the whole space).
pub fn order_cone(dim: usize) -> impl Strategy<Value = OrderCone> {
    (prop::collection::vec(small_vec(dim, -1, 2), 0..=2), any::<bool>()).prop_filter_map(
        "whole space",
        move |(extra, orthant)| {
            if orthant {
                return Some(OrderCone::orthant(dim));
            }
            let mut rays: Vec<RationalVector> =
                (0..dim).map(|i| (0..dim).map(|j| integer(i64::from(i == j))).collect()).collect();
            rays.extend(extra.into_iter().filter(|r| r.iter().any(|x| *x != integer(0))));
            OrderCone::from_generators(dim, rays, vec![]).ok()
        },
    )
}

/// LP membership of `w` in `cone(rays) + span(lines)`; independent of any
/// H-representation.
pub fn in_cone_lp(rays: &[RationalVector], lines: &[RationalVector], w: &[Rational]) -> bool {
    let n = rays.len() + lines.len();
    let mut s = LinearSystem::new(n);
    for i in 0..w.len() {
        let row: RationalVector = rays.iter().chain(lines).map(|g| g[i].clone()).collect();
        s.push_eq(row, w[i].clone());
    }
    for i in 0..rays.len() {
        let mut e = vec![integer(0); n];
        e[i] = integer(-1);
        s.push_le(e, integer(0));
    }
    lp_solve(&vec![integer(0); n], &s, Sense::Min).unwrap().is_feasible()
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<RationalVector>> {
    prop::collection::vec(small_vec(cols, -2, 2), rows)
}

/// Affine program with Ω a polytope around the origin and `g(0) = −1`, so
/// the origin is a Slater point for any order cone containing the orthant.
pub fn affine_program(max_dim: usize) -> impl Strategy<Value = AffineVectorProgram> {
    (1..=max_dim, 1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(n, m, p)| {
            (
                prop::collection::vec((nonzero_vec(n), 1i64..=3), 0..=2),
                matrix(m, n),
                small_vec(m, -2, 2),
                matrix(p, n),
                order_cone(m),
                order_cone(p),
                Just(n),
            )
        })
        .prop_map(|(cuts, f, cf, g, y_plus, z_plus, n)| {
            let mut rows = boxed(n, 2);
            rows.extend(cuts.into_iter().map(|(a, b)| HalfSpace::le(a, integer(b))));
            let omega = Region::Closed(Polyhedron::from_h(n, rows).unwrap());
            let cg = vec![integer(-1); g.len()];
            AffineVectorProgram::new(
                omega,
                AffineMap::new(n, f, cf).unwrap(),
                AffineMap::new(n, g, cg).unwrap(),
                y_plus,
                z_plus,
            )
            .unwrap()
        })
}

/// Discrete or set-valued program with at most six points.
pub fn finite_program(max_dim: usize) -> impl Strategy<Value = FiniteProgram> {
    (1..=max_dim, 1..=max_dim, any::<bool>())
        .prop_flat_map(|(m, p, single)| {
            let values = if single { 1..=1usize } else { 1..=2usize };
            (
                prop::collection::vec(
                    (
                        prop::collection::vec(small_vec(m, -2, 2), values.clone()),
                        prop::collection::vec(small_vec(p, -2, 1), values),
                    ),
                    1..=6,
                ),
                order_cone(m),
                order_cone(p),
                Just(single),
            )
        })
        .prop_map(|(pts, y_plus, z_plus, single)| {
            let pts = pts.into_iter().enumerate();
            if single {
                let pts = pts.map(|(i, (f, g))| (format!("x{i}"), f[0].clone(), g[0].clone())).collect();
                FiniteProgram::discrete(pts, y_plus, z_plus).unwrap()
            } else {
                let pts = pts
                    .map(|(i, (f_values, g_values))| SampledPoint { id: format!("x{i}"), f_values, g_values })
                    .collect();
                FiniteProgram::set_valued(pts, y_plus, z_plus).unwrap()
            }
        })
}
