//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use process_duality::fuzz::{
    check_instance, instance_rng, random_cone, random_finite, random_instance, random_scalar_instance, Instance,
};
use process_duality_core::certify::oracle::{brute_force_image, in_cone_by_generators};
use process_duality_core::certify::{brute_force_status, certify_multiplier, efficiency_status, ClauseId, Verdict};
use process_duality_core::exactlp::{dot, integer, lp_solve, neg, LinearSystem, Sense};
use process_duality_core::model::{Feasible, FiniteProgram, VectorProgram};
use process_duality_core::polyhedra::{cone_structure, polar_cone, PolarSign, PolyhedralCone};
use process_duality_core::{Rational, RationalVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 5] = [
        ("example reproduction", Duration::from_secs(1), example),
        ("scalar duality recovery", Duration::from_secs(10), scalar_duality),
        ("clause property suite", Duration::from_secs(300), property_suite),
        ("finite oracle equivalence", Duration::from_secs(300), oracle_equivalence),
        ("geometry kernel invariants", Duration::from_secs(300), geometry),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let line = match result {
            Ok(detail) if elapsed <= *budget => format!("PASS {}: {name} ({detail}; {elapsed:.2?})", i + 1),
            Ok(detail) => format!("FAIL {}: {name} ({detail}; {elapsed:.2?} exceeds {budget:?})", i + 1),
            Err(why) => format!("FAIL {}: {name} ({why}; {elapsed:.2?})", i + 1),
        };
        failed += usize::from(line.starts_with("FAIL"));
        println!("{line}");
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn binary(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_process-duality"))
        .args(args)
        .env_remove("PROCESS_DUALITY_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn strs(v: &Value) -> Vec<&str> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default()
}

fn lists(v: &Value) -> Vec<Vec<&str>> {
    v.as_array().map(|a| a.iter().map(strs).collect()).unwrap_or_default()
}

/// `{-y_last ≤ 0}` on `dim` coordinates: the last one nonnegative, the rest free.
fn last_coordinate_halfspace(set: &Value, dim: usize) -> bool {
    let rows = set["h_rep"].as_array().cloned().unwrap_or_default();
    let mut normal = vec!["0/1"; dim];
    normal[dim - 1] = "-1/1";
    rows.len() == 1 && strs(&rows[0]["normal"]) == normal && rows[0]["offset"] == "0/1" && rows[0]["relation"] == "le"
}

fn example() -> Check {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/example.json");
    let path = path.to_str().unwrap();
    let cert = binary(&["certify", path, "--y0", "0/1,0/1", "--json"])?;
    let c = &cert["result"]["certificates"][0];
    let gens: Vec<Vec<&str>> =
        c["separators"]["generators"].as_array().unwrap().iter().map(|g| strs(&g["joined"])).collect();
    ensure!(gens == [["0/1", "0/1", "1/1"]], "separator generators {gens:?}");
    let graph = &c["process"]["graph"];
    ensure!(last_coordinate_halfspace(graph, 3), "graph {graph}");
    ensure!(lists(&graph["v_rep"]["lines"]) == [["1/1", "0/1", "0/1"], ["0/1", "1/1", "0/1"]], "graph lines");
    ensure!(lists(&graph["v_rep"]["rays"]) == [["0/1", "0/1", "1/1"]], "graph rays");

    let dual = &c["dual_image"];
    ensure!(dual["exact"] == true && dual["region"]["kind"] == "closed", "dual image {dual}");
    ensure!(last_coordinate_halfspace(&dual["region"]["closure"], 2), "dual image {dual}");
    ensure!(c["status_p0"]["minimal"] == true, "P(0) minimality");
    ensure!(c["status_d"]["weak_minimal"] == true, "D weak minimality");
    ensure!(c["status_d"]["minimal"] == false, "D minimality");
    ensure!(c["clean"] == true, "certificate not clean");

    let process = binary(&["process", path, "--y0", "0,0", "--at", "-2", "--at", "0", "--at", "5", "--json"])?;
    let fibers = process["result"]["fibers"].as_array().unwrap();
    ensure!(fibers.len() == 3, "fibers {fibers:?}");
    for f in fibers {
        ensure!(last_coordinate_halfspace(&f["value"], 2), "fiber {f}");
    }
    let frontier = binary(&["frontier", path, "--dual-at", "0,0", "--json"])?;
    ensure!(frontier["result"]["points"].as_array().is_some_and(Vec::is_empty), "Min(M) {frontier}");
    ensure!(frontier["result"]["truncated"] == false, "frontier truncated");
    Ok("S, Graph L, L(-2|0|5), M, statuses and Min(M) = {} match".into())
}

/// Rows `a·x ≤ b` of `Ω` (the box and cuts) for a scalar instance.
fn omega_rows(inst: &Instance) -> Vec<(RationalVector, Rational)> {
    let n = inst.x;
    let mut rows = Vec::new();
    for i in 0..n {
        for s in [1, -1] {
            let e = (0..n).map(|j| integer(if i == j { s } else { 0 })).collect();
            rows.push((e, integer(2)));
        }
    }
    for (a, b) in &inst.cuts {
        rows.push((a.iter().map(|&v| integer(v)).collect(), integer(*b)));
    }
    rows
}

/// Solves the square system exactly; `None` when singular.
fn solve(mut a: Vec<RationalVector>, mut b: RationalVector) -> Option<RationalVector> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Vertices of the bounded polyhedron `{x : a·x ≤ b}`, by trying every
/// square subsystem.
fn vertices(n: usize, rows: &[(RationalVector, Rational)]) -> Vec<RationalVector> {
    let mut out: Vec<RationalVector> = Vec::new();
    let mut pick = vec![0usize; n];
    fn rec(
        n: usize,
        start: usize,
        depth: usize,
        pick: &mut Vec<usize>,
        rows: &[(RationalVector, Rational)],
        out: &mut Vec<RationalVector>,
    ) {
        if depth == n {
            let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
            let b = pick.iter().map(|&i| rows[i].1.clone()).collect();
            if let Some(x) = solve(a, b) {
                if rows.iter().all(|(a, b)| dot(a, &x) <= *b) && !out.contains(&x) {
                    out.push(x);
                }
            }
            return;
        }
        for i in start..rows.len() {
            pick[depth] = i;
            rec(n, i + 1, depth + 1, pick, rows, out);
        }
    }
    rec(n, 0, 0, &mut pick, rows, &mut out);
    out
}

/// `g(x) = G·x − 1` componentwise for a scalar instance.
fn g_value(inst: &Instance, x: &[Rational]) -> RationalVector {
    inst.g
        .iter()
        .zip(&inst.cg)
        .map(|(row, c)| dot(&row.iter().map(|&v| integer(v)).collect::<Vec<_>>(), x) + integer(*c))
        .collect()
}

fn objective(inst: &Instance, x: &[Rational]) -> Rational {
    dot(&inst.f[0].iter().map(|&v| integer(v)).collect::<Vec<_>>(), x)
}

/// Optimal multipliers `λ ≥ 0` with `min_Ω f + λ·g = v`, over `(λ, μ)`:
/// `f + Aᵀμ + Gᵀλ = 0`, `−b·μ − Σλ ≥ v`. Returns each coordinate's range.
fn multiplier_ranges(inst: &Instance, value: &Rational) -> Vec<(Rational, Rational)> {
    let omega = omega_rows(inst);
    let (n, p, k) = (inst.x, inst.g.len(), omega.len());
    let mut s = LinearSystem::new(p + k);
    for i in 0..n {
        let mut row: RationalVector = inst.g.iter().map(|g| integer(g[i])).collect();
        row.extend(omega.iter().map(|(a, _)| a[i].clone()));
        s.push_eq(row, -integer(inst.f[0][i]));
    }
    let mut value_row: RationalVector = inst.cg.iter().map(|&c| -integer(c)).collect();
    value_row.extend(omega.iter().map(|(_, b)| b.clone()));
    s.push_le(value_row, -value.clone());
    for j in 0..p + k {
        let mut e = vec![Rational::zero(); p + k];
        e[j] = -Rational::one();
        s.push_le(e, Rational::zero());
    }
    (0..p)
        .map(|j| {
            let mut c = vec![Rational::zero(); p + k];
            c[j] = Rational::one();
            let lo = lp_solve(&c, &s, Sense::Min).unwrap().optimal().expect("dual optimum exists").value.clone();
            let hi = lp_solve(&c, &s, Sense::Max).unwrap().optimal().expect("dual optimum bounded").value.clone();
            (lo, hi)
        })
        .collect()
}

fn scalar_duality() -> Check {
    let mut unique = 0;
    for i in 0..50u64 {
        let inst = random_scalar_instance(&mut instance_rng(2024, i));
        let p = inst.program().ok_or(format!("instance {i} invalid"))?;
        let mut rows = omega_rows(&inst);
        for row in &inst.g {
            rows.push((row.iter().map(|&v| integer(v)).collect(), integer(1)));
        }
        let feasible = vertices(inst.x, &rows);
        let value = feasible.iter().map(|x| objective(&inst, x)).min().ok_or(format!("instance {i} infeasible"))?;
        let omega_vertices = vertices(inst.x, &omega_rows(&inst));
        let dual_function = |lambda: &[Rational]| -> Rational {
            omega_vertices.iter().map(|x| objective(&inst, x) + dot(lambda, &g_value(&inst, x))).min().unwrap()
        };

        let cert = certify_multiplier(&p, std::slice::from_ref(&value)).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(cert.verdict(ClauseId::C3) == Verdict::Verified, "instance {i}: C3 {:?}", cert.verdict(ClauseId::C3));
        let multipliers = cert.multipliers.clone().unwrap_or_default();
        ensure!(!multipliers.is_empty(), "instance {i}: no nonvertical separator");
        for lambda in &multipliers {
            ensure!(lambda.iter().all(|l| !l.is_negative()), "instance {i}: negative multiplier {lambda:?}");
            ensure!(dual_function(lambda) == value, "instance {i}: multiplier {lambda:?} is not dual optimal");
        }
        let ranges = multiplier_ranges(&inst, &value);
        if ranges.iter().all(|(lo, hi)| lo == hi) {
            unique += 1;
            let lambda: RationalVector = ranges.into_iter().map(|(lo, _)| lo).collect();
            ensure!(multipliers.iter().all(|m| *m == lambda), "instance {i}: {multipliers:?} vs unique {lambda:?}");
        }
    }
    Ok(format!("50 instances, {unique} with a unique multiplier matched exactly, C3 verified on all"))
}

fn property_suite() -> Check {
    const NEEDED: usize = 500;
    let (mut certified, mut points, mut unsupported, mut empty, mut applicable) = (0, 0, 0, 0, [0usize; 4]);
    let mut i = 0u64;
    while certified < NEEDED {
        ensure!(i < 4 * NEEDED as u64, "only {certified} certified instances out of {i}");
        let inst = random_instance(&mut instance_rng(2025, i), None);
        let report = check_instance(&inst, None);
        i += 1;
        ensure!(!report.invalid, "instance {} did not build", i - 1);
        if let Some(e) = &report.error {
            return Err(format!("instance {}: {e}", i - 1));
        }
        if let Some((y, clauses)) = &report.violation {
            let ids: Vec<&str> = clauses.iter().map(|c| c.id.as_str()).collect();
            return Err(format!("instance {} at {y:?} violates {ids:?}", i - 1));
        }
        if report.unsupported {
            unsupported += 1;
            continue;
        }
        if report.points == 0 {
            empty += 1;
            continue;
        }
        certified += 1;
        points += report.points;
        for (slot, id) in [ClauseId::C1, ClauseId::C4, ClauseId::C5, ClauseId::C6Pos].into_iter().enumerate() {
            applicable[slot] += report.verdicts.get(&(id, Verdict::Verified)).copied().unwrap_or(0);
        }
    }
    Ok(format!(
        "{certified} instances, {points} frontier points, no violations; verified C1 {} C4 {} C5 {} C6-pos {}; \
         skipped {empty} without frontier and {unsupported} unsupported",
        applicable[0], applicable[1], applicable[2], applicable[3]
    ))
}

fn wrap(p: FiniteProgram) -> VectorProgram {
    if p.is_single_valued() {
        VectorProgram::Discrete(p)
    } else {
        VectorProgram::SetValued(p)
    }
}

/// Feasible ids at `z` from generator membership of `z − g'`.
fn feasible_by_generators(p: &FiniteProgram, z: &[Rational]) -> Vec<String> {
    p.points()
        .iter()
        .filter(|pt| {
            pt.g_values.iter().any(|g| {
                let w: RationalVector = z.iter().zip(g).map(|(a, b)| a - b).collect();
                in_cone_by_generators(p.z_plus(), &w).unwrap()
            })
        })
        .map(|pt| pt.id.clone())
        .collect()
}

fn oracle_equivalence() -> Check {
    const NEEDED: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let (mut programs, mut compared, mut drawn) = (0, 0, 0);
    while programs < NEEDED {
        ensure!(drawn < 10 * NEEDED, "only {programs} programs with a nonempty image");
        drawn += 1;
        let fp = random_finite(&mut rng);
        let zdim = fp.z_plus().dim();
        let z: RationalVector = (0..zdim).map(|_| integer(rng.random_range(-2..=2))).collect();
        let vp = wrap(fp.clone());
        for point in [vec![Rational::zero(); zdim], z] {
            let expected = feasible_by_generators(&fp, &point);
            let got = match vp.feasible_region(&point).map_err(|e| e.to_string())? {
                Feasible::Ids(ids) => ids,
                Feasible::Region(_) => return Err("finite program with a region".into()),
            };
            ensure!(got == expected, "feasible ids at {point:?}: {got:?} vs {expected:?}");
        }
        let image = brute_force_image(&fp).map_err(|e| e.to_string())?;
        if image.is_empty() {
            continue;
        }
        programs += 1;
        let w0 = vp.image_set(&vec![Rational::zero(); zdim]).map_err(|e| e.to_string())?;
        for y in &image {
            let status = efficiency_status(&w0, y, fp.y_plus()).map_err(|e| e.to_string())?;
            let oracle = brute_force_status(&fp, y).map_err(|e| e.to_string())?;
            ensure!(status.minimal == oracle.minimal, "minimal at {y:?}");
            ensure!(status.weak_minimal == oracle.weak_minimal, "weak minimal at {y:?}");
            ensure!(status.pos() == oracle.pos, "pos at {y:?}: {:?} vs {:?}", status.pos(), oracle.pos);
            compared += 1;
        }
    }
    Ok(format!("{programs} programs, {compared} image points agree; feasibility rule checked at two z each"))
}

fn signed(k: &PolyhedralCone) -> Vec<RationalVector> {
    k.rays().iter().cloned().chain(k.lines().iter().flat_map(|l| [l.clone(), neg(l)])).collect()
}

/// `w ∈ cone(rays) + span(lines)` by LP on the multipliers.
fn in_span(rays: &[RationalVector], lines: &[RationalVector], w: &[Rational]) -> bool {
    let n = rays.len() + lines.len();
    let mut s = LinearSystem::new(n);
    for i in 0..w.len() {
        s.push_eq(rays.iter().chain(lines).map(|g| g[i].clone()).collect(), w[i].clone());
    }
    for i in 0..rays.len() {
        let mut e = vec![Rational::zero(); n];
        e[i] = -Rational::one();
        s.push_le(e, Rational::zero());
    }
    lp_solve(&vec![Rational::zero(); n], &s, Sense::Min).unwrap().is_feasible()
}

fn geometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2027);
    let (mut trivial, mut bounded) = (0, 0);
    for i in 0..1000 {
        let k = random_cone(&mut rng, 4);
        let d = k.dim();
        let original = k.generators().clone();

        for g in original.rays.iter().chain(&original.lines) {
            ensure!(k.inequalities().iter().all(|a| !dot(a, g).is_positive()), "cone {i}: generator violates a facet");
            ensure!(k.equalities().iter().all(|a| dot(a, g).is_zero()), "cone {i}: generator violates an equation");
        }
        let back = PolyhedralCone::from_constraints(d, k.inequalities().to_vec(), k.equalities().to_vec())
            .map_err(|e| e.to_string())?;
        for w in signed(&back) {
            ensure!(in_span(&original.rays, &original.lines, &w), "cone {i}: round trip adds {w:?}");
        }
        ensure!(back.same_cone(&k), "cone {i}: round trip changes the cone");

        let polar = polar_cone(&k, PolarSign::Negative);
        for q in signed(&polar) {
            for g in signed(&k) {
                ensure!(!dot(&q, &g).is_positive(), "cone {i}: polar pairing");
            }
        }
        let again = polar_cone(&polar, PolarSign::Negative);
        ensure!(again.rays() == k.rays() && again.lines() == k.lines(), "cone {i}: polar is not an involution");

        if k.is_trivial() {
            trivial += 1;
            continue;
        }
        let mut s = LinearSystem::new(d);
        for g in signed(&k) {
            s.push_le(neg(&g), -Rational::one());
        }
        let functional = lp_solve(&vec![Rational::zero(); d], &s, Sense::Min).unwrap().is_feasible();
        let structure = cone_structure(&k);
        ensure!(structure.has_bounded_base == functional, "cone {i}: bounded base {}", structure.has_bounded_base);
        bounded += usize::from(functional);
    }
    Ok(format!("1000 cones ({trivial} trivial), {bounded} with a bounded base"))
}
