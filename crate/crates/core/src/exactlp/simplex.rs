//! Dense two-phase tableau simplex over the rationals.
//!
//! Free variables are split as `x = p - q`, `≤` rows get a slack, every row
//! gets an artificial column. The artificial columns are kept (but barred
//! from entering) during phase two, which makes `B⁻¹` and hence the dual
//! multipliers readable off the final objective row.

use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use super::{dot, zeros, LinearSystem, Rational, RationalVector};
use crate::error::{check_dim, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Optimal primal/dual pair.
///
/// Sign convention for the multipliers (`λ ≥ 0` on `≤` rows, `μ` free on
/// equality rows):
/// - `Min`: `c + Aᵀλ + Eᵀμ = 0` and `c·x* = -(λ·b + μ·d)`;
/// - `Max`: `c = Aᵀλ + Eᵀμ` and `c·x* = λ·b + μ·d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub point: RationalVector,
    pub value: Rational,
    pub le_duals: RationalVector,
    pub eq_duals: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LpSolution {
    /// Exact optimality certificate: primal feasibility, dual sign
    /// conditions, stationarity, complementary slackness and equal
    /// objective values.
    pub fn certifies(&self, objective: &[Rational], system: &LinearSystem, sense: Sense) -> bool {
        if !system.satisfied_by(&self.point) || dot(objective, &self.point) != self.value {
            return false;
        }
        if self.le_duals.len() != system.le.len() || self.eq_duals.len() != system.eq.len() {
            return false;
        }
        if self.le_duals.iter().any(Signed::is_negative) {
            return false;
        }
        let slack_ok = system
            .le
            .iter()
            .zip(&self.le_duals)
            .all(|(row, l)| l.is_zero() || dot(&row.coeffs, &self.point) == row.rhs);
        if !slack_ok {
            return false;
        }
        let mut combo = zeros(system.dim());
        let mut bound = Rational::zero();
        for (row, l) in system.le.iter().zip(&self.le_duals) {
            for (c, a) in combo.iter_mut().zip(&row.coeffs) {
                *c += l * a;
            }
            bound += l * &row.rhs;
        }
        for (row, m) in system.eq.iter().zip(&self.eq_duals) {
            for (c, a) in combo.iter_mut().zip(&row.coeffs) {
                *c += m * a;
            }
            bound += m * &row.rhs;
        }
        match sense {
            Sense::Max => combo.as_slice() == objective && bound == self.value,
            Sense::Min => combo.iter().zip(objective).all(|(a, c)| *a == -c) && -bound == self.value,
        }
    }
}

struct Tableau {
    rows: Vec<RationalVector>,
    obj: RationalVector,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, y) in self.obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on columns `< allowed`. Returns false on
    /// unboundedness.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.ncols;
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves `min/max objective·x` over `le` and `eq` rows of `system`.
pub fn lp_solve(objective: &[Rational], system: &LinearSystem, sense: Sense) -> Result<LpOutcome> {
    system.validate()?;
    check_dim(system.dim(), objective.len())?;
    if !system.strict.is_empty() {
        return Err(Error::Invalid("lp_solve does not accept strict rows".into()));
    }
    let n = system.dim();
    let m_le = system.le.len();
    let m = m_le + system.eq.len();
    let art0 = 2 * n + m_le;
    let ncols = art0 + m;

    let mut rows = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    for (i, row) in system.le.iter().chain(&system.eq).enumerate() {
        let mut t = zeros(ncols + 1);
        for (k, a) in row.coeffs.iter().enumerate() {
            t[k] = a.clone();
            t[n + k] = -a;
        }
        if i < m_le {
            t[2 * n + i] = Rational::one();
        }
        t[ncols] = row.rhs.clone();
        let flip = row.rhs.is_negative();
        if flip {
            for v in t.iter_mut() {
                *v = -&*v;
            }
        }
        t[art0 + i] = Rational::one();
        signs.push(!flip);
        rows.push(t);
    }

    // phase one: minimise the sum of artificials
    let mut obj = zeros(ncols + 1);
    for row in &rows {
        for j in 0..art0 {
            obj[j] -= &row[j];
        }
        obj[ncols] -= &row[ncols];
    }
    let mut tab = Tableau { rows, obj, basis: (art0..ncols).collect(), ncols };
    tab.run(art0);
    if !tab.obj[ncols].is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, c);
            }
        }
    }

    // phase two
    let mut cost = zeros(ncols);
    for (k, c) in objective.iter().enumerate() {
        let c = match sense {
            Sense::Min => c.clone(),
            Sense::Max => -c,
        };
        cost[n + k] = -&c;
        cost[k] = c;
    }
    let mut obj = zeros(ncols + 1);
    obj[..ncols].clone_from_slice(&cost);
    for (r, row) in tab.rows.iter().enumerate() {
        let cb = &cost[tab.basis[r]];
        if cb.is_zero() {
            continue;
        }
        for (x, y) in obj.iter_mut().zip(row) {
            *x -= cb * y;
        }
    }
    tab.obj = obj;
    if !tab.run(art0) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut vals = zeros(ncols);
    for (r, &b) in tab.basis.iter().enumerate() {
        vals[b] = tab.rows[r][ncols].clone();
    }
    let point: RationalVector = (0..n).map(|k| &vals[k] - &vals[n + k]).collect();
    let value = dot(objective, &point);
    // π_i = -reduced cost of artificial i; multiplier = -σ_i π_i
    let mut duals: RationalVector = (0..m)
        .map(|i| {
            let pi = -&tab.obj[art0 + i];
            if signs[i] {
                -pi
            } else {
                pi
            }
        })
        .collect();
    let eq_duals = duals.split_off(m_le);
    let sol = LpSolution { point, value, le_duals: duals, eq_duals };
    debug_assert!(sol.certifies(objective, system, sense));
    Ok(LpOutcome::Optimal(sol))
}

/// Decides whether some point satisfies all `≤`, `=` and `<` rows.
///
/// Maximises a common slack `t ≤ 1` added to every strict row; the system
/// is feasible iff the optimum is positive. The returned witness meets each
/// strict row with margin at least that optimum.
pub fn strict_feasible(system: &LinearSystem) -> Result<Option<RationalVector>> {
    system.validate()?;
    let n = system.dim();
    if system.strict.is_empty() {
        let plain = LinearSystem { strict: Vec::new(), ..system.clone() };
        return Ok(match lp_solve(&zeros(n), &plain, Sense::Min)? {
            LpOutcome::Optimal(s) => Some(s.point),
            _ => None,
        });
    }
    let lift = |row: &super::Row, t: Rational| {
        let mut c = row.coeffs.clone();
        c.push(t);
        c
    };
    let mut aux = LinearSystem::new(n + 1);
    for row in &system.le {
        aux.push_le(lift(row, Rational::zero()), row.rhs.clone());
    }
    for row in &system.eq {
        aux.push_eq(lift(row, Rational::zero()), row.rhs.clone());
    }
    for row in &system.strict {
        aux.push_le(lift(row, Rational::one()), row.rhs.clone());
    }
    let mut cap = zeros(n + 1);
    cap[n] = Rational::one();
    aux.push_le(cap.clone(), Rational::one());
    match lp_solve(&cap, &aux, Sense::Max)? {
        LpOutcome::Optimal(s) if s.value.is_positive() => {
            let mut x = s.point;
            x.truncate(n);
            debug_assert!(system.satisfied_by(&x));
            Ok(Some(x))
        }
        _ => Ok(None),
    }
}
