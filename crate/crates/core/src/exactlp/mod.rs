//! Exact rational arithmetic and linear programming.
//!
//! Everything is carried in [`Rational`] (arbitrary precision, always in
//! lowest terms). The simplex solver uses Bland's rule, so identical inputs
//! always take identical pivot paths.

mod simplex;

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};

pub use simplex::{lp_solve, strict_feasible, LpOutcome, LpSolution, Sense};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;
pub type RationalMatrix = Vec<RationalVector>;

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds a vector from integer entries.
pub fn ivec(entries: &[i64]) -> RationalVector {
    entries.iter().map(|&e| integer(e)).collect()
}

pub fn zeros(n: usize) -> RationalVector {
    (0..n).map(|_| Rational::zero()).collect()
}

pub fn unit(n: usize, i: usize) -> RationalVector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RationalVector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rational]) -> RationalVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Maximum absolute entry.
pub fn inf_norm(a: &[Rational]) -> Rational {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Positive rescaling so the first nonzero entry has absolute value one.
pub fn normalize_direction(a: &[Rational]) -> RationalVector {
    match a.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            scale(a, &s)
        }
        None => a.to_vec(),
    }
}

/// Rescaling (sign allowed) so the first nonzero entry equals one.
pub fn normalize_line(a: &[Rational]) -> RationalVector {
    match a.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.recip();
            scale(a, &s)
        }
        None => a.to_vec(),
    }
}

/// Matrix-vector product, one entry per row.
pub fn mat_vec(m: &[RationalVector], v: &[Rational]) -> RationalVector {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Row-vector times matrix (`wᵀ M`).
pub fn vec_mat(w: &[Rational], m: &[RationalVector], cols: usize) -> RationalVector {
    let mut out = zeros(cols);
    for (wi, row) in w.iter().zip(m) {
        if wi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o += wi * r;
        }
    }
    out
}

/// Reduced row echelon form, pivoting only on the first `pivot_cols`
/// columns. Zero rows are dropped; pivots are scaled to one.
pub fn rref(mut rows: RationalMatrix, pivot_cols: usize) -> (RationalMatrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (head, tail) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for (x, y) in head.iter_mut().zip(tail.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // Rows past `r` vanish on the pivot columns but may be nonzero elsewhere.
    rows.retain(|row| !is_zero(row));
    (rows, pivots)
}

/// Rank of `rows` restricted to their first `cols` columns.
pub fn rank(rows: &[RationalVector], cols: usize) -> usize {
    rref(rows.to_vec(), cols).1.len()
}

/// One row of a linear system: `coeffs · x (rel) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: RationalVector,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: RationalVector, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }
}

/// `le` rows mean `A·x ≤ b`, `eq` rows `E·x = d`, `strict` rows `C·x < s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    dim: usize,
    pub le: Vec<Row>,
    pub eq: Vec<Row>,
    pub strict: Vec<Row>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        Self { dim, ..Self::default() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn le(mut self, coeffs: RationalVector, rhs: Rational) -> Self {
        self.push_le(coeffs, rhs);
        self
    }

    pub fn eq(mut self, coeffs: RationalVector, rhs: Rational) -> Self {
        self.push_eq(coeffs, rhs);
        self
    }

    pub fn strict(mut self, coeffs: RationalVector, rhs: Rational) -> Self {
        self.push_strict(coeffs, rhs);
        self
    }

    pub fn push_le(&mut self, coeffs: RationalVector, rhs: Rational) {
        self.le.push(Row::new(coeffs, rhs));
    }

    pub fn push_eq(&mut self, coeffs: RationalVector, rhs: Rational) {
        self.eq.push(Row::new(coeffs, rhs));
    }

    pub fn push_strict(&mut self, coeffs: RationalVector, rhs: Rational) {
        self.strict.push(Row::new(coeffs, rhs));
    }

    /// Appends all rows of `other`.
    pub fn extend(&mut self, other: &LinearSystem) -> Result<()> {
        check_dim(self.dim, other.dim)?;
        self.le.extend(other.le.iter().cloned());
        self.eq.extend(other.eq.iter().cloned());
        self.strict.extend(other.strict.iter().cloned());
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for row in self.le.iter().chain(&self.eq).chain(&self.strict) {
            check_dim(self.dim, row.coeffs.len())?;
        }
        Ok(())
    }

    /// Exact check of every row (strict rows strictly).
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.le.iter().all(|r| dot(&r.coeffs, x) <= r.rhs)
            && self.eq.iter().all(|r| dot(&r.coeffs, x) == r.rhs)
            && self.strict.iter().all(|r| dot(&r.coeffs, x) < r.rhs)
    }
}
