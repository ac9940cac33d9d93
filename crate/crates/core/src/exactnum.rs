//! Exact rational arithmetic, dense linear algebra over `Q`, and exact
//! nonnegative feasibility (`A x = b, x >= 0`).
//!
//! Nothing in here ever rounds. Every routine is a pure function of its
//! inputs.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Builds `num / den` in lowest terms. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {text:?} as a rational number")]
pub struct ParseRatError {
    pub text: String,
}

/// Parses `"3/2"`, `"-7"` or `"2"`. Zero denominators are rejected.
pub fn parse_rat(text: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError {
        text: text.to_string(),
    };
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

/// Renders as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        QMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Rat>]) -> Self {
        Self::from_rows(cols).transpose_with_rows(cols.first().map_or(0, Vec::len))
    }

    fn transpose_with_rows(self, rows_if_empty: usize) -> Self {
        if self.rows == 0 {
            return Self::zeros(rows_if_empty, 0);
        }
        self.transpose()
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Submatrix made of the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        QMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in order.
fn rref(m: &mut QMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = m[(r, c)].recip();
        for j in c..m.cols {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..m.rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..m.cols {
                if m[(r, j)].is_zero() {
                    continue;
                }
                let v = &m[(i, j)] - &factor * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals. The empty matrix has rank 0.
pub fn mat_rank(m: &QMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Indices of a maximal linearly independent set of rows, chosen greedily
/// in top-to-bottom order.
pub fn independent_rows(m: &QMatrix) -> Vec<usize> {
    let mut t = m.transpose();
    rref(&mut t)
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(m: &QMatrix) -> Option<QMatrix> {
    assert_eq!(m.rows, m.cols, "invert needs a square matrix");
    let n = m.rows;
    if n == 0 {
        return Some(QMatrix::zeros(0, 0));
    }
    let mut aug = QMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rat::one();
    }
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(inv)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("matrix has rank {rank} but {cols} columns; solution would not be unique")]
    RankDeficient { rank: usize, cols: usize },
    #[error("right-hand side has length {got}, matrix has {rows} rows")]
    ShapeMismatch { rows: usize, got: usize },
}

/// Solves `m x = b` exactly.
///
/// Returns `Ok(Some(x))` for the unique solution, `Ok(None)` when `b` is not
/// in the column span, and `Err(RankDeficient)` when `m` lacks full column
/// rank (the two failure modes mean different things to callers).
pub fn solve_linear(m: &QMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>, SolveError> {
    if b.len() != m.rows {
        return Err(SolveError::ShapeMismatch {
            rows: m.rows,
            got: b.len(),
        });
    }
    let mut aug = QMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    let rank = pivots.iter().filter(|&&c| c < m.cols).count();
    if rank < m.cols {
        return Err(SolveError::RankDeficient { rank, cols: m.cols });
    }
    if pivots.len() > rank {
        return Ok(None);
    }
    Ok(Some((0..m.cols).map(|i| aug[(i, m.cols)].clone()).collect()))
}

/// Decides whether `a x = b` has a solution with `x >= 0` componentwise.
///
/// Phase-I simplex on a dense exact tableau with Bland's rule. Returns one
/// feasible `x` when it exists.
pub fn lp_nonneg_feasible(a: &QMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), a.rows, "dimension mismatch in lp_nonneg_feasible");
    let (m, n) = (a.rows, a.cols);
    if b.iter().all(Zero::is_zero) {
        return Some(vec![Rat::zero(); n]);
    }
    // Tableau columns: n structural, m artificial, 1 rhs.
    let width = n + m + 1;
    let rhs = n + m;
    let mut t = QMatrix::zeros(m, width);
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            t[(i, j)] = if flip { -&a[(i, j)] } else { a[(i, j)].clone() };
        }
        t[(i, n + i)] = Rat::one();
        t[(i, rhs)] = b[i].abs();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-I objective (sum of artificials).
    let mut cost = vec![Rat::zero(); width];
    for i in 0..m {
        for j in 0..n {
            cost[j] -= &t[(i, j)];
        }
        cost[rhs] -= &t[(i, rhs)];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !t[(i, enter)].is_positive() {
                continue;
            }
            let ratio = &t[(i, rhs)] / &t[(i, enter)];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase-I objective is bounded below by 0, so a pivot row exists.
        let (row, _) = leave.expect("phase-I objective is bounded");
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[(i, rhs)].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut QMatrix, cost: &mut [Rat], row: usize, col: usize) {
    let width = t.cols;
    let inv = t[(row, col)].recip();
    for j in 0..width {
        let v = &t[(row, j)] * &inv;
        t[(row, j)] = v;
    }
    for i in 0..t.rows {
        if i == row || t[(i, col)].is_zero() {
            continue;
        }
        let factor = t[(i, col)].clone();
        for j in 0..width {
            if t[(row, j)].is_zero() {
                continue;
            }
            let v = &t[(i, j)] - &factor * &t[(row, j)];
            t[(i, j)] = v;
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for j in 0..width {
            if t[(row, j)].is_zero() {
                continue;
            }
            let v = &cost[j] - &factor * &t[(row, j)];
            cost[j] = v;
        }
    }
}
