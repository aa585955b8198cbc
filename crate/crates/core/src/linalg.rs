//! Exact linear algebra over [`Expr`]: fraction-free determinants and
//! inverses, and an incremental solver for small linear systems.

use std::fmt;

use crate::expr::Expr;

/// Dense row-major matrix of expressions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExprMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Expr>,
}

impl ExprMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExprMatrix {
            rows,
            cols,
            data: vec![Expr::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Expr::one());
        }
        m
    }

    /// Builds from rows; `None` if rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(ExprMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Expr) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExprMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Expr) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Expr> {
        self.data.iter()
    }

    pub fn map(&self, f: impl FnMut(&Expr) -> Expr) -> Self {
        ExprMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).is_zero()))
    }

    pub fn mul(&self, other: &ExprMatrix) -> ExprMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn trace(&self) -> Expr {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Expr {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Expr::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = Expr::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = !sign;
                    }
                    None => return Expr::zero(),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &pivot * a.get(i, j) - a.get(i, k) * a.get(k, j);
                    a.set(
                        i,
                        j,
                        v.try_div(&prev)
                            .expect("Bareiss divisor is a previous pivot"),
                    );
                }
                a.set(i, k, Expr::zero());
            }
            prev = pivot;
        }
        let det = a.get(n - 1, n - 1).clone();
        if sign {
            -det
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Inverse by fraction-free Gauss-Jordan elimination on `[A | I]`.
    ///
    /// After elimination the left block is `d·I` with `d = ±det A` and the
    /// right block is `d·A⁻¹`, so a single division per entry remains.
    pub fn inverse(&self) -> Result<ExprMatrix, SingularMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Expr::one()
            } else {
                Expr::zero()
            }
        });
        let mut prev = Expr::one();
        for k in 0..n {
            match (k..n).find(|&r| !a.get(r, k).is_zero()) {
                Some(r) => a.swap_rows(k, r),
                None => {
                    return Err(SingularMatrix {
                        determinant: Expr::zero(),
                    })
                }
            }
            let pivot = a.get(k, k).clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a.get(i, k).clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let v = &pivot * a.get(i, j) - &factor * a.get(k, j);
                    a.set(i, j, v.try_div(&prev).expect("nonzero previous pivot"));
                }
                a.set(i, k, Expr::zero());
            }
            prev = pivot;
        }
        // every diagonal entry now equals the last pivot
        let d = prev;
        Ok(Self::from_fn(n, n, |i, j| {
            a.get(i, n + j).try_div(&d).expect("nonzero determinant")
        }))
    }
}

impl fmt::Debug for ExprMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularMatrix {
    pub determinant: Expr,
}

/// One linear equation `Σ coeffs[u]·unknown[u] = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEquation {
    pub coeffs: Vec<Expr>,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// All unknowns determined.
    Unique(Vec<Expr>),
    /// Consistent with free unknowns; the particular solution sets them to zero.
    Underdetermined {
        particular: Vec<Expr>,
        free: Vec<usize>,
    },
    /// Equation `index` (in input order) is the first whose inclusion
    /// contradicts the preceding ones.
    Inconsistent { index: usize },
}

/// Solves exactly by incremental reduced row echelon form, processing the
/// equations in order so that the inconsistency witness is deterministic.
pub fn solve_linear(unknowns: usize, equations: &[LinearEquation]) -> LinearSolution {
    // (pivot column, normalized row with coeff[pivot] == 1)
    let mut basis: Vec<(usize, LinearEquation)> = Vec::new();
    for (index, eq) in equations.iter().enumerate() {
        assert_eq!(eq.coeffs.len(), unknowns, "equation width mismatch");
        let mut row = eq.clone();
        for (p, b) in &basis {
            let f = row.coeffs[*p].clone();
            if f.is_zero() {
                continue;
            }
            for u in 0..unknowns {
                row.coeffs[u] = &row.coeffs[u] - &f * &b.coeffs[u];
            }
            row.rhs = &row.rhs - &f * &b.rhs;
        }
        match row.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                if !row.rhs.is_zero() {
                    return LinearSolution::Inconsistent { index };
                }
            }
            Some(p) => {
                let inv = row.coeffs[p].recip().expect("nonzero pivot");
                for c in row.coeffs.iter_mut() {
                    *c = &*c * &inv;
                }
                row.rhs = &row.rhs * &inv;
                for (_, b) in basis.iter_mut() {
                    let f = b.coeffs[p].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for u in 0..unknowns {
                        b.coeffs[u] = &b.coeffs[u] - &f * &row.coeffs[u];
                    }
                    b.rhs = &b.rhs - &f * &row.rhs;
                }
                basis.push((p, row));
            }
        }
    }
    let mut solution = vec![Expr::zero(); unknowns];
    for (p, row) in &basis {
        solution[*p] = row.rhs.clone();
    }
    let free: Vec<usize> = (0..unknowns)
        .filter(|u| !basis.iter().any(|(p, _)| p == u))
        .collect();
    if free.is_empty() {
        LinearSolution::Unique(solution)
    } else {
        LinearSolution::Underdetermined {
            particular: solution,
            free,
        }
    }
}
