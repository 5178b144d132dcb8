//! Dense matrices over exact rationals.
//!
//! Everything here is exact: elimination uses the deterministic
//! first-nonzero pivot in column order and entries stay in canonical
//! lowest-terms form, so results are reproducible bit for bit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratlin::Rat;

/// A dense `rows x cols` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatRepr", into = "MatRepr")]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

/// Wire form: `{"rows":r,"cols":c,"entries":[...]}` with row-major entries.
#[derive(Serialize, Deserialize)]
struct MatRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl TryFrom<MatRepr> for Mat {
    type Error = Error;
    fn try_from(r: MatRepr) -> Result<Mat> {
        Mat::new(r.rows, r.cols, r.entries)
    }
}

impl From<Mat> for MatRepr {
    fn from(m: Mat) -> MatRepr {
        MatRepr { rows: m.rows, cols: m.cols, entries: m.entries }
    }
}

impl Mat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(Mat { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat { rows, cols, entries }
    }

    /// Builds a matrix from integer rows; test and fixture convenience.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| Rat::from_int(rows[i][j]))
    }

    pub fn column_vector(entries: Vec<Rat>) -> Self {
        let rows = entries.len();
        Mat { rows, cols: 1, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Copy of the block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        assert!(r1 <= self.rows && c1 <= self.cols && r0 <= r1 && c0 <= c1);
        Mat::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Writes `other` into this matrix with top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, other: &Mat) {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols);
        for i in 0..other.rows {
            for j in 0..other.cols {
                self[(r0 + i, c0 + j)] = other[(i, j)].clone();
            }
        }
    }

    /// Row-major flattening as a column vector.
    pub fn vectorize(&self) -> Vec<Rat> {
        self.entries.clone()
    }

    /// Exact matrix product; errors on mismatched inner dimensions.
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] += &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to {}-vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect())
    }

    /// Exact determinant by elimination with first-nonzero pivoting.
    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !a[(r, col)].is_zero()) {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &p;
                for c in col..n {
                    let sub = &factor * &a[(col, c)];
                    a[(r, c)] -= &sub;
                }
            }
        }
        det
    }

    /// Exact inverse; `Err(SingularMatrix)` when none exists.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].clone();
            let pinv = p.recip().expect("pivot nonzero");
            for c in 0..n {
                a[(col, c)] = &a[(col, c)] * &pinv;
                inv[(col, c)] = &inv[(col, c)] * &pinv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in 0..n {
                    let s = &factor * &a[(col, c)];
                    a[(r, c)] -= &s;
                    let s = &factor * &inv[(col, c)];
                    inv[(r, c)] -= &s;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r0: usize, r1: usize) {
        if r0 == r1 {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(r0 * self.cols + c, r1 * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    /// Operator form of [`Mat::mul`]; panics on dimension mismatch.
    fn mul(self, rhs: &Mat) -> Mat {
        Mat::mul(self, rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum shape mismatch");
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference shape mismatch");
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Rat::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Full solution set of `a * x = b`: one particular solution together with a
/// basis of the null space of `a` (as column vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Mat,
    pub nullspace: Vec<Mat>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.nullspace.is_empty()
    }
}

/// Solves `a * x = b` exactly for a matrix right-hand side.
///
/// Returns `None` when the system is inconsistent. Free variables of the
/// particular solution are set to zero; the null-space basis has one vector
/// per free column, in column order.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<LinearSolution>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: lhs has {} rows, rhs has {}",
            a.rows(),
            b.rows()
        )));
    }
    let (m, n, k) = (a.rows(), a.cols(), b.cols());
    // Reduced row echelon form of the augmented system, first-nonzero pivots.
    let mut aug = Mat::zeros(m, n + k);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, b);
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let pivot = match (row..m).find(|&r| !aug[(r, col)].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        aug.swap_rows(pivot, row);
        let p = aug[(row, col)].clone();
        let pinv = p.recip().expect("pivot nonzero");
        for c in col..n + k {
            aug[(row, c)] = &aug[(row, c)] * &pinv;
        }
        for r in 0..m {
            if r == row || aug[(r, col)].is_zero() {
                continue;
            }
            let factor = aug[(r, col)].clone();
            for c in col..n + k {
                let s = &factor * &aug[(row, c)];
                aug[(r, c)] -= &s;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    // Inconsistency: a zero lhs row with nonzero rhs.
    for r in row..m {
        if (n..n + k).any(|c| !aug[(r, c)].is_zero()) {
            return Ok(None);
        }
    }
    let mut particular = Mat::zeros(n, k);
    for (r, &pc) in pivot_cols.iter().enumerate() {
        for c in 0..k {
            particular[(pc, c)] = aug[(r, n + c)].clone();
        }
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut nullspace = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = Mat::zeros(n, 1);
        v[(fc, 0)] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[(pc, 0)] = -&aug[(r, fc)];
        }
        nullspace.push(v);
    }
    Ok(Some(LinearSolution { particular, nullspace }))
}

/// Exact 2x2-block LDU factorization of a square matrix with respect to the
/// split `(split, n - split)`: `a = L * D * U` with `L` block-lower-unipotent,
/// `D` block-diagonal and `U` block-upper-unipotent.
///
/// Errors with [`Error::OffCell`] exactly when the leading `split x split`
/// block is singular, in which case the factorization does not exist.
pub fn block_ldu(a: &Mat, split: usize) -> Result<(Mat, Mat, Mat)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("block LDU of non-square matrix".into()));
    }
    let n = a.rows();
    if split > n {
        return Err(Error::DimensionMismatch(format!("split {split} exceeds size {n}")));
    }
    let a11 = a.block(0, split, 0, split);
    let a12 = a.block(0, split, split, n);
    let a21 = a.block(split, n, 0, split);
    let a22 = a.block(split, n, split, n);
    let a11_inv = a11.inverse().map_err(|e| match e {
        Error::SingularMatrix => Error::OffCell,
        other => other,
    })?;

    let l21 = &a21 * &a11_inv;
    let u12 = &a11_inv * &a12;
    let schur = &a22 - &(&l21 * &a12);

    let mut l = Mat::identity(n);
    l.set_block(split, 0, &l21);
    let mut u = Mat::identity(n);
    u.set_block(0, split, &u12);
    let mut d = Mat::zeros(n, n);
    d.set_block(0, 0, &a11);
    d.set_block(split, split, &schur);
    Ok((l, d, u))
}
