//! Dense matrices over an exact field: reduced row echelon form, kernels,
//! particular solutions and canonical quotient bases.
//!
//! Every routine is deterministic: RREF is unique, kernel vectors are the
//! standard free-variable basis, and `solve` returns the solution whose
//! non-pivot coordinates vanish. Reports built on top of these are
//! therefore stable byte for byte.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("entries", &rows)
            .finish()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; `cols` is needed for the empty case.
    pub fn from_rows(cols: usize, rows: &[Vec<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, factor: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| factor.clone() * a.clone()).collect(),
        }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other)?.sub(&other.mul(self)?))
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(cols: usize, blocks: &[Matrix<T>]) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::Dimension("vstack column mismatch".into()));
            }
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].clone() * inv.clone();
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical null-space basis: one vector per free column, with that
    /// coordinate set to one, ordered by free column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, free)].clone();
                }
                v
            })
            .collect()
    }

    /// The solution of `self * x = b` with all non-pivot coordinates zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows, "right-hand side length must equal row count");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Nonzero rows of the RREF of the given vectors: a canonical basis of their span.
pub fn span_basis<T: Scalar>(dim: usize, vectors: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let m = Matrix::from_rows(dim, vectors)?;
    let (r, pivots) = m.rref();
    Ok((0..pivots.len()).map(|i| r.row(i).to_vec()).collect())
}

pub fn rank_of<T: Scalar>(dim: usize, vectors: &[Vec<T>]) -> Result<usize> {
    Ok(Matrix::from_rows(dim, vectors)?.rank())
}

/// Representatives of a basis of `span(total) / span(subspace)`.
///
/// The canonical RREF basis of `total` is scanned in order and each vector
/// that is independent of the subspace plus the vectors already chosen is
/// kept. Fails with [`Error::NotContained`] if the subspace is not inside
/// the span of `total`.
pub fn quotient_basis<T: Scalar>(
    ambient_dim: usize,
    subspace: &[Vec<T>],
    total: &[Vec<T>],
) -> Result<Vec<Vec<T>>> {
    let total_basis = span_basis(ambient_dim, total)?;
    let mut combined = total_basis.clone();
    combined.extend(subspace.iter().cloned());
    if rank_of(ambient_dim, &combined)? != total_basis.len() {
        return Err(Error::NotContained);
    }
    let mut chosen = span_basis(ambient_dim, subspace)?;
    let mut current_rank = chosen.len();
    let mut reps = Vec::new();
    for v in total_basis {
        chosen.push(v.clone());
        let r = rank_of(ambient_dim, &chosen)?;
        if r > current_rank {
            current_rank = r;
            reps.push(v);
        } else {
            chosen.pop();
        }
    }
    Ok(reps)
}

/// A quotient `span(reps) ⊕ sub / sub` together with a coordinate map.
#[derive(Clone, Debug)]
pub struct Quotient<T> {
    ambient_dim: usize,
    representatives: Vec<Vec<T>>,
    solver: Matrix<T>,
}

impl<T: Scalar> Quotient<T> {
    pub fn new(ambient_dim: usize, subspace: &[Vec<T>], total: &[Vec<T>]) -> Result<Self> {
        let representatives = quotient_basis(ambient_dim, subspace, total)?;
        let sub = span_basis(ambient_dim, subspace)?;
        let mut cols = representatives.clone();
        cols.extend(sub);
        let solver = Matrix::from_columns(ambient_dim, &cols)?;
        Ok(Quotient {
            ambient_dim,
            representatives,
            solver,
        })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn representatives(&self) -> &[Vec<T>] {
        &self.representatives
    }

    /// Coordinates of the class of `v`, or `None` if `v` is outside
    /// `span(reps) + sub`.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        let x = self.solver.solve(v)?;
        Some(x[..self.dim()].to_vec())
    }
}

/// True if `v` lies in the span of `vectors`.
pub fn in_span<T: Scalar>(dim: usize, vectors: &[Vec<T>], v: &[T]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(v.iter().all(Zero::is_zero));
    }
    let m = Matrix::from_columns(dim, vectors)?;
    Ok(m.solve(v).is_some())
}
