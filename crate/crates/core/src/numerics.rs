//! Dense linear algebra and the `vec` / `U(x)` / `v(x_s, x_t)` algebra that
//! turns the transform estimation problem into a standard-form QP.
//!
//! `vec` is row-major throughout: `vec(W)` concatenates the rows of `W`.
//! Under that convention `vec(W)ᵀ U(x) vec(W) = ‖W x‖²` with `U(x)` the
//! block-diagonal matrix of `M_S` copies of `x xᵀ`, and the system matrix
//! `V = I + D Σ y_ij U(x_i)` is `blockdiag(B, …, B)` for a single
//! `M_T × M_T` block `B`.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::domain::PairWeights;
use crate::error::{Error, Result};

/// Row-major dense matrix of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for DenseMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        DenseMatrix::from_vec(raw.rows, raw.cols, raw.data)
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting bad lengths and non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "matrix data has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite matrix entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::invalid(format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        // chunks_exact(0) panics, so zero-width matrices yield empty rows by hand
        let cols = self.cols;
        (0..self.rows).map(move |i| &self.data[i * cols..(i + 1) * cols])
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product. Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a != 0.0 {
                    axpy(a, other.row(k), out_row);
                }
            }
        }
        out
    }

    /// `self · otherᵀ`; rows of both operands are contiguous so every entry is one dot product.
    pub fn matmul_transposed(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols, "matmul_transposed dimension mismatch");
        let mut out = Self::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                out[(i, j)] = dot(self.row(i), other.row(j));
            }
        }
        out
    }

    /// Matrix-vector product. Panics on dimension mismatch.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        self.row_iter().map(|r| dot(r, x)).collect()
    }

    /// `selfᵀ · x`.
    pub fn matvec_transposed(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "matvec_transposed dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (r, &xi) in self.row_iter().zip(x) {
            if xi != 0.0 {
                axpy(xi, r, &mut out);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        dot(&self.data, &self.data).sqrt()
    }

    /// Largest entrywise absolute difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol * scale))
    }

    pub fn scale(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }

    /// `self += alpha · other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &DenseMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(alpha, &other.data, &mut self.data);
    }

    /// `self += alpha · a bᵀ`.
    pub fn add_outer(&mut self, alpha: f64, a: &[f64], b: &[f64]) {
        assert_eq!((self.rows, self.cols), (a.len(), b.len()));
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0.0 {
                axpy(alpha * ai, b, self.row_mut(i));
            }
        }
    }

    /// Lower-triangular symmetric rank-1 update `L(self) += alpha · v vᵀ`; the strict upper
    /// triangle is left untouched.
    pub fn add_outer_lower(&mut self, alpha: f64, v: &[f64]) {
        assert_eq!((self.rows, self.cols), (v.len(), v.len()));
        for (i, &vi) in v.iter().enumerate() {
            if vi != 0.0 {
                let cols = self.cols;
                let row = &mut self.data[i * cols..i * cols + i + 1];
                axpy(alpha * vi, &v[..=i], row);
            }
        }
    }

    /// `blockdiag(block, …, block)` with `count` copies.
    pub fn block_diagonal(block: &DenseMatrix, count: usize) -> DenseMatrix {
        assert_eq!(block.rows, block.cols, "diagonal blocks must be square");
        let b = block.rows;
        let mut out = Self::zeros(b * count, b * count);
        for c in 0..count {
            for i in 0..b {
                out.row_mut(c * b + i)[c * b..(c + 1) * b].copy_from_slice(block.row(i));
            }
        }
        out
    }

    /// Copy of the rows selected by `indices`, in order.
    pub fn select_rows(&self, indices: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        DenseMatrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Stacks `self` on top of `other`. Panics on column mismatch.
    pub fn vstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Appends a constant column (used for the `(x; 1)` augmentation).
    pub fn append_constant_column(&self, value: f64) -> DenseMatrix {
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for r in self.row_iter() {
            data.extend_from_slice(r);
            data.push(value);
        }
        DenseMatrix {
            rows: self.rows,
            cols: self.cols + 1,
            data,
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Inner product with eight independent accumulators so the loop vectorizes.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[4]) + (acc[1] + acc[5]) + (acc[2] + acc[6]) + (acc[3] + acc[7]) + tail
}

/// `y += alpha · x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Row-major `vec`: concatenation of the rows of `w`.
pub fn vec_row_major(w: &DenseMatrix) -> Vec<f64> {
    w.as_slice().to_vec()
}

/// Inverse of [`vec_row_major`].
pub fn unvec(w: &[f64], rows: usize, cols: usize) -> Result<DenseMatrix> {
    DenseMatrix::from_vec(rows, cols, w.to_vec())
}

/// `U(x)`: `m_s` diagonal copies of `x xᵀ`, size `m_s·M_T` square.
pub fn build_u(x: &[f64], m_s: usize) -> DenseMatrix {
    let mut block = DenseMatrix::zeros(x.len(), x.len());
    block.add_outer(1.0, x, x);
    DenseMatrix::block_diagonal(&block, m_s)
}

/// `v = vec(x_s x_tᵀ)`, so that `vᵀ vec(W) = x_sᵀ W x_t`.
pub fn build_v(x_s: &[f64], x_t: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(x_s.len() * x_t.len());
    for &s in x_s {
        v.extend(x_t.iter().map(|&t| s * t));
    }
    v
}

/// Cholesky factor `L` (lower triangular, positive diagonal) of an SPD matrix.
#[derive(Debug, Clone)]
pub struct SpdFactorization {
    dim: usize,
    factor: DenseMatrix,
}

/// Factorizes a symmetric positive-definite matrix. Rejects asymmetric input
/// and reports the first non-positive pivot.
pub fn spd_factorize(b: &DenseMatrix) -> Result<SpdFactorization> {
    if b.rows() != b.cols() {
        return Err(Error::invalid(format!(
            "cannot factorize a {}x{} matrix",
            b.rows(),
            b.cols()
        )));
    }
    if !b.is_symmetric(1e-10) {
        return Err(Error::invalid("matrix is not symmetric"));
    }
    SpdFactorization::from_lower(b.clone())
}

impl SpdFactorization {
    /// Factorizes in place using only the lower triangle of `a`.
    pub(crate) fn from_lower(mut a: DenseMatrix) -> Result<Self> {
        let n = a.rows();
        for i in 0..n {
            let (head, tail) = a.data.split_at_mut(i * n);
            let row_i = &mut tail[..n];
            for j in 0..i {
                let row_j = &head[j * n..j * n + j + 1];
                let s = row_i[j] - dot(&row_i[..j], &row_j[..j]);
                row_i[j] = s / row_j[j];
            }
            let d = row_i[i] - dot(&row_i[..i], &row_i[..i]);
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: i, value: d });
            }
            row_i[i] = d.sqrt();
            row_i[i + 1..].iter_mut().for_each(|v| *v = 0.0);
        }
        Ok(SpdFactorization { dim: n, factor: a })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factor(&self) -> &DenseMatrix {
        &self.factor
    }

    /// Solves `B x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.dim, "rhs length mismatch");
        let l = &self.factor;
        for i in 0..self.dim {
            let row = l.row(i);
            x[i] = (x[i] - dot(&row[..i], &x[..i])) / row[i];
        }
        for i in (0..self.dim).rev() {
            let row = l.row(i);
            x[i] /= row[i];
            let xi = x[i];
            axpy(-xi, &row[..i], &mut x[..i]);
        }
    }

    /// Solves `B X = R` column by column, where `R` is given with one right-hand side per row
    /// (returns `X` in the same per-row layout, i.e. computes `R B⁻¹` for symmetric `B`).
    pub fn solve_rows(&self, rhs_rows: &DenseMatrix) -> DenseMatrix {
        let mut out = rhs_rows.clone();
        for i in 0..out.rows() {
            self.solve_in_place(out.row_mut(i));
        }
        out
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.factor.matmul_transposed(&self.factor)
    }
}

/// The diagonal block `B = I + D Σ_i c_i x_i xᵀ_i` of `V`, with `c_i` the row sums of the
/// pair weights.
pub fn compute_v_block(targets: &DenseMatrix, pw: &PairWeights, d_weight: f64) -> Result<DenseMatrix> {
    if targets.rows() != pw.n_target() {
        return Err(Error::invalid(format!(
            "{} target rows but pair weights have {} rows",
            targets.rows(),
            pw.n_target()
        )));
    }
    if !(d_weight >= 0.0) {
        return Err(Error::invalid("distance weight must be non-negative"));
    }
    let m_t = targets.cols();
    let mut b = DenseMatrix::zeros(m_t, m_t);
    for (x, &c) in targets.row_iter().zip(pw.row_sums()) {
        if c != 0.0 {
            b.add_outer_lower(d_weight * c, x);
        }
    }
    for i in 0..m_t {
        b[(i, i)] += 1.0;
        for j in 0..i {
            b[(j, i)] = b[(i, j)];
        }
    }
    Ok(b)
}
