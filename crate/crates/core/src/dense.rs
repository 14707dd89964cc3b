//! Small dense complex matrices for the verification backend.
//!
//! Row-major `Complex64` storage sized for up to 10 qubits (1024 x 1024).
//! The multiply kernel accumulates row-by-row so the inner loop runs over
//! contiguous memory.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DenseError {
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, DenseError> {
        if self.dim != rhs.dim {
            return Err(DenseError::DimensionMismatch(self.dim, rhs.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let a_row = self.row(i);
            let out_row = out.row_mut(i);
            for (k, &a_ik) in a_row.iter().enumerate() {
                if a_ik.re == 0.0 && a_ik.im == 0.0 {
                    continue;
                }
                let b_row = rhs.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a_ik * b;
                }
            }
        }
        Ok(out)
    }

    /// `self += scale * rhs` entry-wise.
    pub fn add_scaled(&mut self, rhs: &Self, scale: Complex64) -> Result<(), DenseError> {
        if self.dim != rhs.dim {
            return Err(DenseError::DimensionMismatch(self.dim, rhs.dim));
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += scale * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, s: Complex64) {
        for a in &mut self.data {
            *a *= s;
        }
    }

    pub fn conjugate(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Trace of `self† * rhs`, i.e. the Hilbert-Schmidt inner product.
    pub fn inner_product(&self, rhs: &Self) -> Result<Complex64, DenseError> {
        if self.dim != rhs.dim {
            return Err(DenseError::DimensionMismatch(self.dim, rhs.dim));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.data.iter().zip(&rhs.data) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to another matrix.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖self† self − I‖_max`, the unitarity residual.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("same dimension");
        gram.max_abs_diff(&Self::identity(self.dim))
    }

    fn one_norm(&self) -> f64 {
        let n = self.dim;
        let mut best = 0.0f64;
        for j in 0..n {
            let mut col = 0.0;
            for i in 0..n {
                col += self[(i, j)].norm();
            }
            best = best.max(col);
        }
        best
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Matrix exponential by scaling-and-squaring over a truncated Taylor series.
///
/// The argument is scaled by `2^-s` until its 1-norm is below 0.5, the series
/// is summed until terms fall below machine precision, and the result is
/// squared `s` times. For skew-Hermitian input the output is unitary to
/// better than `1e-10` in max-norm.
pub fn matrix_exponential(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    if n == 0 {
        return CMatrix::zeros(0);
    }
    let norm = a.one_norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let mut scaled = a.clone();
    scaled.scale(Complex64::new(1.0 / f64::powi(2.0, s as i32), 0.0));

    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    // After scaling the norm is at most 0.5; term k is bounded by 0.5^k / k!,
    // so 24 terms push the tail far below f64 resolution.
    for k in 1..=24 {
        term = term.matmul(&scaled).expect("same dimension");
        term.scale(Complex64::new(1.0 / k as f64, 0.0));
        result.add_scaled(&term, Complex64::new(1.0, 0.0)).expect("same dimension");
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = result.matmul(&result).expect("same dimension");
    }
    result
}
