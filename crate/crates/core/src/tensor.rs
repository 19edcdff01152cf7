//! Dense complex matrices and the handful of kernels the channel code needs:
//! products, Kronecker products, partial traces, Hermitian eigendecomposition,
//! PSD inverse square roots and column-stacking vectorization.
//!
//! Matrices are small (at most 256 x 256 for the Choi matrix of four qubits),
//! so everything is stored densely in row-major order.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum entrywise deviation `|m - m^dag|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Default eigenvalue floor for [`inv_sqrt_psd`].
pub const PSD_FLOOR: f64 = 1e-12;
/// Eigenvalues below `-PSD_NEG_TOL` reject a matrix as not PSD.
pub const PSD_NEG_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDims(format!("{rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn diag_real(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|a><b|` of two vectors given as slices.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += alpha * other`; shapes must agree.
    pub fn axpy(&mut self, alpha: C64, other: &CMatrix) {
        assert_eq!(self.shape(), other.shape(), "axpy shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-norm distance; `f64::INFINITY` when the shapes differ.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m - m^dag|`, infinite for non-square matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square(), "hermitian_part of non-square matrix");
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        matmul(self, other)
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        kron(self, other)
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `self * v` for a vector given as a slice.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v| self |v>`.
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        dot(v, &self.mul_vec(v))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks_exact(self.cols) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Panics on shape mismatch; use [`matmul`] for a checked product.
impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        matmul(self, rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.axpy(ONE, rhs);
        out
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.axpy(-ONE, rhs);
        out
    }
}

/// Conjugate-linear in the first argument: `sum conj(a_i) b_i`.
#[inline]
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let (n, m) = (a.rows, b.cols);
    let mut out = CMatrix::zeros(n, m);
    for i in 0..n {
        let out_row = &mut out.data[i * m..(i + 1) * m];
        for (k, &aik) in a.data[i * a.cols..(i + 1) * a.cols].iter().enumerate() {
            if aik == ZERO {
                continue;
            }
            let b_row = &b.data[k * m..(k + 1) * m];
            for (o, &bkj) in out_row.iter_mut().zip(b_row) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Kronecker product; row index of the result is `i_a * b.rows + i_b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = b.shape();
    CMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Ordered subsystem dimensions of a tensor-product space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimSpec {
    factors: Vec<usize>,
}

impl DimSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidDims(format!(
                "subsystem dimensions must be positive, got {factors:?}"
            )));
        }
        Ok(DimSpec { factors })
    }

    /// `n` copies of a `d`-dimensional system.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }
}

/// Traces out every factor of `dims` not listed in `keep`.
///
/// The kept factors stay in their original order regardless of the order
/// of `keep`. Keeping nothing yields the 1x1 matrix `[tr m]`.
pub fn partial_trace(m: &CMatrix, dims: &DimSpec, keep: &[usize]) -> Result<CMatrix> {
    let n = dims.total();
    if !m.is_square() || m.rows != n {
        return Err(Error::InvalidDims(format!(
            "partial_trace: dims {:?} do not match a {}x{} matrix",
            dims.factors, m.rows, m.cols
        )));
    }
    let nf = dims.factors.len();
    if let Some(&bad) = keep.iter().find(|&&k| k >= nf) {
        return Err(Error::InvalidDims(format!(
            "partial_trace: factor {bad} out of range for {nf} factors"
        )));
    }
    let kept: Vec<bool> = (0..nf).map(|f| keep.contains(&f)).collect();
    let out_dim: usize = (0..nf)
        .filter(|&f| kept[f])
        .map(|f| dims.factors[f])
        .product();

    // Split every full index into (kept index, traced index) once.
    let split: Vec<(usize, usize)> = (0..n)
        .map(|mut idx| {
            let (mut k_idx, mut k_stride) = (0, 1);
            let (mut t_idx, mut t_stride) = (0, 1);
            for f in (0..nf).rev() {
                let d = dims.factors[f];
                let digit = idx % d;
                idx /= d;
                if kept[f] {
                    k_idx += digit * k_stride;
                    k_stride *= d;
                } else {
                    t_idx += digit * t_stride;
                    t_stride *= d;
                }
            }
            (k_idx, t_idx)
        })
        .collect();

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for i in 0..n {
        let (ki, ti) = split[i];
        for j in 0..n {
            let (kj, tj) = split[j];
            if ti == tj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEig {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermEig {
    /// `V diag(f(lambda)) V^dag`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for (k, &w) in fv.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub fn herm_eig(m: &CMatrix) -> Result<HermEig> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = nalgebra::SymmetricEigen::new(m.hermitian_part().to_nalgebra());
    let mut order: Vec<usize> = (0..m.rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = CMatrix::from_nalgebra(&eig.eigenvectors);
    let vectors = CMatrix::from_fn(m.rows, m.rows, |i, j| vecs[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

/// Pseudo-inverse square root on the numerical support: eigenvalues at or
/// below `eps` are mapped to zero.
pub fn inv_sqrt_psd(m: &CMatrix, eps: f64) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -PSD_NEG_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|l| if l > eps { l.sqrt().recip() } else { 0.0 }))
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
pub fn psd_projection(m: &CMatrix) -> Result<CMatrix> {
    Ok(herm_eig(m)?.reconstruct_with(|l| l.max(0.0)))
}

/// Column-stacking vectorization: entry `(i, j)` lands at `i + j * rows`.
pub fn vec(m: &CMatrix) -> CMatrix {
    CMatrix {
        rows: m.rows * m.cols,
        cols: 1,
        data: vec_entries(m),
    }
}

pub(crate) fn vec_entries(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.rows * m.cols);
    for j in 0..m.cols {
        for i in 0..m.rows {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec`]; accepts a row or column vector.
pub fn unvec(v: &CMatrix, rows: usize, cols: usize) -> Result<CMatrix> {
    if v.rows != 1 && v.cols != 1 {
        return Err(Error::InvalidDims(format!(
            "unvec: expected a vector, got {}x{}",
            v.rows, v.cols
        )));
    }
    unvec_entries(&v.data, rows, cols)
}

pub(crate) fn unvec_entries(v: &[C64], rows: usize, cols: usize) -> Result<CMatrix> {
    if v.len() != rows * cols || rows == 0 || cols == 0 {
        return Err(Error::LengthMismatch {
            expected: rows * cols,
            got: v.len(),
        });
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| v[i + j * rows]))
}

/// Hilbert-Schmidt inner product `tr(a^dag b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    assert_eq!(a.shape(), b.shape(), "hs_inner shape mismatch");
    dot(&a.data, &b.data)
}
