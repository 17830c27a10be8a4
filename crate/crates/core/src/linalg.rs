//! Dense complex matrices and the two spectral kernels the rest of the crate
//! relies on: a cyclic Jacobi eigensolver for Hermitian matrices and a
//! one-sided (Hestenes) Jacobi SVD for arbitrary rectangular matrices.
//!
//! Matrices here are tiny (block sizes of a few units, flattened module
//! operators of a few dozen rows), so both kernels favour accuracy over speed.
//! Jacobi methods compute small singular values to absolute accuracy of order
//! `eps * sigma_max`, which is what the rank tests with a `1e-10` relative
//! threshold need.

use std::ops::{Index, IndexMut};

use crate::scalar::{cone, cz, Real, C};

const MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![cz(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length");
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length");
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| C::new(T::lit(x), T::zero())).collect(),
        }
    }

    pub fn diagonal(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, z: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * z).collect(),
        }
    }

    pub fn scale_real(&self, x: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * x).collect(),
        }
    }

    /// Entrywise sum. Panics on dimension mismatch; callers check shapes.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == cz() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    /// `self * other^H`
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "inner dimensions");
        Self::from_fn(self.rows, other.rows, |i, j| {
            self.row(i)
                .iter()
                .zip(other.row(j))
                .fold(cz(), |acc, (&a, &b)| acc + a * b.conj())
        })
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Hermitian part `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Largest singular value (spectral norm).
    ///
    /// The decomposition runs on whichever of `A`, `A^H` is lexicographically
    /// smaller, so `‖A‖` and `‖A^H‖` agree bit for bit.
    pub fn spectral_norm(&self) -> T {
        if self.data.is_empty() {
            return T::zero();
        }
        let adj = self.adjoint();
        let use_adjoint = adj
            .data
            .iter()
            .zip(&self.data)
            .map(|(a, b)| (a.re, a.im).partial_cmp(&(b.re, b.im)))
            .find(|o| o != &Some(std::cmp::Ordering::Equal))
            .is_some_and(|o| o == Some(std::cmp::Ordering::Less));
        if use_adjoint {
            singular_values(&adj)[0]
        } else {
            singular_values(self)[0]
        }
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition `A = V diag(values) V^H` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Rebuilds `V f(Λ) V^H`.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.values.len();
        let mapped: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(cz(), |acc, k| {
                acc + self.vectors[(i, k)] * mapped[k] * self.vectors[(j, k)].conj()
            })
        })
    }
}

/// Rotation parameters `(c, s, phase)` that annihilate the `(p, q)` entry of
/// the Hermitian 2x2 problem `[[app, apq], [conj(apq), aqq]]`.
///
/// The unitary is `J = [[c, s], [-s·conj(phase), c·conj(phase)]]` where
/// `phase = apq / |apq|`, so that `J^H A J` is diagonal.
#[inline]
fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: C<T>) -> (T, T, C<T>) {
    let r = apq.norm();
    let phase = apq / r;
    let tau = (aqq - app) / (r + r);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    (c, t * c, phase)
}

/// Applies `M <- M J` on columns `p, q`.
#[inline]
fn rotate_columns<T: Real>(m: &mut CMatrix<T>, p: usize, q: usize, c: T, s: T, phase: C<T>) {
    let ph = phase.conj();
    for k in 0..m.rows {
        let a = m[(k, p)];
        let b = m[(k, q)] * ph;
        m[(k, p)] = a * c - b * s;
        m[(k, q)] = a * s + b * c;
    }
}

/// Applies `M <- J^H M` on rows `p, q`.
#[inline]
fn rotate_rows<T: Real>(m: &mut CMatrix<T>, p: usize, q: usize, c: T, s: T, phase: C<T>) {
    for k in 0..m.cols {
        let a = m[(p, k)];
        let b = m[(q, k)] * phase;
        m[(p, k)] = a * c - b * s;
        m[(q, k)] = a * s + b * c;
    }
}

/// Cyclic Jacobi eigensolver. Only the Hermitian part of `a` is used.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> HermitianEigen<T> {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows;
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let eps = T::epsilon();
    let scale = m.frobenius_norm();
    if scale > T::zero() {
        for _ in 0..MAX_SWEEPS {
            let mut off = T::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off += m[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= eps * scale * T::lit(1e-2) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m[(p, q)];
                    if apq.norm() <= T::min_positive_value() {
                        continue;
                    }
                    let (c, s, phase) = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, apq);
                    rotate_columns(&mut m, p, q, c, s, phase);
                    rotate_rows(&mut m, p, q, c, s, phase);
                    m[(p, q)] = cz();
                    m[(q, p)] = cz();
                    m[(p, p)].im = T::zero();
                    m[(q, q)].im = T::zero();
                    rotate_columns(&mut v, p, q, c, s, phase);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Singular value decomposition `A V = U Σ`, right vectors only.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    /// Descending; there are `cols` of them (trailing zeros when `rows < cols`).
    pub values: Vec<T>,
    /// `cols x cols` unitary; column `k` pairs with `values[k]`.
    pub right: CMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// Number of singular values above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let top = self.values.first().copied().unwrap_or_else(T::zero);
        if top <= T::zero() {
            return 0;
        }
        self.values.iter().filter(|&&s| s > rel_tol * top).count()
    }

    /// Orthonormal basis of the numerical kernel as columns of a matrix.
    pub fn kernel(&self, rel_tol: T) -> CMatrix<T> {
        let r = self.rank(rel_tol);
        let n = self.right.cols;
        self.right.block(0, r, n, n - r)
    }
}

/// One-sided Jacobi SVD.
pub fn svd<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    let n = a.cols;
    let mut u = a.clone();
    let mut v = CMatrix::identity(n);
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), cz::<T>());
                for k in 0..u.rows {
                    let up = u[(k, p)];
                    let uq = u[(k, q)];
                    alpha += up.norm_sqr();
                    beta += uq.norm_sqr();
                    gamma += up.conj() * uq;
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() <= T::min_positive_value() {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut u, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..n)
        .map(|j| (0..u.rows).map(|i| u[(i, j)].norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite singular values"));
    Svd {
        values: order.iter().map(|&k| norms[k]).collect(),
        right: CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]),
    }
}

/// Singular values only, descending.
pub fn singular_values<T: Real>(a: &CMatrix<T>) -> Vec<T> {
    svd(a).values
}
