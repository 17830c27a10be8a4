//! The free Hilbert C*-module `𝒜^d`.
//!
//! Vectors are left `𝒜`-modules with inner product `⟨x, y⟩ = Σᵢ xᵢ yᵢ*`.
//! Left-linearity of the inner product forces `𝒜`-linear operators to act by
//! right multiplication: `(xM)ⱼ = Σᵢ xᵢ Mᵢⱼ`.
//!
//! Under the block decomposition of `𝒜`, block `b` of a vector is the
//! `n_b × d·n_b` row of blocks `[x₁ | … | x_d]` and block `b` of an operator is
//! the `d·n_b × d·n_b` matrix whose `(i, j)` tile is `Mᵢⱼ`. Operator action is
//! then a plain matrix product, which is how spectral functions of operators
//! (norms, inverse square roots) are computed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{mismatch, Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::scalar::{Real, C};

/// Default relative singularity threshold for [`ModuleOperator::inv_sqrt`].
pub const DEFAULT_INV_SQRT_TOL: f64 = 1e-10;

/// Element of `𝒜^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr<T>", into = "VectorRepr<T>", bound = "T: Real")]
pub struct ModuleVector<T> {
    shape: AlgebraShape,
    entries: Vec<AlgebraElement<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct VectorRepr<T> {
    shape: AlgebraShape,
    entries: Vec<AlgebraElement<T>>,
}

impl<T: Real> TryFrom<VectorRepr<T>> for ModuleVector<T> {
    type Error = Error;
    fn try_from(r: VectorRepr<T>) -> Result<Self> {
        ModuleVector::new(r.shape, r.entries)
    }
}

impl<T: Real> From<ModuleVector<T>> for VectorRepr<T> {
    fn from(v: ModuleVector<T>) -> Self {
        VectorRepr {
            shape: v.shape,
            entries: v.entries,
        }
    }
}

impl<T: Real> ModuleVector<T> {
    pub fn new(shape: AlgebraShape, entries: Vec<AlgebraElement<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("module vector needs d >= 1 entries".into()));
        }
        if let Some(i) = entries.iter().position(|e| e.shape() != &shape) {
            return Err(mismatch(format!(
                "entry {i} has shape {}, vector has {shape}",
                entries[i].shape()
            )));
        }
        Ok(Self { shape, entries })
    }

    /// Builds a vector from a nonempty list of entries sharing one shape.
    pub fn from_entries(entries: Vec<AlgebraElement<T>>) -> Result<Self> {
        let shape = entries
            .first()
            .ok_or_else(|| Error::InvalidInput("module vector needs d >= 1 entries".into()))?
            .shape()
            .clone();
        Self::new(shape, entries)
    }

    /// Scalar vector in `ℂ^d` (algebra `ℂ`).
    pub fn from_complex(values: &[C<T>]) -> Result<Self> {
        Self::from_entries(values.iter().map(|&z| AlgebraElement::from_diagonal(&[z])).collect())
    }

    pub fn zero(shape: &AlgebraShape, d: usize) -> Self {
        assert!(d >= 1);
        Self {
            shape: shape.clone(),
            entries: vec![AlgebraElement::zero(shape); d],
        }
    }

    /// `eᵢ`: `1_𝒜` at position `i`, zero elsewhere.
    pub fn basis(shape: &AlgebraShape, d: usize, i: usize) -> Self {
        let mut v = Self::zero(shape, d);
        v.entries[i] = AlgebraElement::identity(shape);
        v
    }

    pub fn random_gaussian<R: Rng + ?Sized>(shape: &AlgebraShape, d: usize, rng: &mut R) -> Self {
        assert!(d >= 1);
        Self {
            shape: shape.clone(),
            entries: (0..d).map(|_| AlgebraElement::random_gaussian(shape, rng)).collect(),
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    /// Rank `d` of the free module.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[AlgebraElement<T>] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &AlgebraElement<T> {
        &self.entries[i]
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape || self.len() != other.len() {
            return Err(mismatch(format!(
                "{}^{} vs {}^{}",
                self.shape,
                self.len(),
                other.shape,
                other.len()
            )));
        }
        Ok(())
    }

    /// `⟨x, y⟩ = Σᵢ xᵢ yᵢ*`
    pub fn inner(&self, other: &Self) -> Result<AlgebraElement<T>> {
        self.check_compatible(other)?;
        let mut acc = AlgebraElement::zero(&self.shape);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc.accumulate(&a.mul_star(b)?);
        }
        Ok(acc)
    }

    /// `‖x‖ = ‖⟨x, x⟩‖^{1/2}`
    pub fn norm(&self) -> T {
        self.inner(self).expect("same vector").norm().sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.zip_entries(other, AlgebraElement::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.zip_entries(other, AlgebraElement::sub)
    }

    fn zip_entries(
        &self,
        other: &Self,
        f: impl Fn(&AlgebraElement<T>, &AlgebraElement<T>) -> Result<AlgebraElement<T>>,
    ) -> Result<Self> {
        Ok(Self {
            shape: self.shape.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect::<Result<_>>()?,
        })
    }

    /// Module action `a · x = (a xᵢ)ᵢ`.
    pub fn left_mul(&self, a: &AlgebraElement<T>) -> Result<Self> {
        Ok(Self {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|e| a.mul(e)).collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, z: C<T>) -> Self {
        Self {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|e| e.scale(z)).collect(),
        }
    }

    pub(crate) fn accumulate(&mut self, other: &Self) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.accumulate(b);
        }
    }

    /// Block `b` as the `n_b × d·n_b` matrix `[x₁ | … | x_d]`.
    pub fn block_row(&self, b: usize) -> CMatrix<T> {
        let n = self.shape.block_dims()[b];
        let mut out = CMatrix::zeros(n, n * self.len());
        for (i, e) in self.entries.iter().enumerate() {
            out.set_block(0, i * n, e.block(b));
        }
        out
    }

    fn from_block_rows(shape: &AlgebraShape, d: usize, rows: &[CMatrix<T>]) -> Self {
        let entries = (0..d)
            .map(|i| {
                let blocks = shape
                    .block_dims()
                    .iter()
                    .zip(rows)
                    .map(|(&n, r)| r.block(0, i * n, n, n))
                    .collect();
                AlgebraElement::from_blocks(shape.clone(), blocks).expect("conforming blocks")
            })
            .collect();
        Self {
            shape: shape.clone(),
            entries,
        }
    }

    /// Coordinates in `ℂ^{d·dim 𝒜}`: entries in order, each via [`AlgebraElement::coords`].
    pub fn coords(&self) -> Vec<C<T>> {
        self.entries.iter().flat_map(AlgebraElement::coords).collect()
    }

    pub fn from_coords(shape: &AlgebraShape, d: usize, coords: &[C<T>]) -> Result<Self> {
        let dim = shape.dim();
        if coords.len() != d * dim || d == 0 {
            return Err(mismatch(format!(
                "{} coordinates for {shape}^{d} (dimension {})",
                coords.len(),
                d * dim
            )));
        }
        let entries = coords
            .chunks(dim)
            .map(|c| AlgebraElement::from_coords(shape, c))
            .collect::<Result<_>>()?;
        Ok(Self {
            shape: shape.clone(),
            entries,
        })
    }

    pub fn cast<U: Real>(&self) -> ModuleVector<U> {
        ModuleVector {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(AlgebraElement::cast).collect(),
        }
    }
}

/// `⟨x, y⟩`
pub fn inner_product<T: Real>(x: &ModuleVector<T>, y: &ModuleVector<T>) -> Result<AlgebraElement<T>> {
    x.inner(y)
}

/// `‖x‖`
pub fn module_norm<T: Real>(x: &ModuleVector<T>) -> T {
    x.norm()
}

/// Minimum eigenvalue, over all blocks, of `‖⟨y,y⟩‖·⟨x,x⟩ − ⟨x,y⟩⟨y,x⟩`.
///
/// The noncommutative Cauchy-Schwarz inequality says this is nonnegative.
pub fn cauchy_schwarz_gap<T: Real>(x: &ModuleVector<T>, y: &ModuleVector<T>) -> Result<T> {
    let xy = x.inner(y)?;
    let xx = x.inner(x)?;
    let yy_norm = y.inner(y)?.norm();
    let diff = xx.scale_real(yy_norm).sub(&xy.mul_star(&xy)?)?;
    Ok(diff.min_eigenvalue())
}

/// `d × d` matrix over `𝒜` acting on row vectors from the right.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleOperator<T> {
    shape: AlgebraShape,
    d: usize,
    /// Row-major `d × d`.
    matrix: Vec<AlgebraElement<T>>,
}

impl<T: Real> ModuleOperator<T> {
    pub fn new(shape: AlgebraShape, d: usize, matrix: Vec<AlgebraElement<T>>) -> Result<Self> {
        if d == 0 || matrix.len() != d * d {
            return Err(mismatch(format!(
                "operator needs {} entries, got {}",
                d * d,
                matrix.len()
            )));
        }
        if let Some(i) = matrix.iter().position(|e| e.shape() != &shape) {
            return Err(mismatch(format!("operator entry {i} has shape {}", matrix[i].shape())));
        }
        Ok(Self { shape, d, matrix })
    }

    pub fn identity(shape: &AlgebraShape, d: usize) -> Self {
        let matrix = (0..d * d)
            .map(|k| {
                if k / d == k % d {
                    AlgebraElement::identity(shape)
                } else {
                    AlgebraElement::zero(shape)
                }
            })
            .collect();
        Self {
            shape: shape.clone(),
            d,
            matrix,
        }
    }

    pub fn zero(shape: &AlgebraShape, d: usize) -> Self {
        Self {
            shape: shape.clone(),
            d,
            matrix: vec![AlgebraElement::zero(shape); d * d],
        }
    }

    pub fn random_gaussian<R: Rng + ?Sized>(shape: &AlgebraShape, d: usize, rng: &mut R) -> Self {
        Self {
            shape: shape.clone(),
            d,
            matrix: (0..d * d)
                .map(|_| AlgebraElement::random_gaussian(shape, rng))
                .collect(),
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement<T> {
        &self.matrix[i * self.d + j]
    }

    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut AlgebraElement<T> {
        &mut self.matrix[i * self.d + j]
    }

    fn check_vector(&self, x: &ModuleVector<T>) -> Result<()> {
        if x.shape() != &self.shape || x.len() != self.d {
            return Err(mismatch(format!(
                "operator on {}^{} applied to vector in {}^{}",
                self.shape,
                self.d,
                x.shape(),
                x.len()
            )));
        }
        Ok(())
    }

    fn check_operator(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape || self.d != other.d {
            return Err(mismatch("operators act on different modules"));
        }
        Ok(())
    }

    /// `(xM)ⱼ = Σᵢ xᵢ Mᵢⱼ`
    pub fn apply(&self, x: &ModuleVector<T>) -> Result<ModuleVector<T>> {
        self.check_vector(x)?;
        let entries = (0..self.d)
            .map(|j| {
                let mut acc = AlgebraElement::zero(&self.shape);
                for i in 0..self.d {
                    acc.accumulate(&x.entry(i).mul(self.entry(i, j))?);
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        ModuleVector::new(self.shape.clone(), entries)
    }

    /// Starred transpose: `(M*)ᵢⱼ = (Mⱼᵢ)*`.
    pub fn adjoint(&self) -> Self {
        let d = self.d;
        Self {
            shape: self.shape.clone(),
            d,
            matrix: (0..d * d).map(|k| self.entry(k % d, k / d).star()).collect(),
        }
    }

    /// Composition `x ↦ (xA)B`, i.e. the matrix product `A·B`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        self.check_operator(other)?;
        let d = self.d;
        let mut matrix = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = AlgebraElement::zero(&self.shape);
                for k in 0..d {
                    acc.accumulate(&self.entry(i, k).mul(other.entry(k, j))?);
                }
                matrix.push(acc);
            }
        }
        Ok(Self {
            shape: self.shape.clone(),
            d,
            matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_operator(other)?;
        Ok(Self {
            shape: self.shape.clone(),
            d: self.d,
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?,
        })
    }

    /// Block `b` as the `d·n_b × d·n_b` complex matrix with tiles `Mᵢⱼ`.
    pub fn flat_block(&self, b: usize) -> CMatrix<T> {
        let n = self.shape.block_dims()[b];
        let mut out = CMatrix::zeros(self.d * n, self.d * n);
        for i in 0..self.d {
            for j in 0..self.d {
                out.set_block(i * n, j * n, self.entry(i, j).block(b));
            }
        }
        out
    }

    /// Inverse of [`flat_block`](Self::flat_block) over all blocks.
    pub fn from_flat_blocks(shape: &AlgebraShape, d: usize, flats: &[CMatrix<T>]) -> Result<Self> {
        if flats.len() != shape.num_blocks() {
            return Err(mismatch("one flattened block per algebra block"));
        }
        for (f, &n) in flats.iter().zip(shape.block_dims()) {
            if f.rows() != d * n || f.cols() != d * n {
                return Err(mismatch("flattened block has the wrong size"));
            }
        }
        let mut matrix = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let blocks = shape
                    .block_dims()
                    .iter()
                    .zip(flats)
                    .map(|(&n, f)| f.block(i * n, j * n, n, n))
                    .collect();
                matrix.push(AlgebraElement::from_blocks(shape.clone(), blocks)?);
            }
        }
        Ok(Self {
            shape: shape.clone(),
            d,
            matrix,
        })
    }

    /// Norm in the C*-algebra `M_d(𝒜)`; equals the operator norm on `𝒜^d`.
    pub fn norm(&self) -> T {
        (0..self.shape.num_blocks())
            .map(|b| self.flat_block(b).spectral_norm())
            .fold(T::zero(), T::max)
    }

    /// Applies via the flattened blocks. Agrees with [`apply`](Self::apply).
    pub fn apply_flat(&self, x: &ModuleVector<T>) -> Result<ModuleVector<T>> {
        self.check_vector(x)?;
        let rows: Vec<CMatrix<T>> = (0..self.shape.num_blocks())
            .map(|b| x.block_row(b).matmul(&self.flat_block(b)))
            .collect();
        Ok(ModuleVector::from_block_rows(&self.shape, self.d, &rows))
    }

    /// `M^{-1/2}` for self-adjoint positive invertible `M`.
    ///
    /// Fails when the smallest eigenvalue over all blocks is at most
    /// `tol` times the largest.
    pub fn inv_sqrt(&self, tol: T) -> Result<Self> {
        let eigs: Vec<_> = (0..self.shape.num_blocks())
            .map(|b| hermitian_eigen(&self.flat_block(b)))
            .collect();
        let lo = eigs.iter().map(|e| e.values[0]).fold(T::infinity(), T::min);
        let hi = eigs
            .iter()
            .map(|e| *e.values.last().expect("nonempty"))
            .fold(T::neg_infinity(), T::max);
        let threshold = tol * hi.max(T::zero());
        if hi <= T::zero() || lo <= threshold {
            return Err(Error::SingularOperator {
                min_eigenvalue: lo.as_f64(),
                threshold: threshold.as_f64(),
            });
        }
        let flats: Vec<_> = eigs.iter().map(|e| e.map_values(|l| T::one() / l.sqrt())).collect();
        Self::from_flat_blocks(&self.shape, self.d, &flats)
    }

    /// Minimum eigenvalue over all flattened blocks (Hermitian part).
    pub fn min_eigenvalue(&self) -> T {
        (0..self.shape.num_blocks())
            .map(|b| hermitian_eigen(&self.flat_block(b)).values[0])
            .fold(T::infinity(), T::min)
    }
}

/// `x ↦ xM`
pub fn op_apply<T: Real>(m: &ModuleOperator<T>, x: &ModuleVector<T>) -> Result<ModuleVector<T>> {
    m.apply(x)
}

pub fn op_adjoint<T: Real>(m: &ModuleOperator<T>) -> ModuleOperator<T> {
    m.adjoint()
}

pub fn op_inv_sqrt<T: Real>(m: &ModuleOperator<T>, tol: T) -> Result<ModuleOperator<T>> {
    m.inv_sqrt(tol)
}
