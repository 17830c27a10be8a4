//! Finite-dimensional C*-algebras `⊕ᵢ M_{nᵢ}(ℂ)` and their elements.
//!
//! Every finite-dimensional C*-algebra is, up to isomorphism, a finite direct
//! sum of full matrix algebras, so an element is simply a list of square
//! complex blocks. The C*-norm is the largest block spectral norm and an
//! element is positive when every block is positive semidefinite.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::scalar::{cone, cz, Real, C};

/// Default tolerance for positivity tests.
pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-10;

/// Block sizes `(n₁, …, n_B)` of `⊕ᵢ M_{nᵢ}(ℂ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraShape(Vec<usize>);

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidInput("algebra needs at least one block".into()));
        }
        if let Some(pos) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidInput(format!("block {pos} has size 0")));
        }
        Ok(Self(block_dims))
    }

    /// The complex numbers `ℂ`.
    pub fn complex() -> Self {
        Self(vec![1])
    }

    /// Commutative algebra `ℂᵏ`.
    pub fn diagonal(k: usize) -> Self {
        Self::new(vec![1; k]).expect("k >= 1")
    }

    /// Full matrix algebra `M_n(ℂ)`.
    pub fn matrix(n: usize) -> Self {
        Self::new(vec![n]).expect("n >= 1")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.0
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }

    /// Complex dimension `Σᵢ nᵢ²`.
    pub fn dim(&self) -> usize {
        self.0.iter().map(|n| n * n).sum()
    }

    /// Parses `"1,2"`, `"[1,2]"` or `"C+M2"` style descriptions.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidInput(format!("cannot parse algebra `{s}`"));
        if t.starts_with('[') {
            let dims: Vec<usize> = serde_json::from_str(t).map_err(|_| bad())?;
            return Self::new(dims);
        }
        let mut dims = Vec::new();
        for part in t.split([',', '+']) {
            let part = part.trim();
            let n = match part {
                "C" | "c" => 1,
                _ if part.starts_with(['M', 'm']) => part[1..].parse().map_err(|_| bad())?,
                _ => part.parse().map_err(|_| bad())?,
            };
            dims.push(n);
        }
        Self::new(dims)
    }
}

impl TryFrom<Vec<usize>> for AlgebraShape {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AlgebraShape> for Vec<usize> {
    fn from(s: AlgebraShape) -> Self {
        s.0
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&n| if n == 1 { "C".to_string() } else { format!("M{n}") })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// An element of `⊕ᵢ M_{nᵢ}(ℂ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    shape: AlgebraShape,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> AlgebraElement<T> {
    pub fn from_blocks(shape: AlgebraShape, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(mismatch(format!(
                "expected {} blocks for {shape}, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.block_dims()).enumerate() {
            if b.rows() != n || b.cols() != n {
                return Err(mismatch(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Self { shape, blocks })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        Self {
            blocks: shape.block_dims().iter().map(|&n| CMatrix::zeros(n, n)).collect(),
            shape: shape.clone(),
        }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::scalar(shape, cone())
    }

    /// `z · 1_𝒜`
    pub fn scalar(shape: &AlgebraShape, z: C<T>) -> Self {
        Self {
            blocks: shape
                .block_dims()
                .iter()
                .map(|&n| CMatrix::identity(n).scale(z))
                .collect(),
            shape: shape.clone(),
        }
    }

    /// Element of `ℂᵏ` with the given coordinates.
    pub fn from_diagonal(values: &[C<T>]) -> Self {
        Self {
            shape: AlgebraShape::diagonal(values.len()),
            blocks: values.iter().map(|&z| CMatrix::from_row_major(1, 1, vec![z])).collect(),
        }
    }

    /// Element of `M_n(ℂ)` from a single block.
    pub fn from_matrix(m: CMatrix<T>) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(mismatch("matrix algebra element must be a nonempty square block"));
        }
        Ok(Self {
            shape: AlgebraShape::matrix(m.rows()),
            blocks: vec![m],
        })
    }

    /// Element with i.i.d. standard complex Gaussian coordinates.
    pub fn random_gaussian<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| {
                CMatrix::from_fn(n, n, |_, _| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C::new(T::lit(re), T::lit(im))
                })
            })
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix<T> {
        &self.blocks[i]
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(mismatch(format!("{} vs {}", self.shape, other.shape)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_blocks(other, CMatrix::add))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_blocks(other, CMatrix::sub))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_blocks(other, CMatrix::matmul))
    }

    /// `self · other*`
    pub fn mul_star(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_blocks(other, CMatrix::mul_adjoint))
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix<T>, &CMatrix<T>) -> CMatrix<T>) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// In-place `self += other`; panics on shape mismatch (internal accumulation only).
    pub(crate) fn accumulate(&mut self, other: &Self) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.add_assign(b);
        }
    }

    pub fn star(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(CMatrix::adjoint).collect(),
        }
    }

    pub fn scale(&self, z: C<T>) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(z)).collect(),
        }
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(C::new(x, T::zero()))
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> T {
        self.blocks.iter().map(CMatrix::spectral_norm).fold(T::zero(), T::max)
    }

    /// Smallest eigenvalue of the Hermitian part, over all blocks.
    pub fn min_eigenvalue(&self) -> T {
        self.blocks
            .iter()
            .map(|b| hermitian_eigen(b).values[0])
            .fold(T::infinity(), T::min)
    }

    /// Eigenvalues of the Hermitian part of every block, block by block.
    pub fn spectrum(&self) -> Vec<Vec<T>> {
        self.blocks.iter().map(|b| hermitian_eigen(b).values).collect()
    }

    pub fn is_self_adjoint(&self, tol: T) -> bool {
        let scale = T::one().max(self.norm());
        self.hermitian_defect() <= tol * scale
    }

    fn hermitian_defect(&self) -> T {
        self.blocks
            .iter()
            .map(|b| b.sub(&b.adjoint()).spectral_norm())
            .fold(T::zero(), T::max)
    }

    /// Self-adjoint with nonnegative spectrum, both up to `tol · max(1, ‖a‖)`.
    pub fn is_positive(&self, tol: T) -> bool {
        let scale = T::one().max(self.norm());
        self.hermitian_defect() <= tol * scale && self.min_eigenvalue() >= -tol * scale
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.norm() <= tol
    }

    /// Coordinates in `ℂ^{Σ nᵢ²}`: blocks in order, each row-major.
    pub fn coords(&self) -> Vec<C<T>> {
        self.blocks.iter().flat_map(|b| b.as_slice().iter().copied()).collect()
    }

    pub fn from_coords(shape: &AlgebraShape, coords: &[C<T>]) -> Result<Self> {
        if coords.len() != shape.dim() {
            return Err(mismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                coords.len(),
                shape.dim()
            )));
        }
        let mut offset = 0;
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| {
                let b = CMatrix::from_row_major(n, n, coords[offset..offset + n * n].to_vec());
                offset += n * n;
                b
            })
            .collect();
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> AlgebraElement<U> {
        AlgebraElement {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let data = b
                        .as_slice()
                        .iter()
                        .map(|z| C::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                        .collect();
                    CMatrix::from_row_major(b.rows(), b.cols(), data)
                })
                .collect(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.as_slice().iter().all(|&z| z == cz()))
    }
}

// JSON: {"shape":[n1,...],"blocks":[[[[re,im],...],...],...]}, rows major per block.
#[derive(Serialize, Deserialize)]
struct ElementRepr {
    shape: AlgebraShape,
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl<T: Real> Serialize for AlgebraElement<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                (0..b.rows())
                    .map(|i| b.row(i).iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
                    .collect()
            })
            .collect();
        ElementRepr {
            shape: self.shape.clone(),
            blocks,
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for AlgebraElement<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ElementRepr::deserialize(d)?;
        let mut blocks = Vec::with_capacity(repr.blocks.len());
        for (bi, rows) in repr.blocks.into_iter().enumerate() {
            let n = rows.len();
            let mut data = Vec::with_capacity(n * n);
            for (ri, row) in rows.into_iter().enumerate() {
                if row.len() != n {
                    return Err(D::Error::custom(format!(
                        "block {bi} row {ri} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                data.extend(row.into_iter().map(|[re, im]| C::new(T::lit(re), T::lit(im))));
            }
            blocks.push(CMatrix::from_row_major(n, n, data));
        }
        AlgebraElement::from_blocks(repr.shape, blocks).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Complex, DMatrix};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type E = AlgebraElement<f64>;

    fn m2(data: &[f64]) -> E {
        E::from_matrix(CMatrix::from_real(2, 2, data)).unwrap()
    }

    fn svd_oracle(b: &CMatrix<f64>) -> f64 {
        let m = DMatrix::from_fn(b.rows(), b.cols(), |i, j| Complex::new(b[(i, j)].re, b[(i, j)].im));
        m.singular_values().max()
    }

    #[test]
    fn star_of_identity() {
        let shape = AlgebraShape::new(vec![1, 2]).unwrap();
        let id = E::identity(&shape);
        assert_eq!(id.star(), id);
    }

    #[test]
    fn star_is_conjugate_transpose() {
        let a = m2(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.star(), m2(&[0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn commutative_product_is_blockwise() {
        let a = E::from_diagonal(&[C::new(2.0, 0.0), C::new(3.0, 0.0)]);
        let b = E::from_diagonal(&[C::new(5.0, 0.0), C::new(7.0, 0.0)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, E::from_diagonal(&[C::new(10.0, 0.0), C::new(21.0, 0.0)]));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = E::identity(&AlgebraShape::matrix(2));
        let b = E::identity(&AlgebraShape::diagonal(2));
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn norms() {
        assert!((E::identity(&AlgebraShape::matrix(2)).norm() - 1.0).abs() < 1e-15);
        let nil = m2(&[0.0, 2.0, 0.0, 0.0]);
        let expected = svd_oracle(nil.block(0));
        assert!((expected - 2.0).abs() < 1e-14);
        assert!((nil.norm() - expected).abs() <= 1e-12 * expected);

        let shape = AlgebraShape::new(vec![1, 2]).unwrap();
        let sum = E::from_blocks(
            shape,
            vec![
                CMatrix::from_real(1, 1, &[3.0]),
                CMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]),
            ],
        )
        .unwrap();
        let expected = sum.blocks().iter().map(svd_oracle).fold(0.0, f64::max);
        assert!((expected - 3.0).abs() < 1e-14);
        assert!((sum.norm() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn norm_matches_svd_oracle_on_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = AlgebraShape::new(vec![1, 2, 3]).unwrap();
        for _ in 0..50 {
            let a = E::random_gaussian(&shape, &mut rng);
            let expected = a.blocks().iter().map(svd_oracle).fold(0.0, f64::max);
            assert!((a.norm() - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn positivity() {
        let tol = DEFAULT_POSITIVITY_TOL;
        assert!(E::identity(&AlgebraShape::matrix(2)).is_positive(tol));
        assert!(!m2(&[0.0, 1.0, 0.0, 0.0]).is_positive(tol));
        // eigenvalues 0 and 2
        let ones = m2(&[1.0, 1.0, 1.0, 1.0]);
        let spec = &ones.spectrum()[0];
        assert!(spec[0].abs() < 1e-15 && (spec[1] - 2.0).abs() < 1e-15);
        assert!(ones.is_positive(tol));
        assert!(!m2(&[1.0, 0.0, 0.0, -1.0]).is_positive(tol));
    }

    #[test]
    fn zero_tests() {
        let shape = AlgebraShape::matrix(2);
        assert!(E::zero(&shape).is_zero(0.0));
        assert!(!E::identity(&shape).is_zero(0.5));
        assert!(E::identity(&shape).scale_real(1e-12).is_zero(1e-8));
    }

    #[test]
    fn shape_parsing() {
        assert_eq!(AlgebraShape::parse("1,2").unwrap().block_dims(), &[1, 2]);
        assert_eq!(AlgebraShape::parse("[2]").unwrap().block_dims(), &[2]);
        assert_eq!(AlgebraShape::parse("C+M2").unwrap().block_dims(), &[1, 2]);
        assert_eq!(AlgebraShape::parse("C+C").unwrap(), AlgebraShape::diagonal(2));
        assert!(AlgebraShape::parse("0").is_err());
        assert!(AlgebraShape::parse("[]").is_err());
        assert!(AlgebraShape::parse("x").is_err());
    }

    #[test]
    fn json_layout() {
        let a = E::from_diagonal(&[C::new(1.0, 2.0)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"shape":[1],"blocks":[[[[1.0,2.0]]]]}"#);
        let bad = r#"{"shape":[2],"blocks":[[[[1.0,0.0]]]]}"#;
        assert!(serde_json::from_str::<E>(bad).is_err());
        let bad_shape = r#"{"shape":[0],"blocks":[]}"#;
        assert!(serde_json::from_str::<E>(bad_shape).is_err());
    }

    #[test]
    fn single_precision_elements() {
        let a = AlgebraElement::<f32>::from_matrix(CMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0])).unwrap();
        assert!((a.norm() - 2.0).abs() < 1e-6);
        assert!(a.mul_star(&a).unwrap().is_positive(1e-5));
    }

    fn arb_shape() -> impl Strategy<Value = AlgebraShape> {
        prop::sample::select(vec![vec![1], vec![1, 1], vec![2], vec![1, 2], vec![3]])
            .prop_map(|v| AlgebraShape::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn c_star_identity(shape in arb_shape(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = E::random_gaussian(&shape, &mut rng);
            let n = a.norm();
            let lhs = a.star().mul(&a).unwrap().norm();
            prop_assert!((lhs - n * n).abs() <= 1e-10 * (1.0 + n * n));
        }

        #[test]
        fn star_reverses_products(shape in arb_shape(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = E::random_gaussian(&shape, &mut rng);
            let b = E::random_gaussian(&shape, &mut rng);
            let lhs = a.mul(&b).unwrap().star();
            let rhs = b.star().mul(&a.star()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * (1.0 + lhs.norm()));
        }

        #[test]
        fn submultiplicative(shape in arb_shape(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = E::random_gaussian(&shape, &mut rng);
            let b = E::random_gaussian(&shape, &mut rng);
            prop_assert!(a.mul(&b).unwrap().norm() <= a.norm() * b.norm() + 1e-10);
        }

        #[test]
        fn norm_respects_order(shape in arb_shape(), seed in any::<u64>()) {
            // a = g g*, b = a + h h*, so 0 <= a <= b
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = E::random_gaussian(&shape, &mut rng);
            let h = E::random_gaussian(&shape, &mut rng);
            let a = g.mul_star(&g).unwrap();
            let b = a.add(&h.mul_star(&h).unwrap()).unwrap();
            prop_assert!(a.is_positive(1e-10));
            prop_assert!(b.sub(&a).unwrap().is_positive(1e-10));
            prop_assert!(a.norm() <= b.norm() + 1e-10);
        }

        #[test]
        fn json_round_trip_is_byte_identical(shape in arb_shape(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = E::random_gaussian(&shape, &mut rng);
            let s1 = serde_json::to_string(&a).unwrap();
            let back: E = serde_json::from_str(&s1).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), s1);
        }
    }
}
