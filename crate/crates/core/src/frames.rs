//! Finite modular frames in `𝒜^d`.
//!
//! A family `{τₙ}` is a modular Parseval frame when
//! `⟨x, x⟩ = Σₙ ⟨x, τₙ⟩⟨τₙ, x⟩` for every `x`, which is the same as saying the
//! frame operator `S = θ*θ` is the identity. Any frame whose frame operator is
//! invertible can be made Parseval by applying `S^{-1/2}` to every vector.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::csmodule::{ModuleOperator, ModuleVector, DEFAULT_INV_SQRT_TOL};
use crate::error::{mismatch, Error, Result};
use crate::scalar::{cis, creal, Real};

/// Relative threshold below which a coefficient counts as zero.
pub const DEFAULT_SPARSITY_REL_TOL: f64 = 1e-8;
/// Tolerance used when re-verifying the Parseval property of loaded frames.
pub const DEFAULT_PARSEVAL_TOL: f64 = 1e-8;
/// How many Gaussian draws [`ModularFrame::random_parseval`] makes before giving up.
pub const MAX_GENERATION_ATTEMPTS: usize = 32;

/// Finite family `{τₙ}` in a common `𝒜^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularFrame<T> {
    shape: AlgebraShape,
    d: usize,
    vectors: Vec<ModuleVector<T>>,
}

/// Finitely supported element of `ℓ²(ℕ, 𝒜)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AnalysisCoefficients<T> {
    pub coeffs: Vec<AlgebraElement<T>>,
}

impl<T: Real> AnalysisCoefficients<T> {
    pub fn new(coeffs: Vec<AlgebraElement<T>>) -> Self {
        Self { coeffs }
    }

    /// `δₙ`: `1_𝒜` at index `n` of a length-`len` sequence.
    pub fn delta(shape: &AlgebraShape, len: usize, n: usize) -> Self {
        let mut coeffs = vec![AlgebraElement::zero(shape); len];
        coeffs[n] = AlgebraElement::identity(shape);
        Self { coeffs }
    }

    pub fn random_gaussian<R: Rng + ?Sized>(shape: &AlgebraShape, len: usize, rng: &mut R) -> Self {
        Self {
            coeffs: (0..len).map(|_| AlgebraElement::random_gaussian(shape, rng)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `⟨a, b⟩ = Σₙ aₙ bₙ*`
    pub fn inner(&self, other: &Self) -> Result<AlgebraElement<T>> {
        if self.len() != other.len() || self.is_empty() {
            return Err(mismatch(format!(
                "sequences of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mut acc = AlgebraElement::zero(self.coeffs[0].shape());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            acc.accumulate(&a.mul_star(b)?);
        }
        Ok(acc)
    }

    /// `‖Σₙ aₙ aₙ*‖^{1/2}`
    pub fn norm(&self) -> T {
        if self.is_empty() {
            return T::zero();
        }
        self.inner(self).expect("same sequence").norm().sqrt()
    }

    /// Indices whose coefficient norm exceeds `rel_tol` times the largest one.
    pub fn support(&self, rel_tol: T) -> Vec<usize> {
        let norms: Vec<T> = self.coeffs.iter().map(AlgebraElement::norm).collect();
        let top = norms.iter().copied().fold(T::zero(), T::max);
        norms
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > rel_tol * top)
            .map(|(i, _)| i)
            .collect()
    }

    /// `‖a‖₀`
    pub fn sparsity(&self, rel_tol: T) -> usize {
        self.support(rel_tol).len()
    }

    pub fn coords(&self) -> Vec<crate::scalar::C<T>> {
        self.coeffs.iter().flat_map(AlgebraElement::coords).collect()
    }
}

impl<T: Real> ModularFrame<T> {
    pub fn new(vectors: Vec<ModuleVector<T>>) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::InvalidInput("a frame needs at least one vector".into()))?;
        let (shape, d) = (first.shape().clone(), first.len());
        for (n, v) in vectors.iter().enumerate() {
            if v.shape() != &shape || v.len() != d {
                return Err(mismatch(format!(
                    "frame vector {n} lives in {}^{}, frame in {shape}^{d}",
                    v.shape(),
                    v.len()
                )));
            }
        }
        Ok(Self { shape, d, vectors })
    }

    /// `{e₁, …, e_d}`
    pub fn standard(shape: &AlgebraShape, d: usize) -> Self {
        Self {
            shape: shape.clone(),
            d,
            vectors: (0..d).map(|i| ModuleVector::basis(shape, d, i)).collect(),
        }
    }

    /// Vectors `ω_k` with `(ω_k)ⱼ = e^{2πijk/d}/√d · 1_𝒜`, so that
    /// `⟨x, ω_k⟩ = d^{-1/2} Σⱼ e^{-2πijk/d} xⱼ` is the discrete Fourier transform.
    pub fn fourier(shape: &AlgebraShape, d: usize) -> Self {
        let inv_sqrt = T::one() / T::lit(d as f64).sqrt();
        let two_pi = T::TAU();
        let vectors = (0..d)
            .map(|k| {
                let entries = (0..d)
                    .map(|j| {
                        let theta = two_pi * T::lit(((j * k) % d) as f64) / T::lit(d as f64);
                        AlgebraElement::scalar(shape, cis(theta) * inv_sqrt)
                    })
                    .collect();
                ModuleVector::new(shape.clone(), entries).expect("conforming entries")
            })
            .collect();
        Self {
            shape: shape.clone(),
            d,
            vectors,
        }
    }

    /// Gaussian frame of `n` vectors, Parseval-ized. Near-singular draws are redrawn.
    pub fn random_parseval<R: Rng + ?Sized>(shape: &AlgebraShape, d: usize, n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidInput("need d >= 1 and at least one frame vector".into()));
        }
        for _ in 0..MAX_GENERATION_ATTEMPTS {
            let raw = Self {
                shape: shape.clone(),
                d,
                vectors: (0..n).map(|_| ModuleVector::random_gaussian(shape, d, rng)).collect(),
            };
            match raw.parsevalize() {
                Ok(f) => return Ok(f),
                Err(Error::NotAFrame { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Environment(format!(
            "no invertible frame of {n} vectors in {shape}^{d} after {MAX_GENERATION_ATTEMPTS} attempts"
        )))
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    /// Rank `d` of the ambient module.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of frame vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ModuleVector<T>] {
        &self.vectors
    }

    pub fn vector(&self, n: usize) -> &ModuleVector<T> {
        &self.vectors[n]
    }

    fn check_vector(&self, x: &ModuleVector<T>) -> Result<()> {
        if x.shape() != &self.shape || x.len() != self.d {
            return Err(mismatch(format!(
                "vector in {}^{} for a frame in {}^{}",
                x.shape(),
                x.len(),
                self.shape,
                self.d
            )));
        }
        Ok(())
    }

    /// `θx = (⟨x, τₙ⟩)ₙ`
    pub fn analysis(&self, x: &ModuleVector<T>) -> Result<AnalysisCoefficients<T>> {
        self.check_vector(x)?;
        Ok(AnalysisCoefficients {
            coeffs: self.vectors.iter().map(|t| x.inner(t)).collect::<Result<_>>()?,
        })
    }

    /// `θ*a = Σₙ aₙ τₙ`
    pub fn synthesis(&self, a: &AnalysisCoefficients<T>) -> Result<ModuleVector<T>> {
        if a.len() != self.len() {
            return Err(mismatch(format!(
                "{} coefficients for a frame of {} vectors",
                a.len(),
                self.len()
            )));
        }
        let mut acc = ModuleVector::zero(&self.shape, self.d);
        for (c, t) in a.coeffs.iter().zip(&self.vectors) {
            acc.accumulate(&t.left_mul(c)?);
        }
        Ok(acc)
    }

    /// `S` with `Sᵢⱼ = Σₙ (τₙ)ᵢ* (τₙ)ⱼ`, so that `xS = Σₙ ⟨x, τₙ⟩ τₙ`.
    pub fn frame_operator(&self) -> ModuleOperator<T> {
        let d = self.d;
        let mut s = ModuleOperator::zero(&self.shape, d);
        for t in &self.vectors {
            for i in 0..d {
                let ti_star = t.entry(i).star();
                for j in 0..d {
                    let term = ti_star.mul(t.entry(j)).expect("frame shape");
                    s.entry_mut(i, j).accumulate(&term);
                }
            }
        }
        s
    }

    /// `‖S − I‖`
    pub fn parseval_deviation(&self) -> T {
        self.frame_operator()
            .sub(&ModuleOperator::identity(&self.shape, self.d))
            .expect("same module")
            .norm()
    }

    pub fn is_parseval(&self, tol: T) -> bool {
        self.parseval_deviation() <= tol
    }

    /// Canonical Parseval frame `{τₙ S^{-1/2}}`.
    pub fn parsevalize(&self) -> Result<Self> {
        let s = self.frame_operator();
        let p = s.inv_sqrt(T::tol(DEFAULT_INV_SQRT_TOL)).map_err(|e| match e {
            Error::SingularOperator { min_eigenvalue, .. } => Error::NotAFrame { min_eigenvalue },
            other => other,
        })?;
        Ok(Self {
            shape: self.shape.clone(),
            d: self.d,
            vectors: self.vectors.iter().map(|t| p.apply(t)).collect::<Result<_>>()?,
        })
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape || self.d != other.d {
            return Err(mismatch(format!(
                "frames in {}^{} and {}^{}",
                self.shape, self.d, other.shape, other.d
            )));
        }
        Ok(())
    }

    /// All cross inner products `⟨τₙ, ω_m⟩`, indexed `[n][m]`.
    pub fn cross_gram(&self, other: &Self) -> Result<Vec<Vec<AlgebraElement<T>>>> {
        self.check_frame(other)?;
        self.vectors
            .iter()
            .map(|t| other.vectors.iter().map(|w| t.inner(w)).collect())
            .collect()
    }

    /// `maxₙ,ₘ ‖⟨τₙ, ω_m⟩‖`
    pub fn coherence(&self, other: &Self) -> Result<T> {
        Ok(self
            .cross_gram(other)?
            .iter()
            .flatten()
            .map(AlgebraElement::norm)
            .fold(T::zero(), T::max))
    }

    /// Scales every vector by a real factor.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            shape: self.shape.clone(),
            d: self.d,
            vectors: self.vectors.iter().map(|v| v.scale(creal(c))).collect(),
        }
    }

    /// Concatenates two families in the same module.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Ok(Self {
            shape: self.shape.clone(),
            d: self.d,
            vectors,
        })
    }

    pub fn cast<U: Real>(&self) -> ModularFrame<U> {
        ModularFrame {
            shape: self.shape.clone(),
            d: self.d,
            vectors: self.vectors.iter().map(ModuleVector::cast).collect(),
        }
    }
}

pub fn analysis<T: Real>(f: &ModularFrame<T>, x: &ModuleVector<T>) -> Result<AnalysisCoefficients<T>> {
    f.analysis(x)
}

pub fn synthesis<T: Real>(f: &ModularFrame<T>, a: &AnalysisCoefficients<T>) -> Result<ModuleVector<T>> {
    f.synthesis(a)
}

pub fn coherence<T: Real>(f: &ModularFrame<T>, g: &ModularFrame<T>) -> Result<T> {
    f.coherence(g)
}

/// On-disk frame: `{"algebra":[...],"d":d,"vectors":[...],"parseval":bool}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FrameFile<T> {
    pub algebra: AlgebraShape,
    pub d: usize,
    pub vectors: Vec<ModuleVector<T>>,
    pub parseval: bool,
}

/// A frame read from disk together with what its file claimed.
#[derive(Clone, Debug)]
pub struct LoadedFrame<T> {
    pub frame: ModularFrame<T>,
    pub claimed_parseval: bool,
    /// Result of re-checking with [`DEFAULT_PARSEVAL_TOL`].
    pub verified_parseval: bool,
}

impl<T: Real> FrameFile<T> {
    pub fn from_frame(frame: &ModularFrame<T>) -> Self {
        Self {
            algebra: frame.shape.clone(),
            d: frame.d,
            vectors: frame.vectors.clone(),
            parseval: frame.is_parseval(T::tol(DEFAULT_PARSEVAL_TOL)),
        }
    }

    /// Validates the header against the vectors and re-verifies the Parseval flag.
    pub fn load(self) -> Result<LoadedFrame<T>> {
        for (n, v) in self.vectors.iter().enumerate() {
            if v.shape() != &self.algebra || v.len() != self.d {
                return Err(mismatch(format!(
                    "vectors[{n}] lives in {}^{}, header declares {}^{}",
                    v.shape(),
                    v.len(),
                    self.algebra,
                    self.d
                )));
            }
        }
        let frame = ModularFrame::new(self.vectors)?;
        let verified_parseval = frame.is_parseval(T::tol(DEFAULT_PARSEVAL_TOL));
        Ok(LoadedFrame {
            frame,
            claimed_parseval: self.parseval,
            verified_parseval,
        })
    }
}
