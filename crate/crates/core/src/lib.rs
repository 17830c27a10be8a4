//! Frames over finite-dimensional C*-algebras and the noncommutative
//! Donoho-Stark / Elad-Bruckstein / Ricaud-Torrésani uncertainty inequality
//!
//! ```text
//! ‖θ_τ x‖₀ · ‖θ_ω x‖₀ ≥ 1 / maxₙ,ₘ ‖⟨τₙ, ω_m⟩‖²
//! ```
//!
//! for modular Parseval frames `{τₙ}`, `{ω_m}` of `𝒜^d`, where `𝒜` is a finite
//! direct sum of matrix algebras. The crate certifies the inequality and every
//! step of its standard proof on concrete instances, and explores the
//! prime-dimension additive bound `‖x‖₀ + ‖x̂‖₀ ≥ p + 1` for algebra-valued
//! Fourier transforms.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the tolerances are tuned for.

pub mod algebra;
pub mod csmodule;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod ncft;
pub mod scalar;
pub mod seed;
pub mod uncertainty;

pub use algebra::AlgebraShape;
pub use error::{Error, Result};
pub use scalar::{Real, C};
pub use uncertainty::UncertaintyCertificate;

pub type AlgebraElement = algebra::AlgebraElement<f64>;
pub type ModuleVector = csmodule::ModuleVector<f64>;
pub type ModuleOperator = csmodule::ModuleOperator<f64>;
pub type ModularFrame = frames::ModularFrame<f64>;
pub type AnalysisCoefficients = frames::AnalysisCoefficients<f64>;
pub type CMatrix = linalg::CMatrix<f64>;
pub type ConjectureReport = ncft::ConjectureReport<f64>;

pub type AlgebraElementF32 = algebra::AlgebraElement<f32>;
pub type ModuleVectorF32 = csmodule::ModuleVector<f32>;
pub type ModularFrameF32 = frames::ModularFrame<f32>;
