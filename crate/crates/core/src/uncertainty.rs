//! Certificates for the noncommutative uncertainty inequality
//!
//! ```text
//! ((‖θ_τx‖₀ + ‖θ_ωx‖₀)/2)² ≥ ‖θ_τx‖₀ ‖θ_ωx‖₀ ≥ 1 / maxₙ,ₘ ‖⟨τₙ, ω_m⟩‖²
//! ```
//!
//! for modular Parseval frames and nonzero `x`, together with a numerical
//! replay of each step of its proof and an independent feasibility oracle for
//! support pairs that works in the complex flattening of `𝒜^d`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::csmodule::ModuleVector;
use crate::error::{mismatch, Error, Result};
use crate::frames::{AnalysisCoefficients, ModularFrame, DEFAULT_PARSEVAL_TOL};
use crate::linalg::{svd, CMatrix};
use crate::scalar::{cz, Real, C};
use crate::seed::task_rng;

/// Slack on every inequality verdict.
pub const VERDICT_SLACK: f64 = 1e-9;
/// Vectors with module norm at or below this are treated as zero.
pub const ZERO_VECTOR_NORM: f64 = 1e-12;
/// Relative singular-value threshold of the feasibility oracle.
pub const KERNEL_REL_TOL: f64 = 1e-10;

/// Evaluated quantities of the uncertainty inequality for one `(τ, ω, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyCertificate {
    /// `‖θ_τx‖₀`
    pub s_tau: usize,
    /// `‖θ_ωx‖₀`
    pub s_omega: usize,
    /// Coherence `maxₙ,ₘ ‖⟨τₙ, ω_m⟩‖`.
    pub mu: f64,
    pub product_lhs: usize,
    /// `((s_tau + s_omega)/2)²`
    pub additive_lhs: f64,
    /// `1/mu²`
    pub rhs: f64,
    pub product_holds: bool,
    pub additive_holds: bool,
    /// `product_lhs − rhs`
    pub slack: f64,
}

impl UncertaintyCertificate {
    pub fn holds(&self) -> bool {
        self.product_holds && self.additive_holds
    }
}

fn require_parseval<T: Real>(f: &ModularFrame<T>, name: &str) -> Result<()> {
    let tol = T::tol(DEFAULT_PARSEVAL_TOL);
    let deviation = f.parseval_deviation();
    if deviation > tol {
        return Err(Error::NotParseval {
            frame: name.to_string(),
            deviation: deviation.as_f64(),
            tol: tol.as_f64(),
        });
    }
    Ok(())
}

fn check_preconditions<T: Real>(f: &ModularFrame<T>, g: &ModularFrame<T>, x: &ModuleVector<T>) -> Result<()> {
    if f.shape() != g.shape() || f.dim() != g.dim() {
        return Err(mismatch(format!(
            "frames live in {}^{} and {}^{}",
            f.shape(),
            f.dim(),
            g.shape(),
            g.dim()
        )));
    }
    if x.shape() != f.shape() || x.len() != f.dim() {
        return Err(mismatch(format!(
            "vector in {}^{} for frames in {}^{}",
            x.shape(),
            x.len(),
            f.shape(),
            f.dim()
        )));
    }
    require_parseval(f, "tau")?;
    require_parseval(g, "omega")?;
    let norm = x.norm();
    if norm <= T::lit(ZERO_VECTOR_NORM) {
        return Err(Error::ZeroVector { norm: norm.as_f64() });
    }
    Ok(())
}

/// Evaluates both forms of the inequality for Parseval frames `f`, `g` and `x ≠ 0`.
pub fn certify<T: Real>(
    f: &ModularFrame<T>,
    g: &ModularFrame<T>,
    x: &ModuleVector<T>,
    rel_tol: T,
) -> Result<UncertaintyCertificate> {
    check_preconditions(f, g, x)?;
    let s_tau = f.analysis(x)?.sparsity(rel_tol);
    let s_omega = g.analysis(x)?.sparsity(rel_tol);
    let mu = f.coherence(g)?.as_f64();
    Ok(certificate_from(s_tau, s_omega, mu, T::tol(VERDICT_SLACK).as_f64()))
}

fn certificate_from(s_tau: usize, s_omega: usize, mu: f64, slack: f64) -> UncertaintyCertificate {
    let rhs = 1.0 / (mu * mu);
    let product_lhs = s_tau * s_omega;
    let mean = (s_tau + s_omega) as f64 / 2.0;
    let additive_lhs = mean * mean;
    UncertaintyCertificate {
        s_tau,
        s_omega,
        mu,
        product_lhs,
        additive_lhs,
        rhs,
        product_holds: product_lhs as f64 >= rhs - slack,
        additive_holds: additive_lhs >= rhs - slack,
        slack: product_lhs as f64 - rhs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
}

/// Both sides of one link of the proof chain, as real numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStep {
    pub step_name: String,
    pub lhs_norm: f64,
    pub relation: Relation,
    pub rhs_norm: f64,
    pub holds: bool,
}

impl ProofStep {
    fn new(name: &str, lhs: f64, relation: Relation, rhs: f64, slack: f64) -> Self {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        let holds = match relation {
            Relation::Equal => (lhs - rhs).abs() <= slack * scale,
            Relation::AtMost => lhs <= rhs + slack * scale,
        };
        Self {
            step_name: name.to_string(),
            lhs_norm: lhs,
            relation,
            rhs_norm: rhs,
            holds,
        }
    }
}

fn sum_elements<T: Real>(shape: &AlgebraShape, terms: impl Iterator<Item = AlgebraElement<T>>) -> AlgebraElement<T> {
    let mut acc = AlgebraElement::zero(shape);
    for t in terms {
        acc.accumulate(&t);
    }
    acc
}

/// Replays the proof of the inequality on a concrete instance.
///
/// With `T = supp θ_τx`, `Ω = supp θ_ωx`, `cₘ = ⟨x, ω_m⟩` and `gₙₘ = ⟨τₙ, ω_m⟩`,
/// the chain is
///
/// ```text
/// ‖x‖² = ‖Σ_{n∈T} ⟨x,τₙ⟩⟨τₙ,x⟩‖                         support_restriction
///      = ‖Σ_{n∈T} vₙ vₙ*‖,  vₙ = Σ_{m∈Ω} cₘ gₙₘ*         omega_expansion
///      ≤ ‖Σ_{n∈T} ‖Σ_{m∈Ω} gₙₘgₙₘ*‖ · C‖                 cauchy_schwarz
///      ≤ ‖Σ_{n∈T} Σ_{m∈Ω} ‖gₙₘgₙₘ*‖ · C‖                 entrywise_norm_bound
///      ≤ μ² |T| |Ω| ‖C‖                                  coherence_sup
///      = μ² |T| |Ω| ‖x‖²                                 omega_parseval
/// ```
///
/// where `C = Σ_{k∈Ω} c_k c_k*`. A final `bound` step compares `1` with
/// `μ² |T| |Ω|`.
pub fn proof_chain_check<T: Real>(
    f: &ModularFrame<T>,
    g: &ModularFrame<T>,
    x: &ModuleVector<T>,
    rel_tol: T,
) -> Result<Vec<ProofStep>> {
    check_preconditions(f, g, x)?;
    let shape = x.shape();
    let theta_tau = f.analysis(x)?;
    let theta_omega = g.analysis(x)?;
    let supp_tau = theta_tau.support(rel_tol);
    let supp_omega = theta_omega.support(rel_tol);
    let gram = f.cross_gram(g)?;
    let mu = gram.iter().flatten().map(AlgebraElement::norm).fold(T::zero(), T::max);
    let c = &theta_omega.coeffs;

    let x_sq = x.inner(x)?.norm();

    let restricted = sum_elements(
        shape,
        supp_tau.iter().map(|&n| {
            let a = &theta_tau.coeffs[n];
            a.mul_star(a).expect("shape")
        }),
    )
    .norm();

    let expanded = sum_elements(
        shape,
        supp_tau.iter().map(|&n| {
            let v = sum_elements(
                shape,
                supp_omega.iter().map(|&m| c[m].mul_star(&gram[n][m]).expect("shape")),
            );
            v.mul_star(&v).expect("shape")
        }),
    )
    .norm();

    let c_sum = sum_elements(shape, supp_omega.iter().map(|&k| c[k].mul_star(&c[k]).expect("shape")));

    let cs_weight: T = supp_tau
        .iter()
        .map(|&n| {
            sum_elements(
                shape,
                supp_omega
                    .iter()
                    .map(|&m| gram[n][m].mul_star(&gram[n][m]).expect("shape")),
            )
            .norm()
        })
        .sum();
    let cauchy_schwarz = c_sum.scale_real(cs_weight).norm();

    let entry_weight: T = supp_tau
        .iter()
        .flat_map(|&n| supp_omega.iter().map(move |&m| (n, m)))
        .map(|(n, m)| gram[n][m].mul_star(&gram[n][m]).expect("shape").norm())
        .sum();
    let entrywise = c_sum.scale_real(entry_weight).norm();

    let count = T::lit((supp_tau.len() * supp_omega.len()) as f64);
    let c_norm = c_sum.norm();
    let coherence_bound = mu * mu * count * c_norm;
    let final_bound = mu * mu * count * x_sq;
    let slack = T::tol(VERDICT_SLACK).as_f64();

    Ok(vec![
        ProofStep::new(
            "support_restriction",
            x_sq.as_f64(),
            Relation::Equal,
            restricted.as_f64(),
            slack,
        ),
        ProofStep::new(
            "omega_expansion",
            restricted.as_f64(),
            Relation::Equal,
            expanded.as_f64(),
            slack,
        ),
        ProofStep::new(
            "cauchy_schwarz",
            expanded.as_f64(),
            Relation::AtMost,
            cauchy_schwarz.as_f64(),
            slack,
        ),
        ProofStep::new(
            "entrywise_norm_bound",
            cauchy_schwarz.as_f64(),
            Relation::AtMost,
            entrywise.as_f64(),
            slack,
        ),
        ProofStep::new(
            "coherence_sup",
            entrywise.as_f64(),
            Relation::AtMost,
            coherence_bound.as_f64(),
            slack,
        ),
        ProofStep::new(
            "omega_parseval",
            coherence_bound.as_f64(),
            Relation::Equal,
            final_bound.as_f64(),
            slack,
        ),
        ProofStep::new("bound", 1.0, Relation::AtMost, (mu * mu * count).as_f64(), slack),
    ])
}

/// Outcome of [`support_pair_feasible`].
#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility<T> {
    pub feasible: bool,
    /// Complex dimension of the solution space in the flattening.
    pub kernel_dim: usize,
    /// Unit-norm vector whose coefficients vanish off the requested supports.
    pub witness: Option<ModuleVector<T>>,
}

/// Complex matrix of `x ↦ (⟨x, v⟩)_{v}` in flattened coordinates, built by
/// evaluating the inner product on the coordinate basis of `𝒜^d`.
fn constraint_matrix<T: Real>(shape: &AlgebraShape, d: usize, constraints: &[&ModuleVector<T>]) -> Result<CMatrix<T>> {
    let dim = shape.dim();
    let n_cols = d * dim;
    let mut m = CMatrix::zeros(constraints.len() * dim, n_cols);
    let mut unit = vec![cz::<T>(); n_cols];
    for col in 0..n_cols {
        unit[col] = C::new(T::one(), T::zero());
        let e = ModuleVector::from_coords(shape, d, &unit)?;
        unit[col] = cz();
        for (r, v) in constraints.iter().enumerate() {
            for (k, z) in e.inner(v)?.coords().into_iter().enumerate() {
                m[(r * dim + k, col)] = z;
            }
        }
    }
    Ok(m)
}

fn check_indices(set: &[usize], len: usize, name: &str) -> Result<()> {
    if let Some(&bad) = set.iter().find(|&&i| i >= len) {
        return Err(Error::InvalidInput(format!(
            "index {bad} in {name} is out of range for a frame of {len} vectors"
        )));
    }
    Ok(())
}

/// Decides whether some `x ≠ 0` has `supp θ_F x ⊆ t_set` and `supp θ_G x ⊆ omega_set`.
///
/// `x ↦ ⟨x, v⟩` is complex-linear, so the constraints `⟨x, τₙ⟩ = 0` (n ∉ t_set)
/// and `⟨x, ω_m⟩ = 0` (m ∉ omega_set) form a linear system on
/// `ℂ^{d·dim 𝒜}`; the answer is whether it has a nontrivial kernel, with
/// singular values at most `1e-10·σ_max` counted as zero.
pub fn support_pair_feasible<T: Real>(
    f: &ModularFrame<T>,
    g: &ModularFrame<T>,
    t_set: &[usize],
    omega_set: &[usize],
) -> Result<Feasibility<T>> {
    if f.shape() != g.shape() || f.dim() != g.dim() {
        return Err(mismatch("frames live in different modules"));
    }
    check_indices(t_set, f.len(), "T")?;
    check_indices(omega_set, g.len(), "Omega")?;
    let constraints: Vec<&ModuleVector<T>> = (0..f.len())
        .filter(|n| !t_set.contains(n))
        .map(|n| f.vector(n))
        .chain((0..g.len()).filter(|m| !omega_set.contains(m)).map(|m| g.vector(m)))
        .collect();
    let m = constraint_matrix(f.shape(), f.dim(), &constraints)?;
    let decomposition = svd(&m);
    let kernel = decomposition.kernel(T::tol(KERNEL_REL_TOL));
    let kernel_dim = kernel.cols();
    let witness = if kernel_dim > 0 {
        let w = ModuleVector::from_coords(f.shape(), f.dim(), &kernel.column(0))?;
        let n = w.norm();
        Some(w.scale(C::new(T::one() / n, T::zero())))
    } else {
        None
    };
    Ok(Feasibility {
        feasible: kernel_dim > 0,
        kernel_dim,
        witness,
    })
}

/// How the test vector of an audit trial was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorKind {
    /// i.i.d. Gaussian coordinates.
    Gaussian,
    /// A single vector of one of the two frames.
    FrameVector,
    /// `θ_τ* a` for a Gaussian `a` with random sparse support.
    SparseSynthesis,
}

/// One audit trial, as written to the JSON-lines report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub vector_kind: VectorKind,
    pub certificate: UncertaintyCertificate,
    pub chain_holds: bool,
    pub failed_steps: Vec<String>,
}

/// Summary of a randomized audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub algebra: AlgebraShape,
    pub d: usize,
    pub n_tau: usize,
    pub n_omega: usize,
    pub trials: usize,
    pub seed: u64,
    pub rel_tol: f64,
    /// Trials where either form of the inequality failed.
    pub violations: usize,
    /// Trials where some proof step failed.
    pub chain_violations: usize,
    pub min_slack: f64,
    pub tightest_trial: usize,
    pub records: Vec<TrialRecord>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.violations == 0 && self.chain_violations == 0
    }
}

fn random_support<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<usize> {
    let k = rng.random_range(1..=len);
    rand::seq::index::sample(rng, len, k).into_vec()
}

fn audit_trial<T: Real>(
    shape: &AlgebraShape,
    d: usize,
    n_tau: usize,
    n_omega: usize,
    rel_tol: T,
    seed: u64,
    trial: usize,
) -> Result<TrialRecord> {
    let mut rng = task_rng(seed, trial as u64);
    let f = ModularFrame::<T>::random_parseval(shape, d, n_tau, &mut rng)?;
    let g = ModularFrame::<T>::random_parseval(shape, d, n_omega, &mut rng)?;
    let vector_kind = match rng.random_range(0..3) {
        0 => VectorKind::Gaussian,
        1 => VectorKind::FrameVector,
        _ => VectorKind::SparseSynthesis,
    };
    let x = match vector_kind {
        VectorKind::Gaussian => ModuleVector::random_gaussian(shape, d, &mut rng),
        VectorKind::FrameVector => {
            if rng.random_bool(0.5) {
                f.vector(rng.random_range(0..n_tau)).clone()
            } else {
                g.vector(rng.random_range(0..n_omega)).clone()
            }
        }
        VectorKind::SparseSynthesis => {
            let mut a = AnalysisCoefficients::new(vec![AlgebraElement::zero(shape); n_tau]);
            for n in random_support(n_tau, &mut rng) {
                a.coeffs[n] = AlgebraElement::random_gaussian(shape, &mut rng);
            }
            f.synthesis(&a)?
        }
    };
    let certificate = certify(&f, &g, &x, rel_tol)?;
    let steps = proof_chain_check(&f, &g, &x, rel_tol)?;
    let failed_steps: Vec<String> = steps.iter().filter(|s| !s.holds).map(|s| s.step_name.clone()).collect();
    Ok(TrialRecord {
        trial,
        vector_kind,
        certificate,
        chain_holds: failed_steps.is_empty(),
        failed_steps,
    })
}

/// Runs `trials` random Parseval-pair instances; deterministic in `seed`.
///
/// Trials run in parallel on the current rayon pool.
pub fn random_audit<T: Real>(
    shape: &AlgebraShape,
    d: usize,
    n_tau: usize,
    n_omega: usize,
    trials: usize,
    seed: u64,
    rel_tol: T,
) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if d == 0 || n_tau < d || n_omega < d {
        return Err(Error::InvalidInput(format!(
            "need d >= 1 and at least d frame vectors (d = {d}, n_tau = {n_tau}, n_omega = {n_omega})"
        )));
    }
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|t| audit_trial(shape, d, n_tau, n_omega, rel_tol, seed, t))
        .collect::<Result<_>>()?;
    let violations = records.iter().filter(|r| !r.certificate.holds()).count();
    let chain_violations = records.iter().filter(|r| !r.chain_holds).count();
    let (tightest_trial, min_slack) = records
        .iter()
        .map(|r| (r.trial, r.certificate.slack))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(AuditReport {
        algebra: shape.clone(),
        d,
        n_tau,
        n_omega,
        trials,
        seed,
        rel_tol: rel_tol.as_f64(),
        violations,
        chain_violations,
        min_slack,
        tightest_trial,
        records,
    })
}
