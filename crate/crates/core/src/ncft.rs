//! Algebra-valued discrete Fourier transform and the prime-dimension additive
//! uncertainty bound `‖x‖₀ + ‖x̂‖₀ ≥ p + 1`.
//!
//! For scalars the bound is equivalent to every square minor of the `p×p`
//! DFT matrix being nonsingular (Chebotarev). A support pair `(T, Ω)` admits a
//! nonzero `h` with `supp h ⊆ T` and `supp ĥ ⊆ Ω` exactly when the submatrix on
//! rows `Ωᶜ` and columns `T` is rank deficient. Since the transform acts on
//! each scalar coordinate of `𝒜` separately, the algebra-valued question
//! reduces to the scalar one coordinate by coordinate; the audit below checks
//! that reduction against a direct kernel search in the flattening.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::csmodule::ModuleVector;
use crate::error::{Error, Result};
use crate::frames::{AnalysisCoefficients, ModularFrame, DEFAULT_SPARSITY_REL_TOL};
use crate::linalg::{svd, CMatrix};
use crate::scalar::{cis, cz, Real, C};
use crate::seed::task_rng;
use crate::uncertainty::support_pair_feasible;

/// Relative singular-value threshold for rank decisions on DFT submatrices.
pub const MINOR_REL_TOL: f64 = 1e-10;
/// Largest `p` for exhaustive minor enumeration without the long-running flag.
pub const MAX_EXHAUSTIVE_P: usize = 7;
/// Largest `p` accepted by sampled searches and conjecture audits.
pub const MAX_SAMPLED_P: usize = 13;
/// Largest `p` for the exhaustive algebra-valued support search.
pub const MAX_STRUCTURED_P: usize = 5;
pub const DEFAULT_SAMPLES: usize = 100_000;

/// A prime, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct PrimeDim(usize);

impl PrimeDim {
    pub fn new(p: usize) -> Result<Self> {
        if is_prime(p) {
            Ok(Self(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for PrimeDim {
    type Error = Error;
    fn try_from(p: usize) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeDim> for usize {
    fn from(p: PrimeDim) -> usize {
        p.0
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Unitary DFT matrix `W[k][j] = e^{-2πijk/d} / √d`.
pub fn dft_matrix<T: Real>(d: usize) -> CMatrix<T> {
    let inv_sqrt = T::one() / T::lit(d as f64).sqrt();
    CMatrix::from_fn(d, d, |k, j| {
        cis(-T::TAU() * T::lit(((j * k) % d) as f64) / T::lit(d as f64)) * inv_sqrt
    })
}

/// `x̂ₖ = d^{-1/2} Σⱼ e^{-2πijk/d} xⱼ`, scalars acting on algebra elements.
pub fn ncdft<T: Real>(x: &ModuleVector<T>) -> ModuleVector<T> {
    transform(x, &dft_matrix(x.len()))
}

/// Inverse of [`ncdft`].
pub fn inverse_ncdft<T: Real>(x: &ModuleVector<T>) -> ModuleVector<T> {
    transform(x, &dft_matrix::<T>(x.len()).adjoint())
}

fn transform<T: Real>(x: &ModuleVector<T>, w: &CMatrix<T>) -> ModuleVector<T> {
    let d = x.len();
    let entries = (0..d)
        .map(|k| {
            let mut acc = AlgebraElement::zero(x.shape());
            for j in 0..d {
                acc.accumulate(&x.entry(j).scale(w[(k, j)]));
            }
            acc
        })
        .collect();
    ModuleVector::new(x.shape().clone(), entries).expect("same shape")
}

/// `‖x‖₀` with the default relative threshold.
pub fn support_size<T: Real>(x: &ModuleVector<T>) -> usize {
    AnalysisCoefficients::new(x.entries().to_vec()).sparsity(T::tol(DEFAULT_SPARSITY_REL_TOL))
}

/// `‖x‖₀ + ‖x̂‖₀`
pub fn support_sum<T: Real>(x: &ModuleVector<T>) -> usize {
    support_size(x) + support_size(&ncdft(x))
}

fn check_index_set(set: &[usize], d: usize, name: &str) -> Result<()> {
    if let Some(&bad) = set.iter().find(|&&i| i >= d) {
        return Err(Error::InvalidInput(format!("{name} index {bad} outside 0..{d}")));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(Error::InvalidInput(format!("{name} has repeated indices")));
    }
    Ok(())
}

/// Whether the DFT submatrix on `rows × cols` has rank below `cols.len()`.
pub fn dft_submatrix_rank_deficient(d: usize, rows: &[usize], cols: &[usize]) -> Result<bool> {
    check_index_set(rows, d, "row")?;
    check_index_set(cols, d, "column")?;
    Ok(rank_deficient(&dft_matrix::<f64>(d), rows, cols))
}

fn rank_deficient(w: &CMatrix<f64>, rows: &[usize], cols: &[usize]) -> bool {
    if cols.is_empty() {
        return false;
    }
    if rows.len() < cols.len() {
        return true;
    }
    let s = svd(&w.select(rows, cols)).values;
    let top = s[0];
    *s.last().expect("nonempty") <= MINOR_REL_TOL * top
}

/// Whether the square minor of the `p×p` DFT on `rows × cols` is nonsingular.
pub fn chebotarev_minor_nonsingular(p: PrimeDim, rows: &[usize], cols: &[usize]) -> Result<bool> {
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::InvalidInput(format!(
            "minor must be square and nonempty ({} rows, {} columns)",
            rows.len(),
            cols.len()
        )));
    }
    Ok(!dft_submatrix_rank_deficient(p.get(), rows, cols)?)
}

fn complement(set: &[usize], d: usize) -> Vec<usize> {
    (0..d).filter(|i| !set.contains(i)).collect()
}

fn bits(mask: u32, d: usize) -> Vec<usize> {
    (0..d).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Supports `(T, Ω)` of a time/frequency pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPair {
    pub time: Vec<usize>,
    pub frequency: Vec<usize>,
}

impl SupportPair {
    pub fn sum(&self) -> usize {
        self.time.len() + self.frequency.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaoMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaoOptions {
    pub mode: TaoMode,
    pub samples: usize,
    pub seed: u64,
    /// Lifts the `p ≤ 7` cap on exhaustive enumeration.
    pub long_running: bool,
}

impl Default for TaoOptions {
    fn default() -> Self {
        Self {
            mode: TaoMode::Exhaustive,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            long_running: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaoReport {
    pub p: usize,
    pub mode: TaoMode,
    pub pairs_checked: u64,
    /// Smallest `|supp h| + |supp ĥ|` over nonzero `h` (`p + 1` if no pair
    /// within the checked set beats it).
    pub min_sum: usize,
    pub witness: SupportPair,
    pub threshold: f64,
    /// Pairs with `|T| + |Ω| = p` found feasible (singular minors).
    pub violations: Vec<SupportPair>,
}

impl TaoReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.min_sum == self.p + 1
    }
}

fn delta_witness(p: usize) -> SupportPair {
    SupportPair {
        time: vec![0],
        frequency: (0..p).collect(),
    }
}

/// Minimum `‖h‖₀ + ‖ĥ‖₀` over nonzero `h ∈ ℂᵖ`.
///
/// A feasible pair with `|T| + |Ω| ≤ p` contains one with sum exactly `p`, and
/// those correspond to the square minors `W[Ωᶜ, T]`. So the search checks
/// square minors (all of them, or a uniform sample) and only falls back to a
/// full pair search if one is singular.
pub fn tao_min_sum(p: PrimeDim, options: &TaoOptions) -> Result<TaoReport> {
    let pv = p.get();
    let w = dft_matrix::<f64>(pv);
    let (pairs_checked, violations) = match options.mode {
        TaoMode::Exhaustive => {
            if pv > MAX_EXHAUSTIVE_P && !options.long_running {
                return Err(Error::InvalidInput(format!(
                    "exhaustive mode is limited to p <= {MAX_EXHAUSTIVE_P}; use sampled mode or the long-running flag"
                )));
            }
            exhaustive_minors(&w, pv)
        }
        TaoMode::Sampled => {
            if pv > MAX_SAMPLED_P {
                return Err(Error::InvalidInput(format!(
                    "sampled mode is limited to p <= {MAX_SAMPLED_P}"
                )));
            }
            if options.samples == 0 {
                return Err(Error::InvalidInput("samples must be at least 1".into()));
            }
            sampled_minors(&w, pv, options.samples, options.seed)
        }
    };
    let (min_sum, witness) = if violations.is_empty() {
        (pv + 1, delta_witness(pv))
    } else {
        smallest_feasible_pair(&w, pv)
    };
    Ok(TaoReport {
        p: pv,
        mode: options.mode,
        pairs_checked,
        min_sum,
        witness,
        threshold: MINOR_REL_TOL,
        violations,
    })
}

fn exhaustive_minors(w: &CMatrix<f64>, p: usize) -> (u64, Vec<SupportPair>) {
    let masks: Vec<u32> = (1u32..(1 << p) - 1).collect();
    let results: Vec<(u64, Vec<SupportPair>)> = masks
        .par_iter()
        .map(|&tm| {
            let t = bits(tm, p);
            let mut checked = 0u64;
            let mut bad = Vec::new();
            for rm in 1u32..(1 << p) {
                if rm.count_ones() != tm.count_ones() {
                    continue;
                }
                let rows = bits(rm, p);
                checked += 1;
                if rank_deficient(w, &rows, &t) {
                    bad.push(SupportPair {
                        time: t.clone(),
                        frequency: complement(&rows, p),
                    });
                }
            }
            (checked, bad)
        })
        .collect();
    let checked = results.iter().map(|r| r.0).sum();
    (checked, results.into_iter().flat_map(|r| r.1).collect())
}

fn sampled_minors(w: &CMatrix<f64>, p: usize, samples: usize, seed: u64) -> (u64, Vec<SupportPair>) {
    let bad: Vec<SupportPair> = (0..samples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let k = rng.random_range(1..p);
            let mut t = rand::seq::index::sample(&mut rng, p, k).into_vec();
            let mut rows = rand::seq::index::sample(&mut rng, p, k).into_vec();
            t.sort_unstable();
            rows.sort_unstable();
            rank_deficient(w, &rows, &t).then(|| SupportPair {
                time: t,
                frequency: complement(&rows, p),
            })
        })
        .collect();
    (samples as u64, bad)
}

fn smallest_feasible_pair(w: &CMatrix<f64>, p: usize) -> (usize, SupportPair) {
    let mut best = (p + 1, delta_witness(p));
    for tm in 1u32..(1 << p) {
        for om in 1u32..(1 << p) {
            let sum = (tm.count_ones() + om.count_ones()) as usize;
            if sum >= best.0 {
                continue;
            }
            let t = bits(tm, p);
            let omega = bits(om, p);
            if rank_deficient(w, &complement(&omega, p), &t) {
                best = (
                    sum,
                    SupportPair {
                        time: t,
                        frequency: omega,
                    },
                );
            }
        }
    }
    best
}

/// How a sampled conjecture-audit vector was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Dense,
    SparseTime,
    SparseFrequency,
    /// `xⱼ = cⱼ a` for a sparse scalar vector `c` and one element `a`.
    ScalarTimesElement,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ConjectureViolation<T> {
    pub construction: Construction,
    pub sum: usize,
    pub x: ModuleVector<T>,
    /// A scalar coordinate slice also violates the scalar bound, which would
    /// contradict a theorem: an implementation defect rather than a counterexample.
    pub scalar_slice_violates: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredSearch {
    pub pairs_checked: u64,
    /// Pairs with `|T| + |Ω| ≤ p` admitting a nonzero algebra-valued vector.
    pub feasible_pairs: Vec<SupportPair>,
    /// Pairs where the flattened kernel search and the scalar minor criterion disagree.
    pub oracle_disagreements: Vec<SupportPair>,
    pub min_sum: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ConjectureReport<T> {
    pub algebra: AlgebraShape,
    pub p: usize,
    pub trials: usize,
    pub seed: u64,
    pub threshold: f64,
    pub min_observed_sum: usize,
    pub min_construction: Construction,
    /// `‖δ₀‖₀ + ‖δ̂₀‖₀` for `δ₀ = 1_𝒜 e₀`.
    pub delta_sum: usize,
    pub violations: Vec<ConjectureViolation<T>>,
    /// Random vectors with some scalar slice violating the scalar bound.
    pub slice_violations: usize,
    pub structured: Option<StructuredSearch>,
}

impl<T: Real> ConjectureReport<T> {
    pub fn holds(&self) -> bool {
        let structured_ok = self
            .structured
            .as_ref()
            .is_none_or(|s| s.feasible_pairs.is_empty() && s.oracle_disagreements.is_empty());
        self.violations.is_empty() && self.slice_violations == 0 && self.delta_sum == self.p + 1 && structured_ok
    }

    /// True when a failure could only come from a bug: a scalar slice or the
    /// two oracles contradict the scalar theorem.
    pub fn implementation_defect(&self) -> bool {
        self.slice_violations > 0
            || self.violations.iter().any(|v| v.scalar_slice_violates)
            || self
                .structured
                .as_ref()
                .is_some_and(|s| !s.oracle_disagreements.is_empty())
            || self.delta_sum != self.p + 1
    }
}

fn random_sparse_vector<T: Real, R: Rng + ?Sized>(
    shape: &AlgebraShape,
    p: usize,
    support: &[usize],
    rng: &mut R,
) -> ModuleVector<T> {
    let entries = (0..p)
        .map(|j| {
            if support.contains(&j) {
                AlgebraElement::random_gaussian(shape, rng)
            } else {
                AlgebraElement::zero(shape)
            }
        })
        .collect();
    ModuleVector::new(shape.clone(), entries).expect("conforming entries")
}

fn sample_vector<T: Real, R: Rng + ?Sized>(
    shape: &AlgebraShape,
    p: usize,
    rng: &mut R,
) -> (Construction, ModuleVector<T>) {
    let construction = match rng.random_range(0..5) {
        0 => Construction::Dense,
        1 => Construction::SparseTime,
        2 => Construction::SparseFrequency,
        3 => Construction::ScalarTimesElement,
        _ => Construction::Delta,
    };
    let random_support = |rng: &mut R| {
        let k = rng.random_range(1..=p);
        rand::seq::index::sample(rng, p, k).into_vec()
    };
    let x = match construction {
        Construction::Dense => ModuleVector::random_gaussian(shape, p, rng),
        Construction::SparseTime => {
            let s = random_support(rng);
            random_sparse_vector(shape, p, &s, rng)
        }
        Construction::SparseFrequency => {
            let s = random_support(rng);
            inverse_ncdft(&random_sparse_vector(shape, p, &s, rng))
        }
        Construction::ScalarTimesElement => {
            let s = random_support(rng);
            let a = AlgebraElement::random_gaussian(shape, rng);
            let entries = (0..p)
                .map(|j| {
                    if s.contains(&j) {
                        let z: C<T> = AlgebraElement::<T>::random_gaussian(&AlgebraShape::complex(), rng).coords()[0];
                        a.scale(z)
                    } else {
                        AlgebraElement::zero(shape)
                    }
                })
                .collect();
            ModuleVector::new(shape.clone(), entries).expect("conforming")
        }
        Construction::Delta => {
            let j = rng.random_range(0..p);
            let a = AlgebraElement::random_gaussian(shape, rng);
            let mut entries = vec![AlgebraElement::zero(shape); p];
            entries[j] = a;
            ModuleVector::new(shape.clone(), entries).expect("conforming")
        }
    };
    (construction, x)
}

fn scalar_support(values: &[C<f64>], rel_tol: f64) -> usize {
    let top = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    values.iter().filter(|z| z.norm() > rel_tol * top).count()
}

/// Checks every scalar coordinate slice of `x` against the scalar bound.
/// Slices negligible relative to `x` are skipped.
fn slice_violates<T: Real>(x: &ModuleVector<T>) -> bool {
    let p = x.len();
    let coords: Vec<Vec<C<f64>>> = x
        .entries()
        .iter()
        .map(|e| {
            e.coords()
                .iter()
                .map(|z| C::new(z.re.as_f64(), z.im.as_f64()))
                .collect()
        })
        .collect();
    let global = coords.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let w = dft_matrix::<f64>(p);
    (0..coords[0].len()).any(|c| {
        let slice: Vec<C<f64>> = coords.iter().map(|e| e[c]).collect();
        let top = slice.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if top <= 1e-6 * global {
            return false;
        }
        let hat: Vec<C<f64>> = (0..p)
            .map(|k| (0..p).fold(cz(), |acc, j| acc + w[(k, j)] * slice[j]))
            .collect();
        scalar_support(&slice, DEFAULT_SPARSITY_REL_TOL) + scalar_support(&hat, DEFAULT_SPARSITY_REL_TOL) < p + 1
    })
}

fn structured_search<T: Real>(shape: &AlgebraShape, p: usize) -> Result<StructuredSearch> {
    let time_frame = ModularFrame::<T>::standard(shape, p);
    let freq_frame = ModularFrame::<T>::fourier(shape, p);
    let w = dft_matrix::<f64>(p);
    let mut pairs = Vec::new();
    for tm in 1u32..(1 << p) {
        for om in 1u32..(1 << p) {
            if (tm.count_ones() + om.count_ones()) as usize <= p {
                pairs.push((bits(tm, p), bits(om, p)));
            }
        }
    }
    let outcomes: Vec<(SupportPair, bool, bool)> = pairs
        .into_par_iter()
        .map(|(t, omega)| {
            let flat = support_pair_feasible(&time_frame, &freq_frame, &t, &omega)?.feasible;
            let scalar = rank_deficient(&w, &complement(&omega, p), &t);
            Ok((
                SupportPair {
                    time: t,
                    frequency: omega,
                },
                flat,
                scalar,
            ))
        })
        .collect::<Result<_>>()?;
    let pairs_checked = outcomes.len() as u64;
    let feasible_pairs: Vec<SupportPair> = outcomes.iter().filter(|o| o.1).map(|o| o.0.clone()).collect();
    let oracle_disagreements = outcomes.iter().filter(|o| o.1 != o.2).map(|o| o.0.clone()).collect();
    let min_sum = feasible_pairs.iter().map(SupportPair::sum).min().unwrap_or(p + 1);
    Ok(StructuredSearch {
        pairs_checked,
        feasible_pairs,
        oracle_disagreements,
        min_sum,
    })
}

/// Searches for algebra-valued counterexamples to `‖x‖₀ + ‖x̂‖₀ ≥ p + 1`.
///
/// Samples `trials` vectors from several constructions, checks each one and
/// each of its scalar coordinate slices, and for `p ≤ 5` runs the exhaustive
/// support-pair search in the flattening.
pub fn conjecture_audit<T: Real>(
    shape: &AlgebraShape,
    p: PrimeDim,
    trials: usize,
    seed: u64,
) -> Result<ConjectureReport<T>> {
    let pv = p.get();
    if pv > MAX_SAMPLED_P {
        return Err(Error::InvalidInput(format!(
            "conjecture audit is limited to p <= {MAX_SAMPLED_P}"
        )));
    }
    let samples: Vec<(Construction, usize, bool, Option<ModuleVector<T>>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (construction, x) = sample_vector::<T, _>(shape, pv, &mut rng);
            let sum = support_sum(&x);
            let slice_bad = slice_violates(&x);
            let keep = (sum < pv + 1).then_some(x);
            (construction, sum, slice_bad, keep)
        })
        .collect();

    let delta = ModuleVector::<T>::basis(shape, pv, 0);
    let delta_sum = support_sum(&delta);

    let (min_observed_sum, min_construction) = samples
        .iter()
        .map(|s| (s.1, s.0))
        .chain(std::iter::once((delta_sum, Construction::Delta)))
        .min_by_key(|s| s.0)
        .expect("delta entry");
    let slice_violations = samples.iter().filter(|s| s.2).count();
    let violations = samples
        .into_iter()
        .filter_map(|(construction, sum, slice_bad, x)| {
            x.map(|x| ConjectureViolation {
                construction,
                sum,
                x,
                scalar_slice_violates: slice_bad,
            })
        })
        .collect();
    let structured = if pv <= MAX_STRUCTURED_P {
        Some(structured_search::<T>(shape, pv)?)
    } else {
        None
    };
    Ok(ConjectureReport {
        algebra: shape.clone(),
        p: pv,
        trials,
        seed,
        threshold: DEFAULT_SPARSITY_REL_TOL,
        min_observed_sum,
        min_construction,
        delta_sum,
        violations,
        slice_violations,
        structured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type V = ModuleVector<f64>;

    fn c(re: f64) -> C<f64> {
        C::new(re, 0.0)
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..30).filter(|&n| PrimeDim::new(n).is_ok()).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(serde_json::from_str::<PrimeDim>("9").is_err());
    }

    #[test]
    fn delta_transforms_to_constant() {
        for shape in [AlgebraShape::complex(), AlgebraShape::new(vec![1, 2]).unwrap()] {
            for p in [2, 3, 5] {
                let hat = ncdft(&V::basis(&shape, p, 0));
                let expected = AlgebraElement::scalar(&shape, c(1.0 / (p as f64).sqrt()));
                for e in hat.entries() {
                    assert!(e.sub(&expected).unwrap().norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn comb_is_fixed_in_dimension_four() {
        let comb = V::from_complex(&[c(1.0), c(0.0), c(1.0), c(0.0)]).unwrap();
        let hat = ncdft(&comb);
        // x̂ₖ = (1 + (−1)ᵏ)/2
        assert!(hat.sub(&comb).unwrap().norm() < 1e-15);
    }

    #[test]
    fn single_coordinate_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = AlgebraShape::matrix(2);
        let a = AlgebraElement::random_gaussian(&shape, &mut rng);
        let mut entries = vec![AlgebraElement::zero(&shape); 5];
        entries[0] = a.clone();
        let hat = ncdft(&V::new(shape, entries).unwrap());
        let expected = a.scale_real(1.0 / 5f64.sqrt());
        for e in hat.entries() {
            assert!(e.sub(&expected).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn ncdft_equals_fourier_frame_analysis() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let shape = AlgebraShape::new(vec![1, 2]).unwrap();
        let x = V::random_gaussian(&shape, 5, &mut rng);
        let via_frame = ModularFrame::fourier(&shape, 5).analysis(&x).unwrap();
        let hat = ncdft(&x);
        for (a, b) in via_frame.coeffs.iter().zip(hat.entries()) {
            assert!(a.sub(b).unwrap().norm() < 1e-13);
        }
        assert!(inverse_ncdft(&hat).sub(&x).unwrap().norm() < 1e-13);
    }

    #[test]
    fn minor_examples() {
        let p3 = PrimeDim::new(3).unwrap();
        for r in 0..3 {
            for col in 0..3 {
                assert!(chebotarev_minor_nonsingular(p3, &[r], &[col]).unwrap());
            }
        }
        assert!(chebotarev_minor_nonsingular(p3, &[0, 1, 2], &[0, 1, 2]).unwrap());
        assert!(chebotarev_minor_nonsingular(p3, &[0, 1], &[0, 1]).unwrap());
        // det of [[1,1],[1,ω]]/3 is (ω − 1)/3
        let omega = cis(-2.0 * std::f64::consts::PI / 3.0);
        assert!(((omega - c(1.0)) / 3.0).norm() > 0.5);
        assert!(chebotarev_minor_nonsingular(p3, &[0], &[0, 1]).is_err());
        assert!(chebotarev_minor_nonsingular(p3, &[0, 3], &[0, 1]).is_err());
        assert!(chebotarev_minor_nonsingular(p3, &[0, 0], &[0, 1]).is_err());
    }

    #[test]
    fn composite_minors_can_vanish() {
        // the 4-point comb makes W[{1,3},{0,2}] vanish
        assert!(dft_submatrix_rank_deficient(4, &[1, 3], &[0, 2]).unwrap());
    }

    #[test]
    fn tao_small_primes() {
        for (p, expected) in [(2, 3), (3, 4), (5, 6), (7, 8)] {
            let r = tao_min_sum(PrimeDim::new(p).unwrap(), &TaoOptions::default()).unwrap();
            assert_eq!(r.min_sum, expected);
            assert!(r.holds());
            let minors: u64 = (1..p as u64).map(|k| binomial(p as u64, k).pow(2)).sum();
            assert_eq!(r.pairs_checked, minors);
            assert_eq!(r.witness.sum(), p + 1);
        }
    }

    #[test]
    fn tao_mode_limits() {
        let p11 = PrimeDim::new(11).unwrap();
        assert!(tao_min_sum(p11, &TaoOptions::default()).is_err());
        let p17 = PrimeDim::new(17).unwrap();
        let sampled = TaoOptions {
            mode: TaoMode::Sampled,
            samples: 10,
            ..TaoOptions::default()
        };
        assert!(tao_min_sum(p17, &sampled).is_err());
        let r = tao_min_sum(p11, &sampled).unwrap();
        assert_eq!(r.pairs_checked, 10);
        assert_eq!(r.min_sum, 12);
    }

    #[test]
    fn smallest_pair_search_finds_composite_combs() {
        // not prime, but the fallback search is dimension-agnostic
        let w = dft_matrix::<f64>(4);
        let (sum, pair) = smallest_feasible_pair(&w, 4);
        assert_eq!(sum, 4);
        assert_eq!(pair.sum(), 4);
    }

    #[test]
    fn conjecture_audit_matrix_algebra_p3() {
        let r = conjecture_audit::<f64>(&AlgebraShape::matrix(2), PrimeDim::new(3).unwrap(), 200, 1).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert_eq!(r.delta_sum, 4);
        assert_eq!(r.min_observed_sum, 4);
        let s = r.structured.unwrap();
        assert!(s.feasible_pairs.is_empty() && s.oracle_disagreements.is_empty());
        assert_eq!(s.min_sum, 4);
    }

    #[test]
    fn conjecture_audit_scalar_p5() {
        let r = conjecture_audit::<f64>(&AlgebraShape::complex(), PrimeDim::new(5).unwrap(), 1000, 2).unwrap();
        assert!(r.holds());
        assert!(r.min_observed_sum >= 6);
        assert!(!r.implementation_defect());
    }

    #[test]
    fn conjecture_audit_skips_structured_above_five() {
        let r = conjecture_audit::<f64>(&AlgebraShape::diagonal(2), PrimeDim::new(7).unwrap(), 50, 3).unwrap();
        assert!(r.structured.is_none());
        assert!(r.holds());
    }

    fn comb(d: usize, step: usize) -> V {
        V::from_complex(
            &(0..d)
                .map(|j| if j % step == 0 { c(1.0) } else { c(0.0) })
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn donoho_stark_combs() {
        for d in [4, 9, 16] {
            let step = (d as f64).sqrt() as usize;
            let x = comb(d, step);
            assert_eq!(support_size(&x) * support_size(&ncdft(&x)), d);
        }
        // d = 6 and 8: combs with any spacing dividing d are extremal too
        for (d, step) in [(6, 2), (6, 3), (8, 2), (8, 4)] {
            let x = comb(d, step);
            assert_eq!(support_size(&x) * support_size(&ncdft(&x)), d);
        }
    }

    proptest! {
        #[test]
        fn plancherel(shape in prop::sample::select(vec![AlgebraShape::complex(), AlgebraShape::matrix(2), AlgebraShape::new(vec![1, 2]).unwrap()]),
                      p in prop::sample::select(vec![2usize, 3, 4, 5, 6, 7]), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = V::random_gaussian(&shape, p, &mut rng);
            prop_assert!((ncdft(&x).norm() - x.norm()).abs() <= 1e-10 * (1.0 + x.norm()));
        }

        #[test]
        fn donoho_stark_product(d in prop::sample::select(vec![4usize, 6, 8, 9]), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.random_range(1..=d);
            let support = rand::seq::index::sample(&mut rng, d, k).into_vec();
            let x = random_sparse_vector::<f64, _>(&AlgebraShape::complex(), d, &support, &mut rng);
            prop_assert!(support_size(&x) * support_size(&ncdft(&x)) >= d);
        }

        #[test]
        fn shift_preserves_both_supports(d in 2usize..10, shift in 0usize..10, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.random_range(1..=d);
            let support = rand::seq::index::sample(&mut rng, d, k).into_vec();
            let x = random_sparse_vector::<f64, _>(&AlgebraShape::complex(), d, &support, &mut rng);
            let shifted = V::new(x.shape().clone(), (0..d).map(|j| x.entry((j + d - shift % d) % d).clone()).collect()).unwrap();
            let (a, b) = (ncdft(&x), ncdft(&shifted));
            prop_assert_eq!(support_size(&x), support_size(&shifted));
            prop_assert_eq!(support_size(&a), support_size(&b));
            // only phases change: |x̂ₖ| is shift invariant
            for (u, v) in a.entries().iter().zip(b.entries()) {
                prop_assert!((u.norm() - v.norm()).abs() < 1e-12);
            }
        }
    }
}
