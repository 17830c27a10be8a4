use ncup_core::algebra::DEFAULT_POSITIVITY_TOL;
use ncup_core::csmodule::DEFAULT_INV_SQRT_TOL;
use ncup_core::frames::{FrameFile, DEFAULT_PARSEVAL_TOL};
use ncup_core::ncft::MINOR_REL_TOL;
use ncup_core::uncertainty::{ProofStep, KERNEL_REL_TOL, VERDICT_SLACK, ZERO_VECTOR_NORM};
use ncup_core::{AlgebraShape, UncertaintyCertificate};
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "ncup";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A check that a proven statement guarantees failed.
    ImplementationDefect,
    /// The open algebra-valued support bound failed with no defect in sight.
    ConjectureCounterexample,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub parseval_tol: f64,
    pub verdict_slack: f64,
    pub zero_vector_norm: f64,
    pub kernel_rel_tol: f64,
    pub minor_rel_tol: f64,
    pub positivity_tol: f64,
    pub inv_sqrt_tol: f64,
}

impl Tolerances {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            parseval_tol: DEFAULT_PARSEVAL_TOL,
            verdict_slack: VERDICT_SLACK,
            zero_vector_norm: ZERO_VECTOR_NORM,
            kernel_rel_tol: KERNEL_REL_TOL,
            minor_rel_tol: MINOR_REL_TOL,
            positivity_tol: DEFAULT_POSITIVITY_TOL,
            inv_sqrt_tol: DEFAULT_INV_SQRT_TOL,
        }
    }
}

/// Envelope shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: Status,
    pub tolerances: Tolerances,
    pub result: R,
}

impl<R> Report<R> {
    pub fn new(command: &str, status: Status, tolerances: Tolerances, result: R) -> Self {
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            status,
            tolerances,
            result,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSummary {
    pub source: String,
    pub len: usize,
    pub claimed_parseval: bool,
    pub verified_parseval: bool,
    pub parseval_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyResult {
    pub algebra: AlgebraShape,
    pub d: usize,
    pub frame_tau: FrameSummary,
    pub frame_omega: FrameSummary,
    pub certificate: UncertaintyCertificate,
    pub proof_chain: Vec<ProofStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceResult {
    pub algebra: AlgebraShape,
    pub d: usize,
    pub frame_tau: FrameSummary,
    pub frame_omega: FrameSummary,
    pub mu: f64,
    /// `1/mu²`
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalizeResult {
    pub input: FrameSummary,
    pub output_deviation: f64,
    /// Largest vector change when Parseval-izing the output again.
    pub idempotence_defect: f64,
    pub frame: FrameFile<f64>,
}

/// Last line of an audit run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub algebra: AlgebraShape,
    pub d: usize,
    pub n_tau: usize,
    pub n_omega: usize,
    pub trials: usize,
    pub seed: u64,
    pub violations: usize,
    pub chain_violations: usize,
    pub min_slack: f64,
    pub tightest_trial: usize,
}
