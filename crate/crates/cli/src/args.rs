use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncup_core::frames::DEFAULT_SPARSITY_REL_TOL;
use ncup_core::ncft::{PrimeDim, TaoMode, DEFAULT_SAMPLES};
use ncup_core::AlgebraShape;

#[derive(Parser, Debug)]
#[command(
    name = "ncup",
    version,
    about = "Uncertainty certificates for frames over finite-dimensional C*-algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify the uncertainty inequality for one vector and two Parseval frames.
    Certify(CertifyArgs),
    /// Coherence between two frames.
    Coherence(CoherenceArgs),
    /// Replace a frame by its canonical Parseval frame.
    Parsevalize(ParsevalizeArgs),
    /// Randomized audit of the inequality and its proof chain (JSON lines).
    Audit(AuditArgs),
    /// Minimum of |supp h| + |supp ĥ| over nonzero h in C^p.
    Tao(TaoArgs),
    /// Search for algebra-valued vectors violating |supp x| + |supp x̂| >= p + 1.
    Conjecture(ConjectureArgs),
    /// Write a built-in or random frame file.
    Frame(FrameArgs),
    /// Write a built-in or random vector file.
    Vector(VectorArgs),
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Layout {
    /// Algebra as a list of block sizes: `C`, `C+C`, `M2`, `C+M2`, `1,2` or `[1,2]`.
    #[arg(long, value_parser = parse_algebra)]
    pub algebra: Option<AlgebraShape>,
    /// Module rank d.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Frame file, or `standard` / `fourier`.
    #[arg(long)]
    pub frame_tau: String,
    /// Frame file, or `standard` / `fourier`.
    #[arg(long)]
    pub frame_omega: String,
    /// Vector file.
    #[arg(long)]
    pub vector: PathBuf,
    /// Coefficients below rel_tol times the largest one count as zero.
    #[arg(long, default_value_t = DEFAULT_SPARSITY_REL_TOL, value_parser = parse_rel_tol)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct CoherenceArgs {
    #[arg(long)]
    pub frame_tau: String,
    #[arg(long)]
    pub frame_omega: String,
    /// Needed only for built-in frames.
    #[command(flatten)]
    pub layout: Layout,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ParsevalizeArgs {
    /// Frame file to Parseval-ize.
    #[arg(long, alias = "frame")]
    pub frame_tau: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long, value_parser = parse_algebra, default_value = "C")]
    pub algebra: AlgebraShape,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Vectors per tau frame (default d + 1).
    #[arg(long)]
    pub n_tau: Option<usize>,
    /// Vectors per omega frame (default d + 1).
    #[arg(long)]
    pub n_omega: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SPARSITY_REL_TOL, value_parser = parse_rel_tol)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct TaoArgs {
    #[arg(long, value_parser = parse_prime)]
    pub p: PrimeDim,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Square minors drawn in sampled mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow exhaustive mode beyond p = 7.
    #[arg(long)]
    pub long_running: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    #[arg(long, value_parser = parse_algebra, default_value = "C+C")]
    pub algebra: AlgebraShape,
    #[arg(long, value_parser = parse_prime)]
    pub p: PrimeDim,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct FrameArgs {
    #[arg(long, value_enum)]
    pub kind: FrameKind,
    #[arg(long, value_parser = parse_algebra, default_value = "C")]
    pub algebra: AlgebraShape,
    #[arg(long)]
    pub d: usize,
    /// Number of vectors of a random frame (default d).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VectorArgs {
    #[arg(long, value_enum)]
    pub kind: VectorKindArg,
    #[arg(long, value_parser = parse_algebra, default_value = "C")]
    pub algebra: AlgebraShape,
    #[arg(long)]
    pub d: usize,
    /// Comb spacing (default round(sqrt d)).
    #[arg(long)]
    pub step: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

impl From<ModeArg> for TaoMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => TaoMode::Exhaustive,
            ModeArg::Sampled => TaoMode::Sampled,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FrameKind {
    Standard,
    Fourier,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VectorKindArg {
    /// `1_A` at every step-th coordinate.
    Comb,
    /// `1_A` at coordinate 0.
    Delta,
    /// Gaussian entries.
    Random,
}

fn parse_algebra(s: &str) -> Result<AlgebraShape, String> {
    AlgebraShape::parse(s).map_err(|e| e.to_string())
}

fn parse_prime(s: &str) -> Result<PrimeDim, String> {
    let p: usize = s.parse().map_err(|e| format!("{e}"))?;
    PrimeDim::new(p).map_err(|e| e.to_string())
}

fn parse_rel_tol(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}
