use std::fmt::Write as _;

use ncup_core::frames::{FrameFile, DEFAULT_PARSEVAL_TOL, DEFAULT_SPARSITY_REL_TOL};
use ncup_core::ncft::{conjecture_audit, tao_min_sum, TaoOptions};
use ncup_core::seed::task_rng;
use ncup_core::uncertainty::{certify, proof_chain_check, random_audit, VERDICT_SLACK};
use ncup_core::{AlgebraElement, ModularFrame, ModuleVector};
use serde::Serialize;

use crate::args::*;
use crate::input::{load_frame, load_vector, require_layout, require_parseval, Failure};
use crate::report::*;

/// Rendered output and the status it carries.
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

fn pretty<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn single<R: Serialize>(command: &str, status: Status, rel_tol: f64, result: R) -> Outcome {
    Outcome {
        text: pretty(&Report::new(command, status, Tolerances::with_rel_tol(rel_tol), result)),
        status,
    }
}

pub fn certify_cmd(args: &CertifyArgs) -> Result<Outcome, Failure> {
    let x = load_vector(&args.vector)?;
    let (shape, d) = (x.shape().clone(), x.len());
    let vector = format!("--vector {}", args.vector.display());
    let (f, fs) = load_frame("--frame-tau", &args.frame_tau, Some((&shape, d)))?;
    let (g, gs) = load_frame("--frame-omega", &args.frame_omega, Some((&shape, d)))?;
    require_layout("--frame-tau", &fs.source, &f.frame, &vector, &shape, d)?;
    require_layout("--frame-omega", &gs.source, &g.frame, &vector, &shape, d)?;
    require_parseval("--frame-tau", &f, &fs)?;
    require_parseval("--frame-omega", &g, &gs)?;

    let certificate = certify(&f.frame, &g.frame, &x, args.rel_tol).map_err(|e| Failure::core(&vector, e))?;
    let proof_chain = proof_chain_check(&f.frame, &g.frame, &x, args.rel_tol).map_err(|e| Failure::core(&vector, e))?;
    let status = if certificate.holds() && proof_chain.iter().all(|s| s.holds) {
        Status::Ok
    } else {
        Status::ImplementationDefect
    };
    let result = CertifyResult {
        algebra: shape,
        d,
        frame_tau: fs,
        frame_omega: gs,
        certificate,
        proof_chain,
    };
    Ok(single("certify", status, args.rel_tol, result))
}

pub fn coherence_cmd(args: &CoherenceArgs) -> Result<Outcome, Failure> {
    let layout = match (&args.layout.algebra, args.layout.d) {
        (Some(a), Some(d)) => Some((a, d)),
        _ => None,
    };
    let (f, fs) = load_frame("--frame-tau", &args.frame_tau, layout)?;
    let (g, gs) = load_frame("--frame-omega", &args.frame_omega, layout)?;
    let (shape, d) = (f.frame.shape().clone(), f.frame.dim());
    require_layout(
        "--frame-omega",
        &gs.source,
        &g.frame,
        &format!("--frame-tau {}", fs.source),
        &shape,
        d,
    )?;
    let mu = f
        .frame
        .coherence(&g.frame)
        .map_err(|e| Failure::core("--frame-omega", e))?;
    // Parseval vectors have norm at most 1, and so do their inner products.
    let status = if fs.verified_parseval && gs.verified_parseval && mu > 1.0 + VERDICT_SLACK {
        Status::ImplementationDefect
    } else {
        Status::Ok
    };
    let result = CoherenceResult {
        algebra: shape,
        d,
        frame_tau: fs,
        frame_omega: gs,
        mu,
        bound: 1.0 / (mu * mu),
    };
    Ok(single("coherence", status, DEFAULT_SPARSITY_REL_TOL, result))
}

pub fn parsevalize_cmd(args: &ParsevalizeArgs) -> Result<Outcome, Failure> {
    let arg = args.frame_tau.to_string_lossy().into_owned();
    let (f, fs) = load_frame("--frame-tau", &arg, None)?;
    let p = f
        .frame
        .parsevalize()
        .map_err(|e| Failure::core(format!("--frame-tau {arg}"), e))?;
    let output_deviation = p.parseval_deviation();
    let again = p.parsevalize().map_err(|e| Failure::core("parsevalized frame", e))?;
    let idempotence_defect = again
        .vectors()
        .iter()
        .zip(p.vectors())
        .map(|(a, b)| a.sub(b).expect("same module").norm())
        .fold(0.0, f64::max);
    let status = if output_deviation <= DEFAULT_PARSEVAL_TOL && idempotence_defect <= DEFAULT_PARSEVAL_TOL {
        Status::Ok
    } else {
        Status::ImplementationDefect
    };
    let result = ParsevalizeResult {
        input: fs,
        output_deviation,
        idempotence_defect,
        frame: FrameFile::from_frame(&p),
    };
    Ok(single("parsevalize", status, DEFAULT_SPARSITY_REL_TOL, result))
}

pub fn audit_cmd(args: &AuditArgs) -> Result<Outcome, Failure> {
    let n_tau = args.n_tau.unwrap_or(args.d + 1);
    let n_omega = args.n_omega.unwrap_or(args.d + 1);
    let report = random_audit(
        &args.algebra,
        args.d,
        n_tau,
        n_omega,
        args.trials,
        args.seed,
        args.rel_tol,
    )
    .map_err(|e| Failure::core("audit", e))?;
    let status = if report.clean() {
        Status::Ok
    } else {
        Status::ImplementationDefect
    };
    let mut text = String::new();
    for record in &report.records {
        writeln!(text, "{}", serde_json::to_string(record).expect("records serialize")).unwrap();
    }
    let summary = AuditSummary {
        algebra: report.algebra.clone(),
        d: report.d,
        n_tau,
        n_omega,
        trials: report.trials,
        seed: report.seed,
        violations: report.violations,
        chain_violations: report.chain_violations,
        min_slack: report.min_slack,
        tightest_trial: report.tightest_trial,
    };
    let summary = Report::new("audit", status, Tolerances::with_rel_tol(args.rel_tol), summary);
    writeln!(text, "{}", serde_json::to_string(&summary).expect("reports serialize")).unwrap();
    Ok(Outcome { text, status })
}

pub fn tao_cmd(args: &TaoArgs) -> Result<Outcome, Failure> {
    let options = TaoOptions {
        mode: args.mode.into(),
        samples: args.samples,
        seed: args.seed,
        long_running: args.long_running,
    };
    let report = tao_min_sum(args.p, &options).map_err(|e| Failure::core(format!("--p {}", args.p.get()), e))?;
    let status = if report.holds() {
        Status::Ok
    } else {
        Status::ImplementationDefect
    };
    Ok(single("tao", status, DEFAULT_SPARSITY_REL_TOL, report))
}

pub fn conjecture_cmd(args: &ConjectureArgs) -> Result<Outcome, Failure> {
    let report = conjecture_audit::<f64>(&args.algebra, args.p, args.trials, args.seed)
        .map_err(|e| Failure::core(format!("--p {}", args.p.get()), e))?;
    let status = if report.holds() {
        Status::Ok
    } else if report.implementation_defect() {
        Status::ImplementationDefect
    } else {
        Status::ConjectureCounterexample
    };
    Ok(single("conjecture", status, DEFAULT_SPARSITY_REL_TOL, report))
}

pub fn frame_cmd(args: &FrameArgs) -> Result<Outcome, Failure> {
    if args.d == 0 {
        return Err(Failure::input("--d: must be at least 1"));
    }
    let frame = match args.kind {
        FrameKind::Standard => ModularFrame::standard(&args.algebra, args.d),
        FrameKind::Fourier => ModularFrame::fourier(&args.algebra, args.d),
        FrameKind::Random => {
            let n = args.n.unwrap_or(args.d);
            let mut rng = task_rng(args.seed, 0);
            ModularFrame::random_parseval(&args.algebra, args.d, n, &mut rng).map_err(|e| Failure::core("--n", e))?
        }
    };
    Ok(Outcome {
        text: pretty(&FrameFile::from_frame(&frame)),
        status: Status::Ok,
    })
}

pub fn vector_cmd(args: &VectorArgs) -> Result<Outcome, Failure> {
    if args.d == 0 {
        return Err(Failure::input("--d: must be at least 1"));
    }
    let one = AlgebraElement::identity(&args.algebra);
    let zero = AlgebraElement::zero(&args.algebra);
    let x = match args.kind {
        VectorKindArg::Comb => {
            let step = args
                .step
                .unwrap_or_else(|| ((args.d as f64).sqrt().round() as usize).max(1));
            if step == 0 {
                return Err(Failure::input("--step: must be at least 1"));
            }
            let entries = (0..args.d)
                .map(|j| if j % step == 0 { one.clone() } else { zero.clone() })
                .collect();
            ModuleVector::new(args.algebra.clone(), entries).map_err(|e| Failure::core("--algebra", e))?
        }
        VectorKindArg::Delta => ModuleVector::basis(&args.algebra, args.d, 0),
        VectorKindArg::Random => ModuleVector::random_gaussian(&args.algebra, args.d, &mut task_rng(args.seed, 0)),
    };
    Ok(Outcome {
        text: pretty(&x),
        status: Status::Ok,
    })
}
