use std::fmt::Display;
use std::path::Path;

use ncup_core::frames::{FrameFile, LoadedFrame, DEFAULT_PARSEVAL_TOL};
use ncup_core::{AlgebraShape, Error, ModularFrame, ModuleVector};
use serde::Deserialize;

use crate::report::FrameSummary;

/// A failed run: exit code plus the message printed to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    /// Wraps a core error raised while handling `location`.
    pub fn core(location: impl Display, e: Error) -> Self {
        let code = if matches!(e, Error::Environment(_)) { 1 } else { 2 };
        Self {
            code,
            message: format!("{location}: {e}"),
        }
    }
}

pub fn read_file(flag: &str, path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{flag} {}: cannot read file: {e}", path.display())))
}

pub fn load_vector(path: &Path) -> Result<ModuleVector, Failure> {
    let text = read_file("--vector", path)?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("--vector {}: {e}", path.display())))
}

// Output of `ncup parsevalize`, accepted wherever a frame file is.
#[derive(Deserialize)]
struct ParsevalizeReport {
    result: ParsevalizeFrame,
}

#[derive(Deserialize)]
struct ParsevalizeFrame {
    frame: FrameFile<f64>,
}

fn parse_frame_file(flag: &str, path: &Path) -> Result<FrameFile<f64>, Failure> {
    let text = read_file(flag, path)?;
    match serde_json::from_str::<FrameFile<f64>>(&text) {
        Ok(f) => Ok(f),
        Err(e) => match serde_json::from_str::<ParsevalizeReport>(&text) {
            Ok(r) => Ok(r.result.frame),
            Err(_) => Err(Failure::input(format!("{flag} {}: {e}", path.display()))),
        },
    }
}

/// Loads `arg`, which is a frame file or one of the built-ins `standard` and
/// `fourier`; built-ins take their algebra and rank from `layout`.
pub fn load_frame(
    flag: &str,
    arg: &str,
    layout: Option<(&AlgebraShape, usize)>,
) -> Result<(LoadedFrame<f64>, FrameSummary), Failure> {
    let builtin = match arg {
        "standard" => Some(ModularFrame::standard as fn(&AlgebraShape, usize) -> ModularFrame),
        "fourier" => Some(ModularFrame::fourier as fn(&AlgebraShape, usize) -> ModularFrame),
        _ => None,
    };
    let file = match builtin {
        Some(make) => {
            let (shape, d) = layout
                .ok_or_else(|| Failure::input(format!("{flag} {arg}: built-in frames need --algebra and --d")))?;
            if d == 0 {
                return Err(Failure::input(format!("{flag} {arg}: --d must be at least 1")));
            }
            FrameFile::from_frame(&make(shape, d))
        }
        None => parse_frame_file(flag, Path::new(arg))?,
    };
    let loaded = file.load().map_err(|e| Failure::core(format!("{flag} {arg}"), e))?;
    let summary = FrameSummary {
        source: arg.to_string(),
        len: loaded.frame.len(),
        claimed_parseval: loaded.claimed_parseval,
        verified_parseval: loaded.verified_parseval,
        parseval_deviation: loaded.frame.parseval_deviation(),
    };
    Ok((loaded, summary))
}

pub fn require_parseval(flag: &str, frame: &LoadedFrame<f64>, summary: &FrameSummary) -> Result<(), Failure> {
    if frame.verified_parseval {
        return Ok(());
    }
    let claim = if frame.claimed_parseval {
        " although the file declares \"parseval\": true"
    } else {
        ""
    };
    Err(Failure::input(format!(
        "{flag} {}: frame is not Parseval (||S - I|| = {:e} exceeds {DEFAULT_PARSEVAL_TOL:e}){claim}; run `ncup parsevalize` first",
        summary.source, summary.parseval_deviation
    )))
}

pub fn require_layout(
    flag: &str,
    source: &str,
    frame: &ModularFrame,
    other: &str,
    shape: &AlgebraShape,
    d: usize,
) -> Result<(), Failure> {
    if frame.shape() != shape || frame.dim() != d {
        return Err(Failure::input(format!(
            "{flag} {source}: frame lives in {}^{}, but {other} lives in {shape}^{d}",
            frame.shape(),
            frame.dim()
        )));
    }
    Ok(())
}
