//! Shared report plumbing: number formatting, file digests, and the solver
//! summary block reused by several subcommands.

use graphvar::{SolveStatus, SolverResult};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::Failure;

/// Formats a float with six significant digits for the human-readable output.
/// JSON reports carry full precision; this is only for the terminal.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// SHA-256 of a file's bytes, as lowercase hex. Reports echo this next to
/// each input path so results can be tied back to the exact data used.
pub fn file_digest(path: &Path) -> io::Result<String> {
    let bytes = fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write as _;
        let _ = write!(hex, "{byte:02x}");
    }
    Ok(hex)
}

/// An input file echoed into a report: path as given plus content digest.
#[derive(Serialize)]
pub struct FileEcho {
    pub path: String,
    pub sha256: String,
}

impl FileEcho {
    pub fn new(path: &Path) -> Result<Self, Failure> {
        let sha256 = file_digest(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(FileEcho {
            path: path.display().to_string(),
            sha256,
        })
    }
}

/// Solver outcome in report form. `status` uses the same lowercase names the
/// library's `Display` impl prints, so logs and JSON agree.
#[derive(Serialize)]
pub struct SolverSummary {
    pub status: String,
    pub objective: f64,
    pub upper_bound: f64,
    pub gap: f64,
    pub nodes_explored: u64,
    pub wall_seconds: f64,
    pub matrix_edges: usize,
}

impl SolverSummary {
    pub fn from_result(result: &SolverResult) -> Self {
        SolverSummary {
            status: result.status.to_string(),
            objective: result.objective,
            upper_bound: result.upper_bound,
            gap: result.gap,
            nodes_explored: result.stats.nodes,
            wall_seconds: result.stats.wall.as_secs_f64(),
            matrix_edges: result.best_matrix.edge_count(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal.to_string()
    }
}

/// Serialises a report as pretty JSON with a trailing newline. All JSON the
/// CLI emits goes through here so byte-for-byte reproducibility only has to
/// be argued once.
pub fn to_json_text<T: Serialize>(report: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Failure::Input(format!("failed to serialise report: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Writes a report to `--output` if given, and to stdout when `json` is set.
/// Returns whether anything was printed to stdout, so callers know whether
/// to print the human-readable form instead.
pub fn emit_json<T: Serialize>(
    report: &T,
    json_to_stdout: bool,
    output: Option<&Path>,
) -> Result<bool, Failure> {
    let text = to_json_text(report)?;
    if let Some(path) = output {
        fs::write(path, &text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if json_to_stdout {
        // Ignore broken pipes so `graphvar ... | head` exits quietly.
        let _ = io::stdout().write_all(text.as_bytes());
    }
    Ok(json_to_stdout)
}
