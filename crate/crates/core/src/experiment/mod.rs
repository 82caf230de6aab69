//! Config-driven runs: rasterize, assemble, solve, decompose, check, report.

mod config;
mod presets;
mod run;
pub mod svg;

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub use config::{BcSelection, Check, ExperimentConfig};
pub use presets::{preset, preset_json, PRESET_NAMES};
pub use run::{
    compare_bc, execute, random_bumps, random_set, run, write_outputs, BcSection, CheckVerdict,
    CompareBc, CompareRow, RunArtifacts, RunOutcome, RunReport, TauCounts,
};
