use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::domains::{koch_min_resolution, DomainSpec, ShapeSpec};
use crate::error::{Error, Result};
use crate::nodal::{DEFAULT_REL_GAP, TAU_SWEEP};
use crate::rearrange::DEFAULT_FK_SLACK;
use crate::sparse::BoundaryCondition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcSelection {
    Dirichlet,
    Neumann,
    Both,
}

impl BcSelection {
    pub fn conditions(self) -> Vec<BoundaryCondition> {
        match self {
            BcSelection::Dirichlet => vec![BoundaryCondition::Dirichlet],
            BcSelection::Neumann => vec![BoundaryCondition::Neumann],
            BcSelection::Both => vec![BoundaryCondition::Dirichlet, BoundaryCondition::Neumann],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Courant,
    Pleijel,
    Weyl,
    FaberKrahn,
    PolyaSzego,
    Green,
    Certificate,
    Isoperimetric,
    Coarea,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Courant,
        Check::Pleijel,
        Check::Weyl,
        Check::FaberKrahn,
        Check::PolyaSzego,
        Check::Green,
        Check::Certificate,
        Check::Isoperimetric,
        Check::Coarea,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Courant => "courant",
            Check::Pleijel => "pleijel",
            Check::Weyl => "weyl",
            Check::FaberKrahn => "faber_krahn",
            Check::PolyaSzego => "polya_szego",
            Check::Green => "green",
            Check::Certificate => "certificate",
            Check::Isoperimetric => "isoperimetric",
            Check::Coarea => "coarea",
        }
    }

    pub fn parse(name: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| {
                let known: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                Error::Config(format!("unknown check \"{name}\" (known: {})", known.join(", ")))
            })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_bc() -> BcSelection {
    BcSelection::Both
}
fn default_tol() -> f64 {
    1e-8
}
fn default_taus() -> Vec<f64> {
    TAU_SWEEP.to_vec()
}
fn default_checks() -> Vec<String> {
    Check::ALL.iter().map(|c| c.name().to_string()).collect()
}
fn default_rel_gap() -> f64 {
    DEFAULT_REL_GAP
}
fn default_fk_slack() -> f64 {
    DEFAULT_FK_SLACK
}
fn default_bumps() -> usize {
    20
}
fn default_coarea() -> usize {
    100
}
fn default_green_k() -> usize {
    30
}
fn default_labels() -> usize {
    6
}
fn yes() -> bool {
    true
}

/// One experiment, read from a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    #[serde(default = "default_bc")]
    pub bc: BcSelection,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(default = "default_tol")]
    pub tol_eig: f64,
    /// Nodal thresholds; the first drives the per-k series, all feed Courant.
    #[serde(default = "default_taus")]
    pub tau_nodal: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_rel_gap")]
    pub rel_gap: f64,
    #[serde(default = "default_fk_slack")]
    pub fk_slack: f64,
    #[serde(default = "default_bumps")]
    pub polya_szego_trials: usize,
    #[serde(default = "default_coarea")]
    pub coarea_trials: usize,
    /// Eigenpairs inspected by the nodal Rayleigh check.
    #[serde(default = "default_green_k")]
    pub green_max_k: usize,
    #[serde(default)]
    pub write_eigenvectors: bool,
    /// Label images written per boundary condition (k = 1, 2, ...).
    #[serde(default = "default_labels")]
    pub label_images: usize,
    #[serde(default = "yes")]
    pub plots: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parsed check list, in canonical order without duplicates.
    pub fn parsed_checks(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for name in &self.checks {
            out.push(Check::parse(name)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Everything that can be rejected without computing.
    pub fn validate(&self) -> Result<()> {
        let checks = self.parsed_checks()?;
        if self.k == 0 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        if !(1e-12..=1e-4).contains(&self.tol_eig) {
            return Err(Error::Config(format!("tol_eig must lie in [1e-12, 1e-4], got {}", self.tol_eig)));
        }
        if self.tau_nodal.is_empty() || self.tau_nodal.iter().any(|t| !(0.0..=0.05).contains(t)) {
            return Err(Error::Config("tau_nodal must be a nonempty list within [0, 0.05]".into()));
        }
        if !(self.rel_gap > 0.0 && self.rel_gap < 1.0) {
            return Err(Error::Config(format!("rel_gap must lie in (0, 1), got {}", self.rel_gap)));
        }
        if !(self.fk_slack > -1.0 && self.fk_slack < 1.0) {
            return Err(Error::Config(format!("fk_slack must lie in (-1, 1), got {}", self.fk_slack)));
        }
        if checks.contains(&Check::Pleijel) && self.k < 20 {
            return Err(Error::Config(format!("pleijel needs K >= 20, got {}", self.k)));
        }
        if checks.contains(&Check::Weyl) && self.k < 50 {
            return Err(Error::Config(format!("weyl needs K >= 50, got {}", self.k)));
        }
        if let ShapeSpec::Koch { level } = self.domain.shape {
            let min_resolution = koch_min_resolution(level);
            if self.domain.resolution <= min_resolution {
                return Err(Error::ResolutionTooCoarse {
                    level,
                    resolution: self.domain.resolution,
                    min_resolution,
                });
            }
        }
        if matches!(self.domain.shape, ShapeSpec::Custom) {
            return Err(Error::Config("custom shapes cannot be built from a config".into()));
        }
        if !(self.domain.resolution > 0.0 && self.domain.resolution.is_finite()) {
            return Err(Error::Config(format!("resolution must be positive, got {}", self.domain.resolution)));
        }
        Ok(())
    }

    pub fn primary_tau(&self) -> f64 {
        self.tau_nodal[0]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
