use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use covariant_lab::su11::DiskGeometry;
use covariant_lab::{PlanckParams, RealGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Tolerance keys accepted by `--tolerance KEY=VAL`, with defaults.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("annihilation", 1e-4),
    ("cauchy_riemann", 1e-4),
    ("holomorphy", 1e-4),
    ("gap", 1e-6),
    ("inequality", 1e-9),
    ("residual", 1e-4),
    ("covariance", 1e-6),
    ("unitarity", 1e-10),
    ("representation", 1e-8),
    ("commutator", 1e-7),
    ("closure", 1e-10),
    ("mode_map", 1e-8),
    ("negative_modes", 1e-12),
    ("control", 0.1),
];

/// Radius (in plane units) of the disc used for the weighted-image residual.
pub const WEIGHTED_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub hbar: f64,
    pub c: f64,
    /// Points per axis of the plane grid.
    pub grid_n: usize,
    pub domain_half_width: f64,
    pub rho_max: f64,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub output_path: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 2.0 * PI,
            grid_n: 257,
            domain_half_width: 4.0,
            rho_max: 0.95,
            tolerance_overrides: BTreeMap::new(),
            output_path: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !self.hbar.is_finite() || self.hbar == 0.0 {
            return Err(CliError::Usage(format!("--hbar must be finite and nonzero, got {}", self.hbar)));
        }
        if !self.c.is_finite() || self.c <= 0.0 {
            return Err(CliError::Usage(format!("--c must be positive, got {}", self.c)));
        }
        if self.grid_n < 64 {
            return Err(CliError::Usage(format!("--grid-n must be at least 64, got {}", self.grid_n)));
        }
        if !(self.domain_half_width.is_finite() && self.domain_half_width > 0.0) {
            return Err(CliError::Usage(format!("--half-width must be positive, got {}", self.domain_half_width)));
        }
        if !(self.rho_max > 0.0 && self.rho_max < 1.0) {
            return Err(CliError::Usage(format!("--rho-max must lie in (0, 1), got {}", self.rho_max)));
        }
        for (key, value) in &self.tolerance_overrides {
            if !DEFAULT_TOLERANCES.iter().any(|(k, _)| k == key) {
                return Err(CliError::Usage(format!("unknown tolerance key `{key}`")));
            }
            if !(value.is_finite() && *value > 0.0) {
                return Err(CliError::Usage(format!("tolerance `{key}` must be positive, got {value}")));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        if let Some(v) = self.tolerance_overrides.get(key) {
            return *v;
        }
        DEFAULT_TOLERANCES
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("tolerance key `{key}` has no default"))
    }

    pub fn params(&self) -> CliResult<PlanckParams> {
        Ok(PlanckParams::new(self.hbar, self.c)?)
    }

    pub fn plane_grid(&self) -> CliResult<RealGrid> {
        Ok(RealGrid::symmetric(self.domain_half_width, self.grid_n)?)
    }

    pub fn disk_geometry(&self) -> CliResult<Arc<DiskGeometry>> {
        Ok(Arc::new(DiskGeometry::with_rho_max(self.rho_max)?))
    }

    /// Whether the weighted image `e^{π|z|²/2} ṽ` is the holomorphic form.
    pub fn is_standard_scaling(&self) -> bool {
        self.hbar == 1.0 && (self.c - 2.0 * PI).abs() < 1e-12
    }
}

/// Parses `KEY=VAL`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VAL, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}
