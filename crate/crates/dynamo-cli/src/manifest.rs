//! Run manifests: every file output is accompanied by a JSON manifest that
//! records the fully resolved computation, so `dynamo rerun` can reproduce
//! the output byte for byte.

use crate::config::ProfileConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const TOOL_NAME: &str = "dynamo";

/// Fixed quadrature policy of the core integrals, recorded for provenance:
/// composite Gauss-Legendre with `points_per_panel` nodes per panel and
/// `max(min_panels, panels_per_mode * max_mode)` panels.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    pub points_per_panel: u32,
    pub min_panels: u32,
    pub panels_per_mode: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            points_per_panel: 12,
            min_panels: 16,
            panels_per_mode: 4,
        }
    }
}

/// A command with every parameter resolved (profile files inlined), the unit
/// of exact reproduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ResolvedCommand {
    Mesh {
        l: u32,
        n_max: u32,
        alpha0_min: f64,
        alpha0_max: f64,
        steps: u32,
    },
    Dps {
        l: u32,
        n_max: u32,
        alpha0_min: f64,
        alpha0_max: f64,
        lambda_min: f64,
        lambda_max: f64,
    },
    Unfold {
        l: u32,
        branch_a: i32,
        branch_b: i32,
        profile: ProfileConfig,
    },
    Sweep {
        l: u32,
        window: u32,
        alpha0_min: f64,
        alpha0_max: f64,
        steps: u32,
        profile: ProfileConfig,
    },
    Critical {
        j_max: u32,
        profile: ProfileConfig,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub quadrature: QuadratureSettings,
    pub command: ResolvedCommand,
}

impl RunManifest {
    pub fn new(command: ResolvedCommand) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            quadrature: QuadratureSettings::default(),
            command,
        }
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read manifest {}: {e}", path.display()))?;
        let manifest: Self = serde_json::from_str(&text)
            .map_err(|e| format!("invalid manifest {}: {e}", path.display()))?;
        if manifest.tool != TOOL_NAME {
            return Err(format!(
                "manifest {} was written by {:?}, not {TOOL_NAME:?}",
                path.display(),
                manifest.tool
            ));
        }
        Ok(manifest)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }
}

/// Manifest file name for an output file: the output path plus
/// `.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}
