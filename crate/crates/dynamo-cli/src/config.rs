//! Profile files: the on-disk description of an alpha-profile
//! `alpha(r) = alpha0 + epsilon_scale * phi(r)`.

use dynamo_core::{FourierSpectrum, Harmonic, ProfileShape, SampledProfile};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn default_epsilon() -> f64 {
    1.0
}

/// One harmonic of the perturbation: `a cos(2 pi k r) + b sin(2 pi k r)`.
/// Coefficients default to zero so pure-cosine or pure-sine entries stay
/// short.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicEntry {
    pub k: u32,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

/// Sampled perturbation: values of `phi` on a uniform grid over `[0, 1]`,
/// both endpoints included, at least four points.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesEntry {
    pub values: Vec<f64>,
}

/// A profile file.  The perturbation `phi` is either harmonic —
/// `mean + sum_k [a_k cos(2 pi k r) + b_k sin(2 pi k r)]`, stored internally
/// with the cosine DC coefficient `a0 = 2 * mean` — or a sampled table;
/// setting both is rejected, setting neither means a constant profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    /// Constant part of the profile.  Commands that scan or pin `alpha0`
    /// themselves (sweep grids, crossing nodes) ignore this field.
    #[serde(default)]
    pub alpha0: f64,
    /// Amplitude multiplying the whole perturbation shape.
    #[serde(default = "default_epsilon")]
    pub epsilon_scale: f64,
    /// Mean of the harmonic perturbation part.
    #[serde(default)]
    pub mean: f64,
    #[serde(default)]
    pub harmonics: Vec<HarmonicEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SamplesEntry>,
}

impl ProfileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read profile {}: {e}", path.display()))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| format!("invalid profile {}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, value) in [
            ("alpha0", self.alpha0),
            ("epsilon_scale", self.epsilon_scale),
            ("mean", self.mean),
        ] {
            if !value.is_finite() {
                return Err(format!("profile field {name} must be finite, got {value}"));
            }
        }
        for h in &self.harmonics {
            if !h.a.is_finite() || !h.b.is_finite() {
                return Err(format!("harmonic k={} has non-finite coefficients", h.k));
            }
        }
        if self.samples.is_some() {
            if !self.harmonics.is_empty() {
                return Err(
                    "profile sets both harmonics and samples; use exactly one".to_string(),
                );
            }
            if self.mean != 0.0 {
                return Err(
                    "mean applies to harmonic profiles; fold it into the sample values"
                        .to_string(),
                );
            }
        }
        // Harmonic index and sample-count rules are enforced by the shape
        // constructors in `shape`.
        Ok(())
    }

    /// The perturbation shape `phi`, with constructor-level validation
    /// (harmonic indices distinct and nonzero, enough finite samples).
    pub fn shape(&self) -> Result<ProfileShape, String> {
        match &self.samples {
            Some(samples) => Ok(ProfileShape::Samples(
                SampledProfile::new(samples.values.clone()).map_err(|e| e.to_string())?,
            )),
            None => {
                let harmonics = self
                    .harmonics
                    .iter()
                    .map(|h| Harmonic {
                        k: h.k,
                        a: h.a,
                        b: h.b,
                    })
                    .collect();
                Ok(ProfileShape::Fourier(
                    FourierSpectrum::new(2.0 * self.mean, harmonics)
                        .map_err(|e| e.to_string())?,
                ))
            }
        }
    }
}
