//! Perturbation profiles `phi(r)` on `[0, 1]`: Fourier representation,
//! sampled-grid representation with natural cubic-spline evaluation, and
//! the resonance factors `Q_j` that control how strongly a profile couples
//! to a mesh node on parabola `j`.
//!
//! Convention: `a0` is twice the mean of `phi`, so the reconstruction reads
//! `phi(r) = a0/2 + sum_k [a_k cos(2 pi k r) + b_k sin(2 pi k r)]`.

use crate::quadrature::{QuadratureError, QuadratureRule};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Errors from profile construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("harmonic index k must be >= 1")]
    ZeroHarmonic,
    #[error("duplicate harmonic index k={k}")]
    DuplicateHarmonic { k: u32 },
    #[error("sampled profile needs at least 4 values, got {len}")]
    TooFewSamples { len: usize },
    #[error("non-finite sample value at position {index}")]
    NonFiniteSample { index: usize },
}

/// One Fourier harmonic of a perturbation profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    /// Harmonic index `k >= 1` (full periods across `[0, 1]`).
    pub k: u32,
    /// Cosine coefficient `a_k`.
    pub a: f64,
    /// Sine coefficient `b_k`.
    pub b: f64,
}

/// Truncated Fourier representation of a profile.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierSpectrum {
    /// Twice the mean of the profile.
    pub a0: f64,
    pub harmonics: Vec<Harmonic>,
}

impl FourierSpectrum {
    pub fn new(a0: f64, harmonics: Vec<Harmonic>) -> Result<Self, ProfileError> {
        let mut seen = std::collections::HashSet::new();
        for h in &harmonics {
            if h.k == 0 {
                return Err(ProfileError::ZeroHarmonic);
            }
            if !seen.insert(h.k) {
                return Err(ProfileError::DuplicateHarmonic { k: h.k });
            }
        }
        Ok(Self { a0, harmonics })
    }

    /// Spectrum of a constant profile `phi = c` (so `a0 = 2c`).
    pub fn constant(c: f64) -> Self {
        Self {
            a0: 2.0 * c,
            harmonics: Vec::new(),
        }
    }

    /// `phi(r) = a0/2 + sum_k a_k cos(2 pi k r) + b_k sin(2 pi k r)`.
    pub fn eval(&self, r: f64) -> f64 {
        let mut v = 0.5 * self.a0;
        for h in &self.harmonics {
            let w = 2.0 * PI * h.k as f64 * r;
            v += h.a * w.cos() + h.b * w.sin();
        }
        v
    }

    /// Largest harmonic index present (0 for a constant).
    pub fn max_harmonic(&self) -> u32 {
        self.harmonics.iter().map(|h| h.k).max().unwrap_or(0)
    }

    /// The same spectrum with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            a0: c * self.a0,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Harmonic {
                    k: h.k,
                    a: c * h.a,
                    b: c * h.b,
                })
                .collect(),
        }
    }

    fn cosine_coefficient(&self, k: u32) -> f64 {
        self.harmonics
            .iter()
            .find(|h| h.k == k)
            .map_or(0.0, |h| h.a)
    }
}

/// Resonance factor `Q_j` of a spectrum for nonzero parabola index `j`:
/// even `j` picks the cosine coefficient `a_{|j|/2}`; odd `j` mixes all sine
/// coefficients as `(8/pi) sum_k b_k k / (4k^2 - j^2)`.  Symmetric in `j`.
pub fn q_factor(spectrum: &FourierSpectrum, j: i32) -> f64 {
    assert!(j != 0, "resonance factor needs a nonzero parabola index");
    q_factor_full(spectrum, j)
}

/// `q_factor` extended by the mean channel `Q_0 = a0`, which is what the
/// diagonal of the closed-form Galerkin matrix consumes.
pub(crate) fn q_factor_full(spectrum: &FourierSpectrum, j: i32) -> f64 {
    if j == 0 {
        return spectrum.a0;
    }
    if j % 2 == 0 {
        spectrum.cosine_coefficient(j.unsigned_abs() / 2)
    } else {
        let jf = j as f64;
        let sum: f64 = spectrum
            .harmonics
            .iter()
            .map(|h| {
                let kf = h.k as f64;
                h.b * kf / (4.0 * kf * kf - jf * jf)
            })
            .sum();
        8.0 / PI * sum
    }
}

/// Fourier coefficients of `phi` up to harmonic `k_max`, by quadrature:
/// `a0 = 2 int phi`, `a_k = 2 int phi cos(2 pi k r)`, `b_k` likewise with
/// sine.  All `k = 1..k_max` harmonics are stored, including zero ones.
pub fn fourier_coefficients<F: Fn(f64) -> f64>(
    phi: F,
    k_max: u32,
) -> Result<FourierSpectrum, QuadratureError> {
    assert!((1..=64).contains(&k_max), "harmonic cutoff out of range");
    let rule = QuadratureRule::for_modes(2 * k_max as usize);
    let a0 = 2.0 * rule.integrate(&phi)?;
    let mut harmonics = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let w = 2.0 * PI * k as f64;
        let a = 2.0 * rule.integrate(|r| phi(r) * (w * r).cos())?;
        let b = 2.0 * rule.integrate(|r| phi(r) * (w * r).sin())?;
        harmonics.push(Harmonic { k, a, b });
    }
    Ok(FourierSpectrum { a0, harmonics })
}

/// A profile given by samples on a uniform grid over `[0, 1]` (endpoints
/// included), evaluated through a natural cubic spline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledProfile {
    values: Vec<f64>,
    /// Spline second derivatives at the knots (natural: zero at the ends).
    #[serde(skip)]
    second_derivs: Vec<f64>,
}

impl SampledProfile {
    pub fn new(values: Vec<f64>) -> Result<Self, ProfileError> {
        if values.len() < 4 {
            return Err(ProfileError::TooFewSamples { len: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(ProfileError::NonFiniteSample { index });
        }
        let second_derivs = natural_spline_second_derivs(&values);
        Ok(Self {
            values,
            second_derivs,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spline value at `r`, clamped to `[0, 1]`.
    pub fn eval(&self, r: f64) -> f64 {
        let m = self.values.len();
        let h = 1.0 / (m - 1) as f64;
        let x = r.clamp(0.0, 1.0);
        let i = ((x / h) as usize).min(m - 2);
        let t = (x - i as f64 * h) / h;
        let s = 1.0 - t;
        self.values[i] * s
            + self.values[i + 1] * t
            + h * h / 6.0
                * ((s * s * s - s) * self.second_derivs[i]
                    + (t * t * t - t) * self.second_derivs[i + 1])
    }
}

/// Second derivatives of the natural cubic spline through uniformly spaced
/// samples, by the Thomas tridiagonal solve.
fn natural_spline_second_derivs(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let h = 1.0 / (m - 1) as f64;
    let mut second = vec![0.0; m];
    if m < 3 {
        return second;
    }
    // Interior equations: (h/6) M_{i-1} + (2h/3) M_i + (h/6) M_{i+1} = d_i.
    let unknowns = m - 2;
    let mut diag = vec![2.0 * h / 3.0; unknowns];
    let mut rhs = vec![0.0; unknowns];
    for (idx, r) in rhs.iter_mut().enumerate() {
        let i = idx + 1;
        *r = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h;
    }
    let off = h / 6.0;
    for i in 1..unknowns {
        let w = off / diag[i - 1];
        diag[i] -= w * off;
        rhs[i] -= w * rhs[i - 1];
    }
    second[unknowns] = rhs[unknowns - 1] / diag[unknowns - 1];
    for i in (1..unknowns).rev() {
        second[i] = (rhs[i - 1] - off * second[i + 1]) / diag[i - 1];
    }
    second
}

/// The shape of the perturbation part `phi(r)`, before any amplitude scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileShape {
    Fourier(FourierSpectrum),
    Samples(SampledProfile),
}

impl ProfileShape {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ProfileShape::Fourier(s) => s.eval(r),
            ProfileShape::Samples(s) => s.eval(r),
        }
    }

    /// Effective oscillation count for quadrature sizing: a harmonic `k`
    /// counts as mode `2k`; a sampled grid of `m` points is capped at `m`.
    pub fn effective_mode(&self) -> usize {
        match self {
            ProfileShape::Fourier(s) => 2 * s.max_harmonic() as usize,
            ProfileShape::Samples(s) => s.len(),
        }
    }

    /// True for a profile with no perturbation content at all.
    pub fn is_zero(&self) -> bool {
        match self {
            ProfileShape::Fourier(s) => s.a0 == 0.0 && s.harmonics.is_empty(),
            ProfileShape::Samples(_) => false,
        }
    }
}

/// A full alpha-profile `alpha(r) = alpha0 + epsilon_scale * phi(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaProfile {
    /// Constant part of the profile (the sweep parameter).
    pub alpha0: f64,
    /// Perturbation amplitude multiplying `phi`.
    pub epsilon_scale: f64,
    pub shape: ProfileShape,
}

impl AlphaProfile {
    /// Unperturbed profile `alpha(r) = alpha0`.
    pub fn constant(alpha0: f64) -> Self {
        Self {
            alpha0,
            epsilon_scale: 1.0,
            shape: ProfileShape::Fourier(FourierSpectrum::default()),
        }
    }

    pub fn from_fourier(alpha0: f64, epsilon_scale: f64, spectrum: FourierSpectrum) -> Self {
        Self {
            alpha0,
            epsilon_scale,
            shape: ProfileShape::Fourier(spectrum),
        }
    }

    pub fn from_samples(
        alpha0: f64,
        epsilon_scale: f64,
        values: Vec<f64>,
    ) -> Result<Self, ProfileError> {
        Ok(Self {
            alpha0,
            epsilon_scale,
            shape: ProfileShape::Samples(SampledProfile::new(values)?),
        })
    }

    /// The bare perturbation shape `phi(r)`.
    pub fn phi(&self, r: f64) -> f64 {
        self.shape.eval(r)
    }

    /// The scaled perturbation `delta alpha(r) = epsilon_scale * phi(r)`.
    pub fn delta_alpha(&self, r: f64) -> f64 {
        self.epsilon_scale * self.shape.eval(r)
    }

    /// Full profile value `alpha0 + delta alpha(r)`.
    pub fn alpha(&self, r: f64) -> f64 {
        self.alpha0 + self.delta_alpha(r)
    }

    pub fn effective_mode(&self) -> usize {
        self.shape.effective_mode()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients_of_pure_harmonics() {
        let s = fourier_coefficients(|r| (4.0 * PI * r).cos(), 4).unwrap();
        assert_abs_diff_eq!(s.a0, 0.0, epsilon = 1e-12);
        for h in &s.harmonics {
            let want_a = if h.k == 2 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(h.a, want_a, epsilon = 1e-12);
            assert_abs_diff_eq!(h.b, 0.0, epsilon = 1e-12);
        }

        let s = fourier_coefficients(|_| 1.0, 2).unwrap();
        assert_abs_diff_eq!(s.a0, 2.0, epsilon = 1e-13);
        assert!(s.harmonics.iter().all(|h| h.a.abs() < 1e-13 && h.b.abs() < 1e-13));

        let s = fourier_coefficients(|r| (2.0 * PI * r).sin() + 0.5, 1).unwrap();
        assert_abs_diff_eq!(s.a0, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(s.harmonics[0].b, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(s.harmonics[0].a, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn q_factor_examples() {
        let a2 = FourierSpectrum::new(0.0, vec![Harmonic { k: 2, a: 1.0, b: 0.0 }]).unwrap();
        assert_eq!(q_factor(&a2, 4), 1.0);
        assert_eq!(q_factor(&a2, -4), 1.0);
        assert_eq!(q_factor(&a2, 3), 0.0);
        assert_eq!(q_factor(&a2, 2), 0.0); // would need a_1

        let b1 = FourierSpectrum::new(0.0, vec![Harmonic { k: 1, a: 0.0, b: 1.0 }]).unwrap();
        assert_abs_diff_eq!(q_factor(&b1, 1), 8.0 / (3.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(q_factor(&b1, 1), 0.8488263631567751241, epsilon = 1e-14);
        assert_abs_diff_eq!(q_factor(&b1, 3), -0.50929581789406507446, epsilon = 1e-14);
        assert_abs_diff_eq!(q_factor(&b1, -3), q_factor(&b1, 3), epsilon = 0.0);
        assert_abs_diff_eq!(q_factor(&b1, 9), -0.033071157006108121718, epsilon = 1e-15);
    }

    #[test]
    fn q_factor_mean_channel() {
        let s = FourierSpectrum::constant(0.3);
        assert_abs_diff_eq!(q_factor_full(&s, 0), 0.6, epsilon = 1e-15);
        assert_eq!(q_factor_full(&s, 2), 0.0);
    }

    #[test]
    fn round_trip_is_stable() {
        let original = FourierSpectrum::new(
            0.7,
            vec![
                Harmonic { k: 1, a: 0.2, b: -1.1 },
                Harmonic { k: 3, a: 0.0, b: 0.45 },
                Harmonic { k: 5, a: -0.8, b: 0.0 },
            ],
        )
        .unwrap();
        let recovered = fourier_coefficients(|r| original.eval(r), 6).unwrap();
        assert_abs_diff_eq!(recovered.a0, original.a0, epsilon = 1e-10);
        for h in &recovered.harmonics {
            let want = original
                .harmonics
                .iter()
                .find(|o| o.k == h.k)
                .copied()
                .unwrap_or(Harmonic { k: h.k, a: 0.0, b: 0.0 });
            assert_abs_diff_eq!(h.a, want.a, epsilon = 1e-10);
            assert_abs_diff_eq!(h.b, want.b, epsilon = 1e-10);
        }
    }

    #[test]
    fn validation_rejects_bad_spectra() {
        assert!(matches!(
            FourierSpectrum::new(0.0, vec![Harmonic { k: 0, a: 1.0, b: 0.0 }]),
            Err(ProfileError::ZeroHarmonic)
        ));
        assert!(matches!(
            FourierSpectrum::new(
                0.0,
                vec![
                    Harmonic { k: 2, a: 1.0, b: 0.0 },
                    Harmonic { k: 2, a: 0.0, b: 1.0 },
                ]
            ),
            Err(ProfileError::DuplicateHarmonic { k: 2 })
        ));
    }

    #[test]
    fn spline_matches_reference_values() {
        // Oracle: natural cubic spline through sin(2 pi x) + 0.25 x on a
        // 9-point uniform grid (scipy CubicSpline, bc_type="natural").
        let xs: Vec<f64> = (0..9).map(|i| i as f64 / 8.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (2.0 * PI * x).sin() + 0.25 * x).collect();
        let profile = SampledProfile::new(ys).unwrap();
        for &(x, want) in &[
            (0.05, 0.32104834),
            (0.37, 0.82140141),
            (0.61, -0.48494232),
            (0.93, -0.19288704),
        ] {
            assert_abs_diff_eq!(profile.eval(x), want, epsilon = 1e-7);
        }
        // Knots are reproduced exactly.
        for (i, &x) in xs.iter().enumerate() {
            assert_abs_diff_eq!(profile.eval(x), profile.values()[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn sampled_profile_validation() {
        assert!(matches!(
            SampledProfile::new(vec![0.0, 1.0, 2.0]),
            Err(ProfileError::TooFewSamples { len: 3 })
        ));
        assert!(matches!(
            SampledProfile::new(vec![0.0, 1.0, f64::NAN, 2.0, 3.0]),
            Err(ProfileError::NonFiniteSample { index: 2 })
        ));
    }

    #[test]
    fn profile_evaluation_composes_parts() {
        let spectrum = FourierSpectrum::new(0.8, vec![Harmonic { k: 2, a: 2.5, b: 0.0 }]).unwrap();
        let p = AlphaProfile::from_fourier(3.0, 0.5, spectrum);
        let r = 0.3;
        let phi = 0.4 + 2.5 * (4.0 * PI * r).cos();
        assert_abs_diff_eq!(p.phi(r), phi, epsilon = 1e-14);
        assert_abs_diff_eq!(p.delta_alpha(r), 0.5 * phi, epsilon = 1e-14);
        assert_abs_diff_eq!(p.alpha(r), 3.0 + 0.5 * phi, epsilon = 1e-14);
        assert_eq!(p.effective_mode(), 4);

        let c = AlphaProfile::constant(2.0);
        assert_abs_diff_eq!(c.alpha(0.77), 2.0, epsilon = 0.0);
        assert!(c.shape.is_zero());
    }
}
