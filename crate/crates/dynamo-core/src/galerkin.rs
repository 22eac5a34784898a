//! Spectral Galerkin discretization of the perturbed operator.
//!
//! In the Krein-normalized mode basis the operator matrix is
//! `A_ij = lambda_i delta_ij + eps_i S_ij` with
//! `S_ij = int_0^1 dalpha(r) g_ij(r) dr`, where `lambda_i` are the
//! unperturbed branch eigenvalues at the working `alpha0` and `g_ij` is the
//! gradient kernel.  Since `S` is symmetric, `A` satisfies the fundamental
//! pseudo-symmetry `A = eta A^T eta` with `eta = diag(eps_i)` *exactly* (by
//! construction, not merely to rounding): eigenvalues come in
//! complex-conjugate pairs and the Krein structure of the continuous problem
//! survives truncation.

use crate::fourier::{q_factor_full, AlphaProfile, FourierSpectrum};
use crate::mesh::BranchId;
use crate::quadrature::{QuadratureError, QuadratureRule};
use crate::specfun::{RadialEigenfunction, SectorConfig, SpecfunError};
use num_complex::Complex64;

/// Errors from basis construction and matrix assembly.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GalerkinError {
    #[error("basis needs at least one branch index")]
    EmptyBasis,
    #[error("branch index at position {position} is zero")]
    ZeroBranchIndex { position: usize },
    #[error("branch indices must be strictly decreasing at position {position}")]
    NotStrictlyDecreasing { position: usize },
    #[error("basis is for sector l={got}, expected l={expected}")]
    WrongSector { expected: u32, got: u32 },
    #[error("perturbation profile is not finite at r={node}")]
    NonFinitePerturbation { node: f64 },
    #[error("vector length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// An ordered set of signed branch indices for one angular sector.
///
/// Indices are kept strictly decreasing (`+n_plus, ..., +1, -1, ..., -n_minus`
/// for a symmetric window) so row/column positions have a canonical meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalerkinBasis {
    l: u32,
    indices: Vec<BranchId>,
}

impl GalerkinBasis {
    /// Build a basis from signed indices; they must be nonzero and strictly
    /// decreasing.
    pub fn new(l: u32, signed_indices: &[i32]) -> Result<Self, GalerkinError> {
        if signed_indices.is_empty() {
            return Err(GalerkinError::EmptyBasis);
        }
        for (position, &s) in signed_indices.iter().enumerate() {
            if s == 0 {
                return Err(GalerkinError::ZeroBranchIndex { position });
            }
            if position > 0 && signed_indices[position - 1] <= s {
                return Err(GalerkinError::NotStrictlyDecreasing { position });
            }
        }
        Ok(Self {
            l,
            indices: signed_indices.iter().map(|&s| BranchId::new(s)).collect(),
        })
    }

    /// The symmetric window `+half, ..., +1, -1, ..., -half` holding both
    /// Krein types, the natural truncation for conjugate-pair dynamics.
    pub fn symmetric_window(l: u32, half: u32) -> Result<Self, GalerkinError> {
        let signed: Vec<i32> = (1..=half as i32)
            .rev()
            .chain((1..=half as i32).map(|n| -n))
            .collect();
        Self::new(l, &signed)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn indices(&self) -> &[BranchId] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Number of positive-type basis branches.
    pub fn n_plus(&self) -> usize {
        self.indices.iter().filter(|b| b.signed() > 0).count()
    }

    /// Number of negative-type basis branches.
    pub fn n_minus(&self) -> usize {
        self.len() - self.n_plus()
    }
}

/// Assembled operator matrix over a [`GalerkinBasis`], row-major, together
/// with the Krein signature of its rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinMatrix {
    l: u32,
    indices: Vec<BranchId>,
    eta: Vec<i8>,
    sqrt_rhos: Vec<f64>,
    entries: Vec<f64>,
    alpha0: f64,
}

impl GalerkinMatrix {
    pub fn n(&self) -> usize {
        self.indices.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n() + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Krein signature `eps_i` of the basis rows.
    pub fn eta(&self) -> &[i8] {
        &self.eta
    }

    pub fn indices(&self) -> &[BranchId] {
        &self.indices
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Entries of the same operator at a different mean field strength.
    ///
    /// Only the diagonal depends on `alpha0` (linearly, with slope
    /// `eps_i sqrt(rho_i)`), so a sweep assembles once and re-diagonalizes.
    pub fn entries_at_alpha0(&self, alpha0: f64) -> Vec<f64> {
        let n = self.n();
        let mut out = self.entries.clone();
        let shift = alpha0 - self.alpha0;
        for i in 0..n {
            out[i * n + i] += shift * self.eta[i] as f64 * self.sqrt_rhos[i];
        }
        out
    }

    /// Largest absolute entry, a convenient scale for residual tolerances.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

/// Assemble the operator matrix for a basis and a full profile
/// `alpha(r) = alpha0 + epsilon_scale * phi(r)`.
///
/// Mode values are cached per quadrature node, each coupling integral is
/// computed once per unordered pair, and the two mirror entries are written
/// from the same number — making `A = eta A^T eta` hold to the last bit.
pub fn assemble(
    basis: &GalerkinBasis,
    profile: &AlphaProfile,
) -> Result<GalerkinMatrix, GalerkinError> {
    let n = basis.len();
    let modes: Vec<RadialEigenfunction> = basis
        .indices
        .iter()
        .map(|b| RadialEigenfunction::new(basis.l, b.radial()))
        .collect::<Result<_, _>>()?;
    let eta: Vec<i8> = basis.indices.iter().map(|b| b.krein_sign() as i8).collect();
    let sqrt_rhos: Vec<f64> = modes.iter().map(|m| m.sqrt_rho).collect();

    let mode_budget = basis
        .indices
        .iter()
        .map(|b| b.radial())
        .max()
        .expect("basis is nonempty") as usize
        + basis.l.div_ceil(2) as usize;
    let rule = QuadratureRule::for_modes(mode_budget.max(profile.effective_mode()));
    let nodes = rule.nodes();
    let weights = rule.weights();
    let n_nodes = nodes.len();

    let mut weighted_delta = Vec::with_capacity(n_nodes);
    for (&r, &w) in nodes.iter().zip(weights) {
        let d = profile.delta_alpha(r);
        if !d.is_finite() {
            return Err(GalerkinError::NonFinitePerturbation { node: r });
        }
        weighted_delta.push(w * d);
    }

    let mut u = vec![0.0; n * n_nodes];
    let mut du = vec![0.0; n * n_nodes];
    for (i, mode) in modes.iter().enumerate() {
        for (k, &r) in nodes.iter().enumerate() {
            let (ui, dui) = mode.eval(r);
            u[i * n_nodes + k] = ui;
            du[i * n_nodes + k] = dui;
        }
    }
    let centrifugal = SectorConfig::new(basis.l).centrifugal();

    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let coupling = (eta[i] * eta[j]) as f64 * sqrt_rhos[i] * sqrt_rhos[j];
            let inv_denom = 0.5 / (sqrt_rhos[i] * sqrt_rhos[j]).sqrt();
            let (ui, dui) = (&u[i * n_nodes..(i + 1) * n_nodes], &du[i * n_nodes..(i + 1) * n_nodes]);
            let (uj, duj) = (&u[j * n_nodes..(j + 1) * n_nodes], &du[j * n_nodes..(j + 1) * n_nodes]);
            let mut s = 0.0;
            for k in 0..n_nodes {
                let r = nodes[k];
                let g = ((coupling + centrifugal / (r * r)) * (ui[k] * uj[k])
                    + dui[k] * duj[k])
                    * inv_denom;
                s += weighted_delta[k] * g;
            }
            entries[i * n + j] = eta[i] as f64 * s;
            entries[j * n + i] = eta[j] as f64 * s;
        }
        let lambda_i =
            -sqrt_rhos[i] * sqrt_rhos[i] + eta[i] as f64 * profile.alpha0 * sqrt_rhos[i];
        entries[i * n + i] += lambda_i;
    }

    Ok(GalerkinMatrix {
        l: basis.l,
        indices: basis.indices.clone(),
        eta,
        sqrt_rhos,
        entries,
        alpha0: profile.alpha0,
    })
}

/// Closed-form assembly for the `l = 0` sector, an independent oracle for
/// [`assemble`]: with signed indices `m, n` the coupling integral collapses
/// to `S_mn = (pi/2) sqrt(|m n|) Q_{m-n}` where `Q` is the resonance factor
/// of the perturbation spectrum (mean channel `Q_0 = a0` on the diagonal).
///
/// `delta_alpha` is the spectrum of the full perturbation `dalpha`; scale it
/// by hand if an `epsilon_scale` convention is in play.
pub fn assemble_l0_closed_form(
    basis: &GalerkinBasis,
    alpha0: f64,
    delta_alpha: &FourierSpectrum,
) -> Result<GalerkinMatrix, GalerkinError> {
    if basis.l != 0 {
        return Err(GalerkinError::WrongSector {
            expected: 0,
            got: basis.l,
        });
    }
    let n = basis.len();
    let eta: Vec<i8> = basis.indices.iter().map(|b| b.krein_sign() as i8).collect();
    let sqrt_rhos: Vec<f64> = basis
        .indices
        .iter()
        .map(|b| b.radial() as f64 * std::f64::consts::PI)
        .collect();

    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let (mi, mj) = (basis.indices[i].signed(), basis.indices[j].signed());
            let s = 0.5
                * std::f64::consts::PI
                * ((mi.unsigned_abs() * mj.unsigned_abs()) as f64).sqrt()
                * q_factor_full(delta_alpha, mi - mj);
            entries[i * n + j] = eta[i] as f64 * s;
            entries[j * n + i] = eta[j] as f64 * s;
        }
        let lambda_i = -sqrt_rhos[i] * sqrt_rhos[i] + eta[i] as f64 * alpha0 * sqrt_rhos[i];
        entries[i * n + i] += lambda_i;
    }

    Ok(GalerkinMatrix {
        l: 0,
        indices: basis.indices.clone(),
        eta,
        sqrt_rhos,
        entries,
        alpha0,
    })
}

/// Indefinite Krein product `[c, d] = sum_i eps_i c_i conj(d_i)` over the
/// coordinate vectors of a basis with signature `eta`.
pub fn krein_product(
    c: &[Complex64],
    d: &[Complex64],
    eta: &[i8],
) -> Result<Complex64, GalerkinError> {
    if c.len() != eta.len() {
        return Err(GalerkinError::DimensionMismatch {
            expected: eta.len(),
            got: c.len(),
        });
    }
    if d.len() != eta.len() {
        return Err(GalerkinError::DimensionMismatch {
            expected: eta.len(),
            got: d.len(),
        });
    }
    Ok(c.iter()
        .zip(d)
        .zip(eta)
        .map(|((ci, di), &e)| e as f64 * ci * di.conj())
        .sum())
}
