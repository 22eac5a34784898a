//! Spectral analysis of the spherically symmetric mean-field dynamo
//! operator: radial eigenfunctions, crossing (diabolical) points of the
//! ideally conducting spectral mesh, their first-order unfolding under
//! localized helical-turbulence perturbations, and a Krein-space Galerkin
//! discretization with an indefinite-symmetric eigenvalue sweep.

// Reference values in the tests keep the full decimal expansion of the
// high-precision oracles that produced them, even when fewer digits (or a
// std constant) would parse to the same f64.
#![allow(clippy::excessive_precision, clippy::approx_constant)]

pub mod eig;
pub mod fourier;
pub mod galerkin;
pub mod mesh;
pub mod quadrature;
pub mod specfun;
pub mod unfolding;

pub use eig::{
    eigenvalues, eigenvalues_of, sweep, sweep_serial, EigError, Spectrum, SweepError, SweepRow,
    SweepTable,
};
pub use fourier::{
    fourier_coefficients, q_factor, AlphaProfile, FourierSpectrum, Harmonic, ProfileError,
    ProfileShape, SampledProfile,
};
pub use num_complex::Complex64;
pub use galerkin::{
    assemble, assemble_l0_closed_form, krein_product, GalerkinBasis, GalerkinError, GalerkinMatrix,
};
pub use mesh::{branch_eigenvalue, dp_parabola_l0, enumerate_dps, BranchId, DiabolicalPoint, MeshError};
pub use quadrature::{QuadratureError, QuadratureRule};
pub use unfolding::{
    classify_intersection, critical_offset_l0, critical_profile_residual_l0,
    ep_offset_asymptotic_l0, ep_offset_estimate_l0, gradient_g, lambda1_l0_closed_form,
    perturb_matrix_element, perturb_matrix_element_integrated_by_parts, unfold_dp,
    PerturbationElement, Regime, UnfoldingError, UnfoldingResult,
};
pub use specfun::{
    bessel_zero, eigenfunction_du, eigenfunction_u, spherical_bessel_j, BesselRoot,
    RadialEigenfunction, SectorConfig, SpecfunError,
};
