//! First-order perturbation theory at a diabolical point.
//!
//! A perturbation `delta alpha = eps phi(r)` couples the two crossing
//! branches through three matrix elements built from the gradient kernel
//! `g_mn(r)`.  The first-order eigenvalue shifts are the roots of a real
//! quadratic whose discriminant decides whether the crossing splits into
//! two real branches (avoided crossing) or a complex-conjugate pair
//! (oscillatory instability bubble); the zeroth-order eigenvectors of the
//! two emerging branches are rays in the crossing plane.
//!
//! All elements are computed in the Krein-normalized basis
//! `v_n = u_n / (sqrt(2) rho_n^{1/4})` with `[v_m, v_n] = eps_n delta_mn`,
//! under the canonical sign gauge of [`crate::specfun`].  Off-diagonal
//! element signs are gauge-dependent; eigenvalue outputs are not.

use crate::fourier::ProfileShape;
use crate::mesh::{BranchId, DiabolicalPoint};
use crate::quadrature::{QuadratureError, QuadratureRule};
use crate::specfun::{RadialEigenfunction, SectorConfig, SpecfunError};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Errors from perturbation-theory evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnfoldingError {
    #[error("gradient kernel is singular at r=0; need r in (0, 1]")]
    SingularRadius { r: f64 },
    #[error("no complex sector for n={n}, j={j}: requires n(n+j) < 0")]
    NoComplexSector { n: i32, j: i32 },
    #[error("parabola index j={j} too small for line index M={m}: requires |j| >= |M| + 2")]
    ParabolaOutOfRange { m: i32, j: i32 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// One matrix element of the perturbation operator between two
/// Krein-normalized modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationElement {
    pub l: u32,
    pub m: BranchId,
    pub n: BranchId,
    /// The value `int_0^1 phi(r) g_mn(r) dr`.
    pub value: f64,
}

/// How a diabolical point unfolds at first order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Both shifts real: the crossing splits into an avoided crossing.
    RealUnfolding,
    /// Conjugate pair with nonzero imaginary part.
    ComplexUnfolding,
    /// Discriminant vanishes within tolerance (coalescence or zero
    /// perturbation).
    Marginal,
}

/// First-order unfolding data for one diabolical point and one profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnfoldingResult {
    /// The two roots of the first-order quadratic (unscaled by epsilon).
    pub lambda1_plus: Complex64,
    pub lambda1_minus: Complex64,
    /// Eigenvector ray slopes `gamma_1/gamma_2` in the crossing plane,
    /// `None` when the perturbation leaves the direction undetermined.
    pub ray_ratio_plus: Option<Complex64>,
    pub ray_ratio_minus: Option<Complex64>,
    pub regime: Regime,
    /// First-order eigenvalue predictions `lambda_node + eps * lambda1`.
    pub eigenvalue_plus: Complex64,
    pub eigenvalue_minus: Complex64,
}

/// Shared evaluation state for the gradient kernel of a mode pair.
pub(crate) struct GradientKernel {
    mode_m: RadialEigenfunction,
    mode_n: RadialEigenfunction,
    /// `eps_m eps_n sqrt(rho_m rho_n)`.
    coupling: f64,
    /// `l(l+1)`.
    centrifugal: f64,
    /// `1 / (2 (rho_m rho_n)^{1/4})`.
    inv_denom: f64,
}

impl GradientKernel {
    pub(crate) fn new(l: u32, m: BranchId, n: BranchId) -> Result<Self, SpecfunError> {
        let mode_m = RadialEigenfunction::new(l, m.radial())?;
        let mode_n = RadialEigenfunction::new(l, n.radial())?;
        let sqrt_rho_prod = mode_m.sqrt_rho * mode_n.sqrt_rho;
        Ok(Self {
            mode_m,
            mode_n,
            coupling: m.epsilon() * n.epsilon() * sqrt_rho_prod,
            centrifugal: SectorConfig::new(l).centrifugal(),
            inv_denom: 0.5 / sqrt_rho_prod.sqrt(),
        })
    }

    /// `g_mn(r)` for `r > 0`.  The mode product is grouped so the kernel is
    /// symmetric in `(m, n)` to the last bit.
    pub(crate) fn eval(&self, r: f64) -> f64 {
        let (u_m, du_m) = self.mode_m.eval(r);
        let (u_n, du_n) = self.mode_n.eval(r);
        ((self.coupling + self.centrifugal / (r * r)) * (u_m * u_n) + du_m * du_n)
            * self.inv_denom
    }
}

/// The perturbation-gradient kernel `g_mn(r)`, the Frechet derivative of the
/// mesh eigenvalues with respect to the profile:
/// `g = [(eps_m eps_n sqrt(rho_m rho_n) + l(l+1)/r^2) u_m u_n + u_m' u_n']
///      / (2 (rho_m rho_n)^{1/4})`.
/// At the wall, `|g_mn(1)| = (rho_m rho_n)^{1/4}`.
pub fn gradient_g(l: u32, m: BranchId, n: BranchId, r: f64) -> Result<f64, UnfoldingError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(UnfoldingError::SingularRadius { r });
    }
    Ok(GradientKernel::new(l, m, n)?.eval(r))
}

fn rule_for(l: u32, m: BranchId, n: BranchId, phi: &ProfileShape) -> QuadratureRule {
    // Mode n of sector l oscillates roughly n + l/2 times; round up.
    let mode_budget = (m.radial().max(n.radial()) + l.div_ceil(2)) as usize;
    QuadratureRule::for_modes(mode_budget.max(phi.effective_mode()))
}

/// The matrix element `[B v_m, v_n] = int_0^1 phi(r) g_mn(r) dr`, computed
/// from the gradient kernel.  Exactly symmetric in `(m, n)`.
pub fn perturb_matrix_element(
    l: u32,
    m: BranchId,
    n: BranchId,
    phi: &ProfileShape,
) -> Result<PerturbationElement, UnfoldingError> {
    let kernel = GradientKernel::new(l, m, n)?;
    let rule = rule_for(l, m, n, phi);
    let value = rule.integrate(|r| phi.eval(r) * kernel.eval(r))?;
    Ok(PerturbationElement { l, m, n, value })
}

/// The same matrix element through the integration-by-parts representation
/// `int phi [(rho_m + eps_m eps_n sqrt(rho_m rho_n)) u_m u_n + u_m'' u_n +
/// u_m' u_n'] dr / (2 (rho_m rho_n)^{1/4})`, which exercises the second
/// derivative of the first mode instead of the centrifugal term.  Kept as an
/// independent cross-check of [`perturb_matrix_element`]; the two agree for
/// smooth profiles because the modes satisfy the radial equation.
pub fn perturb_matrix_element_integrated_by_parts(
    l: u32,
    m: BranchId,
    n: BranchId,
    phi: &ProfileShape,
) -> Result<PerturbationElement, UnfoldingError> {
    let mode_m = RadialEigenfunction::new(l, m.radial())?;
    let mode_n = RadialEigenfunction::new(l, n.radial())?;
    let sqrt_rho_prod = mode_m.sqrt_rho * mode_n.sqrt_rho;
    let offset = mode_m.rho() + m.epsilon() * n.epsilon() * sqrt_rho_prod;
    let inv_denom = 0.5 / sqrt_rho_prod.sqrt();
    let rule = rule_for(l, m, n, phi);
    let value = rule.integrate(|r| {
        let (u_m, du_m, ddu_m) = mode_m.eval_with_second(r);
        let (u_n, du_n) = mode_n.eval(r);
        phi.eval(r) * (offset * u_m * u_n + ddu_m * u_n + du_m * du_n) * inv_denom
    })?;
    Ok(PerturbationElement { l, m, n, value })
}

/// Discriminant-based regime decision shared by [`unfold_dp`] and
/// [`classify_intersection`], with tolerance `1e-10` on the scale of the
/// squared coefficients.
fn regime_from_elements(p_aa: f64, p_bb: f64, p_ab: f64, eps_a: f64, eps_b: f64) -> Regime {
    let a1 = eps_a * p_aa;
    let a2 = eps_b * p_bb;
    let disc = (a1 - a2) * (a1 - a2) + 4.0 * eps_a * eps_b * p_ab * p_ab;
    let scale = a1.abs().max(a2.abs()).max(p_ab.abs());
    let tol = 1e-10 * (scale * scale).max(f64::MIN_POSITIVE);
    if disc.abs() <= tol {
        Regime::Marginal
    } else if disc < 0.0 {
        Regime::ComplexUnfolding
    } else {
        Regime::RealUnfolding
    }
}

/// Unfold a diabolical point under the perturbation `eps phi(r)`.
///
/// The shifts `lambda1` solve the reduced quadratic
/// `lambda1^2 - (a1 + a2) lambda1 + a1 a2 - eps delta b^2/4 = 0` with
/// `a1 = eps_a P_aa`, `a2 = eps_b P_bb`, `b = 2 P_ab`; they are independent
/// of `epsilon_scale`, which only enters the first-order eigenvalue
/// predictions `lambda_node + eps lambda1`.
pub fn unfold_dp(
    dp: &DiabolicalPoint,
    phi: &ProfileShape,
    epsilon_scale: f64,
) -> Result<UnfoldingResult, UnfoldingError> {
    let (a, b) = (dp.branch_a, dp.branch_b);
    let p_aa = perturb_matrix_element(dp.l, a, a, phi)?.value;
    let p_bb = perturb_matrix_element(dp.l, b, b, phi)?.value;
    let p_ab = perturb_matrix_element(dp.l, a, b, phi)?.value;
    let (eps_a, eps_b) = (a.epsilon(), b.epsilon());

    let a1 = eps_a * p_aa;
    let a2 = eps_b * p_bb;
    let half_tr = 0.5 * (a1 + a2);
    let disc = (a1 - a2) * (a1 - a2) + 4.0 * eps_a * eps_b * p_ab * p_ab;
    let regime = regime_from_elements(p_aa, p_bb, p_ab, eps_a, eps_b);

    let (lambda1_plus, lambda1_minus) = if disc >= 0.0 {
        let half_gap = 0.5 * disc.sqrt();
        (
            Complex64::new(half_tr + half_gap, 0.0),
            Complex64::new(half_tr - half_gap, 0.0),
        )
    } else {
        let half_gap = 0.5 * (-disc).sqrt();
        (
            Complex64::new(half_tr, half_gap),
            Complex64::new(half_tr, -half_gap),
        )
    };

    // Eigenvector rays in the (u_a, u_b) coordinates of the crossing plane.
    let root_a = RadialEigenfunction::new(dp.l, a.radial())?;
    let root_b = RadialEigenfunction::new(dp.l, b.radial())?;
    let quarter = |m: &RadialEigenfunction| m.sqrt_rho.sqrt();
    let b_aa = 2.0 * quarter(&root_a) * quarter(&root_a) * p_aa;
    let b_bb = 2.0 * quarter(&root_b) * quarter(&root_b) * p_bb;
    let b_ab = 2.0 * quarter(&root_a) * quarter(&root_b) * p_ab;
    let k_a = 2.0 * eps_a * root_a.sqrt_rho;
    let k_b = 2.0 * eps_b * root_b.sqrt_rho;
    let ray = |lambda1: Complex64| -> Option<Complex64> {
        let den_first = Complex64::new(b_aa, 0.0) - k_a * lambda1;
        let scale = b_aa
            .abs()
            .max(b_bb.abs())
            .max(b_ab.abs())
            .max((k_a * lambda1).norm())
            .max((k_b * lambda1).norm());
        let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
        if den_first.norm() <= tol && b_ab.abs() <= tol {
            return None;
        }
        if den_first.norm() >= b_ab.abs() {
            Some(-Complex64::new(b_ab, 0.0) / den_first)
        } else {
            Some(-(Complex64::new(b_bb, 0.0) - k_b * lambda1) / b_ab)
        }
    };

    Ok(UnfoldingResult {
        lambda1_plus,
        lambda1_minus,
        ray_ratio_plus: ray(lambda1_plus),
        ray_ratio_minus: ray(lambda1_minus),
        regime,
        eigenvalue_plus: Complex64::new(dp.lambda_node, 0.0) + epsilon_scale * lambda1_plus,
        eigenvalue_minus: Complex64::new(dp.lambda_node, 0.0) + epsilon_scale * lambda1_minus,
    })
}

/// Classify how a crossing unfolds without computing the shifts: complex
/// exactly when the branches are of mixed type and the mean diagonal element
/// is dominated by the coupling,
/// `(1/2 int (g_aa + g_bb) phi)^2 < (int g_ab phi)^2`.
/// Same-type crossings are always real (marginal for zero perturbation).
pub fn classify_intersection(
    dp: &DiabolicalPoint,
    phi: &ProfileShape,
) -> Result<Regime, UnfoldingError> {
    let (a, b) = (dp.branch_a, dp.branch_b);
    let p_aa = perturb_matrix_element(dp.l, a, a, phi)?.value;
    let p_bb = perturb_matrix_element(dp.l, b, b, phi)?.value;
    let p_ab = perturb_matrix_element(dp.l, a, b, phi)?.value;
    Ok(regime_from_elements(
        p_aa,
        p_bb,
        p_ab,
        a.epsilon(),
        b.epsilon(),
    ))
}

/// Critical constant offset of an `l = 0` mixed-type node `(n, j)`:
/// `|a0(c)| = sqrt(-4 n (n+j)) / |j| * |Q_j|`.  Below it the node unfolds
/// into a complex pair, above it into real branches.
pub fn critical_offset_l0(n: i32, j: i32, q_j: f64) -> Result<f64, UnfoldingError> {
    let product = n * (n + j);
    if product >= 0 {
        return Err(UnfoldingError::NoComplexSector { n, j });
    }
    Ok(((-4 * product) as f64).sqrt() / j.unsigned_abs() as f64 * q_j.abs())
}

/// First-order estimate of the distance (in `alpha0`) from the node at line
/// `M`, parabola `j`, to the exceptional points bounding its instability
/// bubble: `|delta alpha_e| = 1/2 sqrt(1 - M^2/j^2) |Q_j|`.
pub fn ep_offset_estimate_l0(m: i32, j: i32, q_j: f64) -> Result<f64, UnfoldingError> {
    if j.abs() < m.abs() + 2 {
        return Err(UnfoldingError::ParabolaOutOfRange { m, j });
    }
    let ratio = m as f64 / j as f64;
    Ok(0.5 * (1.0 - ratio * ratio).sqrt() * q_j.abs())
}

/// Large-`j` asymptotic form of [`ep_offset_estimate_l0`] for a profile with
/// the single sine harmonic `b_k`: `4 |b_k| k / (pi j^2)`.
pub fn ep_offset_asymptotic_l0(b_k: f64, k: u32, j: i32) -> f64 {
    assert!(j != 0);
    let jf = j as f64;
    4.0 * b_k.abs() * k as f64 / (PI * jf * jf)
}

/// First-order estimate of the real part at the top of the instability
/// bubble of node `(M, j)`:
/// `Re lambda = (pi^2/4)(M^2 - j^2) + (pi/4) M sqrt(1 - M^2/j^2) |Q_j|`.
/// A positive value flags a candidate overcritical oscillatory regime.
pub fn critical_profile_residual_l0(m: i32, j: i32, q_j: f64) -> Result<f64, UnfoldingError> {
    if j.abs() < m.abs() + 2 {
        return Err(UnfoldingError::ParabolaOutOfRange { m, j });
    }
    let (mf, jf) = (m as f64, j as f64);
    let ratio = mf / jf;
    Ok(PI * PI / 4.0 * (mf * mf - jf * jf)
        + PI / 4.0 * mf * (1.0 - ratio * ratio).sqrt() * q_j.abs())
}

/// Closed-form `l = 0` reference for the first-order shifts of the node
/// `(n, j)` under a profile with mean `a0/2` and resonance factor `Q_j`:
/// `lambda1 = (pi/4) [ (2n + j) a0 +- sqrt(j^2 a0^2 + 4 n (n+j) Q_j^2) ]`.
/// This is an independent oracle for [`unfold_dp`], not its implementation.
pub fn lambda1_l0_closed_form(n: i32, j: i32, a0: f64, q_j: f64) -> (Complex64, Complex64) {
    let (nf, jf) = (n as f64, j as f64);
    let disc = jf * jf * a0 * a0 + 4.0 * nf * (nf + jf) * q_j * q_j;
    let lead = PI / 4.0 * (2.0 * nf + jf) * a0;
    if disc >= 0.0 {
        let s = PI / 4.0 * disc.sqrt();
        (
            Complex64::new(lead + s, 0.0),
            Complex64::new(lead - s, 0.0),
        )
    } else {
        let s = PI / 4.0 * (-disc).sqrt();
        (Complex64::new(lead, s), Complex64::new(lead, -s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{FourierSpectrum, Harmonic};
    use crate::mesh::dp_parabola_l0;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn branch(n: i32) -> BranchId {
        BranchId::new(n)
    }

    fn shape_b1() -> ProfileShape {
        // phi = sin(2 pi r)
        ProfileShape::Fourier(
            FourierSpectrum::new(0.0, vec![Harmonic { k: 1, a: 0.0, b: 1.0 }]).unwrap(),
        )
    }

    fn shape_const(c: f64) -> ProfileShape {
        ProfileShape::Fourier(FourierSpectrum::constant(c))
    }

    #[test]
    fn gradient_l0_closed_form() {
        // Canonical gauge at l = 0: g_mn(r) = pi sqrt(|mn|) cos((m-n) pi r)
        // with signed indices.
        for &r in &[0.1, 0.33, 0.5, 0.78, 1.0] {
            assert_abs_diff_eq!(
                gradient_g(0, branch(1), branch(1), r).unwrap(),
                PI,
                epsilon = 1e-11
            );
            let want = PI * 10f64.sqrt() * (7.0 * PI * r).cos();
            assert_abs_diff_eq!(
                gradient_g(0, branch(5), branch(-2), r).unwrap(),
                want,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn gradient_wall_values() {
        // Diagonal wall value is gauge-independent: g_nn(1) = sqrt(rho_n).
        let g = gradient_g(1, branch(2), branch(2), 1.0).unwrap();
        assert_abs_diff_eq!(g, 7.7252518369377, epsilon = 1e-10);
        // Off-diagonal wall values up to the documented sign gauge
        // (canonical gauge gives the frozen signed values below).
        let g = gradient_g(1, branch(1), branch(2), 1.0).unwrap();
        assert_abs_diff_eq!(g, -5.8917501363199, epsilon = 1e-10);
        let g = gradient_g(2, branch(1), branch(3), 1.0).unwrap();
        assert_abs_diff_eq!(g, 8.4275006656541, epsilon = 1e-10);
    }

    #[test]
    fn gradient_rejects_origin() {
        assert!(matches!(
            gradient_g(1, branch(1), branch(1), 0.0),
            Err(UnfoldingError::SingularRadius { .. })
        ));
    }

    #[test]
    fn matrix_element_examples() {
        // (l=0, +1, +5, cos 4 pi r) -> pi sqrt(5) / 2.
        let phi = ProfileShape::Fourier(
            FourierSpectrum::new(0.0, vec![Harmonic { k: 2, a: 1.0, b: 0.0 }]).unwrap(),
        );
        let e = perturb_matrix_element(0, branch(1), branch(5), &phi).unwrap();
        assert_abs_diff_eq!(e.value, PI * 5f64.sqrt() / 2.0, epsilon = 1e-10);

        // (l=0, +2, +2, phi = 1) -> 2 pi.
        let e = perturb_matrix_element(0, branch(2), branch(2), &shape_const(1.0)).unwrap();
        assert_abs_diff_eq!(e.value, 2.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn constant_profile_is_diagonal_in_the_mode_basis() {
        // int_0^1 g_mn dr = sqrt(rho_n) delta_mn: a constant perturbation
        // only slides the branches.
        let e = perturb_matrix_element(1, branch(1), branch(2), &shape_const(1.0)).unwrap();
        assert_abs_diff_eq!(e.value, 0.0, epsilon = 1e-12);
        let e = perturb_matrix_element(1, branch(1), branch(-2), &shape_const(1.0)).unwrap();
        assert_abs_diff_eq!(e.value, 0.0, epsilon = 1e-12);
        let e = perturb_matrix_element(1, branch(1), branch(1), &shape_const(1.0)).unwrap();
        assert_abs_diff_eq!(e.value, 4.49340945790906418, epsilon = 1e-10);
    }

    #[test]
    fn both_integral_representations_agree() {
        let phi = ProfileShape::Fourier(
            FourierSpectrum::new(2.0, vec![Harmonic { k: 1, a: 0.5, b: 0.0 }]).unwrap(),
        );
        let direct = perturb_matrix_element(1, branch(1), branch(2), &phi).unwrap();
        let by_parts =
            perturb_matrix_element_integrated_by_parts(1, branch(1), branch(2), &phi).unwrap();
        assert_abs_diff_eq!(direct.value, by_parts.value, epsilon = 1e-8);
        // Frozen oracle for this element (canonical gauge).
        assert_abs_diff_eq!(direct.value, -0.680374478917396986, epsilon = 1e-9);
    }

    #[test]
    fn unfold_mixed_node_goes_complex() {
        // Node (n=1, j=-3) at alpha0=-pi under phi = sin(2 pi r):
        // lambda1 = +- i 4 sqrt(2)/5.
        let dp = dp_parabola_l0(-1, -3).unwrap();
        assert_eq!(dp.branch_a, branch(1));
        assert_eq!(dp.branch_b, branch(-2));
        let res = unfold_dp(&dp, &shape_b1(), 1.0).unwrap();
        assert_eq!(res.regime, Regime::ComplexUnfolding);
        let want = 4.0 * 2f64.sqrt() / 5.0;
        assert_abs_diff_eq!(res.lambda1_plus.im, want, epsilon = 1e-10);
        assert_abs_diff_eq!(res.lambda1_plus.re, 0.0, epsilon = 1e-12);
        assert_eq!(res.lambda1_minus, res.lambda1_plus.conj());
        // Conjugate rays for a conjugate pair.
        let rp = res.ray_ratio_plus.unwrap();
        let rm = res.ray_ratio_minus.unwrap();
        assert_abs_diff_eq!(rp.re, rm.re, epsilon = 1e-12);
        assert_abs_diff_eq!(rp.im, -rm.im, epsilon = 1e-12);
        // Eigenvalue prediction at eps = 0.1 sits on the node vertical.
        let res = unfold_dp(&dp, &shape_b1(), 0.1).unwrap();
        assert_abs_diff_eq!(res.eigenvalue_plus.re, dp.lambda_node, epsilon = 1e-10);
        assert_abs_diff_eq!(res.eigenvalue_plus.im, 0.1 * want, epsilon = 1e-11);
    }

    #[test]
    fn unfold_same_type_stays_real() {
        let dp = dp_parabola_l0(3, 1).unwrap(); // branches (+1, +2)
        let res = unfold_dp(&dp, &shape_b1(), 1.0).unwrap();
        assert_eq!(res.regime, Regime::RealUnfolding);
        assert_abs_diff_eq!(res.lambda1_plus.im, 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(res.lambda1_minus.im, 0.0, epsilon = 0.0);
    }

    #[test]
    fn unfold_zero_perturbation_is_marginal() {
        let dp = dp_parabola_l0(-1, -3).unwrap();
        let res = unfold_dp(&dp, &shape_const(0.0), 1.0).unwrap();
        assert_eq!(res.regime, Regime::Marginal);
        assert_eq!(res.lambda1_plus, Complex64::new(0.0, 0.0));
        assert_eq!(res.ray_ratio_plus, None);
    }

    #[test]
    fn unfold_matches_l0_closed_form() {
        // Mixed node (1, -3) with an offset profile: both real and complex
        // sides of the transition.
        let dp = dp_parabola_l0(-1, -3).unwrap();
        let q3 = -8.0 / (5.0 * PI);
        for &a0 in &[0.0, 0.2, 0.45, 0.4801687, 0.52, 1.0, -0.3] {
            let spectrum =
                FourierSpectrum::new(a0, vec![Harmonic { k: 1, a: 0.0, b: 1.0 }]).unwrap();
            let res = unfold_dp(&dp, &ProfileShape::Fourier(spectrum), 1.0).unwrap();
            let (want_p, want_m) = lambda1_l0_closed_form(1, -3, a0, q3);
            assert_abs_diff_eq!(res.lambda1_plus.re, want_p.re, epsilon = 1e-9);
            assert_abs_diff_eq!(res.lambda1_plus.im, want_p.im, epsilon = 1e-9);
            assert_abs_diff_eq!(res.lambda1_minus.re, want_m.re, epsilon = 1e-9);
            assert_abs_diff_eq!(res.lambda1_minus.im, want_m.im, epsilon = 1e-9);
        }
    }

    #[test]
    fn classification_matches_unfolding() {
        let dp_mixed = dp_parabola_l0(-1, -3).unwrap();
        let dp_same = dp_parabola_l0(3, 1).unwrap();
        assert_eq!(
            classify_intersection(&dp_mixed, &shape_b1()).unwrap(),
            Regime::ComplexUnfolding
        );
        assert_eq!(
            classify_intersection(&dp_same, &shape_b1()).unwrap(),
            Regime::RealUnfolding
        );
        // Large constant offset pushes the mixed node back to real.
        let spectrum = FourierSpectrum::new(3.0, vec![Harmonic { k: 1, a: 0.0, b: 1.0 }]).unwrap();
        assert_eq!(
            classify_intersection(&dp_mixed, &ProfileShape::Fourier(spectrum)).unwrap(),
            Regime::RealUnfolding
        );
        assert_eq!(
            classify_intersection(&dp_mixed, &shape_const(0.0)).unwrap(),
            Regime::Marginal
        );
    }

    #[test]
    fn critical_offset_values() {
        let q3 = 8.0 / (5.0 * PI);
        let got = critical_offset_l0(1, -3, -q3).unwrap();
        assert_abs_diff_eq!(got, 0.48016870195045657043, epsilon = 1e-14);
        // j = -2n node: the critical offset equals |a_1| itself.
        assert_abs_diff_eq!(critical_offset_l0(1, -2, 0.7).unwrap(), 0.7, epsilon = 1e-14);
        assert_eq!(critical_offset_l0(1, -3, 0.0).unwrap(), 0.0);
        assert!(matches!(
            critical_offset_l0(1, 3, 1.0),
            Err(UnfoldingError::NoComplexSector { .. })
        ));
    }

    #[test]
    fn ep_offset_values() {
        assert_abs_diff_eq!(ep_offset_estimate_l0(0, 2, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        let got = ep_offset_estimate_l0(1, 3, 8.0 / (5.0 * PI)).unwrap();
        assert_abs_diff_eq!(got, 0.24008435097522828521, epsilon = 1e-14);
        assert!(matches!(
            ep_offset_estimate_l0(3, 4, 1.0),
            Err(UnfoldingError::ParabolaOutOfRange { .. })
        ));
        // Asymptotic form vs exact estimate for b_1 = 1 at (M=1, j=9).
        let q9 = -0.033071157006108121718;
        let exact = ep_offset_estimate_l0(1, 9, q9).unwrap();
        assert_abs_diff_eq!(exact, 0.016433190035605819532, epsilon = 1e-14);
        let asym = ep_offset_asymptotic_l0(1.0, 1, 9);
        assert_abs_diff_eq!(asym, 4.0 / (81.0 * PI), epsilon = 1e-16);
        assert!((asym - exact).abs() / exact < 0.15);
    }

    #[test]
    fn critical_residual_values() {
        let got = critical_profile_residual_l0(4, 6, 0.0).unwrap();
        assert_abs_diff_eq!(got, -5.0 * PI * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(got, -49.348022005446793094, epsilon = 1e-12);
        // Solving the residual for zero gives |Q*| = pi j sqrt(j^2-M^2)/M.
        let (m, j) = (4i32, 6i32);
        let (mf, jf) = (m as f64, j as f64);
        let q_star = PI * jf * (jf * jf - mf * mf).sqrt() / mf;
        let res = critical_profile_residual_l0(m, j, q_star).unwrap();
        assert_abs_diff_eq!(res, 0.0, epsilon = 1e-9 * PI * PI * jf * jf);
        // Below the critical strength the residual stays negative.
        assert!(critical_profile_residual_l0(m, j, 0.5 * q_star).unwrap() < 0.0);
    }

    #[test]
    fn scaling_linearity_of_shifts() {
        let dp = dp_parabola_l0(-1, -3).unwrap();
        let base = unfold_dp(&dp, &shape_b1(), 1.0).unwrap();
        let spectrum = FourierSpectrum::new(0.0, vec![Harmonic { k: 1, a: 0.0, b: 2.5 }]).unwrap();
        let scaled = unfold_dp(&dp, &ProfileShape::Fourier(spectrum), 1.0).unwrap();
        assert_relative_eq!(
            scaled.lambda1_plus.im,
            2.5 * base.lambda1_plus.im,
            max_relative = 1e-12
        );
    }
}
