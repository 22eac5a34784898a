//! The unperturbed spectral mesh: straight eigenvalue branches
//! `lambda_n(alpha0) = -rho_n + eps_n alpha0 sqrt(rho_n)` indexed by a
//! signed state number, and the diabolical points (DPs) where two branches
//! cross.
//!
//! A branch is identified by one nonzero integer `n`: `|n|` is the radial
//! mode number and `sign(n)` is the Krein type of the mode.  Two distinct
//! branches `p`, `q` always intersect at exactly one point,
//! `alpha0 = sgn(p) sqrt(rho_p) + sgn(q) sqrt(rho_q)`,
//! `lambda = sgn(p) sgn(q) sqrt(rho_p rho_q)`.
//! For `l = 0` (`sqrt(rho_n) = n pi`) the nodes organize into lines
//! `alpha0 = pi M` and parabolas `4 lambda = alpha0^2 - (pi j)^2`, where
//! `M = p + q` and `j = q - p`.

use crate::specfun::{bessel_zero, SpecfunError};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Errors from mesh construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("line index M={m} and parabola index j={j} must have equal parity (M - j even)")]
    ParityViolation { m: i32, j: i32 },
    #[error("degenerate branch pair for M={m}, j={j}: both branch indices must be nonzero and distinct")]
    DegenerateBranchPair { m: i32, j: i32 },
    #[error("branches {a} and {b} do not form a crossing pair")]
    InvalidBranchPair { a: i32, b: i32 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Signed state number of one spectral branch: `|n|` is the radial mode,
/// `sign(n)` its Krein type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BranchId(i32);

impl BranchId {
    /// Panics on `n = 0`; the mesh has no zeroth branch.
    pub fn new(n: i32) -> Self {
        assert!(n != 0, "branch index must be nonzero");
        Self(n)
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    /// Radial mode number `|n| >= 1`.
    pub fn radial(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// Krein sign `eps_n = sign(n)` as an integer.
    pub fn krein_sign(self) -> i32 {
        self.0.signum()
    }

    /// Krein sign as a float, for use in assembled formulas.
    pub fn epsilon(self) -> f64 {
        self.0.signum() as f64
    }
}

impl std::fmt::Display for BranchId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// Unperturbed eigenvalue of `branch` at constant profile strength `alpha0`:
/// `lambda = -rho_n + eps_n alpha0 sqrt(rho_n)`.
pub fn branch_eigenvalue(l: u32, branch: BranchId, alpha0: f64) -> Result<f64, SpecfunError> {
    let root = bessel_zero(l, branch.radial())?;
    Ok(-root.rho + branch.epsilon() * alpha0 * root.sqrt_rho)
}

/// A node of the spectral mesh: a semi-simple double eigenvalue where two
/// branches cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiabolicalPoint {
    pub l: u32,
    /// The branch with the smaller radial mode number (ties broken toward
    /// the negative-type branch).
    pub branch_a: BranchId,
    pub branch_b: BranchId,
    /// Crossing abscissa `alpha0` (node coordinate).
    pub alpha0_node: f64,
    /// Crossing ordinate `lambda` (node coordinate).
    pub lambda_node: f64,
    /// True when both branches have the same Krein type (eps delta = +1).
    pub same_type: bool,
    /// Parabola index `j = branch_b - branch_a`; populated for l = 0 only.
    pub parabola_index: Option<i32>,
    /// Line index `M = branch_a + branch_b`; populated for l = 0 only.
    pub line_index: Option<i32>,
}

impl DiabolicalPoint {
    /// Crossing point of two distinct branches.  The pair is stored in
    /// canonical order (`|branch_a| < |branch_b|`, or negative type first
    /// when the radial numbers tie), so callers may pass either order.
    pub fn from_branches(l: u32, p: BranchId, q: BranchId) -> Result<Self, MeshError> {
        if p == q {
            return Err(MeshError::InvalidBranchPair {
                a: p.signed(),
                b: q.signed(),
            });
        }
        let (a, b) = if (p.radial(), p.signed()) <= (q.radial(), q.signed()) {
            (p, q)
        } else {
            (q, p)
        };
        let root_a = bessel_zero(l, a.radial())?;
        let root_b = bessel_zero(l, b.radial())?;
        let alpha0_node = a.epsilon() * root_a.sqrt_rho + b.epsilon() * root_b.sqrt_rho;
        let lambda_node = a.epsilon() * b.epsilon() * root_a.sqrt_rho * root_b.sqrt_rho;
        let (parabola_index, line_index) = if l == 0 {
            (Some(b.signed() - a.signed()), Some(a.signed() + b.signed()))
        } else {
            (None, None)
        };
        Ok(Self {
            l,
            branch_a: a,
            branch_b: b,
            alpha0_node,
            lambda_node,
            same_type: a.krein_sign() == b.krein_sign(),
            parabola_index,
            line_index,
        })
    }

    /// Mixed-type crossings (`eps delta = -1`) are the ones that can unfold
    /// into complex pairs.
    pub fn mixed_type(&self) -> bool {
        !self.same_type
    }
}

/// All diabolical points formed by branches with radial numbers up to
/// `n_max` (and distinct radial numbers) inside the closed window
/// `alpha0_range x lambda_range`.  Sorted by `(alpha0, lambda)` and
/// deduplicated on rounded coordinates plus the branch pair.  An empty or
/// inverted window yields an empty list.
pub fn enumerate_dps(
    l: u32,
    n_max: u32,
    alpha0_range: (f64, f64),
    lambda_range: (f64, f64),
) -> Result<Vec<DiabolicalPoint>, MeshError> {
    assert!(n_max >= 2, "need at least two branches to cross");
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    // Signed branch set {-n_max..-1, 1..n_max}; unordered pairs with
    // distinct radial numbers.
    let branches: Vec<i32> = (1..=n_max as i32)
        .flat_map(|n| [n, -n])
        .collect();
    for (i, &p) in branches.iter().enumerate() {
        for &q in &branches[i + 1..] {
            if p.abs() == q.abs() {
                continue;
            }
            let dp = DiabolicalPoint::from_branches(l, BranchId::new(p), BranchId::new(q))?;
            if dp.alpha0_node < alpha0_range.0
                || dp.alpha0_node > alpha0_range.1
                || dp.lambda_node < lambda_range.0
                || dp.lambda_node > lambda_range.1
            {
                continue;
            }
            let key = (
                (dp.alpha0_node * 1e8).round() as i64,
                (dp.lambda_node * 1e8).round() as i64,
                dp.branch_a,
                dp.branch_b,
            );
            if seen.insert(key) {
                out.push(dp);
            }
        }
    }
    out.sort_by(|x, y| {
        x.alpha0_node
            .total_cmp(&y.alpha0_node)
            .then(x.lambda_node.total_cmp(&y.lambda_node))
    });
    Ok(out)
}

/// The `l = 0` diabolical point on line `M` and parabola `j`, i.e. branches
/// `p = (M - j)/2` and `q = (M + j)/2`, located at
/// `(alpha0, lambda) = (pi M, pi^2 (M^2 - j^2)/4)`.
/// Rejects odd `M - j` (no integer branch pair) and degenerate pairs
/// (`j = 0` or a zero branch index).
pub fn dp_parabola_l0(m: i32, j: i32) -> Result<DiabolicalPoint, MeshError> {
    if (m - j).rem_euclid(2) != 0 {
        return Err(MeshError::ParityViolation { m, j });
    }
    let p = (m - j) / 2;
    let q = (m + j) / 2;
    if j == 0 || p == 0 || q == 0 {
        return Err(MeshError::DegenerateBranchPair { m, j });
    }
    DiabolicalPoint::from_branches(0, BranchId::new(p), BranchId::new(q))
}
