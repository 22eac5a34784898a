//! Dense nonsymmetric eigensolver and labeled spectral sweeps.
//!
//! The assembled operator matrices are real and eta-pseudo-symmetric, so
//! their spectra are closed under complex conjugation but the matrices are
//! not normal; a general real solver is required.  This module implements
//! the classic chain: Parlett-Reinsch balancing, Householder reduction to
//! upper Hessenberg form, Francis double-shift QR for the eigenvalues only.
//! Complex pairs are emitted as exact conjugates.
//!
//! [`sweep`] diagonalizes the operator along a grid of mean field strengths
//! `alpha0` (the perturbation couplings do not depend on `alpha0`, so the
//! matrix is assembled once and only its diagonal is updated) and threads
//! branch labels through the grid with minimum-cost assignment between
//! consecutive spectra.

use crate::fourier::{AlphaProfile, ProfileShape};
use crate::galerkin::{assemble, GalerkinBasis, GalerkinError, GalerkinMatrix};
use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Errors from the QR eigensolver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigError {
    #[error("matrix of length {len} is not a square of dimension {n}")]
    NotSquare { len: usize, n: usize },
    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },
    #[error("QR iteration did not converge within {iterations} sweeps")]
    NotConverged { iterations: usize },
}

/// Eigenvalues of one matrix, with solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// All eigenvalues, sorted by (re, im); complex pairs are exact
    /// conjugates.
    pub eigenvalues: Vec<Complex64>,
    /// Total QR sweeps spent.
    pub iterations: usize,
    /// A priori scale for eigenvalue residuals:
    /// `machine epsilon * Frobenius norm * n`.
    pub residual_bound: f64,
}

/// Eigenvalues of a square row-major matrix.
pub fn eigenvalues(matrix: &[f64], n: usize) -> Result<Spectrum, EigError> {
    if matrix.len() != n * n {
        return Err(EigError::NotSquare {
            len: matrix.len(),
            n,
        });
    }
    for (pos, &v) in matrix.iter().enumerate() {
        if !v.is_finite() {
            return Err(EigError::NonFiniteEntry {
                row: pos / n,
                col: pos % n,
                value: v,
            });
        }
    }
    let frobenius = matrix.iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual_bound = f64::EPSILON * frobenius * n as f64;
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            iterations: 0,
            residual_bound,
        });
    }

    let mut a = matrix.to_vec();
    balance(&mut a, n);
    hessenberg(&mut a, n);
    let (mut eigenvalues, iterations) = francis_qr(&mut a, n)?;
    eigenvalues.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(Spectrum {
        eigenvalues,
        iterations,
        residual_bound,
    })
}

/// Eigenvalues of an assembled operator matrix.
pub fn eigenvalues_of(matrix: &GalerkinMatrix) -> Result<Spectrum, EigError> {
    eigenvalues(matrix.entries(), matrix.n())
}

/// Parlett-Reinsch balancing: diagonal similarity with powers of the radix
/// equalizing row and column norms, an exact (error-free) transformation.
fn balance(a: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs();
                    r += a[i * n + j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let mut c_scaled = c;
                let s = c + r;
                let mut g = r / RADIX;
                while c_scaled < g {
                    f *= RADIX;
                    c_scaled *= RADIX * RADIX;
                }
                g = r * RADIX;
                while c_scaled > g {
                    f /= RADIX;
                    c_scaled /= RADIX * RADIX;
                }
                if (c_scaled + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i * n + j] *= g;
                    }
                    for j in 0..n {
                        a[j * n + i] *= f;
                    }
                }
            }
        }
        if done {
            return;
        }
    }
}

/// Householder reduction to upper Hessenberg form (eigenvalues only; the
/// transformation is not accumulated).
fn hessenberg(a: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    for m in 1..n - 1 {
        let scale: f64 = (m..n).map(|i| a[i * n + m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..n).rev() {
            ort[i] = a[i * n + m - 1] / scale;
            h += ort[i] * ort[i];
        }
        let g = if ort[m] > 0.0 { -h.sqrt() } else { h.sqrt() };
        h -= ort[m] * g;
        ort[m] -= g;

        // Apply the reflector from the left ...
        for j in m..n {
            let mut f = 0.0;
            for i in (m..n).rev() {
                f += ort[i] * a[i * n + j];
            }
            f /= h;
            for i in m..n {
                a[i * n + j] -= f * ort[i];
            }
        }
        // ... and from the right.
        for i in 0..n {
            let mut f = 0.0;
            for j in (m..n).rev() {
                f += ort[j] * a[i * n + j];
            }
            f /= h;
            for j in m..n {
                a[i * n + j] -= f * ort[j];
            }
        }
        a[m * n + m - 1] = scale * g;
        for i in m + 1..n {
            a[i * n + m - 1] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (in place),
/// returning the eigenvalues and the number of sweeps spent.
///
/// Exceptional ad hoc shifts kick in after 10 and 20 stalled sweeps per
/// eigenvalue; 30 stalled sweeps on one eigenvalue, or a global budget of
/// `40 n` sweeps, aborts with [`EigError::NotConverged`].
fn francis_qr(h: &mut [f64], n: usize) -> Result<(Vec<Complex64>, usize), EigError> {
    let budget = 40 * n;
    let mut wri = vec![Complex64::new(0.0, 0.0); n];
    // Norm over the Hessenberg band, used as the deflation scale fallback.
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[i * n + j].abs();
        }
    }
    if anorm == 0.0 {
        // The zero matrix: all eigenvalues zero.
        return Ok((wri, 0));
    }

    let mut total_its = 0usize;
    let mut t = 0.0;
    let mut nn = n - 1;
    'deflate: loop {
        let mut its = 0usize;
        loop {
            // Look for a negligible subdiagonal element: split at l.
            let mut l = nn;
            while l >= 1 {
                let mut s = h[(l - 1) * n + (l - 1)].abs() + h[l * n + l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h[l * n + (l - 1)].abs() <= f64::EPSILON * s {
                    h[l * n + (l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = h[nn * n + nn];
            if l == nn {
                // One real eigenvalue deflated.
                wri[nn] = Complex64::new(x + t, 0.0);
                if nn == 0 {
                    break 'deflate;
                }
                nn -= 1;
                break;
            }
            let mut y = h[(nn - 1) * n + (nn - 1)];
            let mut w = h[nn * n + (nn - 1)] * h[(nn - 1) * n + nn];
            if l == nn - 1 {
                // A trailing 2x2 block deflates into two eigenvalues.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let first = x + z;
                    let second = if z != 0.0 { x - w / z } else { first };
                    wri[nn - 1] = Complex64::new(first, 0.0);
                    wri[nn] = Complex64::new(second, 0.0);
                } else {
                    // Exact conjugates by construction.
                    wri[nn] = Complex64::new(x + p, -z);
                    wri[nn - 1] = Complex64::new(x + p, z);
                }
                if nn == 1 {
                    break 'deflate;
                }
                nn -= 2;
                break;
            }

            // No deflation: run one double-shift sweep on rows l..=nn.
            if its == 30 || total_its >= budget {
                return Err(EigError::NotConverged {
                    iterations: total_its,
                });
            }
            if its == 10 || its == 20 {
                // Exceptional shift to break symmetry-induced stalls.
                t += x;
                for i in 0..=nn {
                    h[i * n + i] -= x;
                }
                let s = h[nn * n + (nn - 1)].abs() + h[(nn - 1) * n + (nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total_its += 1;

            // Find two consecutive small subdiagonals to start the sweep at.
            let (mut p, mut q, mut r);
            let mut m = nn - 2;
            loop {
                let z = h[m * n + m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(m + 1) * n + m] + h[m * n + (m + 1)];
                q = h[(m + 1) * n + (m + 1)] - z - rr - ss;
                r = h[(m + 2) * n + (m + 1)];
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let u = h[m * n + (m - 1)].abs() * (q.abs() + r.abs());
                let v = z.abs() * (p.abs() + h[(m + 1) * n + (m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m..=nn - 2 {
                h[(i + 2) * n + i] = 0.0;
                if i != m {
                    h[(i + 2) * n + (i - 1)] = 0.0;
                }
            }

            // Double QR step: chase the bulge from row m down to nn-1.
            for k in m..nn {
                if k != m {
                    p = h[k * n + (k - 1)];
                    q = h[(k + 1) * n + (k - 1)];
                    r = if k != nn - 1 {
                        h[(k + 2) * n + (k - 1)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        h[k * n + (k - 1)] = -h[k * n + (k - 1)];
                    }
                } else {
                    h[k * n + (k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    let mut pj = h[k * n + j] + q * h[(k + 1) * n + j];
                    if k != nn - 1 {
                        pj += r * h[(k + 2) * n + j];
                        h[(k + 2) * n + j] -= pj * z;
                    }
                    h[(k + 1) * n + j] -= pj * y;
                    h[k * n + j] -= pj * x;
                }
                let upper = if nn < k + 3 { nn } else { k + 3 };
                for i in l..=upper {
                    let mut pi = x * h[i * n + k] + y * h[i * n + (k + 1)];
                    if k != nn - 1 {
                        pi += z * h[i * n + (k + 2)];
                        h[i * n + (k + 2)] -= pi * r;
                    }
                    h[i * n + (k + 1)] -= pi * q;
                    h[i * n + k] -= pi;
                }
            }
        }
    }
    Ok((wri, total_its))
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// algorithm with potentials, O(n^3)); returns the column assigned to each
/// row.
pub(crate) fn min_cost_assignment(cost: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(cost.len(), n * n);
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// One labeled eigenvalue at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SweepRow {
    pub alpha0: f64,
    /// Signed branch index whose unperturbed value this eigenvalue tracks.
    pub branch_label: i32,
    pub re_lambda: f64,
    pub im_lambda: f64,
}

/// A labeled spectral sweep over a grid of mean field strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Signed basis indices, in basis (row) order.
    pub basis_indices: Vec<i32>,
    /// `grid.len() * basis.len()` rows, grid-major, basis order within a
    /// grid point.
    pub rows: Vec<SweepRow>,
    /// Human-readable notes where labels may be unreliable because an
    /// eigenvalue moved further than half its distance to its nearest
    /// neighbor.
    pub warnings: Vec<String>,
}

/// Errors from a spectral sweep.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("eigenvalue solve failed at alpha0={alpha0}: {source}")]
    SolveFailed { alpha0: f64, source: EigError },
    #[error(transparent)]
    Galerkin(#[from] GalerkinError),
}

const MAX_WARNINGS: usize = 200;

/// Sweep the operator spectrum over `grid` values of `alpha0`, holding the
/// perturbation `epsilon_scale * phi` fixed.  Eigenvalue labels follow the
/// unperturbed branches at the first grid point and are propagated between
/// consecutive points by minimum-cost assignment, so level crossings and
/// complex collisions keep coherent labels.
///
/// With the `parallel` feature (default) the per-point diagonalizations run
/// on the rayon thread pool; the labeling pass is sequential either way.
pub fn sweep(
    basis: &GalerkinBasis,
    shape: &ProfileShape,
    epsilon_scale: f64,
    grid: &[f64],
) -> Result<SweepTable, SweepError> {
    let base = assemble_base(basis, shape, epsilon_scale)?;
    #[cfg(feature = "parallel")]
    let spectra: Result<Vec<Spectrum>, SweepError> = grid
        .par_iter()
        .map(|&a0| solve_at(&base, a0))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let spectra: Result<Vec<Spectrum>, SweepError> =
        grid.iter().map(|&a0| solve_at(&base, a0)).collect();
    label_spectra(basis, grid, spectra?)
}

/// [`sweep`] with the per-point solves forced onto the current thread;
/// useful as a baseline and where determinism of thread scheduling matters.
pub fn sweep_serial(
    basis: &GalerkinBasis,
    shape: &ProfileShape,
    epsilon_scale: f64,
    grid: &[f64],
) -> Result<SweepTable, SweepError> {
    let base = assemble_base(basis, shape, epsilon_scale)?;
    let spectra: Result<Vec<Spectrum>, SweepError> =
        grid.iter().map(|&a0| solve_at(&base, a0)).collect();
    label_spectra(basis, grid, spectra?)
}

fn assemble_base(
    basis: &GalerkinBasis,
    shape: &ProfileShape,
    epsilon_scale: f64,
) -> Result<GalerkinMatrix, SweepError> {
    let profile = AlphaProfile {
        alpha0: 0.0,
        epsilon_scale,
        shape: shape.clone(),
    };
    Ok(assemble(basis, &profile)?)
}

fn solve_at(base: &GalerkinMatrix, alpha0: f64) -> Result<Spectrum, SweepError> {
    let entries = base.entries_at_alpha0(alpha0);
    eigenvalues(&entries, base.n()).map_err(|source| SweepError::SolveFailed { alpha0, source })
}

fn label_spectra(
    basis: &GalerkinBasis,
    grid: &[f64],
    spectra: Vec<Spectrum>,
) -> Result<SweepTable, SweepError> {
    let n = basis.len();
    let basis_indices: Vec<i32> = basis.indices().iter().map(|b| b.signed()).collect();
    let mut rows = Vec::with_capacity(grid.len() * n);
    let mut warnings = Vec::new();
    let mut suppressed = 0usize;

    // Reference values for the first grid point are the unperturbed
    // branches, and the extrapolation history is seeded with their values
    // one grid step earlier: at a degenerate start (all +-n pairs cross at
    // alpha0 = 0) the positions are ambiguous but the slopes
    // `eps_n sqrt(rho_n)` are not.
    let branch_reference = |alpha0: f64| -> Result<Vec<Complex64>, SweepError> {
        basis
            .indices()
            .iter()
            .map(|b| {
                crate::mesh::branch_eigenvalue(basis.l(), *b, alpha0)
                    .map(|v| Complex64::new(v, 0.0))
                    .map_err(|e| SweepError::Galerkin(GalerkinError::Specfun(e)))
            })
            .collect()
    };
    let mut previous: Vec<Complex64> = match grid.first() {
        Some(&first) => branch_reference(first)?,
        None => Vec::new(),
    };
    let mut step_before = if grid.len() >= 2 {
        grid[1] - grid[0]
    } else {
        1.0
    };
    let mut older: Vec<Complex64> = match grid.first() {
        Some(&first) => branch_reference(first - step_before)?,
        None => Vec::new(),
    };

    for (point, (&alpha0, spectrum)) in grid.iter().zip(&spectra).enumerate() {
        let values = &spectrum.eigenvalues;
        // Match against linearly extrapolated positions: nearest-position
        // matching is ambiguous exactly at transversal crossings, while the
        // unperturbed branches (and locally, the perturbed ones) move
        // linearly in alpha0.
        let predicted: Vec<Complex64> = if point == 0 {
            previous.clone()
        } else {
            let h_new = grid[point] - grid[point - 1];
            let factor = if step_before != 0.0 {
                h_new / step_before
            } else {
                1.0
            };
            previous
                .iter()
                .zip(&older)
                .map(|(cur, old)| cur + (cur - old) * factor)
                .collect()
        };
        let mut cost = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                cost[i * n + j] = (predicted[i] - values[j]).norm();
            }
        }
        let assignment = min_cost_assignment(&cost, n);
        let mut current = vec![Complex64::new(0.0, 0.0); n];
        for (slot, &j) in assignment.iter().enumerate() {
            current[slot] = values[j];
        }

        if point > 0 {
            for slot in 0..n {
                let moved = (current[slot] - previous[slot]).norm();
                let local_gap = (0..n)
                    .filter(|&other| other != slot)
                    .map(|other| (previous[slot] - previous[other]).norm())
                    .fold(f64::INFINITY, f64::min);
                if moved > 0.5 * local_gap {
                    if warnings.len() < MAX_WARNINGS {
                        warnings.push(format!(
                            "alpha0={alpha0}: branch {} moved {moved:.3e}, more than half its nearest-neighbor gap {local_gap:.3e}; label continuity is uncertain here",
                            basis_indices[slot],
                        ));
                    } else {
                        suppressed += 1;
                    }
                }
            }
        }

        for slot in 0..n {
            rows.push(SweepRow {
                alpha0,
                branch_label: basis_indices[slot],
                re_lambda: current[slot].re,
                im_lambda: current[slot].im,
            });
        }
        if point > 0 {
            step_before = grid[point] - grid[point - 1];
            older = std::mem::replace(&mut previous, current);
        } else {
            // Keep the seeded pre-grid reference as the older state so the
            // first real step still extrapolates along the branch slopes.
            previous = current;
        }
    }
    if suppressed > 0 {
        warnings.push(format!("{suppressed} further label warnings suppressed"));
    }

    Ok(SweepTable {
        basis_indices,
        rows,
        warnings,
    })
}
