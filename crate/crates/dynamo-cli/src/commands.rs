//! Command implementations.  Each command renders its complete output as a
//! string (CSV with `\n` line endings or pretty JSON), so the same code path
//! serves fresh runs and manifest reruns, and byte-identical reproduction is
//! a structural property rather than a convention.

use crate::manifest::ResolvedCommand;
use crate::CliError;
use dynamo_core::{
    branch_eigenvalue, critical_profile_residual_l0, enumerate_dps, q_factor, sweep, unfold_dp,
    BranchId, Complex64, DiabolicalPoint, GalerkinBasis, MeshError, ProfileShape, Regime,
};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Output bytes plus warnings destined for stderr (never part of the bytes).
pub struct CommandOutput {
    pub bytes: String,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    fn new(bytes: String) -> Self {
        Self {
            bytes,
            warnings: Vec::new(),
        }
    }
}

pub fn execute(command: &ResolvedCommand) -> Result<CommandOutput, CliError> {
    match command {
        ResolvedCommand::Mesh {
            l,
            n_max,
            alpha0_min,
            alpha0_max,
            steps,
        } => cmd_mesh(*l, *n_max, *alpha0_min, *alpha0_max, *steps),
        ResolvedCommand::Dps {
            l,
            n_max,
            alpha0_min,
            alpha0_max,
            lambda_min,
            lambda_max,
        } => cmd_dps(
            *l,
            *n_max,
            (*alpha0_min, *alpha0_max),
            (*lambda_min, *lambda_max),
        ),
        ResolvedCommand::Unfold {
            l,
            branch_a,
            branch_b,
            profile,
        } => cmd_unfold(*l, *branch_a, *branch_b, profile),
        ResolvedCommand::Sweep {
            l,
            window,
            alpha0_min,
            alpha0_max,
            steps,
            profile,
        } => cmd_sweep(*l, *window, *alpha0_min, *alpha0_max, *steps, profile),
        ResolvedCommand::Critical { j_max, profile } => cmd_critical(*j_max, profile),
    }
}

/// `steps` grid points from `min` to `max` inclusive; `steps = 0` is an
/// empty grid and `steps = 1` degenerates to the left endpoint.
fn linear_grid(min: f64, max: f64, steps: u32) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps)
            .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

fn check_range(min: f64, max: f64, steps: u32, what: &str) -> Result<(), CliError> {
    if !min.is_finite() || !max.is_finite() {
        return Err(CliError::Config(format!("{what} range must be finite")));
    }
    if steps >= 2 && min > max {
        return Err(CliError::Config(format!(
            "{what} range is inverted: {min} > {max}"
        )));
    }
    Ok(())
}

fn cmd_mesh(
    l: u32,
    n_max: u32,
    alpha0_min: f64,
    alpha0_max: f64,
    steps: u32,
) -> Result<CommandOutput, CliError> {
    check_range(alpha0_min, alpha0_max, steps, "alpha0")?;
    let mut out = String::from("alpha0,branch_n,re_lambda,im_lambda\n");
    // Branch order matches the symmetric Galerkin window: +n_max..+1, then
    // -1..-n_max.
    let branches: Vec<i32> = (1..=n_max as i32)
        .rev()
        .chain((1..=n_max as i32).map(|n| -n))
        .collect();
    for alpha0 in linear_grid(alpha0_min, alpha0_max, steps) {
        for &n in &branches {
            let lambda = branch_eigenvalue(l, BranchId::new(n), alpha0)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            writeln!(out, "{alpha0},{n},{lambda},0").unwrap();
        }
    }
    Ok(CommandOutput::new(out))
}

fn cmd_dps(
    l: u32,
    n_max: u32,
    alpha0_range: (f64, f64),
    lambda_range: (f64, f64),
) -> Result<CommandOutput, CliError> {
    if n_max < 2 {
        return Err(CliError::Config(
            "crossing enumeration needs n_max >= 2".to_string(),
        ));
    }
    for v in [
        alpha0_range.0,
        alpha0_range.1,
        lambda_range.0,
        lambda_range.1,
    ] {
        if !v.is_finite() {
            return Err(CliError::Config("window bounds must be finite".to_string()));
        }
    }
    let mut out = String::from("alpha0,lambda,n_a,n_b,same_type,j,M\n");
    let dps = enumerate_dps(l, n_max, alpha0_range, lambda_range)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    for dp in dps {
        let j = dp.parabola_index.map_or(String::new(), |v| v.to_string());
        let m = dp.line_index.map_or(String::new(), |v| v.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            dp.alpha0_node,
            dp.lambda_node,
            dp.branch_a.signed(),
            dp.branch_b.signed(),
            dp.same_type,
            j,
            m
        )
        .unwrap();
    }
    Ok(CommandOutput::new(out))
}

/// Complex number as a JSON object with snake_case-friendly keys.
#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct UnfoldReport {
    l: u32,
    branch_a: i32,
    branch_b: i32,
    same_type: bool,
    parabola_index: Option<i32>,
    line_index: Option<i32>,
    alpha0_node: f64,
    lambda_node: f64,
    epsilon_scale: f64,
    regime: Regime,
    lambda1_plus: ComplexJson,
    lambda1_minus: ComplexJson,
    eigenvalue_plus: ComplexJson,
    eigenvalue_minus: ComplexJson,
    ray_ratio_plus: Option<ComplexJson>,
    ray_ratio_minus: Option<ComplexJson>,
}

pub fn resolve_dp(l: u32, branch_a: i32, branch_b: i32) -> Result<DiabolicalPoint, CliError> {
    if branch_a == 0 || branch_b == 0 {
        return Err(CliError::Config(
            "branch indices must be nonzero".to_string(),
        ));
    }
    DiabolicalPoint::from_branches(l, BranchId::new(branch_a), BranchId::new(branch_b)).map_err(
        |e| match e {
            MeshError::Specfun(inner) => CliError::Numerical(inner.to_string()),
            other => CliError::Config(other.to_string()),
        },
    )
}

fn cmd_unfold(
    l: u32,
    branch_a: i32,
    branch_b: i32,
    profile: &crate::config::ProfileConfig,
) -> Result<CommandOutput, CliError> {
    let dp = resolve_dp(l, branch_a, branch_b)?;
    let shape = profile.shape().map_err(CliError::Config)?;
    let result = unfold_dp(&dp, &shape, profile.epsilon_scale)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let report = UnfoldReport {
        l,
        branch_a: dp.branch_a.signed(),
        branch_b: dp.branch_b.signed(),
        same_type: dp.same_type,
        parabola_index: dp.parabola_index,
        line_index: dp.line_index,
        alpha0_node: dp.alpha0_node,
        lambda_node: dp.lambda_node,
        epsilon_scale: profile.epsilon_scale,
        regime: result.regime,
        lambda1_plus: result.lambda1_plus.into(),
        lambda1_minus: result.lambda1_minus.into(),
        eigenvalue_plus: result.eigenvalue_plus.into(),
        eigenvalue_minus: result.eigenvalue_minus.into(),
        ray_ratio_plus: result.ray_ratio_plus.map(Into::into),
        ray_ratio_minus: result.ray_ratio_minus.map(Into::into),
    };
    let mut bytes = serde_json::to_string_pretty(&report).expect("report serializes");
    bytes.push('\n');
    Ok(CommandOutput::new(bytes))
}

fn cmd_sweep(
    l: u32,
    window: u32,
    alpha0_min: f64,
    alpha0_max: f64,
    steps: u32,
    profile: &crate::config::ProfileConfig,
) -> Result<CommandOutput, CliError> {
    if window < 2 || !window.is_multiple_of(2) {
        return Err(CliError::Config(format!(
            "window must be a positive even basis size, got {window}"
        )));
    }
    check_range(alpha0_min, alpha0_max, steps, "alpha0")?;
    let basis = GalerkinBasis::symmetric_window(l, window / 2)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let shape = profile.shape().map_err(CliError::Config)?;
    let grid = linear_grid(alpha0_min, alpha0_max, steps);
    let mut out = String::from("alpha0,branch_label,re_lambda,im_lambda\n");
    let mut warnings = Vec::new();
    if !grid.is_empty() {
        let table = sweep(&basis, &shape, profile.epsilon_scale, &grid)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        for row in &table.rows {
            writeln!(
                out,
                "{},{},{},{}",
                row.alpha0, row.branch_label, row.re_lambda, row.im_lambda
            )
            .unwrap();
        }
        warnings = table.warnings;
    }
    Ok(CommandOutput {
        bytes: out,
        warnings,
    })
}

#[derive(Serialize)]
struct CriticalEntry {
    /// Parabola index (positive representative; the report is symmetric in
    /// the sign of `j`).
    j: u32,
    /// Line index of the node, `m >= 0`; the mirror node at `-m` has the
    /// same residual under `a0 -> -a0`.
    m: u32,
    /// Resonance factor of the (epsilon-scaled) perturbation on parabola `j`.
    q_j: f64,
    /// First-order real part at the top of the node's instability bubble; a
    /// positive value flags a candidate overcritical oscillatory regime.
    residual: f64,
    overcritical: bool,
    /// |Q_j| at which the residual crosses zero (absent for `m = 0`, where
    /// the bubble top stays at the node height).
    critical_q: Option<f64>,
    /// Factor by which the perturbation amplitude must grow to reach
    /// `critical_q` (absent when `q_j = 0` or `m = 0`).
    scale_to_critical: Option<f64>,
}

#[derive(Serialize)]
struct CriticalReport {
    l: u32,
    j_max: u32,
    epsilon_scale: f64,
    any_overcritical: bool,
    entries: Vec<CriticalEntry>,
}

fn cmd_critical(
    j_max: u32,
    profile: &crate::config::ProfileConfig,
) -> Result<CommandOutput, CliError> {
    if j_max < 2 {
        return Err(CliError::Config(
            "critical scan needs j_max >= 2".to_string(),
        ));
    }
    let shape = profile.shape().map_err(CliError::Config)?;
    let ProfileShape::Fourier(spectrum) = shape else {
        return Err(CliError::Config(
            "critical estimates need a harmonic profile; sampled profiles are not supported"
                .to_string(),
        ));
    };
    let scaled = spectrum.scaled(profile.epsilon_scale);
    let mut entries = Vec::new();
    for j in 2..=j_max as i32 {
        // Normalize -0.0 (e.g. from an empty harmonic sum) for reporting.
        let q_j = q_factor(&scaled, j);
        let q_j = if q_j == 0.0 { 0.0 } else { q_j };
        let m_start = if j % 2 == 0 { 0 } else { 1 };
        for m in (m_start..=j - 2).step_by(2) {
            let residual = critical_profile_residual_l0(m, j, q_j)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let critical_q = (m > 0)
                .then(|| PI * j as f64 * ((j * j - m * m) as f64).sqrt() / m as f64);
            let scale_to_critical =
                critical_q.and_then(|qc| (q_j != 0.0).then(|| qc / q_j.abs()));
            entries.push(CriticalEntry {
                j: j as u32,
                m: m as u32,
                q_j,
                residual,
                overcritical: residual > 0.0,
                critical_q,
                scale_to_critical,
            });
        }
    }
    let report = CriticalReport {
        l: 0,
        j_max,
        epsilon_scale: profile.epsilon_scale,
        any_overcritical: entries.iter().any(|e| e.overcritical),
        entries,
    };
    let mut bytes = serde_json::to_string_pretty(&report).expect("report serializes");
    bytes.push('\n');
    Ok(CommandOutput::new(bytes))
}
