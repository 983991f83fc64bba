//! Local identification analysis: structural→reduced-form maps, their
//! finite-difference Jacobians, singular-value rank reports, and profile
//! likelihood surfaces over non-identified parameter regions.
//!
//! Identification is assessed locally (Jacobian rank at a point).
//! Discrete symmetries such as the AR(2) `λ ↔ ρ` swap are invisible to
//! any local rank computation; those are reported separately by
//! `equivalence::ar2_factorizations`. The two diagnostics complement
//! each other and neither subsumes the other.

use thiserror::Error;

use crate::algebra::{svd, AlgebraError, Matrix};
use crate::catalog::{self, CatalogEntry, CatalogError};
use crate::montecarlo::{self, MonteCarloError};
use crate::remodel::{
    solve, ModelParts, RemodelError, SolvedModel, StructuralREModel,
};

/// Relative singular-value threshold for rank decisions.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// Singular values within this factor of the threshold (either side)
/// raise a weak-identification warning instead of a clean rank call.
pub const WEAK_FACTOR: f64 = 100.0;
/// Log-likelihood window defining the ridge of a profile surface.
pub const RIDGE_TOL: f64 = 0.01;

#[derive(Debug, Clone, Error)]
pub enum IdentificationError {
    #[error("map undefined around theta0: coordinate {index} failed after {retries} step shrinks")]
    MapUndefinedAtPerturbation { index: usize, retries: usize },
    #[error("invalid evaluation point: {0}")]
    InvalidTheta(String),
    #[error("no admissible grid point in the profile region")]
    EmptyAdmissibleGrid,
    #[error("profile grid must have exactly two axes, got {0}")]
    GridShape(usize),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    MonteCarlo(#[from] MonteCarloError),
    #[error(transparent)]
    Remodel(#[from] RemodelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// What to analyse: a catalog family at its parameter point, the toy
/// regression with slope `2a + b` (optionally with the identifying
/// restriction fixing `b`), or a structural model file whose parameter
/// vector is its raw matrix entries.
#[derive(Debug, Clone)]
pub enum IdentTarget {
    Catalog(CatalogEntry),
    Toy { a: f64, b: f64 },
    ToyRestricted { a: f64, b_fixed: f64 },
    Model(StructuralREModel),
}

impl IdentTarget {
    pub fn param_names(&self) -> Vec<String> {
        match self {
            IdentTarget::Catalog(entry) => {
                entry.param_names().iter().map(|s| s.to_string()).collect()
            }
            IdentTarget::Toy { .. } => vec!["a".into(), "b".into()],
            IdentTarget::ToyRestricted { .. } => vec!["a".into()],
            IdentTarget::Model(model) => model_param_names(model),
        }
    }

    pub fn theta0(&self) -> Vec<f64> {
        match self {
            IdentTarget::Catalog(entry) => entry.params(),
            IdentTarget::Toy { a, b } => vec![*a, *b],
            IdentTarget::ToyRestricted { a, .. } => vec![*a],
            IdentTarget::Model(model) => model_theta(model),
        }
    }
}

/// Evaluates the structural→reduced-form map of a target at `theta`.
///
/// Catalog entries map to `(AR coefficients…, innovation sd)`; the toy
/// maps to its slope; structural models map to
/// `(vec C, vec G1, vec G2, vech of the observed innovation covariance)`
/// through the solver.
pub fn reduced_map_at(target: &IdentTarget, theta: &[f64]) -> Result<Vec<f64>, IdentificationError> {
    match target {
        IdentTarget::Catalog(entry) => {
            let at = entry
                .with_params(theta)
                .ok_or_else(|| IdentificationError::InvalidTheta("wrong length".into()))?;
            let reduced = catalog::reduce(&at)?;
            let mut out = reduced.coefficients.clone();
            out.push(reduced.innovation_variance.sqrt());
            Ok(out)
        }
        IdentTarget::Toy { .. } => {
            if theta.len() != 2 {
                return Err(IdentificationError::InvalidTheta("wrong length".into()));
            }
            Ok(vec![2.0 * theta[0] + theta[1]])
        }
        IdentTarget::ToyRestricted { b_fixed, .. } => {
            if theta.len() != 1 {
                return Err(IdentificationError::InvalidTheta("wrong length".into()));
            }
            Ok(vec![2.0 * theta[0] + b_fixed])
        }
        IdentTarget::Model(model) => {
            let rebuilt = model_from_theta(model, theta)?;
            let solved = solve(&rebuilt)?;
            Ok(reduced_vector_of_solution(&rebuilt, &solved)?)
        }
    }
}

fn model_param_names(model: &StructuralREModel) -> Vec<String> {
    let n = model.n();
    let k = model.k();
    let mut names = Vec::new();
    let mut block = |label: &str, rows: usize, cols: usize, names: &mut Vec<String>| {
        for i in 0..rows {
            for j in 0..cols {
                names.push(format!("{label}[{i},{j}]"));
            }
        }
    };
    block("A0", n, n, &mut names);
    block("A1", n, n, &mut names);
    block("A2", n, n, &mut names);
    block("A3", n, k, &mut names);
    block("Phi_x", k, k, &mut names);
    block("Phi_u", n, n, &mut names);
    for i in 0..n {
        for j in 0..=i {
            names.push(format!("Sigma_eps[{i},{j}]"));
        }
    }
    for i in 0..k {
        for j in 0..=i {
            names.push(format!("Sigma_v[{i},{j}]"));
        }
    }
    names
}

fn model_theta(model: &StructuralREModel) -> Vec<f64> {
    let mut theta = Vec::new();
    for m in [model.a0(), model.a1(), model.a2(), model.a3(), model.phi_x(), model.phi_u()] {
        theta.extend_from_slice(m.data());
    }
    for m in [model.sigma_eps(), model.sigma_v()] {
        for i in 0..m.rows() {
            for j in 0..=i {
                theta.push(m[(i, j)]);
            }
        }
    }
    theta
}

fn model_from_theta(
    template: &StructuralREModel,
    theta: &[f64],
) -> Result<StructuralREModel, IdentificationError> {
    let n = template.n();
    let k = template.k();
    let counts = [n * n, n * n, n * n, n * k, k * k, n * n];
    let sym_counts = [n * (n + 1) / 2, k * (k + 1) / 2];
    let expected: usize = counts.iter().sum::<usize>() + sym_counts.iter().sum::<usize>();
    if theta.len() != expected {
        return Err(IdentificationError::InvalidTheta(format!(
            "expected {expected} entries, got {}",
            theta.len()
        )));
    }
    let mut cursor = 0usize;
    let mut take = |rows: usize, cols: usize| -> Matrix {
        let data = theta[cursor..cursor + rows * cols].to_vec();
        cursor += rows * cols;
        Matrix::new(rows, cols, data).expect("finite slice")
    };
    let a0 = take(n, n);
    let a1 = take(n, n);
    let a2 = take(n, n);
    let a3 = take(n, k);
    let phi_x = take(k, k);
    let phi_u = take(n, n);
    let mut take_sym = |dim: usize| -> Matrix {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..=i {
                m[(i, j)] = theta[cursor];
                m[(j, i)] = theta[cursor];
                cursor += 1;
            }
        }
        m
    };
    let sigma_eps = take_sym(n);
    let sigma_v = take_sym(k);
    StructuralREModel::new(ModelParts {
        a0,
        a1,
        a2,
        a3,
        phi_x,
        phi_u,
        sigma_eps,
        sigma_v,
        forward: template.forward_flags().to_vec(),
        variable_names: template.variable_names().to_vec(),
        sunspot_variance: template.sunspot_variance(),
    })
    .map_err(IdentificationError::from)
}

fn reduced_vector_of_solution(
    model: &StructuralREModel,
    solved: &SolvedModel,
) -> Result<Vec<f64>, IdentificationError> {
    let mut out = Vec::new();
    out.extend_from_slice(solved.c.data());
    out.extend_from_slice(solved.g1.data());
    out.extend_from_slice(solved.g2.data());
    // One-step innovation of the observed block: G1·v + G2·ε.
    let cov = solved
        .g1
        .matmul(&model.sigma_v().matmul(&solved.g1.transpose())?)?
        .add(
            &solved
                .g2
                .matmul(&model.sigma_eps().matmul(&solved.g2.transpose())?)?,
        )?;
    for i in 0..cov.rows() {
        for j in 0..=i {
            out.push(cov[(i, j)]);
        }
    }
    Ok(out)
}

/// Central-difference Jacobian with per-coordinate step
/// `h_i = 1e-6 · max(1, |θ_i|)`. A coordinate whose perturbation leaves
/// the admissible region shrinks its step tenfold up to three times
/// before failing.
pub fn jacobian_fd<F>(map: F, theta0: &[f64]) -> Result<Matrix, IdentificationError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, IdentificationError>,
{
    let f0 = map(theta0)?;
    let out_dim = f0.len();
    let mut jac = Matrix::zeros(out_dim, theta0.len());
    for i in 0..theta0.len() {
        let mut h = 1e-6 * theta0[i].abs().max(1.0);
        let mut filled = false;
        for _ in 0..4 {
            let mut plus = theta0.to_vec();
            let mut minus = theta0.to_vec();
            plus[i] += h;
            minus[i] -= h;
            match (map(&plus), map(&minus)) {
                (Ok(fp), Ok(fm)) if fp.len() == out_dim && fm.len() == out_dim => {
                    let mut ok = true;
                    for r in 0..out_dim {
                        let d = (fp[r] - fm[r]) / (2.0 * h);
                        if !d.is_finite() {
                            ok = false;
                            break;
                        }
                        jac[(r, i)] = d;
                    }
                    if ok {
                        filled = true;
                        break;
                    }
                    h /= 10.0;
                }
                _ => h /= 10.0,
            }
        }
        if !filled {
            return Err(IdentificationError::MapUndefinedAtPerturbation { index: i, retries: 3 });
        }
    }
    Ok(jac)
}

/// Rank analysis of the structural→reduced-form map at a point.
#[derive(Debug, Clone)]
pub struct IdentificationReport {
    pub param_names: Vec<String>,
    pub theta0: Vec<f64>,
    pub jacobian: Matrix,
    /// Descending singular values of the Jacobian.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// Columns spanning the numerical null space (orthonormal).
    pub null_basis: Matrix,
    /// `rank == theta0.len()`.
    pub identified: bool,
    /// Some singular value sits within [`WEAK_FACTOR`] of the rank
    /// threshold: the rank call is fragile and reported as such.
    pub weak: bool,
}

pub fn rank_report(target: &IdentTarget) -> Result<IdentificationReport, IdentificationError> {
    let theta0 = target.theta0();
    rank_report_at(target, &theta0)
}

pub fn rank_report_at(
    target: &IdentTarget,
    theta0: &[f64],
) -> Result<IdentificationReport, IdentificationError> {
    let names = target.param_names();
    if names.len() != theta0.len() {
        return Err(IdentificationError::InvalidTheta(format!(
            "expected {} parameters, got {}",
            names.len(),
            theta0.len()
        )));
    }
    let jacobian = jacobian_fd(|t| reduced_map_at(target, t), theta0)?;
    rank_report_for_jacobian(names, theta0.to_vec(), jacobian)
}

/// Rank report from a caller-supplied map; the library form behind
/// structured parameterisations that the enum targets cannot express.
pub fn rank_report_for_map<F>(
    map: F,
    names: Vec<String>,
    theta0: &[f64],
) -> Result<IdentificationReport, IdentificationError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, IdentificationError>,
{
    let jacobian = jacobian_fd(map, theta0)?;
    rank_report_for_jacobian(names, theta0.to_vec(), jacobian)
}

fn rank_report_for_jacobian(
    param_names: Vec<String>,
    theta0: Vec<f64>,
    jacobian: Matrix,
) -> Result<IdentificationReport, IdentificationError> {
    let dec = svd(&jacobian)?;
    let sigma_max = dec.singular_values.first().copied().unwrap_or(0.0);
    let threshold = RANK_THRESHOLD * sigma_max;
    let rank = if sigma_max == 0.0 {
        0
    } else {
        dec.singular_values.iter().filter(|s| **s >= threshold).count()
    };
    let weak = sigma_max > 0.0
        && dec.singular_values.iter().any(|s| {
            *s > 0.0 && *s >= threshold / WEAK_FACTOR && *s < threshold * WEAK_FACTOR
        });
    let n_params = theta0.len();
    let null_count = n_params - rank;
    let mut null_basis = Matrix::zeros(n_params, null_count);
    for (out_col, in_col) in (rank..n_params).enumerate() {
        for i in 0..n_params {
            null_basis[(i, out_col)] = dec.right_vectors[(i, in_col)];
        }
    }
    Ok(IdentificationReport {
        identified: rank == n_params,
        param_names,
        theta0,
        jacobian,
        singular_values: dec.singular_values,
        rank,
        null_basis,
        weak,
    })
}

/// Families with a two-axis profile-likelihood parameterisation.
#[derive(Debug, Clone, Copy)]
pub enum ProfileFamily {
    /// Hybrid model over `(β, b)`; the innovation variance is
    /// concentrated out at its conditional maximum, so the surface
    /// depends on the data only through the implied autocorrelation
    /// `μ(β, b)` and is exactly flat along its level sets.
    HybridWeights,
    /// Backward AR(1) over `(λ, σ)` with the scale an explicit axis.
    BackwardAr1,
}

#[derive(Debug, Clone)]
pub struct ProfilePoint {
    pub coords: Vec<f64>,
    pub loglik: f64,
    /// Within [`RIDGE_TOL`] log-units of the surface maximum.
    pub ridge: bool,
}

#[derive(Debug, Clone)]
pub struct ProfileSurface {
    pub grid_axes: Vec<Vec<f64>>,
    /// Admissible grid points only.
    pub points: Vec<ProfilePoint>,
    pub max_loglik: f64,
    pub ridge_tol: f64,
}

impl ProfileSurface {
    pub fn ridge_points(&self) -> impl Iterator<Item = &ProfilePoint> {
        self.points.iter().filter(|p| p.ridge)
    }
}

/// Conditional Gaussian profile log-likelihood over a two-axis grid.
pub fn profile_likelihood(
    data: &[f64],
    family: ProfileFamily,
    grid_axes: &[Vec<f64>],
) -> Result<ProfileSurface, IdentificationError> {
    if grid_axes.len() != 2 {
        return Err(IdentificationError::GridShape(grid_axes.len()));
    }
    let mut evaluated: Vec<(Vec<f64>, f64)> = Vec::new();
    for &first in &grid_axes[0] {
        for &second in &grid_axes[1] {
            let ll = match family {
                ProfileFamily::HybridWeights => hybrid_profile_loglik(data, first, second),
                ProfileFamily::BackwardAr1 => backward_ar1_loglik(data, first, second),
            };
            if let Some(ll) = ll {
                evaluated.push((vec![first, second], ll));
            }
        }
    }
    if evaluated.is_empty() {
        return Err(IdentificationError::EmptyAdmissibleGrid);
    }
    let max_loglik = evaluated
        .iter()
        .map(|(_, ll)| *ll)
        .fold(f64::NEG_INFINITY, f64::max);
    let points = evaluated
        .into_iter()
        .map(|(coords, loglik)| ProfilePoint {
            coords,
            loglik,
            ridge: loglik >= max_loglik - RIDGE_TOL,
        })
        .collect();
    Ok(ProfileSurface {
        grid_axes: grid_axes.to_vec(),
        points,
        max_loglik,
        ridge_tol: RIDGE_TOL,
    })
}

fn hybrid_profile_loglik(data: &[f64], beta: f64, b: f64) -> Option<f64> {
    if !(beta > 0.0 && beta < 1.0 && b > 0.0 && b < 1.0 - beta) {
        return None;
    }
    let (mu, _) = catalog::hybrid_roots(beta, b).ok()?;
    if data.len() < 12 {
        return None;
    }
    let t_eff = (data.len() - 1) as f64;
    let ssr: f64 = data
        .windows(2)
        .map(|w| {
            let resid = w[1] - mu * w[0];
            resid * resid
        })
        .sum();
    let sigma2 = ssr / t_eff;
    if sigma2 <= 0.0 {
        return None;
    }
    Some(-0.5 * t_eff * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0))
}

fn backward_ar1_loglik(data: &[f64], lambda: f64, sigma: f64) -> Option<f64> {
    if !(lambda > 0.0 && lambda < 1.0 && sigma > 0.0) {
        return None;
    }
    let process = catalog::ARProcess::new(vec![lambda], sigma * sigma, "profile").ok()?;
    montecarlo::loglik(data, &process).ok()
}
