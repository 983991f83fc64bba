//! Named persistence models and their canonical AR reduced forms.
//!
//! Eight scalar-inflation models serve as the workbench for every
//! equivalence and identification demonstration in the crate:
//!
//! - `MA1`: backward AR(1) inflation, coefficient `λ`.
//! - `MA2`: inflation equals a latent AR(1) disturbance, coefficient `ρ`.
//! - `MA3`: AR(2) inflation with white-noise disturbances.
//! - `MA4`: inflation equals a latent AR(2) disturbance.
//! - `MA5`: lagged dependent variable plus AR(1) disturbance.
//! - `MR1`: forward-looking inflation driven by an AR(1) cost-push term,
//!   `π_t = β·E_t(π_{t+1}) + u_t`.
//! - `MR2`: hybrid curve `π_t = β·E_t(π_{t+1}) + b·π_{t−1} + ε_t`.
//! - `MR3`: purely forward `π_t = a·E_t(π_{t+1})`, `|a| > 1`, whose
//!   stationary solutions ride on an extraneous sunspot innovation.
//!
//! `build` produces the exact structural matrix encoding; `reduce` maps
//! straight to the scalar AR form, deliberately bypassing the solver so
//! the two routes stay independent cross-checks of each other.

use thiserror::Error;

use crate::algebra::{classify_modulus, spectral_radius, Matrix, RootClass};
use crate::remodel::{
    autocovariances, RemodelError, SecondOrderRepresentation, StateSpaceForm, StructuralREModel,
};

#[derive(Debug, Clone, Error)]
pub enum CatalogError {
    #[error("parameter {param} out of range: requires {constraint}, got {value}")]
    ParamOutOfRange {
        param: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error("characteristic roots are complex: 4·b·β > 1 (common modulus {modulus})")]
    ComplexRoots { modulus: f64 },
    #[error("MR3 has no reduced form without a sunspot innovation scale")]
    SunspotVarianceRequired,
    #[error(transparent)]
    Remodel(#[from] RemodelError),
}

/// Identifier of a catalog family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogModelId {
    Ma1,
    Ma2,
    Ma3,
    Ma4,
    Ma5,
    Mr1,
    Mr2,
    Mr3,
}

impl CatalogModelId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogModelId::Ma1 => "MA1",
            CatalogModelId::Ma2 => "MA2",
            CatalogModelId::Ma3 => "MA3",
            CatalogModelId::Ma4 => "MA4",
            CatalogModelId::Ma5 => "MA5",
            CatalogModelId::Mr1 => "MR1",
            CatalogModelId::Mr2 => "MR2",
            CatalogModelId::Mr3 => "MR3",
        }
    }

    pub const ALL: [CatalogModelId; 8] = [
        CatalogModelId::Ma1,
        CatalogModelId::Ma2,
        CatalogModelId::Ma3,
        CatalogModelId::Ma4,
        CatalogModelId::Ma5,
        CatalogModelId::Mr1,
        CatalogModelId::Mr2,
        CatalogModelId::Mr3,
    ];
}

/// A catalog family with its structural parameters. `sigma` entries are
/// innovation standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogEntry {
    Ma1 { lambda: f64, sigma: f64 },
    Ma2 { rho: f64, sigma: f64 },
    Ma3 { lambda: f64, rho: f64, sigma: f64 },
    Ma4 { lambda: f64, rho: f64, sigma: f64 },
    Ma5 { lambda: f64, rho: f64, sigma: f64 },
    Mr1 { beta: f64, rho: f64, sigma: f64 },
    Mr2 { beta: f64, b: f64, sigma: f64 },
    Mr3 { a: f64, sigma_w: Option<f64> },
}

impl CatalogEntry {
    pub fn id(&self) -> CatalogModelId {
        match self {
            CatalogEntry::Ma1 { .. } => CatalogModelId::Ma1,
            CatalogEntry::Ma2 { .. } => CatalogModelId::Ma2,
            CatalogEntry::Ma3 { .. } => CatalogModelId::Ma3,
            CatalogEntry::Ma4 { .. } => CatalogModelId::Ma4,
            CatalogEntry::Ma5 { .. } => CatalogModelId::Ma5,
            CatalogEntry::Mr1 { .. } => CatalogModelId::Mr1,
            CatalogEntry::Mr2 { .. } => CatalogModelId::Mr2,
            CatalogEntry::Mr3 { .. } => CatalogModelId::Mr3,
        }
    }

    /// Structural parameter names in the canonical order used by the
    /// identification module.
    pub fn param_names(&self) -> Vec<&'static str> {
        match self {
            CatalogEntry::Ma1 { .. } => vec!["lambda", "sigma"],
            CatalogEntry::Ma2 { .. } => vec!["rho", "sigma"],
            CatalogEntry::Ma3 { .. } | CatalogEntry::Ma4 { .. } | CatalogEntry::Ma5 { .. } => {
                vec!["lambda", "rho", "sigma"]
            }
            CatalogEntry::Mr1 { .. } => vec!["beta", "rho", "sigma"],
            CatalogEntry::Mr2 { .. } => vec!["beta", "b", "sigma"],
            CatalogEntry::Mr3 { .. } => vec!["a", "sigma_w"],
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            CatalogEntry::Ma1 { lambda, sigma } => vec![*lambda, *sigma],
            CatalogEntry::Ma2 { rho, sigma } => vec![*rho, *sigma],
            CatalogEntry::Ma3 { lambda, rho, sigma }
            | CatalogEntry::Ma4 { lambda, rho, sigma }
            | CatalogEntry::Ma5 { lambda, rho, sigma } => vec![*lambda, *rho, *sigma],
            CatalogEntry::Mr1 { beta, rho, sigma } => vec![*beta, *rho, *sigma],
            CatalogEntry::Mr2 { beta, b, sigma } => vec![*beta, *b, *sigma],
            CatalogEntry::Mr3 { a, sigma_w } => vec![*a, sigma_w.unwrap_or(1.0)],
        }
    }

    pub fn structural_param_count(&self) -> usize {
        self.params().len()
    }

    /// Rebuilds the entry with a replacement parameter vector in the
    /// [`Self::param_names`] order.
    pub fn with_params(&self, theta: &[f64]) -> Option<CatalogEntry> {
        if theta.len() != self.structural_param_count() {
            return None;
        }
        Some(match self {
            CatalogEntry::Ma1 { .. } => CatalogEntry::Ma1 {
                lambda: theta[0],
                sigma: theta[1],
            },
            CatalogEntry::Ma2 { .. } => CatalogEntry::Ma2 {
                rho: theta[0],
                sigma: theta[1],
            },
            CatalogEntry::Ma3 { .. } => CatalogEntry::Ma3 {
                lambda: theta[0],
                rho: theta[1],
                sigma: theta[2],
            },
            CatalogEntry::Ma4 { .. } => CatalogEntry::Ma4 {
                lambda: theta[0],
                rho: theta[1],
                sigma: theta[2],
            },
            CatalogEntry::Ma5 { .. } => CatalogEntry::Ma5 {
                lambda: theta[0],
                rho: theta[1],
                sigma: theta[2],
            },
            CatalogEntry::Mr1 { .. } => CatalogEntry::Mr1 {
                beta: theta[0],
                rho: theta[1],
                sigma: theta[2],
            },
            CatalogEntry::Mr2 { .. } => CatalogEntry::Mr2 {
                beta: theta[0],
                b: theta[1],
                sigma: theta[2],
            },
            CatalogEntry::Mr3 { .. } => CatalogEntry::Mr3 {
                a: theta[0],
                sigma_w: Some(theta[1]),
            },
        })
    }

    pub fn label(&self) -> String {
        let names = self.param_names();
        let values = self.params();
        let args: Vec<String> = names
            .iter()
            .zip(&values)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        format!("{}({})", self.id().as_str(), args.join(", "))
    }
}

fn require(
    ok: bool,
    param: &'static str,
    constraint: &'static str,
    value: f64,
) -> Result<(), CatalogError> {
    if ok {
        Ok(())
    } else {
        Err(CatalogError::ParamOutOfRange {
            param,
            constraint,
            value,
        })
    }
}

fn in_open_unit(name: &'static str, v: f64) -> Result<(), CatalogError> {
    require(v > 0.0 && v < 1.0, name, "0 < value < 1", v)
}

fn positive(name: &'static str, v: f64) -> Result<(), CatalogError> {
    require(v > 0.0, name, "value > 0", v)
}

/// Validates the entry's parameter ranges.
pub fn validate(entry: &CatalogEntry) -> Result<(), CatalogError> {
    match entry {
        CatalogEntry::Ma1 { lambda, sigma } => {
            in_open_unit("lambda", *lambda)?;
            positive("sigma", *sigma)
        }
        CatalogEntry::Ma2 { rho, sigma } => {
            in_open_unit("rho", *rho)?;
            positive("sigma", *sigma)
        }
        CatalogEntry::Ma3 { lambda, rho, sigma }
        | CatalogEntry::Ma4 { lambda, rho, sigma }
        | CatalogEntry::Ma5 { lambda, rho, sigma } => {
            in_open_unit("lambda", *lambda)?;
            in_open_unit("rho", *rho)?;
            positive("sigma", *sigma)
        }
        CatalogEntry::Mr1 { beta, rho, sigma } => {
            in_open_unit("beta", *beta)?;
            in_open_unit("rho", *rho)?;
            positive("sigma", *sigma)
        }
        CatalogEntry::Mr2 { beta, b, sigma } => {
            in_open_unit("beta", *beta)?;
            // Determinacy bound: P(1) = β − 1 + b < 0. The boundary
            // b = 1 − β is the unit-root limit and is deliberately not
            // buildable; `hybrid_roots` still reports it.
            require(*b > 0.0 && *b < 1.0 - *beta, "b", "0 < b < 1 - beta", *b)?;
            positive("sigma", *sigma)
        }
        CatalogEntry::Mr3 { a, sigma_w } => {
            require(a.abs() > 1.0, "a", "|a| > 1", *a)?;
            if let Some(s) = sigma_w {
                positive("sigma_w", *s)?;
            }
            Ok(())
        }
    }
}

/// Exact structural matrix encoding of a catalog entry.
pub fn build(entry: &CatalogEntry) -> Result<StructuralREModel, CatalogError> {
    validate(entry)?;
    let model = match entry {
        CatalogEntry::Ma1 { lambda, sigma } => StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(0.0),
            Matrix::scalar(*lambda),
            Matrix::scalar(0.0),
            Matrix::scalar(sigma * sigma),
            vec![false],
        )?,
        CatalogEntry::Ma2 { rho, sigma } => StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(0.0),
            Matrix::scalar(0.0),
            Matrix::scalar(*rho),
            Matrix::scalar(sigma * sigma),
            vec![false],
        )?,
        CatalogEntry::Ma3 { lambda, rho, sigma } => {
            // Companion pair (π_t, π_{t−1}) with white disturbances.
            let a2 = Matrix::from_rows(&[&[lambda + rho, -(lambda * rho)], &[1.0, 0.0]])
                .expect("static shape");
            let mut sigma_eps = Matrix::zeros(2, 2);
            sigma_eps[(0, 0)] = sigma * sigma;
            StructuralREModel::without_observables(
                Matrix::identity(2),
                Matrix::zeros(2, 2),
                a2,
                Matrix::zeros(2, 2),
                sigma_eps,
                vec![false, false],
            )?
        }
        CatalogEntry::Ma4 { lambda, rho, sigma } => {
            // Latent AR(2) disturbance in companion form, observed
            // one-for-one.
            let phi_u = Matrix::from_rows(&[&[lambda + rho, -(lambda * rho)], &[1.0, 0.0]])
                .expect("static shape");
            let mut sigma_eps = Matrix::zeros(2, 2);
            sigma_eps[(0, 0)] = sigma * sigma;
            StructuralREModel::without_observables(
                Matrix::identity(2),
                Matrix::zeros(2, 2),
                Matrix::zeros(2, 2),
                phi_u,
                sigma_eps,
                vec![false, false],
            )?
        }
        CatalogEntry::Ma5 { lambda, rho, sigma } => StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(0.0),
            Matrix::scalar(*lambda),
            Matrix::scalar(*rho),
            Matrix::scalar(sigma * sigma),
            vec![false],
        )?,
        CatalogEntry::Mr1 { beta, rho, sigma } => StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(*beta),
            Matrix::scalar(0.0),
            Matrix::scalar(*rho),
            Matrix::scalar(sigma * sigma),
            vec![true],
        )?,
        CatalogEntry::Mr2 { beta, b, sigma } => StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(*beta),
            Matrix::scalar(*b),
            Matrix::scalar(0.0),
            Matrix::scalar(sigma * sigma),
            vec![true],
        )?,
        CatalogEntry::Mr3 { a, sigma_w } => {
            let base = StructuralREModel::without_observables(
                Matrix::scalar(1.0),
                Matrix::scalar(*a),
                Matrix::scalar(0.0),
                Matrix::scalar(0.0),
                Matrix::scalar(0.0),
                vec![true],
            )?;
            match sigma_w {
                Some(s) => base.with_sunspot_variance(s * s),
                None => base,
            }
        }
    };
    Ok(model)
}

/// Canonical scalar AR(p) reduced form, computed from closed forms
/// rather than through the solver.
pub fn reduce(entry: &CatalogEntry) -> Result<ARProcess, CatalogError> {
    validate(entry)?;
    let label = entry.label();
    let process = match entry {
        CatalogEntry::Ma1 { lambda, sigma } => {
            ARProcess::new(vec![*lambda], sigma * sigma, label)?
        }
        CatalogEntry::Ma2 { rho, sigma } => ARProcess::new(vec![*rho], sigma * sigma, label)?,
        CatalogEntry::Ma3 { lambda, rho, sigma }
        | CatalogEntry::Ma4 { lambda, rho, sigma }
        | CatalogEntry::Ma5 { lambda, rho, sigma } => ARProcess::new(
            vec![lambda + rho, -(lambda * rho)],
            sigma * sigma,
            label,
        )?,
        CatalogEntry::Mr1 { beta, rho, sigma } => {
            let scale = sigma / (1.0 - beta * rho);
            ARProcess::new(vec![*rho], scale * scale, label)?
        }
        CatalogEntry::Mr2 { beta, b, sigma } => {
            let (mu1, _) = hybrid_roots(*beta, *b)?;
            let scale = sigma / (1.0 - beta * mu1);
            ARProcess::new(vec![mu1], scale * scale, label)?
        }
        CatalogEntry::Mr3 { a, sigma_w } => {
            let s = sigma_w.ok_or(CatalogError::SunspotVarianceRequired)?;
            ARProcess::new(vec![1.0 / a], s * s, label)?
        }
    };
    Ok(process)
}

/// Roots `μ1 ≤ μ2` of the hybrid characteristic polynomial
/// `β·μ² − μ + b = 0`.
///
/// When `β + b` evaluates to exactly one, μ = 1 is an exact root of the
/// floating-point polynomial and the cofactor root `1/β − 1` follows
/// from the root sum, so the unit-root limit case comes back exact
/// instead of one ulp off.
pub fn hybrid_roots(beta: f64, b: f64) -> Result<(f64, f64), CatalogError> {
    require(beta > 0.0 && beta < 1.0, "beta", "0 < beta < 1", beta)?;
    positive("b", b)?;
    let discriminant = 1.0 - 4.0 * b * beta;
    if discriminant < 0.0 {
        return Err(CatalogError::ComplexRoots {
            modulus: (b / beta).sqrt(),
        });
    }
    if beta + b == 1.0 {
        let other = 1.0 / beta - 1.0;
        return Ok(if other >= 1.0 { (1.0, other) } else { (other, 1.0) });
    }
    let sq = discriminant.sqrt();
    Ok(((1.0 - sq) / (2.0 * beta), (1.0 + sq) / (2.0 * beta)))
}

/// The under-identified toy regression: slope `β = 2a + b`, so a point
/// estimate pins `a` only after fixing `b`.
pub fn toy_structural_given_restriction(beta_hat: f64, b: f64) -> f64 {
    (beta_hat - b) / 2.0
}

/// Degenerate forward model with neither lags nor persistent shocks
/// (`A2 = 0`, `Φx = 0`, `Φu = 0`): its solution is `y_t = A0⁻¹·ε_t`,
/// independent of `A1`.
pub fn degenerate_forward_model(
    a0: Matrix,
    a1: Matrix,
    sigma_eps: Matrix,
) -> Result<StructuralREModel, CatalogError> {
    let n = a0.rows();
    let forward = (0..n).map(|_| true).collect();
    Ok(StructuralREModel::without_observables(
        a0,
        a1,
        Matrix::zeros(n, n),
        Matrix::zeros(n, n),
        sigma_eps,
        forward,
    )?)
}

/// Forward model anchored on latent autoregressive forcing variables
/// (`A2 = 0`, `Φx = 0`, `Φu` stable): the shape behind the anchor-matrix
/// analysis.
pub fn anchored_forward_model(
    a0: Matrix,
    a1: Matrix,
    phi_u: Matrix,
    sigma_eps: Matrix,
) -> Result<StructuralREModel, CatalogError> {
    let n = a0.rows();
    let forward = (0..n).map(|_| true).collect();
    Ok(StructuralREModel::without_observables(
        a0,
        a1,
        Matrix::zeros(n, n),
        phi_u,
        sigma_eps,
        forward,
    )?)
}

/// Scalar AR(p) process with innovation variance; the common currency of
/// the equivalence checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ARProcess {
    /// `φ1 … φp` in `y_t = φ1·y_{t−1} + … + φp·y_{t−p} + e_t`.
    pub coefficients: Vec<f64>,
    /// Variance of `e_t` (not a standard deviation).
    pub innovation_variance: f64,
    pub label: String,
    /// Companion spectral radius lies on the unit circle within
    /// tolerance; such processes carry no stationary moments.
    pub boundary: bool,
}

impl ARProcess {
    pub fn new(
        coefficients: Vec<f64>,
        innovation_variance: f64,
        label: impl Into<String>,
    ) -> Result<Self, RemodelError> {
        if !(innovation_variance.is_finite() && innovation_variance > 0.0) {
            return Err(RemodelError::InvalidModel(format!(
                "innovation variance must be positive and finite, got {innovation_variance}"
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(RemodelError::InvalidModel(
                "AR coefficients must be finite".into(),
            ));
        }
        let mut process = Self {
            coefficients,
            innovation_variance,
            label: label.into(),
            boundary: false,
        };
        let rho = process.companion_spectral_radius()?;
        match classify_modulus(rho) {
            RootClass::Stable => {}
            RootClass::Boundary => process.boundary = true,
            RootClass::Unstable => {
                return Err(RemodelError::InvalidModel(format!(
                    "AR companion spectral radius {rho} >= 1"
                )));
            }
        }
        Ok(process)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Companion matrix; order zero yields the 1x1 zero matrix so white
    /// noise flows through the same machinery.
    pub fn companion(&self) -> Matrix {
        let p = self.order().max(1);
        let mut m = Matrix::zeros(p, p);
        for (j, phi) in self.coefficients.iter().enumerate() {
            m[(0, j)] = *phi;
        }
        for i in 1..p {
            m[(i, i - 1)] = 1.0;
        }
        m
    }

    pub fn companion_spectral_radius(&self) -> Result<f64, RemodelError> {
        Ok(spectral_radius(&self.companion())?)
    }

    /// Companion-form state space: state `(y_t, …, y_{t−p+1})`, shock on
    /// the first coordinate, first coordinate observed.
    pub fn to_state_space(&self) -> StateSpaceForm {
        let p = self.order().max(1);
        let mut loading = Matrix::zeros(p, 1);
        loading[(0, 0)] = 1.0;
        let mut selector = Matrix::zeros(1, p);
        selector[(0, 0)] = 1.0;
        StateSpaceForm {
            transition: self.companion(),
            shock_loading: loading,
            observation_selector: selector,
            innovation_cov: Matrix::scalar(self.innovation_variance),
        }
    }
}

impl SecondOrderRepresentation for ARProcess {
    fn observed_autocovariances(&self, k_max: usize) -> Result<Vec<Matrix>, RemodelError> {
        autocovariances(&self.to_state_space(), k_max)
    }

    fn observed_dim(&self) -> usize {
        1
    }

    fn is_strictly_stable(&self) -> bool {
        !self.boundary
    }
}
