//! Structural linear rational-expectations models and their solutions.
//!
//! A model couples `n` endogenous variables to an observable exogenous
//! VAR(1) block `x` (dimension `k`) and a latent AR(1) disturbance block
//! `u` (dimension `n`):
//!
//! ```text
//! A0·y_t = A1·E_t(y_{t+1}) + A2·y_{t−1} + A3·x_t + u_t
//! x_t = Φx·x_{t−1} + v_t,    u_t = Φu·u_{t−1} + ε_t
//! ```
//!
//! Determinacy is decided by counting unstable roots of the endogenous
//! pencil `det(A1·μ² − A0·μ + A2)` against the number of variables the
//! model declares forward-looking; the solver then produces the
//! undetermined-coefficients representation
//! `y_t = C·y_{t−1} + G1·x_t + G2·u_t` and a stacked state-space view
//! whose autocovariances are the common currency for the equivalence
//! checks elsewhere in the crate.
//!
//! Each wanted variable must be labelled forward-looking or predetermined
//! by the caller; the solver never infers the split. Unit-circle roots
//! are reported through boundary flags rather than misclassified, and
//! autocovariances are refused for boundary models because no stationary
//! second moments exist there.

use thiserror::Error;

use crate::algebra::{
    classify_modulus, linear_pencil_roots, lyapunov_solve, pencil_roots,
    quadratic_solvent_allowing_boundary, solve_sylvester, spectral_radius, AlgebraError, Matrix,
    RootClass, STABILITY_BAND,
};

/// Residual bound for an accepted solution, relative to `max(‖A0‖∞, 1)`.
const SOLUTION_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error)]
pub enum RemodelError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model is not determinate: {0:?}")]
    NotDeterminate(DeterminacyClass),
    #[error("no stable solvent exists for the endogenous pencil")]
    NoStableSolvent,
    #[error("indeterminate model needs a sunspot innovation variance")]
    MissingSunspotVariance,
    #[error("anchoring undefined: the endogenous block has a non-unstable eigenvalue")]
    NotAllUnstable,
    #[error("anchor matrix is singular")]
    SingularN,
    #[error("transition is not strictly stable (spectral radius {0}); no stationary autocovariances")]
    UnstableTransition(f64),
    #[error("solution verification failed: residual {residual} exceeds tolerance {tol}")]
    NumericalFailure { residual: f64, tol: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Blanchard–Kahn style determinacy taxonomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Determinacy {
    Determinate,
    Indeterminate { degree: usize },
    NoStableSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminacyClass {
    pub variant: Determinacy,
    /// Unstable pencil roots, counting roots pushed to infinity by rank
    /// deficiency of the forward block.
    pub unstable_count: usize,
    /// Number of variables labelled forward-looking.
    pub forward_count: usize,
    /// A root (endogenous or exogenous) sits on the unit circle within
    /// tolerance; the classification stands but stationary moments do
    /// not exist.
    pub boundary: bool,
}

/// The structural model of the crate-level equation, validated on
/// construction and immutable afterwards.
#[derive(Debug, Clone)]
pub struct StructuralREModel {
    n: usize,
    k: usize,
    a0: Matrix,
    a1: Matrix,
    a2: Matrix,
    a3: Matrix,
    phi_x: Matrix,
    phi_u: Matrix,
    sigma_eps: Matrix,
    sigma_v: Matrix,
    forward: Vec<bool>,
    variable_names: Vec<String>,
    sunspot_variance: Option<f64>,
    boundary_exogenous: bool,
}

/// Builder-style argument bundle for [`StructuralREModel::new`].
pub struct ModelParts {
    pub a0: Matrix,
    pub a1: Matrix,
    pub a2: Matrix,
    pub a3: Matrix,
    pub phi_x: Matrix,
    pub phi_u: Matrix,
    pub sigma_eps: Matrix,
    pub sigma_v: Matrix,
    pub forward: Vec<bool>,
    pub variable_names: Vec<String>,
    pub sunspot_variance: Option<f64>,
}

impl StructuralREModel {
    pub fn new(parts: ModelParts) -> Result<Self, RemodelError> {
        let n = parts.a0.rows();
        let k = parts.phi_x.rows();
        if n == 0 {
            return Err(RemodelError::InvalidModel(
                "model needs at least one endogenous variable".into(),
            ));
        }
        let square_n = [
            ("A0", &parts.a0),
            ("A1", &parts.a1),
            ("A2", &parts.a2),
            ("Phi_u", &parts.phi_u),
            ("Sigma_eps", &parts.sigma_eps),
        ];
        for (name, m) in square_n {
            if m.rows() != n || m.cols() != n {
                return Err(RemodelError::InvalidModel(format!(
                    "{name} must be {n}x{n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if parts.a3.rows() != n || parts.a3.cols() != k {
            return Err(RemodelError::InvalidModel(format!(
                "A3 must be {n}x{k}, got {}x{}",
                parts.a3.rows(),
                parts.a3.cols()
            )));
        }
        for (name, m) in [("Phi_x", &parts.phi_x), ("Sigma_v", &parts.sigma_v)] {
            if m.rows() != k || m.cols() != k {
                return Err(RemodelError::InvalidModel(format!(
                    "{name} must be {k}x{k}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if parts.forward.len() != n {
            return Err(RemodelError::InvalidModel(format!(
                "forward flags must cover all {n} variables"
            )));
        }
        if parts.a0.reciprocal_condition_estimate() < 1e-13 {
            return Err(RemodelError::InvalidModel("A0 is singular".into()));
        }
        check_psd("Sigma_eps", &parts.sigma_eps)?;
        check_psd("Sigma_v", &parts.sigma_v)?;
        let mut boundary_exogenous = false;
        for (name, m) in [("Phi_x", &parts.phi_x), ("Phi_u", &parts.phi_u)] {
            if m.rows() == 0 {
                continue;
            }
            let rho = spectral_radius(m)?;
            match classify_modulus(rho) {
                RootClass::Stable => {}
                RootClass::Boundary => boundary_exogenous = true,
                RootClass::Unstable => {
                    return Err(RemodelError::InvalidModel(format!(
                        "{name} has spectral radius {rho} >= 1"
                    )));
                }
            }
        }
        // A lead coefficient on a variable declared predetermined would
        // make the forward count meaningless.
        let scale = parts.a1.max_abs().max(1.0);
        for i in 0..n {
            if parts.forward[i] {
                continue;
            }
            let row_mass: f64 = (0..n).map(|j| parts.a1[(i, j)].abs()).sum();
            if row_mass > 1e-12 * scale {
                return Err(RemodelError::InvalidModel(format!(
                    "variable {i} is declared predetermined but has a nonzero A1 row"
                )));
            }
        }
        let variable_names = if parts.variable_names.is_empty() {
            (0..n).map(|i| format!("y{}", i + 1)).collect()
        } else if parts.variable_names.len() == n {
            parts.variable_names
        } else {
            return Err(RemodelError::InvalidModel(
                "variable_names must be empty or match n".into(),
            ));
        };
        if let Some(v) = parts.sunspot_variance {
            if !(v.is_finite() && v >= 0.0) {
                return Err(RemodelError::InvalidModel(
                    "sunspot_variance must be a finite non-negative number".into(),
                ));
            }
        }
        Ok(Self {
            n,
            k,
            a0: parts.a0,
            a1: parts.a1,
            a2: parts.a2,
            a3: parts.a3,
            phi_x: parts.phi_x,
            phi_u: parts.phi_u,
            sigma_eps: parts.sigma_eps,
            sigma_v: parts.sigma_v,
            forward: parts.forward,
            variable_names,
            sunspot_variance: parts.sunspot_variance,
            boundary_exogenous,
        })
    }

    /// Convenience constructor for models without an observable
    /// exogenous block (`k = 0`).
    pub fn without_observables(
        a0: Matrix,
        a1: Matrix,
        a2: Matrix,
        phi_u: Matrix,
        sigma_eps: Matrix,
        forward: Vec<bool>,
    ) -> Result<Self, RemodelError> {
        let n = a0.rows();
        Self::new(ModelParts {
            a0,
            a1,
            a2,
            a3: Matrix::zeros(n, 0),
            phi_x: Matrix::zeros(0, 0),
            phi_u,
            sigma_eps,
            sigma_v: Matrix::zeros(0, 0),
            forward,
            variable_names: vec![],
            sunspot_variance: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a0(&self) -> &Matrix {
        &self.a0
    }

    pub fn a1(&self) -> &Matrix {
        &self.a1
    }

    pub fn a2(&self) -> &Matrix {
        &self.a2
    }

    pub fn a3(&self) -> &Matrix {
        &self.a3
    }

    pub fn phi_x(&self) -> &Matrix {
        &self.phi_x
    }

    pub fn phi_u(&self) -> &Matrix {
        &self.phi_u
    }

    pub fn sigma_eps(&self) -> &Matrix {
        &self.sigma_eps
    }

    pub fn sigma_v(&self) -> &Matrix {
        &self.sigma_v
    }

    pub fn forward_flags(&self) -> &[bool] {
        &self.forward
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn sunspot_variance(&self) -> Option<f64> {
        self.sunspot_variance
    }

    pub fn with_sunspot_variance(mut self, variance: f64) -> Self {
        self.sunspot_variance = Some(variance);
        self
    }
}

fn check_psd(name: &str, m: &Matrix) -> Result<(), RemodelError> {
    if m.rows() == 0 {
        return Ok(());
    }
    if !m.is_symmetric(1e-10) {
        return Err(RemodelError::InvalidModel(format!("{name} is not symmetric")));
    }
    let scale = m.max_abs().max(1.0);
    let values = crate::algebra::eigenvalues(m)?;
    for v in values {
        if v.re < -1e-10 * scale {
            return Err(RemodelError::InvalidModel(format!(
                "{name} is not positive semidefinite (eigenvalue {})",
                v.re
            )));
        }
    }
    Ok(())
}

/// Counts unstable endogenous pencil roots against the forward-looking
/// variable count.
///
/// Roots driven to infinity by rank deficiency in the forward block are
/// unstable by convention, but only the deficiency in excess of the
/// predetermined variables' vacuous lead rows counts: the pencil has
/// `n + f` meaningful degrees when `f` variables carry leads.
pub fn classify_determinacy(m: &StructuralREModel) -> Result<DeterminacyClass, RemodelError> {
    let f = m.forward.iter().filter(|&&x| x).count();
    let (roots, _) = pencil_roots(&m.a1, &m.a0, &m.a2).map_err(map_pencil_err)?;
    let degree = roots.len();
    let extra_unstable = (m.n + f).saturating_sub(degree);
    let mut unstable = extra_unstable;
    let mut boundary = m.boundary_exogenous;
    for r in &roots {
        match classify_modulus(r.norm()) {
            RootClass::Unstable => unstable += 1,
            RootClass::Boundary => boundary = true,
            RootClass::Stable => {}
        }
    }
    let variant = match unstable.cmp(&f) {
        std::cmp::Ordering::Equal => Determinacy::Determinate,
        std::cmp::Ordering::Less => Determinacy::Indeterminate {
            degree: f - unstable,
        },
        std::cmp::Ordering::Greater => Determinacy::NoStableSolution,
    };
    Ok(DeterminacyClass {
        variant,
        unstable_count: unstable,
        forward_count: f,
        boundary,
    })
}

fn map_pencil_err(e: AlgebraError) -> RemodelError {
    RemodelError::Algebra(e)
}

/// Decision-rule representation `y_t = C·y_{t−1} + G1·x_t + G2·u_t`.
#[derive(Debug, Clone)]
pub struct SolvedModel {
    pub c: Matrix,
    pub g1: Matrix,
    pub g2: Matrix,
    pub determinacy: DeterminacyClass,
    /// Set when the solution uses a unit-circle root; autocovariances are
    /// refused for such models.
    pub boundary: bool,
    /// Sunspot innovation variance backing an indeterminate solution.
    pub sunspot_variance: Option<f64>,
    /// Verification residual of the undetermined-coefficients equations.
    pub residual: f64,
}

/// Solves a determinate model, or an indeterminate one for which the
/// caller supplied a sunspot innovation variance (the scalar
/// forward-only shape; richer indeterminate solutions are out of scope).
pub fn solve(m: &StructuralREModel) -> Result<SolvedModel, RemodelError> {
    let class = classify_determinacy(m)?;
    match class.variant {
        Determinacy::Determinate => solve_determinate(m, class),
        Determinacy::Indeterminate { degree } => {
            if m.sunspot_variance.is_none() {
                return Err(RemodelError::NotDeterminate(class));
            }
            solve_sunspot(m, class, degree)
        }
        Determinacy::NoStableSolution => Err(RemodelError::NotDeterminate(class)),
    }
}

fn solve_determinate(
    m: &StructuralREModel,
    class: DeterminacyClass,
) -> Result<SolvedModel, RemodelError> {
    let sol = quadratic_solvent_allowing_boundary(&m.a1, &m.a0, &m.a2).map_err(|e| match e {
        AlgebraError::NoStableSolvent => RemodelError::NoStableSolvent,
        other => RemodelError::Algebra(other),
    })?;
    let c = sol.solvent;
    let a0_eff = m.a0.sub(&m.a1.matmul(&c)?)?;
    let g1 = solve_sylvester(&a0_eff, &m.a1, &m.phi_x, &m.a3)?;
    let g2 = solve_sylvester(&a0_eff, &m.a1, &m.phi_u, &Matrix::identity(m.n))?;
    let solved = SolvedModel {
        c,
        g1,
        g2,
        boundary: class.boundary || sol.boundary,
        determinacy: class,
        sunspot_variance: None,
        residual: 0.0,
    };
    let residual = solution_residual(m, &solved)?;
    let tol = SOLUTION_RESIDUAL_TOL * m.a0.norm_inf().max(1.0);
    if residual > tol {
        return Err(RemodelError::NumericalFailure { residual, tol });
    }
    Ok(SolvedModel { residual, ..solved })
}

fn solve_sunspot(
    m: &StructuralREModel,
    class: DeterminacyClass,
    degree: usize,
) -> Result<SolvedModel, RemodelError> {
    let variance = m.sunspot_variance.ok_or(RemodelError::MissingSunspotVariance)?;
    let shape_ok = degree == 1
        && m.n == 1
        && m.k == 0
        && m.a2.is_zero(0.0)
        && m.phi_u.is_zero(0.0)
        && m.sigma_eps.is_zero(1e-300)
        && m.a1[(0, 0)] != 0.0;
    if !shape_ok {
        return Err(RemodelError::InvalidModel(
            "sunspot solutions are supported only for the scalar purely forward-looking shape \
             (n=1, k=0, A2=0, Phi_u=0, Sigma_eps=0)"
                .into(),
        ));
    }
    // π_t = a·E_t(π_{t+1}) with |a| > 1 admits the stationary family
    // driven by an extraneous innovation: C = A0/A1.
    let c = Matrix::scalar(m.a0[(0, 0)] / m.a1[(0, 0)]);
    let radius = c[(0, 0)].abs();
    let boundary = class.boundary || classify_modulus(radius) == RootClass::Boundary;
    let residual = (m.a1[(0, 0)] * c[(0, 0)] * c[(0, 0)] - m.a0[(0, 0)] * c[(0, 0)]
        + m.a2[(0, 0)])
        .abs();
    Ok(SolvedModel {
        c,
        g1: Matrix::zeros(1, 0),
        g2: Matrix::zeros(1, 1),
        determinacy: class,
        boundary,
        sunspot_variance: Some(variance),
        residual,
    })
}

/// Residual of the undetermined-coefficients equations for a candidate
/// solution: the quadratic in `C` plus the two linear systems pinning
/// `G1` and `G2`. Exposed so tests can verify solutions independently.
pub fn solution_residual(m: &StructuralREModel, s: &SolvedModel) -> Result<f64, RemodelError> {
    if s.sunspot_variance.is_some() {
        return Ok(s.residual);
    }
    let r_c = m
        .a1
        .matmul(&s.c.matmul(&s.c)?)?
        .sub(&m.a0.matmul(&s.c)?)?
        .add(&m.a2)?
        .norm_inf();
    let a0_eff = m.a0.sub(&m.a1.matmul(&s.c)?)?;
    let r_g1 = a0_eff
        .matmul(&s.g1)?
        .sub(&m.a1.matmul(&s.g1)?.matmul(&m.phi_x)?)?
        .sub(&m.a3)?
        .norm_inf();
    let r_g2 = a0_eff
        .matmul(&s.g2)?
        .sub(&m.a1.matmul(&s.g2)?.matmul(&m.phi_u)?)?
        .sub(&Matrix::identity(m.n))?
        .norm_inf();
    Ok(r_c.max(r_g1).max(r_g2))
}

/// Anchored solution for purely forward models driven by latent
/// disturbances (`A2 = 0`, `Φx = 0`): `y_t = N·u_t` with
/// `A0·N − A1·N·Φu = I`, which rewrites the law of motion as
/// `y_t = N·Φu·N⁻¹·y_{t−1} + N·ε_t`.
#[derive(Debug, Clone)]
pub struct AnchoredSolution {
    /// Anchor matrix `N`.
    pub anchor: Matrix,
    /// Autoregressive transition `N·Φu·N⁻¹` of the observed block.
    pub transition: Matrix,
    /// Innovation loading (equals the anchor).
    pub innovation_loading: Matrix,
    /// The same model through the standard solver, for cross-checking:
    /// `C = 0` and `G2 = N` whenever both routes apply.
    pub solved: SolvedModel,
}

pub fn anchored_solution(m: &StructuralREModel) -> Result<AnchoredSolution, RemodelError> {
    if !m.a2.is_zero(0.0) || !(m.k == 0 || m.phi_x.is_zero(0.0)) {
        return Err(RemodelError::InvalidModel(
            "anchoring requires A2 = 0 and Phi_x = 0".into(),
        ));
    }
    // Every finite root of det(μ·A1 − A0) must be unstable; roots at
    // infinity (from a singular A1) count as unstable.
    let (roots, _) = linear_pencil_roots(&m.a1, &m.a0)?;
    for r in &roots {
        if classify_modulus(r.norm()) != RootClass::Unstable {
            return Err(RemodelError::NotAllUnstable);
        }
    }
    let anchor = solve_sylvester(&m.a0, &m.a1, &m.phi_u, &Matrix::identity(m.n))
        .map_err(|_| RemodelError::SingularN)?;
    if anchor.reciprocal_condition_estimate() < 1e-13 {
        return Err(RemodelError::SingularN);
    }
    let transition = if let Some(rho) = scalar_multiple_of_identity(&m.phi_u) {
        // N·(ρI)·N⁻¹ = ρI exactly; skip the numerical round trip.
        Matrix::identity(m.n).scale(rho)
    } else {
        let n_inv = anchor.inverse().map_err(|_| RemodelError::SingularN)?;
        anchor.matmul(&m.phi_u)?.matmul(&n_inv)?
    };
    let solved = solve(m)?;
    Ok(AnchoredSolution {
        innovation_loading: anchor.clone(),
        anchor,
        transition,
        solved,
    })
}

fn scalar_multiple_of_identity(m: &Matrix) -> Option<f64> {
    let n = m.rows();
    if n == 0 {
        return None;
    }
    let rho = m[(0, 0)];
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { rho } else { 0.0 };
            if m[(i, j)] != expected {
                return None;
            }
        }
    }
    Some(rho)
}

/// Stacked first-order state-space view of a solved model.
///
/// The state is `y` followed by whichever of `x` and `u` actually
/// persists (a zero autoregressive block folds its white shock directly
/// into the `y` loading, keeping the state minimal). The observation
/// selector picks the endogenous block.
#[derive(Debug, Clone)]
pub struct StateSpaceForm {
    pub transition: Matrix,
    pub shock_loading: Matrix,
    pub observation_selector: Matrix,
    /// Covariance of the stacked shock vector `(v, ε)` (or the sunspot
    /// innovation for indeterminate solutions).
    pub innovation_cov: Matrix,
}

pub fn to_state_space(
    s: &SolvedModel,
    m: &StructuralREModel,
) -> Result<StateSpaceForm, RemodelError> {
    if matches!(s.determinacy.variant, Determinacy::Indeterminate { .. }) {
        let variance = s.sunspot_variance.ok_or(RemodelError::MissingSunspotVariance)?;
        return Ok(StateSpaceForm {
            transition: s.c.clone(),
            shock_loading: Matrix::identity(m.n),
            observation_selector: Matrix::identity(m.n),
            innovation_cov: Matrix::scalar(variance),
        });
    }
    let n = m.n;
    let k = m.k;
    let include_x = k > 0 && !m.phi_x.is_zero(0.0);
    let include_u = !m.phi_u.is_zero(0.0);
    let dim = n + if include_x { k } else { 0 } + if include_u { n } else { 0 };
    let shock_dim = k + n;

    let mut transition = Matrix::zeros(dim, dim);
    let mut loading = Matrix::zeros(dim, shock_dim);
    let mut selector = Matrix::zeros(n, dim);

    for i in 0..n {
        selector[(i, i)] = 1.0;
        for j in 0..n {
            transition[(i, j)] = s.c[(i, j)];
        }
        for j in 0..k {
            loading[(i, j)] = s.g1[(i, j)];
        }
        for j in 0..n {
            loading[(i, k + j)] = s.g2[(i, j)];
        }
    }
    let mut offset = n;
    if include_x {
        let g1_phi = s.g1.matmul(&m.phi_x)?;
        for i in 0..n {
            for j in 0..k {
                transition[(i, offset + j)] = g1_phi[(i, j)];
            }
        }
        for i in 0..k {
            for j in 0..k {
                transition[(offset + i, offset + j)] = m.phi_x[(i, j)];
            }
            loading[(offset + i, i)] = 1.0;
        }
        offset += k;
    }
    if include_u {
        let g2_phi = s.g2.matmul(&m.phi_u)?;
        for i in 0..n {
            for j in 0..n {
                transition[(i, offset + j)] = g2_phi[(i, j)];
            }
        }
        for i in 0..n {
            for j in 0..n {
                transition[(offset + i, offset + j)] = m.phi_u[(i, j)];
            }
            loading[(offset + i, k + i)] = 1.0;
        }
    }
    let mut innovation_cov = Matrix::zeros(shock_dim, shock_dim);
    for i in 0..k {
        for j in 0..k {
            innovation_cov[(i, j)] = m.sigma_v[(i, j)];
        }
    }
    for i in 0..n {
        for j in 0..n {
            innovation_cov[(k + i, k + j)] = m.sigma_eps[(i, j)];
        }
    }
    Ok(StateSpaceForm {
        transition,
        shock_loading: loading,
        observation_selector: selector,
        innovation_cov,
    })
}

impl StateSpaceForm {
    pub fn observed_dim(&self) -> usize {
        self.observation_selector.rows()
    }

    pub fn state_dim(&self) -> usize {
        self.transition.rows()
    }

    /// Covariance of the state innovation `L·Σ·Lᵀ`.
    pub fn state_innovation_cov(&self) -> Result<Matrix, RemodelError> {
        Ok(self
            .shock_loading
            .matmul(&self.innovation_cov)?
            .matmul(&self.shock_loading.transpose())?
            .symmetrize())
    }

    pub fn spectral_radius(&self) -> Result<f64, RemodelError> {
        Ok(spectral_radius(&self.transition)?)
    }
}

/// Observed-variable autocovariances `Γ_0, …, Γ_K` of a stationary state
/// space: `Γ_k = S·Tᵏ·Γ0·Sᵀ` with `Γ0` from the Lyapunov equation.
pub fn autocovariances(ss: &StateSpaceForm, k_max: usize) -> Result<Vec<Matrix>, RemodelError> {
    let rho = ss.spectral_radius()?;
    if rho >= 1.0 - STABILITY_BAND {
        return Err(RemodelError::UnstableTransition(rho));
    }
    let q = ss.state_innovation_cov()?;
    let gamma0 = lyapunov_solve(&ss.transition, &q).map_err(|e| match e {
        AlgebraError::UnstableTransition { rho } => RemodelError::UnstableTransition(rho),
        other => RemodelError::Algebra(other),
    })?;
    let selector_t = ss.observation_selector.transpose();
    let mut out = Vec::with_capacity(k_max + 1);
    let mut current = gamma0;
    out.push(
        ss.observation_selector
            .matmul(&current)?
            .matmul(&selector_t)?,
    );
    for _ in 1..=k_max {
        current = ss.transition.matmul(&current)?;
        out.push(
            ss.observation_selector
                .matmul(&current)?
                .matmul(&selector_t)?,
        );
    }
    Ok(out)
}

/// Anything that exposes stationary observed autocovariances; the common
/// interface of the equivalence checker.
pub trait SecondOrderRepresentation {
    fn observed_autocovariances(&self, k_max: usize) -> Result<Vec<Matrix>, RemodelError>;
    fn observed_dim(&self) -> usize;
    /// Strictly stable (boundary cases return false and are rejected by
    /// the equivalence checker).
    fn is_strictly_stable(&self) -> bool;
}

impl SecondOrderRepresentation for StateSpaceForm {
    fn observed_autocovariances(&self, k_max: usize) -> Result<Vec<Matrix>, RemodelError> {
        autocovariances(self, k_max)
    }

    fn observed_dim(&self) -> usize {
        self.observed_dim()
    }

    fn is_strictly_stable(&self) -> bool {
        self.spectral_radius()
            .map(|r| r < 1.0 - STABILITY_BAND)
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mr1(beta: f64, rho: f64, sigma: f64) -> StructuralREModel {
        StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(beta),
            Matrix::scalar(0.0),
            Matrix::scalar(rho),
            Matrix::scalar(sigma * sigma),
            vec![true],
        )
        .unwrap()
    }

    fn mr2(beta: f64, b: f64, sigma: f64) -> StructuralREModel {
        StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(beta),
            Matrix::scalar(b),
            Matrix::scalar(0.0),
            Matrix::scalar(sigma * sigma),
            vec![true],
        )
        .unwrap()
    }

    fn mr3(a: f64) -> StructuralREModel {
        StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(a),
            Matrix::scalar(0.0),
            Matrix::scalar(0.0),
            Matrix::scalar(0.0),
            vec![true],
        )
        .unwrap()
    }

    fn ma1(lambda: f64, sigma: f64) -> StructuralREModel {
        StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(0.0),
            Matrix::scalar(lambda),
            Matrix::scalar(0.0),
            Matrix::scalar(sigma * sigma),
            vec![false],
        )
        .unwrap()
    }

    #[test]
    fn forward_shock_model_is_determinate_with_one_unstable_root() {
        let class = classify_determinacy(&mr1(0.99, 0.9, 1.0)).unwrap();
        assert_eq!(class.variant, Determinacy::Determinate);
        assert_eq!(class.unstable_count, 1);
        assert_eq!(class.forward_count, 1);
        assert!(!class.boundary);
    }

    #[test]
    fn pure_forward_model_with_large_coefficient_is_indeterminate() {
        let class = classify_determinacy(&mr3(1.5)).unwrap();
        assert_eq!(class.variant, Determinacy::Indeterminate { degree: 1 });
        assert_eq!(class.unstable_count, 0);
    }

    #[test]
    fn hybrid_model_outside_determinacy_region_has_no_stable_solution() {
        let class = classify_determinacy(&mr2(0.5, 0.6, 1.0)).unwrap();
        assert_eq!(class.variant, Determinacy::NoStableSolution);
        assert_eq!(class.unstable_count, 2);
    }

    #[test]
    fn backward_model_is_determinate_with_no_unstable_roots() {
        let class = classify_determinacy(&ma1(0.9, 1.0)).unwrap();
        assert_eq!(class.variant, Determinacy::Determinate);
        assert_eq!(class.unstable_count, 0);
        assert_eq!(class.forward_count, 0);
    }

    #[test]
    fn backward_model_solves_itself() {
        let s = solve(&ma1(0.9, 1.0)).unwrap();
        assert_eq!(s.c[(0, 0)], 0.9);
        assert_eq!(s.g2[(0, 0)], 1.0);
        assert!(s.residual <= 1e-12);
    }

    #[test]
    fn hybrid_solution_matches_closed_form() {
        let s = solve(&mr2(0.5, 0.3, 1.0)).unwrap();
        let mu1 = (1.0 - (1.0f64 - 4.0 * 0.3 * 0.5).sqrt()) / (2.0 * 0.5);
        assert!((s.c[(0, 0)] - mu1).abs() < 1e-14);
        let scale = 1.0 / (1.0 - 0.5 * mu1);
        assert!((s.g2[(0, 0)] - scale).abs() < 1e-12);
        assert!((s.g2[(0, 0)] - 1.2251).abs() < 1e-4);
    }

    #[test]
    fn degenerate_model_solution_is_contemporaneous() {
        let a0 = Matrix::from_rows(&[&[1.0, 0.3], &[0.0, 1.0]]).unwrap();
        let a1 = Matrix::from_rows(&[&[0.4, 0.1], &[0.2, 0.5]]).unwrap();
        let m = StructuralREModel::without_observables(
            a0.clone(),
            a1,
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 2),
            Matrix::identity(2),
            vec![true, true],
        )
        .unwrap();
        let s = solve(&m).unwrap();
        assert!(s.c.is_zero(1e-12));
        let expected_g2 = a0.inverse().unwrap();
        assert!(s.g2.sub(&expected_g2).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn indeterminate_model_requires_sunspot_variance() {
        let err = solve(&mr3(1.5)).unwrap_err();
        assert!(matches!(err, RemodelError::NotDeterminate(_)));
        let s = solve(&mr3(1.5).with_sunspot_variance(1.0)).unwrap();
        assert!((s.c[(0, 0)] - 1.0 / 1.5).abs() < 1e-15);
        assert_eq!(s.sunspot_variance, Some(1.0));
    }

    #[test]
    fn anchor_matches_closed_form() {
        let anchored = anchored_solution(&mr1(0.99, 0.9, 1.0)).unwrap();
        let n = 1.0 / (1.0 - 0.99 * 0.9);
        assert!((anchored.anchor[(0, 0)] - n).abs() < 1e-12);
        assert!((anchored.anchor[(0, 0)] - 9.1743).abs() < 1e-4);
        assert!((anchored.transition[(0, 0)] - 0.9).abs() < 1e-12);
        // Agreement with the standard solver.
        assert!(anchored.solved.c.is_zero(1e-12));
        assert!((anchored.solved.g2[(0, 0)] - anchored.anchor[(0, 0)]).abs() < 1e-10);
    }

    #[test]
    fn anchor_without_forward_term_is_inverse_of_a0() {
        let m = StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(0.0),
            Matrix::scalar(0.0),
            Matrix::scalar(0.5),
            Matrix::scalar(1.0),
            vec![false],
        )
        .unwrap();
        let anchored = anchored_solution(&m).unwrap();
        assert_eq!(anchored.anchor[(0, 0)], 1.0);
    }

    #[test]
    fn anchored_transition_is_exact_for_scalar_phi() {
        let a0 = Matrix::from_rows(&[&[1.0, 0.2], &[0.1, 1.0]]).unwrap();
        let a1 = Matrix::from_rows(&[&[0.5, 0.1], &[0.0, 0.6]]).unwrap();
        let m = StructuralREModel::without_observables(
            a0,
            a1,
            Matrix::zeros(2, 2),
            Matrix::identity(2).scale(0.7),
            Matrix::identity(2),
            vec![true, true],
        )
        .unwrap();
        let anchored = anchored_solution(&m).unwrap();
        let expected = Matrix::identity(2).scale(0.7);
        assert_eq!(anchored.transition, expected);
    }

    #[test]
    fn anchoring_rejects_stable_endogenous_roots() {
        // det(μ·A1 − A0) = 1.5μ − 1 has the stable root 2/3.
        let err = anchored_solution(&mr3(1.5)).unwrap_err();
        assert!(matches!(err, RemodelError::NotAllUnstable));
    }

    #[test]
    fn state_space_of_backward_model_is_minimal() {
        let m = ma1(0.9, 1.0);
        let s = solve(&m).unwrap();
        let ss = to_state_space(&s, &m).unwrap();
        assert_eq!(ss.state_dim(), 1);
        assert_eq!(ss.transition[(0, 0)], 0.9);
        assert_eq!(ss.innovation_cov[(0, 0)], 1.0);
        let gammas = autocovariances(&ss, 1).unwrap();
        assert!((gammas[0][(0, 0)] - 1.0 / 0.19).abs() < 1e-10);
        assert!((gammas[1][(0, 0)] - 0.9 / 0.19).abs() < 1e-10);
    }

    #[test]
    fn forward_shock_model_observed_process_matches_anchor_scaling() {
        let m = mr1(0.99, 0.9, 1.0);
        let s = solve(&m).unwrap();
        let ss = to_state_space(&s, &m).unwrap();
        assert_eq!(ss.state_dim(), 2);
        let gammas = autocovariances(&ss, 2).unwrap();
        let g0 = gammas[0][(0, 0)];
        let g1 = gammas[1][(0, 0)];
        let n = 1.0 / (1.0 - 0.99 * 0.9);
        // AR(1) with coefficient ρ and innovation variance N².
        assert!((g1 / g0 - 0.9).abs() < 1e-10);
        assert!((g0 * (1.0 - 0.81) - n * n).abs() < 1e-7 * n * n);
    }

    #[test]
    fn boundary_model_classified_but_refused_autocovariances() {
        let m = mr2(0.4, 0.6, 1.0);
        let class = classify_determinacy(&m).unwrap();
        assert_eq!(class.variant, Determinacy::Determinate);
        assert!(class.boundary);
        let s = solve(&m).unwrap();
        assert!(s.boundary);
        assert_eq!(s.c[(0, 0)], 1.0);
        let ss = to_state_space(&s, &m).unwrap();
        assert!(matches!(
            autocovariances(&ss, 4),
            Err(RemodelError::UnstableTransition(_))
        ));
    }

    #[test]
    fn predetermined_variable_with_lead_row_is_rejected() {
        let err = StructuralREModel::without_observables(
            Matrix::scalar(1.0),
            Matrix::scalar(0.5),
            Matrix::scalar(0.1),
            Matrix::scalar(0.0),
            Matrix::scalar(1.0),
            vec![false],
        )
        .unwrap_err();
        assert!(matches!(err, RemodelError::InvalidModel(_)));
    }
}
