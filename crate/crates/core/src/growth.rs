//! Convergence-rate formulas for the two closed-economy growth models
//! and the observational-equivalence locus of a target estimate.
//!
//! With technology parameters `(α, x, n, δ)` the constant-savings-rate
//! convergence speed is
//!
//! ```text
//! β = (1 − α)·(n + x + δ)
//! ```
//!
//! while the optimal-savings model adds the preference pair `(ρ, θ)`:
//!
//! ```text
//! β = ½·√{ ζ² + 4(1 − α)·((ρ + δ + θx)/θ)·[ (ρ + δ + θx)/α − (n + x + δ) ] } − ζ/2
//! ζ = ρ − n − (1 − θ)·x > 0
//! ```
//!
//! The brace group sits under a square root: that reading is forced by
//! the coincidence identity — when `(ρ + δ + θx)/θ = α·(n + x + δ)` the
//! radicand collapses to `(ζ + 2(1 − α)(n + x + δ))²` and the two
//! formulas agree exactly — and is verified independently in tests
//! against the stable eigenvalue of the linearised saddle-path system.
//!
//! Because both formulas can produce the same β from different
//! parameters, a convergence estimate alone cannot separate exogenous
//! from optimal savings; [`equivalence_locus`] makes that concrete by
//! listing `(α, θ)` combinations reproducing a given estimate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("parameter {param} out of range: requires {constraint}, got {value}")]
    ParamOutOfRange {
        param: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error("stability constraint violated: zeta = rho - n - (1 - theta)x = {0} must be positive")]
    ZetaNonPositive(f64),
    #[error("radicand {0} is negative; no real convergence rate at these parameters")]
    NegativeDiscriminant(f64),
}

/// Structural parameters shared by the two growth models. Rates are per
/// unit time in consistent units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthParams {
    /// Capital elasticity in the production function, in (0, 1).
    pub alpha: f64,
    /// Growth rate of labour-augmenting technical change.
    pub x: f64,
    /// Labour growth rate.
    pub n: f64,
    /// Depreciation rate, non-negative.
    pub delta: f64,
    /// Generational discount rate, non-negative.
    pub rho: f64,
    /// Relative fluctuation aversion (inverse intertemporal elasticity
    /// of substitution), positive.
    pub theta: f64,
}

impl GrowthParams {
    /// `ζ = ρ − n − (1 − θ)x`, the saddle-path stability margin.
    pub fn zeta(&self) -> f64 {
        self.rho - self.n - (1.0 - self.theta) * self.x
    }

    /// Effective steady-state return `(ρ + δ + θx)`.
    pub fn steady_state_return(&self) -> f64 {
        self.rho + self.delta + self.theta * self.x
    }
}

fn require(
    ok: bool,
    param: &'static str,
    constraint: &'static str,
    value: f64,
) -> Result<(), GrowthError> {
    if ok {
        Ok(())
    } else {
        Err(GrowthError::ParamOutOfRange {
            param,
            constraint,
            value,
        })
    }
}

/// Convergence rate of the constant-savings-rate model:
/// `(1 − α)(n + x + δ)`.
pub fn beta_solow(p: &GrowthParams) -> Result<f64, GrowthError> {
    require(p.alpha > 0.0 && p.alpha < 1.0, "alpha", "0 < alpha < 1", p.alpha)?;
    let s = p.n + p.x + p.delta;
    require(s > 0.0, "n + x + delta", "n + x + delta > 0", s)?;
    Ok((1.0 - p.alpha) * s)
}

/// Convergence rate of the optimal-savings model (stable saddle-path
/// eigenvalue magnitude).
pub fn beta_rck(p: &GrowthParams) -> Result<f64, GrowthError> {
    require(p.alpha > 0.0 && p.alpha < 1.0, "alpha", "0 < alpha < 1", p.alpha)?;
    require(p.theta > 0.0, "theta", "theta > 0", p.theta)?;
    require(p.delta >= 0.0, "delta", "delta >= 0", p.delta)?;
    require(p.rho >= 0.0, "rho", "rho >= 0", p.rho)?;
    let zeta = p.zeta();
    if zeta <= 0.0 {
        return Err(GrowthError::ZetaNonPositive(zeta));
    }
    let r = p.steady_state_return();
    let s = p.n + p.x + p.delta;
    let radicand = zeta * zeta + 4.0 * (1.0 - p.alpha) * (r / p.theta) * (r / p.alpha - s);
    if radicand < 0.0 {
        return Err(GrowthError::NegativeDiscriminant(radicand));
    }
    Ok(0.5 * radicand.sqrt() - 0.5 * zeta)
}

/// True when the convergence rates of the two models coincide at these
/// parameters: `(ρ + δ + θx)/θ = α(n + x + δ)` within `tol`.
pub fn coincidence_holds(p: &GrowthParams, tol: f64) -> bool {
    (p.steady_state_return() / p.theta - p.alpha * (p.n + p.x + p.delta)).abs() <= tol
}

/// Fixed technology rates for a locus scan.
#[derive(Debug, Clone, Copy)]
pub struct FixedRates {
    pub x: f64,
    pub n: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum LocusMode {
    /// Invert the constant-savings formula for `α`.
    Solow,
    /// For each grid `α`, find the `θ` that reproduces the target under
    /// the optimal-savings formula, holding `ρ` fixed.
    RckTheta { rho: f64 },
}

/// One parameter combination reproducing (or failing to reproduce) the
/// target convergence estimate.
#[derive(Debug, Clone, Copy)]
pub struct LocusPoint {
    pub alpha: f64,
    /// The matching fluctuation-aversion value, when one exists in the
    /// bracket.
    pub theta: Option<f64>,
    /// Recomputed convergence rate at the returned parameters.
    pub beta_check: Option<f64>,
}

/// Bisection target accuracy in β units.
const LOCUS_TOL: f64 = 1e-10;

/// Parameter combinations observationally equivalent to a target
/// convergence estimate `beta_hat`.
///
/// In `Solow` mode the answer is the single `α` solving the formula (if
/// it lies in the open unit interval); the grid is ignored. In
/// `RckTheta` mode every grid `α` is scanned for a matching `θ` over a
/// log-spaced bracket in `[1e-3, 1e3]`; scanning before bisecting avoids
/// skipping roots where the formula is not monotone, and grid points
/// with no admissible root are recorded with `theta: None` rather than
/// aborting the scan.
pub fn equivalence_locus(
    beta_hat: f64,
    fixed: &FixedRates,
    alpha_grid: &[f64],
    mode: LocusMode,
) -> Result<Vec<LocusPoint>, GrowthError> {
    require(beta_hat > 0.0, "beta_hat", "beta_hat > 0", beta_hat)?;
    let s = fixed.n + fixed.x + fixed.delta;
    require(s > 0.0, "n + x + delta", "n + x + delta > 0", s)?;
    match mode {
        LocusMode::Solow => {
            let alpha = 1.0 - beta_hat / s;
            if alpha > 0.0 && alpha < 1.0 {
                Ok(vec![LocusPoint {
                    alpha,
                    theta: None,
                    beta_check: Some((1.0 - alpha) * s),
                }])
            } else {
                Ok(vec![])
            }
        }
        LocusMode::RckTheta { rho } => {
            require(rho >= 0.0, "rho", "rho >= 0", rho)?;
            let mut out = Vec::with_capacity(alpha_grid.len());
            for &alpha in alpha_grid {
                require(alpha > 0.0 && alpha < 1.0, "alpha", "0 < alpha < 1", alpha)?;
                let eval = |theta: f64| -> Option<f64> {
                    let p = GrowthParams {
                        alpha,
                        x: fixed.x,
                        n: fixed.n,
                        delta: fixed.delta,
                        rho,
                        theta,
                    };
                    beta_rck(&p).ok().map(|b| b - beta_hat)
                };
                let theta = find_theta_root(&eval);
                let beta_check = theta.map(|t| beta_hat + eval(t).unwrap_or(f64::NAN));
                out.push(LocusPoint {
                    alpha,
                    theta,
                    beta_check,
                });
            }
            Ok(out)
        }
    }
}

/// Scans a log-spaced θ bracket for a sign change, then bisects the
/// first bracket found (smallest θ) down to [`LOCUS_TOL`] in β.
fn find_theta_root(eval: &dyn Fn(f64) -> Option<f64>) -> Option<f64> {
    const SCAN_POINTS: usize = 240;
    let log_lo = -3.0f64;
    let log_hi = 3.0f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=SCAN_POINTS {
        let theta = 10f64.powf(log_lo + (log_hi - log_lo) * i as f64 / SCAN_POINTS as f64);
        let Some(f) = eval(theta) else {
            prev = None;
            continue;
        };
        if f == 0.0 {
            return Some(theta);
        }
        if let Some((theta_prev, f_prev)) = prev {
            if f_prev * f < 0.0 {
                return bisect(eval, theta_prev, theta, f_prev);
            }
        }
        prev = Some((theta, f));
    }
    None
}

fn bisect(eval: &dyn Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64, f_lo: f64) -> Option<f64> {
    let mut sign_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if f_mid.abs() <= LOCUS_TOL {
            return Some(mid);
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
            sign_lo = f_mid.signum();
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    eval(mid).filter(|f| f.abs() <= 1e3 * LOCUS_TOL).map(|_| mid)
}
