//! Simulation, AR least-squares estimation, and conditional Gaussian
//! log-likelihoods.
//!
//! The generator contract is deterministic reproducibility from a 64-bit
//! seed: paths come from a ChaCha12 stream (`rand_chacha`) with Gaussian
//! innovations, replication `r` reseeding at `seed + r`. Tests assert
//! statistical properties of the draws, never bit-exact streams, so the
//! generator choice is an implementation detail a port may change.
//!
//! Simulation emits the first observed coordinate of the generator; all
//! catalog models observe a single series, and that is the estimation
//! target throughout. There is no intercept in the AR regressions: every
//! generator in scope is mean zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::algebra::{psd_factor, AlgebraError, Matrix, STABILITY_BAND};
use crate::catalog::ARProcess;
use crate::remodel::{RemodelError, StateSpaceForm};

#[derive(Debug, Clone, Error)]
pub enum MonteCarloError {
    #[error("generator is not strictly stable (spectral radius {0})")]
    UnstableGenerator(f64),
    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
    #[error("series too short: {got} observations for order {order} (need > {need})")]
    SeriesTooShort {
        got: usize,
        order: usize,
        need: usize,
    },
    #[error("regressor matrix is singular (constant or degenerate series)")]
    SingularRegressor,
    #[error("AR process is not strictly stable")]
    UnstableProcess,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Remodel(#[from] RemodelError),
}

/// What to simulate: a scalar AR process or a stacked state space.
#[derive(Debug, Clone)]
pub enum Generator {
    Ar(ARProcess),
    StateSpace(StateSpaceForm),
}

impl Generator {
    fn order_hint(&self) -> usize {
        match self {
            Generator::Ar(p) => p.order(),
            Generator::StateSpace(ss) => ss.state_dim(),
        }
    }
}

/// Simulation request. `replications` belongs to the contract of callers
/// that loop with derived seeds (`seed + replication index`); `simulate`
/// itself produces the single path for `seed`.
#[derive(Debug, Clone)]
pub struct SimSpec {
    pub generator: Generator,
    /// Sample length after burn-in.
    pub t: usize,
    /// Pre-sample draws discarded so the recorded path starts at the
    /// stationary distribution.
    pub burn_in: usize,
    pub seed: u64,
    pub replications: usize,
}

impl SimSpec {
    pub fn new(generator: Generator, t: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            generator,
            t,
            burn_in,
            seed,
            replications: 1,
        }
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    fn validate(&self) -> Result<(), MonteCarloError> {
        let min_t = 10 * (self.generator.order_hint() + 1);
        if self.t <= min_t {
            return Err(MonteCarloError::InvalidSpec(format!(
                "t = {} must exceed 10·(order+1) = {min_t}",
                self.t
            )));
        }
        if self.burn_in < 100 {
            return Err(MonteCarloError::InvalidSpec(format!(
                "burn_in = {} must be at least 100",
                self.burn_in
            )));
        }
        if self.replications < 1 {
            return Err(MonteCarloError::InvalidSpec(
                "replications must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Simulates one path; deterministic in `(seed, generator, t, burn_in)`.
pub fn simulate(spec: &SimSpec) -> Result<Vec<f64>, MonteCarloError> {
    spec.validate()?;
    simulate_with_seed(spec, spec.seed)
}

/// Simulates the full replication set with derived seeds.
pub fn simulate_replications(spec: &SimSpec) -> Result<Vec<Vec<f64>>, MonteCarloError> {
    spec.validate()?;
    (0..spec.replications)
        .map(|r| simulate_with_seed(spec, spec.seed.wrapping_add(r as u64)))
        .collect()
}

fn simulate_with_seed(spec: &SimSpec, seed: u64) -> Result<Vec<f64>, MonteCarloError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match &spec.generator {
        Generator::Ar(process) => {
            if process.boundary {
                return Err(MonteCarloError::UnstableGenerator(1.0));
            }
            let p = process.order();
            let sd = process.innovation_variance.sqrt();
            let mut history = vec![0.0f64; p.max(1)];
            let mut out = Vec::with_capacity(spec.t);
            for step in 0..(spec.burn_in + spec.t) {
                let mut next = sd * rng.sample::<f64, _>(StandardNormal);
                for (lag, phi) in process.coefficients.iter().enumerate() {
                    next += phi * history[lag];
                }
                history.rotate_right(1);
                history[0] = next;
                if step >= spec.burn_in {
                    out.push(next);
                }
            }
            Ok(out)
        }
        Generator::StateSpace(ss) => {
            let rho = ss.spectral_radius()?;
            if rho >= 1.0 - STABILITY_BAND {
                return Err(MonteCarloError::UnstableGenerator(rho));
            }
            let factor = psd_factor(&ss.innovation_cov)?;
            let shock_dim = factor.cols();
            let state_dim = ss.state_dim();
            let mut state = vec![0.0f64; state_dim];
            let mut next_state = vec![0.0f64; state_dim];
            let mut shock = vec![0.0f64; shock_dim];
            let mut out = Vec::with_capacity(spec.t);
            for step in 0..(spec.burn_in + spec.t) {
                let z: Vec<f64> = (0..shock_dim)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect();
                // Correlated shocks w = F·z with F·Fᵀ the shock covariance.
                for (q, w) in shock.iter_mut().enumerate() {
                    *w = (0..shock_dim).map(|l| factor[(q, l)] * z[l]).sum();
                }
                for i in 0..state_dim {
                    let mut acc = 0.0;
                    for j in 0..state_dim {
                        acc += ss.transition[(i, j)] * state[j];
                    }
                    for (q, w) in shock.iter().enumerate() {
                        acc += ss.shock_loading[(i, q)] * w;
                    }
                    next_state[i] = acc;
                }
                std::mem::swap(&mut state, &mut next_state);
                if step >= spec.burn_in {
                    let mut y0 = 0.0;
                    for j in 0..state_dim {
                        y0 += ss.observation_selector[(0, j)] * state[j];
                    }
                    out.push(y0);
                }
            }
            Ok(out)
        }
    }
}

/// Least-squares AR(p) fit with conventional standard errors.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// Maximum-likelihood innovation variance (residual sum of squares
    /// over the effective sample).
    pub innovation_variance_hat: f64,
    /// Conditional Gaussian log-likelihood at the estimates.
    pub loglik: f64,
}

pub fn fit_ar(series: &[f64], p: usize) -> Result<FitResult, MonteCarloError> {
    let t = series.len();
    if t <= 10 * (p + 1) {
        return Err(MonteCarloError::SeriesTooShort {
            got: t,
            order: p,
            need: 10 * (p + 1),
        });
    }
    let t_eff = t - p;
    // A series without sample variation cannot pin down an AR
    // regression that has no intercept.
    let first = series[0];
    if series.iter().all(|y| *y == first) {
        return Err(MonteCarloError::SingularRegressor);
    }
    if p == 0 {
        let ssr: f64 = series.iter().map(|y| y * y).sum();
        let variance = ssr / t_eff as f64;
        if variance <= 0.0 {
            return Err(MonteCarloError::SingularRegressor);
        }
        return Ok(FitResult {
            coefficients: vec![],
            standard_errors: vec![],
            innovation_variance_hat: variance,
            loglik: gaussian_loglik(t_eff, ssr, variance),
        });
    }
    // Normal equations on the lag matrix; p is tiny so the Gram matrix
    // route is fine.
    let mut xtx = Matrix::zeros(p, p);
    let mut xty = Matrix::zeros(p, 1);
    for t_idx in p..t {
        for i in 0..p {
            let xi = series[t_idx - 1 - i];
            xty[(i, 0)] += xi * series[t_idx];
            for j in 0..p {
                xtx[(i, j)] += xi * series[t_idx - 1 - j];
            }
        }
    }
    if xtx.reciprocal_condition_estimate() < 1e-13 {
        return Err(MonteCarloError::SingularRegressor);
    }
    let beta = xtx
        .solve(&xty)
        .map_err(|_| MonteCarloError::SingularRegressor)?;
    let coefficients: Vec<f64> = (0..p).map(|i| beta[(i, 0)]).collect();
    let mut ssr = 0.0;
    for t_idx in p..t {
        let mut fitted = 0.0;
        for (i, phi) in coefficients.iter().enumerate() {
            fitted += phi * series[t_idx - 1 - i];
        }
        let resid = series[t_idx] - fitted;
        ssr += resid * resid;
    }
    let dof = t_eff.saturating_sub(p).max(1);
    let s2 = ssr / dof as f64;
    let xtx_inv = xtx.inverse().map_err(|_| MonteCarloError::SingularRegressor)?;
    let standard_errors: Vec<f64> = (0..p).map(|i| (s2 * xtx_inv[(i, i)]).sqrt()).collect();
    let variance_mle = ssr / t_eff as f64;
    if variance_mle <= 0.0 {
        return Err(MonteCarloError::SingularRegressor);
    }
    Ok(FitResult {
        coefficients,
        standard_errors,
        innovation_variance_hat: variance_mle,
        loglik: gaussian_loglik(t_eff, ssr, variance_mle),
    })
}

/// Conditional Gaussian log-likelihood of `series` under an AR process,
/// conditioning on the first `p` observations.
pub fn loglik(series: &[f64], process: &ARProcess) -> Result<f64, MonteCarloError> {
    if process.boundary {
        return Err(MonteCarloError::UnstableProcess);
    }
    let p = process.order();
    if series.len() <= p {
        return Err(MonteCarloError::SeriesTooShort {
            got: series.len(),
            order: p,
            need: p,
        });
    }
    let t_eff = series.len() - p;
    let mut ssr = 0.0;
    for t_idx in p..series.len() {
        let mut fitted = 0.0;
        for (i, phi) in process.coefficients.iter().enumerate() {
            fitted += phi * series[t_idx - 1 - i];
        }
        let resid = series[t_idx] - fitted;
        ssr += resid * resid;
    }
    Ok(gaussian_loglik(t_eff, ssr, process.innovation_variance))
}

fn gaussian_loglik(t_eff: usize, ssr: f64, variance: f64) -> f64 {
    let n = t_eff as f64;
    -0.5 * n * (2.0 * std::f64::consts::PI * variance).ln() - ssr / (2.0 * variance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, CatalogEntry};
    use crate::remodel::{solve, to_state_space};

    fn ar(coeffs: Vec<f64>, variance: f64) -> ARProcess {
        ARProcess::new(coeffs, variance, "test").unwrap()
    }

    #[test]
    fn white_noise_has_negligible_autocorrelation() {
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.0], 1.0)), 20_000, 200, 7);
        let y = simulate(&spec).unwrap();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / y.len() as f64;
        let cov1 = y
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / (y.len() - 1) as f64;
        let rho1 = cov1 / var;
        assert!(rho1.abs() < 3.0 / (y.len() as f64).sqrt());
    }

    #[test]
    fn persistent_ar1_sample_variance_matches_theory() {
        let t = 100_000;
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.9], 1.0)), t, 500, 42);
        let y = simulate(&spec).unwrap();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / y.len() as f64;
        let gamma0 = 1.0 / (1.0 - 0.81);
        // SE of the sample variance of an AR(1) is about
        // γ0·√(2(1+ρ²)/((1−ρ²)·T)).
        let se = gamma0 * (2.0 * (1.0 + 0.81) / ((1.0 - 0.81) * t as f64)).sqrt();
        assert!(
            (var - gamma0).abs() < 3.0 * se,
            "sample variance {var} vs {gamma0} (se {se})"
        );
    }

    #[test]
    fn identical_seeds_reproduce_paths_exactly() {
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.5], 2.0)), 500, 150, 99);
        assert_eq!(simulate(&spec).unwrap(), simulate(&spec).unwrap());
        let ss = to_state_space(
            &solve(&catalog::build(&CatalogEntry::Mr1 { beta: 0.9, rho: 0.5, sigma: 1.0 }).unwrap())
                .unwrap(),
            &catalog::build(&CatalogEntry::Mr1 { beta: 0.9, rho: 0.5, sigma: 1.0 }).unwrap(),
        )
        .unwrap();
        let spec = SimSpec::new(Generator::StateSpace(ss), 500, 150, 99);
        assert_eq!(simulate(&spec).unwrap(), simulate(&spec).unwrap());
    }

    #[test]
    fn rejects_unstable_generator_and_bad_specs() {
        let boundary = ARProcess::new(vec![1.0], 1.0, "rw").unwrap();
        let spec = SimSpec::new(Generator::Ar(boundary), 1_000, 100, 1);
        assert!(matches!(
            simulate(&spec),
            Err(MonteCarloError::UnstableGenerator(_))
        ));
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.5], 1.0)), 15, 100, 1);
        assert!(matches!(simulate(&spec), Err(MonteCarloError::InvalidSpec(_))));
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.5], 1.0)), 1_000, 10, 1);
        assert!(matches!(simulate(&spec), Err(MonteCarloError::InvalidSpec(_))));
    }

    #[test]
    fn ar2_estimates_recover_generator_within_three_standard_errors() {
        let reduced = catalog::reduce(&CatalogEntry::Ma5 {
            lambda: 0.8,
            rho: 0.5,
            sigma: 1.0,
        })
        .unwrap();
        let spec = SimSpec::new(Generator::Ar(reduced), 100_000, 500, 2024);
        let y = simulate(&spec).unwrap();
        let fit = fit_ar(&y, 2).unwrap();
        assert!((fit.coefficients[0] - 1.3).abs() < 3.0 * fit.standard_errors[0]);
        assert!((fit.coefficients[1] + 0.4).abs() < 3.0 * fit.standard_errors[1]);
    }

    #[test]
    fn structural_simulation_recovers_shock_autocorrelation_not_discount() {
        // The estimable coefficient of the forward-shock model is ρ; the
        // expectation parameter is visible only through the innovation
        // variance N²·σ².
        let entry = CatalogEntry::Mr1 { beta: 0.99, rho: 0.9, sigma: 1.0 };
        let model = catalog::build(&entry).unwrap();
        let ss = to_state_space(&solve(&model).unwrap(), &model).unwrap();
        let spec = SimSpec::new(Generator::StateSpace(ss), 100_000, 500, 11);
        let y = simulate(&spec).unwrap();
        let fit = fit_ar(&y, 1).unwrap();
        assert!((fit.coefficients[0] - 0.9).abs() < 3.0 * fit.standard_errors[0]);
        let n = 1.0 / (1.0 - 0.99 * 0.9);
        let rel = (fit.innovation_variance_hat - n * n).abs() / (n * n);
        assert!(rel < 0.05, "variance off by {rel}");
    }

    #[test]
    fn pure_noise_fit_finds_no_persistence() {
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.0], 1.0)), 50_000, 200, 5);
        let y = simulate(&spec).unwrap();
        let fit = fit_ar(&y, 1).unwrap();
        assert!(fit.coefficients[0].abs() < 3.0 * fit.standard_errors[0]);
    }

    #[test]
    fn constant_series_is_singular() {
        let series = vec![1.0; 500];
        assert!(matches!(
            fit_ar(&series, 1),
            Err(MonteCarloError::SingularRegressor)
        ));
    }

    #[test]
    fn loglik_identical_for_identical_reduced_forms() {
        let entry = CatalogEntry::Mr1 { beta: 0.7, rho: 0.6, sigma: 1.3 };
        let reduced = catalog::reduce(&entry).unwrap();
        let mapped = crate::equivalence::mapped_adaptive(&entry).unwrap().unwrap();
        let mapped_reduced = catalog::reduce(&mapped).unwrap();
        let spec = SimSpec::new(Generator::Ar(reduced.clone()), 2_000, 200, 3);
        let y = simulate(&spec).unwrap();
        let l1 = loglik(&y, &reduced).unwrap();
        let l2 = loglik(&y, &mapped_reduced).unwrap();
        assert_eq!(l1, l2);
    }

    #[test]
    fn loglik_prefers_the_true_generator_on_average() {
        let truth = ar(vec![0.8], 1.0);
        let perturbed = ar(vec![0.7], 1.0);
        let mut wins = 0;
        for rep in 0..100 {
            let spec = SimSpec::new(Generator::Ar(truth.clone()), 2_000, 200, 1_000 + rep);
            let y = simulate(&spec).unwrap();
            if loglik(&y, &truth).unwrap() > loglik(&y, &perturbed).unwrap() {
                wins += 1;
            }
        }
        assert!(wins > 90, "true model won only {wins}/100");
    }

    #[test]
    fn loglik_needs_more_than_order_observations() {
        let process = ar(vec![0.5, 0.1], 1.0);
        let short = vec![1.0, -0.5];
        assert!(matches!(
            loglik(&short, &process),
            Err(MonteCarloError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn estimation_error_shrinks_with_sample_size() {
        let mut improved = 0;
        let reps = 200;
        for rep in 0..reps {
            let small = SimSpec::new(Generator::Ar(ar(vec![0.8], 1.0)), 1_000, 200, 40_000 + rep);
            let large = SimSpec::new(Generator::Ar(ar(vec![0.8], 1.0)), 100_000, 200, 80_000 + rep);
            let fit_small = fit_ar(&simulate(&small).unwrap(), 1).unwrap();
            let fit_large = fit_ar(&simulate(&large).unwrap(), 1).unwrap();
            if (fit_large.coefficients[0] - 0.8).abs() < (fit_small.coefficients[0] - 0.8).abs() {
                improved += 1;
            }
        }
        assert!(
            improved as f64 >= 0.95 * reps as f64,
            "large sample better in only {improved}/{reps}"
        );
    }

    #[test]
    fn replication_estimates_are_serially_independent() {
        let spec = SimSpec::new(Generator::Ar(ar(vec![0.8], 1.0)), 2_000, 200, 777)
            .with_replications(200);
        let paths = simulate_replications(&spec).unwrap();
        let estimates: Vec<f64> = paths
            .iter()
            .map(|y| fit_ar(y, 1).unwrap().coefficients[0])
            .collect();
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let var: f64 = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>();
        let cov1: f64 = estimates
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>();
        let rho1 = cov1 / var;
        assert!(rho1.abs() < 0.1, "lag-1 correlation of estimates {rho1}");
    }
}
