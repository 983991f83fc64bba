//! Observational-equivalence certification between models.
//!
//! Two stationary Gaussian models are observationally equivalent exactly
//! when their observed autocovariance sequences agree, so the checker
//! compares `Γ_0 … Γ_K` under a relative tolerance. Equivalence here is
//! defined on second moments: that is what Gaussian likelihoods see, and
//! it is a documented limitation for non-Gaussian extensions.
//!
//! The module also houses the two catalog-level identification
//! ambiguities that a local rank analysis cannot detect: the discrete
//! `λ ↔ ρ` swap of the AR(2) factorisation, and the family maps that
//! send every forward-looking catalog model onto a backward AR(1) with a
//! rescaled innovation.

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{self, CatalogEntry, CatalogError};
use crate::remodel::{RemodelError, SecondOrderRepresentation};

/// Default lag horizon: AR(p ≤ 2) autocovariances are pinned down by
/// p + 1 values, so 20 lags adds slack without cost.
pub const DEFAULT_LAGS: usize = 20;
/// Default relative tolerance of the autocovariance comparison.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Error)]
pub enum EquivalenceError {
    #[error("input '{0}' is not strictly stable; boundary processes have no stationary moments")]
    UnstableInput(String),
    #[error("observed dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("factorisation is complex: S^2 - 4P = {discriminant} < 0")]
    ComplexFactorization { discriminant: f64 },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Remodel(#[from] RemodelError),
}

/// Outcome of an autocovariance comparison.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Largest relative discrepancy across the compared lags.
    pub max_discrepancy: f64,
    /// Number of lags compared (0..=lag_horizon).
    pub lag_horizon: usize,
    /// First lag whose discrepancy exceeds the tolerance, when any.
    pub witness_lag: Option<usize>,
    /// Relative discrepancy per lag, for diagnostics.
    pub per_lag: Vec<f64>,
}

/// Compares observed autocovariances of two second-order representations
/// at lags `0..=k_max` under relative tolerance `tol` (measured against
/// the larger of the two variance matrices).
pub fn check(
    a: &dyn SecondOrderRepresentation,
    b: &dyn SecondOrderRepresentation,
    k_max: usize,
    tol: f64,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    if !a.is_strictly_stable() {
        return Err(EquivalenceError::UnstableInput("first".into()));
    }
    if !b.is_strictly_stable() {
        return Err(EquivalenceError::UnstableInput("second".into()));
    }
    if a.observed_dim() != b.observed_dim() {
        return Err(EquivalenceError::DimensionMismatch(
            a.observed_dim(),
            b.observed_dim(),
        ));
    }
    let ga = a.observed_autocovariances(k_max)?;
    let gb = b.observed_autocovariances(k_max)?;
    let denom = ga[0].norm_inf().max(gb[0].norm_inf()).max(f64::MIN_POSITIVE);
    let mut per_lag = Vec::with_capacity(k_max + 1);
    let mut witness = None;
    let mut max_disc = 0.0f64;
    for k in 0..=k_max {
        let disc = ga[k].sub(&gb[k]).map_err(RemodelError::Algebra)?.norm_inf() / denom;
        per_lag.push(disc);
        max_disc = max_disc.max(disc);
        if witness.is_none() && disc > tol {
            witness = Some(k);
        }
    }
    Ok(EquivalenceVerdict {
        equivalent: witness.is_none(),
        max_discrepancy: max_disc,
        lag_horizon: k_max,
        witness_lag: witness,
        per_lag,
    })
}

/// Both factorisations of an AR(2) polynomial with sum `S = λ + ρ` and
/// product `P = λ·ρ`: the two assignments are observationally identical,
/// the executable form of the swap ambiguity. A zero discriminant
/// collapses to the single repeated pair.
pub fn ar2_factorizations(s: f64, p: f64) -> Result<Vec<(f64, f64)>, EquivalenceError> {
    let discriminant = s * s - 4.0 * p;
    if discriminant < 0.0 {
        return Err(EquivalenceError::ComplexFactorization { discriminant });
    }
    let sq = discriminant.sqrt();
    let hi = (s + sq) / 2.0;
    let lo = (s - sq) / 2.0;
    if sq == 0.0 {
        return Ok(vec![(hi, lo)]);
    }
    Ok(vec![(hi, lo), (lo, hi)])
}

/// The backward AR(1) parameterisation with the same reduced form as a
/// forward-looking catalog entry: the autocorrelation comes from the
/// shock process and the expectation parameter survives only inside the
/// innovation scale.
pub fn mapped_adaptive(entry: &CatalogEntry) -> Result<Option<CatalogEntry>, EquivalenceError> {
    Ok(match entry {
        CatalogEntry::Mr1 { beta, rho, sigma } => Some(CatalogEntry::Ma1 {
            lambda: *rho,
            sigma: sigma / (1.0 - beta * rho),
        }),
        CatalogEntry::Mr2 { beta, b, sigma } => {
            let (mu1, _) = catalog::hybrid_roots(*beta, *b)?;
            Some(CatalogEntry::Ma1 {
                lambda: mu1,
                sigma: sigma / (1.0 - beta * mu1),
            })
        }
        CatalogEntry::Mr3 { a, sigma_w } => sigma_w.map(|s| CatalogEntry::Ma1 {
            lambda: 1.0 / a,
            sigma: s,
        }),
        _ => None,
    })
}

/// Representative β used when a family needs one more parameter than the
/// reduced form pins down.
const REPRESENTATIVE_BETA: f64 = 0.5;

/// Representative parameterisations of every catalog family sharing the
/// entry's reduced form, each carrying the explicit parameter map.
///
/// AR(1) forms admit all of `MA1`, `MA2`, `MR1`, `MR2` and `MR3`
/// rewrites (the forward families at the representative β); AR(2) forms
/// admit the `MA3`/`MA4`/`MA5` chain plus the swapped `MA5`. Families
/// whose parameter ranges cannot host the reduced form are omitted.
pub fn equivalence_class(entry: &CatalogEntry) -> Result<Vec<CatalogEntry>, EquivalenceError> {
    let reduced = catalog::reduce(entry)?;
    let sigma_inn = reduced.innovation_variance.sqrt();
    let mut out = Vec::new();
    match reduced.order() {
        1 => {
            let phi = reduced.coefficients[0];
            if phi <= 0.0 || phi >= 1.0 {
                return Ok(out);
            }
            out.push(CatalogEntry::Ma1 {
                lambda: phi,
                sigma: sigma_inn,
            });
            out.push(CatalogEntry::Ma2 {
                rho: phi,
                sigma: sigma_inn,
            });
            let beta = REPRESENTATIVE_BETA;
            out.push(CatalogEntry::Mr1 {
                beta,
                rho: phi,
                sigma: sigma_inn * (1.0 - beta * phi),
            });
            // Invert μ(β, b): b = μ(1 − βμ), admissible whenever μ < 1.
            let b = phi * (1.0 - beta * phi);
            if b > 0.0 && b < 1.0 - beta {
                out.push(CatalogEntry::Mr2 {
                    beta,
                    b,
                    sigma: sigma_inn * (1.0 - beta * phi),
                });
            }
            out.push(CatalogEntry::Mr3 {
                a: 1.0 / phi,
                sigma_w: Some(sigma_inn),
            });
        }
        2 => {
            let s = reduced.coefficients[0];
            let p = -reduced.coefficients[1];
            for (lambda, rho) in ar2_factorizations(s, p)? {
                if !(lambda > 0.0 && lambda < 1.0 && rho > 0.0 && rho < 1.0) {
                    continue;
                }
                if out.is_empty() {
                    out.push(CatalogEntry::Ma3 {
                        lambda,
                        rho,
                        sigma: sigma_inn,
                    });
                    out.push(CatalogEntry::Ma4 {
                        lambda,
                        rho,
                        sigma: sigma_inn,
                    });
                }
                out.push(CatalogEntry::Ma5 {
                    lambda,
                    rho,
                    sigma: sigma_inn,
                });
            }
        }
        _ => {}
    }
    // Every member must reproduce the reduced form it came from.
    out.retain(|candidate| match catalog::reduce(candidate) {
        Ok(r) => {
            r.order() == reduced.order()
                && r.coefficients
                    .iter()
                    .zip(&reduced.coefficients)
                    .all(|(x, y)| (x - y).abs() <= 1e-10 * y.abs().max(1.0))
                && (r.innovation_variance - reduced.innovation_variance).abs()
                    <= 1e-10 * reduced.innovation_variance
        }
        Err(_) => false,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ARProcess;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn reduce(entry: &CatalogEntry) -> ARProcess {
        catalog::reduce(entry).unwrap()
    }

    #[test]
    fn forward_shock_model_equivalent_to_mapped_backward_form() {
        let mr1 = CatalogEntry::Mr1 {
            beta: 0.99,
            rho: 0.9,
            sigma: 1.0,
        };
        let mapped = mapped_adaptive(&mr1).unwrap().unwrap();
        let verdict = check(&reduce(&mr1), &reduce(&mapped), DEFAULT_LAGS, 1e-10).unwrap();
        assert!(verdict.equivalent);
        assert!(verdict.max_discrepancy <= 1e-10);
    }

    #[test]
    fn hybrid_model_equivalent_to_mapped_backward_form() {
        let mr2 = CatalogEntry::Mr2 {
            beta: 0.5,
            b: 0.3,
            sigma: 1.0,
        };
        let mapped = mapped_adaptive(&mr2).unwrap().unwrap();
        let verdict = check(&reduce(&mr2), &reduce(&mapped), DEFAULT_LAGS, 1e-10).unwrap();
        assert!(verdict.equivalent);
        // The mapped scale is 1/(1 − β·μ1) on the unit innovation.
        match mapped {
            CatalogEntry::Ma1 { lambda, sigma } => {
                assert!((lambda - 0.36754).abs() < 1e-5);
                assert!((sigma - 1.2251).abs() < 1e-4);
            }
            other => panic!("unexpected mapping {other:?}"),
        }
    }

    #[test]
    fn distinct_autocorrelations_fail_with_witness_lag_one() {
        let a = ARProcess::new(vec![0.9], 1.0, "a").unwrap();
        let b = ARProcess::new(vec![0.8], 1.0, "b").unwrap();
        let verdict = check(&a, &b, DEFAULT_LAGS, DEFAULT_TOL).unwrap();
        assert!(!verdict.equivalent);
        // Lag 0 differs too (Γ0 = 1/(1−φ²)); matching the variances
        // pins the first discrepancy to lag 1.
        let matched_b = ARProcess::new(vec![0.8], (1.0 - 0.64f64) / (1.0 - 0.81), "b").unwrap();
        let verdict = check(&a, &matched_b, DEFAULT_LAGS, DEFAULT_TOL).unwrap();
        assert_eq!(verdict.witness_lag, Some(1));
    }

    #[test]
    fn rejects_boundary_inputs() {
        let unit_root = ARProcess::new(vec![1.0], 1.0, "rw").unwrap();
        let other = ARProcess::new(vec![0.5], 1.0, "ok").unwrap();
        assert!(matches!(
            check(&unit_root, &other, 4, 1e-8),
            Err(EquivalenceError::UnstableInput(_))
        ));
    }

    #[test]
    fn swap_factorizations_of_known_polynomial() {
        let pairs = ar2_factorizations(1.3, 0.4).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].0 - 0.8).abs() < 1e-12);
        assert!((pairs[0].1 - 0.5).abs() < 1e-12);
        assert!((pairs[1].0 - 0.5).abs() < 1e-12);
        assert!((pairs[1].1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn repeated_root_collapses_to_single_pair() {
        let lambda = 0.6;
        let pairs = ar2_factorizations(2.0 * lambda, lambda * lambda).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0], (lambda, lambda));
    }

    #[test]
    fn complex_factorization_is_an_error() {
        assert!(matches!(
            ar2_factorizations(1.0, 0.5),
            Err(EquivalenceError::ComplexFactorization { .. })
        ));
    }

    #[test]
    fn swapped_parameterisations_share_the_reduced_form() {
        let a = reduce(&CatalogEntry::Ma5 {
            lambda: 0.8,
            rho: 0.5,
            sigma: 1.0,
        });
        let b = reduce(&CatalogEntry::Ma5 {
            lambda: 0.5,
            rho: 0.8,
            sigma: 1.0,
        });
        let verdict = check(&a, &b, DEFAULT_LAGS, 1e-12).unwrap();
        assert!(verdict.equivalent);
        assert_eq!(verdict.max_discrepancy, 0.0);
    }

    #[test]
    fn class_of_backward_ar1_contains_forward_rewrites() {
        let class = equivalence_class(&CatalogEntry::Ma1 {
            lambda: 0.9,
            sigma: 1.0,
        })
        .unwrap();
        let has_mr1 = class.iter().any(|e| {
            matches!(e, CatalogEntry::Mr1 { beta, rho, sigma }
                if *beta == 0.5 && *rho == 0.9 && (*sigma - (1.0 - 0.45)).abs() < 1e-12)
        });
        assert!(has_mr1, "missing forward-shock rewrite in {class:?}");
        let reduced = reduce(&CatalogEntry::Ma1 {
            lambda: 0.9,
            sigma: 1.0,
        });
        for member in &class {
            let verdict = check(&reduced, &reduce(member), DEFAULT_LAGS, 1e-9).unwrap();
            assert!(verdict.equivalent, "member {member:?} not equivalent");
        }
    }

    #[test]
    fn class_of_sunspot_solution_contains_backward_ar1() {
        let class = equivalence_class(&CatalogEntry::Mr3 {
            a: 2.0,
            sigma_w: Some(1.0),
        })
        .unwrap();
        assert!(class.iter().any(|e| {
            matches!(e, CatalogEntry::Ma1 { lambda, sigma }
                if (*lambda - 0.5).abs() < 1e-12 && (*sigma - 1.0).abs() < 1e-12)
        }));
    }

    #[test]
    fn class_of_lag_plus_shock_model_contains_swap_and_ar2_families() {
        let class = equivalence_class(&CatalogEntry::Ma5 {
            lambda: 0.8,
            rho: 0.5,
            sigma: 1.0,
        })
        .unwrap();
        let has_ma3 = class.iter().any(|e| {
            matches!(e, CatalogEntry::Ma3 { lambda, rho, .. }
                if (*lambda - 0.8).abs() < 1e-9 && (*rho - 0.5).abs() < 1e-9)
        });
        let has_swap = class.iter().any(|e| {
            matches!(e, CatalogEntry::Ma5 { lambda, rho, .. }
                if (*lambda - 0.5).abs() < 1e-9 && (*rho - 0.8).abs() < 1e-9)
        });
        assert!(has_ma3 && has_swap, "class incomplete: {class:?}");
    }

    #[test]
    fn check_is_symmetric_and_reflexive() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..50 {
            let a = ARProcess::new(vec![rng.gen_range(-0.9..0.9)], rng.gen_range(0.1..4.0), "a")
                .unwrap();
            let b = ARProcess::new(vec![rng.gen_range(-0.9..0.9)], rng.gen_range(0.1..4.0), "b")
                .unwrap();
            let ab = check(&a, &b, 10, 1e-8).unwrap();
            let ba = check(&b, &a, 10, 1e-8).unwrap();
            assert_eq!(ab.equivalent, ba.equivalent);
            assert!((ab.max_discrepancy - ba.max_discrepancy).abs() < 1e-15);
            let aa = check(&a, &a, 10, 1e-12).unwrap();
            assert!(aa.equivalent);
            assert_eq!(aa.max_discrepancy, 0.0);
        }
    }

    #[test]
    fn forward_families_map_onto_backward_ar1_over_random_draws() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..200 {
            let beta = rng.gen_range(0.01..0.99);
            let rho = rng.gen_range(0.01..0.99);
            let mr1 = CatalogEntry::Mr1 { beta, rho, sigma: rng.gen_range(0.2..3.0) };
            let mapped = mapped_adaptive(&mr1).unwrap().unwrap();
            let verdict = check(&reduce(&mr1), &reduce(&mapped), DEFAULT_LAGS, 1e-10).unwrap();
            assert!(verdict.equivalent, "failed at beta={beta} rho={rho}");
        }
        for _ in 0..200 {
            let beta = rng.gen_range(0.01..0.99);
            let b = rng.gen_range(1e-4..(1.0 - beta) * 0.999);
            let mr2 = CatalogEntry::Mr2 { beta, b, sigma: rng.gen_range(0.2..3.0) };
            let mapped = mapped_adaptive(&mr2).unwrap().unwrap();
            let verdict = check(&reduce(&mr2), &reduce(&mapped), DEFAULT_LAGS, 1e-10).unwrap();
            assert!(verdict.equivalent, "failed at beta={beta} b={b}");
        }
    }

    #[test]
    fn estimable_autocorrelation_is_the_shock_parameter() {
        // The reduced-form coefficient carries ρ bit-for-bit; the
        // expectation parameter moves only the innovation variance.
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let beta = rng.gen_range(0.01..0.99);
            let rho = rng.gen_range(0.01..0.99);
            let sigma = rng.gen_range(0.2..2.0);
            let reduced = reduce(&CatalogEntry::Mr1 { beta, rho, sigma });
            assert_eq!(reduced.coefficients, vec![rho]);
            // Raising β leaves the coefficient untouched and strictly
            // inflates the variance.
            let beta_hi = (beta + 0.005).min(0.995);
            let reduced_hi = reduce(&CatalogEntry::Mr1 { beta: beta_hi, rho, sigma });
            assert_eq!(reduced_hi.coefficients, vec![rho]);
            assert!(reduced_hi.innovation_variance > reduced.innovation_variance);
        }
    }
}
