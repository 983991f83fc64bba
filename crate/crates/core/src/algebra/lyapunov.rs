//! Discrete Lyapunov equation `Γ = T·Γ·Tᵀ + Q` by doubling.
//!
//! The doubling iteration `Γ ← Γ + A·Γ·Aᵀ, A ← A²` squares the geometric
//! series at every step, so a spectral radius bounded away from one
//! converges in a handful of iterations regardless of how many terms the
//! plain sum would need.

use super::{eigenvalues, AlgebraError, Matrix, STABILITY_BAND};

/// Solves `Γ0 − T·Γ0·Tᵀ = Q` for the stationary covariance `Γ0`.
///
/// `t` must have spectral radius below `1 − 1e-9` and `q` must be
/// symmetric (positive semidefiniteness is the caller's contract and is
/// preserved, not re-checked). The result is exactly symmetric.
pub fn lyapunov_solve(t: &Matrix, q: &Matrix) -> Result<Matrix, AlgebraError> {
    if !t.is_square() {
        return Err(AlgebraError::NonSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if q.rows() != t.rows() || q.cols() != t.cols() {
        return Err(AlgebraError::DimensionMismatch(format!(
            "q must be {0}x{0} to match t, got {1}x{2}",
            t.rows(),
            q.rows(),
            q.cols()
        )));
    }
    if !q.is_symmetric(1e-10) {
        return Err(AlgebraError::NonSymmetricQ);
    }
    if t.rows() == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let rho = eigenvalues(t)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if rho >= 1.0 - STABILITY_BAND {
        return Err(AlgebraError::UnstableTransition { rho });
    }
    let gamma = doubling(t, &q.symmetrize())?;
    // One refinement pass mops up rounding when Γ0 dwarfs Q.
    let residual = residual_of(t, q, &gamma)?;
    let correction = doubling(t, &residual.symmetrize())?;
    Ok(gamma.add(&correction)?.symmetrize())
}

fn doubling(t: &Matrix, q: &Matrix) -> Result<Matrix, AlgebraError> {
    let mut gamma = q.clone();
    let mut a = t.clone();
    for _ in 0..200 {
        let aga = a.matmul(&gamma)?.matmul(&a.transpose())?;
        gamma = gamma.add(&aga)?.symmetrize();
        let increment = aga.max_abs();
        if increment <= 1e-16 * gamma.max_abs().max(1e-300) {
            return Ok(gamma);
        }
        a = a.matmul(&a)?;
        if a.max_abs() < 1e-200 {
            return Ok(gamma);
        }
    }
    Err(AlgebraError::ConvergenceFailure)
}

fn residual_of(t: &Matrix, q: &Matrix, gamma: &Matrix) -> Result<Matrix, AlgebraError> {
    let tgt = t.matmul(gamma)?.matmul(&t.transpose())?;
    q.sub(&gamma.sub(&tgt)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn scalar_geometric_series() {
        let g = lyapunov_solve(&Matrix::scalar(0.5), &Matrix::scalar(1.0)).unwrap();
        assert!((g[(0, 0)] - 4.0 / 3.0).abs() < 1e-14);
        let g = lyapunov_solve(&Matrix::scalar(0.9), &Matrix::scalar(1.0)).unwrap();
        assert!((g[(0, 0)] - 1.0 / 0.19).abs() < 1e-12);
    }

    #[test]
    fn zero_transition_returns_q() {
        let q = Matrix::from_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        let g = lyapunov_solve(&Matrix::zeros(2, 2), &q).unwrap();
        assert!(g.sub(&q).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn rejects_unstable_and_asymmetric() {
        assert!(matches!(
            lyapunov_solve(&Matrix::scalar(1.0), &Matrix::scalar(1.0)),
            Err(AlgebraError::UnstableTransition { .. })
        ));
        let q = Matrix::from_rows(&[&[1.0, 0.2], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            lyapunov_solve(&Matrix::zeros(2, 2), &q),
            Err(AlgebraError::NonSymmetricQ)
        ));
    }

    #[test]
    fn matches_truncated_series_on_random_stable_systems() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            // Scale a random matrix to spectral radius ~0.8.
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let raw = Matrix::new(n, n, data).unwrap();
            let rho = crate::algebra::spectral_radius(&raw).unwrap();
            let t = raw.scale(if rho > 0.0 { 0.8 / rho } else { 0.0 });
            let mut q = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.gen_range(-0.5..0.5);
                    q[(i, j)] += v;
                    q[(j, i)] += v;
                }
                q[(i, i)] += 1.5;
            }
            let gamma = lyapunov_solve(&t, &q).unwrap();
            // Truncate the series once ρ^K drops below 1e-12.
            let k_max = ((-12.0f64) / 0.8f64.log10()).ceil() as usize;
            let mut series = q.clone();
            let mut p = t.clone();
            for _ in 0..k_max {
                series = series.add(&p.matmul(&q).unwrap().matmul(&p.transpose()).unwrap()).unwrap();
                p = p.matmul(&t).unwrap();
            }
            assert!(
                gamma.sub(&series).unwrap().max_abs() <= 1e-8 * gamma.max_abs().max(1.0),
                "doubling disagrees with truncated series"
            );
            // And the defining residual.
            let res = gamma
                .sub(&t.matmul(&gamma).unwrap().matmul(&t.transpose()).unwrap())
                .unwrap()
                .sub(&q)
                .unwrap();
            assert!(res.norm_inf() <= 1e-10 * q.norm_inf().max(1.0));
        }
    }
}
