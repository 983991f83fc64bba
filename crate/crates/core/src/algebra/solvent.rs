//! Stable solvent of the quadratic matrix equation
//! `A1·C² − A0·C + A2 = 0`.
//!
//! Any eigenpair `(μ, v)` of a solvent satisfies
//! `(A1·μ² − A0·μ + A2)·v = 0`, so the candidate spectra are exactly the
//! roots of the pencil determinant `p(μ) = det(A1·μ² − A0·μ + A2)`. The
//! solver extracts those roots (closed form in the scalar case,
//! interpolated determinant plus companion eigenvalues otherwise), keeps
//! the `n` of smallest modulus inside the unit circle, rebuilds
//! `C = V·diag(μ)·V⁻¹` from the matching null vectors, and polishes with
//! one Newton step. A fixed-point fallback (`C ← (A0 − A1·C)⁻¹·A2`)
//! covers defective root clusters.

use num_complex::Complex64;

use super::eigen::CMat;
use super::{
    classify_modulus, polynomial_roots, quadratic_roots, solve_sylvester,
    AlgebraError, Matrix, RootClass,
};

/// Residual tolerance for an accepted solvent, relative to
/// `max(‖A0‖∞, 1)`.
const RESIDUAL_TOL: f64 = 1e-10;

/// Relative threshold below which a leading determinant coefficient is
/// treated as a vanished degree (an infinite root of the pencil).
const LEADING_COEFF_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct SolventResult {
    /// The stable solvent `C`.
    pub solvent: Matrix,
    /// `‖A1·C² − A0·C + A2‖∞` of the returned solvent.
    pub residual: f64,
    /// Spectral radius of the returned solvent.
    pub spectral_radius: f64,
    /// More stable candidate roots existed than the solvent could absorb;
    /// the returned solvent is the minimal-spectral-radius choice.
    pub multiple_stable: bool,
    /// A selected root sits on the unit circle within tolerance.
    pub boundary: bool,
}

/// Strict form: every eigenvalue of the returned solvent lies strictly
/// inside the unit circle. Roots on the circle are not usable, so a
/// pencil whose only candidates touch the circle reports
/// [`AlgebraError::NoStableSolvent`].
pub fn quadratic_solvent(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
) -> Result<SolventResult, AlgebraError> {
    solvent_impl(a1, a0, a2, false)
}

/// Variant that admits unit-circle roots into the solvent and flags them,
/// for callers that must report limit cases instead of refusing them.
pub fn quadratic_solvent_allowing_boundary(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
) -> Result<SolventResult, AlgebraError> {
    solvent_impl(a1, a0, a2, true)
}

fn solvent_impl(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
    allow_boundary: bool,
) -> Result<SolventResult, AlgebraError> {
    let n = a0.rows();
    for (name, m) in [("a1", a1), ("a0", a0), ("a2", a2)] {
        if !m.is_square() || m.rows() != n {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{name} must be {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if a0.reciprocal_condition_estimate() < 1e-13 {
        return Err(AlgebraError::SingularA0);
    }
    if n == 0 {
        return Ok(SolventResult {
            solvent: Matrix::zeros(0, 0),
            residual: 0.0,
            spectral_radius: 0.0,
            multiple_stable: false,
            boundary: false,
        });
    }
    let scale = a0.norm_inf().max(1.0);

    // Degenerate linear case: the unique solvent is A0⁻¹·A2, kept exact.
    if a1.is_zero(0.0) {
        let c = a0.solve(a2)?;
        let radius = super::spectral_radius(&c)?;
        let class = classify_modulus(radius);
        if class == RootClass::Unstable || (!allow_boundary && class == RootClass::Boundary) {
            return Err(AlgebraError::NoStableSolvent);
        }
        let residual = residual_norm(a1, a0, a2, &c)?;
        return Ok(SolventResult {
            solvent: c,
            residual,
            spectral_radius: radius,
            multiple_stable: false,
            boundary: class == RootClass::Boundary,
        });
    }

    let (roots, _deficiency) = pencil_roots(a1, a0, a2)?;

    let mut pool: Vec<Complex64> = Vec::new();
    for r in &roots {
        match classify_modulus(r.norm()) {
            RootClass::Stable => pool.push(*r),
            RootClass::Boundary => {
                if allow_boundary {
                    pool.push(*r);
                }
            }
            RootClass::Unstable => {}
        }
    }
    if pool.len() < n {
        // A fixed-point pass cannot rescue this: a solvent needs n roots
        // inside the circle and they simply are not there.
        return Err(AlgebraError::NoStableSolvent);
    }
    pool.sort_by(|x, y| x.norm().total_cmp(&y.norm()).then(x.arg().total_cmp(&y.arg())));
    let multiple_stable = pool.len() > n;

    let selected = match select_conjugate_closed(&pool, n) {
        Some(s) => s,
        None => {
            // Give the fixed-point route a chance before failing.
            return fixed_point_result(a1, a0, a2, scale, multiple_stable, allow_boundary);
        }
    };
    let boundary = selected
        .iter()
        .any(|r| classify_modulus(r.norm()) == RootClass::Boundary);

    let mut solvent = match assemble(a1, a0, a2, &selected, n) {
        Some(c) => c,
        None => {
            return fixed_point_result(a1, a0, a2, scale, multiple_stable, allow_boundary);
        }
    };
    let mut residual = residual_norm(a1, a0, a2, &solvent)?;
    if residual > 0.5 * RESIDUAL_TOL * scale {
        if let Some(polished) = newton_polish(a1, a0, a2, &solvent) {
            let polished_residual = residual_norm(a1, a0, a2, &polished)?;
            if polished_residual < residual {
                solvent = polished;
                residual = polished_residual;
            }
        }
    }
    if residual > RESIDUAL_TOL * scale {
        return fixed_point_result(a1, a0, a2, scale, multiple_stable, allow_boundary);
    }
    let spectral_radius = super::spectral_radius(&solvent)?;
    Ok(SolventResult {
        solvent,
        residual,
        spectral_radius,
        multiple_stable,
        boundary,
    })
}

/// Coefficients of `det(A1·μ² − A0·μ + A2)` in ascending powers, length
/// `2n + 1`. The scalar case is the exact quadratic; larger systems
/// interpolate the determinant at roots of unity, which recovers the
/// coefficients through a unitary (hence well-conditioned) transform.
pub(crate) fn pencil_char_coefficients(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
) -> Result<Vec<f64>, AlgebraError> {
    let n = a0.rows();
    if n == 1 {
        return Ok(vec![a2[(0, 0)], -a0[(0, 0)], a1[(0, 0)]]);
    }
    let m = 2 * n + 1;
    let mut samples = Vec::with_capacity(m);
    for k in 0..m {
        let angle = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
        let mu = Complex64::new(angle.cos(), angle.sin());
        let mu2 = mu * mu;
        let w = CMat::from_fn(n, |i, j| {
            mu2 * a1[(i, j)] - mu * a0[(i, j)] + a2[(i, j)]
        });
        samples.push(w.det());
    }
    let mut coeffs = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, q) in samples.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / (m as f64);
            acc += q * Complex64::new(angle.cos(), angle.sin());
        }
        coeffs.push(acc.re / (m as f64));
    }
    Ok(coeffs)
}

/// Drops negligible leading coefficients; returns the stripped polynomial
/// and the number of degrees removed (the pencil's roots at infinity).
pub(crate) fn strip_leading(coeffs: &[f64]) -> (Vec<f64>, usize) {
    let max_abs = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs())).max(1e-300);
    let mut end = coeffs.len();
    while end > 1 && coeffs[end - 1].abs() <= LEADING_COEFF_TOL * max_abs {
        end -= 1;
    }
    (coeffs[..end].to_vec(), coeffs.len() - end)
}

/// Picks the `n` smallest-modulus roots while keeping the selection
/// closed under conjugation, swapping equal-modulus real roots across a
/// split pair when needed.
fn select_conjugate_closed(pool: &[Complex64], n: usize) -> Option<Vec<Complex64>> {
    const IM_TOL: f64 = 1e-9;
    let mut selected: Vec<Complex64> = pool[..n].to_vec();
    let rest: Vec<Complex64> = pool[n..].to_vec();
    loop {
        let mut unpaired: Option<usize> = None;
        let mut used = vec![false; selected.len()];
        for i in 0..selected.len() {
            if used[i] || selected[i].im.abs() <= IM_TOL * selected[i].norm().max(1.0) {
                used[i] = true;
                continue;
            }
            let mut found = false;
            for j in (i + 1)..selected.len() {
                if used[j] {
                    continue;
                }
                if (selected[j] - selected[i].conj()).norm()
                    <= 1e-7 * selected[i].norm().max(1.0)
                {
                    used[i] = true;
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if !found {
                unpaired = Some(i);
                break;
            }
        }
        let Some(idx) = unpaired else {
            return Some(selected);
        };
        // Swap the unpaired complex root for a real root of comparable
        // modulus from the remainder, or pull in the conjugate in place
        // of a real root already selected.
        let target_mod = selected[idx].norm();
        if let Some(pos) = rest.iter().position(|r| {
            r.im.abs() <= IM_TOL * r.norm().max(1.0)
                && (r.norm() - target_mod).abs() <= 1e-7 * target_mod.max(1.0)
        }) {
            selected[idx] = rest[pos];
            continue;
        }
        let conj = selected[idx].conj();
        let conj_available = rest
            .iter()
            .any(|r| (r - conj).norm() <= 1e-7 * target_mod.max(1.0));
        if conj_available {
            if let Some(real_pos) = selected.iter().position(|r| {
                r.im.abs() <= IM_TOL * r.norm().max(1.0)
                    && (r.norm() - target_mod).abs() <= 1e-7 * target_mod.max(1.0)
            }) {
                selected[real_pos] = conj;
                continue;
            }
        }
        return None;
    }
}

/// Builds `C = V·diag(μ)·V⁻¹` from null vectors of the pencil at the
/// selected roots. Conjugate roots reuse the conjugated vector so the
/// result is real by construction.
fn assemble(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
    selected: &[Complex64],
    n: usize,
) -> Option<Matrix> {
    if n == 1 {
        // Scalar solvent: the root itself (must be real for a real C).
        let mu = selected[0];
        if mu.im.abs() > 1e-9 * mu.norm().max(1.0) {
            return None;
        }
        return Some(Matrix::scalar(mu.re));
    }
    let mut v = CMat::zeros(n);
    let mut col = 0usize;
    let mut pending: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for mu in selected {
        if mu.im.abs() > 1e-9 * mu.norm().max(1.0) {
            // Complex root: compute once, use the conjugate for the twin.
            if let Some(pos) = pending
                .iter()
                .position(|(m, _)| (m.conj() - mu).norm() <= 1e-7 * mu.norm().max(1.0))
            {
                let (_, vec) = pending.remove(pos);
                for (i, z) in vec.iter().enumerate() {
                    v.set(i, col, z.conj());
                }
                col += 1;
                continue;
            }
        }
        let w = CMat::from_fn(n, |i, j| {
            let mu2 = mu * mu;
            mu2 * a1[(i, j)] - *mu * a0[(i, j)] + a2[(i, j)]
        });
        let vec = null_vector(&w, n)?;
        for (i, z) in vec.iter().enumerate() {
            v.set(i, col, *z);
        }
        if mu.im.abs() > 1e-9 * mu.norm().max(1.0) {
            pending.push((*mu, vec));
        }
        col += 1;
    }
    // C = (V·Λ)·V⁻¹ column by column through complex solves.
    let mut c = Matrix::zeros(n, n);
    for target_col in 0..n {
        let mut unit = vec![Complex64::new(0.0, 0.0); n];
        unit[target_col] = Complex64::new(1.0, 0.0);
        let y = v.solve(&unit)?;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += v.get(i, j) * selected[j] * y[j];
            }
            if acc.im.abs() > 1e-7 * acc.norm().max(1.0) + 1e-9 {
                return None;
            }
            c[(i, target_col)] = acc.re;
        }
    }
    Some(c)
}

/// One null vector of a (numerically rank-deficient) complex matrix via
/// full-pivot elimination.
fn null_vector(w: &CMat, n: usize) -> Option<Vec<Complex64>> {
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| w.get(i, j)).collect())
        .collect();
    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0usize;
    for step in 0..n {
        let mut best = (step, step);
        let mut best_val = 0.0;
        for i in step..n {
            for j in step..n {
                let v = a[i][j].norm();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        if best_val <= 1e-12 * scale {
            break;
        }
        a.swap(step, best.0);
        if best.1 != step {
            for row in a.iter_mut() {
                row.swap(step, best.1);
            }
            col_perm.swap(step, best.1);
        }
        let pivot = a[step][step];
        for i in (step + 1)..n {
            let factor = a[i][step] / pivot;
            for j in step..n {
                let sub = factor * a[step][j];
                a[i][j] -= sub;
            }
        }
        rank += 1;
    }
    if rank == n {
        return None;
    }
    // Free variable: first column without a pivot (permuted index `rank`).
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[rank] = Complex64::new(1.0, 0.0);
    for i in (0..rank).rev() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (i + 1)..=rank {
            acc += a[i][j] * x[j];
        }
        x[i] = -acc / a[i][i];
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (permuted, original) in col_perm.iter().enumerate() {
        out[*original] = x[permuted];
    }
    let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in out.iter_mut() {
        *z /= norm;
    }
    Some(out)
}

/// Newton step for the quadratic residual: solves
/// `A1·Δ·C + (A1·C − A0)·Δ = −R` and returns `C + Δ`.
fn newton_polish(a1: &Matrix, a0: &Matrix, a2: &Matrix, c: &Matrix) -> Option<Matrix> {
    let r = residual_matrix(a1, a0, a2, c).ok()?;
    let lhs = a1.matmul(c).ok()?.sub(a0).ok()?;
    // lhs·Δ + A1·Δ·C = −R  ⇔  lhs·Δ − (−A1)·Δ·C = −R
    let delta = solve_sylvester(&lhs, &a1.scale(-1.0), c, &r.scale(-1.0)).ok()?;
    c.add(&delta).ok()
}

fn fixed_point_result(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
    scale: f64,
    multiple_stable: bool,
    allow_boundary: bool,
) -> Result<SolventResult, AlgebraError> {
    let c = fixed_point_solvent(a1, a0, a2).ok_or(AlgebraError::ConvergenceFailure)?;
    let residual = residual_norm(a1, a0, a2, &c)?;
    if residual > RESIDUAL_TOL * scale {
        return Err(AlgebraError::ConvergenceFailure);
    }
    let radius = super::spectral_radius(&c)?;
    let class = classify_modulus(radius);
    if class == RootClass::Unstable || (!allow_boundary && class == RootClass::Boundary) {
        return Err(AlgebraError::NoStableSolvent);
    }
    Ok(SolventResult {
        solvent: c,
        residual,
        spectral_radius: radius,
        multiple_stable,
        boundary: class == RootClass::Boundary,
    })
}

fn fixed_point_solvent(a1: &Matrix, a0: &Matrix, a2: &Matrix) -> Option<Matrix> {
    let n = a0.rows();
    let mut c = Matrix::zeros(n, n);
    for _ in 0..50_000 {
        let m = a0.sub(&a1.matmul(&c).ok()?).ok()?;
        let next = m.solve(a2).ok()?;
        let delta = next.sub(&c).ok()?.max_abs();
        c = next;
        if delta <= 1e-15 * c.max_abs().max(1.0) {
            return Some(c);
        }
    }
    None
}

fn residual_matrix(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
    c: &Matrix,
) -> Result<Matrix, AlgebraError> {
    a1.matmul(&c.matmul(c)?)?
        .sub(&a0.matmul(c)?)?
        .add(a2)
}

fn residual_norm(a1: &Matrix, a0: &Matrix, a2: &Matrix, c: &Matrix) -> Result<f64, AlgebraError> {
    Ok(residual_matrix(a1, a0, a2, c)?.norm_inf())
}

/// Finite roots of the linear pencil `det(μ·A1 − A0)` (the eigenvalues of
/// `A1⁻¹·A0` when `A1` is invertible) plus the count of roots pushed to
/// infinity by rank deficiency in `A1`.
pub(crate) fn linear_pencil_roots(
    a1: &Matrix,
    a0: &Matrix,
) -> Result<(Vec<Complex64>, usize), AlgebraError> {
    let n = a0.rows();
    if n == 1 {
        if a1[(0, 0)] == 0.0 {
            return Ok((vec![], 1));
        }
        return Ok((vec![Complex64::new(a0[(0, 0)] / a1[(0, 0)], 0.0)], 0));
    }
    let m = n + 1;
    let mut samples = Vec::with_capacity(m);
    for k in 0..m {
        let angle = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
        let mu = Complex64::new(angle.cos(), angle.sin());
        let w = CMat::from_fn(n, |i, j| mu * a1[(i, j)] - a0[(i, j)]);
        samples.push(w.det());
    }
    let mut coeffs = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, q) in samples.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / (m as f64);
            acc += q * Complex64::new(angle.cos(), angle.sin());
        }
        coeffs.push(acc.re / (m as f64));
    }
    let (stripped, deficiency) = strip_leading(&coeffs);
    let roots = polynomial_roots(&stripped)?;
    Ok((roots, deficiency))
}

/// Roots of the pencil determinant after stripping vanished degrees,
/// plus the deficiency count. Shared with the determinacy classifier.
pub(crate) fn pencil_roots(
    a1: &Matrix,
    a0: &Matrix,
    a2: &Matrix,
) -> Result<(Vec<Complex64>, usize), AlgebraError> {
    let n = a0.rows();
    if n == 1 {
        // Exact scalar path, including the unit-root limit case where
        // a1 + a2 == a0 makes μ = 1 an exact root.
        let (c2, c1, c0) = (a1[(0, 0)], a0[(0, 0)], a2[(0, 0)]);
        if c2 == 0.0 {
            if c1 == 0.0 {
                return Err(AlgebraError::SingularA0);
            }
            return Ok((vec![Complex64::new(c0 / c1, 0.0)], 1));
        }
        if c2 + c0 == c1 && c0 != 0.0 {
            let other = c1 / c2 - 1.0;
            return Ok((
                vec![Complex64::new(1.0, 0.0), Complex64::new(other, 0.0)],
                0,
            ));
        }
        let (r1, r2) = quadratic_roots(c2, -c1, c0);
        return Ok((vec![r1, r2], 0));
    }
    let coeffs = pencil_char_coefficients(a1, a0, a2)?;
    let (stripped, deficiency) = strip_leading(&coeffs);
    let roots = polynomial_roots(&stripped)?;
    Ok((roots, deficiency))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn scalar_hybrid_picks_stable_root() {
        let result = quadratic_solvent(
            &Matrix::scalar(0.5),
            &Matrix::scalar(1.0),
            &Matrix::scalar(0.3),
        )
        .unwrap();
        let mu1 = (1.0 - (1.0f64 - 4.0 * 0.3 * 0.5).sqrt()) / (2.0 * 0.5);
        assert!((result.solvent[(0, 0)] - mu1).abs() < 1e-14);
        assert!((result.solvent[(0, 0)] - 0.36754).abs() < 1e-5);
        assert!(result.residual < 1e-12);
        assert!(!result.multiple_stable);
    }

    #[test]
    fn linear_case_returns_phi_exactly() {
        let phi = Matrix::from_rows(&[&[0.7, 0.1], &[0.0, 0.2]]).unwrap();
        let result = quadratic_solvent(&Matrix::zeros(2, 2), &Matrix::identity(2), &phi).unwrap();
        assert_eq!(result.solvent, phi);
        assert_eq!(result.residual, 0.0);
    }

    #[test]
    fn unit_root_candidates_rejected_strictly_but_flagged_when_allowed() {
        // Roots are exactly {1, 1.5}: no strictly stable solvent.
        let a1 = Matrix::scalar(0.4);
        let a0 = Matrix::scalar(1.0);
        let a2 = Matrix::scalar(0.6);
        assert!(matches!(
            quadratic_solvent(&a1, &a0, &a2),
            Err(AlgebraError::NoStableSolvent)
        ));
        let relaxed = quadratic_solvent_allowing_boundary(&a1, &a0, &a2).unwrap();
        assert_eq!(relaxed.solvent[(0, 0)], 1.0);
        assert!(relaxed.boundary);
    }

    #[test]
    fn rejects_singular_a0() {
        assert!(matches!(
            quadratic_solvent(
                &Matrix::scalar(0.5),
                &Matrix::scalar(0.0),
                &Matrix::scalar(0.1)
            ),
            Err(AlgebraError::SingularA0)
        ));
    }

    #[test]
    fn solvent_spectrum_splits_pencil_roots() {
        // Build a 2x2 problem from a known stable solvent.
        let c0 = Matrix::from_rows(&[&[0.5, 0.1], &[0.0, 0.3]]).unwrap();
        let a1 = Matrix::from_rows(&[&[0.4, 0.0], &[0.1, 0.5]]).unwrap();
        let a0 = Matrix::from_rows(&[&[1.0, 0.1], &[0.0, 1.2]]).unwrap();
        let a2 = a0.matmul(&c0).unwrap().sub(&a1.matmul(&c0.matmul(&c0).unwrap()).unwrap()).unwrap();
        let result = quadratic_solvent(&a1, &a0, &a2).unwrap();
        assert!(result.residual <= 1e-10 * a0.norm_inf().max(1.0));
        assert!(result.spectral_radius < 1.0);
        // Every solvent eigenvalue must be a pencil root.
        let (roots, _) = pencil_roots(&a1, &a0, &a2).unwrap();
        for lambda in crate::algebra::eigenvalues(&result.solvent).unwrap() {
            let hit = roots.iter().any(|r| (r - lambda).norm() < 1e-6);
            assert!(hit, "solvent eigenvalue {lambda} not among pencil roots");
        }
    }

    #[test]
    fn random_constructed_problems_have_small_residuals() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..100 {
            let n = 2;
            let mut c0 = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    c0[(i, j)] = rng.gen_range(-0.45..0.45);
                }
            }
            let mut a1 = Matrix::zeros(n, n);
            let mut a0 = Matrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    a1[(i, j)] = rng.gen_range(-0.5..0.5);
                    a0[(i, j)] += rng.gen_range(-0.2..0.2);
                }
            }
            if a0.reciprocal_condition_estimate() < 1e-6 {
                continue;
            }
            let a2 = a0
                .matmul(&c0)
                .unwrap()
                .sub(&a1.matmul(&c0.matmul(&c0).unwrap()).unwrap())
                .unwrap();
            match quadratic_solvent(&a1, &a0, &a2) {
                Ok(result) => {
                    assert!(result.residual <= 1e-10 * a0.norm_inf().max(1.0));
                    assert!(result.spectral_radius < 1.0);
                }
                Err(AlgebraError::NoStableSolvent) => {
                    // The constructed C0 need not be the minimal solvent;
                    // other pencil roots may block a stable selection.
                }
                Err(e) => panic!("unexpected solvent failure: {e}"),
            }
        }
    }
}
