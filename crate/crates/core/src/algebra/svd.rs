//! Singular values and right singular vectors by one-sided Jacobi.
//!
//! One-sided Jacobi orthogonalises the columns of the input by plane
//! rotations applied on the right. It avoids forming JᵀJ, which matters
//! here: rank decisions downstream use a relative threshold of 1e-8, and
//! squaring would push the small singular values into the noise floor.

use super::{AlgebraError, Matrix};

/// Singular values in descending order together with the right singular
/// vectors (columns of an orthogonal matrix, same column order).
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Matrix,
}

/// One-sided Jacobi SVD of an arbitrary rectangular matrix.
pub fn svd(a: &Matrix) -> Result<Svd, AlgebraError> {
    let m = a.rows();
    let n = a.cols();
    let mut work = a.clone();
    let mut v = Matrix::identity(n);
    let fro_sq: f64 = a.data().iter().map(|x| x * x).sum();
    // Columns whose mass has collapsed to rounding noise (norm below
    // 1e-14 of the Frobenius norm) are finished zero modes; rotating
    // against them never converges. Anything above that keeps rotating
    // so genuine small singular values stay accurate.
    let dead = (1e-28 * fro_sq).max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    app += work[(i, p)] * work[(i, p)];
                    aqq += work[(i, q)] * work[(i, q)];
                    apq += work[(i, p)] * work[(i, q)];
                }
                if app <= dead || aqq <= dead {
                    continue;
                }
                let denom = (app * aqq).sqrt();
                off = off.max(apq.abs() / denom);
                if apq.abs() <= 1e-15 * denom {
                    continue;
                }
                // Rotation angle that annihilates the (p, q) inner product.
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let xp = work[(i, p)];
                    let xq = work[(i, q)];
                    work[(i, p)] = c * xp - s * xq;
                    work[(i, q)] = s * xp + c * xq;
                }
                for i in 0..n {
                    let xp = v[(i, p)];
                    let xq = v[(i, q)];
                    v[(i, p)] = c * xp - s * xq;
                    v[(i, q)] = s * xp + c * xq;
                }
            }
        }
        if off <= 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(AlgebraError::ConvergenceFailure);
    }
    let mut sigma: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)] * work[(i, j)]).sum::<f64>().sqrt())
        .collect();
    // Sort descending, carrying the V columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let mut v_sorted = Matrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            v_sorted[(i, new_j)] = v[(i, old_j)];
        }
    }
    sigma = order.iter().map(|&j| sigma[j]).collect();
    Ok(Svd {
        singular_values: sigma,
        right_vectors: v_sorted,
    })
}

/// Factor `F` with `F·Fᵀ = a` for a symmetric positive semidefinite `a`,
/// tolerating exactly singular inputs (zero columns for zero modes).
pub fn psd_factor(a: &Matrix) -> Result<Matrix, AlgebraError> {
    if !a.is_square() {
        return Err(AlgebraError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_symmetric(1e-10) {
        return Err(AlgebraError::NonSymmetricQ);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let sym = a.symmetrize();
    let dec = svd(&sym)?;
    let scale = dec.singular_values.first().copied().unwrap_or(0.0);
    let mut f = Matrix::zeros(n, n);
    for j in 0..n {
        let s = dec.singular_values[j];
        if s <= 1e-13 * scale.max(1.0) {
            continue;
        }
        let root = s.sqrt();
        for i in 0..n {
            f[(i, j)] = dec.right_vectors[(i, j)] * root;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_vector_singular_value() {
        let a = Matrix::from_rows(&[&[2.0, 1.0]]).unwrap();
        let dec = svd(&a).unwrap();
        assert!((dec.singular_values[0] - 5.0f64.sqrt()).abs() < 1e-12);
        assert!(dec.singular_values[1].abs() < 1e-12);
        // Null direction proportional to (1, -2)/sqrt(5).
        let vx = dec.right_vectors[(0, 1)];
        let vy = dec.right_vectors[(1, 1)];
        let sign = vx.signum();
        assert!((sign * vx - 1.0 / 5.0f64.sqrt()).abs() < 1e-12);
        assert!((sign * vy - -2.0 / 5.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn right_vectors_are_orthonormal() {
        let a = Matrix::from_rows(&[&[1.0, 2.0, 0.5], &[0.0, 1.0, -1.0]]).unwrap();
        let dec = svd(&a).unwrap();
        let v = &dec.right_vectors;
        let gram = v.transpose().matmul(v).unwrap();
        assert!(gram.sub(&Matrix::identity(3)).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn frobenius_norm_preserved() {
        let a = Matrix::from_rows(&[&[3.0, 1.0], &[1.0, 3.0], &[0.5, -0.5]]).unwrap();
        let dec = svd(&a).unwrap();
        let fro: f64 = a.data().iter().map(|x| x * x).sum();
        let sum_sq: f64 = dec.singular_values.iter().map(|s| s * s).sum();
        assert!((fro - sum_sq).abs() < 1e-10);
    }

    #[test]
    fn psd_factor_reconstructs() {
        let a = Matrix::from_rows(&[&[4.0, 2.0], &[2.0, 2.0]]).unwrap();
        let f = psd_factor(&a).unwrap();
        let back = f.matmul(&f.transpose()).unwrap();
        assert!(back.sub(&a).unwrap().max_abs() < 1e-10);
        // Singular covariance keeps a zero column.
        let s = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let fs = psd_factor(&s).unwrap();
        let back = fs.matmul(&fs.transpose()).unwrap();
        assert!(back.sub(&s).unwrap().max_abs() < 1e-12);
    }
}
