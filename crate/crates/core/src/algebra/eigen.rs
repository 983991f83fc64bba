//! Eigenvalues and eigenvectors of small real matrices.
//!
//! Dimensions 1 and 2 use closed forms; dimensions 3 to 8 go through a
//! complex single-shift Hessenberg QR iteration with Wilkinson shifts.
//! Running the iteration in complex arithmetic sidesteps the 2x2-block
//! bookkeeping of the Francis double shift at a negligible cost for
//! matrices this small.

pub use num_complex::Complex64;

use super::{AlgebraError, Matrix, MAX_EIGEN_DIM};

const EPS: f64 = f64::EPSILON;

/// Result of [`eigen`]: eigenvalues sorted by ascending modulus (ties by
/// ascending complex argument, then by the order the iteration produced
/// them), eigenvector columns paired with the eigenvalues, and a flag
/// telling whether the eigenvector matrix actually diagonalises the
/// input.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    /// `eigenvectors[i]` is the unit-norm column paired with
    /// `eigenvalues[i]`; phase fixed so the largest entry is positive
    /// real.
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub diagonalizable: bool,
}

/// Full eigendecomposition of a square matrix of dimension at most
/// [`MAX_EIGEN_DIM`].
pub fn eigen(m: &Matrix) -> Result<EigenDecomposition, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_EIGEN_DIM {
        return Err(AlgebraError::DimensionTooLarge {
            dim: n,
            max: MAX_EIGEN_DIM,
        });
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            eigenvectors: vec![],
            diagonalizable: true,
        });
    }
    let (values, vectors) = match n {
        1 => (
            vec![Complex64::new(m[(0, 0)], 0.0)],
            vec![vec![Complex64::new(1.0, 0.0)]],
        ),
        2 => eigen2(m),
        _ => {
            let (t, z) = schur_complex(m, true)?;
            let values: Vec<Complex64> = (0..n).map(|i| t.get(i, i)).collect();
            let vectors = triangular_eigenvectors(&t, &z);
            (values, vectors)
        }
    };
    let order = sorted_order(&values);
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let eigenvectors: Vec<Vec<Complex64>> =
        order.iter().map(|&i| normalize_phase(&vectors[i])).collect();
    let diagonalizable = diagonalizes(m, &eigenvalues, &eigenvectors);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        diagonalizable,
    })
}

/// Eigenvalues only, without the public dimension gate. Used internally
/// on companion matrices whose dimension can reach twice the model size.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let values = match n {
        0 => vec![],
        1 => vec![Complex64::new(m[(0, 0)], 0.0)],
        2 => eigen2(m).0,
        _ => {
            let (t, _) = schur_complex(m, false)?;
            (0..n).map(|i| t.get(i, i)).collect()
        }
    };
    let order = sorted_order(&values);
    Ok(order.iter().map(|&i| values[i]).collect())
}

pub fn spectral_radius(m: &Matrix) -> Result<f64, AlgebraError> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Roots of `c[0] + c[1]·x + … + c[d]·x^d`. The caller strips negligible
/// leading coefficients first; the leading coefficient here must be
/// nonzero.
pub(crate) fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>, AlgebraError> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[d];
    assert!(lead != 0.0, "leading coefficient must be nonzero");
    match d {
        1 => Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        2 => {
            let (r1, r2) = quadratic_roots(coeffs[2], coeffs[1], coeffs[0]);
            Ok(vec![r1, r2])
        }
        _ => {
            let mut companion = Matrix::zeros(d, d);
            for i in 1..d {
                companion[(i, i - 1)] = 1.0;
            }
            for i in 0..d {
                companion[(i, d - 1)] = -coeffs[i] / lead;
            }
            eigenvalues(&companion)
        }
    }
}

/// Roots of `a·x² + b·x + c` with the cancellation-free formula; the pair
/// comes back unsorted.
pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> (Complex64, Complex64) {
    debug_assert!(a != 0.0);
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        let r1 = if q != 0.0 { c / q } else { 0.0 };
        let r2 = if a != 0.0 && q != 0.0 {
            q / a
        } else {
            -b / (2.0 * a)
        };
        (Complex64::new(r1, 0.0), Complex64::new(r2, 0.0))
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a).abs();
        (Complex64::new(re, -im), Complex64::new(re, im))
    }
}

fn eigen2(m: &Matrix) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    if b == 0.0 && c == 0.0 {
        // Exactly diagonal: read it off so identity-like inputs stay exact.
        return (
            vec![Complex64::new(a, 0.0), Complex64::new(d, 0.0)],
            vec![
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        );
    }
    // Triangular fast path keeps diagonal entries exact.
    if c == 0.0 || b == 0.0 {
        let values = vec![Complex64::new(a, 0.0), Complex64::new(d, 0.0)];
        let vectors = vec![
            eigenvector2(a, b, c, d, Complex64::new(a, 0.0)),
            eigenvector2(a, b, c, d, Complex64::new(d, 0.0)),
        ];
        return (values, vectors);
    }
    let (r1, r2) = quadratic_roots(1.0, -(a + d), a * d - b * c);
    let vectors = vec![
        eigenvector2(a, b, c, d, r1),
        eigenvector2(a, b, c, d, r2),
    ];
    (vec![r1, r2], vectors)
}

fn eigenvector2(a: f64, b: f64, c: f64, d: f64, lambda: Complex64) -> Vec<Complex64> {
    let ca = Complex64::new(a, 0.0);
    let cb = Complex64::new(b, 0.0);
    let cc = Complex64::new(c, 0.0);
    let cd = Complex64::new(d, 0.0);
    // Rows of (A - λI) are (a-λ, b) and (c, d-λ); a null vector is
    // orthogonal to either row.
    let v1 = [cb, lambda - ca];
    let v2 = [lambda - cd, cc];
    let n1 = v1[0].norm() + v1[1].norm();
    let n2 = v2[0].norm() + v2[1].norm();
    let v = if n1 >= n2 { v1 } else { v2 };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        return vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    vec![v[0] / norm, v[1] / norm]
}

fn sorted_order(values: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .norm()
            .total_cmp(&values[j].norm())
            .then(values[i].arg().total_cmp(&values[j].arg()))
    });
    order
}

fn normalize_phase(v: &[Complex64]) -> Vec<Complex64> {
    let mut best = 0usize;
    let mut best_norm = 0.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_norm {
            best_norm = z.norm();
            best = i;
        }
    }
    if best_norm == 0.0 {
        return v.to_vec();
    }
    let phase = v[best] / best_norm;
    let scaled: Vec<Complex64> = v.iter().map(|z| z / phase).collect();
    let norm = scaled.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    scaled.iter().map(|z| z / norm).collect()
}

fn diagonalizes(m: &Matrix, values: &[Complex64], vectors: &[Vec<Complex64>]) -> bool {
    let n = m.rows();
    let scale = m.norm_inf().max(1.0);
    // Residual ‖A·v − λ·v‖ per column.
    for (lambda, v) in values.iter().zip(vectors) {
        for i in 0..n {
            let mut av = Complex64::new(0.0, 0.0);
            for j in 0..n {
                av += Complex64::new(m[(i, j)], 0.0) * v[j];
            }
            if (av - lambda * v[i]).norm() > 1e-9 * scale {
                return false;
            }
        }
    }
    // The eigenvector matrix must also be comfortably invertible.
    let mut v_mat = CMat::zeros(n);
    for (j, col) in vectors.iter().enumerate() {
        for i in 0..n {
            v_mat.set(i, j, col[i]);
        }
    }
    v_mat.reciprocal_condition_estimate() > 1e-10
}

// ---------------------------------------------------------------------
// Complex dense kernel for the QR iteration.
// ---------------------------------------------------------------------

#[derive(Clone)]
pub(crate) struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub(crate) fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    fn from_real(m: &Matrix) -> Self {
        let n = m.rows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, Complex64::new(m[(i, j)], 0.0));
            }
        }
        out
    }

    pub(crate) fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    /// Determinant via complex LU with partial pivoting.
    pub(crate) fn det(&self) -> Complex64 {
        let n = self.n;
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let mut lu = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let v = lu[r * n + col].norm();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = lu[col * n + col];
            det *= pivot;
            let inv = Complex64::new(1.0, 0.0) / pivot;
            for r in (col + 1)..n {
                let factor = lu[r * n + col] * inv;
                for j in (col + 1)..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        det
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Smallest LU pivot over largest, as a cheap singularity probe.
    fn reciprocal_condition_estimate(&self) -> f64 {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut min_p = f64::INFINITY;
        let mut max_p: f64 = 0.0;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let v = lu[r * n + col].norm();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            min_p = min_p.min(pivot_val);
            max_p = max_p.max(pivot_val);
            if pivot_val == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
            }
            let inv = Complex64::new(1.0, 0.0) / lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] * inv;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        if max_p == 0.0 {
            0.0
        } else {
            min_p / max_p
        }
    }

    pub(crate) fn solve(&self, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut x = rhs.to_vec();
        let mut piv: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let v = lu[r * n + col].norm();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val == 0.0 {
                return None;
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                piv.swap(col, pivot_row);
            }
            let inv = Complex64::new(1.0, 0.0) / lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] * inv;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            b[i] = x[piv[i]];
        }
        x = b;
        for i in 1..n {
            for k in 0..i {
                let f = lu[i * n + k];
                let sub = f * x[k];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let f = lu[i * n + k];
                let sub = f * x[k];
                x[i] -= sub;
            }
            x[i] /= lu[i * n + i];
        }
        Some(x)
    }
}

/// Balances a real matrix in place (Parlett–Reinsch, powers of two) so
/// badly scaled companion matrices keep their eigenvalue accuracy.
fn balance(m: &mut Matrix) {
    let n = m.rows();
    let radix = 2.0f64;
    let mut done = false;
    let mut guard = 0;
    while !done && guard < 100 {
        done = true;
        guard += 1;
        for i in 0..n {
            let mut row_norm = 0.0;
            let mut col_norm = 0.0;
            for j in 0..n {
                if j != i {
                    row_norm += m[(i, j)].abs();
                    col_norm += m[(j, i)].abs();
                }
            }
            if row_norm == 0.0 || col_norm == 0.0 {
                continue;
            }
            let mut factor = 1.0;
            let mut c = col_norm;
            let target = row_norm / radix;
            while c < target {
                factor *= radix;
                c *= radix * radix;
            }
            let target = row_norm * radix;
            while c > target {
                factor /= radix;
                c /= radix * radix;
            }
            if (col_norm * factor).abs() + row_norm / factor < 0.95 * (col_norm + row_norm) {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= factor;
                }
                for j in 0..n {
                    m[(j, i)] *= factor;
                }
            }
        }
    }
}

/// Reduces to Hessenberg form and runs the shifted QR iteration.
/// Returns the (numerically) upper-triangular Schur factor `T` and, when
/// requested, the accumulated unitary `Z` with `A = Z T Z*`.
fn schur_complex(m: &Matrix, want_z: bool) -> Result<(CMat, CMat), AlgebraError> {
    let n = m.rows();
    let mut work = m.clone();
    if !want_z {
        balance(&mut work);
    }
    let mut h = CMat::from_real(&work);
    let mut z = CMat::identity(n);
    hessenberg(&mut h, &mut z);
    let scale = m.norm_inf().max(1.0);
    let negligible = |h: &CMat, i: usize| -> bool {
        h.get(i, i - 1).norm() <= EPS * (h.get(i - 1, i - 1).norm() + h.get(i, i).norm()).max(EPS * scale)
    };

    let mut hi = n - 1;
    let mut iters_at_hi = 0usize;
    let mut total_iters = 0usize;
    let budget = 60 * n * n + 200;
    loop {
        // Zero any negligible subdiagonals, then find the active block.
        for i in 1..=hi {
            if h.get(i, i - 1).norm() > 0.0 && negligible(&h, i) {
                h.set(i, i - 1, Complex64::new(0.0, 0.0));
            }
        }
        while hi > 0 && h.get(hi, hi - 1).norm() == 0.0 {
            hi -= 1;
            iters_at_hi = 0;
        }
        if hi == 0 {
            break;
        }
        let mut lo = hi;
        while lo > 0 && h.get(lo, lo - 1).norm() != 0.0 {
            lo -= 1;
        }
        total_iters += 1;
        iters_at_hi += 1;
        if total_iters > budget {
            return Err(AlgebraError::ConvergenceFailure);
        }
        // Wilkinson shift from the trailing 2x2 block, with an ad-hoc
        // exceptional shift every ten stalled sweeps.
        let shift = if iters_at_hi % 10 == 0 {
            Complex64::new(
                h.get(hi, hi - 1).norm() + if hi >= 2 { h.get(hi - 1, hi - 2).norm() } else { 0.0 },
                0.0,
            ) + h.get(hi, hi)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, &mut z, lo, hi, shift, want_z);
    }
    // Clean the strictly lower part so callers see a true triangle.
    for i in 1..n {
        for j in 0..i {
            h.set(i, j, Complex64::new(0.0, 0.0));
        }
    }
    Ok((h, z))
}

fn wilkinson_shift(h: &CMat, hi: usize) -> Complex64 {
    let a = h.get(hi - 1, hi - 1);
    let b = h.get(hi - 1, hi);
    let c = h.get(hi, hi - 1);
    let d = h.get(hi, hi);
    let tr = a + d;
    let det = a * d - b * c;
    let half = tr * 0.5;
    let disc = (half * half - det).sqrt();
    let r1 = half + disc;
    let r2 = half - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

fn hessenberg(h: &mut CMat, z: &mut CMat) {
    let n = h.n;
    if n < 3 {
        return;
    }
    for k in 0..(n - 2) {
        // Householder vector for column k below the subdiagonal.
        let mut norm_sq = 0.0;
        for i in (k + 1)..n {
            norm_sq += h.get(i, k).norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h.get(k + 1, k);
        let alpha = if x0.norm() == 0.0 {
            Complex64::new(-norm, 0.0)
        } else {
            -(x0 / x0.norm()) * norm
        };
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        v[0] -= alpha;
        let v_norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if v_norm == 0.0 {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= v_norm;
        }
        // H ← P H, rows k+1..n.
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (r, vi) in v.iter().enumerate() {
                dot += vi.conj() * h.get(k + 1 + r, j);
            }
            dot *= 2.0;
            for (r, vi) in v.iter().enumerate() {
                let cur = h.get(k + 1 + r, j);
                h.set(k + 1 + r, j, cur - vi * dot);
            }
        }
        // H ← H P, columns k+1..n.
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (c, vi) in v.iter().enumerate() {
                dot += h.get(i, k + 1 + c) * *vi;
            }
            dot *= 2.0;
            for (c, vi) in v.iter().enumerate() {
                let cur = h.get(i, k + 1 + c);
                h.set(i, k + 1 + c, cur - dot * vi.conj());
            }
        }
        // Z ← Z P.
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (c, vi) in v.iter().enumerate() {
                dot += z.get(i, k + 1 + c) * *vi;
            }
            dot *= 2.0;
            for (c, vi) in v.iter().enumerate() {
                let cur = z.get(i, k + 1 + c);
                z.set(i, k + 1 + c, cur - dot * vi.conj());
            }
        }
        // Force exact zeros below the subdiagonal in column k.
        h.set(k + 1, k, alpha);
        for i in (k + 2)..n {
            h.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
}

/// One explicit shifted QR sweep on the active window `[lo, hi]` using
/// Givens rotations on the full row/column extents.
fn qr_step(h: &mut CMat, z: &mut CMat, lo: usize, hi: usize, shift: Complex64, want_z: bool) {
    let n = h.n;
    for i in lo..=hi {
        let cur = h.get(i, i);
        h.set(i, i, cur - shift);
    }
    let mut rotations: Vec<(usize, Complex64, Complex64)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let a = h.get(i, i);
        let b = h.get(i + 1, i);
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (a / r, b / r)
        };
        // Apply G* from the left to rows i, i+1.
        for j in i..n {
            let x = h.get(i, j);
            let y = h.get(i + 1, j);
            h.set(i, j, c.conj() * x + s.conj() * y);
            h.set(i + 1, j, -s * x + c * y);
        }
        rotations.push((i, c, s));
    }
    for &(i, c, s) in &rotations {
        // Apply G from the right to columns i, i+1.
        let top = (i + 2).min(hi) + 1;
        for r in 0..top.min(n) {
            let x = h.get(r, i);
            let y = h.get(r, i + 1);
            h.set(r, i, x * c + y * s);
            h.set(r, i + 1, -x * s.conj() + y * c.conj());
        }
        if want_z {
            for r in 0..n {
                let x = z.get(r, i);
                let y = z.get(r, i + 1);
                z.set(r, i, x * c + y * s);
                z.set(r, i + 1, -x * s.conj() + y * c.conj());
            }
        }
    }
    for i in lo..=hi {
        let cur = h.get(i, i);
        h.set(i, i, cur + shift);
    }
}

/// Eigenvectors of the triangular factor mapped back through `Z`.
fn triangular_eigenvectors(t: &CMat, z: &CMat) -> Vec<Vec<Complex64>> {
    let n = t.n;
    let scale: f64 = (0..n)
        .map(|i| t.get(i, i).norm())
        .fold(1.0, f64::max);
    let mut vectors = Vec::with_capacity(n);
    for j in 0..n {
        let lambda = t.get(j, j);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[j] = Complex64::new(1.0, 0.0);
        for i in (0..j).rev() {
            let mut num = Complex64::new(0.0, 0.0);
            for k in (i + 1)..=j {
                num += t.get(i, k) * x[k];
            }
            let denom = t.get(i, i) - lambda;
            if denom.norm() <= EPS * scale {
                if num.norm() <= EPS * scale {
                    x[i] = Complex64::new(0.0, 0.0);
                } else {
                    // Defective direction: blow the entry up so the
                    // conditioning check downstream flags it.
                    x[i] = -num / (EPS * scale);
                }
            } else {
                x[i] = -num / denom;
            }
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..=j {
                acc += z.get(r, k) * x[k];
            }
            v[r] = acc;
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
        }
        vectors.push(v);
    }
    vectors
}
