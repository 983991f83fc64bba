//! Row-major dense matrix with the handful of operations the rest of the
//! crate needs: arithmetic, LU solves, norms, and a vectorised Sylvester
//! solver.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::AlgebraError;

/// Dense real matrix, row-major storage: `data[i * cols + j] = A[i, j]`.
///
/// Zero-dimension matrices are legal and behave as annihilators in
/// products; they show up naturally when a model has no observable
/// exogenous block.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.6} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    /// Builds a matrix from row-major data, rejecting length mismatches
    /// and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::InvalidData {
                rows,
                cols,
                got: data.len(),
            });
        }
        for (idx, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(AlgebraError::NonFinite {
                    row: if cols == 0 { 0 } else { idx / cols },
                    col: if cols == 0 { 0 } else { idx % cols },
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// 1x1 matrix holding a single value.
    pub fn scalar(value: f64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![value],
        }
    }

    /// Diagonal matrix from a slice of diagonal entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(AlgebraError::InvalidData {
                    rows: r,
                    cols: c,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.check_same_shape(other, "add")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.check_same_shape(other, "sub")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Induced infinity norm: maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// `(A + Aᵀ) / 2`, used to keep covariance iterates exactly symmetric.
    pub fn symmetrize(&self) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..i {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        out
    }

    /// True when every entry is within `tol` of zero.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|v| v.abs() <= tol)
    }

    fn check_same_shape(&self, other: &Matrix, op: &str) -> Result<(), AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{op} needs equal shapes, got {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// LU factorisation with partial pivoting. Returns the packed factors,
    /// pivot order, and determinant sign.
    fn lu(&self) -> Result<Lu, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[col * n + col].abs();
            for r in (col + 1)..n {
                let v = lu[r * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val == 0.0 {
                return Err(AlgebraError::Singular);
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                piv.swap(col, pivot_row);
                sign = -sign;
            }
            let inv_pivot = 1.0 / lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] * inv_pivot;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
            }
        }
        Ok(Lu { n, lu, piv, sign })
    }

    /// Solves `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.rows != rhs.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "solve needs rhs with {} rows, got {}",
                self.rows, rhs.rows
            )));
        }
        if self.rows == 0 {
            return Ok(rhs.clone());
        }
        let lu = self.lu()?;
        Ok(lu.solve(rhs))
    }

    pub fn inverse(&self) -> Result<Matrix, AlgebraError> {
        self.solve(&Matrix::identity(self.rows))
    }

    pub fn det(&self) -> Result<f64, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(1.0);
        }
        match self.lu() {
            Ok(lu) => {
                let mut d = lu.sign;
                for i in 0..lu.n {
                    d *= lu.lu[i * lu.n + i];
                }
                Ok(d)
            }
            Err(AlgebraError::Singular) => Ok(0.0),
            Err(e) => Err(e),
        }
    }

    /// Crude invertibility probe: smallest pivot relative to the largest.
    pub fn reciprocal_condition_estimate(&self) -> f64 {
        match self.lu() {
            Ok(lu) => {
                let mut min_p = f64::INFINITY;
                let mut max_p: f64 = 0.0;
                for i in 0..lu.n {
                    let p = lu.lu[i * lu.n + i].abs();
                    min_p = min_p.min(p);
                    max_p = max_p.max(p);
                }
                if max_p == 0.0 {
                    0.0
                } else {
                    min_p / max_p
                }
            }
            Err(_) => 0.0,
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

struct Lu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn solve(&self, rhs: &Matrix) -> Matrix {
        let n = self.n;
        let m = rhs.cols();
        let mut x = Matrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                x[(i, j)] = rhs[(self.piv[i], j)];
            }
        }
        // Forward substitution with unit lower factor.
        for i in 1..n {
            for k in 0..i {
                let f = self.lu[i * n + k];
                if f == 0.0 {
                    continue;
                }
                for j in 0..m {
                    let v = x[(k, j)];
                    x[(i, j)] -= f * v;
                }
            }
        }
        // Back substitution with the upper factor.
        for i in (0..n).rev() {
            let inv = 1.0 / self.lu[i * n + i];
            for j in 0..m {
                x[(i, j)] *= inv;
            }
            for k in 0..i {
                let f = self.lu[k * n + i];
                if f == 0.0 {
                    continue;
                }
                for j in 0..m {
                    let v = x[(i, j)];
                    x[(k, j)] -= f * v;
                }
            }
        }
        x
    }
}

/// Solves the discrete Sylvester-type equation `A·X − B·X·F = R` by
/// vectorising to `(I ⊗ A − Fᵀ ⊗ B)·vec(X) = vec(R)` and eliminating.
///
/// The unknown `X` is `n×m` with `A`, `B` square `n×n` and `F` square
/// `m×m`. Dimensions stay tiny here (`n·m ≤ 64`), so the dense route is
/// the reliable one.
pub fn solve_sylvester(
    a: &Matrix,
    b: &Matrix,
    f: &Matrix,
    rhs: &Matrix,
) -> Result<Matrix, AlgebraError> {
    let n = a.rows();
    let m = f.rows();
    if !a.is_square() || !b.is_square() || !f.is_square() {
        return Err(AlgebraError::DimensionMismatch(
            "sylvester coefficients must be square".into(),
        ));
    }
    if b.rows() != n || rhs.rows() != n || rhs.cols() != m {
        return Err(AlgebraError::DimensionMismatch(format!(
            "sylvester shapes inconsistent: a {}x{}, b {}x{}, f {}x{}, rhs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            f.rows(),
            f.cols(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    if n == 0 || m == 0 {
        return Ok(Matrix::zeros(n, m));
    }
    let dim = n * m;
    // Column-major vec convention: index(i, j) = j * n + i.
    let mut system = Matrix::zeros(dim, dim);
    for j in 0..m {
        for i in 0..n {
            let row = j * n + i;
            for q in 0..n {
                system[(row, j * n + q)] += a[(i, q)];
            }
            for p in 0..m {
                for q in 0..n {
                    system[(row, p * n + q)] -= f[(p, j)] * b[(i, q)];
                }
            }
        }
    }
    let mut vec_rhs = Matrix::zeros(dim, 1);
    for j in 0..m {
        for i in 0..n {
            vec_rhs[(j * n + i, 0)] = rhs[(i, j)];
        }
    }
    let sol = system.solve(&vec_rhs)?;
    let mut x = Matrix::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            x[(i, j)] = sol[(j * n + i, 0)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0, 2.0, 3.0]),
            Err(AlgebraError::InvalidData { .. })
        ));
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(AlgebraError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = Matrix::from_rows(&[&[4.0, 1.0], &[2.0, 3.0]]).unwrap();
        let x_true = Matrix::from_rows(&[&[1.0, -2.0], &[0.5, 3.0]]).unwrap();
        let b = a.matmul(&x_true).unwrap();
        let x = a.solve(&b).unwrap();
        assert!(x.sub(&x_true).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let a = Matrix::from_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 2.0]]).unwrap();
        let inv = a.inverse().unwrap();
        let prod = a.matmul(&inv).unwrap();
        assert!(prod.sub(&Matrix::identity(3)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert!((a.det().unwrap() - (-2.0)).abs() < 1e-14);
        let singular = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(singular.det().unwrap(), 0.0);
    }

    #[test]
    fn sylvester_solution_satisfies_equation() {
        let a = Matrix::from_rows(&[&[1.0, 0.2], &[0.0, 1.3]]).unwrap();
        let b = Matrix::from_rows(&[&[0.5, 0.1], &[-0.2, 0.4]]).unwrap();
        let f = Matrix::from_rows(&[&[0.9, 0.0], &[0.3, 0.2]]).unwrap();
        let r = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, -1.0]]).unwrap();
        let x = solve_sylvester(&a, &b, &f, &r).unwrap();
        let lhs = a
            .matmul(&x)
            .unwrap()
            .sub(&b.matmul(&x).unwrap().matmul(&f).unwrap())
            .unwrap();
        assert!(lhs.sub(&r).unwrap().max_abs() < 1e-11);
    }

    #[test]
    fn zero_dimension_matrices_compose() {
        let a = Matrix::zeros(2, 0);
        let b = Matrix::zeros(0, 3);
        let c = a.matmul(&b).unwrap();
        assert_eq!((c.rows(), c.cols()), (2, 3));
        assert!(c.is_zero(0.0));
    }

    #[test]
    fn norms_and_symmetry() {
        let a = Matrix::from_rows(&[&[1.0, -2.0], &[3.0, 0.5]]).unwrap();
        assert_eq!(a.norm_inf(), 3.5);
        assert_eq!(a.max_abs(), 3.0);
        assert!(!a.is_symmetric(1e-12));
        assert!(a.symmetrize().is_symmetric(0.0));
    }
}
