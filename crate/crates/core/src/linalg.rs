//! Small dense matrices and their singular values.
//!
//! Jacobians here are at most a few rows wide, so singular values come from
//! cyclic Jacobi sweeps on `AᵀA`.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn set_column(&mut self, j: usize, col: &[f64]) {
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, *v);
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Largest entrywise absolute difference, relative to the largest entry of `other`.
    pub fn relative_difference(&self, other: &Matrix) -> f64 {
        let scale = other.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let diff = self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// Singular values in ascending order (`min(rows, cols)` of them).
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.cols;
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..self.rows {
                    s += self.get(k, i) * self.get(k, j);
                }
                gram[i * n + j] = s;
                gram[j * n + i] = s;
            }
        }
        let mut eig = symmetric_eigenvalues(&mut gram, n);
        eig.sort_by(|a, b| a.total_cmp(b));
        let skip = n.saturating_sub(self.rows);
        eig[skip..].iter().map(|l| libm::sqrt(l.max(0.0))).collect()
    }

    /// `(ℓ(A), |A|)`: least and greatest singular value.
    pub fn singular_extremes(&self) -> (f64, f64) {
        let s = self.singular_values();
        (s[0], s[s.len() - 1])
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_extremes().1
    }
}

/// Eigenvalues of a symmetric `n × n` matrix stored row-major; `a` is destroyed.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    for _sweep in 0..64 {
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            diag += a[i * n + i] * a[i * n + i];
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_singular_values() {
        let m = Matrix::from_rows(3, 3, vec![2.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0, 0.0, 0.5]);
        let s = m.singular_values();
        assert!((s[0] - 0.5).abs() < 1e-14);
        assert!((s[1] - 2.0).abs() < 1e-14);
        assert!((s[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_is_an_isometry() {
        let (c, s) = (libm::cos(0.3), libm::sin(0.3));
        let m = Matrix::from_rows(2, 2, vec![c, -s, s, c]);
        let (lo, hi) = m.singular_extremes();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lower_triangular_two_by_two() {
        // [[π/2, 0], [s g2, -s g1]] with g = (1/√2, 1/√2), s = π/(2√2):
        // σ² are the roots of x² - (π²/4 + s²) x + (π s g1 / 2)² = 0.
        let g = core::f64::consts::FRAC_1_SQRT_2;
        let s = core::f64::consts::FRAC_PI_2 * g;
        let m = Matrix::from_rows(2, 2, vec![core::f64::consts::FRAC_PI_2, 0.0, s * g, -s * g]);
        let tr = core::f64::consts::PI * core::f64::consts::PI / 4.0 + s * s;
        let det = core::f64::consts::FRAC_PI_2 * s * g;
        let disc = libm::sqrt(tr * tr - 4.0 * det * det);
        let hi = libm::sqrt((tr + disc) / 2.0);
        let lo = libm::sqrt((tr - disc) / 2.0);
        let (a, b) = m.singular_extremes();
        assert!((a - lo).abs() < 1e-13 && (b - hi).abs() < 1e-13);
    }

    #[test]
    fn tall_matrix_has_cols_singular_values() {
        let m = Matrix::from_rows(3, 2, vec![1.0, 0.0, 0.0, 3.0, 0.0, 0.0]);
        assert_eq!(m.singular_values().len(), 2);
        assert!((m.operator_norm() - 3.0).abs() < 1e-14);
    }
}
