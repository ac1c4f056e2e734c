//! Small dense square matrices for the grid checks.
//!
//! Row-major, f64, fixed square shape. Covers exactly what the verification
//! grids need: products, transposes, determinants, triangular solves, and a
//! deterministic power-iteration operator norm. Shape mismatches are
//! programming errors and panic.

/// A dense n×n matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Mat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from rows; every row must have the same length as the count.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(n > 0, "matrix dimension must be positive");
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (o, &v) in out.data.iter_mut().zip(other.data.iter()) {
            *o += v;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (o, &v) in out.data.iter_mut().zip(other.data.iter()) {
            *o -= v;
        }
        out
    }

    pub fn scale(&self, c: f64) -> Mat {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= c;
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_upper_triangular(&self) -> bool {
        for i in 1..self.n {
            for j in 0..i {
                if self.get(i, j) != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_abs = a[col * n + col].abs();
            for row in col + 1..n {
                let v = a[row * n + col].abs();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = row;
                }
            }
            if pivot_abs == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for row in col + 1..n {
                let factor = a[row * n + col] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
            }
        }
        det
    }

    /// Solves U·x = b for upper-triangular U by back substitution.
    /// Panics if a diagonal entry vanishes.
    pub fn solve_upper(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "dimension mismatch");
        debug_assert!(self.is_upper_triangular());
        let n = self.n;
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..n {
                acc -= self.get(i, j) * x[j];
            }
            let d = self.get(i, i);
            assert!(d != 0.0, "singular triangular matrix");
            x[i] = acc / d;
        }
        x
    }

    /// Inverse of an upper-triangular matrix, column by column.
    pub fn inverse_upper(&self) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve_upper(&e);
            for (i, &v) in col.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Operator (spectral) norm via 50 steps of power iteration on AᵀA,
    /// started from a fixed deterministic vector.
    pub fn op_norm(&self) -> f64 {
        let n = self.n;
        let gram = self.transpose().mul(self);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        normalize(&mut v);
        for _ in 0..50 {
            let mut w = gram.mul_vec(&v);
            let norm = vec_norm(&w);
            if norm == 0.0 {
                return 0.0;
            }
            for x in w.iter_mut() {
                *x /= norm;
            }
            v = w;
        }
        let w = gram.mul_vec(&v);
        dot(&v, &w).max(0.0).sqrt()
    }
}

pub fn vec_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

fn normalize(v: &mut [f64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_transpose_agree_with_hand_values() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, Mat::from_rows(&[vec![2.0, 1.0], vec![4.0, 3.0]]));
        assert_eq!(a.transpose().get(0, 1), 3.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0]), vec![3.0, 7.0]);
        assert_eq!(Mat::identity(3).mul(&Mat::identity(3)), Mat::identity(3));
    }

    #[test]
    fn determinants_match_cofactor_values() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!((a.det() + 2.0).abs() < 1e-12);
        let m = Mat::from_rows(&[
            vec![2.0, 0.0, 1.0],
            vec![0.0, 3.0, 0.0],
            vec![1.0, 0.0, 2.0],
        ]);
        // det = 3·(2·2 − 1·1) = 9.
        assert!((m.det() - 9.0).abs() < 1e-12);
        let singular = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(singular.det(), 0.0);
        // Pivoting handles a zero in the corner.
        let swapped = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!((swapped.det() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangular_solves_invert_exactly() {
        let u = Mat::from_rows(&[vec![2.0, 3.0], vec![0.0, 4.0]]);
        let x = u.solve_upper(&[8.0, 8.0]);
        assert_eq!(x, vec![1.0, 2.0]);
        let inv = u.inverse_upper();
        let prod = u.mul(&inv);
        assert!(prod.sub(&Mat::identity(2)).frobenius() < 1e-12);
        assert!(u.is_upper_triangular());
        assert!(!u.transpose().is_upper_triangular());
    }

    #[test]
    fn operator_norm_matches_the_shear_formula() {
        // For [[1, c], [0, 1]] the largest singular value is
        // (|c| + sqrt(c² + 4)) / 2.
        for c in [0.0, 0.5, 2.0, 10.0] {
            let m = Mat::from_rows(&[vec![1.0, c], vec![0.0, 1.0]]);
            let expected = (c + (c * c + 4.0).sqrt()) / 2.0;
            assert!(
                (m.op_norm() - expected).abs() < 1e-9,
                "c = {c}: {} vs {expected}",
                m.op_norm()
            );
        }
        assert!((Mat::identity(4).op_norm() - 1.0).abs() < 1e-12);
        let diag = Mat::from_rows(&[vec![3.0, 0.0], vec![0.0, -7.0]]);
        assert!((diag.op_norm() - 7.0).abs() < 1e-9);
        assert_eq!(Mat::zeros(2).op_norm(), 0.0);
    }
}
