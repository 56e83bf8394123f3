//! Small dense linear algebra for least squares: a row-major matrix and a
//! Householder QR factorization. The regressions here are a few dozen rows
//! by at most four columns, so nothing is blocked or vectorized.

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
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

    /// Builds a matrix from row slices. All rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Quadratic form `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.matvec(v))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder QR of an `n × k` matrix with `n ≥ k`.
///
/// Only what least squares needs is kept: the upper-triangular `R` and the
/// reflectors, which are applied to right-hand sides on demand.
#[derive(Debug, Clone)]
pub struct QrDecomposition {
    /// Reflector vectors, one per column, each of length `n - j`.
    reflectors: Vec<Vec<f64>>,
    r: Matrix,
}

impl QrDecomposition {
    pub fn new(a: &Matrix) -> Self {
        let (n, k) = (a.rows(), a.cols());
        assert!(n >= k, "QR needs at least as many rows as columns");
        let mut work = a.clone();
        let mut reflectors = Vec::with_capacity(k);
        for j in 0..k {
            let mut v: Vec<f64> = (j..n).map(|i| work[(i, j)]).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                reflectors.push(vec![0.0; n - j]);
                continue;
            }
            let alpha = if v[0] > 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= vnorm;
            }
            for c in j..k {
                let s: f64 = (j..n).map(|i| v[i - j] * work[(i, c)]).sum();
                for i in j..n {
                    work[(i, c)] -= 2.0 * v[i - j] * s;
                }
            }
            reflectors.push(v);
        }
        let mut r = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                r[(i, j)] = work[(i, j)];
            }
        }
        Self { reflectors, r }
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    /// Computes `Qᵀ b`.
    pub fn apply_qt(&self, b: &[f64]) -> Vec<f64> {
        let mut out = b.to_vec();
        for (j, v) in self.reflectors.iter().enumerate() {
            let s: f64 = v.iter().zip(&out[j..]).map(|(a, b)| a * b).sum();
            for (o, vi) in out[j..].iter_mut().zip(v) {
                *o -= 2.0 * vi * s;
            }
        }
        out
    }

    /// Solves `R x = b` for the leading `k` entries of `b`.
    pub fn solve_r(&self, b: &[f64]) -> Vec<f64> {
        let k = self.r.cols();
        let mut x = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = ((i + 1)..k).map(|j| self.r[(i, j)] * x[j]).sum();
            x[i] = (b[i] - s) / self.r[(i, i)];
        }
        x
    }

    /// Explicit inverse of the triangular factor.
    pub fn r_inverse(&self) -> Matrix {
        let k = self.r.cols();
        let mut inv = Matrix::zeros(k, k);
        for col in 0..k {
            let mut e = vec![0.0; k];
            e[col] = 1.0;
            let x = self.solve_r(&e);
            for i in 0..k {
                inv[(i, col)] = x[i];
            }
        }
        inv
    }

    /// Reciprocal condition number of `R` in the 1-norm (exact, not estimated).
    pub fn reciprocal_condition(&self) -> f64 {
        let k = self.r.cols();
        if (0..k).any(|i| self.r[(i, i)] == 0.0) {
            return 0.0;
        }
        let inv = self.r_inverse();
        let c = self.r.norm_one() * inv.norm_one();
        if c.is_finite() && c > 0.0 {
            1.0 / c
        } else {
            0.0
        }
    }
}
