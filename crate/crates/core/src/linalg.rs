//! Small dense complex linear algebra: a row-major matrix, cyclic Jacobi for
//! Hermitian eigenvalues, and one-sided Jacobi for singular values.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Off-diagonal Frobenius norm at which Jacobi iteration stops, relative to
/// the Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Rotation annihilating the off-diagonal entry `g` of the 2x2 Hermitian
/// block `[[a, g], [conj g, b]]`. Returns `(c, s, phase)` where the unitary
/// has columns `(c, -s e^{-i phi})` and `(s, c e^{-i phi})`.
fn jacobi_rotation(a: f64, b: f64, g: Complex64) -> (f64, f64, Complex64) {
    let mag = g.norm();
    let phase = if mag > 0.0 { (g / mag).conj() } else { Complex64::new(1.0, 0.0) };
    let theta = (b - a) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi sweeps.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    assert_eq!(a.rows, a.cols, "matrix must be square");
    let n = a.rows;
    let mut m = a.clone();
    let scale = a.frobenius_norm().max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                if g.norm() == 0.0 {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, g);
                // A <- A U
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = akp * c - akq * e * s;
                    m[(k, q)] = akp * s + akq * e * c;
                }
                // A <- U* A
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = apk * c - aqk * e.conj() * s;
                    m[(q, k)] = apk * s + aqk * e.conj() * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi on columns.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let (rows, cols) = (a.rows, a.cols);
    // Work on columns stored contiguously.
    let mut colv: Vec<Vec<Complex64>> = (0..cols).map(|j| (0..rows).map(|i| a[(i, j)]).collect()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = colv[p].iter().zip(&colv[q]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                let (left, right) = colv.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - yq * e * s;
                    *y = xp * s + yq * e * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = colv.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}
