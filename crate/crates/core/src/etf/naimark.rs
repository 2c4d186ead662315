use num_complex::Complex64;

use super::{verify_tight, DenseFrame, Frame};
use crate::error::EtfError;
use crate::linalg::CMatrix;

/// Candidates whose residual after projection falls below this are skipped.
const MIN_RESIDUAL: f64 = 1e-6;

/// Removes from `x` its components along each (orthonormal) vector in
/// `basis`, twice for stability.
fn project_out(x: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for u in basis {
            let coef: Complex64 = u.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            for (xi, ui) in x.iter_mut().zip(u) {
                *xi -= coef * ui;
            }
        }
    }
}

/// The Naimark complement of a tight frame: an `(N - M) x N` unit-norm tight
/// frame `F'` with `F'* F' = (N/(N-M)) I - (M/(N-M)) F* F`.
///
/// The rows of `sqrt(M/N) F` are orthonormal; they are completed to a basis
/// of `C^N` by Gram-Schmidt over the standard basis vectors in order, and the
/// new rows are scaled by `sqrt(N/(N-M))`.
pub fn naimark_complement(frame: &dyn Frame, tol: f64) -> Result<DenseFrame, EtfError> {
    let (m, n) = (frame.n_rows(), frame.n_cols());
    let tight = verify_tight(frame, tol);
    if !tight.passed {
        let (i, j) = tight.counterexample.unwrap_or((0, 0));
        return Err(EtfError::NotTight(format!("F F* differs from (N/M) I at entry ({i}, {j})")));
    }
    if m >= n {
        return Err(EtfError::NotTight(format!("no complement for M = {m} >= N = {n}")));
    }

    let dense = frame.to_dense();
    let s = (m as f64 / n as f64).sqrt();
    let mut basis: Vec<Vec<Complex64>> = (0..m).map(|i| dense.row(i).iter().map(|z| z * s).collect()).collect();
    // Re-orthonormalize the given rows so rounding does not leak into the
    // complement.
    for i in 0..m {
        let (done, rest) = basis.split_at_mut(i);
        project_out(&mut rest[0], done);
        let norm = rest[0].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        rest[0].iter_mut().for_each(|z| *z /= norm);
    }

    let mut complement = Vec::with_capacity(n - m);
    for e in 0..n {
        if complement.len() == n - m {
            break;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[e] = Complex64::new(1.0, 0.0);
        project_out(&mut x, &basis);
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= MIN_RESIDUAL {
            continue;
        }
        x.iter_mut().for_each(|z| *z /= norm);
        basis.push(x.clone());
        complement.push(x);
    }
    if complement.len() != n - m {
        return Err(EtfError::NotTight(format!("completion found {} of {} rows", complement.len(), n - m)));
    }

    let t = (n as f64 / (n - m) as f64).sqrt();
    Ok(DenseFrame::new(CMatrix::from_fn(n - m, n, |i, j| complement[i][j] * t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::pair_design;
    use crate::etf::{gram, steiner_etf, verify_equiangular, EtfMatrix, ScaleSq};

    #[test]
    fn complement_of_six_by_sixteen() {
        let f = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
        let c = naimark_complement(&f, 1e-9).unwrap();
        assert_eq!((c.n_rows(), c.n_cols()), (10, 16));
        assert!(c.is_real());
        assert!(verify_tight(&c, 1e-9).passed);
        let eq = verify_equiangular(&c, 1e-9);
        assert!(eq.passed);
        assert!((eq.alpha - (6.0f64 / 150.0).sqrt()).abs() < 1e-15);
        // Gram identity.
        let (g, gc) = (gram(&f).0, gram(&c).0);
        let predicted = CMatrix::from_fn(16, 16, |a, b| {
            let id = if a == b { 1.6 } else { 0.0 };
            Complex64::new(id, 0.0) - g[(a, b)] * 0.6
        });
        assert!(gc.max_abs_diff(&predicted) < 1e-12);
    }

    #[test]
    fn not_tight_rejected() {
        let f = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
        let col = f.column_phases(0).to_vec();
        let repeated = EtfMatrix::from_columns(6, ScaleSq::new(1, 3), vec![col; 16]);
        assert!(matches!(naimark_complement(&repeated, 1e-9), Err(EtfError::NotTight(_))));
    }
}
