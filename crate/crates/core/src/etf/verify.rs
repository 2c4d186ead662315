use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{EtfMatrix, Frame};
use crate::linalg::{hermitian_eigenvalues, CMatrix};

/// Quantities fixed by the dimensions of a unit-norm tight frame, plus the
/// measured density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtfParams {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Tight frame bound `N/M`.
    pub frame_bound: f64,
    /// Welch bound `sqrt((N-M)/(M(N-1)))`.
    pub alpha: f64,
    pub redundancy: f64,
    /// Fraction of nonzero entries.
    pub density: f64,
    pub nnz: usize,
    /// `sqrt((N-1)/(M(N-M)))`, undefined when `M = N`.
    pub density_formula: Option<f64>,
    pub density_consistent: bool,
}

pub fn compute_params(frame: &dyn Frame) -> EtfParams {
    let (m, n) = (frame.n_rows(), frame.n_cols());
    let (mf, nf) = (m as f64, n as f64);
    let nnz = frame.nnz();
    let density = nnz as f64 / (mf * nf);
    let alpha = if n > 1 { ((nf - mf) / (mf * (nf - 1.0))).max(0.0).sqrt() } else { 0.0 };
    let density_formula = (n > m).then(|| ((nf - 1.0) / (mf * (nf - mf))).sqrt());
    let density_consistent = density_formula.is_some_and(|d| (d - density).abs() <= 1e-12);
    EtfParams { m, n, frame_bound: nf / mf, alpha, redundancy: nf / mf, density, nnz, density_formula, density_consistent }
}

/// Result of checking `F F* = (N/M) I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightReport {
    pub passed: bool,
    pub frame_bound: f64,
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
    /// Integer check of the unscaled product, for ±1 Steiner frames.
    pub exact: Option<bool>,
    /// First `(row, row)` entry of `F F*` breaking the tolerance.
    pub counterexample: Option<(usize, usize)>,
}

/// Dense `F F*`.
fn frame_operator(frame: &dyn Frame) -> CMatrix {
    let m = frame.n_rows();
    let mut s = CMatrix::zeros(m, m);
    for col in frame.columns() {
        for &(i, a) in &col {
            for &(j, b) in &col {
                s[(i, j)] += a * b.conj();
            }
        }
    }
    s
}

/// Unscaled integer `F F^T` when every stored entry is ±1.
fn exact_frame_operator(etf: &EtfMatrix) -> Option<Vec<Vec<i64>>> {
    if !etf.is_real() {
        return None;
    }
    let m = etf.rows();
    let mut s = vec![vec![0i64; m]; m];
    for n in 0..etf.cols() {
        let col = etf.column_phases(n);
        for &(i, a) in col {
            for &(j, b) in col {
                s[i][j] += a.sign()? * b.sign()?;
            }
        }
    }
    Some(s)
}

pub fn verify_tight(frame: &dyn Frame, tol: f64) -> TightReport {
    let (m, n) = (frame.n_rows(), frame.n_cols());
    let bound = n as f64 / m as f64;
    let s = frame_operator(frame);
    let mut max_offdiag: f64 = 0.0;
    let mut max_diag_dev: f64 = 0.0;
    let mut counterexample = None;
    for i in 0..m {
        for j in 0..m {
            let dev = if i == j { (s[(i, i)] - bound).norm() } else { s[(i, j)].norm() };
            if i == j {
                max_diag_dev = max_diag_dev.max(dev);
            } else {
                max_offdiag = max_offdiag.max(dev);
            }
            if dev > tol * bound && counterexample.is_none() {
                counterexample = Some((i, j));
            }
        }
    }

    // Unscaled F F^T must equal (N/M)/scale^2 times the identity.
    let exact = frame.as_etf().and_then(|etf| {
        let ops = exact_frame_operator(etf)?;
        let ss = etf.scale_sq();
        let num = n as u64 * ss.den;
        let den = m as u64 * ss.num;
        let diag = num.is_multiple_of(den).then_some((num / den) as i64);
        let ok = (0..m).all(|i| (0..m).all(|j| Some(ops[i][j]) == if i == j { diag } else { Some(0) }));
        Some(ok)
    });

    let passed = counterexample.is_none() && exact != Some(false);
    TightReport { passed, frame_bound: bound, max_offdiag, max_diag_dev, exact, counterexample }
}

/// A column pair and the modulus of its inner product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairWitness {
    pub a: usize,
    pub b: usize,
    pub modulus: f64,
}

/// Statistics for one class of column pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairClassStats {
    pub count: usize,
    pub min_modulus: f64,
    pub max_modulus: f64,
    /// Largest distance between an inner product and its predicted value.
    pub max_prediction_error: f64,
}

impl PairClassStats {
    fn empty() -> Self {
        Self { count: 0, min_modulus: f64::INFINITY, max_modulus: 0.0, max_prediction_error: 0.0 }
    }

    fn add(&mut self, modulus: f64, err: f64) {
        self.count += 1;
        self.min_modulus = self.min_modulus.min(modulus);
        self.max_modulus = self.max_modulus.max(modulus);
        self.max_prediction_error = self.max_prediction_error.max(err);
    }

    fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        self.min_modulus = self.min_modulus.min(other.min_modulus);
        self.max_modulus = self.max_modulus.max(other.max_modulus);
        self.max_prediction_error = self.max_prediction_error.max(other.max_prediction_error);
        self
    }
}

/// Distinct unscaled integer inner products of a ±1 Steiner frame, split
/// by whether the two columns come from the same point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactPairValues {
    pub same_block: BTreeSet<i64>,
    pub cross_block: BTreeSet<i64>,
    /// The scale squared is `1/denominator`.
    pub denominator: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquiangularReport {
    pub passed: bool,
    /// Welch bound for these dimensions.
    pub alpha: f64,
    pub max_norm_dev: f64,
    pub max_pair_dev: f64,
    /// Largest inner-product modulus over distinct pairs.
    pub coherence: f64,
    pub min_pair_modulus: f64,
    /// Pair with the largest deviation from `alpha`.
    pub worst_pair: Option<PairWitness>,
    pub norm_counterexample: Option<usize>,
    pub same_block: Option<PairClassStats>,
    pub cross_block: Option<PairClassStats>,
    pub exact: Option<ExactPairValues>,
}

/// `sum_i conj(x_i) y_i` over two sparse columns with increasing rows.
pub(crate) fn sparse_inner(x: &[(usize, Complex64)], y: &[(usize, Complex64)]) -> Complex64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = Complex64::new(0.0, 0.0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += x[i].1.conj() * y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

#[derive(Clone)]
struct PairScan {
    max_dev: f64,
    worst: Option<PairWitness>,
    max_mod: f64,
    min_mod: f64,
    same: PairClassStats,
    cross: PairClassStats,
}

impl PairScan {
    fn empty() -> Self {
        Self {
            max_dev: 0.0,
            worst: None,
            max_mod: 0.0,
            min_mod: f64::INFINITY,
            same: PairClassStats::empty(),
            cross: PairClassStats::empty(),
        }
    }

    // Ties on the deviation go to the lexicographically smallest pair, so
    // the merge result does not depend on how the scan was partitioned.
    fn merge(self, other: Self) -> Self {
        let take_other = match (&self.worst, &other.worst) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => other.max_dev > self.max_dev || (other.max_dev == self.max_dev && (b.a, b.b) < (a.a, a.b)),
        };
        let (max_dev, worst) = if take_other { (other.max_dev, other.worst) } else { (self.max_dev, self.worst) };
        Self {
            max_dev,
            worst,
            max_mod: self.max_mod.max(other.max_mod),
            min_mod: self.min_mod.min(other.min_mod),
            same: self.same.merge(other.same),
            cross: self.cross.merge(other.cross),
        }
    }
}

/// Predicted inner product `conj(f_a) . f_b` for two columns of the same
/// point: minus the scale squared times the omitted-row contribution.
fn same_block_prediction(etf: &EtfMatrix, a: usize, b: usize) -> Option<Complex64> {
    let prov = etf.provenance()?;
    let order = prov.replication() + 1;
    let j = a / order;
    let h = &prov.flats[j];
    let c = prov.omitted_row(j);
    let term = h.entry(c, a % order).conj() * h.entry(c, b % order);
    Some(-term * etf.scale_sq().value())
}

pub fn verify_equiangular(frame: &dyn Frame, tol: f64) -> EquiangularReport {
    let params = compute_params(frame);
    let alpha = params.alpha;
    let cols = frame.columns();
    let n = cols.len();
    let etf = frame.as_etf();
    let block_size = etf.and_then(|e| e.provenance()).map(|p| p.replication() + 1);

    let mut max_norm_dev: f64 = 0.0;
    let mut norm_counterexample = None;
    for (i, col) in cols.iter().enumerate() {
        let norm = col.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt();
        let dev = (norm - 1.0).abs();
        if dev > tol && norm_counterexample.is_none() {
            norm_counterexample = Some(i);
        }
        max_norm_dev = max_norm_dev.max(dev);
    }

    let scan = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = PairScan::empty();
            for b in a + 1..n {
                let g = sparse_inner(&cols[a], &cols[b]);
                let modulus = g.norm();
                let dev = (modulus - alpha).abs();
                if acc.worst.is_none() || dev > acc.max_dev {
                    acc.max_dev = dev;
                    acc.worst = Some(PairWitness { a, b, modulus });
                }
                acc.max_mod = acc.max_mod.max(modulus);
                acc.min_mod = acc.min_mod.min(modulus);
                if let Some(size) = block_size {
                    if a / size == b / size {
                        let etf = etf.expect("block size implies provenance");
                        let predicted = same_block_prediction(etf, a, b).expect("provenance present");
                        acc.same.add(modulus, (g - predicted).norm());
                    } else {
                        // One shared row: the prediction is a unimodular
                        // number times the scale squared.
                        let s2 = etf.expect("block size implies provenance").scale_sq().value();
                        acc.cross.add(modulus, (modulus - s2).abs());
                    }
                }
            }
            acc
        })
        .reduce(PairScan::empty, PairScan::merge);

    let exact = etf.and_then(|e| exact_pair_values(e, block_size?));
    let max_pair_dev = scan.max_dev;
    let passed = norm_counterexample.is_none() && max_pair_dev <= tol;
    EquiangularReport {
        passed,
        alpha,
        max_norm_dev,
        max_pair_dev,
        coherence: scan.max_mod,
        min_pair_modulus: if n > 1 { scan.min_mod } else { 0.0 },
        worst_pair: scan.worst.filter(|_| max_pair_dev > tol),
        norm_counterexample,
        same_block: block_size.map(|_| scan.same),
        cross_block: block_size.map(|_| scan.cross),
        exact,
    }
}

fn exact_pair_values(etf: &EtfMatrix, block_size: usize) -> Option<ExactPairValues> {
    if !etf.is_real() {
        return None;
    }
    let n = etf.cols();
    let cols: Vec<Vec<(usize, i64)>> =
        (0..n).map(|c| etf.column_phases(c).iter().map(|&(i, p)| (i, p.sign().unwrap())).collect()).collect();
    let mut same_block = BTreeSet::new();
    let mut cross_block = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (&cols[a], &cols[b]);
            let (mut i, mut j, mut dot) = (0, 0, 0i64);
            while i < x.len() && j < y.len() {
                match x[i].0.cmp(&y[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        dot += x[i].1 * y[j].1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            if a / block_size == b / block_size {
                same_block.insert(dot);
            } else {
                cross_block.insert(dot);
            }
        }
    }
    let ss = etf.scale_sq();
    (ss.num == 1).then_some(ExactPairValues { same_block, cross_block, denominator: ss.den })
}

/// The Gram matrix `F* F`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(pub CMatrix);

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        self.0.max_abs_diff(&self.0.adjoint())
    }

    /// Eigenvalues by Jacobi on the full `N x N` matrix; these are also its
    /// singular values since the Gram matrix is positive semidefinite.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > threshold).count()
    }
}

pub fn gram(frame: &dyn Frame) -> GramMatrix {
    let cols = frame.columns();
    let n = cols.len();
    let rows: Vec<Vec<Complex64>> =
        (0..n).into_par_iter().map(|a| (0..n).map(|b| sparse_inner(&cols[a], &cols[b])).collect()).collect();
    GramMatrix(CMatrix::from_fn(n, n, |a, b| rows[a][b]))
}

/// Rank of the Gram matrix computed from the `M x M` frame operator, whose
/// nonzero spectrum coincides with the Gram matrix's.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramRank {
    pub rank: usize,
    /// Eigenvalues of `F F*`, ascending.
    pub nonzero_side_spectrum: Vec<f64>,
    /// Largest eigenvalue counted as zero.
    pub max_null_eigenvalue: f64,
}

/// Eigenvalues above 0.5 count toward the rank; the remaining ones are
/// reported so callers can confirm they are numerically zero. The other
/// `N - M` Gram eigenvalues vanish because the rank is at most `M`.
pub fn gram_rank(frame: &dyn Frame) -> GramRank {
    let spectrum = hermitian_eigenvalues(&frame_operator(frame));
    let rank = spectrum.iter().filter(|&&x| x > 0.5).count();
    let max_null_eigenvalue = spectrum.iter().filter(|&&x| x <= 0.5).fold(0.0f64, |acc, &x| acc.max(x.abs()));
    GramRank { rank, nonzero_side_spectrum: spectrum, max_null_eigenvalue }
}
