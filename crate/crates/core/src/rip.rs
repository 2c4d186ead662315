//! Restricted isometry constants: coherence bounds, exhaustive or sampled
//! subset search, and the linear dependency inside each Steiner block.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{EtfError, RipError};
use crate::etf::{EtfMatrix, Frame};
use crate::linalg::{hermitian_eigenvalues, singular_values, CMatrix};

/// Deltas agreeing after rounding to this many decimals count as ties and
/// go to the earliest subset.
const TIE_DECIMALS: f64 = 1e10;

/// Largest `N` for which the whole Gram matrix is cached during a search.
const GRAM_CACHE_MAX: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RipMethod {
    Gershgorin,
    Exhaustive,
    Sampled,
    BlockCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RipReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub delta_lower: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_upper: Option<f64>,
    pub delta_exact: Option<f64>,
    pub exact: bool,
    pub witness: Vec<usize>,
    pub method: RipMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of subsets examined.
    pub subsets: u64,
}

/// Largest inner-product modulus between distinct columns, and the first
/// pair attaining it.
pub fn coherence_with_witness(frame: &dyn Frame) -> (f64, Option<(usize, usize)>) {
    let cols = frame.columns();
    let n = cols.len();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best = (0.0f64, None);
            for b in a + 1..n {
                let m = crate::etf::sparse_inner(&cols[a], &cols[b]).norm();
                if best.1.is_none() || m > best.0 {
                    best = (m, Some((a, b)));
                }
            }
            best
        })
        .reduce(
            || (0.0, None),
            |x, y| match (x.1, y.1) {
                (_, None) => x,
                (None, _) => y,
                (Some(p), Some(q)) => {
                    if y.0 > x.0 || (y.0 == x.0 && q < p) {
                        y
                    } else {
                        x
                    }
                }
            },
        )
}

pub fn coherence(frame: &dyn Frame) -> f64 {
    coherence_with_witness(frame).0
}

/// `(K - 1)` times the coherence: a `delta` for which `(K, delta)`-RIP holds.
pub fn coherence_rip_sufficient(frame: &dyn Frame, k: usize) -> Result<f64, RipError> {
    if k < 1 || k > frame.n_cols() {
        return Err(RipError::InvalidK { k, n: frame.n_cols() });
    }
    if k == 1 {
        return Ok(0.0);
    }
    Ok((k - 1) as f64 * coherence(frame))
}

/// Largest `K` with `K <= 1 + delta sqrt(M(N-1)/(N-M))`, decided exactly
/// for the given binary value of `delta`.
pub fn gershgorin_k_bound(m: u64, n: u64, delta: f64) -> Result<u64, RipError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(RipError::InvalidDelta(delta));
    }
    if m < 1 || n <= m {
        return Err(RipError::InvalidDims { m, n });
    }
    let d = BigRational::from_f64(delta).expect("finite delta");
    let rhs = &d * &d * BigRational::from_integer(BigInt::from(m) * BigInt::from(n - 1));
    let fits = |j: u64| BigRational::from_integer(BigInt::from(j) * BigInt::from(j) * BigInt::from(n - m)) <= rhs;
    let estimate = (delta * ((m * (n - 1)) as f64 / (n - m) as f64).sqrt()).floor() as u64;
    let mut j = estimate.saturating_sub(1);
    while fits(j + 1) {
        j += 1;
    }
    while j > 0 && !fits(j) {
        j -= 1;
    }
    Ok(j + 1)
}

/// Report combining the coherence lower bound with the Gershgorin upper
/// bound `(K - 1) mu`.
pub fn gershgorin_report(frame: &dyn Frame, k: usize) -> Result<RipReport, RipError> {
    let n = frame.n_cols();
    if k < 2 || k > n {
        return Err(RipError::InvalidK { k, n });
    }
    let (mu, pair) = coherence_with_witness(frame);
    let (a, b) = pair.expect("at least two columns");
    // Any superset of the coherent pair has delta at least mu.
    let mut witness = vec![a, b];
    witness.extend((0..n).filter(|&i| i != a && i != b).take(k - 2));
    witness.sort_unstable();
    Ok(RipReport {
        k,
        delta_lower: mu,
        delta_upper: Some((k - 1) as f64 * mu),
        delta_exact: None,
        exact: false,
        witness,
        method: RipMethod::Gershgorin,
        seed: None,
        subsets: 0,
    })
}

/// `binomial(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        match acc.checked_mul((n - i) as u128) {
            Some(x) => acc = x / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// The `rank`-th `k`-subset of `{0, 1, ...}` in colexicographic order.
pub fn colex_unrank(mut rank: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        out[i - 1] = c;
    }
    out
}

pub fn colex_rank(subset: &[usize]) -> u128 {
    subset.iter().enumerate().map(|(i, &c)| binomial(c, i + 1)).sum()
}

/// Advances `c` to the next subset of `{0..n}` in colex order.
pub fn colex_next(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, x) in c.iter_mut().enumerate().take(i) {
                *x = j;
            }
            return true;
        }
    }
    false
}

enum GramSource {
    Dense(usize, Vec<Complex64>),
    Sparse(Vec<Vec<(usize, Complex64)>>),
}

impl GramSource {
    fn new(frame: &dyn Frame) -> Self {
        let cols = frame.columns();
        let n = cols.len();
        if n <= GRAM_CACHE_MAX {
            let data: Vec<Complex64> = (0..n)
                .into_par_iter()
                .flat_map_iter(|a| {
                    let cols = &cols;
                    (0..n).map(move |b| crate::etf::sparse_inner(&cols[a], &cols[b]))
                })
                .collect();
            GramSource::Dense(n, data)
        } else {
            GramSource::Sparse(cols)
        }
    }

    fn entry(&self, a: usize, b: usize) -> Complex64 {
        match self {
            GramSource::Dense(n, data) => data[a * n + b],
            GramSource::Sparse(cols) => crate::etf::sparse_inner(&cols[a], &cols[b]),
        }
    }

    fn subset_gram(&self, subset: &[usize]) -> CMatrix {
        CMatrix::from_fn(subset.len(), subset.len(), |i, j| self.entry(subset[i], subset[j]))
    }
}

/// `max(lambda_max - 1, 1 - lambda_min)` over the eigenvalues of a subset
/// Gram matrix.
pub fn subset_delta_from_gram(g: &CMatrix) -> f64 {
    let eig = hermitian_eigenvalues(g);
    let (lo, hi) = (eig[0], eig[eig.len() - 1]);
    (hi - 1.0).max(1.0 - lo)
}

/// `delta` of a single column subset.
pub fn subset_delta(frame: &dyn Frame, subset: &[usize]) -> f64 {
    let cols: Vec<_> = subset.iter().map(|&i| frame.column(i)).collect();
    let g = CMatrix::from_fn(cols.len(), cols.len(), |i, j| crate::etf::sparse_inner(&cols[i], &cols[j]));
    subset_delta_from_gram(&g)
}

/// Best subset so far: larger rounded delta wins, then the smaller index.
#[derive(Clone)]
struct Best {
    key: i64,
    delta: f64,
    index: u128,
    subset: Vec<usize>,
}

impl Best {
    fn of(delta: f64, index: u128, subset: &[usize]) -> Self {
        Best { key: (delta * TIE_DECIMALS).round() as i64, delta, index, subset: subset.to_vec() }
    }

    fn better(self, other: Self) -> Self {
        if other.key > self.key || (other.key == self.key && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.better(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicOptions {
    /// Largest number of subsets enumerated exhaustively.
    pub budget: u64,
    /// Sample random subsets when the budget is exceeded.
    pub allow_sampling: bool,
    pub samples: u64,
    pub seed: u64,
    /// Stop the exhaustive scan at the first subset reaching this delta.
    pub early_exit: Option<f64>,
}

impl Default for RicOptions {
    fn default() -> Self {
        Self { budget: 5_000_000, allow_sampling: true, samples: 100_000, seed: 0, early_exit: None }
    }
}

/// The restricted isometry constant `delta_K`, exhaustively over all
/// `K`-subsets in colex order when the budget allows, otherwise as a lower
/// bound from seeded random subsets.
pub fn ric_exhaustive(frame: &dyn Frame, k: usize, opts: &RicOptions) -> Result<RipReport, RipError> {
    let n = frame.n_cols();
    if k < 1 || k > n {
        return Err(RipError::InvalidK { k, n });
    }
    let total = binomial(n, k);
    if total > opts.budget as u128 {
        if !opts.allow_sampling {
            let subsets = if total == u128::MAX { format!("more than {}", u128::MAX) } else { total.to_string() };
            return Err(RipError::BudgetExceeded { subsets, budget: opts.budget });
        }
        return Ok(sampled(frame, k, opts));
    }
    let gram = GramSource::new(frame);

    if let Some(threshold) = opts.early_exit {
        let mut c: Vec<usize> = (0..k).collect();
        let mut best: Option<Best> = None;
        let mut index = 0u128;
        loop {
            let delta = subset_delta_from_gram(&gram.subset_gram(&c));
            best = merge(best, Some(Best::of(delta, index, &c)));
            index += 1;
            if delta >= threshold {
                let b = best.expect("at least one subset");
                let finished = index == total;
                return Ok(report(k, b, finished, RipMethod::Exhaustive, None, index as u64));
            }
            if !colex_next(&mut c, n) {
                break;
            }
        }
        return Ok(report(k, best.expect("at least one subset"), true, RipMethod::Exhaustive, None, index as u64));
    }

    let chunks = (rayon::current_num_threads() as u128 * 8).min(total).max(1);
    let best = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = total * ci / chunks;
            let end = total * (ci + 1) / chunks;
            let mut c = colex_unrank(start, k);
            let mut best: Option<Best> = None;
            for index in start..end {
                let delta = subset_delta_from_gram(&gram.subset_gram(&c));
                best = merge(best, Some(Best::of(delta, index, &c)));
                colex_next(&mut c, n);
            }
            best
        })
        .reduce(|| None, merge)
        .expect("at least one subset");
    Ok(report(k, best, true, RipMethod::Exhaustive, None, total as u64))
}

fn sampled(frame: &dyn Frame, k: usize, opts: &RicOptions) -> RipReport {
    let n = frame.n_cols();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let subsets: Vec<Vec<usize>> = (0..opts.samples.max(1))
        .map(|_| {
            let mut s = rand::seq::index::sample(&mut rng, n, k).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let gram = GramSource::new(frame);
    let best = subsets
        .par_iter()
        .enumerate()
        .map(|(i, s)| Some(Best::of(subset_delta_from_gram(&gram.subset_gram(s)), i as u128, s)))
        .reduce(|| None, merge)
        .expect("at least one sample");
    let mut r = report(k, best, false, RipMethod::Sampled, Some(opts.seed), subsets.len() as u64);
    r.delta_exact = None;
    r
}

fn report(k: usize, best: Best, exact: bool, method: RipMethod, seed: Option<u64>, subsets: u64) -> RipReport {
    RipReport {
        k,
        delta_lower: best.delta,
        delta_upper: None,
        delta_exact: exact.then_some(best.delta),
        exact,
        witness: best.subset,
        method,
        seed,
        subsets,
    }
}

/// The linear dependency among the columns of one Steiner block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockCertificate {
    #[serde(flatten)]
    pub report: RipReport,
    /// Smallest singular value of the block's `M x (r+1)` submatrix.
    pub sigma_min: f64,
    /// Norm of the block's columns combined with the omitted-row weights.
    pub dependency_residual: f64,
    /// `1 + sqrt(M(N-1)/(N-M))`, which equals `r + 1`.
    pub k_formula: f64,
    pub passed: bool,
}

/// Certificate that the `r + 1` columns of the first point are linearly
/// dependent, so `delta_{r+1} >= 1`.
pub fn block_dependency_certificate(etf: &EtfMatrix) -> Result<BlockCertificate, RipError> {
    let prov = etf.provenance().ok_or(EtfError::NoProvenance)?;
    let r = prov.replication();
    let size = r + 1;
    let (m, n) = (etf.rows(), etf.cols());
    let block: Vec<usize> = (0..size).collect();

    let sub = CMatrix::from_fn(m, size, |i, c| {
        etf.column(c).iter().find(|(row, _)| *row == i).map_or(Complex64::new(0.0, 0.0), |&(_, z)| z)
    });
    let sigma_min = *singular_values(&sub).last().expect("nonempty block");

    // Rows of a flat matrix are orthogonal, so weighting column c by the
    // conjugated omitted-row entry cancels every used row.
    let h = &prov.flats[0];
    let omitted = prov.omitted_row(0);
    let mut combo = vec![Complex64::new(0.0, 0.0); m];
    for c in 0..size {
        let w = h.entry(omitted, c).conj();
        for (i, z) in etf.column(c) {
            combo[i] += w * z;
        }
    }
    let dependency_residual = combo.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let (mf, nf) = (m as f64, n as f64);
    let k_formula = 1.0 + (mf * (nf - 1.0) / (nf - mf)).sqrt();
    let passed = sigma_min <= 1e-9 && dependency_residual <= 1e-9;
    Ok(BlockCertificate {
        report: RipReport {
            k: size,
            delta_lower: if passed { 1.0 } else { 1.0 - sigma_min * sigma_min },
            delta_upper: None,
            delta_exact: None,
            exact: false,
            witness: block,
            method: RipMethod::BlockCertificate,
            seed: None,
            subsets: 1,
        },
        sigma_min,
        dependency_residual,
        k_formula,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::pair_design;
    use crate::etf::{steiner_etf, DenseFrame};

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 4), 1820);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(1001, 3), 166_666_500);
        assert_eq!(binomial(200, 100), u128::MAX);
    }

    #[test]
    fn colex_order_small() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while colex_next(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        for (i, s) in seen.iter().enumerate() {
            assert_eq!(colex_rank(s), i as u128);
            assert_eq!(&colex_unrank(i as u128, 2), s);
        }
    }

    #[test]
    fn gershgorin_bounds() {
        assert_eq!(gershgorin_k_bound(6, 16, 0.5), Ok(2));
        assert_eq!(gershgorin_k_bound(6, 16, 1.0 - f64::EPSILON), Ok(3));
        // Exactly on the boundary: 1 + (2/3) * 3 = 3.
        assert_eq!(gershgorin_k_bound(6, 16, 2.0 / 3.0), Ok(2));
        assert_eq!(gershgorin_k_bound(6, 16, 0.75), Ok(3));
        assert_eq!(gershgorin_k_bound(6, 16, 0.0), Err(RipError::InvalidDelta(0.0)));
        assert_eq!(gershgorin_k_bound(6, 16, 1.0), Err(RipError::InvalidDelta(1.0)));
        assert_eq!(gershgorin_k_bound(16, 6, 0.5), Err(RipError::InvalidDims { m: 16, n: 6 }));
    }

    #[test]
    fn orthonormal_basis_has_zero_delta() {
        let basis = DenseFrame::new(CMatrix::identity(5));
        let rep = ric_exhaustive(&basis, 3, &RicOptions::default()).unwrap();
        assert!(rep.delta_lower.abs() < 1e-15);
        assert_eq!(rep.witness, vec![0, 1, 2]);
        assert_eq!(coherence(&basis), 0.0);
    }

    #[test]
    fn budget_and_sampling() {
        let f = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
        let strict = RicOptions { budget: 100, allow_sampling: false, ..Default::default() };
        assert_eq!(
            ric_exhaustive(&f, 4, &strict),
            Err(RipError::BudgetExceeded { subsets: "1820".into(), budget: 100 })
        );
        let sampling = RicOptions { budget: 100, samples: 500, seed: 7, ..Default::default() };
        let a = ric_exhaustive(&f, 4, &sampling).unwrap();
        let b = ric_exhaustive(&f, 4, &sampling).unwrap();
        assert_eq!(a, b);
        assert!(!a.exact && a.delta_exact.is_none());
        assert_eq!(a.seed, Some(7));
        assert_eq!(a.method, RipMethod::Sampled);
        assert!(a.delta_lower <= 1.0 + 1e-9);
    }

    #[test]
    fn early_exit_stops_at_first_block() {
        let f = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
        let opts = RicOptions { early_exit: Some(1.0 - 1e-9), ..Default::default() };
        let rep = ric_exhaustive(&f, 4, &opts).unwrap();
        assert_eq!(rep.witness, vec![0, 1, 2, 3]);
        assert_eq!(rep.subsets, 1);
        assert!(!rep.exact);
    }

    #[test]
    fn certificate_requires_provenance() {
        let f = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
        let bare = EtfMatrix::from_columns(6, f.scale_sq(), (0..16).map(|n| f.column_phases(n).to_vec()).collect());
        assert_eq!(block_dependency_certificate(&bare), Err(RipError::Etf(EtfError::NoProvenance)));
    }

    #[test]
    fn report_json_keys() {
        let f = steiner_etf(&pair_design(3).unwrap(), false).unwrap();
        let rep = ric_exhaustive(&f, 2, &RicOptions::default()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.starts_with(r#"{"K":2,"delta_lower":0.5"#), "{json}");
        assert!(json.contains(r#""exact":true,"witness":[0,1],"method":"exhaustive","subsets":36}"#), "{json}");
    }
}
