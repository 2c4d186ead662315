//! Exact eigenvalue oracle for small real symmetric rational matrices:
//! characteristic polynomial by Faddeev-LeVerrier, roots isolated with a
//! Sturm sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use etf_forge::etf::EtfMatrix;

/// Coefficients, lowest degree first.
pub type Poly = Vec<BigRational>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact Gram entries of a real Steiner frame on `subset`.
pub fn exact_gram(etf: &EtfMatrix, subset: &[usize]) -> Vec<Vec<BigRational>> {
    let pattern = etf.unscaled_pattern();
    let s = etf.scale_sq();
    let scale = q(s.num as i64, s.den as i64);
    let val = |i: usize, n: usize| pattern[i][n].map_or(0, |p| p.sign().expect("real frame"));
    subset
        .iter()
        .map(|&a| {
            subset
                .iter()
                .map(|&b| &scale * BigInt::from((0..etf.rows()).map(|i| val(i, a) * val(i, b)).sum::<i64>()))
                .collect()
        })
        .collect()
}

/// det(xI - A) by Faddeev-LeVerrier.
pub fn char_poly(a: &[Vec<BigRational>]) -> Poly {
    let n = a.len();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| &a[i][l] * &m[l][j]).sum()).collect()).collect();
        let trace: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -trace / BigInt::from(k);
        m = am;
    }
    c
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &Poly) -> Poly {
    trim((1..p.len()).map(|i| &p[i] * BigInt::from(i)).collect())
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead = b.last().unwrap();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    r
}

fn sturm(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let r = rem(&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if r.iter().all(Zero::is_zero) {
            return seq;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
}

/// Distinct real roots greater than `x` (p(x) != 0 assumed).
fn roots_above(seq: &[Poly], x: &BigRational) -> usize {
    let changes = |vals: Vec<i32>| {
        let nz: Vec<i32> = vals.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |v: BigRational| if v.is_zero() { 0 } else if v.is_positive() { 1 } else { -1 };
    let at_x = changes(seq.iter().map(|p| sign(eval(p, x))).collect());
    let at_inf = changes(seq.iter().map(|p| sign(p.last().unwrap().clone())).collect());
    at_x - at_inf
}

/// Smallest and largest eigenvalue of a real symmetric rational matrix,
/// isolated by Sturm bisection to within 2^-48.
pub fn extreme_eigenvalues(a: &[Vec<BigRational>]) -> (f64, f64) {
    let seq = sturm(&char_poly(a));
    let bound = BigRational::one()
        + a.iter().map(|row| row.iter().map(|x| x.abs()).sum::<BigRational>()).max().unwrap();
    let total = roots_above(&seq, &-bound.clone());
    let to_f64 = |x: &BigRational| x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();

    // Largest root: invariant roots_above(lo) >= 1, roots_above(hi) == 0.
    let bisect = |target_above: usize| {
        let (mut lo, mut hi) = (-bound.clone(), bound.clone());
        for _ in 0..56 {
            let mid = (&lo + &hi) / BigInt::from(2);
            if roots_above(&seq, &mid) >= target_above {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        to_f64(&((lo + hi) / BigInt::from(2)))
    };
    (bisect(total), bisect(1))
}

