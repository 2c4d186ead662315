//! Design parameters behind an ETF's dimensions, admissibility of `(k, v)`,
//! and the table of Steiner ETFs produced by the known design families.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed};
use serde::Serialize;

use crate::designs::{affine_lines, hermitian_unital, pair_design, projective_lines, steiner_triple, SteinerSystem};
use crate::error::{DesignError, ParamError};
use crate::field::PrimePower;
use crate::flat::{real_hadamard_kind, Realness};

/// `(k, v0(k))`: for `v > v0(k)` every admissible `(k, v)` is realized.
/// Carried as reference data only.
pub const ASYMPTOTIC_THRESHOLDS: [(u64, u64); 4] = [(6, 801), (7, 2605), (8, 3753), (9, 16497)];

/// Admissible `(k, v)` for which no Steiner system exists.
pub const KNOWN_NONEXISTENT: [(u64, u64); 5] = [(6, 16), (6, 21), (6, 36), (6, 46), (7, 43)];

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fmt_ratio(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Parameters of the (2,k,v)-Steiner system an `M x N` Steiner ETF would
/// come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignParams {
    pub v: BigRational,
    pub b: BigRational,
    pub r: BigRational,
    pub k: BigRational,
    pub alpha_sq: BigRational,
    pub alpha: BigRational,
}

impl DesignParams {
    /// `(v, b, r, k)` as integers when all four are integral.
    pub fn integers(&self) -> Option<(u64, u64, u64, u64)> {
        let as_u64 = |x: &BigRational| -> Option<u64> { x.is_integer().then(|| x.numer().try_into().ok()).flatten() };
        Some((as_u64(&self.v)?, as_u64(&self.b)?, as_u64(&self.r)?, as_u64(&self.k)?))
    }

    pub fn verdict(&self) -> Option<AdmissibilityVerdict> {
        let (v, _, _, k) = self.integers()?;
        Some(admissible(k, v))
    }
}

/// Why `(M, N)` cannot be the size of a Steiner ETF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSteiner {
    pub alpha_sq: BigRational,
    /// Present when `alpha_sq` is a rational square, together with the
    /// candidate `v`, `r`, `k`.
    pub alpha: Option<BigRational>,
    pub candidates: Option<(BigRational, BigRational, BigRational)>,
}

impl fmt::Display for NotSteiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.candidates {
            None => write!(f, "NotSteiner: alpha^2={} is not a rational square", fmt_ratio(&self.alpha_sq)),
            Some((v, r, k)) => {
                let named = [("v", v), ("k", k), ("r", r)];
                let bad: Vec<String> =
                    named.iter().filter(|(_, x)| !x.is_integer()).map(|(n, x)| format!("{n}={}", fmt_ratio(x))).collect();
                let good: Vec<String> =
                    named.iter().filter(|(_, x)| x.is_integer()).map(|(n, x)| format!("{n}={}", fmt_ratio(x))).collect();
                write!(f, "NotSteiner: {}", bad.join(", "))?;
                if !good.is_empty() {
                    write!(f, " ({})", good.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recovery {
    Steiner(DesignParams),
    NotSteiner(NotSteiner),
}

impl fmt::Display for Recovery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recovery::Steiner(p) => write!(
                f,
                "Steiner: v={}, k={}, r={}, b={}, alpha={}",
                fmt_ratio(&p.v),
                fmt_ratio(&p.k),
                fmt_ratio(&p.r),
                fmt_ratio(&p.b),
                fmt_ratio(&p.alpha)
            ),
            Recovery::NotSteiner(ns) => ns.fmt(f),
        }
    }
}

/// Recovers `v = N alpha/(1 + alpha)`, `b = M`, `r = 1/alpha` and
/// `k = N/(M(1 + alpha))` from `alpha^2 = (N - M)/(M(N - 1))`, exactly.
pub fn recover_design_params(m: u64, n: u64) -> Result<Recovery, ParamError> {
    if m < 1 || n <= m {
        return Err(ParamError::InvalidDims { m, n });
    }
    let alpha_sq = ratio(n - m, m * (n - 1));
    let Some(alpha) = rational_sqrt(&alpha_sq) else {
        return Ok(Recovery::NotSteiner(NotSteiner { alpha_sq, alpha: None, candidates: None }));
    };
    let (mq, nq) = (ratio(m, 1), ratio(n, 1));
    let one = BigRational::one();
    let v = &nq * &alpha / (&one + &alpha);
    let r = &one / &alpha;
    let k = &nq / (&mq * (&one + &alpha));
    if v.is_integer() && r.is_integer() && k.is_integer() {
        Ok(Recovery::Steiner(DesignParams { v, b: mq, r, k, alpha_sq, alpha }))
    } else {
        Ok(Recovery::NotSteiner(NotSteiner { alpha_sq, alpha: Some(alpha), candidates: Some((v, r, k)) }))
    }
}

/// `(M - 1) v^2 + 2 (N - M) v - N (N - M)`, which vanishes at the recovered `v`.
pub fn quadratic_residual(m: u64, n: u64, v: &BigRational) -> BigRational {
    let (mq, nq) = (ratio(m, 1), ratio(n, 1));
    let one = BigRational::one();
    (&mq - &one) * v * v + ratio(2, 1) * (&nq - &mq) * v - &nq * (&nq - &mq)
}

/// A known infinite family of (2,k,v)-Steiner systems, with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    TwoBlocks { v: u64 },
    ThreeBlocks { v: u64 },
    FourBlocks { v: u64 },
    FiveBlocks { v: u64 },
    Affine { q: u64, n: u32 },
    Projective { q: u64, n: u32 },
    Unital { q: u64 },
    Denniston { r: u32, s: u32 },
    /// A single block holding every point.
    Trivial { v: u64 },
}

impl Family {
    /// `(k, v)` of the family member.
    pub fn design_params(&self) -> (u64, u64) {
        match *self {
            Family::TwoBlocks { v } => (2, v),
            Family::ThreeBlocks { v } => (3, v),
            Family::FourBlocks { v } => (4, v),
            Family::FiveBlocks { v } => (5, v),
            Family::Affine { q, n } => (q, q.pow(n)),
            Family::Projective { q, n } => (q + 1, (q.pow(n + 1) - 1) / (q - 1)),
            Family::Unital { q } => (q + 1, q.pow(3) + 1),
            Family::Denniston { r, s } => (1 << r, (1u64 << (r + s)) + (1 << r) - (1 << s)),
            Family::Trivial { v } => (v, v),
        }
    }

    /// Builds the design when a generator is available.
    pub fn build(&self) -> Option<Result<SteinerSystem, DesignError>> {
        let usize_of = |v: u64| usize::try_from(v).map_err(|_| DesignError::TooLarge { v, max: crate::designs::MAX_POINTS });
        Some(match *self {
            Family::TwoBlocks { v } => usize_of(v).and_then(pair_design),
            Family::ThreeBlocks { v } => usize_of(v).and_then(steiner_triple),
            Family::Affine { q, n } => affine_lines(q, n),
            Family::Projective { q, n } => projective_lines(q, n),
            Family::Unital { q } => hermitian_unital(q),
            Family::Trivial { v } => usize_of(v).and_then(|v| SteinerSystem::from_blocks(v, v, vec![(0..v).collect()])),
            Family::FourBlocks { .. } | Family::FiveBlocks { .. } | Family::Denniston { .. } => return None,
        })
    }

    pub fn is_generated(&self) -> bool {
        !matches!(self, Family::FourBlocks { .. } | Family::FiveBlocks { .. } | Family::Denniston { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::TwoBlocks { v } => write!(f, "2-blocks of v={v}"),
            Family::ThreeBlocks { v } => write!(f, "3-blocks of v={v}"),
            Family::FourBlocks { v } => write!(f, "4-blocks of v={v}"),
            Family::FiveBlocks { v } => write!(f, "5-blocks of v={v}"),
            Family::Affine { q, n } => write!(f, "Affine with q={q}, n={n}"),
            Family::Projective { q, n } => write!(f, "Projective with q={q}, n={n}"),
            Family::Unital { q } => write!(f, "Unital with q={q}"),
            Family::Denniston { r, s } => write!(f, "Denniston with r={r}, s={s}"),
            Family::Trivial { v } => write!(f, "single block of v={v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AdmissibilityVerdict {
    Inadmissible { reason: String },
    #[serde(rename = "admissible-known-exists")]
    KnownExists { witnesses: Vec<Family> },
    #[serde(rename = "admissible-known-nonexistent")]
    KnownNonexistent,
    #[serde(rename = "admissible-unknown")]
    Unknown,
}

impl fmt::Display for AdmissibilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityVerdict::Inadmissible { reason } => write!(f, "inadmissible: {reason}"),
            AdmissibilityVerdict::KnownExists { witnesses } => {
                let labels: Vec<String> = witnesses.iter().map(Family::to_string).collect();
                write!(f, "admissible-known-exists ({})", labels.join("; "))
            }
            AdmissibilityVerdict::KnownNonexistent => write!(f, "admissible-known-nonexistent"),
            AdmissibilityVerdict::Unknown => write!(f, "admissible-unknown"),
        }
    }
}

fn prime_power(q: u64) -> bool {
    q >= 2 && PrimePower::from_order(q).is_some()
}

/// Exponent `n` with `base^n = x`, if any.
fn exact_log(base: u64, x: u64) -> Option<u32> {
    let (mut acc, mut n) = (1u64, 0u32);
    while acc < x {
        acc = acc.checked_mul(base)?;
        n += 1;
    }
    (acc == x).then_some(n)
}

/// Families with a member of parameters `(k, v)`, `k < v`.
fn witnesses(k: u64, v: u64) -> Vec<Family> {
    let mut out = Vec::new();
    match k {
        2 => out.push(Family::TwoBlocks { v }),
        3 if matches!(v % 6, 1 | 3) => out.push(Family::ThreeBlocks { v }),
        4 if matches!(v % 12, 1 | 4) => out.push(Family::FourBlocks { v }),
        5 if matches!(v % 20, 1 | 5) => out.push(Family::FiveBlocks { v }),
        _ => {}
    }
    if prime_power(k) {
        if let Some(n) = exact_log(k, v).filter(|&n| n >= 2) {
            out.push(Family::Affine { q: k, n });
        }
    }
    let q = k - 1;
    if prime_power(q) {
        // v = 1 + q + ... + q^n
        let (mut sum, mut pow, mut n) = (1u64 + q, q, 1u32);
        while sum < v {
            match pow.checked_mul(q).and_then(|p| sum.checked_add(p).map(|s| (p, s))) {
                Some((p, s)) => (pow, sum) = (p, s),
                None => break,
            }
            n += 1;
        }
        if sum == v && n >= 2 {
            out.push(Family::Projective { q, n });
        }
        if q.checked_pow(3).map(|c| c + 1) == Some(v) {
            out.push(Family::Unital { q });
        }
    }
    if let Some(r) = exact_log(2, k).filter(|&r| r >= 2) {
        for s in r + 1..62 - r {
            let dv = (1u64 << (r + s)) + (1 << r) - (1 << s);
            if dv == v {
                out.push(Family::Denniston { r, s });
            }
            if dv > v {
                break;
            }
        }
    }
    out
}

/// Divisibility test for `(k, v)`, then what is known about existence.
pub fn admissible(k: u64, v: u64) -> AdmissibilityVerdict {
    if k < 2 || k > v {
        return AdmissibilityVerdict::Inadmissible { reason: format!("2 <= k <= v required, got k={k}, v={v}") };
    }
    if k == v {
        return AdmissibilityVerdict::KnownExists { witnesses: vec![Family::Trivial { v }] };
    }
    if !(v - 1).is_multiple_of(k - 1) {
        return AdmissibilityVerdict::Inadmissible { reason: format!("r=(v-1)/(k-1)={}/{} is not an integer", v - 1, k - 1) };
    }
    let (num, den) = (v as u128 * (v as u128 - 1), k as u128 * (k as u128 - 1));
    if num % den != 0 {
        return AdmissibilityVerdict::Inadmissible { reason: format!("b=v(v-1)/(k(k-1))={num}/{den} is not an integer") };
    }
    let found = witnesses(k, v);
    if !found.is_empty() {
        AdmissibilityVerdict::KnownExists { witnesses: found }
    } else if KNOWN_NONEXISTENT.contains(&(k, v)) {
        AdmissibilityVerdict::KnownNonexistent
    } else {
        AdmissibilityVerdict::Unknown
    }
}

/// One `(M, N)` of the family table, with every construction producing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: u64,
    pub v: u64,
    pub r: u64,
    /// Order of the flat matrices; the frame is real when a real Hadamard
    /// matrix of this order is constructible.
    pub hadamard_order: u64,
    pub realness: Realness,
    pub constructions: Vec<Family>,
}

impl FamilyRow {
    fn new(k: u64, v: u64, constructions: Vec<Family>) -> Self {
        let r = (v - 1) / (k - 1);
        let m = v * (v - 1) / (k * (k - 1));
        let real = usize::try_from(r + 1).ok().and_then(real_hadamard_kind).is_some();
        FamilyRow {
            m,
            n: v * (r + 1),
            k,
            v,
            r,
            hadamard_order: r + 1,
            realness: if real { Realness::Real } else { Realness::Complex },
            constructions,
        }
    }

    pub fn labels(&self) -> String {
        self.constructions.iter().map(Family::to_string).collect::<Vec<_>>().join("; ")
    }

    /// `N/M > 2`, `N <= M^2`, and `N <= M(M+1)/2` for real rows.
    pub fn redundancy_bounds_hold(&self) -> bool {
        let (m, n) = (self.m as u128, self.n as u128);
        n > 2 * m && n <= m * m && (self.realness == Realness::Complex || 2 * n <= m * (m + 1))
    }
}

fn block_count(k: u64, v: u64) -> Option<u64> {
    let b = (v as u128).checked_mul(v as u128 - 1)? / (k as u128 * (k as u128 - 1));
    u64::try_from(b).ok()
}

/// All family members with `1 < M <= max_m`.
fn family_members(max_m: u64) -> Vec<Family> {
    let mut out = Vec::new();
    let fits = |k: u64, v: u64| v > k && block_count(k, v).is_some_and(|m| m <= max_m);
    let too_big = |k: u64, v: u64| block_count(k, v).is_none_or(|m| m > max_m);

    for (k, residues, modulus) in [(2u64, &[0u64, 1][..], 1u64), (3, &[1, 3], 6), (4, &[1, 4], 12), (5, &[1, 5], 20)] {
        let mut v = k + 1;
        while !too_big(k, v) {
            if residues.contains(&(v % modulus)) && fits(k, v) {
                out.push(match k {
                    2 => Family::TwoBlocks { v },
                    3 => Family::ThreeBlocks { v },
                    4 => Family::FourBlocks { v },
                    _ => Family::FiveBlocks { v },
                });
            }
            v += 1;
        }
    }

    let mut q = 2u64;
    while !too_big(q, q * q) {
        if prime_power(q) {
            let mut n = 2;
            while q.checked_pow(n).filter(|&v| !too_big(q, v)).is_some() {
                out.push(Family::Affine { q, n });
                n += 1;
            }
        }
        q += 1;
    }

    let mut q = 2u64;
    while !too_big(q + 1, q * q + q + 1) {
        if prime_power(q) {
            let mut n = 2;
            while q.checked_pow(n + 1).map(|p| (p - 1) / (q - 1)).filter(|&v| !too_big(q + 1, v)).is_some() {
                out.push(Family::Projective { q, n });
                n += 1;
            }
        }
        q += 1;
    }

    let mut q = 2u64;
    while !too_big(q + 1, q * q * q + 1) {
        if prime_power(q) {
            out.push(Family::Unital { q });
        }
        q += 1;
    }

    let mut r = 2u32;
    while r < 30 && !too_big(1 << r, Family::Denniston { r, s: r + 1 }.design_params().1) {
        let mut s = r + 1;
        while r + s < 62 {
            let (k, v) = Family::Denniston { r, s }.design_params();
            if too_big(k, v) {
                break;
            }
            out.push(Family::Denniston { r, s });
            s += 1;
        }
        r += 1;
    }
    out
}

/// Rows of Steiner ETFs with `M <= max_m` from the eight families, merged by
/// `(M, N)`, real rows first, each group ordered by `(M, N)`. Single-block
/// designs (`M = 1`) are left out.
pub fn enumerate_families(max_m: u64) -> Vec<FamilyRow> {
    let mut by_params: std::collections::BTreeMap<(u64, u64), Vec<Family>> = Default::default();
    for fam in family_members(max_m) {
        let (k, v) = fam.design_params();
        by_params.entry((k, v)).or_default().push(fam);
    }
    let mut rows: Vec<FamilyRow> = by_params.into_iter().map(|((k, v), fams)| FamilyRow::new(k, v, fams)).collect();
    rows.sort_by_key(|row| (row.realness != Realness::Real, row.m, row.n));
    rows
}

fn realness_label(r: Realness) -> &'static str {
    match r {
        Realness::Real => "real",
        Realness::Complex => "complex",
    }
}

/// Aligned plain-text table.
pub fn format_table_text(rows: &[FamilyRow]) -> String {
    let header = ["M", "N", "k", "v", "r", "realness"];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [r.m.to_string(), r.n.to_string(), r.k.to_string(), r.v.to_string(), r.r.to_string(), realness_label(r.realness).into()]
        })
        .collect();
    let widths: Vec<usize> =
        (0..6).map(|c| cells.iter().map(|row| row[c].len()).chain([header[c].len()]).max().unwrap_or(0)).collect();
    let mut out = String::new();
    let line = |fields: &[&str], last: &str| {
        let mut s: String = fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}  ")).collect();
        s.push_str(last);
        s.trim_end().to_string() + "\n"
    };
    out.push_str(&line(&header, "constructions"));
    for (row, c) in rows.iter().zip(&cells) {
        let fields: Vec<&str> = c.iter().map(String::as_str).collect();
        out.push_str(&line(&fields, &row.labels()));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with columns `M,N,k,v,r,realness,constructions`.
pub fn format_table_csv(rows: &[FamilyRow]) -> String {
    let mut out = String::from("M,N,k,v,r,realness,constructions\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m,
            r.n,
            r.k,
            r.v,
            r.r,
            realness_label(r.realness),
            csv_field(&r.labels())
        ));
    }
    out
}

/// One member of the series `v = jk(k-1) + 1` or `v = jk(k-1) + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesRecord {
    pub v: u64,
    pub m: u64,
    pub n: u64,
    pub redundancy: Ratio<u64>,
    pub hadamard_order: u64,
}

/// The two admissible `v` built from `k` and `j`, whose redundancies
/// approach `k` as `j` grows.
pub fn asymptotic_series(k: u64, j: u64) -> Result<[SeriesRecord; 2], ParamError> {
    if k < 2 || j < 1 {
        return Err(ParamError::InvalidK { k, j });
    }
    let t = j * k * (k - 1);
    let v1 = t + 1;
    let first = SeriesRecord {
        v: v1,
        m: j * v1,
        n: (j * k + 1) * v1,
        redundancy: Ratio::new(j * k + 1, j),
        hadamard_order: j * k + 1,
    };
    let second = SeriesRecord {
        v: t + k,
        m: (j * k + 1) * (j * (k - 1) + 1),
        n: k * (j * k + 2) * (j * (k - 1) + 1),
        redundancy: Ratio::new(k * (j * k + 2), j * k + 1),
        hadamard_order: j * k + 2,
    };
    Ok([first, second])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&ratio(1, 9)), Some(ratio(1, 3)));
        assert_eq!(rational_sqrt(&ratio(4, 1)), Some(ratio(2, 1)));
        assert_eq!(rational_sqrt(&ratio(2, 9)), None);
        assert_eq!(rational_sqrt(&BigRational::zero()), Some(BigRational::zero()));
    }

    #[test]
    fn invalid_dims() {
        assert_eq!(recover_design_params(0, 5), Err(ParamError::InvalidDims { m: 0, n: 5 }));
        assert_eq!(recover_design_params(5, 5), Err(ParamError::InvalidDims { m: 5, n: 5 }));
    }

    #[test]
    fn not_steiner_display() {
        let rec = recover_design_params(19, 76).unwrap();
        assert_eq!(rec.to_string(), "NotSteiner: v=38/3, k=10/3 (r=5)");
        let irr = recover_design_params(28, 288).unwrap();
        assert_eq!(irr.to_string(), "NotSteiner: alpha^2=65/2009 is not a rational square");
    }

    #[test]
    fn witnesses_for_small_cases() {
        assert_eq!(witnesses(3, 9), vec![Family::ThreeBlocks { v: 9 }, Family::Affine { q: 3, n: 2 }, Family::Unital { q: 2 }]);
        assert_eq!(witnesses(4, 28), vec![Family::FourBlocks { v: 28 }, Family::Unital { q: 3 }, Family::Denniston { r: 2, s: 3 }]);
        assert_eq!(witnesses(3, 15), vec![Family::ThreeBlocks { v: 15 }, Family::Projective { q: 2, n: 3 }]);
        assert!(witnesses(6, 36).is_empty());
    }

    #[test]
    fn verdict_display() {
        assert_eq!(admissible(3, 8).to_string(), "inadmissible: r=(v-1)/(k-1)=7/2 is not an integer");
        assert_eq!(admissible(2, 5).to_string(), "admissible-known-exists (2-blocks of v=5)");
        assert_eq!(admissible(7, 43).to_string(), "admissible-known-nonexistent");
        assert_eq!(admissible(1, 5), AdmissibilityVerdict::Inadmissible { reason: "2 <= k <= v required, got k=1, v=5".into() });
    }

    #[test]
    fn family_closed_forms() {
        // Table of M and N in terms of each family's own parameter.
        for v in [4u64, 7, 12] {
            let row = FamilyRow::new(2, v, vec![]);
            assert_eq!((row.m, row.n), (v * (v - 1) / 2, v * v));
        }
        let row = FamilyRow::new(3, 13, vec![]);
        assert_eq!((row.m, row.n), (13 * 12 / 6, 13 * 14 / 2));
        let (q, n) = (3u64, 3u32);
        let (k, v) = Family::Affine { q, n }.design_params();
        let row = FamilyRow::new(k, v, vec![]);
        let qn = q.pow(n);
        assert_eq!((row.m, row.n), (q.pow(n - 1) * (qn - 1) / (q - 1), qn * (1 + (qn - 1) / (q - 1))));
        let (k, v) = Family::Denniston { r: 2, s: 4 }.design_params();
        let row = FamilyRow::new(k, v, vec![]);
        let dv = 64 + 4 - 16;
        assert_eq!((row.m, row.n), (17 * dv / 4, 18 * dv));
    }

    #[test]
    fn csv_quotes_labels_with_commas() {
        let csv = format_table_csv(&enumerate_families(6));
        assert_eq!(csv, "M,N,k,v,r,realness,constructions\n6,16,2,4,3,real,\"2-blocks of v=4; Affine with q=2, n=2\"\n3,9,2,3,2,complex,2-blocks of v=3\n");
    }

    #[test]
    fn text_table_is_aligned() {
        let text = format_table_text(&enumerate_families(7));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("M   N  k  v  r  realness  constructions"));
        assert!(lines[1].starts_with("6  16  2  4  3      real  2-blocks of v=4"));
    }
}
