//! Square matrices with unimodular entries and orthogonal rows.
//!
//! Entries are kept as exact roots of unity ([`Phase`]), so real Hadamard
//! matrices stay integral and complex products can be tracked without
//! rounding. Row 0 and column 0 of every constructor here are all ones.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::FlatError;
use crate::field::{Field, PrimePower};

/// Largest order any constructor will build.
pub const MAX_ORDER: u64 = 4096;

/// The root of unity `exp(2 pi i num / den)`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Phase {
    num: u32,
    den: u32,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };
    pub const MINUS_ONE: Phase = Phase { num: 1, den: 2 };

    /// `exp(2 pi i k / n)`.
    pub fn new(k: i64, n: u32) -> Self {
        assert!(n > 0, "root-of-unity order must be positive");
        let num = k.rem_euclid(n as i64) as u64;
        let g = num.gcd(&(n as u64));
        Phase { num: (num / g) as u32, den: (n as u64 / g) as u32 }
    }

    pub fn from_sign(negative: bool) -> Self {
        if negative {
            Self::MINUS_ONE
        } else {
            Self::ONE
        }
    }

    pub fn numerator(self) -> u32 {
        self.num
    }

    /// Multiplicative order of the root.
    pub fn order(self) -> u32 {
        self.den
    }


    pub fn conj(self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }

    pub fn is_real(self) -> bool {
        self.den <= 2
    }

    /// `Some(+1)` or `Some(-1)` for real phases.
    pub fn sign(self) -> Option<i64> {
        match self.den {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.sign() {
            Some(s) => Complex64::new(s as f64, 0.0),
            None => {
                let theta = std::f64::consts::TAU * self.num as f64 / self.den as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        let l = (self.den as u64).lcm(&(other.den as u64));
        let num = self.num as u64 * (l / self.den as u64) + other.num as u64 * (l / other.den as u64);
        Phase::new((num % l) as i64, l as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realness {
    Real,
    Complex,
}

/// How a flat matrix was built; also its textual descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FlatKind {
    Sylvester(u32),
    Paley(u64),
    Dft(usize),
    Kronecker(Box<FlatKind>, Box<FlatKind>),
}

impl FlatKind {
    pub fn order(&self) -> usize {
        match self {
            FlatKind::Sylvester(t) => 1 << t,
            FlatKind::Paley(q) => *q as usize + 1,
            FlatKind::Dft(n) => *n,
            FlatKind::Kronecker(a, b) => a.order() * b.order(),
        }
    }

    pub fn build(&self) -> Result<FlatMatrix, FlatError> {
        match self {
            FlatKind::Sylvester(t) => sylvester(*t),
            FlatKind::Paley(q) => paley_hadamard(*q),
            FlatKind::Dft(n) => dft_matrix(*n),
            FlatKind::Kronecker(a, b) => Ok(kronecker(&a.build()?, &b.build()?)),
        }
    }
}

impl fmt::Display for FlatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatKind::Sylvester(t) => write!(f, "sylvester:{t}"),
            FlatKind::Paley(q) => write!(f, "paley:{q}"),
            FlatKind::Dft(n) => write!(f, "dft:{n}"),
            FlatKind::Kronecker(a, b) => write!(f, "kron({a},{b})"),
        }
    }
}

impl FromStr for FlatKind {
    type Err = FlatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FlatError::BadDescriptor(s.to_string());
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("kron(").and_then(|r| r.strip_suffix(')')) {
            // Split at the top-level comma.
            let mut depth = 0;
            let split = inner.char_indices().find(|&(_, c)| {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => return true,
                    _ => {}
                }
                false
            });
            let (i, _) = split.ok_or_else(bad)?;
            let a = inner[..i].parse()?;
            let b = inner[i + 1..].parse()?;
            return Ok(FlatKind::Kronecker(Box::new(a), Box::new(b)));
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        match name {
            "sylvester" => arg.parse().map(FlatKind::Sylvester).map_err(|_| bad()),
            "paley" => arg.parse().map(FlatKind::Paley).map_err(|_| bad()),
            "dft" => arg.parse().map(FlatKind::Dft).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// An `n x n` matrix with root-of-unity entries and orthogonal rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatMatrix {
    n: usize,
    kind: FlatKind,
    entries: Vec<Phase>,
}

impl FlatMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &FlatKind {
        &self.kind
    }

    pub fn phase(&self, row: usize, col: usize) -> Phase {
        self.entries[row * self.n + col]
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.phase(row, col).to_complex()
    }

    pub fn realness(&self) -> Realness {
        if self.entries.iter().all(|p| p.is_real()) {
            Realness::Real
        } else {
            Realness::Complex
        }
    }

    pub fn is_real(&self) -> bool {
        self.realness() == Realness::Real
    }

    /// Checks unimodularity and `H H* = n I`: exactly for ±1 matrices,
    /// otherwise entrywise within `1e-9 n`.
    pub fn verify(&self) -> FlatCheck {
        let n = self.n;
        let unimodular_dev =
            self.entries.iter().map(|p| (p.to_complex().norm() - 1.0).abs()).fold(0.0, f64::max);
        if self.is_real() {
            let mut exact = true;
            for i in 0..n {
                for j in 0..n {
                    let dot: i64 =
                        (0..n).map(|c| self.phase(i, c).sign().unwrap() * self.phase(j, c).sign().unwrap()).sum();
                    let want = if i == j { n as i64 } else { 0 };
                    exact &= dot == want;
                }
            }
            return FlatCheck {
                unimodular: unimodular_dev <= 1e-12,
                orthogonal: exact,
                max_deviation: if exact { 0.0 } else { f64::INFINITY },
            };
        }
        let mut max_dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = (0..n).map(|c| self.entry(i, c) * self.entry(j, c).conj()).sum();
                let want = if i == j { n as f64 } else { 0.0 };
                max_dev = max_dev.max((dot - want).norm());
            }
        }
        FlatCheck { unimodular: unimodular_dev <= 1e-12, orthogonal: max_dev <= 1e-9 * n as f64, max_deviation: max_dev }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatCheck {
    pub unimodular: bool,
    pub orthogonal: bool,
    pub max_deviation: f64,
}

impl FlatCheck {
    pub fn passed(&self) -> bool {
        self.unimodular && self.orthogonal
    }
}

fn check_order(order: u64) -> Result<(), FlatError> {
    if order > MAX_ORDER {
        Err(FlatError::TooLarge { order, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Sylvester Hadamard matrix of order `2^t`: `H_{2m} = [[H, H], [H, -H]]`.
pub fn sylvester(t: u32) -> Result<FlatMatrix, FlatError> {
    if t >= 63 {
        return Err(FlatError::TooLarge { order: u64::MAX, max: MAX_ORDER });
    }
    let n = 1u64 << t;
    check_order(n)?;
    let n = n as usize;
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |j| Phase::from_sign((i & j).count_ones() % 2 == 1)))
        .collect();
    Ok(FlatMatrix { n, kind: FlatKind::Sylvester(t), entries })
}

/// Paley type I Hadamard matrix of order `q + 1` for a prime power
/// `q ≡ 3 (mod 4)`: `I + [[0, 1^T], [-1, Q]]` with `Q` the Jacobsthal matrix.
pub fn paley_hadamard(q: u64) -> Result<FlatMatrix, FlatError> {
    if q % 4 != 3 || PrimePower::from_order(q).is_none() {
        return Err(FlatError::InadmissibleQ(q));
    }
    check_order(q + 1)?;
    let field = Field::of_order(q).map_err(|_| FlatError::InadmissibleQ(q))?;
    let n = q as usize + 1;
    let mut entries = vec![Phase::ONE; n * n];
    for i in 1..n {
        entries[i * n] = Phase::MINUS_ONE;
        for j in 1..n {
            let (a, b) = ((i - 1) as u32, (j - 1) as u32);
            let chi = field.quadratic_character(field.sub(a, b));
            let value = if i == j { 1 } else { chi };
            entries[i * n + j] = Phase::from_sign(value < 0);
        }
    }
    Ok(FlatMatrix { n, kind: FlatKind::Paley(q), entries })
}

/// The `n x n` Fourier matrix with entries `exp(-2 pi i jk / n)`.
pub fn dft_matrix(n: usize) -> Result<FlatMatrix, FlatError> {
    if n == 0 {
        return Err(FlatError::ZeroOrder);
    }
    check_order(n as u64)?;
    let entries =
        (0..n).flat_map(|j| (0..n).map(move |k| Phase::new(-((j * k % n) as i64), n as u32))).collect();
    Ok(FlatMatrix { n, kind: FlatKind::Dft(n), entries })
}

pub fn kronecker(a: &FlatMatrix, b: &FlatMatrix) -> FlatMatrix {
    let n = a.n * b.n;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(a.phase(i / b.n, j / b.n) * b.phase(i % b.n, j % b.n));
        }
    }
    FlatMatrix { n, kind: FlatKind::Kronecker(Box::new(a.kind.clone()), Box::new(b.kind.clone())), entries }
}

/// Recipe for a real Hadamard matrix of order `n` from the Sylvester, Paley I
/// and Kronecker-product constructions, if one applies.
pub fn real_hadamard_kind(n: usize) -> Option<FlatKind> {
    if n == 0 {
        return None;
    }
    if n.is_power_of_two() {
        return Some(FlatKind::Sylvester(n.trailing_zeros()));
    }
    let q = n as u64 - 1;
    if q % 4 == 3 && PrimePower::from_order(q).is_some() {
        return Some(FlatKind::Paley(q));
    }
    (2..n)
        .take_while(|d| d * d <= n)
        .filter(|d| n.is_multiple_of(*d))
        .find_map(|d| Some(FlatKind::Kronecker(Box::new(real_hadamard_kind(d)?), Box::new(real_hadamard_kind(n / d)?))))
}

/// A flat matrix of order `n`: a real Hadamard matrix when `prefer_real` and
/// one of the supported constructions applies, otherwise the Fourier matrix.
pub fn best_flat(n: usize, prefer_real: bool) -> Result<FlatMatrix, FlatError> {
    if prefer_real {
        if let Some(kind) = real_hadamard_kind(n) {
            return kind.build();
        }
    }
    dft_matrix(n)
}
