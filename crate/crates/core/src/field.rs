//! Arithmetic in GF(p^m).
//!
//! Elements are passed around as integer indices in `[0, q)`: the index of
//! `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` is `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
//! The defining modulus is the lexicographically smallest monic irreducible
//! polynomial of degree `m`, comparing coefficients from the constant term up.

use crate::error::FieldError;

/// Default cap on the field order.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

const MAX_DEGREE: usize = 20;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime power `q = p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u32,
    pub m: u32,
    pub q: u32,
}

impl PrimePower {
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(FieldError::TooLarge { order: u64::MAX, max: DEFAULT_MAX_ORDER })?;
        Ok(Self { p, m, q: q as u32 })
    }

    /// Factor `q` as a prime power, if it is one.
    pub fn from_order(q: u64) -> Option<Self> {
        if q < 2 {
            return None;
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
        let mut rest = q;
        let mut m = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 || q > u32::MAX as u64 {
            return None;
        }
        Some(Self { p: p as u32, m, q: q as u32 })
    }
}

/// Binary field operation selector for [`Field::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The finite field GF(p^m). Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pp: PrimePower,
    /// Monic modulus, coefficients low degree first; length `m + 1`.
    modulus: Vec<u32>,
}

type Coeffs = [u32; MAX_DEGREE];

impl Field {
    /// Builds GF(p^m) with the default order bound.
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        Self::with_bound(p, m, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u32, m: u32, max_order: u64) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > max_order || m as usize > MAX_DEGREE {
            return Err(FieldError::TooLarge { order, max: max_order });
        }
        let pp = PrimePower { p, m, q: order as u32 };
        let modulus = smallest_irreducible(p, m as usize);
        Ok(Self { pp, modulus })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let pp = PrimePower::from_order(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(pp.p, pp.m)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn order(&self) -> u32 {
        self.pp.q
    }

    pub fn characteristic(&self) -> u32 {
        self.pp.p
    }

    pub fn degree(&self) -> u32 {
        self.pp.m
    }

    /// Modulus coefficients, constant term first (monic, length `m + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// Iterator over every element index.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.pp.q
    }

    /// Polynomial coefficients of an element, constant term first.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        self.decode(a)[..self.pp.m as usize].to_vec()
    }

    /// Inverse of [`Field::coeffs`]. Coefficients are reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        if coeffs.len() > self.pp.m as usize {
            return Err(FieldError::FieldMismatch);
        }
        let mut c = [0u32; MAX_DEGREE];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.pp.p;
        }
        Ok(self.encode(&c))
    }

    fn decode(&self, mut a: u32) -> Coeffs {
        let mut c = [0u32; MAX_DEGREE];
        let p = self.pp.p;
        for slot in c.iter_mut().take(self.pp.m as usize) {
            *slot = a % p;
            a /= p;
        }
        c
    }

    fn encode(&self, c: &Coeffs) -> u32 {
        let p = self.pp.p;
        c[..self.pp.m as usize].iter().rev().fold(0, |acc, &x| acc * p + x)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.pp.m == 1 {
            return ((a as u64 + b as u64) % self.pp.p as u64) as u32;
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let mut z = [0u32; MAX_DEGREE];
        for i in 0..self.pp.m as usize {
            z[i] = (x[i] + y[i]) % self.pp.p;
        }
        self.encode(&z)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.pp.p;
        let x = self.decode(a);
        let mut z = [0u32; MAX_DEGREE];
        for i in 0..self.pp.m as usize {
            z[i] = (p - x[i]) % p;
        }
        self.encode(&z)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.pp.p as u64;
        if self.pp.m == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let m = self.pp.m as usize;
        let (x, y) = (self.decode(a), self.decode(b));
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
            }
        }
        // Reduce by the monic modulus from the top degree down.
        for d in (m..2 * m - 1).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                let t = lead * self.modulus[i] as u64 % p;
                prod[d - m + i] = (prod[d - m + i] + p - t) % p;
            }
        }
        let mut z = [0u32; MAX_DEGREE];
        for i in 0..m {
            z[i] = prod[i] as u32;
        }
        self.encode(&z)
    }

    /// `a^e` by square-and-multiply; `a^0 = 1` for every `a`.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(q-2)`.
    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.pp.q as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked binary operation; indices outside `[0, q)` are rejected.
    pub fn arith(&self, a: u32, b: u32, op: FieldOp) -> Result<u32, FieldError> {
        if a >= self.pp.q || b >= self.pp.q {
            return Err(FieldError::FieldMismatch);
        }
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        if a == 0 || a >= self.pp.q {
            return None;
        }
        let mut x = a;
        let mut ord = 1;
        while x != 1 {
            x = self.mul(x, a);
            ord += 1;
        }
        Some(ord)
    }

    /// Smallest-index element of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> u32 {
        let target = self.pp.q as u64 - 1;
        (1..self.pp.q)
            .find(|&a| self.multiplicative_order(a) == Some(target))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, a: u32) -> i32 {
        if a == 0 {
            return 0;
        }
        if self.pp.p == 2 {
            return 1;
        }
        if self.pow(a, (self.pp.q as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

/// Polynomial over Z_p, coefficients low degree first, trailing zeros trimmed.
fn poly_rem(mut num: Vec<u32>, den: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let dd = den.len() - 1;
    let lead_inv = mod_pow(den[dd] as u64, p64 - 2, p64);
    while num.len() > dd {
        let top = *num.last().unwrap() as u64;
        if top != 0 {
            let factor = top * lead_inv % p64;
            let shift = num.len() - 1 - dd;
            for (i, &c) in den.iter().enumerate() {
                let t = factor * c as u64 % p64;
                num[shift + i] = ((num[shift + i] as u64 + p64 - t) % p64) as u32;
            }
        }
        num.pop();
    }
    while num.last() == Some(&0) {
        num.pop();
    }
    num
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Monic polynomials of degree `d`, in lexicographic order of
/// `(c_0, c_1, ..., c_{d-1})` with `c_0` most significant.
fn monic_polys(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut c = vec![0u32; d + 1];
        for slot in c[..d].iter_mut().rev() {
            *slot = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        c[d] = 1;
        c
    })
}

/// Brute-force irreducibility: no monic divisor of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|div| !poly_rem(poly.to_vec(), &div, p).is_empty()))
}

fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    monic_polys(p, m)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
