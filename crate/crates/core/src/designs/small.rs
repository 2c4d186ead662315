use super::{check_size, SteinerSystem};
use crate::error::DesignError;

/// All 2-subsets of `0..v`, the (2,2,v)-Steiner system.
pub fn pair_design(v: usize) -> Result<SteinerSystem, DesignError> {
    if v < 2 {
        return Err(DesignError::InvalidV(v));
    }
    check_size(v as u64)?;
    let blocks = (0..v).flat_map(|a| (a + 1..v).map(move |b| vec![a, b])).collect();
    SteinerSystem::from_blocks(v, 2, blocks)
}

/// A Steiner triple system on `v` points.
///
/// `v = 6t + 3` uses the Bose construction over `Z_{2t+1} x Z_3`; `v = 6t + 1`
/// uses the Skolem construction over a half-idempotent commutative quasigroup
/// of order `2t` plus a point at infinity. Point `(x, i)` gets label `3x + i`;
/// the point at infinity is `v - 1`.
pub fn steiner_triple(v: usize) -> Result<SteinerSystem, DesignError> {
    if v < 3 {
        return Err(DesignError::InvalidV(v));
    }
    check_size(v as u64)?;
    match v % 6 {
        3 => bose(v),
        1 => skolem(v),
        _ => Err(DesignError::InadmissibleV { v, reason: "v ≡ 1,3 mod 6 required".into() }),
    }
}

fn bose(v: usize) -> Result<SteinerSystem, DesignError> {
    let n = v / 3; // 2t + 1
    let half = n.div_ceil(2); // inverse of 2 mod n
    let op = |x: usize, y: usize| (x + y) * half % n;
    let label = |x: usize, i: usize| 3 * x + i % 3;

    let mut blocks = Vec::with_capacity(v * (v - 1) / 6);
    for x in 0..n {
        blocks.push(vec![label(x, 0), label(x, 1), label(x, 2)]);
    }
    for x in 0..n {
        for y in x + 1..n {
            for i in 0..3 {
                blocks.push(vec![label(x, i), label(y, i), label(op(x, y), i + 1)]);
            }
        }
    }
    SteinerSystem::from_blocks(v, 3, blocks)
}

fn skolem(v: usize) -> Result<SteinerSystem, DesignError> {
    let t = (v - 1) / 6;
    let order = 2 * t;
    // Addition table of Z_{2t} with symbol 2i renamed i and 2i+1 renamed t+i,
    // which puts 0..t, 0..t on the diagonal.
    let op = |x: usize, y: usize| {
        let s = (x + y) % order;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            t + s / 2
        }
    };
    let label = |x: usize, i: usize| 3 * x + i % 3;
    let infinity = v - 1;

    let mut blocks = Vec::with_capacity(v * (v - 1) / 6);
    for x in 0..t {
        blocks.push(vec![label(x, 0), label(x, 1), label(x, 2)]);
        for i in 0..3 {
            blocks.push(vec![infinity, label(x + t, i), label(x, i + 1)]);
        }
    }
    for x in 0..order {
        for y in x + 1..order {
            for i in 0..3 {
                blocks.push(vec![label(x, i), label(y, i), label(op(x, y), i + 1)]);
            }
        }
    }
    SteinerSystem::from_blocks(v, 3, blocks)
}
