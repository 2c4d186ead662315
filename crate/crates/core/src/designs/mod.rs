//! (2,k,v)-Steiner systems: generators, verification, and the transposed
//! incidence matrix.
//!
//! Blocks are stored as sorted point tuples and the block list is kept in
//! lexicographic order, so two systems with the same block set compare equal
//! and serialize identically. The block order fixes the row order of every
//! frame assembled from the system.

mod geometry;
mod small;

pub use geometry::{affine_lines, hermitian_line_meetings, hermitian_unital, projective_lines};
pub use small::{pair_design, steiner_triple};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::DesignError;

/// Upper bound on the number of points any generator will produce.
pub const MAX_POINTS: u64 = 4096;

pub(crate) fn check_size(v: u64) -> Result<(), DesignError> {
    if v > MAX_POINTS {
        Err(DesignError::TooLarge { v, max: MAX_POINTS })
    } else {
        Ok(())
    }
}

/// A block design on points `0..v` with blocks of nominal size `k`.
///
/// Construction only canonicalizes the block list; whether it really is a
/// Steiner system is decided by [`verify_design`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct SteinerSystem {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawSystem {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<RawSystem> for SteinerSystem {
    type Error = DesignError;

    fn try_from(raw: RawSystem) -> Result<Self, Self::Error> {
        SteinerSystem::from_blocks(raw.v, raw.k, raw.blocks)
    }
}

impl SteinerSystem {
    pub fn from_blocks(v: usize, k: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        if v == 0 {
            return Err(DesignError::InvalidV(v));
        }
        if k == 0 || k > v {
            return Err(DesignError::InvalidDesign(format!("block size {k} for {v} points")));
        }
        for block in &mut blocks {
            if let Some(&bad) = block.iter().find(|&&p| p >= v) {
                return Err(DesignError::InvalidDesign(format!("point {bad} out of range 0..{v}")));
            }
            block.sort_unstable();
        }
        blocks.sort();
        Ok(Self { v, k, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks actually present.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    /// `v(v-1)/(k(k-1))` when it is an integer.
    pub fn expected_b(&self) -> Option<usize> {
        expected_blocks(self.k, self.v)
    }

    /// Replication number `(v-1)/(k-1)` when it is an integer.
    pub fn r(&self) -> Option<usize> {
        replication(self.k, self.v)
    }

    /// For each point, the indices of the blocks containing it, increasing.
    pub fn point_blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.v];
        for (i, block) in self.blocks.iter().enumerate() {
            for &p in block {
                out[p].push(i);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("design serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// SHA-256 of the canonical JSON form, hex encoded. Independent of the
    /// order in which blocks were supplied.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

pub fn replication(k: usize, v: usize) -> Option<usize> {
    if k < 2 || v < 1 || !(v - 1).is_multiple_of(k - 1) {
        return None;
    }
    Some((v - 1) / (k - 1))
}

pub fn expected_blocks(k: usize, v: usize) -> Option<usize> {
    if k < 2 {
        return None;
    }
    let num = v * (v - 1);
    let den = k * (k - 1);
    num.is_multiple_of(den).then_some(num / den)
}

/// First witness of a failed design property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DesignViolation {
    BlockCount { expected: Option<usize>, found: usize },
    BlockSize { block: usize, size: usize },
    RepeatedPoint { block: usize, point: usize },
    Replication { point: usize, count: usize, expected: Option<usize> },
    PairCoverage { a: usize, b: usize, count: usize },
    Identity { relation: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactCheck {
    pub passed: bool,
    pub counterexample: Option<DesignViolation>,
}

impl FactCheck {
    fn from(counterexample: Option<DesignViolation>) -> Self {
        Self { passed: counterexample.is_none(), counterexample }
    }
}

/// Outcome of checking the four incidence facts of a (2,k,v)-Steiner system
/// plus the counting identities `vr = bk` and `r(k-1) = v-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignCheck {
    /// `b = v(v-1)/(k(k-1))`.
    pub block_count: FactCheck,
    /// Every block has exactly `k` distinct points.
    pub block_size: FactCheck,
    /// Every point lies in exactly `r = (v-1)/(k-1)` blocks.
    pub replication: FactCheck,
    /// Every pair of distinct points lies in exactly one block.
    pub pair_coverage: FactCheck,
    pub identities: FactCheck,
}

impl DesignCheck {
    pub fn passed(&self) -> bool {
        self.facts().iter().all(|f| f.passed)
    }

    pub fn first_failure(&self) -> Option<&DesignViolation> {
        self.facts().into_iter().find_map(|f| f.counterexample.as_ref())
    }

    fn facts(&self) -> [&FactCheck; 5] {
        [&self.block_count, &self.block_size, &self.replication, &self.pair_coverage, &self.identities]
    }
}

pub fn verify_design(s: &SteinerSystem) -> DesignCheck {
    let (v, k) = (s.v, s.k);
    let expected_b = s.expected_b();
    let r = s.r();

    let block_count = FactCheck::from(
        (expected_b != Some(s.b())).then_some(DesignViolation::BlockCount { expected: expected_b, found: s.b() }),
    );

    let mut size_violation = None;
    for (i, block) in s.blocks.iter().enumerate() {
        if block.len() != k {
            size_violation = Some(DesignViolation::BlockSize { block: i, size: block.len() });
            break;
        }
        if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
            size_violation = Some(DesignViolation::RepeatedPoint { block: i, point: w[0] });
            break;
        }
    }
    let block_size = FactCheck::from(size_violation);

    let mut counts = vec![0usize; v];
    for block in &s.blocks {
        for &p in block {
            counts[p] += 1;
        }
    }
    let replication = FactCheck::from(
        counts
            .iter()
            .enumerate()
            .find(|&(_, &c)| Some(c) != r)
            .map(|(point, &count)| DesignViolation::Replication { point, count, expected: r }),
    );

    let mut pair_counts = vec![0u16; v * v];
    for block in &s.blocks {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                if a != b {
                    let slot = &mut pair_counts[a * v + b];
                    *slot = slot.saturating_add(1);
                }
            }
        }
    }
    let mut pair_violation = None;
    'scan: for a in 0..v {
        for b in a + 1..v {
            let count = pair_counts[a * v + b] as usize;
            if count != 1 {
                pair_violation = Some(DesignViolation::PairCoverage { a, b, count });
                break 'scan;
            }
        }
    }
    let pair_coverage = FactCheck::from(pair_violation);

    let identity_violation = match r {
        None => Some(DesignViolation::Identity { relation: "r(k-1) = v-1" }),
        Some(r) if v * r != s.b() * k => Some(DesignViolation::Identity { relation: "vr = bk" }),
        Some(_) => None,
    };
    let identities = FactCheck::from(identity_violation);

    DesignCheck { block_count, block_size, replication, pair_coverage, identities }
}

/// Sparse 0/1 matrix with one row per block and one column per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrixT {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl IncidenceMatrixT {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    /// Sorted column indices of the ones in row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for row in &self.rows {
            for &c in row {
                counts[c] += 1;
            }
        }
        counts
    }

    pub fn column_dot(&self, a: usize, b: usize) -> usize {
        self.rows.iter().filter(|row| row.contains(&a) && row.contains(&b)).count()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0u8; self.cols];
                for &c in row {
                    dense[c] = 1;
                }
                dense
            })
            .collect()
    }
}

pub fn incidence_transpose(s: &SteinerSystem) -> Result<IncidenceMatrixT, DesignError> {
    let check = verify_design(s);
    if let Some(violation) = check.first_failure() {
        return Err(DesignError::InvalidDesign(format!("{violation:?}")));
    }
    Ok(IncidenceMatrixT { cols: s.v, rows: s.blocks.clone() })
}
