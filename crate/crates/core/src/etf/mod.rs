//! Steiner equiangular tight frames: assembly from a Steiner system and flat
//! matrices, and the checks that the result is an ETF.
//!
//! Point `j` of a (2,k,v) system contributes the `r + 1` consecutive columns
//! `j(r+1) .. (j+1)(r+1)`. Its `r` blocks, in increasing block order, receive
//! distinct rows of the point's flat matrix; every other row is zero. The
//! frame is scaled by `sqrt(1/r) = sqrt((k-1)/(v-1))`.

mod naimark;
mod verify;

pub use naimark::naimark_complement;
pub(crate) use verify::sparse_inner;
pub use verify::{
    compute_params, gram, gram_rank, verify_equiangular, verify_tight, EquiangularReport, EtfParams, ExactPairValues,
    GramMatrix, GramRank, PairClassStats, PairWitness, TightReport,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::designs::{verify_design, SteinerSystem};
use crate::error::{DesignError, EtfError};
use crate::flat::{best_flat, FlatMatrix, Phase};
use crate::linalg::CMatrix;

/// Read access shared by sparse Steiner frames and dense frames.
pub trait Frame: Sync {
    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;

    /// Nonzero entries of column `n` as `(row, value)`, rows increasing.
    fn column(&self, n: usize) -> Vec<(usize, Complex64)>;

    /// The sparse exact representation, when there is one.
    fn as_etf(&self) -> Option<&EtfMatrix> {
        None
    }

    fn nnz(&self) -> usize {
        (0..self.n_cols()).map(|n| self.column(n).len()).sum()
    }

    fn columns(&self) -> Vec<Vec<(usize, Complex64)>> {
        (0..self.n_cols()).into_par_iter().map(|n| self.column(n)).collect()
    }

    fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n_rows(), self.n_cols());
        for n in 0..self.n_cols() {
            for (i, z) in self.column(n) {
                m[(i, n)] = z;
            }
        }
        m
    }
}

/// The rational `num/den`; the frame scale is its square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaleSq {
    pub num: u64,
    pub den: u64,
}

impl ScaleSq {
    pub fn new(num: u64, den: u64) -> Self {
        let g = num_integer::gcd(num, den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn scale(&self) -> f64 {
        self.value().sqrt()
    }
}

/// Where a Steiner frame came from: the design, the flat matrix of each
/// point, and which flat-matrix rows each point's blocks received.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub design: SteinerSystem,
    pub flats: Vec<FlatMatrix>,
    /// `used_rows[j][i]` is the flat-matrix row placed in the `i`-th block
    /// (in increasing order) containing point `j`.
    pub used_rows: Vec<Vec<usize>>,
}

impl Provenance {
    pub fn replication(&self) -> usize {
        self.used_rows.first().map_or(0, Vec::len)
    }

    /// The flat-matrix row left out for point `j`.
    pub fn omitted_row(&self, j: usize) -> usize {
        let order = self.flats[j].order();
        (0..order).find(|c| !self.used_rows[j].contains(c)).expect("exactly one row is omitted")
    }
}

/// A frame stored as `sqrt(scale_sq)` times a sparse matrix of exact roots
/// of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct EtfMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, Phase)>>,
    scale_sq: ScaleSq,
    provenance: Option<Provenance>,
}

impl EtfMatrix {
    /// A frame from explicit unscaled columns. Rows within each column must
    /// be increasing and below `rows`.
    pub fn from_columns(rows: usize, scale_sq: ScaleSq, columns: Vec<Vec<(usize, Phase)>>) -> Self {
        for col in &columns {
            assert!(col.windows(2).all(|w| w[0].0 < w[1].0), "column rows must increase");
            assert!(col.iter().all(|&(i, _)| i < rows), "row index out of range");
        }
        Self { rows, columns, scale_sq, provenance: None }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn scale_sq(&self) -> ScaleSq {
        self.scale_sq
    }

    pub fn scale(&self) -> f64 {
        self.scale_sq.scale()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Unscaled column `n`.
    pub fn column_phases(&self, n: usize) -> &[(usize, Phase)] {
        &self.columns[n]
    }

    pub fn is_real(&self) -> bool {
        self.columns.iter().flatten().all(|(_, p)| p.is_real())
    }

    /// Least common multiple of the root-of-unity orders in use.
    pub fn root_order(&self) -> u32 {
        self.columns.iter().flatten().fold(1u64, |acc, (_, p)| num_integer::lcm(acc, p.order() as u64)) as u32
    }

    /// Point (column block) that column `n` belongs to.
    pub fn block_of(&self, n: usize) -> Option<usize> {
        let r = self.provenance.as_ref()?.replication();
        Some(n / (r + 1))
    }

    /// Unscaled entries as a dense `rows x cols` table of `Option<Phase>`.
    pub fn unscaled_pattern(&self) -> Vec<Vec<Option<Phase>>> {
        let mut out = vec![vec![None; self.cols()]; self.rows];
        for (n, col) in self.columns.iter().enumerate() {
            for &(i, p) in col {
                out[i][n] = Some(p);
            }
        }
        out
    }
}

impl Frame for EtfMatrix {
    fn n_rows(&self) -> usize {
        self.rows
    }

    fn n_cols(&self) -> usize {
        self.columns.len()
    }

    fn column(&self, n: usize) -> Vec<(usize, Complex64)> {
        let s = self.scale();
        self.columns[n].iter().map(|&(i, p)| (i, p.to_complex() * s)).collect()
    }

    fn as_etf(&self) -> Option<&EtfMatrix> {
        Some(self)
    }

    fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}

/// A frame with arbitrary dense entries, e.g. a Naimark complement.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseFrame {
    matrix: CMatrix,
}

impl DenseFrame {
    pub fn new(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_real(&self) -> bool {
        (0..self.matrix.rows()).all(|i| self.matrix.row(i).iter().all(|z| z.im == 0.0))
    }
}

impl Frame for DenseFrame {
    fn n_rows(&self) -> usize {
        self.matrix.rows()
    }

    fn n_cols(&self) -> usize {
        self.matrix.cols()
    }

    fn column(&self, n: usize) -> Vec<(usize, Complex64)> {
        (0..self.matrix.rows()).map(|i| (i, self.matrix[(i, n)])).filter(|(_, z)| *z != Complex64::new(0.0, 0.0)).collect()
    }

    fn to_dense(&self) -> CMatrix {
        self.matrix.clone()
    }
}

/// Flat matrices for the points of a design.
#[derive(Debug, Clone)]
pub enum FlatChoice {
    /// One matrix used for every point.
    Shared(FlatMatrix),
    PerPoint(Vec<FlatMatrix>),
}

/// Which flat-matrix rows the blocks through each point receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowAssignment {
    /// Leave out this row; the blocks get the remaining rows in order.
    OmitRow(usize),
    /// Explicit rows per point, one per block through the point.
    Explicit(Vec<Vec<usize>>),
}

impl Default for RowAssignment {
    fn default() -> Self {
        RowAssignment::OmitRow(0)
    }
}

/// Builds the Steiner ETF of `design` from the given flat matrices.
pub fn assemble_etf(design: &SteinerSystem, flats: &FlatChoice, assignment: &RowAssignment) -> Result<EtfMatrix, EtfError> {
    let check = verify_design(design);
    if let Some(violation) = check.first_failure() {
        return Err(DesignError::InvalidDesign(format!("{violation:?}")).into());
    }
    let v = design.v();
    let r = design.r().expect("verified design has integral r");
    let order = r + 1;

    let flats: Vec<FlatMatrix> = match flats {
        FlatChoice::Shared(h) => vec![h.clone(); v],
        FlatChoice::PerPoint(hs) if hs.len() == v => hs.clone(),
        FlatChoice::PerPoint(hs) => return Err(EtfError::FlatCount { expected: v, found: hs.len() }),
    };
    if let Some((point, h)) = flats.iter().enumerate().find(|(_, h)| h.order() != order) {
        return Err(EtfError::OrderMismatch { point, expected: order, found: h.order() });
    }

    let used_rows: Vec<Vec<usize>> = match assignment {
        RowAssignment::OmitRow(c) => {
            if *c >= order {
                return Err(EtfError::AssignmentLength { point: 0, expected: r, found: order });
            }
            vec![(0..order).filter(|x| x != c).collect(); v]
        }
        RowAssignment::Explicit(rows) => {
            if rows.len() != v {
                return Err(EtfError::AssignmentLength { point: rows.len().min(v), expected: r, found: 0 });
            }
            for (point, assigned) in rows.iter().enumerate() {
                if assigned.len() != r {
                    return Err(EtfError::AssignmentLength { point, expected: r, found: assigned.len() });
                }
                let mut seen = vec![false; order];
                for &row in assigned {
                    if row >= order || seen[row] {
                        return Err(EtfError::AssignmentCollision { point, row });
                    }
                    seen[row] = true;
                }
            }
            rows.clone()
        }
    };

    let point_blocks = design.point_blocks();
    let mut columns = Vec::with_capacity(v * order);
    for j in 0..v {
        for c in 0..order {
            let col = point_blocks[j]
                .iter()
                .zip(&used_rows[j])
                .map(|(&block, &h_row)| (block, flats[j].phase(h_row, c)))
                .collect();
            columns.push(col);
        }
    }
    let etf = EtfMatrix::from_columns(design.b(), ScaleSq::new(1, r as u64), columns);
    Ok(etf.with_provenance(Provenance { design: design.clone(), flats, used_rows }))
}

/// The default Steiner ETF: one shared flat matrix of order `r + 1` (real
/// Hadamard when available and `prefer_real`), omitting row 0.
pub fn steiner_etf(design: &SteinerSystem, prefer_real: bool) -> Result<EtfMatrix, EtfError> {
    let r = design
        .r()
        .ok_or_else(|| DesignError::InvalidDesign(format!("(v-1)/(k-1) is not an integer for v = {}, k = {}", design.v(), design.k())))?;
    let h = best_flat(r + 1, prefer_real).map_err(|e| DesignError::InvalidDesign(e.to_string()))?;
    assemble_etf(design, &FlatChoice::Shared(h), &RowAssignment::default())
}

/// `F* f`, touching only the stored nonzeros. Returns the result and the
/// number of multiply-adds performed.
pub fn analysis_apply_counted(frame: &dyn Frame, f: &[Complex64]) -> Result<(Vec<Complex64>, usize), EtfError> {
    if f.len() != frame.n_rows() {
        return Err(EtfError::DimensionMismatch { expected: frame.n_rows(), found: f.len() });
    }
    let mut ops = 0;
    let out = (0..frame.n_cols())
        .map(|n| {
            let col = frame.column(n);
            ops += col.len();
            col.iter().map(|&(i, z)| z.conj() * f[i]).sum()
        })
        .collect();
    Ok((out, ops))
}

pub fn analysis_apply(frame: &dyn Frame, f: &[Complex64]) -> Result<Vec<Complex64>, EtfError> {
    analysis_apply_counted(frame, f).map(|(out, _)| out)
}
