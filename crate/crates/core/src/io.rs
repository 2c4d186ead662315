//! Matrix Market files with a JSON metadata sidecar, and design JSON.
//!
//! Steiner frames are written with the scale folded into every stored value
//! and recovered exactly on reading from the `scale` and `root_order`
//! metadata fields. Values use 17 significant digits so they re-parse to the
//! same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::designs::SteinerSystem;
use crate::error::IoError;
use crate::etf::{assemble_etf, compute_params, DenseFrame, EtfMatrix, FlatChoice, Frame, RowAssignment, ScaleSq};
use crate::flat::{FlatKind, Phase};
use crate::linalg::CMatrix;

/// Distance from a root of unity tolerated when reading stored phases.
const PHASE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Steiner,
    Dense,
}

/// The JSON sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameMetadata {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub alpha: f64,
    pub density: f64,
    pub real: bool,
    pub family: String,
    pub kind: FrameKind,
    /// `sqrt(p/q)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    /// Flat-matrix descriptor per point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flats: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub used_rows: Option<Vec<Vec<usize>>>,
}

/// A frame read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedFrame {
    Steiner(EtfMatrix),
    Dense(DenseFrame),
}

impl LoadedFrame {
    pub fn as_frame(&self) -> &dyn Frame {
        match self {
            LoadedFrame::Steiner(f) => f,
            LoadedFrame::Dense(f) => f,
        }
    }
}

/// `path` with its extension replaced by `json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_scale(s: ScaleSq) -> String {
    format!("sqrt({}/{})", s.num, s.den)
}

fn parse_scale(text: &str) -> Result<ScaleSq, IoError> {
    let bad = || IoError::Metadata(format!("scale must look like sqrt(p/q), got {text:?}"));
    let inner = text.trim().strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (p, q) = inner.split_once('/').unwrap_or((inner, "1"));
    let (p, q): (u64, u64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
    if q == 0 {
        return Err(bad());
    }
    Ok(ScaleSq::new(p, q))
}

/// Matrix Market text of a frame; entries column-major, 1-based.
pub fn matrix_market(frame: &dyn Frame, real: bool) -> String {
    let cols = frame.columns();
    let nnz: usize = cols.iter().map(Vec::len).sum();
    let field = if real { "real" } else { "complex" };
    let mut out = format!("%%MatrixMarket matrix coordinate {field} general\n");
    let _ = writeln!(out, "{} {} {}", frame.n_rows(), frame.n_cols(), nnz);
    for (j, col) in cols.iter().enumerate() {
        for &(i, z) in col {
            if real {
                let _ = writeln!(out, "{} {} {}", i + 1, j + 1, num(z.re));
            } else {
                let _ = writeln!(out, "{} {} {} {}", i + 1, j + 1, num(z.re), num(z.im));
            }
        }
    }
    out
}

/// Sidecar for a Steiner frame.
pub fn steiner_metadata(etf: &EtfMatrix, family: &str) -> FrameMetadata {
    let p = compute_params(etf);
    let prov = etf.provenance();
    FrameMetadata {
        m: p.m,
        n: p.n,
        v: prov.map(|x| x.design.v()),
        k: prov.map(|x| x.design.k()),
        r: prov.map(|x| x.replication()),
        alpha: p.alpha,
        density: p.density,
        real: etf.is_real(),
        family: family.to_string(),
        kind: FrameKind::Steiner,
        scale: Some(format_scale(etf.scale_sq())),
        root_order: Some(etf.root_order()),
        blocks: prov.map(|x| x.design.blocks().to_vec()),
        flats: prov.map(|x| x.flats.iter().map(|h| h.kind().to_string()).collect()),
        used_rows: prov.map(|x| x.used_rows.clone()),
    }
}

pub fn dense_metadata(frame: &DenseFrame, family: &str) -> FrameMetadata {
    let p = compute_params(frame);
    FrameMetadata {
        m: p.m,
        n: p.n,
        v: None,
        k: None,
        r: None,
        alpha: p.alpha,
        density: p.density,
        real: frame.is_real(),
        family: family.to_string(),
        kind: FrameKind::Dense,
        scale: None,
        root_order: None,
        blocks: None,
        flats: None,
        used_rows: None,
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

fn write_pair(path: &Path, mtx: &str, meta: &FrameMetadata) -> Result<(), IoError> {
    write(path, mtx)?;
    let mut json = serde_json::to_string(meta).expect("metadata serializes");
    json.push('\n');
    write(&sidecar_path(path), &json)
}

/// Writes `path` and its `.json` sidecar.
pub fn write_steiner(path: &Path, etf: &EtfMatrix, family: &str) -> Result<FrameMetadata, IoError> {
    let meta = steiner_metadata(etf, family);
    write_pair(path, &matrix_market(etf, etf.is_real()), &meta)?;
    Ok(meta)
}

pub fn write_dense(path: &Path, frame: &DenseFrame, family: &str) -> Result<FrameMetadata, IoError> {
    let meta = dense_metadata(frame, family);
    write_pair(path, &matrix_market(frame, meta.real), &meta)?;
    Ok(meta)
}

/// Parsed Matrix Market coordinate data: dimensions and 0-based entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Coordinates {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

pub fn parse_matrix_market(text: &str) -> Result<Coordinates, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(IoError::Parse { line: 1, msg: "empty file".into() })?;
    let words: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" || words[2] != "coordinate" {
        return Err(IoError::Parse { line: 1, msg: "expected a coordinate Matrix Market header".into() });
    }
    let complex = match words[3].as_str() {
        "real" | "integer" => false,
        "complex" => true,
        other => return Err(IoError::Parse { line: 1, msg: format!("unsupported field {other}") }),
    };
    if words[4] != "general" {
        return Err(IoError::Parse { line: 1, msg: format!("unsupported symmetry {}", words[4]) });
    }

    let mut body = lines.filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'));
    let (idx, size) = body.next().ok_or(IoError::Parse { line: 2, msg: "missing size line".into() })?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| IoError::Parse { line: idx + 1, msg: format!("bad size field {w:?}") }))
        .collect::<Result<_, _>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(IoError::Parse { line: idx + 1, msg: "size line needs three integers".into() });
    };

    let mut entries = Vec::with_capacity(nnz);
    for (idx, line) in body {
        let line_no = idx + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        let want = if complex { 4 } else { 3 };
        if f.len() != want {
            return Err(IoError::Parse { line: line_no, msg: format!("expected {want} fields") });
        }
        let index = |w: &str, bound: usize| -> Result<usize, IoError> {
            match w.parse::<usize>() {
                Ok(x) if (1..=bound).contains(&x) => Ok(x - 1),
                _ => Err(IoError::Parse { line: line_no, msg: format!("index {w:?} out of range") }),
            }
        };
        let value = |w: &str| -> Result<f64, IoError> {
            w.parse().map_err(|_| IoError::Parse { line: line_no, msg: format!("bad value {w:?}") })
        };
        let (i, j) = (index(f[0], rows)?, index(f[1], cols)?);
        let z = Complex64::new(value(f[2])?, if complex { value(f[3])? } else { 0.0 });
        entries.push((i, j, z));
    }
    if entries.len() != nnz {
        return Err(IoError::Parse { line: 2, msg: format!("size line promises {nnz} entries, found {}", entries.len()) });
    }
    Ok(Coordinates { rows, cols, entries })
}

/// The root of unity of order dividing `order` closest to `z`, if within
/// tolerance.
fn recover_phase(z: Complex64, order: u32) -> Option<Phase> {
    let turns = z.arg() / std::f64::consts::TAU * order as f64;
    let phase = Phase::new(turns.round() as i64, order);
    ((phase.to_complex() - z).norm() <= PHASE_TOL).then_some(phase)
}

fn steiner_from(coords: &Coordinates, meta: &FrameMetadata) -> Result<EtfMatrix, IoError> {
    let scale_sq = parse_scale(meta.scale.as_deref().ok_or_else(|| IoError::Metadata("steiner frame without scale".into()))?)?;
    let order = meta.root_order.unwrap_or(2).max(1);
    let scale = scale_sq.scale();
    let mut columns: Vec<Vec<(usize, Phase)>> = vec![Vec::new(); coords.cols];
    for &(i, j, z) in &coords.entries {
        // Explicit zeros are absent entries.
        if z.norm() == 0.0 {
            continue;
        }
        let phase = recover_phase(z / scale, order)
            .ok_or_else(|| IoError::Metadata(format!("entry ({}, {}) is not the scale times a root of unity", i + 1, j + 1)))?;
        columns[j].push((i, phase));
    }
    for col in &mut columns {
        col.sort_by_key(|&(i, _)| i);
        if col.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(IoError::Metadata("repeated matrix entry".into()));
        }
    }
    let etf = EtfMatrix::from_columns(coords.rows, scale_sq, columns);

    // Reattach provenance only when it reproduces the stored matrix.
    let (Some(v), Some(k), Some(blocks), Some(flats), Some(used_rows)) =
        (meta.v, meta.k, meta.blocks.clone(), meta.flats.as_ref(), meta.used_rows.clone())
    else {
        return Ok(etf);
    };
    let design = SteinerSystem::from_blocks(v, k, blocks)?;
    let flats = flats.iter().map(|d| d.parse::<FlatKind>()?.build()).collect::<Result<Vec<_>, _>>()?;
    match assemble_etf(&design, &FlatChoice::PerPoint(flats), &RowAssignment::Explicit(used_rows)) {
        Ok(rebuilt) if (0..etf.cols()).all(|n| rebuilt.column_phases(n) == etf.column_phases(n)) && rebuilt.rows() == etf.rows() => {
            Ok(rebuilt)
        }
        _ => Ok(etf),
    }
}

/// Reads `path` and its sidecar.
pub fn read_frame(path: &Path) -> Result<(LoadedFrame, FrameMetadata), IoError> {
    let coords = parse_matrix_market(&read(path)?)?;
    let sidecar = sidecar_path(path);
    let meta: FrameMetadata =
        serde_json::from_str(&read(&sidecar)?).map_err(|source| IoError::Json { path: sidecar, source })?;
    if (meta.m, meta.n) != (coords.rows, coords.cols) {
        return Err(IoError::Metadata(format!(
            "sidecar says {}x{}, matrix is {}x{}",
            meta.m, meta.n, coords.rows, coords.cols
        )));
    }
    let frame = match meta.kind {
        FrameKind::Steiner => LoadedFrame::Steiner(steiner_from(&coords, &meta)?),
        FrameKind::Dense => {
            let mut m = CMatrix::zeros(coords.rows, coords.cols);
            for &(i, j, z) in &coords.entries {
                m[(i, j)] = z;
            }
            LoadedFrame::Dense(DenseFrame::new(m))
        }
    };
    Ok((frame, meta))
}

pub fn write_design(path: &Path, design: &SteinerSystem) -> Result<(), IoError> {
    write(path, &(design.to_json() + "\n"))
}

pub fn read_design(path: &Path) -> Result<SteinerSystem, IoError> {
    SteinerSystem::from_json(&read(path)?).map_err(|source| IoError::Json { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_text() {
        assert_eq!(format_scale(ScaleSq::new(2, 6)), "sqrt(1/3)");
        assert_eq!(parse_scale("sqrt(1/3)").unwrap(), ScaleSq::new(1, 3));
        assert_eq!(parse_scale("sqrt(4)").unwrap(), ScaleSq::new(4, 1));
        assert!(parse_scale("1/3").is_err());
        assert!(parse_scale("sqrt(1/0)").is_err());
    }

    #[test]
    fn seventeen_digits() {
        let x = 1.0 / 3.0f64.sqrt();
        let text = num(x);
        let mantissa = text.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        assert_eq!(text.parse::<f64>().unwrap(), x);
        assert_eq!(num(-1.0), "-1.0000000000000000e0");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_matrix_market(""), Err(IoError::Parse { line: 1, .. })));
        let bad_header = "%%MatrixMarket matrix array real general\n2 2\n";
        assert!(matches!(parse_matrix_market(bad_header), Err(IoError::Parse { line: 1, .. })));
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert!(matches!(parse_matrix_market(short), Err(IoError::Parse { .. })));
        let range = "%%MatrixMarket matrix coordinate real general\n% note\n2 2 1\n3 1 1.0\n";
        assert!(matches!(parse_matrix_market(range), Err(IoError::Parse { line: 4, .. })));
    }

    #[test]
    fn phase_recovery() {
        let w = Phase::new(1, 3);
        assert_eq!(recover_phase(w.to_complex(), 3), Some(w));
        assert_eq!(recover_phase(Complex64::new(-1.0, 1e-17), 6), Some(Phase::MINUS_ONE));
        assert_eq!(recover_phase(Complex64::new(0.9, 0.0), 2), None);
    }
}
