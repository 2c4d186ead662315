use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field exponent must be at least 1")]
    ZeroExponent,
    #[error("field order {order} exceeds the bound {max}")]
    TooLarge { order: u64, max: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("invalid point count v = {0}")]
    InvalidV(usize),
    #[error("v = {v} is inadmissible: {reason}")]
    InadmissibleV { v: usize, reason: String },
    #[error("geometry dimension n = {0} must be at least 2")]
    InvalidDimension(u32),
    #[error("design with {v} points exceeds the bound {max}")]
    TooLarge { v: u64, max: u64 },
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlatError {
    #[error("matrix order {order} exceeds the bound {max}")]
    TooLarge { order: u64, max: u64 },
    #[error("Paley construction needs a prime power q = 3 mod 4, got {0}")]
    InadmissibleQ(u64),
    #[error("matrix order must be at least 1")]
    ZeroOrder,
    #[error("cannot parse flat matrix descriptor {0:?}")]
    BadDescriptor(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EtfError {
    #[error("flat matrix for point {point} has order {found}, expected r + 1 = {expected}")]
    OrderMismatch { point: usize, expected: usize, found: usize },
    #[error("point {point} assigns flat-matrix row {row} twice")]
    AssignmentCollision { point: usize, row: usize },
    #[error("point {point} needs {expected} assigned rows, got {found}")]
    AssignmentLength { point: usize, expected: usize, found: usize },
    #[error("expected {expected} flat matrices, got {found}")]
    FlatCount { expected: usize, found: usize },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("frame is not tight: {0}")]
    NotTight(String),
    #[error("frame carries no Steiner provenance")]
    NoProvenance,
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("need 1 <= M < N, got M = {m}, N = {n}")]
    InvalidDims { m: u64, n: u64 },
    #[error("need k >= 2 and j >= 1, got k = {k}, j = {j}")]
    InvalidK { k: u64, j: u64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RipError {
    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("need 1 <= K <= N, got K = {k}, N = {n}")]
    InvalidK { k: usize, n: usize },
    #[error("need 1 <= M < N, got M = {m}, N = {n}")]
    InvalidDims { m: u64, n: u64 },
    #[error("{subsets} subsets exceed the budget {budget} and sampling is disabled")]
    BudgetExceeded { subsets: String, budget: u64 },
    #[error(transparent)]
    Etf(#[from] EtfError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("metadata: {0}")]
    Metadata(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error(transparent)]
    Etf(#[from] EtfError),
}
