//! Steiner equiangular tight frames: finite fields, Steiner systems, flat
//! matrices, frame assembly and verification, parameter recovery, and
//! restricted-isometry analysis.

pub mod designs;
pub mod error;
pub mod etf;
pub mod field;
pub mod flat;
pub mod io;
pub mod linalg;
pub mod params;
pub mod rip;

pub use error::{DesignError, EtfError, FieldError, FlatError, IoError, ParamError, RipError};
