use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a usable prime modulus")]
    InvalidModulus(u32),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("variable index {index} out of range for {nvars} variables")]
    VarIndex { index: usize, nvars: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("zero ideal has no minimal generators")]
    ZeroIdeal,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseFile { line: usize, column: usize, message: String },
    #[error("generators must be homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("homogeneity violation in {context}: entry ({row},{col}) has degree {found:?}, twists force {forced}")]
    TwistViolation { context: String, row: usize, col: usize, found: Option<u32>, forced: i64 },
    #[error("matrix shape error: {0}")]
    Shape(String),
    #[error("minor size {k} invalid for a {rows}x{cols} matrix")]
    MinorSize { k: usize, rows: usize, cols: usize },
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("expected a locus of dimension {expected}, found {found}")]
    WrongDimension { expected: i64, found: i64 },
    #[error("Hilbert polynomial is not of Calabi-Yau-in-P^7 shape: {0}")]
    NotCalabiYauShape(String),
    #[error("invalid construction data: {0}")]
    BadData(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("seed budget exhausted after {attempts} attempts: {reason}")]
    SeedBudget { attempts: u64, reason: String },
    #[error("smoothness test did not return smooth: {0}")]
    NotSmooth(String),
    #[error("c3 must be even, got {0}")]
    OddChernNumber(i64),
    #[error("Betti table has no first column")]
    MissingFirstColumn,
    #[error("unsupported cohomology request: {0}")]
    UnsupportedCohomology(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
