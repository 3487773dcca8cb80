use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unsupported security level {0} bits (supported: 128)")]
    UnsupportedSecurityLevel(u32),
    #[error("{what}: expected {expected} bytes, found {found}")]
    BadLength {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid {0} encoding")]
    InvalidEncoding(&'static str),
    #[error("multi-pairing needs at least one pair")]
    EmptyPairingList,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what}[{index}] = {value} exceeds bound {bound}")]
    OutOfBound {
        what: &'static str,
        index: usize,
        value: i64,
        bound: i64,
    },

    #[error("function class not decodable: n^2*Bq*Bx*By must stay below p/2")]
    Undecodable,

    #[error("discrete log not found within [-{bound}, {bound}]")]
    OutOfRange { bound: u64 },

    #[error("dlog table for bound {bound} needs ~{needed_mb} MiB, cap is {cap_mb} MiB")]
    TableTooLarge { bound: u64, needed_mb: u64, cap_mb: u64 },

    #[error("functional key {0} does not match the model class diagonal")]
    KeyMismatch(usize),

    #[error("output bound {0} does not fit the 64-bit dlog range")]
    BoundOverflow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Format(#[from] crate::io::FormatError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
