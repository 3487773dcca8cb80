use std::fmt;

use qfe_core::io::FormatError;
use qfe_core::Error;

/// Failure categories, one exit code each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Internal,
    Usage,
    Io,
    Format,
    CurveMismatch,
    BoundOverflow,
    OutOfRange,
    TableTooLarge,
    Validation,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Internal => 1,
            Kind::Usage => 2,
            Kind::Io => 3,
            Kind::Format => 4,
            Kind::CurveMismatch => 5,
            Kind::BoundOverflow => 6,
            Kind::OutOfRange => 7,
            Kind::TableTooLarge => 8,
            Kind::Validation => 9,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Internal => "internal",
            Kind::Usage => "usage",
            Kind::Io => "io",
            Kind::Format => "format",
            Kind::CurveMismatch => "curve_mismatch",
            Kind::BoundOverflow => "bound_overflow",
            Kind::OutOfRange => "out_of_range",
            Kind::TableTooLarge => "table_too_large",
            Kind::Validation => "validation",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, message)
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        serde_json::json!({
            "error": self.kind.name(),
            "exit": self.kind.exit_code(),
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for CliError {}

fn format_kind(e: &FormatError) -> Kind {
    match e {
        FormatError::CurveMismatch { .. } => Kind::CurveMismatch,
        _ => Kind::Format,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Format(f) => format_kind(f),
            Error::Io(_) => Kind::Io,
            Error::BoundOverflow(_) | Error::Undecodable => Kind::BoundOverflow,
            Error::OutOfRange { .. } => Kind::OutOfRange,
            Error::TableTooLarge { .. } => Kind::TableTooLarge,
            Error::Group(_)
            | Error::DimensionMismatch { .. }
            | Error::OutOfBound { .. }
            | Error::KeyMismatch(_)
            | Error::InvalidParameter(_) => Kind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(format_kind(&e), e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(Kind::Io, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
