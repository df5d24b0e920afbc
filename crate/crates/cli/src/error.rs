use std::fmt;

use permbound_core::Error;
use serde::Serialize;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    #[serde(skip)]
    pub exit_code: i32,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.into(),
            message: message.into(),
            exit_code: EXIT_INPUT,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::input("ParseError", message)
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind,
                "message": self.message,
                "exit_code": self.exit_code,
            }
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::NotSquare { .. } => "NotSquare",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ZeroPermanent => "ZeroPermanent",
            Error::NegativeEntry { .. } => "NegativeEntry",
            Error::NegativeInput { .. } => "NegativeInput",
            Error::ZeroPivot { .. } => "ZeroPivot",
            Error::ConditionViolated { .. } => "ConditionViolated",
            Error::ParameterOutOfRange(_) => "ParameterOutOfRange",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::InvalidGram(_) => "InvalidGram",
        };
        let exit_code = match e {
            Error::ZeroPivot { .. } | Error::ZeroPermanent | Error::InvalidGram(_) => EXIT_NUMERIC,
            Error::ConditionViolated { .. } => EXIT_CHECK_FAILED,
            _ => EXIT_INPUT,
        };
        CliError {
            kind: kind.into(),
            message: e.to_string(),
            exit_code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input("IoError", e.to_string())
    }
}
