use std::fmt;
use std::path::Path;

use gerk_core::io::IoError;
use gerk_core::Error;

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DIMENSION: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;
pub const EXIT_ENUMERATION_CAP: u8 = 5;

/// A message plus the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }

    /// Read or parse failure on `path`; parse errors keep their line number.
    pub fn read(path: &Path, e: IoError) -> Self {
        let p = path.display();
        match e {
            IoError::Parse { line, message } => Self::input(format!("{p}:{line}: {message}")),
            IoError::FieldMismatch { expected, found } => Self::input(format!(
                "{p}: file holds {found} data but the {expected} field was requested"
            )),
            IoError::Io(e) => Self::input(format!("{p}: {e}")),
        }
    }

    pub fn write(path: &Path, e: std::io::Error) -> Self {
        Self::input(format!("cannot write {}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::DegenerateNullspace | Error::InvalidRank { .. } => EXIT_DEGENERATE,
            Error::TooManyColumns { .. } => EXIT_ENUMERATION_CAP,
            Error::InvalidParameter(_)
            | Error::MissingParameter(_)
            | Error::UnknownPreset(_)
            | Error::FieldMismatch { .. } => EXIT_INPUT,
            _ => EXIT_FAILURE,
        };
        Self::new(code, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
