use std::fmt;
use std::process::ExitCode;

/// Exit statuses.
pub const PASS: u8 = 0;
pub const VERIFICATION_FAILURE: u8 = 1;
pub const MALFORMED_INPUT: u8 = 2;
pub const DOMAIN: u8 = 3;
pub const COMPLEX_SEQUENCE: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: MALFORMED_INPUT,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            code: DOMAIN,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<qconvex::Error> for CliError {
    fn from(e: qconvex::Error) -> Self {
        let code = match e {
            qconvex::Error::ComplexCoefficients { .. } => COMPLEX_SEQUENCE,
            qconvex::Error::ReferenceVanishes(_) => VERIFICATION_FAILURE,
            _ => MALFORMED_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}
