use std::fmt::Display;

use kuhn3::Error;

pub const VERIFICATION: u8 = 1;
pub const USAGE: u8 = 2;
pub const NUMERICAL: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Display) -> Self {
        Failure {
            code: USAGE,
            message: message.to_string(),
        }
    }

    pub fn numerical(message: impl Display) -> Self {
        Failure {
            code: NUMERICAL,
            message: message.to_string(),
        }
    }

    pub fn io(path: &std::path::Path, err: impl Display) -> Self {
        Failure::usage(format!("{}: {err}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::StepSizeUnderflow { .. }
            | Error::TooManySteps { .. }
            | Error::NoConvergence(_)
            | Error::InsufficientData(_) => Failure::numerical(e),
            _ => Failure::usage(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}
