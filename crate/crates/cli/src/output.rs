//! Error-to-exit-code mapping and report writing helpers.

use potato_core::Error as CoreError;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub enum Outcome {
    Pass,
    CheckFailed,
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::CheckFailed => ExitCode::from(1),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 usage/malformed input, 3 generation failure, 4 model mismatch.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::NegativeDiscriminant(_)
                | CoreError::NoConsistentCenter(_)
                | CoreError::CannotPlace(_)
                | CoreError::GenerationFailed(_) => 3,
                CoreError::ModelMismatch { .. } => 4,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Writes `text` to the path, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(CliError::io(path)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Serializes a report as pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}
