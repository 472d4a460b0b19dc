use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    /// A computation failed in a way that is not the caller's fault.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Check(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<brjuno_core::Error> for CliError {
    fn from(e: brjuno_core::Error) -> Self {
        use brjuno_core::Error as E;
        match e {
            E::Parse(_) | E::AlphaOutOfRange(_) | E::Domain(_) | E::Precondition(_) | E::Depth { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Check(e.to_string()),
        }
    }
}
