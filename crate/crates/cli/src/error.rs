use std::process::ExitCode;

use emocue::ErrorClass;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(emocue::Error),
}

impl From<emocue::Error> for CliError {
    fn from(e: emocue::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 1 usage or configuration, 2 data, 3 numerical.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Core(e) => match e.class() {
                ErrorClass::Config => ExitCode::from(1),
                ErrorClass::Data => ExitCode::from(2),
                ErrorClass::Numerical => ExitCode::from(3),
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "configuration error: {m}"),
            CliError::Core(e) => {
                let class = match e.class() {
                    ErrorClass::Config => "configuration error",
                    ErrorClass::Data => "data error",
                    ErrorClass::Numerical => "numerical failure",
                };
                write!(f, "{class}: {e}")
            }
        }
    }
}
