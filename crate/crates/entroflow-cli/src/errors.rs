//! Error split matching the exit-code contract: usage problems exit 2,
//! domain and verification failures exit 1.

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config keys, malformed values. Exit code 2.
    Usage(String),
    /// Valid invocation that fails mathematically or on I/O. Exit code 1.
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Run(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Run(m) => m,
        }
    }
}

impl From<entroflow::Error> for CliError {
    fn from(err: entroflow::Error) -> Self {
        Self::Run(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::Run(err.to_string())
    }
}
