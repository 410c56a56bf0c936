use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{reason}: {detail}")]
    Input { reason: &'static str, detail: String },

    #[error("{reason}: {detail}")]
    Numerical { reason: &'static str, detail: String },
}

impl CliError {
    pub fn input(reason: &'static str, detail: impl Into<String>) -> Self {
        CliError::Input {
            reason,
            detail: detail.into(),
        }
    }

    pub fn numerical(reason: &'static str, detail: impl Into<String>) -> Self {
        CliError::Numerical {
            reason,
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } => 1,
            CliError::Numerical { .. } => 2,
        }
    }

    /// One-line report: `error kind=<input|numerical> reason=<slug> detail=<text>`.
    pub fn report_line(&self) -> String {
        let (kind, reason, detail) = match self {
            CliError::Input { reason, detail } => ("input", reason, detail),
            CliError::Numerical { reason, detail } => ("numerical", reason, detail),
        };
        let detail = detail.replace(['\n', '\r'], " ");
        format!("error kind={kind} reason={reason} detail={detail}")
    }
}

impl From<beamsign::Error> for CliError {
    fn from(e: beamsign::Error) -> Self {
        use beamsign::Error as E;
        let detail = e.to_string();
        match e {
            E::Config(_) => CliError::input("config", detail),
            E::Domain(_) => CliError::input("domain", detail),
            E::Unsupported(_) => CliError::input("unsupported", detail),
            E::SearchFailure(_) => CliError::numerical("search_failure", detail),
            E::Resonance { .. } => CliError::numerical("resonance", detail),
            E::NonConvergence { .. } => CliError::numerical("nonconvergence", detail),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input("io", e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
