use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] arithdyn::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn kind(&self) -> &'static str {
        use arithdyn::Error as E;
        match self {
            CliError::Domain(e) => match e {
                E::InvalidInput(_) => "invalid-input",
                E::DegenerateMap => "degenerate-map",
                E::RepeatedRoot { .. } => "repeated-root",
                E::ResourceLimit { .. } => "resource-limit",
                E::Indeterminate(_) => "indeterminate",
                E::UnsupportedScope(_) => "unsupported-scope",
                E::NotCertified { .. } => "not-certified",
            },
            CliError::Input(_) => "invalid-input",
            CliError::Io(_) => "io",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "json",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}})
    }
}
