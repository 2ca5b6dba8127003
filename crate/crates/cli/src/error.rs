use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(modgrav_core::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Wrap a library error; domain errors become validation errors on `section.quantity`.
    pub fn from_core(section: &str, e: modgrav_core::Error) -> Self {
        match e {
            modgrav_core::Error::Domain { quantity, .. } => {
                let field = if section.is_empty() {
                    quantity.to_string()
                } else {
                    format!("{section}.{}", quantity.replace(' ', "_"))
                };
                CliError::Validation {
                    field,
                    message: e.to_string(),
                }
            }
            other => CliError::Numerical(other),
        }
    }

    /// 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}
