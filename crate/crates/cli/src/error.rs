use serde_json::json;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration; `field` is a dotted path into the config.
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    /// A referenced input file could not be parsed.
    #[error("invalid input `{source_name}`: {message}")]
    Input { source_name: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Model(String),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config { field: field.to_string(), message: message.into() }
    }

    pub fn input(source_name: &str, message: impl Into<String>) -> Self {
        CliError::Input { source_name: source_name.to_string(), message: message.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn model(e: impl std::fmt::Display) -> Self {
        CliError::Model(e.to_string())
    }

    /// Append a line/column location for TOML errors.
    pub(crate) fn at_span(self, text: &str, span: Option<std::ops::Range<usize>>) -> Self {
        let Some(span) = span else { return self };
        let start = span.start.min(text.len());
        let line = text[..start].matches('\n').count() + 1;
        let col = start - text[..start].rfind('\n').map_or(0, |i| i + 1) + 1;
        match self {
            CliError::Config { field, message } => {
                CliError::Config { field, message: format!("{message} (line {line}, column {col})") }
            }
            other => other,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Input { .. } => "input",
            CliError::Io { .. } => "io",
            CliError::Model(_) => "model",
        }
    }

    /// Validation failures exit with 2, everything else with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Input { .. } => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Config { field, .. } = self {
            v["field"] = json!(field);
        }
        json!({ "error": v })
    }
}
