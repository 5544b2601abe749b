use serde_json::json;

/// A failure reported as JSON on stderr with exit status 2.
#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: "config", message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: "io", message: message.into() }
    }

    pub fn to_json(&self) -> String {
        json!({ "schema_version": 1, "error": { "kind": self.kind, "message": self.message } }).to_string()
    }
}

impl From<sbo_core::Error> for CliError {
    fn from(e: sbo_core::Error) -> Self {
        Self { kind: "invalid_input", message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::io(e.to_string())
    }
}
