//! Error category and exit-code mapping for the CLI.

use std::fmt;

use polarkit::estimation::EstimationError;
use polarkit::experiments::ExperimentsError;
use polarkit::graph::GraphError;
use polarkit::io::IoError;
use polarkit::meanfield::MeanFieldError;
use polarkit::model::ModelError;
use polarkit::sim::SimError;

/// Machine-readable error category; doubles as the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Bad flags or configuration (exit 2, matching clap's own usage
    /// errors).
    Usage,
    /// Filesystem failure (exit 3).
    Io,
    /// Malformed input file (exit 4).
    Parse,
    /// The data cannot support the requested computation (exit 5).
    Data,
    /// The run finished but its checks failed (exit 6).
    ChecksFailed,
}

impl Category {
    pub fn exit_code(self) -> u8 {
        match self {
            Category::Usage => 2,
            Category::Io => 3,
            Category::Parse => 4,
            Category::Data => 5,
            Category::ChecksFailed => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Usage => "usage",
            Category::Io => "io",
            Category::Parse => "parse",
            Category::Data => "data",
            Category::ChecksFailed => "checks-failed",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            category: Category::Usage,
            message: message.into(),
        }
    }

    pub fn checks_failed(message: impl Into<String>) -> Self {
        CliError {
            category: Category::ChecksFailed,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.category.name(), self.message)
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let category = match &e {
            IoError::Io(_) => Category::Io,
            IoError::Parse { .. } | IoError::Graph { .. } | IoError::Format { .. } => {
                Category::Parse
            }
        };
        CliError {
            category,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            category: Category::Io,
            message: e.to_string(),
        }
    }
}

impl From<EstimationError> for CliError {
    fn from(e: EstimationError) -> Self {
        CliError {
            category: Category::Data,
            message: e.to_string(),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<MeanFieldError> for CliError {
    fn from(e: MeanFieldError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError {
            category: Category::Parse,
            message: e.to_string(),
        }
    }
}

impl From<ExperimentsError> for CliError {
    fn from(e: ExperimentsError) -> Self {
        CliError::usage(e.to_string())
    }
}
