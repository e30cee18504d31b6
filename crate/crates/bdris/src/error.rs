use std::path::{Path, PathBuf};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{field}: {message}")]
    Config { field: String, message: String },
    #[error("{0}")]
    Parse(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] bdris_core::Error),
    #[error("{0}")]
    Verification(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Stable category name for the error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config { .. } | Error::Parse(_) => "config",
            Error::Io { .. } => "io",
            Error::Format(_) => "format",
            Error::Core(_) => "compute",
            Error::Verification(_) => "verification",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Parse(_) => 3,
            Error::Io { .. } => 4,
            Error::Format(_) => 4,
            Error::Core(_) => 5,
            Error::Verification(_) => 6,
        }
    }

    /// One line of `key=value` pairs; the message is quoted and escaped.
    pub fn machine_line(&self) -> String {
        let mut line = format!("error kind={}", self.kind());
        let message = match self {
            Error::Config { field, message } => {
                line.push_str(&format!(" field={field}"));
                message.clone()
            }
            other => other.to_string(),
        };
        line.push_str(&format!(" message={:?}", message.replace('\n', " ")));
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_line_is_single_line() {
        let e = Error::config("geometry.m_x", "must be\nat least 1");
        let line = e.machine_line();
        assert_eq!(
            line,
            "error kind=config field=geometry.m_x message=\"must be at least 1\""
        );
        let e = Error::io(Path::new("/nope"), std::io::Error::other("denied"));
        assert!(!e.machine_line().contains('\n'));
        assert_eq!(e.exit_code(), 4);
    }
}
