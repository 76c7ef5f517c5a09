//! Crawler, corpus ingestion, file formats, and the analysis pipeline
//! behind the `torcontent` command.

pub mod address;
pub mod corpus;
pub mod crawler;
pub mod formats;
pub mod pipeline;
pub mod profiles;
pub mod records;
pub mod report;

pub use torcontent_core as core;

use thiserror::Error;

/// Failure of a pipeline step, classified by the exit code it maps to.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl Error {
    pub fn io(path: impl std::fmt::Display, e: std::io::Error) -> Self {
        Error::Data(format!("{path}: {e}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Data(_) => 2,
            Error::Numeric(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
