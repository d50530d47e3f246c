use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate edge {src} -- {dst} (first seen on line {first_line})")]
    DuplicateEdge {
        line: usize,
        first_line: usize,
        src: String,
        dst: String,
    },

    #[error("unknown node: {0}")]
    UnknownNode(String),

    #[error("unknown edge: {0} -- {1}")]
    UnknownEdge(String, String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("empty overlap: the community cover has no overlapping nodes")]
    EmptyOverlap,

    #[error("alpha tuning failed: target {target} nodes, at most {max_reachable} reachable")]
    Tuning { target: usize, max_reachable: usize },

    #[error("undefined metric: {0}")]
    Undefined(String),

    #[error("invalid cover: {0}")]
    Cover(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("extraction failed on all {0} runs")]
    AllRunsFailed(usize),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
