use thiserror::Error;

use crate::transforms::TransformKind;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("ring element is not in the field ideal (transform mismatch or corrupted data)")]
    NotInIdeal,

    #[error("matrix is singular")]
    Singular,

    #[error("k + r = {total} exceeds the {points} available Cauchy points")]
    TooManySymbols { total: usize, points: usize },

    #[error("invalid code parameters: {0}")]
    InvalidParams(String),

    #[error("buffer shape mismatch: {0}")]
    BufferShape(String),

    #[error("invalid survivor set: {0}")]
    InvalidSurvivors(String),

    #[error("transform mismatch: shards use {stored:?}, decoder asked for {requested:?}")]
    TransformMismatch {
        stored: TransformKind,
        requested: TransformKind,
    },

    #[error("need {needed} shards, only {available} usable")]
    InsufficientShards { needed: usize, available: usize },

    #[error("shard headers disagree: {0}")]
    HeaderMismatch(String),

    #[error("header checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    ChecksumError { stored: u32, computed: u32 },

    #[error("malformed shard header: {0}")]
    MalformedHeader(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
