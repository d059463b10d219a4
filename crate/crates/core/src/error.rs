use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("permutations act on different ground sets ({left} vs {right} points)")]
    SizeMismatch { left: usize, right: usize },
    #[error("images do not form a bijection of 0..{len}")]
    NotBijection { len: usize },
    #[error("point {point} is outside 1..={len}")]
    PointOutOfRange { point: usize, len: usize },
    #[error("cannot parse cycle notation `{0}`")]
    Syntax(String),
    #[error("not a valid (sigma, tau) pair: {0}")]
    NotInSampleSpace(String),
    #[error("exhaustive enumeration is only supported for n = 1 (requested n = {n})")]
    Capacity { n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word `{0}`: expected letters b, c (B, C for inverses) or exponents like 1,2,1")]
    Syntax(String),
    #[error("exponent {0} is not 1 or 2")]
    BadExponent(u32),
    #[error("a standard-form word needs at least one syllable")]
    Empty,
    #[error("{0} is conjugate to the identity or a torsion element and has no standard form")]
    NoStandardForm(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} already has an outgoing {label} edge")]
    OutgoingTaken { vertex: usize, label: &'static str },
    #[error("vertex {vertex} already has an incoming {label} edge")]
    IncomingTaken { vertex: usize, label: &'static str },
    #[error("vertex {vertex} is out of range")]
    VertexOutOfRange { vertex: usize },
    #[error("graph is not the word graph of a standard-form word: {0}")]
    NotWordGraph(String),
    #[error("malformed cycle structure: {0}")]
    MalformedCycles(String),
    #[error("homomorphism is not surjective: {0}")]
    NotSurjective(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("Euler characteristic gives non-integral genus (n = {n}, cusps = {cusps})")]
    NonIntegralGenus { n: usize, cusps: usize },
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot serialize report: {0}")]
    Serialize(String),
}
