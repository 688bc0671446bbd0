use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("empty interval: lower end {lo} is not below upper end {hi}")]
    EmptyInterval { lo: String, hi: String },
    #[error("vertex count {0} is odd")]
    OddVertexCount(usize),
    #[error("point count d*n = {0} is odd")]
    OddPointCount(usize),
    #[error("{what} = {value} exceeds the cap {cap}")]
    TooLarge { what: &'static str, value: usize, cap: usize },
    #[error("condition (d^2-4dp+4p^2-d)^2 < d^2(d-1) fails for (d, p) = ({d}, {p})")]
    ConditionOneFails { d: u32, p: u32 },
    #[error("point lies outside the domain: {0}")]
    OutsideDomain(String),
    #[error("not a p-orientation: {0}")]
    NotPOrientation(String),
    #[error("not a directed cycle: {0}")]
    NotDirectedCycle(String),
    #[error("in-degree targets sum to {sum}, expected {expected}")]
    TargetSum { sum: usize, expected: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("sampler gave up after {0} attempts")]
    SamplerExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
