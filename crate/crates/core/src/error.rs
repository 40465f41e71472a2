use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph parameters: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("contraction width {width} exceeds cap {cap}")]
    WidthExceeded { width: u32, cap: u32 },

    #[error("contraction needs {needed} bytes, budget is {budget}")]
    MemoryExceeded { needed: u64, budget: u64 },

    #[error("state space 2^{n} exceeds the exhaustive-enumeration cap of 2^{cap}")]
    StateTooLarge { n: u32, cap: u32 },

    #[error("subgraph has {n} vertices, canonicalisation cap is {cap}")]
    SubgraphTooLarge { n: usize, cap: usize },

    #[error("cycle enumeration length {len} exceeds cap {cap}")]
    CycleLengthExceeded { len: u32, cap: u32 },

    #[error("expectation table lacks classes: {}", .0.join(", "))]
    MissingClasses(Vec<String>),

    #[error("instance n={n} #{index}: {source}")]
    Instance {
        n: u32,
        index: usize,
        source: Box<Error>,
    },

    #[error("external solver protocol violation: {0}")]
    ExternalProtocol(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the failure is a capacity refusal (width or memory), as
    /// opposed to bad input or a broken subprocess.
    pub fn is_capacity(&self) -> bool {
        match self {
            Error::WidthExceeded { .. }
            | Error::MemoryExceeded { .. }
            | Error::StateTooLarge { .. }
            | Error::SubgraphTooLarge { .. }
            | Error::CycleLengthExceeded { .. } => true,
            Error::Instance { source, .. } => source.is_capacity(),
            _ => false,
        }
    }
}
