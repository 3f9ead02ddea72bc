use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate circumdisk: support points are collinear")]
    DegenerateCircumdisk,

    #[error("degenerate halfplane: anchor points coincide")]
    DegenerateHalfplane,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("sample too small: {0} distinct points")]
    SampleTooSmall(usize),

    #[error("degenerate sample: all points are collinear")]
    DegenerateSample,

    #[error("degenerate quadrant partition")]
    DegeneratePartition,

    #[error("input has cocircular or collinear points; enable jitter")]
    DegenerateInput,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sampling persistently undersized after {restarts} restarts")]
    SamplingUndersized { restarts: u32 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
