use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed FASTA: residue data before any '>' header at line {line}")]
    MalformedFasta { line: usize },

    #[error("illegal residue {residue:?} in record {record:?} at offset {offset}")]
    IllegalResidue {
        record: String,
        offset: usize,
        residue: char,
    },

    #[error("malformed annotation at line {line}: {reason}")]
    MalformedAnnotation { line: usize, reason: String },

    #[error("bad interval at line {line}: start must be strictly less than end")]
    BadInterval { line: usize },

    #[error("exon intervals overlap on sequence {sequence}: {first:?} and {second:?}")]
    Overlap {
        sequence: u8,
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("interval {interval:?} exceeds sequence {sequence} length {length}")]
    OutOfRange {
        sequence: u8,
        interval: (usize, usize),
        length: usize,
    },

    #[error("no maximal match passed the length threshold")]
    EmptySet,

    #[error("no anchors or seeds were found; nothing to stitch")]
    EmptyChain,

    #[error("instance needs {cells} DP cells, above the cap of {cap}")]
    SizeCap { cells: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
