//! Pairwise local alignment anchored on maximal exact matches from a
//! generalized suffix tree, with adaptive and short perfect seeds bridging
//! the gaps between anchors.
//!
//! ```
//! use mmalign::{align_pair, PipelineConfig, Sequence};
//!
//! let a = Sequence::new("a", "ACGTTGCAAGGCTTACGATCGATCGG").unwrap();
//! let b = Sequence::new("b", "ACGTTGCAAGGCTTACGATCGATCGG").unwrap();
//! let out = align_pair(&a, &b, &PipelineConfig::default()).unwrap();
//! assert_eq!(out.record.unwrap().cigar(), "26M");
//! ```

pub mod anchoring;
pub mod chaining;
pub mod cli;
pub mod error;
pub mod evalbench;
pub mod oracle;
pub mod pipeline;
pub mod seeding;
pub mod seqio;
pub mod stitching;
pub mod suffix_index;

pub use error::{Error, Result};
pub use pipeline::{align_pair, PipelineConfig, PipelineOutput, PipelineStats};
pub use seqio::{AlignmentRecord, ExonAnnotation, ExonInterval, OutputFormat, Sequence};
pub use stitching::{ExtensionParams, ScoringScheme};
pub use suffix_index::{GeneralizedSuffixTree, Match, MatchKind};
