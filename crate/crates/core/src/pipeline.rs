//! The five stages end to end: maximal matches, anchor chain, gap seeding,
//! chain merge, and stitching.

use rayon::prelude::*;

use crate::anchoring::{build_backbone, threshold_for_longest, AnchorChain};
use crate::chaining::{merge_chain, ResolvedChain};
use crate::error::{Error, Result};
use crate::seqio::{AlignmentRecord, Sequence};
use crate::seeding::{gap_regions, seed_gap, GapRegion, SeedParams};
use crate::stitching::{assemble, ExtensionParams, ScoringScheme};
use crate::suffix_index::{GeneralizedSuffixTree, Match, MatchKind, MmssQuery};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub threshold_floor: usize,
    pub neighborhood_fraction: f64,
    /// Keep seeding new neighborhood chains from the longest unused match
    /// that fits once the first chain stops growing.
    pub restart: bool,
    pub unique_only: bool,
    pub seeds: SeedParams,
    pub extension: ExtensionParams,
    pub scoring: ScoringScheme,
    pub threads: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            threshold_floor: 10,
            neighborhood_fraction: 0.6,
            restart: true,
            unique_only: false,
            seeds: SeedParams::default(),
            extension: ExtensionParams::default(),
            scoring: ScoringScheme::default(),
            threads: 1,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.neighborhood_fraction >= 0.0 && self.neighborhood_fraction.is_finite()) {
            return Err(Error::InvalidParameter("neighborhood fraction must be non-negative".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        self.seeds.validate()?;
        self.extension.validate()?;
        self.scoring.validate()
    }
}

/// Counts collected along the way, for reports and debugging.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineStats {
    pub longest_match: usize,
    pub threshold: usize,
    pub mmss: usize,
    pub anchors: usize,
    pub gaps: usize,
    pub adaptive: usize,
    pub perfect: usize,
    /// No match reached the threshold and the whole pair was seeded instead.
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// `None` when no anchor or seed was found.
    pub record: Option<AlignmentRecord>,
    pub chain: ResolvedChain,
    pub stats: PipelineStats,
}

/// Maximal matches of at least the threshold length, with the threshold and
/// the longest common length.
pub fn threshold_mmss(r1: &[u8], r2: &[u8], cfg: &PipelineConfig) -> (Vec<Match>, usize, usize) {
    let tree = GeneralizedSuffixTree::build(r1, r2);
    let longest = tree.longest_common_length();
    if longest == 0 {
        return (Vec::new(), threshold_for_longest(0, cfg.threshold_floor), 0);
    }
    let threshold = threshold_for_longest(longest, cfg.threshold_floor);
    let mmss = tree.enumerate_mmss(MmssQuery {
        min_len: threshold,
        unique_only: cfg.unique_only,
    });
    (mmss, threshold, longest)
}

fn seed_all(r1: &[u8], r2: &[u8], gaps: &[GapRegion], cfg: &PipelineConfig) -> Result<Vec<Vec<Match>>> {
    let run = |g: &GapRegion| seed_gap(r1, r2, g, &cfg.seeds, &cfg.scoring);
    if cfg.threads <= 1 {
        return Ok(gaps.iter().map(run).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(|| gaps.par_iter().map(run).collect()))
}

/// Aligns `s1` against `s2`.
pub fn align_pair(s1: &Sequence, s2: &Sequence, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let (r1, r2) = (s1.residues(), s2.residues());
    let (mmss, threshold, longest) = threshold_mmss(r1, r2, cfg);
    let mut stats = PipelineStats {
        longest_match: longest,
        threshold,
        mmss: mmss.len(),
        ..PipelineStats::default()
    };

    let anchors = match build_backbone(&mmss, cfg.neighborhood_fraction, cfg.restart) {
        Ok(chain) => chain,
        Err(Error::EmptySet) => {
            stats.fallback = true;
            AnchorChain {
                anchors: Vec::new(),
                origin: Match::exact(0, 0, 0, MatchKind::Mmss),
            }
        }
        Err(e) => return Err(e),
    };
    stats.anchors = anchors.anchors.len();

    let gaps = gap_regions(&anchors.anchors, r1.len(), r2.len());
    stats.gaps = gaps.len();
    let seeds = seed_all(r1, r2, &gaps, cfg)?;
    let chain = merge_chain(&anchors, &seeds);
    stats.adaptive = chain.count(MatchKind::Adaptive);
    stats.perfect = chain.items().iter().filter(|m| matches!(m.kind, MatchKind::Perfect(_))).count();

    let record = match assemble(s1, s2, &chain, &cfg.extension, &cfg.scoring) {
        Ok(r) => Some(r),
        Err(Error::EmptyChain) => None,
        Err(e) => return Err(e),
    };
    Ok(PipelineOutput { record, chain, stats })
}
