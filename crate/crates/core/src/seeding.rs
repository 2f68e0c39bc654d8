//! Seeds inside the gaps between anchors: adaptive 20-mers with a mismatch
//! budget, then short exact k-mers placed close to features already fixed.

use std::collections::HashMap;
use std::ops::Range;

use crate::chaining::resolve_non_crossing;
use crate::error::{Error, Result};
use crate::seqio::residues_match;
use crate::stitching::ScoringScheme;
use crate::suffix_index::{GeneralizedSuffixTree, Match, MatchKind, Origin};

/// The stretch of both sequences strictly between two consecutive chain
/// items, or between a sequence end and the outermost item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRegion {
    pub seq1: Range<usize>,
    pub seq2: Range<usize>,
    pub left: Option<Match>,
    pub right: Option<Match>,
}

impl GapRegion {
    /// The whole pair, with no flanking items.
    pub fn whole(len1: usize, len2: usize) -> Self {
        Self {
            seq1: 0..len1,
            seq2: 0..len2,
            left: None,
            right: None,
        }
    }

    pub fn cells(&self) -> u128 {
        self.seq1.len() as u128 * self.seq2.len() as u128
    }

    pub fn contains(&self, m: &Match) -> bool {
        self.seq1.start <= m.pos1 && m.end1() <= self.seq1.end && self.seq2.start <= m.pos2 && m.end2() <= self.seq2.end
    }
}

/// Gaps around and between `anchors` (ordered, non-crossing) in which both
/// sequences have at least one residue.
pub fn gap_regions(anchors: &[Match], len1: usize, len2: usize) -> Vec<GapRegion> {
    let mut out = Vec::with_capacity(anchors.len() + 1);
    let mut left: Option<Match> = None;
    for i in 0..=anchors.len() {
        let right = anchors.get(i).copied();
        let (s1, s2) = left.map_or((0, 0), |l| (l.end1(), l.end2()));
        let (e1, e2) = right.map_or((len1, len2), |r| (r.pos1, r.pos2));
        if s1 < e1 && s2 < e2 {
            out.push(GapRegion {
                seq1: s1..e1,
                seq2: s2..e2,
                left,
                right,
            });
        }
        left = right;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedParams {
    pub adaptive_length: usize,
    pub adaptive_max_mismatch: usize,
    /// Strictly decreasing k-mer sizes for the staged exact passes.
    pub perfect_lengths: Vec<usize>,
    pub proximity_fraction: f64,
    /// Gaps with more than this many `len1 * len2` cells are left to the
    /// gap filler unseeded.
    pub max_gap_cells: u128,
}

impl Default for SeedParams {
    fn default() -> Self {
        Self {
            adaptive_length: 20,
            adaptive_max_mismatch: 6,
            perfect_lengths: vec![4, 2],
            proximity_fraction: 1.0 / 3.0,
            max_gap_cells: 1 << 20,
        }
    }
}

impl SeedParams {
    pub fn validate(&self) -> Result<()> {
        if self.adaptive_length == 0 || self.adaptive_max_mismatch >= self.adaptive_length {
            return Err(Error::InvalidParameter(
                "adaptive mismatch budget must be smaller than the seed length".into(),
            ));
        }
        if self.perfect_lengths.contains(&0) || self.perfect_lengths.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidParameter(
                "perfect seed lengths must be positive and strictly decreasing".into(),
            ));
        }
        if self.perfect_lengths.iter().any(|&k| k > u8::MAX as usize) {
            return Err(Error::InvalidParameter("perfect seed lengths must be at most 255".into()));
        }
        if !(0.0..=1.0).contains(&self.proximity_fraction) {
            return Err(Error::InvalidParameter("proximity fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Every window pair inside the gap whose `adaptive_length`-mers differ in
/// at most `adaptive_max_mismatch` positions, found by bounded-mismatch
/// descent through a suffix tree of the two gap slices. Coordinates are
/// absolute; output is sorted by `(pos1, pos2)`.
pub fn find_adaptive_seeds(s1: &[u8], s2: &[u8], gap: &GapRegion, params: &SeedParams) -> Vec<Match> {
    let k = params.adaptive_length;
    let (g1, g2) = (&s1[gap.seq1.clone()], &s2[gap.seq2.clone()]);
    if k == 0 || g1.len() < k || g2.len() < k {
        return Vec::new();
    }
    let tree = GeneralizedSuffixTree::build(g1, g2);
    let mut out = Vec::new();
    for p1 in 0..=g1.len() - k {
        for hit in tree.descend_with_mismatches(&g1[p1..p1 + k], params.adaptive_max_mismatch) {
            if hit.origin == Origin::Second {
                out.push(Match {
                    pos1: gap.seq1.start + p1,
                    pos2: gap.seq2.start + hit.pos,
                    length: k,
                    mismatches: hit.mismatches,
                    kind: MatchKind::Adaptive,
                });
            }
        }
    }
    out
}

/// Shrinks an ungapped pairing to its best-scoring sub-segment. Ties keep
/// the earliest, shortest segment. `None` when no column scores positive.
pub fn trim_to_best(s1: &[u8], s2: &[u8], m: &Match, scoring: &ScoringScheme) -> Option<Match> {
    let (mut best, mut best_range) = (0i64, 0..0);
    let (mut run, mut start) = (0i64, 0);
    for i in 0..m.length {
        if run <= 0 {
            run = 0;
            start = i;
        }
        run += scoring.pair(s1[m.pos1 + i], s2[m.pos2 + i]) as i64;
        if run > best {
            best = run;
            best_range = start..i + 1;
        }
    }
    if best <= 0 {
        return None;
    }
    let (a, b) = (m.pos1 + best_range.start, m.pos2 + best_range.start);
    let len = best_range.len();
    let mismatches = (0..len).filter(|&i| !residues_match(s1[a + i], s2[b + i])).count();
    Some(Match {
        pos1: a,
        pos2: b,
        length: len,
        mismatches,
        kind: m.kind,
    })
}

/// Reduces raw adaptive windows to a non-crossing set: each window is
/// trimmed to its best-scoring core, then crossings are resolved against
/// the gap's flanks.
pub fn select_adaptive_seeds(
    s1: &[u8],
    s2: &[u8],
    gap: &GapRegion,
    raw: &[Match],
    scoring: &ScoringScheme,
) -> Vec<Match> {
    let mut trimmed: Vec<Match> = raw.iter().filter_map(|m| trim_to_best(s1, s2, m, scoring)).collect();
    trimmed.sort_unstable_by_key(|m| (m.pos1, m.pos2, m.length));
    trimmed.dedup();
    resolve_non_crossing(&trimmed, gap.left.as_ref(), gap.right.as_ref())
}

/// Whether `[p, p + k)` starts within `fraction * (b - a)` of either end of
/// `[a, b)`.
fn near_edge(p: usize, k: usize, a: usize, b: usize, fraction: f64) -> bool {
    let from_left = p - a;
    let from_right = b - (p + k);
    from_left.min(from_right) as f64 <= fraction * (b - a) as f64 + 1e-9
}

/// Exact k-mer pairs in a sub-gap obeying the proximity rule in both
/// sequences.
fn kmer_candidates(s1: &[u8], s2: &[u8], r1: Range<usize>, r2: Range<usize>, k: usize, fraction: f64) -> Vec<Match> {
    let exact = |w: &[u8]| w.iter().all(|&c| c != b'N');
    let mut index: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for p2 in r2.start..=r2.end - k {
        let w = &s2[p2..p2 + k];
        if exact(w) && near_edge(p2, k, r2.start, r2.end, fraction) {
            index.entry(w).or_default().push(p2);
        }
    }
    let mut out = Vec::new();
    for p1 in r1.start..=r1.end - k {
        let w = &s1[p1..p1 + k];
        if !exact(w) || !near_edge(p1, k, r1.start, r1.end, fraction) {
            continue;
        }
        if let Some(hits) = index.get(w) {
            out.extend(hits.iter().map(|&p2| Match::exact(p1, p2, k, MatchKind::Perfect(k as u8))));
        }
    }
    out
}

/// Staged exact seeding. For each size in `perfect_lengths` (largest
/// first) the gap is cut into sub-gaps between consecutive fixed features
/// (flanks, `placed` seeds, and exact seeds from earlier passes); in each
/// sub-gap, exact k-mer pairs starting within `proximity_fraction` of the
/// sub-gap width from either enclosing feature are resolved for crossings.
/// Returns only the new exact seeds, ordered by `pos1`.
pub fn find_perfect_seeds(s1: &[u8], s2: &[u8], gap: &GapRegion, placed: &[Match], params: &SeedParams) -> Vec<Match> {
    let mut found: Vec<Match> = Vec::new();
    for &k in &params.perfect_lengths {
        let mut features: Vec<Match> = placed.iter().chain(&found).copied().collect();
        features.sort_unstable_by_key(|m| (m.pos1, m.pos2));
        let mut pass = Vec::new();
        for i in 0..=features.len() {
            let prev = if i == 0 { gap.left } else { Some(features[i - 1]) };
            let next = features.get(i).copied().or(gap.right);
            let a1 = if i == 0 { gap.seq1.start } else { features[i - 1].end1() };
            let a2 = if i == 0 { gap.seq2.start } else { features[i - 1].end2() };
            let (b1, b2) = features.get(i).map_or((gap.seq1.end, gap.seq2.end), |m| (m.pos1, m.pos2));
            if b1 < a1 + k || b2 < a2 + k {
                continue;
            }
            let cands = kmer_candidates(s1, s2, a1..b1, a2..b2, k, params.proximity_fraction);
            pass.extend(resolve_non_crossing(&cands, prev.as_ref(), next.as_ref()));
        }
        found.extend(pass);
    }
    found.sort_unstable_by_key(|m| m.pos1);
    found
}

/// Adaptive then exact seeding of one gap; the result feeds
/// [`crate::chaining::merge_chain`]. Oversized gaps are returned unseeded.
pub fn seed_gap(s1: &[u8], s2: &[u8], gap: &GapRegion, params: &SeedParams, scoring: &ScoringScheme) -> Vec<Match> {
    if gap.cells() > params.max_gap_cells {
        return Vec::new();
    }
    let raw = find_adaptive_seeds(s1, s2, gap, params);
    let mut seeds = select_adaptive_seeds(s1, s2, gap, &raw, scoring);
    let perfect = find_perfect_seeds(s1, s2, gap, &seeds, params);
    seeds.extend(perfect);
    seeds
}
