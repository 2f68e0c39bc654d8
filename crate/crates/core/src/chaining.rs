//! Merges anchors and seeds into one ordered chain, resolving crossings
//! between candidate seeds by diagonal closeness to the enclosing flanks.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::anchoring::{fits, is_monotone, AnchorChain};
use crate::error::{Error, Result};
use crate::suffix_index::{Match, MatchKind};

/// Matches of any kind, strictly increasing in both sequences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedChain {
    items: Vec<Match>,
}

impl ResolvedChain {
    pub fn new(items: Vec<Match>) -> Result<Self> {
        if !is_monotone(&items) {
            return Err(Error::InvalidParameter(
                "chain items must be non-overlapping and non-crossing".into(),
            ));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[Match] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Match> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn count(&self, kind: MatchKind) -> usize {
        self.items.iter().filter(|m| m.kind == kind).count()
    }
}

pub fn diagonal(m: &Match) -> i64 {
    m.diagonal()
}

/// Diagonal expected at first-sequence coordinate `x`, interpolated
/// between the flanks. With a single flank its diagonal is used as is.
fn target_diagonal(x: f64, left: Option<&Match>, right: Option<&Match>) -> Option<f64> {
    match (left, right) {
        (Some(l), Some(r)) => {
            let (x0, x1) = (l.end1() as f64, r.pos1 as f64);
            let (d0, d1) = (l.diagonal() as f64, r.diagonal() as f64);
            let t = if x1 > x0 { ((x - x0) / (x1 - x0)).clamp(0.0, 1.0) } else { 0.5 };
            Some(d0 + t * (d1 - d0))
        }
        (Some(f), None) | (None, Some(f)) => Some(f.diagonal() as f64),
        (None, None) => None,
    }
}

/// Keeps a maximal non-overlapping, non-crossing subset of `candidates`.
/// Candidates are admitted greedily, closest to the flank diagonal first;
/// ties go to the longer match, then smaller `pos1`, then smaller `pos2`.
/// Without flanks the longest candidate's diagonal is the reference.
/// Output is ordered by `pos1`.
pub fn resolve_non_crossing(candidates: &[Match], left: Option<&Match>, right: Option<&Match>) -> Vec<Match> {
    let Some(longest) = candidates
        .iter()
        .min_by_key(|m| (Reverse(m.length), m.pos1, m.pos2))
    else {
        return Vec::new();
    };
    let fixed = longest.diagonal() as f64;
    let mut keyed: Vec<(f64, &Match)> = candidates
        .iter()
        .map(|m| {
            let mid = m.pos1 as f64 + m.length as f64 / 2.0;
            let target = target_diagonal(mid, left, right).unwrap_or(fixed);
            ((m.diagonal() as f64 - target).abs(), m)
        })
        .collect();
    keyed.sort_by(|(da, a), (db, b)| {
        da.total_cmp(db)
            .then(b.length.cmp(&a.length))
            .then(a.pos1.cmp(&b.pos1))
            .then(a.pos2.cmp(&b.pos2))
    });
    let mut kept: BTreeMap<usize, Match> = BTreeMap::new();
    for (_, m) in keyed {
        if m.length > 0 && fits(&kept, m) {
            kept.insert(m.pos1, *m);
        }
    }
    kept.into_values().collect()
}

/// Combines the anchor chain with per-gap seed lists. Anchors are placed
/// first and never displaced; within each gap adaptive seeds are admitted
/// before the others, and any seed that would overlap or cross an item
/// already placed is dropped.
pub fn merge_chain(anchors: &AnchorChain, gap_seeds: &[Vec<Match>]) -> ResolvedChain {
    let mut chain: BTreeMap<usize, Match> = anchors.anchors.iter().map(|m| (m.pos1, *m)).collect();
    for seeds in gap_seeds {
        let adaptive = seeds.iter().filter(|m| m.kind == MatchKind::Adaptive);
        let rest = seeds.iter().filter(|m| m.kind != MatchKind::Adaptive);
        for m in adaptive.chain(rest) {
            if m.length > 0 && fits(&chain, m) {
                chain.insert(m.pos1, *m);
                debug_assert!(chain.range(..m.pos1).next_back().is_none_or(|(_, p)| p.precedes(m)));
                debug_assert!(chain.range(m.pos1 + 1..).next().is_none_or(|(_, s)| m.precedes(s)));
            }
        }
    }
    let items: Vec<Match> = chain.into_values().collect();
    debug_assert!(is_monotone(&items));
    ResolvedChain { items }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p1: usize, p2: usize, len: usize, kind: MatchKind) -> Match {
        Match::exact(p1, p2, len, kind)
    }

    fn p4(p1: usize, p2: usize) -> Match {
        m(p1, p2, 4, MatchKind::Perfect(4))
    }

    #[test]
    fn diagonal_values() {
        assert_eq!(diagonal(&p4(10, 50)), 40);
        assert_eq!(diagonal(&p4(0, 0)), 0);
        assert_eq!(diagonal(&p4(20, 40)), 20);
    }

    #[test]
    fn closer_diagonal_wins() {
        let l = m(0, 40, 5, MatchKind::Mmss);
        let r = m(100, 140, 5, MatchKind::Mmss);
        let a = p4(10, 50);
        let b = p4(20, 40);
        assert_eq!(resolve_non_crossing(&[b, a], Some(&l), Some(&r)), vec![a]);
    }

    #[test]
    fn compatible_candidates_all_kept() {
        let c = [p4(10, 12), p4(20, 25), p4(30, 31)];
        assert_eq!(resolve_non_crossing(&c, None, None), c.to_vec());
        assert!(resolve_non_crossing(&[], None, None).is_empty());
    }

    #[test]
    fn interpolation_follows_flanks() {
        // Left flank on diagonal 0, right on diagonal 10: near the right end
        // the diagonal-10 candidate is preferred over the diagonal-0 one.
        let l = m(0, 0, 10, MatchKind::Mmss);
        let r = m(100, 110, 10, MatchKind::Mmss);
        let near_right_0 = p4(90, 90);
        let near_right_10 = p4(88, 98);
        assert_eq!(
            resolve_non_crossing(&[near_right_0, near_right_10], Some(&l), Some(&r)),
            vec![near_right_10]
        );
    }

    #[test]
    fn merge_keeps_anchors_and_orders_kinds() {
        let chain = AnchorChain {
            anchors: vec![m(0, 0, 10, MatchKind::Mmss), m(50, 50, 10, MatchKind::Mmss)],
            origin: m(0, 0, 10, MatchKind::Mmss),
        };
        assert_eq!(merge_chain(&chain, &[]).items(), chain.anchors.as_slice());

        let seed = m(20, 20, 20, MatchKind::Adaptive);
        let merged = merge_chain(&chain, &[vec![seed]]);
        assert_eq!(merged.len(), 3);

        // The perfect seed is listed first but crosses the adaptive seed.
        let crossing = p4(22, 12);
        let merged = merge_chain(&chain, &[vec![crossing, seed]]);
        assert_eq!(merged.items(), &[chain.anchors[0], seed, chain.anchors[1]]);
        assert_eq!(merged.count(MatchKind::Perfect(4)), 0);
    }

    #[test]
    fn constructor_validates() {
        assert!(ResolvedChain::new(vec![p4(0, 0), p4(2, 8)]).is_err());
        assert!(ResolvedChain::new(vec![p4(0, 0), p4(4, 4)]).is_ok());
    }
}
