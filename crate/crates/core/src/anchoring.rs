//! Anchor selection: the length threshold relative to the longest maximal
//! match, and greedy neighborhood chaining outward from the longest one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::suffix_index::Match;

/// Non-overlapping, non-crossing anchors ordered by `pos1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorChain {
    pub anchors: Vec<Match>,
    /// The longest match the chain was grown from.
    pub origin: Match,
}

impl AnchorChain {
    pub fn is_monotone(&self) -> bool {
        is_monotone(&self.anchors)
    }
}

/// True when consecutive matches are strictly ordered in both sequences.
pub fn is_monotone(items: &[Match]) -> bool {
    items.windows(2).all(|w| w[0].precedes(&w[1]))
}

/// `max(ceil(longest / 3), floor)` over the lengths in `mmss`.
pub fn length_threshold(mmss: &[Match], floor: usize) -> Result<usize> {
    let longest = mmss.iter().map(|m| m.length).max().ok_or(Error::EmptySet)?;
    Ok(threshold_for_longest(longest, floor))
}

/// The same threshold when only the longest length is known.
pub fn threshold_for_longest(longest: usize, floor: usize) -> usize {
    longest.div_ceil(3).max(floor)
}

/// Largest gap admitted next to an anchor of `len` residues.
fn reach(len: usize, fraction: f64) -> usize {
    (fraction * len as f64 + 1e-9).floor().max(0.0) as usize
}

/// Longest first, then smaller `pos1`, then smaller `pos2`.
fn priority(m: &Match) -> (std::cmp::Reverse<usize>, usize, usize) {
    (std::cmp::Reverse(m.length), m.pos1, m.pos2)
}

/// Candidate lookup by start and by end coordinate in the first sequence.
struct Index<'a> {
    mmss: &'a [Match],
    by_start: Vec<usize>,
    by_end: Vec<usize>,
}

impl<'a> Index<'a> {
    fn new(mmss: &'a [Match]) -> Self {
        let mut by_start: Vec<usize> = (0..mmss.len()).collect();
        by_start.sort_by_key(|&i| (mmss[i].pos1, mmss[i].pos2));
        let mut by_end: Vec<usize> = (0..mmss.len()).collect();
        by_end.sort_by_key(|&i| (mmss[i].end1(), mmss[i].pos2));
        Self { mmss, by_start, by_end }
    }

    /// Best candidate starting within `reach` after `a` ends, in both sequences.
    fn right_of(&self, a: &Match, fraction: f64, ok: impl Fn(&Match) -> bool) -> Option<usize> {
        let r = reach(a.length, fraction);
        let lo = self.by_start.partition_point(|&i| self.mmss[i].pos1 < a.end1());
        self.by_start[lo..]
            .iter()
            .take_while(|&&i| self.mmss[i].pos1 <= a.end1() + r)
            .copied()
            .filter(|&i| {
                let c = &self.mmss[i];
                c.pos2 >= a.end2() && c.pos2 - a.end2() <= r && ok(c)
            })
            .min_by_key(|&i| priority(&self.mmss[i]))
    }

    /// Best candidate ending within `reach` before `a` starts, in both sequences.
    fn left_of(&self, a: &Match, fraction: f64, ok: impl Fn(&Match) -> bool) -> Option<usize> {
        let r = reach(a.length, fraction);
        let from = a.pos1.saturating_sub(r);
        let lo = self.by_end.partition_point(|&i| self.mmss[i].end1() < from);
        self.by_end[lo..]
            .iter()
            .take_while(|&&i| self.mmss[i].end1() <= a.pos1)
            .copied()
            .filter(|&i| {
                let c = &self.mmss[i];
                c.end2() <= a.pos2 && a.pos2 - c.end2() <= r && ok(c)
            })
            .min_by_key(|&i| priority(&self.mmss[i]))
    }
}

/// Greedy chain grown in both directions from the longest match. At each
/// step the chain's current end admits the longest candidate that starts
/// (or, on the left, ends) within `fraction` of the current anchor's length
/// in both sequences. A side stops when nothing qualifies.
pub fn build_neighborhood_chain(mmss: &[Match], fraction: f64) -> Result<AnchorChain> {
    let index = Index::new(mmss);
    let origin_idx = (0..mmss.len()).min_by_key(|&i| priority(&mmss[i])).ok_or(Error::EmptySet)?;
    let origin = mmss[origin_idx];
    let mut chain = BTreeMap::new();
    chain.insert(origin.pos1, origin);
    grow(&index, origin, fraction, &mut chain);
    let anchors: Vec<Match> = chain.into_values().collect();
    debug_assert!(is_monotone(&anchors));
    Ok(AnchorChain { anchors, origin })
}

/// The pipeline backbone. Starts with [`build_neighborhood_chain`]; with
/// `restart`, every remaining match (longest first) that fits between the
/// anchors already chosen seeds a further neighborhood chain.
pub fn build_backbone(mmss: &[Match], fraction: f64, restart: bool) -> Result<AnchorChain> {
    let first = build_neighborhood_chain(mmss, fraction)?;
    if !restart {
        return Ok(first);
    }
    let index = Index::new(mmss);
    let mut chain: BTreeMap<usize, Match> = first.anchors.iter().map(|m| (m.pos1, *m)).collect();
    let mut order: Vec<usize> = (0..mmss.len()).collect();
    order.sort_by_key(|&i| priority(&mmss[i]));
    for i in order {
        let m = mmss[i];
        if fits(&chain, &m) {
            chain.insert(m.pos1, m);
            grow(&index, m, fraction, &mut chain);
        }
    }
    let anchors: Vec<Match> = chain.into_values().collect();
    debug_assert!(is_monotone(&anchors));
    Ok(AnchorChain {
        anchors,
        origin: first.origin,
    })
}

/// Whether `m` can join the chain without overlapping or crossing any member.
pub(crate) fn fits(chain: &BTreeMap<usize, Match>, m: &Match) -> bool {
    if let Some((_, p)) = chain.range(..=m.pos1).next_back() {
        if !p.precedes(m) {
            return false;
        }
    }
    if let Some((_, s)) = chain.range(m.pos1 + 1..).next() {
        if !m.precedes(s) {
            return false;
        }
    }
    true
}

fn grow(index: &Index<'_>, from: Match, fraction: f64, chain: &mut BTreeMap<usize, Match>) {
    let mut cur = from;
    while let Some(i) = index.right_of(&cur, fraction, |c| fits(chain, c)) {
        cur = index.mmss[i];
        chain.insert(cur.pos1, cur);
    }
    let mut cur = from;
    while let Some(i) = index.left_of(&cur, fraction, |c| fits(chain, c)) {
        cur = index.mmss[i];
        chain.insert(cur.pos1, cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix_index::MatchKind;

    fn m(p1: usize, p2: usize, len: usize) -> Match {
        Match::exact(p1, p2, len, MatchKind::Mmss)
    }

    #[test]
    fn threshold_values() {
        assert_eq!(length_threshold(&[m(0, 0, 30)], 1).unwrap(), 10);
        assert_eq!(length_threshold(&[m(0, 0, 5)], 1).unwrap(), 2);
        assert_eq!(length_threshold(&[m(0, 0, 5)], 10).unwrap(), 10);
        assert!(matches!(length_threshold(&[], 1), Err(Error::EmptySet)));
    }

    #[test]
    fn sixty_percent_boundary() {
        let a = m(900, 1900, 100);
        let ok = build_neighborhood_chain(&[a, m(1055, 2050, 20)], 0.6).unwrap();
        assert_eq!(ok.anchors.len(), 2);
        let rejected = build_neighborhood_chain(&[a, m(1070, 2061, 20)], 0.6).unwrap();
        assert_eq!(rejected.anchors, vec![a]);
        // Exactly 60 on both axes is still inside the neighborhood.
        let edge = build_neighborhood_chain(&[a, m(1060, 2060, 20)], 0.6).unwrap();
        assert_eq!(edge.anchors.len(), 2);
    }

    #[test]
    fn overlap_and_far_candidates_rejected() {
        let chain = build_neighborhood_chain(&[m(0, 0, 50), m(40, 60, 20), m(120, 80, 30)], 0.6).unwrap();
        assert_eq!(chain.anchors, vec![m(0, 0, 50)]);
        assert_eq!(chain.origin, m(0, 0, 50));
    }

    #[test]
    fn grows_both_ways_and_prefers_longest() {
        let mmss = [
            m(100, 100, 50),
            m(155, 160, 10),
            m(160, 158, 12),
            m(80, 82, 15),
            m(63, 64, 9),
        ];
        let chain = build_neighborhood_chain(&mmss, 0.6).unwrap();
        // Right: (160,158,12) beats (155,160,10); then (155,..) is behind it.
        // Left: (80,82,15) ends at 95/97; then (63,64,9) ends 8 and 9 short of it.
        assert_eq!(chain.anchors, vec![m(63, 64, 9), m(80, 82, 15), m(100, 100, 50), m(160, 158, 12)]);
        assert!(chain.is_monotone());
    }

    #[test]
    fn tie_break_smaller_pos1() {
        let mmss = [m(0, 0, 10), m(14, 12, 5), m(12, 14, 5)];
        let chain = build_neighborhood_chain(&mmss, 0.6).unwrap();
        assert_eq!(chain.anchors, vec![m(0, 0, 10), m(12, 14, 5)]);
    }

    #[test]
    fn backbone_restarts_past_breaks() {
        let mmss = [m(0, 0, 50), m(500, 510, 40), m(560, 570, 20), m(300, 600, 30)];
        let single = build_neighborhood_chain(&mmss, 0.6).unwrap();
        assert_eq!(single.anchors.len(), 1);
        let backbone = build_backbone(&mmss, 0.6, true).unwrap();
        assert_eq!(backbone.anchors, vec![m(0, 0, 50), m(500, 510, 40), m(560, 570, 20)]);
        assert!(backbone.is_monotone());
    }
}
