//! Final stitching: ungapped X-drop extension of chain items, banded affine
//! gap filling between them, and assembly of the alignment record.

use crate::chaining::ResolvedChain;
use crate::error::{Error, Result};
use crate::seqio::{push_run, residues_match, AlignmentRecord, Block, Op, Sequence};
use crate::suffix_index::{hamming, Match};

/// Linear-in-length affine scores. A gap run of length `L` costs
/// `gap_open + (L - 1) * gap_extend`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoringScheme {
    pub match_score: i32,
    pub mismatch: i32,
    pub gap_open: i32,
    pub gap_extend: i32,
}

impl Default for ScoringScheme {
    fn default() -> Self {
        Self {
            match_score: 1,
            mismatch: -1,
            gap_open: -2,
            gap_extend: -1,
        }
    }
}

impl ScoringScheme {
    pub fn new(match_score: i32, mismatch: i32, gap_open: i32, gap_extend: i32) -> Result<Self> {
        let s = Self {
            match_score,
            mismatch,
            gap_open,
            gap_extend,
        };
        s.validate()?;
        Ok(s)
    }

    /// Every gap column costs `gap`.
    pub fn linear(match_score: i32, mismatch: i32, gap: i32) -> Result<Self> {
        Self::new(match_score, mismatch, gap, gap)
    }

    pub fn validate(&self) -> Result<()> {
        if self.match_score <= 0 {
            return Err(Error::InvalidParameter("match score must be positive".into()));
        }
        if self.mismatch >= 0 {
            return Err(Error::InvalidParameter("mismatch score must be negative".into()));
        }
        if self.gap_open >= 0 || self.gap_extend >= 0 {
            return Err(Error::InvalidParameter("gap penalties must be negative".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn pair(&self, a: u8, b: u8) -> i32 {
        if residues_match(a, b) {
            self.match_score
        } else {
            self.mismatch
        }
    }

    pub fn gap(&self, len: usize) -> i64 {
        if len == 0 {
            0
        } else {
            self.gap_open as i64 + (len as i64 - 1) * self.gap_extend as i64
        }
    }

    /// Score of an alignment given as runs.
    pub fn score_blocks(&self, blocks: &[Block]) -> i64 {
        blocks
            .iter()
            .map(|b| match b.op {
                Op::Match => b.len as i64 * self.match_score as i64,
                Op::Mismatch => b.len as i64 * self.mismatch as i64,
                Op::Insert1 | Op::Insert2 => self.gap(b.len),
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionParams {
    /// Extension in one direction stops once the running score falls this
    /// far below its best.
    pub x_drop: i32,
    /// Extra half-width added to the gap-fill band.
    pub band_pad: usize,
}

impl Default for ExtensionParams {
    fn default() -> Self {
        Self {
            x_drop: 10,
            band_pad: 16,
        }
    }
}

impl ExtensionParams {
    pub fn validate(&self) -> Result<()> {
        if self.x_drop <= 0 {
            return Err(Error::InvalidParameter("x-drop must be positive".into()));
        }
        Ok(())
    }
}

/// Coordinate limits an extension must stay within (half-open on the high side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub lo1: usize,
    pub lo2: usize,
    pub hi1: usize,
    pub hi2: usize,
}

/// Grows `m` one column at a time on each side, stopping on the X-drop
/// criterion or a bound, and keeps the extension up to the running maximum.
pub fn extend_ungapped(
    s1: &[u8],
    s2: &[u8],
    m: &Match,
    bounds: Bounds,
    params: &ExtensionParams,
    scoring: &ScoringScheme,
) -> Match {
    debug_assert!(bounds.lo1 <= m.pos1 && bounds.lo2 <= m.pos2);
    debug_assert!(m.end1() <= bounds.hi1 && m.end2() <= bounds.hi2);
    let x_drop = params.x_drop as i64;

    let right_room = (bounds.hi1 - m.end1()).min(bounds.hi2 - m.end2());
    let right = best_run(
        (0..right_room).map(|k| scoring.pair(s1[m.end1() + k], s2[m.end2() + k])),
        x_drop,
    );
    let left_room = (m.pos1 - bounds.lo1).min(m.pos2 - bounds.lo2);
    let left = best_run(
        (1..=left_room).map(|k| scoring.pair(s1[m.pos1 - k], s2[m.pos2 - k])),
        x_drop,
    );

    let pos1 = m.pos1 - left;
    let pos2 = m.pos2 - left;
    let length = m.length + left + right;
    Match {
        pos1,
        pos2,
        length,
        mismatches: hamming(&s1[pos1..pos1 + length], &s2[pos2..pos2 + length]),
        kind: m.kind,
    }
}

/// Length of the shortest prefix reaching the maximum running score before
/// the X-drop criterion fires.
fn best_run(scores: impl Iterator<Item = i32>, x_drop: i64) -> usize {
    let mut run = 0i64;
    let mut best = 0i64;
    let mut best_len = 0;
    for (k, s) in scores.enumerate() {
        run += s as i64;
        if run > best {
            best = run;
            best_len = k + 1;
        } else if best - run >= x_drop {
            break;
        }
    }
    best_len
}

/// How a gap fill was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillMode {
    /// One side empty; a single gap run.
    Trivial,
    /// The banded result is provably optimal.
    Banded,
    /// The band could hide a better path; recomputed over the full matrix.
    Unbanded,
    /// Full recomputation skipped because it would exceed the cell cap.
    BandedCapped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapFill {
    pub blocks: Vec<Block>,
    pub score: i64,
    pub mode: FillMode,
}

/// Largest unbanded recomputation the gap filler will attempt.
pub const UNBANDED_CELL_CAP: usize = 200_000_000;

/// Global alignment of two residual slices. See [`fill_gap_scored`].
pub fn fill_gap(a: &[u8], b: &[u8], scoring: &ScoringScheme, band_pad: usize) -> Vec<Block> {
    fill_gap_scored(a, b, scoring, band_pad).blocks
}

/// Global affine-gap alignment of `a` against `b`, restricted to diagonals
/// within `|len(a) - len(b)| + band_pad` of the main one. When a path
/// leaving the band could still outscore the banded optimum, the fill is
/// recomputed without the band.
pub fn fill_gap_scored(a: &[u8], b: &[u8], scoring: &ScoringScheme, band_pad: usize) -> GapFill {
    if a.is_empty() || b.is_empty() {
        let mut blocks = Vec::new();
        push_run(&mut blocks, Op::Insert1, a.len());
        push_run(&mut blocks, Op::Insert2, b.len());
        let score = scoring.score_blocks(&blocks);
        return GapFill {
            blocks,
            score,
            mode: FillMode::Trivial,
        };
    }
    let (n1, n2) = (a.len(), b.len());
    let delta = n1.abs_diff(n2);
    let w = delta + band_pad;
    let full = n1.max(n2);
    if w >= full {
        let (blocks, score) = global_affine(a, b, scoring, full);
        return GapFill {
            blocks,
            score,
            mode: FillMode::Banded,
        };
    }
    let (blocks, score) = global_affine(a, b, scoring, w);
    if score >= out_of_band_bound(n1, n2, band_pad, scoring) {
        return GapFill {
            blocks,
            score,
            mode: FillMode::Banded,
        };
    }
    if (n1 + 1).saturating_mul(2 * full + 1) > UNBANDED_CELL_CAP {
        return GapFill {
            blocks,
            score,
            mode: FillMode::BandedCapped,
        };
    }
    let (blocks, score) = global_affine(a, b, scoring, full);
    GapFill {
        blocks,
        score,
        mode: FillMode::Unbanded,
    }
}

/// Upper bound on the score of any global path that leaves the band.
/// Such a path needs at least `|n1 - n2| + 2 * pad + 2` gap columns in at
/// least two runs, and every remaining pair scores at most a match.
fn out_of_band_bound(n1: usize, n2: usize, pad: usize, scoring: &ScoringScheme) -> i64 {
    let g = (n1.abs_diff(n2) + 2 * pad + 2) as i64;
    let total = (n1 + n2) as i64;
    if g > total {
        return i64::MIN;
    }
    let pairs = (total - g) / 2;
    let open = scoring.gap_open as i64;
    let ext = scoring.gap_extend as i64;
    let gaps = (2 * open + (g - 2) * ext).max(g * open);
    pairs * scoring.match_score as i64 + gaps
}

const NEG: i32 = i32::MIN / 4;
const SRC_DIAG: u8 = 0;
const SRC_E: u8 = 1;
const SRC_F: u8 = 2;
const E_EXT: u8 = 4;
const F_EXT: u8 = 8;

/// Banded Gotoh global alignment; cells with `|j - i| > w` are excluded.
/// `E` ends in an `Insert2` column, `F` in an `Insert1` column.
fn global_affine(a: &[u8], b: &[u8], sc: &ScoringScheme, w: usize) -> (Vec<Block>, i64) {
    let (n1, n2) = (a.len(), b.len());
    let width = 2 * w + 1;
    let mut tb = vec![0u8; (n1 + 1) * width];
    let mut prev_h = vec![NEG; width];
    let mut prev_f = vec![NEG; width];
    let mut cur_h = vec![NEG; width];
    let mut cur_e = vec![NEG; width];
    let mut cur_f = vec![NEG; width];
    let (open, ext) = (sc.gap_open, sc.gap_extend);

    // Row 0.
    prev_h[w] = 0;
    for j in 1..=n2.min(w) {
        let o = j + w;
        let e = if j == 1 { open } else { prev_h[o - 1] + ext };
        prev_h[o] = e;
        tb[o] = SRC_E | if j > 1 { E_EXT } else { 0 };
    }

    for i in 1..=n1 {
        cur_h.fill(NEG);
        cur_e.fill(NEG);
        cur_f.fill(NEG);
        let lo = i.saturating_sub(w);
        let hi = n2.min(i + w);
        for j in lo..=hi {
            let o = j + w - i;
            let mut bits = 0u8;
            // Vertical: (i - 1, j) sits at offset o + 1 of the previous row.
            let mut f = NEG;
            if o + 1 < width && prev_h[o + 1] > NEG {
                let from_open = prev_h[o + 1] + open;
                let from_ext = if prev_f[o + 1] > NEG { prev_f[o + 1] + ext } else { NEG };
                if from_ext > from_open {
                    f = from_ext;
                    bits |= F_EXT;
                } else {
                    f = from_open;
                }
            }
            let mut e = NEG;
            if j > lo && o >= 1 && cur_h[o - 1] > NEG {
                let from_open = cur_h[o - 1] + open;
                let from_ext = if cur_e[o - 1] > NEG { cur_e[o - 1] + ext } else { NEG };
                if from_ext > from_open {
                    e = from_ext;
                    bits |= E_EXT;
                } else {
                    e = from_open;
                }
            }
            let diag = if j >= 1 && prev_h[o] > NEG {
                prev_h[o] + sc.pair(a[i - 1], b[j - 1])
            } else {
                NEG
            };
            let (h, src) = if diag >= f && diag >= e {
                (diag, SRC_DIAG)
            } else if f >= e {
                (f, SRC_F)
            } else {
                (e, SRC_E)
            };
            cur_h[o] = h;
            cur_e[o] = e;
            cur_f[o] = f;
            tb[i * width + o] = bits | src;
        }
        std::mem::swap(&mut prev_h, &mut cur_h);
        std::mem::swap(&mut prev_f, &mut cur_f);
    }
    let score = prev_h[n2 + w - n1] as i64;

    let mut rev: Vec<Op> = Vec::with_capacity(n1 + n2);
    let (mut i, mut j) = (n1, n2);
    #[derive(PartialEq)]
    enum State {
        H,
        E,
        F,
    }
    let mut state = State::H;
    while i > 0 || j > 0 {
        let cell = tb[i * width + (j + w - i)];
        match state {
            State::H => match cell & 3 {
                SRC_DIAG => {
                    rev.push(if residues_match(a[i - 1], b[j - 1]) { Op::Match } else { Op::Mismatch });
                    i -= 1;
                    j -= 1;
                }
                SRC_E => state = State::E,
                _ => state = State::F,
            },
            State::E => {
                rev.push(Op::Insert2);
                j -= 1;
                if cell & E_EXT == 0 {
                    state = State::H;
                }
            }
            State::F => {
                rev.push(Op::Insert1);
                i -= 1;
                if cell & F_EXT == 0 {
                    state = State::H;
                }
            }
        }
    }
    let mut blocks = Vec::new();
    for op in rev.into_iter().rev() {
        push_run(&mut blocks, op, 1);
    }
    (blocks, score)
}

/// Extends every chain item left to right, fills the residual gaps, and
/// returns the stitched local alignment. Unaligned sequence tails beyond
/// the outermost extended items are not part of the result.
pub fn assemble(
    s1: &Sequence,
    s2: &Sequence,
    chain: &ResolvedChain,
    params: &ExtensionParams,
    scoring: &ScoringScheme,
) -> Result<AlignmentRecord> {
    let items = chain.items();
    if items.is_empty() {
        return Err(Error::EmptyChain);
    }
    let (r1, r2) = (s1.residues(), s2.residues());
    let mut extended: Vec<Match> = Vec::with_capacity(items.len());
    let (mut lo1, mut lo2) = (0, 0);
    for (i, m) in items.iter().enumerate() {
        let (hi1, hi2) = items.get(i + 1).map_or((r1.len(), r2.len()), |n| (n.pos1, n.pos2));
        let bounds = Bounds { lo1, lo2, hi1, hi2 };
        let e = extend_ungapped(r1, r2, m, bounds, params, scoring);
        lo1 = e.end1();
        lo2 = e.end2();
        extended.push(e);
    }

    let mut blocks = Vec::new();
    for (i, e) in extended.iter().enumerate() {
        if i > 0 {
            let p = &extended[i - 1];
            let fill = fill_gap(&r1[p.end1()..e.pos1], &r2[p.end2()..e.pos2], scoring, params.band_pad);
            for b in fill {
                push_run(&mut blocks, b.op, b.len);
            }
        }
        for k in 0..e.length {
            let op = if residues_match(r1[e.pos1 + k], r2[e.pos2 + k]) {
                Op::Match
            } else {
                Op::Mismatch
            };
            push_run(&mut blocks, op, 1);
        }
    }
    let first = extended[0];
    let score = scoring.score_blocks(&blocks);
    let record = AlignmentRecord::from_blocks(s1.id.clone(), s2.id.clone(), blocks, first.pos1, first.pos2, score);
    debug_assert!(record.replay(r1, r2).is_ok());
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix_index::MatchKind;

    fn sc() -> ScoringScheme {
        ScoringScheme::default()
    }

    fn open() -> Bounds {
        Bounds {
            lo1: 0,
            lo2: 0,
            hi1: usize::MAX,
            hi2: usize::MAX,
        }
    }

    #[test]
    fn identical_sequences_extend_fully() {
        let s = b"AAATTTGGG";
        let m = Match::exact(3, 3, 3, MatchKind::Mmss);
        let b = Bounds {
            hi1: 9,
            hi2: 9,
            ..open()
        };
        let e = extend_ungapped(s, s, &m, b, &ExtensionParams::default(), &sc());
        assert_eq!(e.triple(), (0, 0, 9));
        assert_eq!(e.mismatches, 0);
    }

    #[test]
    fn mismatch_wall_stops_extension() {
        let s1 = b"CAAAAG";
        let s2 = b"GAAAAC";
        let m = Match::exact(2, 2, 2, MatchKind::Mmss);
        let p = ExtensionParams { x_drop: 1, band_pad: 0 };
        let b = Bounds { hi1: 6, hi2: 6, ..open() };
        let e = extend_ungapped(s1, s2, &m, b, &p, &sc());
        assert_eq!(e.triple(), (1, 1, 4));
    }

    #[test]
    fn extension_respects_bounds() {
        let s = b"ACGTACGTAC";
        let m = Match::exact(4, 4, 2, MatchKind::Adaptive);
        let b = Bounds { lo1: 3, lo2: 2, hi1: 8, hi2: 10 };
        let e = extend_ungapped(s, s, &m, b, &ExtensionParams::default(), &sc());
        assert_eq!(e.triple(), (3, 3, 5));
        assert_eq!(e.kind, MatchKind::Adaptive);
    }

    #[test]
    fn gap_fill_small_fixture() {
        let f = fill_gap_scored(b"ACG", b"AG", &sc(), 16);
        assert_eq!(
            f.blocks,
            vec![Block::new(Op::Match, 1), Block::new(Op::Insert1, 1), Block::new(Op::Match, 1)]
        );
        assert_eq!(f.score, 0);
    }

    #[test]
    fn gap_fill_trivial_sides() {
        assert_eq!(fill_gap(b"", b"TT", &sc(), 16), vec![Block::new(Op::Insert2, 2)]);
        assert_eq!(fill_gap(b"TTT", b"", &sc(), 16), vec![Block::new(Op::Insert1, 3)]);
        assert!(fill_gap(b"", b"", &sc(), 16).is_empty());
    }

    #[test]
    fn narrow_band_falls_back_when_needed() {
        // Best path shifts five diagonals and back; a zero pad cannot hold it.
        let a = b"CCCCCAAAAAAAAAAAAAAAAAAAAGGGGG";
        let b = b"AAAAAAAAAAAAAAAAAAAACCCCCGGGGG";
        let banded = fill_gap_scored(a, b, &sc(), 0);
        let full = fill_gap_scored(a, b, &sc(), 64);
        assert_eq!(banded.score, full.score);
        assert_eq!(banded.mode, FillMode::Unbanded);
    }

    #[test]
    fn scheme_validation() {
        assert!(ScoringScheme::new(0, -1, -2, -1).is_err());
        assert!(ScoringScheme::new(1, 0, -2, -1).is_err());
        assert!(ScoringScheme::new(1, -1, 0, -1).is_err());
        assert!(ScoringScheme::linear(3, -3, -2).is_ok());
        assert_eq!(sc().gap(3), -4);
    }
}
