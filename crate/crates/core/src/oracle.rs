//! Quadratic reference implementations used to check the heuristic
//! pipeline: affine-gap Smith-Waterman and all-pairs maximal exact matches.

use crate::error::{Error, Result};
use crate::seqio::{push_run, residues_match, AlignmentRecord, Op, Sequence};
use crate::stitching::ScoringScheme;
use crate::suffix_index::{Match, MatchKind};

/// Default cap on `(m + 1) * (n + 1)` for the local-alignment oracle.
pub const DEFAULT_CELL_CAP: u128 = 4_000_000;

/// Default cap on `m * n` for the brute-force match enumerator.
pub const MEM_PAIR_CAP: u128 = 1_000_000;

const STOP: u8 = 0;
const DIAG: u8 = 1;
const FROM_E: u8 = 2;
const FROM_F: u8 = 3;
const E_EXT: u8 = 4;
const F_EXT: u8 = 8;

/// Best local score ending at every cell plus the move that produced it.
#[derive(Debug, Clone)]
pub struct DpMatrix {
    pub rows: usize,
    pub cols: usize,
    pub scores: Vec<i32>,
    pub moves: Vec<u8>,
}

impl DpMatrix {
    pub fn score(&self, i: usize, j: usize) -> i32 {
        self.scores[i * self.cols + j]
    }
}

/// Fills the three-state Gotoh matrices for local alignment. `E` ends in a
/// gap in the first sequence (an `Insert2` column), `F` in an `Insert1`.
pub fn local_matrix(a: &[u8], b: &[u8], sc: &ScoringScheme, cap: u128) -> Result<DpMatrix> {
    let rows = a.len() + 1;
    let cols = b.len() + 1;
    let cells = rows as u128 * cols as u128;
    if cells > cap {
        return Err(Error::SizeCap { cells, cap });
    }
    let neg = i32::MIN / 4;
    let mut scores = vec![0i32; rows * cols];
    let mut moves = vec![STOP; rows * cols];
    let mut f_col = vec![neg; cols];
    for i in 1..rows {
        let mut e = neg;
        for j in 1..cols {
            let mut mv = 0u8;
            let left = scores[i * cols + j - 1];
            let (e_open, e_ext) = (left + sc.gap_open, e + sc.gap_extend);
            e = if e_ext > e_open {
                mv |= E_EXT;
                e_ext
            } else {
                e_open
            };
            let up = scores[(i - 1) * cols + j];
            let (f_open, f_ext) = (up + sc.gap_open, f_col[j] + sc.gap_extend);
            f_col[j] = if f_ext > f_open {
                mv |= F_EXT;
                f_ext
            } else {
                f_open
            };
            let diag = scores[(i - 1) * cols + j - 1] + sc.pair(a[i - 1], b[j - 1]);
            let (h, src) = if diag <= 0 && e <= 0 && f_col[j] <= 0 {
                (0, STOP)
            } else if diag >= e && diag >= f_col[j] {
                (diag, DIAG)
            } else if f_col[j] >= e {
                (f_col[j], FROM_F)
            } else {
                (e, FROM_E)
            };
            scores[i * cols + j] = h;
            moves[i * cols + j] = mv | src;
        }
    }
    Ok(DpMatrix {
        rows,
        cols,
        scores,
        moves,
    })
}

/// Optimal local alignment under affine gaps. Fails with `SizeCap` when
/// the matrix would exceed `cap` cells.
pub fn smith_waterman(s1: &Sequence, s2: &Sequence, scoring: &ScoringScheme, cap: u128) -> Result<(i64, AlignmentRecord)> {
    let (a, b) = (s1.residues(), s2.residues());
    let dp = local_matrix(a, b, scoring, cap)?;
    let (mut bi, mut bj, mut best) = (0, 0, 0);
    for i in 1..dp.rows {
        for j in 1..dp.cols {
            if dp.score(i, j) > best {
                best = dp.score(i, j);
                bi = i;
                bj = j;
            }
        }
    }
    let mut rev = Vec::new();
    let (mut i, mut j) = (bi, bj);
    let mut state = 0u8; // 0 = H, 1 = E, 2 = F
    loop {
        let mv = dp.moves[i * dp.cols + j];
        match state {
            0 => match mv & 3 {
                STOP => break,
                DIAG => {
                    rev.push(if residues_match(a[i - 1], b[j - 1]) { Op::Match } else { Op::Mismatch });
                    i -= 1;
                    j -= 1;
                }
                FROM_E => state = 1,
                _ => state = 2,
            },
            1 => {
                rev.push(Op::Insert2);
                j -= 1;
                if mv & E_EXT == 0 {
                    state = 0;
                }
            }
            _ => {
                rev.push(Op::Insert1);
                i -= 1;
                if mv & F_EXT == 0 {
                    state = 0;
                }
            }
        }
    }
    let mut blocks = Vec::new();
    for op in rev.into_iter().rev() {
        push_run(&mut blocks, op, 1);
    }
    let record = AlignmentRecord::from_blocks(s1.id.clone(), s2.id.clone(), blocks, i, j, best as i64);
    debug_assert_eq!(scoring.score_blocks(&record.blocks), best as i64);
    Ok((best as i64, record))
}

/// All maximal exact matches by direct extension from every left-maximal
/// start. Sorted by `(pos1, pos2)`.
pub fn brute_force_mems(s1: &[u8], s2: &[u8]) -> Result<Vec<Match>> {
    let cells = s1.len() as u128 * s2.len() as u128;
    if cells > MEM_PAIR_CAP {
        return Err(Error::SizeCap {
            cells,
            cap: MEM_PAIR_CAP,
        });
    }
    let mut out = Vec::new();
    for i in 0..s1.len() {
        for j in 0..s2.len() {
            if !residues_match(s1[i], s2[j]) {
                continue;
            }
            if i > 0 && j > 0 && residues_match(s1[i - 1], s2[j - 1]) {
                continue;
            }
            let mut len = 1;
            while i + len < s1.len() && j + len < s2.len() && residues_match(s1[i + len], s2[j + len]) {
                len += 1;
            }
            out.push(Match::exact(i, j, len, MatchKind::Mmss));
        }
    }
    Ok(out)
}
