//! Worked examples, each checked against a small independent computation.

use mmalign::anchoring::AnchorChain;
use mmalign::chaining::merge_chain;
use mmalign::oracle::{brute_force_mems, smith_waterman, DEFAULT_CELL_CAP};
use mmalign::seqio::{Block, Op};
use mmalign::stitching::assemble;
use mmalign::suffix_index::{GeneralizedSuffixTree, MatchKind, MmssQuery};
use mmalign::{ExtensionParams, Match, ScoringScheme, Sequence};

/// Best score over every local alignment, enumerated path by path from
/// every start cell. `gap` is 0 outside a gap, 1 inside a gap in `b`
/// (consuming `a`), 2 inside a gap in `a`.
fn exhaustive_local(a: &[u8], b: &[u8], sc: &ScoringScheme) -> i64 {
    #[allow(clippy::too_many_arguments)]
    fn walk(a: &[u8], b: &[u8], i: usize, j: usize, gap: u8, score: i64, sc: &ScoringScheme, best: &mut i64) {
        if gap == 0 {
            *best = (*best).max(score);
        }
        if i < a.len() && j < b.len() {
            walk(a, b, i + 1, j + 1, 0, score + sc.pair(a[i], b[j]) as i64, sc, best);
        }
        if i < a.len() {
            let cost = if gap == 1 { sc.gap_extend } else { sc.gap_open };
            walk(a, b, i + 1, j, 1, score + cost as i64, sc, best);
        }
        if j < b.len() {
            let cost = if gap == 2 { sc.gap_extend } else { sc.gap_open };
            walk(a, b, i, j + 1, 2, score + cost as i64, sc, best);
        }
    }
    let mut best = 0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            // Local alignments start and end with an aligned pair.
            let first = sc.pair(a[i], b[j]) as i64;
            walk(a, b, i + 1, j + 1, 0, first, sc, &mut best);
        }
    }
    best
}

#[test]
fn textbook_pair_scores_thirteen() {
    let (a, b) = (b"TGTTACGG", b"GGTTGACTA");
    let sc = ScoringScheme::linear(3, -3, -2).unwrap();
    assert_eq!(exhaustive_local(a, b, &sc), 13);
    let (score, rec) = smith_waterman(
        &Sequence::new("a", a).unwrap(),
        &Sequence::new("b", b).unwrap(),
        &sc,
        DEFAULT_CELL_CAP,
    )
    .unwrap();
    assert_eq!(score, 13);
    rec.replay(a, b).unwrap();
}

#[test]
fn exhaustive_agrees_with_oracle_on_affine_scores() {
    let sc = ScoringScheme::new(2, -1, -3, -1).unwrap();
    for (a, b) in [
        (&b"ACGTTAC"[..], &b"ACTTTAAC"[..]),
        (b"GATTACA", b"GCATGCT"),
        (b"AAAAGGGG", b"AAAACCGGGG"),
    ] {
        let (score, _) = smith_waterman(
            &Sequence::new("a", a).unwrap(),
            &Sequence::new("b", b).unwrap(),
            &sc,
            DEFAULT_CELL_CAP,
        )
        .unwrap();
        assert_eq!(score, exhaustive_local(a, b, &sc));
    }
}

#[test]
fn banana_ananas() {
    // Letters mapped b->C, a->A, n->G, s->T.
    let (s1, s2) = (b"CAGAGA", b"AGAGAT");
    let tree = GeneralizedSuffixTree::build(s1, s2);
    let long: Vec<_> = tree
        .enumerate_mmss(MmssQuery {
            min_len: 2,
            unique_only: false,
        })
        .iter()
        .map(Match::triple)
        .collect();
    assert_eq!(long, vec![(1, 0, 5), (1, 2, 3), (3, 0, 3)]);
    // Single-residue maximal pairs exist as well.
    let all: Vec<_> = brute_force_mems(s1, s2).unwrap().iter().map(Match::triple).collect();
    assert_eq!(all, vec![(1, 0, 5), (1, 2, 3), (1, 4, 1), (3, 0, 3), (5, 0, 1)]);
    let tree_all: Vec<_> = tree.enumerate_mmss(MmssQuery::default()).iter().map(Match::triple).collect();
    assert_eq!(tree_all, all);
}

#[test]
fn two_anchors_around_a_one_residue_gap() {
    let left = "GATTACAGATTACCAGGTTCA";
    let right = "TGCATGCCATGGTACGTTAGC";
    let s1 = Sequence::new("a", format!("{left}ACG{right}")).unwrap();
    let s2 = Sequence::new("b", format!("{left}AG{right}")).unwrap();
    let anchors = AnchorChain {
        anchors: vec![
            Match::exact(0, 0, 21, MatchKind::Mmss),
            Match::exact(24, 23, 21, MatchKind::Mmss),
        ],
        origin: Match::exact(0, 0, 21, MatchKind::Mmss),
    };
    let chain = merge_chain(&anchors, &[]);
    // Both anchors grow by the shared A and G; the extra C is left to the
    // gap fill.
    let params = ExtensionParams { x_drop: 1, band_pad: 16 };
    let rec = assemble(&s1, &s2, &chain, &params, &ScoringScheme::default()).unwrap();
    rec.replay(s1.residues(), s2.residues()).unwrap();
    assert_eq!(
        rec.blocks,
        vec![
            Block::new(Op::Match, 22),
            Block::new(Op::Insert1, 1),
            Block::new(Op::Match, 22),
        ]
    );
    assert_eq!(rec.score, 44 - 2);
}
