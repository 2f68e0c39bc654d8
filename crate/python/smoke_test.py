"""Quick end-to-end check of the Python bindings.

Build and install the extension first, e.g.

    pip install maturin
    pip install ./crates/py --no-build-isolation

then run ``python python/smoke_test.py``.
"""

import pymmalign


def main():
    a, b, exons = pymmalign.generate_pair(5000, substitution_rate=0.05, indel_rate=0.005, seed=7)

    aln = pymmalign.align(a, b)
    assert aln is not None
    assert aln.seq1_span[1] - aln.seq1_span[0] > 4000, aln
    assert 0.9 < aln.identity <= 1.0

    coverage = pymmalign.exon_coverage(aln, exons)
    assert 0.9 <= coverage <= 1.0, coverage

    same = pymmalign.align(a, a)
    assert same.cigar == f"{len(a)}M"
    assert same.blocks == [("M", len(a))]
    assert same.score == len(a)

    score, opt = pymmalign.smith_waterman(
        "TGTTACGG", "GGTTGACTA", match_score=3, mismatch=-3, gap_open=-2, gap_extend=-2
    )
    assert score == 13 and opt.score == 13

    head = a[:1500]
    heur = pymmalign.align(head, b[:1500])
    best, _ = pymmalign.smith_waterman(head, b[:1500])
    assert heur.score <= best

    assert pymmalign.find_mmss("CAGAGA", "AGAGAT", min_len=2) == [(1, 0, 5), (1, 2, 3), (3, 0, 3)]
    assert pymmalign.parse_fasta(">x desc\nAC\ngt\n>y\nNNA\n") == [("x", "ACGT"), ("y", "NNA")]
    assert pymmalign.align("AAAAAA", "CCCCCC") is None

    text = same.format("text")
    assert text.startswith("# seq1 [0, 5000)")
    assert same.format("tsv").split("\t")[6] == "5000"

    try:
        pymmalign.align("ACGT", "ACXT")
    except ValueError as err:
        assert "offset 2" in str(err)
    else:
        raise AssertionError("illegal residue accepted")

    try:
        pymmalign.smith_waterman("A" * 3000, "A" * 3000)
    except ValueError as err:
        assert "4000000" in str(err)
    else:
        raise AssertionError("cell cap not enforced")

    print(f"ok: score={aln.score} identity={aln.identity:.4f} coverage={coverage:.4f}")


if __name__ == "__main__":
    main()
