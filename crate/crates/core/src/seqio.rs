//! Sequence and exon-annotation ingestion, and alignment serialization.
//!
//! Coordinates are 0-based and half-open throughout. In CIGAR output `I`
//! marks a residue present only in the first sequence and `D` a residue
//! present only in the second.

use std::fmt::{self, Write as _};
use std::ops::Range;

use crate::error::{Error, Result};

/// Two residues count as an exact match only when equal and not `N`.
#[inline]
pub fn residues_match(a: u8, b: u8) -> bool {
    a == b && a != b'N'
}

/// A named DNA sequence over `A`, `C`, `G`, `T`, `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub id: String,
    residues: Vec<u8>,
}

impl Sequence {
    /// Validates and normalizes `residues`: lowercase is folded to
    /// uppercase and `U` to `T`. ASCII whitespace is not accepted here.
    pub fn new(id: impl Into<String>, residues: impl AsRef<[u8]>) -> Result<Self> {
        let id = id.into();
        let raw = residues.as_ref();
        let mut out = Vec::with_capacity(raw.len());
        for (offset, &b) in raw.iter().enumerate() {
            match normalize(b) {
                Some(r) => out.push(r),
                None => {
                    return Err(Error::IllegalResidue {
                        record: id,
                        offset,
                        residue: b as char,
                    })
                }
            }
        }
        Ok(Self { id, residues: out })
    }

    pub fn residues(&self) -> &[u8] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

fn normalize(b: u8) -> Option<u8> {
    match b.to_ascii_uppercase() {
        r @ (b'A' | b'C' | b'G' | b'T' | b'N') => Some(r),
        b'U' => Some(b'T'),
        _ => None,
    }
}

/// Parses FASTA text. The record id is the first whitespace-delimited token
/// of the header line.
pub fn parse_fasta(text: &[u8]) -> Result<Vec<Sequence>> {
    let mut records: Vec<(String, Vec<u8>)> = Vec::new();
    for (lineno, line) in text.split(|&b| b == b'\n').enumerate() {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if let Some(header) = line.strip_prefix(b">") {
            let header = String::from_utf8_lossy(header);
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            records.push((id, Vec::new()));
            continue;
        }
        let Some((id, residues)) = records.last_mut() else {
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            return Err(Error::MalformedFasta { line: lineno + 1 });
        };
        for &b in line.iter().filter(|b| !b.is_ascii_whitespace()) {
            match normalize(b) {
                Some(r) => residues.push(r),
                None => {
                    return Err(Error::IllegalResidue {
                        record: id.clone(),
                        offset: residues.len(),
                        residue: b as char,
                    })
                }
            }
        }
    }
    Ok(records
        .into_iter()
        .map(|(id, residues)| Sequence { id, residues })
        .collect())
}

/// Writes records as FASTA with 60-column residue lines.
pub fn write_fasta(records: &[Sequence]) -> String {
    let mut out = String::new();
    for rec in records {
        out.push('>');
        out.push_str(&rec.id);
        out.push('\n');
        for chunk in rec.residues.chunks(60) {
            out.push_str(std::str::from_utf8(chunk).expect("residues are ASCII"));
            out.push('\n');
        }
    }
    out
}

/// One pair of corresponding exon regions, half-open on both sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExonInterval {
    pub seq1_start: usize,
    pub seq1_end: usize,
    pub seq2_start: usize,
    pub seq2_end: usize,
}

impl ExonInterval {
    pub fn new(seq1_start: usize, seq1_end: usize, seq2_start: usize, seq2_end: usize) -> Self {
        Self {
            seq1_start,
            seq1_end,
            seq2_start,
            seq2_end,
        }
    }

    pub fn seq1(&self) -> Range<usize> {
        self.seq1_start..self.seq1_end
    }

    pub fn seq2(&self) -> Range<usize> {
        self.seq2_start..self.seq2_end
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExonAnnotation {
    intervals: Vec<ExonInterval>,
}

impl ExonAnnotation {
    /// Sorts by `seq1_start` and checks that every interval is non-empty and
    /// that no two intervals overlap on either sequence.
    pub fn new(intervals: Vec<ExonInterval>) -> Result<Self> {
        Self::from_lines(intervals.into_iter().enumerate().map(|(i, iv)| (i + 1, iv)).collect())
    }

    fn from_lines(mut lines: Vec<(usize, ExonInterval)>) -> Result<Self> {
        for (line, iv) in &lines {
            if iv.seq1_start >= iv.seq1_end || iv.seq2_start >= iv.seq2_end {
                return Err(Error::BadInterval { line: *line });
            }
        }
        lines.sort_by_key(|(_, iv)| (iv.seq1_start, iv.seq2_start));
        let intervals: Vec<ExonInterval> = lines.into_iter().map(|(_, iv)| iv).collect();
        check_disjoint(&intervals, 1, |iv| (iv.seq1_start, iv.seq1_end))?;
        check_disjoint(&intervals, 2, |iv| (iv.seq2_start, iv.seq2_end))?;
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[ExonInterval] {
        &self.intervals
    }

    /// Total exon length on the first sequence.
    pub fn seq1_length(&self) -> usize {
        self.intervals.iter().map(|iv| iv.seq1_end - iv.seq1_start).sum()
    }

    /// Rejects intervals that reach past either sequence end.
    pub fn check_bounds(&self, len1: usize, len2: usize) -> Result<()> {
        for iv in &self.intervals {
            if iv.seq1_end > len1 {
                return Err(Error::OutOfRange {
                    sequence: 1,
                    interval: (iv.seq1_start, iv.seq1_end),
                    length: len1,
                });
            }
            if iv.seq2_end > len2 {
                return Err(Error::OutOfRange {
                    sequence: 2,
                    interval: (iv.seq2_start, iv.seq2_end),
                    length: len2,
                });
            }
        }
        Ok(())
    }

    /// Four tab-separated columns per line, same layout the parser reads.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for iv in &self.intervals {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                iv.seq1_start, iv.seq1_end, iv.seq2_start, iv.seq2_end
            );
        }
        out
    }
}

fn check_disjoint(
    intervals: &[ExonInterval],
    sequence: u8,
    key: impl Fn(&ExonInterval) -> (usize, usize),
) -> Result<()> {
    let mut spans: Vec<(usize, usize)> = intervals.iter().map(key).collect();
    spans.sort_unstable();
    for w in spans.windows(2) {
        if w[1].0 < w[0].1 {
            return Err(Error::Overlap {
                sequence,
                first: w[0],
                second: w[1],
            });
        }
    }
    Ok(())
}

/// Parses `seq1_start seq1_end seq2_start seq2_end` tab-separated lines.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_exon_annotation(text: &[u8]) -> Result<ExonAnnotation> {
    let text = String::from_utf8_lossy(text);
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::MalformedAnnotation {
                line: i + 1,
                reason: format!("expected 4 tab-separated columns, found {}", fields.len()),
            });
        }
        let mut v = [0usize; 4];
        for (slot, f) in v.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| Error::MalformedAnnotation {
                line: i + 1,
                reason: format!("not a non-negative integer: {f:?}"),
            })?;
        }
        lines.push((i + 1, ExonInterval::new(v[0], v[1], v[2], v[3])));
    }
    ExonAnnotation::from_lines(lines)
}

/// Alignment column class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Match,
    Mismatch,
    /// Residue in the first sequence facing a gap.
    Insert1,
    /// Residue in the second sequence facing a gap.
    Insert2,
}

impl Op {
    pub fn cigar_char(self) -> char {
        match self {
            Op::Match => 'M',
            Op::Mismatch => 'X',
            Op::Insert1 => 'I',
            Op::Insert2 => 'D',
        }
    }

    pub fn consumes_seq1(self) -> bool {
        !matches!(self, Op::Insert2)
    }

    pub fn consumes_seq2(self) -> bool {
        !matches!(self, Op::Insert1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub op: Op,
    pub len: usize,
}

impl Block {
    pub fn new(op: Op, len: usize) -> Self {
        Self { op, len }
    }
}

/// Appends `len` columns of `op`, extending the last run when it has the
/// same op. Zero-length pushes are ignored.
pub fn push_run(blocks: &mut Vec<Block>, op: Op, len: usize) {
    if len == 0 {
        return;
    }
    match blocks.last_mut() {
        Some(last) if last.op == op => last.len += len,
        _ => blocks.push(Block::new(op, len)),
    }
}

/// Renders blocks as a CIGAR string (`M`, `X`, `I`, `D`).
pub fn cigar_string(blocks: &[Block]) -> String {
    let mut out = String::new();
    for b in blocks {
        let _ = write!(out, "{}{}", b.len, b.op.cigar_char());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentRecord {
    pub seq1_id: String,
    pub seq2_id: String,
    pub blocks: Vec<Block>,
    pub seq1_span: Range<usize>,
    pub seq2_span: Range<usize>,
    pub score: i64,
    pub identity: f64,
}

impl AlignmentRecord {
    /// Builds a record from runs starting at `(start1, start2)`; spans and
    /// identity are derived from the runs.
    pub fn from_blocks(
        seq1_id: impl Into<String>,
        seq2_id: impl Into<String>,
        blocks: Vec<Block>,
        start1: usize,
        start2: usize,
        score: i64,
    ) -> Self {
        let w1: usize = blocks.iter().filter(|b| b.op.consumes_seq1()).map(|b| b.len).sum();
        let w2: usize = blocks.iter().filter(|b| b.op.consumes_seq2()).map(|b| b.len).sum();
        let identity = identity_of(&blocks);
        Self {
            seq1_id: seq1_id.into(),
            seq2_id: seq2_id.into(),
            blocks,
            seq1_span: start1..start1 + w1,
            seq2_span: start2..start2 + w2,
            score,
            identity,
        }
    }

    pub fn columns(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }

    pub fn cigar(&self) -> String {
        cigar_string(&self.blocks)
    }

    /// Checks the span/run-sum and identity invariants.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let w1: usize = self.blocks.iter().filter(|b| b.op.consumes_seq1()).map(|b| b.len).sum();
        let w2: usize = self.blocks.iter().filter(|b| b.op.consumes_seq2()).map(|b| b.len).sum();
        if w1 != self.seq1_span.len() {
            return Err(format!("seq1 run sum {w1} != span {:?}", self.seq1_span));
        }
        if w2 != self.seq2_span.len() {
            return Err(format!("seq2 run sum {w2} != span {:?}", self.seq2_span));
        }
        let expected = identity_of(&self.blocks);
        if (expected - self.identity).abs() > 1e-12 {
            return Err(format!("identity {} != {expected}", self.identity));
        }
        Ok(())
    }

    /// Iterates alignment columns as `(op, seq1 position, seq2 position)`;
    /// positions are `None` on the gapped side.
    pub fn columns_iter(&self) -> impl Iterator<Item = (Op, Option<usize>, Option<usize>)> + '_ {
        let mut p1 = self.seq1_span.start;
        let mut p2 = self.seq2_span.start;
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.op, b.len))
            .map(move |op| {
                let a = op.consumes_seq1().then(|| {
                    p1 += 1;
                    p1 - 1
                });
                let b = op.consumes_seq2().then(|| {
                    p2 += 1;
                    p2 - 1
                });
                (op, a, b)
            })
    }

    /// Replays every column against the residues: `Match` columns must hold
    /// equal non-`N` residues, `Mismatch` columns must not, and the spans
    /// must lie inside the sequences.
    pub fn replay(&self, s1: &[u8], s2: &[u8]) -> std::result::Result<(), String> {
        self.validate()?;
        if self.seq1_span.end > s1.len() || self.seq2_span.end > s2.len() {
            return Err("span exceeds sequence".into());
        }
        for (col, (op, a, b)) in self.columns_iter().enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                let eq = residues_match(s1[a], s2[b]);
                match op {
                    Op::Match if !eq => return Err(format!("column {col}: MATCH on {a},{b} differs")),
                    Op::Mismatch if eq => {
                        return Err(format!("column {col}: MISMATCH on {a},{b} is equal"))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

fn identity_of(blocks: &[Block]) -> f64 {
    let total: usize = blocks.iter().map(|b| b.len).sum();
    if total == 0 {
        return 0.0;
    }
    let matched: usize = blocks.iter().filter(|b| b.op == Op::Match).map(|b| b.len).sum();
    matched as f64 / total as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Cigar,
    Tsv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Cigar => "cigar",
            OutputFormat::Tsv => "tsv",
        })
    }
}

const TEXT_WIDTH: usize = 60;

/// Serializes an alignment. `s1` and `s2` are the full sequences the record
/// refers to; only the TEXT format reads residues from them.
///
/// Panics if the record violates its span/run-sum invariant.
pub fn emit_alignment(record: &AlignmentRecord, s1: &[u8], s2: &[u8], format: OutputFormat) -> String {
    if let Err(e) = record.validate() {
        panic!("refusing to emit an inconsistent alignment record: {e}");
    }
    match format {
        OutputFormat::Cigar => format!("{}\n", record.cigar()),
        OutputFormat::Tsv => format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\n",
            record.seq1_id,
            record.seq1_span.start,
            record.seq1_span.end,
            record.seq2_id,
            record.seq2_span.start,
            record.seq2_span.end,
            record.score,
            record.identity
        ),
        OutputFormat::Text => emit_text(record, s1, s2),
    }
}

fn emit_text(record: &AlignmentRecord, s1: &[u8], s2: &[u8]) -> String {
    let mut top = Vec::with_capacity(record.columns());
    let mut mid = Vec::with_capacity(record.columns());
    let mut bot = Vec::with_capacity(record.columns());
    for (op, a, b) in record.columns_iter() {
        top.push(a.map_or(b'-', |p| s1[p]));
        bot.push(b.map_or(b'-', |p| s2[p]));
        mid.push(if op == Op::Match { b'|' } else { b' ' });
    }
    let mut out = format!(
        "# {} [{}, {})  {} [{}, {})  score={}  identity={:.6}\n",
        record.seq1_id,
        record.seq1_span.start,
        record.seq1_span.end,
        record.seq2_id,
        record.seq2_span.start,
        record.seq2_span.end,
        record.score,
        record.identity
    );
    for ((t, m), b) in top.chunks(TEXT_WIDTH).zip(mid.chunks(TEXT_WIDTH)).zip(bot.chunks(TEXT_WIDTH)) {
        for row in [t, m, b] {
            out.push_str(std::str::from_utf8(row).expect("ASCII rows"));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fasta_normalizes_case() {
        let recs = parse_fasta(b">s1\nacgt\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].id, "s1");
        assert_eq!(recs[0].residues(), b"ACGT");
    }

    #[test]
    fn fasta_two_records() {
        let recs = parse_fasta(b">a\nACGT\n>b\nTTTT\n").unwrap();
        assert_eq!(recs.iter().map(Sequence::len).collect::<Vec<_>>(), vec![4, 4]);
        assert_eq!(recs[1].id, "b");
    }

    #[test]
    fn fasta_illegal_residue_offset() {
        match parse_fasta(b">a\nACXT\n") {
            Err(Error::IllegalResidue { offset, residue, record }) => {
                assert_eq!(offset, 2);
                assert_eq!(residue, 'X');
                assert_eq!(record, "a");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fasta_offset_spans_lines_and_folds_u() {
        let recs = parse_fasta(b">r desc here\r\nAC\r\nGu\n\n").unwrap();
        assert_eq!(recs[0].id, "r");
        assert_eq!(recs[0].residues(), b"ACGT");
        match parse_fasta(b">a\nACGT\nAAJ\n") {
            Err(Error::IllegalResidue { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fasta_without_header_is_malformed() {
        assert!(matches!(parse_fasta(b"ACGT\n>a\nA\n"), Err(Error::MalformedFasta { line: 1 })));
        assert!(parse_fasta(b"\n\n>a\nA\n").is_ok());
    }

    #[test]
    fn empty_record_is_representable() {
        let recs = parse_fasta(b">empty\n>b\nA\n").unwrap();
        assert!(recs[0].is_empty());
        assert_eq!(recs[1].len(), 1);
    }

    #[test]
    fn annotation_single_line() {
        let ann = parse_exon_annotation(b"0\t10\t5\t15\n").unwrap();
        assert_eq!(ann.intervals(), &[ExonInterval::new(0, 10, 5, 15)]);
    }

    #[test]
    fn annotation_empty_interval_rejected() {
        assert!(matches!(
            parse_exon_annotation(b"10\t10\t0\t5\n"),
            Err(Error::BadInterval { line: 1 })
        ));
    }

    #[test]
    fn annotation_overlap_rejected() {
        let err = parse_exon_annotation(b"0\t10\t0\t10\n5\t15\t20\t30\n").unwrap_err();
        assert!(matches!(err, Error::Overlap { sequence: 1, .. }));
        let err = parse_exon_annotation(b"0\t10\t0\t10\n20\t30\t5\t12\n").unwrap_err();
        assert!(matches!(err, Error::Overlap { sequence: 2, .. }));
    }

    #[test]
    fn annotation_sorted_and_bounds_checked() {
        let ann = parse_exon_annotation(b"# exons\n20\t30\t20\t30\n0\t10\t0\t10\n").unwrap();
        assert_eq!(ann.intervals()[0].seq1_start, 0);
        assert_eq!(ann.seq1_length(), 20);
        assert!(ann.check_bounds(30, 30).is_ok());
        assert!(matches!(ann.check_bounds(30, 29), Err(Error::OutOfRange { sequence: 2, .. })));
        assert!(parse_exon_annotation(b"1\t2\t3\n").is_err());
        assert!(parse_exon_annotation(b"1\t2\t3\tx\n").is_err());
    }

    #[test]
    fn cigar_runs() {
        let r = AlignmentRecord::from_blocks("a", "b", vec![Block::new(Op::Match, 4)], 0, 0, 4);
        assert_eq!(r.seq1_span, 0..4);
        assert_eq!(emit_alignment(&r, b"ACGT", b"ACGT", OutputFormat::Cigar), "4M\n");

        let blocks = vec![
            Block::new(Op::Match, 2),
            Block::new(Op::Insert2, 1),
            Block::new(Op::Match, 1),
        ];
        let r = AlignmentRecord::from_blocks("a", "b", blocks, 0, 0, 0);
        assert_eq!(r.cigar(), "2M1D1M");
        assert_eq!(r.seq1_span, 0..3);
        assert_eq!(r.seq2_span, 0..4);
        assert!((r.identity - 0.75).abs() < 1e-12);
    }

    #[test]
    fn text_output_marks_matches() {
        // ATAG-GGGACA / ATAGCGGGACA style: one gap in the top row.
        let s1 = b"ATAGGGGACA";
        let s2 = b"ATAGCGGGACA";
        let blocks = vec![
            Block::new(Op::Match, 4),
            Block::new(Op::Insert2, 1),
            Block::new(Op::Match, 6),
        ];
        let r = AlignmentRecord::from_blocks("x", "y", blocks, 0, 0, 8);
        r.replay(s1, s2).unwrap();
        let text = emit_alignment(&r, s1, s2, OutputFormat::Text);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "ATAG-GGGACA");
        assert_eq!(lines[2], "|||| ||||||");
        assert_eq!(lines[3], "ATAGCGGGACA");
    }

    #[test]
    fn tsv_output_line() {
        let r = AlignmentRecord::from_blocks("a", "b", vec![Block::new(Op::Match, 4)], 2, 3, 4);
        assert_eq!(
            emit_alignment(&r, b"AAACGT", b"AAAACGT", OutputFormat::Tsv),
            "a\t2\t6\tb\t3\t7\t4\t1.000000\n"
        );
    }

    #[test]
    #[should_panic(expected = "inconsistent")]
    fn emit_rejects_bad_span() {
        let mut r = AlignmentRecord::from_blocks("a", "b", vec![Block::new(Op::Match, 4)], 0, 0, 4);
        r.seq1_span = 0..5;
        emit_alignment(&r, b"ACGTA", b"ACGT", OutputFormat::Cigar);
    }

    #[test]
    fn replay_catches_false_match() {
        let r = AlignmentRecord::from_blocks("a", "b", vec![Block::new(Op::Match, 2)], 0, 0, 2);
        assert!(r.replay(b"AC", b"AG").is_err());
        assert!(r.replay(b"NN", b"NN").is_err());
    }

    #[test]
    fn push_run_merges() {
        let mut v = Vec::new();
        push_run(&mut v, Op::Match, 2);
        push_run(&mut v, Op::Match, 3);
        push_run(&mut v, Op::Insert1, 0);
        push_run(&mut v, Op::Insert1, 1);
        assert_eq!(v, vec![Block::new(Op::Match, 5), Block::new(Op::Insert1, 1)]);
    }
}
