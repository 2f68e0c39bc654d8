//! Python bindings for the `mmalign` aligner.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use mmalign::evalbench::{self, MutationModel};
use mmalign::oracle::{self, DEFAULT_CELL_CAP};
use mmalign::seqio::{self, emit_alignment, OutputFormat};
use mmalign::suffix_index::{GeneralizedSuffixTree, MmssQuery};
use mmalign::{AlignmentRecord, Error, ExonAnnotation, ExonInterval, PipelineConfig, ScoringScheme, Sequence};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn sequence(id: &str, residues: &str) -> PyResult<Sequence> {
    Sequence::new(id, residues).map_err(to_py)
}

fn output_format(name: &str) -> PyResult<OutputFormat> {
    match name {
        "text" => Ok(OutputFormat::Text),
        "cigar" => Ok(OutputFormat::Cigar),
        "tsv" => Ok(OutputFormat::Tsv),
        other => Err(PyValueError::new_err(format!(
            "unknown format {other:?}; expected text, cigar or tsv"
        ))),
    }
}

/// A local alignment between two sequences, with the residues it refers to.
#[pyclass(module = "pymmalign", frozen)]
struct Alignment {
    record: AlignmentRecord,
    s1: Vec<u8>,
    s2: Vec<u8>,
}

#[pymethods]
impl Alignment {
    #[getter]
    fn seq1_id(&self) -> &str {
        &self.record.seq1_id
    }

    #[getter]
    fn seq2_id(&self) -> &str {
        &self.record.seq2_id
    }

    /// Half-open `(start, end)` on the first sequence.
    #[getter]
    fn seq1_span(&self) -> (usize, usize) {
        (self.record.seq1_span.start, self.record.seq1_span.end)
    }

    #[getter]
    fn seq2_span(&self) -> (usize, usize) {
        (self.record.seq2_span.start, self.record.seq2_span.end)
    }

    #[getter]
    fn score(&self) -> i64 {
        self.record.score
    }

    #[getter]
    fn identity(&self) -> f64 {
        self.record.identity
    }

    #[getter]
    fn cigar(&self) -> String {
        self.record.cigar()
    }

    /// Runs as `(op, length)` with op one of `M`, `X`, `I`, `D`.
    #[getter]
    fn blocks(&self) -> Vec<(char, usize)> {
        self.record.blocks.iter().map(|b| (b.op.cigar_char(), b.len)).collect()
    }

    #[pyo3(signature = (format = "text"))]
    fn format(&self, format: &str) -> PyResult<String> {
        Ok(emit_alignment(&self.record, &self.s1, &self.s2, output_format(format)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Alignment({} {:?} vs {} {:?}, score={}, cigar={:?})",
            self.record.seq1_id,
            self.record.seq1_span,
            self.record.seq2_id,
            self.record.seq2_span,
            self.record.score,
            self.record.cigar()
        )
    }
}

impl Alignment {
    fn new(record: AlignmentRecord, s1: &Sequence, s2: &Sequence) -> Self {
        Self {
            record,
            s1: s1.residues().to_vec(),
            s2: s2.residues().to_vec(),
        }
    }
}

/// Aligns two DNA strings. Returns `None` when nothing could be chained.
#[pyfunction]
#[pyo3(signature = (
    seq1, seq2, *, match_score = 1, mismatch = -1, gap_open = -2, gap_extend = -1,
    threshold_floor = 10, neighborhood = 0.6, x_drop = 10, band_pad = 16, restart = true, threads = 1,
))]
#[allow(clippy::too_many_arguments)]
fn align(
    seq1: &str,
    seq2: &str,
    match_score: i32,
    mismatch: i32,
    gap_open: i32,
    gap_extend: i32,
    threshold_floor: usize,
    neighborhood: f64,
    x_drop: i32,
    band_pad: usize,
    restart: bool,
    threads: usize,
) -> PyResult<Option<Alignment>> {
    let (s1, s2) = (sequence("seq1", seq1)?, sequence("seq2", seq2)?);
    let mut cfg = PipelineConfig {
        threshold_floor,
        neighborhood_fraction: neighborhood,
        restart,
        threads,
        scoring: ScoringScheme::new(match_score, mismatch, gap_open, gap_extend).map_err(to_py)?,
        ..PipelineConfig::default()
    };
    cfg.extension.x_drop = x_drop;
    cfg.extension.band_pad = band_pad;
    let out = mmalign::align_pair(&s1, &s2, &cfg).map_err(to_py)?;
    Ok(out.record.map(|r| Alignment::new(r, &s1, &s2)))
}

/// Optimal local alignment score and one optimal alignment.
#[pyfunction]
#[pyo3(signature = (
    seq1, seq2, *, match_score = 1, mismatch = -1, gap_open = -2, gap_extend = -1, cell_cap = DEFAULT_CELL_CAP,
))]
fn smith_waterman(
    seq1: &str,
    seq2: &str,
    match_score: i32,
    mismatch: i32,
    gap_open: i32,
    gap_extend: i32,
    cell_cap: u128,
) -> PyResult<(i64, Alignment)> {
    let (s1, s2) = (sequence("seq1", seq1)?, sequence("seq2", seq2)?);
    let scoring = ScoringScheme::new(match_score, mismatch, gap_open, gap_extend).map_err(to_py)?;
    let (score, record) = oracle::smith_waterman(&s1, &s2, &scoring, cell_cap).map_err(to_py)?;
    Ok((score, Alignment::new(record, &s1, &s2)))
}

/// Maximal exact matches as `(pos1, pos2, length)`, sorted.
#[pyfunction]
#[pyo3(signature = (seq1, seq2, *, min_len = 1, unique = false))]
fn find_mmss(seq1: &str, seq2: &str, min_len: usize, unique: bool) -> PyResult<Vec<(usize, usize, usize)>> {
    let (s1, s2) = (sequence("seq1", seq1)?, sequence("seq2", seq2)?);
    let tree = GeneralizedSuffixTree::build(s1.residues(), s2.residues());
    let query = MmssQuery {
        min_len,
        unique_only: unique,
    };
    Ok(tree.enumerate_mmss(query).iter().map(|m| m.triple()).collect())
}

/// FASTA text to `(id, residues)` pairs.
#[pyfunction]
fn parse_fasta(text: &str) -> PyResult<Vec<(String, String)>> {
    let records = seqio::parse_fasta(text.as_bytes()).map_err(to_py)?;
    Ok(records
        .into_iter()
        .map(|s| (s.id.clone(), String::from_utf8_lossy(s.residues()).into_owned()))
        .collect())
}

/// A random sequence, its mutated copy, and the conserved interval pairs.
#[pyfunction]
#[pyo3(signature = (length, *, substitution_rate = 0.0, indel_rate = 0.0, seed = 0))]
#[allow(clippy::type_complexity)]
fn generate_pair(
    length: usize,
    substitution_rate: f64,
    indel_rate: f64,
    seed: u64,
) -> PyResult<(String, String, Vec<(usize, usize, usize, usize)>)> {
    let model = MutationModel {
        substitution_rate,
        indel_rate,
        rng_seed: seed,
        ..MutationModel::default()
    };
    let (a, b, exons) = evalbench::generate_pair(length, &model).map_err(to_py)?;
    let text = |s: &Sequence| String::from_utf8_lossy(s.residues()).into_owned();
    let intervals = exons
        .intervals()
        .iter()
        .map(|iv| (iv.seq1_start, iv.seq1_end, iv.seq2_start, iv.seq2_end))
        .collect();
    Ok((text(&a), text(&b), intervals))
}

/// Fraction of exon length on the first sequence aligned into the paired
/// range. `exons` holds `(seq1_start, seq1_end, seq2_start, seq2_end)`.
#[pyfunction]
fn exon_coverage(alignment: &Alignment, exons: Vec<(usize, usize, usize, usize)>) -> PyResult<f64> {
    let intervals = exons
        .into_iter()
        .map(|(a, b, c, d)| ExonInterval::new(a, b, c, d))
        .collect();
    let annotation = ExonAnnotation::new(intervals).map_err(to_py)?;
    Ok(evalbench::exon_coverage(&alignment.record, &annotation))
}

#[pymodule]
fn pymmalign(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Alignment>()?;
    m.add_function(wrap_pyfunction!(align, m)?)?;
    m.add_function(wrap_pyfunction!(smith_waterman, m)?)?;
    m.add_function(wrap_pyfunction!(find_mmss, m)?)?;
    m.add_function(wrap_pyfunction!(parse_fasta, m)?)?;
    m.add_function(wrap_pyfunction!(generate_pair, m)?)?;
    m.add_function(wrap_pyfunction!(exon_coverage, m)?)?;
    Ok(())
}
