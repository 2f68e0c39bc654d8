//! Synthetic homologous pairs, the exon-coverage metric, and a benchmark
//! harness that times the pipeline against the exact local optimum.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::oracle::smith_waterman;
use crate::pipeline::{align_pair, PipelineConfig};
use crate::seqio::{AlignmentRecord, ExonAnnotation, ExonInterval, Op, Sequence};

const BASES: [u8; 4] = *b"ACGT";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationModel {
    pub substitution_rate: f64,
    pub indel_rate: f64,
    /// Success probability of the geometric indel length; lengths are
    /// `1 + Geometric(p)`, so 0.5 gives a mean of 2.
    pub indel_length_geometric_p: f64,
    pub rng_seed: u64,
}

impl Default for MutationModel {
    fn default() -> Self {
        Self {
            substitution_rate: 0.0,
            indel_rate: 0.0,
            indel_length_geometric_p: 0.5,
            rng_seed: 0,
        }
    }
}

impl MutationModel {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [("substitution", self.substitution_rate), ("indel", self.indel_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidParameter(format!("{name} rate {rate} is outside [0, 1]")));
            }
        }
        let p = self.indel_length_geometric_p;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!("geometric parameter {p} is outside (0, 1]")));
        }
        Ok(())
    }
}

/// A uniform random sequence and a mutated copy, with the conserved
/// stretches between indels recorded as paired exon intervals.
pub fn generate_pair(length: usize, model: &MutationModel) -> Result<(Sequence, Sequence, ExonAnnotation)> {
    model.validate()?;
    if length == 0 {
        return Err(Error::InvalidParameter("length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.rng_seed);
    let geometric = Geometric::new(model.indel_length_geometric_p)
        .map_err(|e| Error::InvalidParameter(format!("geometric parameter: {e}")))?;

    let s1: Vec<u8> = (0..length).map(|_| BASES[rng.random_range(0..4)]).collect();
    let mut s2 = Vec::with_capacity(length + length / 8);
    let mut exons = Vec::new();
    let (mut start1, mut start2) = (0, 0);
    let mut i = 0;
    while i < length {
        if model.indel_rate > 0.0 && rng.random::<f64>() < model.indel_rate {
            let len = 1 + geometric.sample(&mut rng) as usize;
            if start1 < i {
                exons.push(ExonInterval::new(start1, i, start2, s2.len()));
            }
            if rng.random_bool(0.5) {
                s2.extend((0..len).map(|_| BASES[rng.random_range(0..4)]));
            } else {
                i = (i + len).min(length);
            }
            start1 = i;
            start2 = s2.len();
            continue;
        }
        let base = s1[i];
        if model.substitution_rate > 0.0 && rng.random::<f64>() < model.substitution_rate {
            let code = BASES.iter().position(|&b| b == base).unwrap_or(0);
            s2.push(BASES[(code + rng.random_range(1..4)) % 4]);
        } else {
            s2.push(base);
        }
        i += 1;
    }
    if start1 < length {
        exons.push(ExonInterval::new(start1, length, start2, s2.len()));
    }
    let tag = model.rng_seed;
    Ok((
        Sequence::new(format!("random_{tag}_a"), s1)?,
        Sequence::new(format!("random_{tag}_b"), s2)?,
        ExonAnnotation::new(exons)?,
    ))
}

/// Fraction of exon length on the first sequence whose aligned columns
/// (match or mismatch) pair it with a position inside the same exon's range
/// on the second sequence.
pub fn exon_coverage(record: &AlignmentRecord, annotation: &ExonAnnotation) -> f64 {
    let total = annotation.seq1_length();
    if total == 0 {
        return 0.0;
    }
    let exons = annotation.intervals();
    let covered = record
        .columns_iter()
        .filter(|(op, _, _)| matches!(op, Op::Match | Op::Mismatch))
        .filter(|&(_, p1, p2)| {
            let (Some(p1), Some(p2)) = (p1, p2) else {
                return false;
            };
            let k = exons.partition_point(|iv| iv.seq1_end <= p1);
            exons
                .get(k)
                .is_some_and(|iv| iv.seq1().contains(&p1) && iv.seq2().contains(&p2))
        })
        .count();
    covered as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub length: usize,
    pub wall_time: Duration,
    pub score: Option<i64>,
    pub oracle_score: Option<i64>,
    pub score_ratio: Option<f64>,
    pub exon_coverage: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

fn cell<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

impl BenchReport {
    /// Tab-separated report with a header row. Wall times vary between runs,
    /// so they are only included when `timing` is set.
    pub fn to_tsv(&self, timing: bool) -> String {
        let mut out = String::from("length");
        if timing {
            out.push_str("\twall_time_s");
        }
        out.push_str("\tscore\toracle_score\tscore_ratio\texon_coverage\tstatus\n");
        for r in &self.rows {
            let _ = write!(out, "{}", r.length);
            if timing {
                let _ = write!(out, "\t{:.3}", r.wall_time.as_secs_f64());
            }
            let _ = writeln!(
                out,
                "\t{}\t{}\t{}\t{}\t{}",
                cell(r.score),
                cell(r.oracle_score),
                cell(r.score_ratio.map(|x| format!("{x:.6}"))),
                cell(r.exon_coverage.map(|x| format!("{x:.6}"))),
                r.error.as_deref().unwrap_or("ok"),
            );
        }
        out
    }
}

/// One generated pair per length, seeded `rng_seed + index`. The pipeline
/// is timed on each; the exact optimum is computed only when the pair fits
/// within `oracle_cap` cells. Rows run one after another, and a failing row
/// records its error without stopping the rest.
pub fn run_benchmark(lengths: &[usize], model: &MutationModel, cfg: &PipelineConfig, oracle_cap: u128) -> BenchReport {
    let rows = lengths
        .iter()
        .enumerate()
        .map(|(i, &length)| {
            let model = MutationModel {
                rng_seed: model.rng_seed.wrapping_add(i as u64),
                ..*model
            };
            bench_row(length, &model, cfg, oracle_cap)
        })
        .collect();
    BenchReport { rows }
}

fn bench_row(length: usize, model: &MutationModel, cfg: &PipelineConfig, oracle_cap: u128) -> BenchRow {
    let mut row = BenchRow {
        length,
        wall_time: Duration::ZERO,
        score: None,
        oracle_score: None,
        score_ratio: None,
        exon_coverage: None,
        error: None,
    };
    let (s1, s2, exons) = match generate_pair(length, model) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let start = Instant::now();
    let out = align_pair(&s1, &s2, cfg);
    row.wall_time = start.elapsed();
    let record = match out {
        Ok(out) => out.record,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let score = record.as_ref().map_or(0, |r| r.score);
    row.score = Some(score);
    row.exon_coverage = Some(record.as_ref().map_or(0.0, |r| exon_coverage(r, &exons)));
    let cells = (s1.len() as u128 + 1) * (s2.len() as u128 + 1);
    if cells <= oracle_cap {
        match smith_waterman(&s1, &s2, &cfg.scoring, oracle_cap) {
            Ok((best, _)) => {
                row.oracle_score = Some(best);
                if best > 0 {
                    row.score_ratio = Some(score as f64 / best as f64);
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}
