//! Command-line front end: `align`, `bench`, `oracle` and `eval`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::evalbench::{exon_coverage, run_benchmark, MutationModel};
use crate::oracle::{smith_waterman, DEFAULT_CELL_CAP};
use crate::pipeline::{align_pair, PipelineConfig};
use crate::seeding::SeedParams;
use crate::seqio::{emit_alignment, parse_exon_annotation, parse_fasta, OutputFormat, Sequence};
use crate::stitching::{ExtensionParams, ScoringScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Printed instead of an alignment when nothing could be chained.
pub const NO_ALIGNMENT: &str = "NO_ALIGNMENT";

#[derive(Parser, Debug)]
#[command(name = "mmalign", version, about = "Suffix-tree anchored pairwise local alignment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Align the first two records of a FASTA file.
    Align {
        fasta: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Time the pipeline on generated homologous pairs and report TSV.
    Bench {
        /// Comma-separated sequence lengths, one report row each.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
        lengths: Vec<usize>,
        /// Per-position substitution probability.
        #[arg(long = "sub", default_value_t = 0.05)]
        substitution: f64,
        /// Per-position indel probability.
        #[arg(long = "indel", default_value_t = 0.0)]
        indel: f64,
        /// Add a wall-time column (makes the report run-dependent).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        opts: Options,
    },
    /// Exact affine-gap Smith-Waterman on the first two FASTA records.
    Oracle {
        fasta: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Align, then report exon coverage against a tab-separated annotation.
    Eval {
        fasta: PathBuf,
        exons: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Text,
    Cigar,
    Tsv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Cigar => OutputFormat::Cigar,
            Format::Tsv => OutputFormat::Tsv,
        }
    }
}

#[derive(Args, Debug)]
struct Options {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long = "match", default_value_t = 1, allow_hyphen_values = true)]
    match_score: i32,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    mismatch: i32,
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    gap_open: i32,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    gap_extend: i32,
    /// Minimum anchor length, whatever the longest match is.
    #[arg(long, default_value_t = 10)]
    threshold_floor: usize,
    /// Neighborhood reach as a fraction of the current anchor length.
    #[arg(long, default_value_t = 0.6)]
    neighborhood: f64,
    #[arg(long, default_value_t = 20)]
    adaptive_len: usize,
    #[arg(long, default_value_t = 6)]
    adaptive_mm: usize,
    #[arg(long, value_delimiter = ',', default_value = "4,2")]
    perfect_lens: Vec<usize>,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    proximity: f64,
    #[arg(long, default_value_t = 10)]
    x_drop: i32,
    #[arg(long, default_value_t = 16)]
    band_pad: usize,
    /// Use only matches that occur once in each sequence as anchors.
    #[arg(long)]
    unique: bool,
    /// Stop at the first neighborhood chain instead of restarting.
    #[arg(long)]
    no_restart: bool,
    /// Cap on oracle DP cells.
    #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
    cell_cap: u128,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Options {
    fn scoring(&self) -> Result<ScoringScheme, Error> {
        ScoringScheme::new(self.match_score, self.mismatch, self.gap_open, self.gap_extend)
    }

    fn pipeline(&self) -> Result<PipelineConfig, Error> {
        let cfg = PipelineConfig {
            threshold_floor: self.threshold_floor,
            neighborhood_fraction: self.neighborhood,
            restart: !self.no_restart,
            unique_only: self.unique,
            seeds: SeedParams {
                adaptive_length: self.adaptive_len,
                adaptive_max_mismatch: self.adaptive_mm,
                perfect_lengths: self.perfect_lens.clone(),
                proximity_fraction: self.proximity,
                ..SeedParams::default()
            },
            extension: ExtensionParams {
                x_drop: self.x_drop,
                band_pad: self.band_pad,
            },
            scoring: self.scoring()?,
            threads: self.threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A failure with the exit status it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::SizeCap { .. }) { EXIT_CAP } else { EXIT_INPUT };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

fn read_pair(path: &Path) -> Result<(Sequence, Sequence), Failure> {
    let bytes = std::fs::read(path).map_err(|e| in_file(path)(e.into()))?;
    let mut records = parse_fasta(&bytes).map_err(in_file(path))?;
    if records.len() < 2 {
        return Err(Failure {
            code: EXIT_INPUT,
            message: format!("{}: expected at least two records, found {}", path.display(), records.len()),
        });
    }
    records.truncate(2);
    let s2 = records.pop().unwrap_or_else(|| unreachable!());
    let s1 = records.pop().unwrap_or_else(|| unreachable!());
    Ok((s1, s2))
}

fn deliver(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| in_file(path)(e.into())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::from(Error::from(e))),
    }
}

fn align(fasta: &Path, opts: &Options, stdout: &mut dyn Write) -> Result<(), Failure> {
    let cfg = opts.pipeline()?;
    let (s1, s2) = read_pair(fasta)?;
    let out = align_pair(&s1, &s2, &cfg)?;
    let text = match &out.record {
        Some(rec) => emit_alignment(rec, s1.residues(), s2.residues(), opts.format.into()),
        None => format!("{NO_ALIGNMENT}\n"),
    };
    deliver(&text, opts.out.as_deref(), stdout)
}

fn oracle(fasta: &Path, opts: &Options, stdout: &mut dyn Write) -> Result<(), Failure> {
    let scoring = opts.scoring()?;
    let (s1, s2) = read_pair(fasta)?;
    let (score, rec) = smith_waterman(&s1, &s2, &scoring, opts.cell_cap)?;
    let text = format!(
        "score\t{score}\n{}",
        emit_alignment(&rec, s1.residues(), s2.residues(), opts.format.into())
    );
    deliver(&text, opts.out.as_deref(), stdout)
}

fn eval(fasta: &Path, exons: &Path, opts: &Options, stdout: &mut dyn Write) -> Result<(), Failure> {
    let cfg = opts.pipeline()?;
    let (s1, s2) = read_pair(fasta)?;
    let bytes = std::fs::read(exons).map_err(|e| in_file(exons)(e.into()))?;
    let annotation = parse_exon_annotation(&bytes).map_err(in_file(exons))?;
    annotation.check_bounds(s1.len(), s2.len()).map_err(in_file(exons))?;
    let out = align_pair(&s1, &s2, &cfg)?;
    let coverage = out.record.as_ref().map_or(0.0, |r| exon_coverage(r, &annotation));
    deliver(&format!("{coverage:.6}\n"), opts.out.as_deref(), stdout)
}

struct BenchArgs<'a> {
    lengths: &'a [usize],
    substitution: f64,
    indel: f64,
    timing: bool,
}

fn bench(args: BenchArgs<'_>, opts: &Options, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let cfg = opts.pipeline()?;
    let model = MutationModel {
        substitution_rate: args.substitution,
        indel_rate: args.indel,
        rng_seed: opts.seed,
        ..MutationModel::default()
    };
    model.validate()?;
    if args.lengths.is_empty() || args.lengths.contains(&0) {
        return Err(Error::InvalidParameter("lengths must be positive".into()).into());
    }
    let report = run_benchmark(args.lengths, &model, &cfg, opts.cell_cap);
    for row in &report.rows {
        let _ = writeln!(stderr, "length {}\twall_time {:.3}s", row.length, row.wall_time.as_secs_f64());
    }
    deliver(&report.to_tsv(args.timing), opts.out.as_deref(), stdout)
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Align { fasta, opts } => align(fasta, opts, stdout),
        Command::Oracle { fasta, opts } => oracle(fasta, opts, stdout),
        Command::Eval { fasta, exons, opts } => eval(fasta, exons, opts, stdout),
        Command::Bench {
            lengths,
            substitution,
            indel,
            timing,
            opts,
        } => bench(
            BenchArgs {
                lengths,
                substitution: *substitution,
                indel: *indel,
                timing: *timing,
            },
            opts,
            stdout,
            stderr,
        ),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn missing_file_names_path() {
        let (code, _, err) = run_str(&["mmalign", "align", "/nonexistent/pair.fa"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("/nonexistent/pair.fa"));
    }

    #[test]
    fn bad_rate_is_input_error() {
        let (code, _, err) = run_str(&["mmalign", "bench", "--lengths", "100", "--sub", "1.5"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("1.5"));
    }

    #[test]
    fn negative_scores_parse() {
        let cli = Cli::try_parse_from(["mmalign", "oracle", "x.fa", "--mismatch", "-3", "--gap-open", "-5"]).unwrap();
        let Command::Oracle { opts, .. } = cli.command else {
            panic!("wrong subcommand");
        };
        assert_eq!((opts.mismatch, opts.gap_open, opts.gap_extend), (-3, -5, -1));
        assert_eq!(opts.perfect_lens, vec![4, 2]);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_str(&["mmalign", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("align"));
    }
}
