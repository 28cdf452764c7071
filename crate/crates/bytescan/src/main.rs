//! Command-line front end: scan, verify, bench, stats, and synth.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bytescan::bench::{self, BenchOptions, BenchReport};
use bytescan::charset::CharSet;
use bytescan::corpus::{self, CorpusDoc, SynthParams};
use bytescan::kernel::KernelId;
use bytescan::perf;
use bytescan::stream::MatchStream;

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bytescan",
    version,
    about = "Find every occurrence of a small byte set with interchangeable scan kernels"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Corpus files, read as raw bytes
    files: Vec<PathBuf>,
    /// Synthetic corpus spec: length=<N>,density=<float>,seed=<u64>
    #[arg(long, value_name = "SPEC")]
    synth: Option<String>,
    /// Target byte set: comma-separated quoted characters, \xNN escapes, or
    /// the names NUL, CR, AMP, LT
    #[arg(long, default_value = "LT,CR,AMP,NUL", value_name = "SPEC")]
    chars: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every match position in one corpus
    Scan {
        #[command(flatten)]
        input: InputArgs,
        /// Kernel to scan with
        #[arg(long, default_value = "index64", value_name = "NAME")]
        kernel: String,
        /// Emit a JSON array instead of one position per line
        #[arg(long)]
        json: bool,
    },
    /// Run all kernels and compare their positions against the scalar kernel
    Verify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Measure scan throughput per kernel
    Bench {
        #[command(flatten)]
        input: InputArgs,
        /// Kernel name or "all"
        #[arg(long, default_value = "all", value_name = "NAME")]
        kernel: String,
        /// Timed repetitions per kernel
        #[arg(long, default_value_t = 5)]
        reps: u32,
        /// Discarded warmup rounds per kernel
        #[arg(long, default_value_t = 1)]
        warmup: u32,
        /// Emit reports as a JSON array
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit reports as CSV rows
        #[arg(long)]
        csv: bool,
        /// Pin the benchmark to one logical CPU
        #[arg(long)]
        pin_cpu: bool,
        /// Report retired instructions per byte and per cycle when the OS
        /// exposes hardware counters
        #[arg(long)]
        counters: bool,
    },
    /// Print bytes, matches, and match ratio per corpus
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Emit rows as a JSON array
        #[arg(long)]
        json: bool,
    },
    /// Generate a synthetic corpus and write it to a file
    Synth {
        /// Synthetic corpus spec: length=<N>,density=<float>,seed=<u64>
        #[arg(long, value_name = "SPEC")]
        synth: String,
        /// Output path
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Target byte set the density refers to
        #[arg(long, default_value = "LT,CR,AMP,NUL", value_name = "SPEC")]
        chars: String,
    },
}

struct CliError {
    code: u8,
    message: String,
}

fn usage(err: impl Display) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: err.to_string(),
    }
}

fn io_error(err: impl Display) -> CliError {
    CliError {
        code: EXIT_IO,
        message: err.to_string(),
    }
}

fn verify_failed() -> CliError {
    CliError {
        code: EXIT_VERIFY,
        message: String::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Scan {
            input,
            kernel,
            json,
        } => cmd_scan(&input, &kernel, json),
        Cmd::Verify { input } => cmd_verify(&input),
        Cmd::Bench {
            input,
            kernel,
            reps,
            warmup,
            json,
            csv,
            pin_cpu,
            counters,
        } => cmd_bench(&input, &kernel, reps, warmup, json, csv, pin_cpu, counters),
        Cmd::Stats { input, json } => cmd_stats(&input, json),
        Cmd::Synth { synth, out, chars } => cmd_synth(&synth, &out, &chars),
    }
}

fn load_inputs(input: &InputArgs) -> Result<(CharSet, Vec<CorpusDoc>), CliError> {
    let set = CharSet::from_spec(&input.chars).map_err(usage)?;
    let mut docs = Vec::new();
    for path in &input.files {
        let doc = corpus::load_corpus(path)
            .map_err(|e| io_error(format_args!("{}: {e}", path.display())))?;
        docs.push(doc);
    }
    if let Some(spec) = &input.synth {
        let params = SynthParams::parse(spec).map_err(usage)?;
        docs.push(corpus::generate_synthetic(&set, &params).map_err(usage)?);
    }
    if docs.is_empty() {
        return Err(usage("no corpus given: pass FILE arguments or --synth"));
    }
    Ok((set, docs))
}

fn parse_kernels(name: &str) -> Result<Vec<KernelId>, CliError> {
    if name == "all" {
        Ok(KernelId::ALL.to_vec())
    } else {
        Ok(vec![name.parse::<KernelId>().map_err(usage)?])
    }
}

/// Test hook for the verification machinery: when `BYTESCAN_FAULT_BIT` is
/// set to an absolute position (or `block:bit` within 64-byte blocks), the
/// index64 position stream has that position's membership flipped, as if
/// one bit of one block index had been corrupted.
fn fault_position() -> Option<usize> {
    let raw = std::env::var("BYTESCAN_FAULT_BIT").ok()?;
    let raw = raw.trim();
    if let Some((block, bit)) = raw.split_once(':') {
        let block: usize = block.trim().parse().ok()?;
        let bit: usize = bit.trim().parse().ok()?;
        Some(block * 64 + bit.min(63))
    } else {
        raw.parse().ok()
    }
}

/// Iterator adaptor flipping one position's membership in an ascending
/// position stream: drops the position if yielded, inserts it otherwise.
struct FaultFlip<I> {
    inner: I,
    fault: Option<usize>,
    pending: Option<usize>,
}

impl<I: Iterator<Item = usize>> FaultFlip<I> {
    fn new(inner: I, fault: Option<usize>) -> Self {
        FaultFlip {
            inner,
            fault,
            pending: None,
        }
    }
}

impl<I: Iterator<Item = usize>> Iterator for FaultFlip<I> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if let Some(p) = self.pending.take() {
            return Some(p);
        }
        loop {
            match (self.inner.next(), self.fault) {
                (Some(p), Some(f)) if p == f => {
                    // The faulty bit cleared a real match.
                    self.fault = None;
                    continue;
                }
                (Some(p), Some(f)) if f < p => {
                    // The faulty bit invented a match before this one.
                    self.fault = None;
                    self.pending = Some(p);
                    return Some(f);
                }
                (Some(p), _) => return Some(p),
                (None, Some(f)) => {
                    self.fault = None;
                    return Some(f);
                }
                (None, None) => return None,
            }
        }
    }
}

fn positions<'a>(set: &'a CharSet, data: &'a [u8], kernel: KernelId) -> FaultFlip<MatchStream<'a>> {
    let fault = match kernel {
        KernelId::Index64 => fault_position().filter(|&p| p < data.len()),
        _ => None,
    };
    FaultFlip::new(MatchStream::new(set, data, kernel), fault)
}

fn cmd_scan(input: &InputArgs, kernel: &str, json: bool) -> Result<(), CliError> {
    let (set, docs) = load_inputs(input)?;
    if docs.len() != 1 {
        return Err(usage("scan takes exactly one corpus"));
    }
    let kernel: KernelId = kernel.parse().map_err(usage)?;
    let doc = &docs[0];
    let stdout = std::io::stdout().lock();
    let mut out = std::io::BufWriter::new(stdout);
    fn write_err(e: impl Display) -> CliError {
        io_error(format_args!("writing output: {e}"))
    }
    if json {
        let all: Vec<usize> = positions(&set, &doc.bytes, kernel).collect();
        serde_json::to_writer(&mut out, &all).map_err(write_err)?;
        writeln!(out).map_err(write_err)?;
    } else {
        for p in positions(&set, &doc.bytes, kernel) {
            writeln!(out, "{p}").map_err(write_err)?;
        }
    }
    out.flush().map_err(write_err)?;
    Ok(())
}

fn cmd_verify(input: &InputArgs) -> Result<(), CliError> {
    let (set, docs) = load_inputs(input)?;
    let mut all_pass = true;
    for doc in &docs {
        let reference: Vec<usize> = positions(&set, &doc.bytes, KernelId::Scalar).collect();
        println!(
            "{}: scalar reference yields {} matches over {} bytes",
            doc.name,
            reference.len(),
            doc.bytes.len()
        );
        for kernel in [KernelId::Webkit16, KernelId::Blink16, KernelId::Index64] {
            match first_divergence(&reference, positions(&set, &doc.bytes, kernel)) {
                None => println!("{}: {kernel}: PASS", doc.name),
                Some(diff) => {
                    all_pass = false;
                    println!("{}: {kernel}: FAIL ({diff})", doc.name);
                }
            }
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(verify_failed())
    }
}

fn first_divergence(reference: &[usize], got: impl Iterator<Item = usize>) -> Option<String> {
    let mut expected = reference.iter().copied();
    let mut got = got;
    let mut index = 0usize;
    loop {
        match (expected.next(), got.next()) {
            (Some(want), Some(have)) if want == have => index += 1,
            (Some(want), Some(have)) => {
                return Some(format!(
                    "first divergence at match #{index}: expected position {want}, got {have}"
                ))
            }
            (Some(want), None) => return Some(format!("missing position {want} (match #{index})")),
            (None, Some(have)) => return Some(format!("extra position {have} (match #{index})")),
            (None, None) => return None,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    input: &InputArgs,
    kernel: &str,
    reps: u32,
    warmup: u32,
    json: bool,
    csv: bool,
    pin_cpu: bool,
    counters: bool,
) -> Result<(), CliError> {
    let (set, docs) = load_inputs(input)?;
    let kernels = parse_kernels(kernel)?;
    if reps < 1 {
        return Err(usage("--reps must be at least 1"));
    }
    if pin_cpu {
        if let Err(e) = bench::pin_to_cpu(0) {
            eprintln!("warning: could not pin to a cpu: {e}");
        }
    }
    let opts = BenchOptions { reps, warmup };

    let mut reports: Vec<BenchReport> = Vec::new();
    for doc in &docs {
        let run = bench::bench_corpus_with(&doc.name, doc.bytes.len(), &kernels, opts, |k| {
            positions(&set, &doc.bytes, k)
        });
        match run {
            Ok(mut r) => reports.append(&mut r),
            Err(e @ bench::BenchError::ChecksumMismatch { .. }) => {
                return Err(CliError {
                    code: EXIT_VERIFY,
                    message: e.to_string(),
                })
            }
            Err(e) => return Err(usage(e)),
        }
    }

    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reports).map_err(io_error)?
        );
    } else if csv {
        println!("kernel,corpus,bytes,matches,reps,elapsed_s,gbps,checksum");
        for r in &reports {
            println!(
                "{},{},{},{},{},{},{},{:016x}",
                r.kernel,
                csv_field(&r.corpus),
                r.bytes,
                r.matches,
                r.reps,
                r.elapsed_s,
                r.gbps,
                r.checksum
            );
        }
    } else {
        print_bench_table(&reports);
    }

    if counters {
        report_counters(&set, &docs, &kernels);
    }
    Ok(())
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn print_bench_table(reports: &[BenchReport]) {
    println!(
        "{:<10} {:<28} {:>10} {:>8} {:>5} {:>10} {:>10} {:>10} {:>8}  checksum",
        "kernel",
        "corpus",
        "bytes",
        "matches",
        "reps",
        "min_ms",
        "median_ms",
        "mean_ms",
        "GB/s"
    );
    for r in reports {
        println!(
            "{:<10} {:<28} {:>10} {:>8} {:>5} {:>10.4} {:>10.4} {:>10.4} {:>8.3}  {:016x}",
            r.kernel.name(),
            r.corpus,
            r.bytes,
            r.matches,
            r.reps,
            r.round_min_s * 1e3,
            r.round_median_s * 1e3,
            r.round_mean_s * 1e3,
            r.gbps,
            r.checksum
        );
    }
}

/// One extra traversal per kernel between counter reads; prints per-byte and
/// per-cycle instruction figures, or a single "unavailable" note.
fn report_counters(set: &CharSet, docs: &[CorpusDoc], kernels: &[KernelId]) {
    let counters = match perf::Counters::open() {
        Ok(c) => c,
        Err(e) => {
            println!("hardware counters: unavailable ({e})");
            return;
        }
    };
    for doc in docs {
        for &kernel in kernels {
            let Ok(before) = counters.read() else {
                println!("hardware counters: unavailable (read failed)");
                return;
            };
            let mut sink = 0u64;
            for p in positions(set, &doc.bytes, kernel) {
                sink = bench::fold_position(sink, p as u64);
            }
            std::hint::black_box(sink);
            let Ok(after) = counters.read() else {
                println!("hardware counters: unavailable (read failed)");
                return;
            };
            let delta = after.delta(before);
            let bytes = doc.bytes.len().max(1) as f64;
            let cycles = delta.cycles.max(1) as f64;
            println!(
                "{}: {kernel}: {:.3} ins/byte, {:.2} ins/cycle",
                doc.name,
                delta.instructions as f64 / bytes,
                delta.instructions as f64 / cycles,
            );
        }
    }
}

fn cmd_stats(input: &InputArgs, json: bool) -> Result<(), CliError> {
    let (set, docs) = load_inputs(input)?;
    #[derive(serde::Serialize)]
    struct Row<'a> {
        corpus: &'a str,
        bytes: usize,
        matches: u64,
        ratio: f64,
    }
    let rows: Vec<Row> = docs
        .iter()
        .map(|doc| {
            let s = corpus::corpus_stats(&set, doc);
            Row {
                corpus: &doc.name,
                bytes: s.bytes,
                matches: s.matches,
                ratio: s.ratio,
            }
        })
        .collect();
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&rows).map_err(io_error)?
        );
    } else {
        println!(
            "{:<40} {:>12} {:>10} {:>8}",
            "file", "bytes", "matches", "ratio"
        );
        for r in &rows {
            println!(
                "{:<40} {:>12} {:>10} {:>7.2}%",
                r.corpus,
                r.bytes,
                r.matches,
                r.ratio * 100.0
            );
        }
    }
    Ok(())
}

fn cmd_synth(spec: &str, out: &std::path::Path, chars: &str) -> Result<(), CliError> {
    let set = CharSet::from_spec(chars).map_err(usage)?;
    let params = SynthParams::parse(spec).map_err(usage)?;
    let doc = corpus::generate_synthetic(&set, &params).map_err(usage)?;
    std::fs::write(out, &doc.bytes)
        .map_err(|e| io_error(format_args!("{}: {e}", out.display())))?;
    let stats = corpus::corpus_stats(&set, &doc);
    println!(
        "wrote {} ({} bytes, {} matches, {:.2}%)",
        out.display(),
        stats.bytes,
        stats.matches,
        stats.ratio * 100.0
    );
    Ok(())
}
