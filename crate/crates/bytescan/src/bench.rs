//! Throughput measurement with a checksum sink.
//!
//! A round is one full match-stream traversal with every yielded position
//! folded into a 64-bit FNV-1a checksum. The checksum lands in the report,
//! so the traversal cannot be elided, and it must agree across kernels for
//! the same corpus or the run is rejected. Round times are taken per
//! repetition; throughput comes from the median round so scheduler noise on
//! a busy desk machine does not skew comparisons.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::charset::CharSet;
use crate::kernel::KernelId;
use crate::stream::MatchStream;

/// FNV-1a 64-bit offset basis; checksums start here.
pub const CHECKSUM_SEED: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

/// Folds one match position into the running checksum: one FNV-1a step over
/// the position as a 64-bit unit (xor, then multiply by the FNV prime).
/// Order-sensitive, so any divergence in the position sequence changes the
/// result, and cheap enough not to color kernel comparisons.
#[inline]
pub fn fold_position(acc: u64, pos: u64) -> u64 {
    (acc ^ pos).wrapping_mul(FNV_PRIME)
}

/// One kernel's result over one corpus.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub kernel: KernelId,
    pub corpus: String,
    pub bytes: usize,
    pub matches: u64,
    pub reps: u32,
    /// Median round time scaled by `reps`, so
    /// `gbps = bytes * reps / elapsed_s / 1e9`.
    pub elapsed_s: f64,
    pub gbps: f64,
    pub checksum: u64,
    pub round_min_s: f64,
    pub round_median_s: f64,
    pub round_mean_s: f64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("repetitions must be at least 1")]
    ZeroReps,
    #[error(
        "checksum mismatch on {corpus:?}: {kernel} produced {got:016x}, \
         but {reference} produced {want:016x}"
    )]
    ChecksumMismatch {
        corpus: String,
        kernel: KernelId,
        got: u64,
        reference: KernelId,
        want: u64,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    /// Timed rounds per kernel, at least 1.
    pub reps: u32,
    /// Discarded rounds per kernel before timing starts.
    pub warmup: u32,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { reps: 5, warmup: 1 }
    }
}

/// Runs every kernel over the corpus and reports throughput. Fails if any
/// kernel's position checksum differs from the first kernel's.
pub fn bench_corpus(
    set: &CharSet,
    name: &str,
    data: &[u8],
    kernels: &[KernelId],
    opts: BenchOptions,
) -> Result<Vec<BenchReport>, BenchError> {
    bench_corpus_with(name, data.len(), kernels, opts, |kernel| {
        MatchStream::new(set, data, kernel)
    })
}

/// [`bench_corpus`] over caller-supplied position streams. `streams` is
/// called once per round and must yield the corpus's match positions for
/// the given kernel.
pub fn bench_corpus_with<I, F>(
    name: &str,
    bytes: usize,
    kernels: &[KernelId],
    opts: BenchOptions,
    mut streams: F,
) -> Result<Vec<BenchReport>, BenchError>
where
    I: Iterator<Item = usize>,
    F: FnMut(KernelId) -> I,
{
    if opts.reps == 0 {
        return Err(BenchError::ZeroReps);
    }
    let mut reports = Vec::with_capacity(kernels.len());
    let mut reference: Option<(KernelId, u64)> = None;
    for &kernel in kernels {
        for _ in 0..opts.warmup {
            run_round(streams(kernel));
        }
        let mut rounds = Vec::with_capacity(opts.reps as usize);
        let mut matches = 0u64;
        let mut checksum = CHECKSUM_SEED;
        for _ in 0..opts.reps {
            let start = Instant::now();
            let (count, fold) = run_round(streams(kernel));
            rounds.push(start.elapsed().as_secs_f64());
            matches = count;
            checksum = fold;
        }
        match reference {
            None => reference = Some((kernel, checksum)),
            Some((ref_kernel, want)) if want != checksum => {
                return Err(BenchError::ChecksumMismatch {
                    corpus: name.to_string(),
                    kernel,
                    got: checksum,
                    reference: ref_kernel,
                    want,
                });
            }
            Some(_) => {}
        }

        let mut sorted = rounds.clone();
        sorted.sort_by(f64::total_cmp);
        let round_min_s = sorted[0];
        let round_median_s = median_of_sorted(&sorted);
        let round_mean_s = rounds.iter().sum::<f64>() / rounds.len() as f64;
        let elapsed_s = round_median_s * opts.reps as f64;
        let gbps = if elapsed_s > 0.0 {
            (bytes as f64 * opts.reps as f64) / elapsed_s / 1e9
        } else {
            0.0
        };
        reports.push(BenchReport {
            kernel,
            corpus: name.to_string(),
            bytes,
            matches,
            reps: opts.reps,
            elapsed_s,
            gbps,
            checksum,
            round_min_s,
            round_median_s,
            round_mean_s,
        });
    }
    Ok(reports)
}

#[inline]
fn run_round<I: Iterator<Item = usize>>(stream: I) -> (u64, u64) {
    let mut checksum = CHECKSUM_SEED;
    let mut count = 0u64;
    for pos in stream {
        checksum = fold_position(checksum, pos as u64);
        count += 1;
    }
    (count, std::hint::black_box(checksum))
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Pins the current thread to one logical CPU so a measurement run is not
/// migrated mid-round.
#[cfg(target_os = "linux")]
pub fn pin_to_cpu(cpu: usize) -> std::io::Result<()> {
    // SAFETY: cpu_set_t is plain data; sched_setaffinity reads it for the
    // calling thread only.
    unsafe {
        let mut cpuset: libc::cpu_set_t = std::mem::zeroed();
        libc::CPU_SET(cpu, &mut cpuset);
        if libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &cpuset) != 0 {
            return Err(std::io::Error::last_os_error());
        }
    }
    Ok(())
}

#[cfg(not(target_os = "linux"))]
pub fn pin_to_cpu(_cpu: usize) -> std::io::Result<()> {
    Err(std::io::Error::new(
        std::io::ErrorKind::Unsupported,
        "cpu pinning is not supported on this platform",
    ))
}
