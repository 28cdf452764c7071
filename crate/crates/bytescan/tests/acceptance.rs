//! Acceptance suite: one test per criterion. Each prints a PASS line with
//! its measurements (run with `--nocapture` to see them).

use std::time::{Duration, Instant};

use bytescan::bench::{self, BenchOptions};
use bytescan::charset::CharSet;
use bytescan::corpus::{self, SplitMix64, SynthParams};
use bytescan::kernel::{
    self, blink_narrowed_mask, build_index64, first_index_blink, first_index_webkit,
    webkit_candidates, ClassifiedBlock16, KernelId,
};
use bytescan::stream::MatchStream;

fn lanes_at(positions: &[usize]) -> ClassifiedBlock16 {
    let mut bits = 0u16;
    for &p in positions {
        bits |= 1 << p;
    }
    ClassifiedBlock16::from_match_bits(bits)
}

fn brute_force(set: &CharSet, data: &[u8]) -> Vec<usize> {
    data.iter()
        .enumerate()
        .filter(|(_, &b)| set.contains(b))
        .map(|(i, _)| i)
        .collect()
}

fn synth(set: &CharSet, length: usize, density: f64, seed: u64) -> corpus::CorpusDoc {
    corpus::generate_synthetic(
        set,
        &SynthParams {
            length,
            target_density: density,
            seed,
            filler_alphabet: Vec::new(),
        },
    )
    .expect("valid synth params")
}

#[test]
fn acceptance_1_worked_examples() {
    let start = Instant::now();

    // (a) Matches at lanes 1 and 15: the or-not intermediate keeps the two
    // indexes and saturates everything else; its minimum is 1.
    let block = lanes_at(&[1, 15]);
    let candidates = webkit_candidates(&block);
    let mut expected = [0xFFu8; 16];
    expected[1] = 1;
    expected[15] = 15;
    assert_eq!(candidates, expected);
    assert_eq!(candidates.iter().copied().min(), Some(1));
    assert_eq!(first_index_webkit(&block), Some(1));

    // (b) Matches at lanes 0 and 15: narrowing puts a 0xF nibble at bits
    // 0..4 and 60..64, and trailing-zeros/4 recovers index 0.
    let block = lanes_at(&[0, 15]);
    let narrowed = blink_narrowed_mask(&block);
    assert_eq!(narrowed, 0xF00000000000000F);
    assert_eq!(narrowed.trailing_zeros() / 4, 0);
    assert_eq!(first_index_blink(&block), Some(0));

    // (c) 64 member bytes collapse to the all-ones index.
    let set = CharSet::html();
    assert_eq!(build_index64(&set, &[b'<'; 64]).bits(), u64::MAX);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE 1 (worked examples): PASS in {elapsed:?}");
}

#[test]
fn acceptance_2_exhaustive_find_first_equivalence() {
    let start = Instant::now();
    for bits in 0..=u16::MAX {
        let block = ClassifiedBlock16::from_match_bits(bits);
        let linear = (0..16).find(|&i| bits & (1 << i) != 0);
        let webkit = first_index_webkit(&block);
        let blink = first_index_blink(&block);
        assert_eq!(webkit, linear, "webkit diverges on pattern {bits:#06x}");
        assert_eq!(blink, linear, "blink diverges on pattern {bits:#06x}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("ACCEPTANCE 2 (exhaustive find-first over 65536 patterns): PASS in {elapsed:?}");
}

fn random_charset(rng: &mut SplitMix64) -> CharSet {
    let size = 1 + rng.bounded(16) as usize;
    let mut nibbles: Vec<u8> = (0..16).collect();
    for i in (1..16usize).rev() {
        let j = rng.bounded((i + 1) as u64) as usize;
        nibbles.swap(i, j);
    }
    let members: Vec<u8> = nibbles[..size]
        .iter()
        .map(|&nib| (((rng.next_u64() & 0x0F) as u8) << 4) | nib)
        .collect();
    CharSet::new(&members).expect("nibbles are distinct by construction")
}

#[test]
fn acceptance_3_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xACCE5503);
    let docs = 10_000;
    for round in 0..docs {
        let set = random_charset(&mut rng);
        let length = rng.bounded(4097) as usize;
        let density = rng.bounded(2501) as f64 / 10_000.0;
        let doc = synth(&set, length, density, rng.next_u64());
        let oracle = brute_force(&set, &doc.bytes);
        for kernel in KernelId::ALL {
            let got: Vec<usize> = MatchStream::new(&set, &doc.bytes, kernel).collect();
            assert_eq!(
                got, oracle,
                "kernel {kernel} diverges on round {round} ({} bytes, density {density})",
                length
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("ACCEPTANCE 3 (oracle equivalence over {docs} random documents): PASS in {elapsed:?}");
}

#[test]
fn acceptance_4_non_reload_property() {
    let set = CharSet::html();
    for length in [
        0usize, 1, 63, 64, 65, 127, 128, 200, 1000, 4096, 4159, 65536,
    ] {
        let mut seen = None;
        for density in [0.0, 0.01, 0.5, 1.0] {
            let doc = synth(&set, length, density, 11);
            let mut stream = MatchStream::new(&set, &doc.bytes, KernelId::Index64);
            let matches = stream.by_ref().count();
            let metrics = stream.metrics();
            assert_eq!(
                metrics.block_loads as usize,
                length / 64,
                "length {length} density {density}"
            );
            assert_eq!(
                metrics.tail_bytes as usize,
                length % 64,
                "length {length} density {density}"
            );
            assert!(metrics.tail_bytes <= 63);
            assert_eq!(matches, (density * length as f64).round() as usize);
            // Identical work regardless of how many matches there were.
            if let Some(prev_metrics) = seen {
                assert_eq!(metrics, prev_metrics);
            }
            seen = Some(metrics);
        }
    }
    println!("ACCEPTANCE 4 (index64 classifies each block exactly once): PASS");
}

#[test]
fn acceptance_5_corpus_statistics() {
    let set = CharSet::html();

    // Synthetic corpora reproduce their configured counts exactly.
    for (length, density) in [
        (418_417usize, 0.0106f64),
        (213_748, 0.0112),
        (20_319, 0.0187),
        (100_000, 0.0106),
        (100_000, 0.0112),
        (100_000, 0.0187),
    ] {
        let expected = (density * length as f64).round() as u64;
        let doc = synth(&set, length, density, 1);
        let stats = corpus::corpus_stats(&set, &doc);
        assert_eq!(stats.bytes, length);
        assert_eq!(stats.matches, expected, "length {length} density {density}");
        assert!((stats.ratio - stats.matches as f64 / stats.bytes as f64).abs() < 1e-15);
    }

    // With the reference captures supplied, their exact figures must appear.
    match std::env::var("BYTESCAN_CORPUS_DIR") {
        Ok(dir) => {
            let dir = std::path::Path::new(&dir);
            for (file, bytes, matches, percent) in [
                ("bbc.html", 418_417usize, 4420u64, "1.06"),
                ("office.html", 213_748, 2393, "1.12"),
                ("google.html", 20_319, 380, "1.87"),
            ] {
                let doc = corpus::load_corpus(&dir.join(file))
                    .unwrap_or_else(|e| panic!("cannot read {file}: {e}"));
                let stats = corpus::corpus_stats(&set, &doc);
                assert_eq!(stats.bytes, bytes, "{file}");
                assert_eq!(stats.matches, matches, "{file}");
                assert_eq!(format!("{:.2}", stats.ratio * 100.0), percent, "{file}");
            }
            println!("ACCEPTANCE 5 (corpus statistics, captures + synthetic): PASS");
        }
        Err(_) => {
            println!(
                "ACCEPTANCE 5 (corpus statistics, synthetic; set BYTESCAN_CORPUS_DIR \
                 with bbc.html/office.html/google.html to check the captures): PASS"
            );
        }
    }
}

/// Hardware-dependent throughput ordering. Reported on every run; failures
/// only fail the test when BYTESCAN_PERF_STRICT=1, since the bounds assume
/// a quiet machine with 128-bit vector units.
#[test]
fn acceptance_6_performance_ordering() {
    let start = Instant::now();
    if !kernel::simd_active() {
        println!("ACCEPTANCE 6 (performance ordering): SKIP — no 128-bit vector unit");
        return;
    }
    let _ = bench::pin_to_cpu(0);
    let set = CharSet::html();
    let doc = synth(&set, 131_072, 0.01, 1);
    let reports = bench::bench_corpus(
        &set,
        &doc.name,
        &doc.bytes,
        &KernelId::ALL,
        BenchOptions {
            reps: 31,
            warmup: 6,
        },
    )
    .expect("bench run");
    let gbps = |k: KernelId| {
        reports
            .iter()
            .find(|r| r.kernel == k)
            .map(|r| r.gbps)
            .unwrap()
    };
    let scalar = gbps(KernelId::Scalar);
    let webkit = gbps(KernelId::Webkit16);
    let blink = gbps(KernelId::Blink16);
    let index = gbps(KernelId::Index64);
    let faster_block16 = webkit.max(blink);

    let ordering = scalar < webkit && scalar < blink && webkit < index && blink < index;
    let twice_block16 = index >= 2.0 * faster_block16;
    let five_times_scalar = index >= 5.0 * scalar;
    let all = ordering && twice_block16 && five_times_scalar;

    println!(
        "ACCEPTANCE 6 (performance ordering): {} — scalar {scalar:.2}, webkit16 {webkit:.2}, \
         blink16 {blink:.2}, index64 {index:.2} GB/s; ordering {}; index64/block16 {:.2}x \
         (want >= 2); index64/scalar {:.2}x (want >= 5)",
        if all { "PASS" } else { "FAIL (not a CI gate)" },
        if ordering { "ok" } else { "VIOLATED" },
        index / faster_block16,
        index / scalar,
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    if std::env::var("BYTESCAN_PERF_STRICT").as_deref() == Ok("1") {
        assert!(
            all,
            "strict performance gate: ordering={ordering} 2x={twice_block16} 5x={five_times_scalar}"
        );
    }
}

#[test]
fn acceptance_7_checksum_agreement() {
    // Every bench run checks position-fold checksums across kernels.
    let set = CharSet::html();
    let doc = synth(&set, 50_000, 0.013, 99);
    let reports = bench::bench_corpus(
        &set,
        &doc.name,
        &doc.bytes,
        &KernelId::ALL,
        BenchOptions { reps: 2, warmup: 0 },
    )
    .expect("agreeing kernels");
    let first = reports[0].checksum;
    assert!(reports.iter().all(|r| r.checksum == first));

    // A deliberately injected index64 fault must abort the CLI bench with
    // exit code 3.
    let bin = env!("CARGO_BIN_EXE_bytescan");
    let clean = std::process::Command::new(bin)
        .args([
            "bench",
            "--synth",
            "length=4096,density=0.01,seed=1",
            "--reps",
            "2",
        ])
        .env_remove("BYTESCAN_FAULT_BIT")
        .output()
        .expect("run bytescan bench");
    assert!(clean.status.success(), "clean bench must pass");

    let faulted = std::process::Command::new(bin)
        .args([
            "bench",
            "--synth",
            "length=4096,density=0.01,seed=1",
            "--reps",
            "2",
        ])
        .env("BYTESCAN_FAULT_BIT", "0:3")
        .output()
        .expect("run faulted bytescan bench");
    assert_eq!(
        faulted.status.code(),
        Some(3),
        "faulted bench must exit 3; stderr: {}",
        String::from_utf8_lossy(&faulted.stderr)
    );
    let stderr = String::from_utf8_lossy(&faulted.stderr);
    assert!(
        stderr.contains("checksum mismatch"),
        "stderr should name the mismatch: {stderr}"
    );
    println!("ACCEPTANCE 7 (checksum agreement + fault injection): PASS");
}
