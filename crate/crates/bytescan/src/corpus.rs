//! Corpus ingestion, synthetic document generation, and corpus statistics.
//!
//! Files load as raw bytes: nothing is transcoded, no newline translation,
//! and NUL is an ordinary byte. Synthetic documents are produced by a fixed,
//! documented procedure (see [`generate_synthetic`]) so the same parameters
//! yield the same bytes on every platform and in every implementation.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::charset::CharSet;
use crate::kernel::KernelId;
use crate::stream;

/// SplitMix64, the mixing generator behind all synthetic corpora.
///
/// State advances by the golden-ratio increment; each output is the state
/// passed through two xor-shift-multiply rounds. Bounded draws use the
/// 128-bit multiply-shift reduction `(next_u64() * n) >> 64`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `0..n`.
    pub fn bounded(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}

/// Where a document's bytes came from.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    File(PathBuf),
    Synthetic(SynthParams),
}

/// A named byte buffer to scan.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusDoc {
    pub name: String,
    pub bytes: Vec<u8>,
    pub source: CorpusSource,
}

/// Reads a file verbatim. Empty files are fine; they scan as zero-length
/// documents.
pub fn load_corpus(path: &Path) -> io::Result<CorpusDoc> {
    let bytes = fs::read(path)?;
    Ok(CorpusDoc {
        name: path.display().to_string(),
        bytes,
        source: CorpusSource::File(path.to_path_buf()),
    })
}

/// Parameters for a synthetic document.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub length: usize,
    /// Fraction of bytes that are set members; the member count is
    /// `round(target_density * length)`.
    pub target_density: f64,
    pub seed: u64,
    /// Bytes used for non-member positions. Must contain no set members.
    /// Empty means "printable ASCII (0x20..=0x7E) minus the set members".
    pub filler_alphabet: Vec<u8>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("density {0} out of range, expected 0.0..=1.0")]
    DensityOutOfRange(f64),
    #[error("filler alphabet contains set member 0x{0:02X}")]
    FillerContainsMember(u8),
    #[error("filler alphabet is empty but {0} non-member bytes are needed")]
    EmptyFiller(usize),
}

/// Errors parsing the CLI synth spec `length=<N>,density=<float>,seed=<u64>`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthSpecError {
    #[error("bad synth token {0:?}: expected key=value")]
    BadToken(String),
    #[error("bad synth value for {key}: {value:?}")]
    BadValue { key: &'static str, value: String },
    #[error("unknown synth key {0:?}: valid keys are length, density, seed")]
    UnknownKey(String),
    #[error("synth spec is missing required key {0:?}")]
    MissingKey(&'static str),
}

impl SynthParams {
    /// Parses `length=<N>,density=<float>,seed=<u64>`; `seed` defaults to 0.
    pub fn parse(spec: &str) -> Result<Self, SynthSpecError> {
        let mut length: Option<usize> = None;
        let mut density: Option<f64> = None;
        let mut seed: u64 = 0;
        for token in spec.split(',') {
            let token = token.trim();
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| SynthSpecError::BadToken(token.to_string()))?;
            let bad = |key: &'static str| SynthSpecError::BadValue {
                key,
                value: value.to_string(),
            };
            match key.trim() {
                "length" => length = Some(value.trim().parse().map_err(|_| bad("length"))?),
                "density" => density = Some(value.trim().parse().map_err(|_| bad("density"))?),
                "seed" => seed = value.trim().parse().map_err(|_| bad("seed"))?,
                other => return Err(SynthSpecError::UnknownKey(other.to_string())),
            }
        }
        Ok(SynthParams {
            length: length.ok_or(SynthSpecError::MissingKey("length"))?,
            target_density: density.ok_or(SynthSpecError::MissingKey("density"))?,
            seed,
            filler_alphabet: Vec::new(),
        })
    }

    /// A name for reports; avoids commas so it drops into CSV unquoted.
    pub fn doc_name(&self) -> String {
        format!(
            "synth-len{}-d{}-s{}",
            self.length, self.target_density, self.seed
        )
    }
}

/// Generates a document of exactly `params.length` bytes containing exactly
/// `round(target_density * length)` member bytes.
///
/// The procedure, fixed for reproducibility:
/// 1. Seed [`SplitMix64`] with `params.seed`.
/// 2. If the filler alphabet is non-empty after defaulting, draw one filler
///    byte per position: `filler[rng.bounded(filler.len())]`.
/// 3. Pick member positions by a partial Fisher-Yates pass over the index
///    array `0..length`: for `j` in `0..member_count`, swap index `j` with
///    index `j + rng.bounded(length - j)`; the first `member_count` entries
///    are the match positions.
/// 4. For each selected position, in selection order, draw a member:
///    `members[rng.bounded(members.len())]`.
pub fn generate_synthetic(set: &CharSet, params: &SynthParams) -> Result<CorpusDoc, SynthError> {
    let density = params.target_density;
    if !(0.0..=1.0).contains(&density) {
        return Err(SynthError::DensityOutOfRange(density));
    }
    let n = params.length;
    assert!(n <= u32::MAX as usize, "synthetic corpus too large");
    let member_count = (density * n as f64).round() as usize;

    let filler: Vec<u8> = if params.filler_alphabet.is_empty() {
        (0x20u8..=0x7E).filter(|&b| !set.contains(b)).collect()
    } else {
        if let Some(&bad) = params.filler_alphabet.iter().find(|&&b| set.contains(b)) {
            return Err(SynthError::FillerContainsMember(bad));
        }
        params.filler_alphabet.clone()
    };
    if member_count < n && filler.is_empty() {
        return Err(SynthError::EmptyFiller(n - member_count));
    }

    let mut rng = SplitMix64::new(params.seed);
    let mut bytes = vec![0u8; n];
    if !filler.is_empty() {
        for b in bytes.iter_mut() {
            *b = filler[rng.bounded(filler.len() as u64) as usize];
        }
    }
    if member_count > 0 {
        let mut perm: Vec<u32> = (0..n as u32).collect();
        for j in 0..member_count {
            let k = j + rng.bounded((n - j) as u64) as usize;
            perm.swap(j, k);
        }
        let members = set.members();
        for &p in &perm[..member_count] {
            bytes[p as usize] = members[rng.bounded(members.len() as u64) as usize];
        }
    }

    Ok(CorpusDoc {
        name: params.doc_name(),
        bytes,
        source: CorpusSource::Synthetic(params.clone()),
    })
}

/// Byte count, match count, and density of one document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusStats {
    pub bytes: usize,
    pub matches: u64,
    pub ratio: f64,
}

/// Statistics always come from the scalar kernel, so corpus figures stay
/// valid even if a vector kernel regresses.
pub fn corpus_stats(set: &CharSet, doc: &CorpusDoc) -> CorpusStats {
    let mc = stream::count_matches(set, &doc.bytes, KernelId::Scalar);
    CorpusStats {
        bytes: doc.bytes.len(),
        matches: mc.count,
        ratio: mc.ratio,
    }
}
