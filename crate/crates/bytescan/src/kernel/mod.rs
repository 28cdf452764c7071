//! The four scanning kernels.
//!
//! All kernels find the same positions; they differ in how much input they
//! touch per step and how they turn a block classification into an index:
//!
//! * `scalar` — one byte at a time, the trust anchor everything else is
//!   checked against.
//! * `webkit16` — 16-byte blocks; match detection by horizontal byte max,
//!   first-index extraction by or-not with a lane-index vector and a
//!   horizontal min.
//! * `blink16` — 16-byte blocks; the compare result is narrowed to a 64-bit
//!   word (4 bits per lane) and the first index is trailing-zeros / 4.
//! * `index64` — non-overlapping 64-byte blocks folded into a bit-per-byte
//!   64-bit index which is then iterated without reloading input.
//!
//! Every operation has a portable scalar implementation producing
//! bit-identical results; SSSE3 and NEON paths are selected automatically
//! when present. Inputs may be arbitrarily aligned.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charset::CharSet;

mod scalar;

#[cfg(target_arch = "aarch64")]
mod neon;
#[cfg(target_arch = "x86_64")]
mod sse;

/// Kernel selector, by the names the CLI and benchmark harness use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelId {
    Scalar,
    Webkit16,
    Blink16,
    Index64,
}

impl KernelId {
    pub const ALL: [KernelId; 4] = [
        KernelId::Scalar,
        KernelId::Webkit16,
        KernelId::Blink16,
        KernelId::Index64,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::Scalar => "scalar",
            KernelId::Webkit16 => "webkit16",
            KernelId::Blink16 => "blink16",
            KernelId::Index64 => "index64",
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rejected kernel name, remembering what was asked for.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown kernel {0:?}: valid kernels are scalar, webkit16, blink16, index64")]
pub struct UnknownKernel(pub String);

impl FromStr for KernelId {
    type Err = UnknownKernel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scalar" => Ok(KernelId::Scalar),
            "webkit16" => Ok(KernelId::Webkit16),
            "blink16" => Ok(KernelId::Blink16),
            "index64" => Ok(KernelId::Index64),
            other => Err(UnknownKernel(other.to_string())),
        }
    }
}

/// The two 16-byte block kernels, distinguished by first-index extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block16Variant {
    Webkit,
    Blink,
}

/// Classification result for a 16-byte block: lane i is 0xFF when byte i is
/// a set member, 0x00 otherwise. No other lane values can occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifiedBlock16 {
    lanes: [u8; 16],
}

impl ClassifiedBlock16 {
    /// Builds a block from a 16-bit match pattern, bit i controlling lane i.
    pub fn from_match_bits(bits: u16) -> Self {
        let mut lanes = [0u8; 16];
        for (i, lane) in lanes.iter_mut().enumerate() {
            *lane = if bits & (1 << i) != 0 { 0xFF } else { 0x00 };
        }
        ClassifiedBlock16 { lanes }
    }

    pub fn lanes(&self) -> &[u8; 16] {
        &self.lanes
    }

    /// The lanes compacted back to one bit each.
    pub fn match_bits(&self) -> u16 {
        self.lanes
            .iter()
            .enumerate()
            .fold(0u16, |acc, (i, &lane)| acc | (((lane & 1) as u16) << i))
    }
}

/// Bit-per-byte match index over a 64-byte block: bit i set means byte i is
/// a set member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchMask64(u64);

impl MatchMask64 {
    pub fn bits(self) -> u64 {
        self.0
    }
}

/// Whether the vector paths are active on this host.
#[inline]
pub fn simd_active() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        sse::available()
    }
    #[cfg(target_arch = "aarch64")]
    {
        neon::available()
    }
    #[cfg(not(any(target_arch = "x86_64", target_arch = "aarch64")))]
    {
        false
    }
}

/// Classifies a 16-byte block against the set: lane i is 0xFF iff
/// `block[i]` is a member, computed as a nibble-table lookup compared with
/// the original byte.
#[inline]
pub fn classify16(set: &CharSet, block: &[u8; 16]) -> ClassifiedBlock16 {
    #[cfg(target_arch = "x86_64")]
    if sse::available() {
        // SAFETY: guarded by the ssse3 runtime check.
        let lanes = unsafe { sse::classify16(set.nibble_table(), block) };
        return ClassifiedBlock16 { lanes };
    }
    #[cfg(target_arch = "aarch64")]
    if neon::available() {
        // SAFETY: guarded by the neon runtime check.
        let lanes = unsafe { neon::classify16(set.nibble_table(), block) };
        return ClassifiedBlock16 { lanes };
    }
    ClassifiedBlock16 {
        lanes: scalar::classify16(set.nibble_table(), block),
    }
}

/// First matching lane the webkit way: none if the max lane is zero,
/// otherwise the minimum of the or-not candidate vector.
#[inline]
pub fn first_index_webkit(block: &ClassifiedBlock16) -> Option<usize> {
    scalar::first_index_webkit(&block.lanes)
}

/// The webkit find-first intermediate: lane index ORed with the complement
/// of the match lane. Matching lanes keep their index; the rest are 0xFF.
pub fn webkit_candidates(block: &ClassifiedBlock16) -> [u8; 16] {
    scalar::webkit_candidates(&block.lanes)
}

/// First matching lane the blink way: trailing zeros of the narrowed mask
/// divided by four, or none when the mask is zero.
#[inline]
pub fn first_index_blink(block: &ClassifiedBlock16) -> Option<usize> {
    scalar::first_index_blink(&block.lanes)
}

/// The blink find-first intermediate: the 16 lanes as eight little-endian
/// 16-bit words, each shifted right by 4 and truncated to its low byte, the
/// 8 bytes concatenated little-endian. Each matching lane contributes a 0xF
/// nibble at bit 4*lane.
pub fn blink_narrowed_mask(block: &ClassifiedBlock16) -> u64 {
    scalar::blink_narrowed_mask(&block.lanes)
}

/// Builds the 64-bit match index of a 64-byte block.
#[inline]
pub fn build_index64(set: &CharSet, block: &[u8; 64]) -> MatchMask64 {
    #[cfg(target_arch = "x86_64")]
    if sse::available() {
        // SAFETY: guarded by the ssse3 runtime check.
        return MatchMask64(unsafe { sse::build_index64(set.nibble_table(), block) });
    }
    #[cfg(target_arch = "aarch64")]
    if neon::available() {
        // SAFETY: guarded by the neon runtime check.
        return MatchMask64(unsafe { neon::build_index64(set.nibble_table(), block) });
    }
    MatchMask64(scalar::build_index64(set.nibble_table(), block))
}

/// Byte-at-a-time scan: the smallest position `p >= from` with `data[p]` in
/// the set.
#[inline]
pub fn scan_scalar(set: &CharSet, data: &[u8], from: usize) -> Option<usize> {
    scalar::scan_scalar(set.nibble_table(), data, from)
}

/// Block-at-a-time scan: classifies 16-byte blocks from `from`, extracts the
/// first index with the selected variant, and finishes any sub-16-byte
/// remainder byte by byte. Same result as [`scan_scalar`].
#[inline]
pub fn scan_block16(
    set: &CharSet,
    data: &[u8],
    from: usize,
    variant: Block16Variant,
) -> Option<usize> {
    #[cfg(target_arch = "x86_64")]
    if sse::available() {
        // SAFETY: guarded by the ssse3 runtime check.
        return unsafe { sse::scan_block16(set.nibble_table(), data, from, variant) };
    }
    #[cfg(target_arch = "aarch64")]
    if neon::available() {
        // SAFETY: guarded by the neon runtime check.
        return unsafe { neon::scan_block16(set.nibble_table(), data, from, variant) };
    }
    scalar::scan_block16(set.nibble_table(), data, from, variant)
}

/// How many `(offset, mask)` pairs one index64 refill call can return.
pub(crate) const MASK_BATCH: usize = 8;

/// Classifies non-overlapping 64-byte blocks starting at `base` (which the
/// caller keeps 64-aligned relative to the document start), collecting the
/// nonzero match masks with their offsets, until the batch is full or fewer
/// than 64 bytes remain. Returns `(pairs_filled, resume_offset,
/// blocks_classified)`; zero pairs means `resume_offset` is where the
/// scalar tail begins.
#[inline]
pub(crate) fn index64_masks(
    set: &CharSet,
    data: &[u8],
    base: usize,
    out: &mut [(usize, u64); MASK_BATCH],
) -> (usize, usize, u64) {
    #[cfg(target_arch = "x86_64")]
    if sse::available() {
        // SAFETY: guarded by the ssse3 runtime check.
        return unsafe { sse::index64_masks(set.nibble_table(), data, base, out) };
    }
    #[cfg(target_arch = "aarch64")]
    if neon::available() {
        // SAFETY: guarded by the neon runtime check.
        return unsafe { neon::index64_masks(set.nibble_table(), data, base, out) };
    }
    scalar::index64_masks(set.nibble_table(), data, base, out)
}
