//! Portable reference implementations of every kernel operation.
//!
//! These compute bit-identical results to the hardware paths and are the
//! selected backend whenever no 128-bit vector unit is available. They are
//! deliberately written as plain lane-by-lane arithmetic so each one reads as
//! the definition of the operation it implements.

use super::Block16Variant;

/// Weights used to turn a 0x00/0xFF lane into its bit of a 64-bit index:
/// bit positions 0..7 repeated for the two 8-lane halves of a block.
pub(crate) const BIT_WEIGHTS: [u8; 16] = [
    0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80,
];

#[inline]
pub(crate) fn classify16(table: &[u8; 16], block: &[u8; 16]) -> [u8; 16] {
    let mut lanes = [0u8; 16];
    for (lane, &b) in lanes.iter_mut().zip(block) {
        *lane = if table[(b & 0x0F) as usize] == b {
            0xFF
        } else {
            0x00
        };
    }
    lanes
}

/// The find-first intermediate: each lane ORed with the complement of its
/// match lane, so matching lanes carry their own index and the rest saturate
/// to 0xFF.
#[inline]
pub(crate) fn webkit_candidates(lanes: &[u8; 16]) -> [u8; 16] {
    let mut out = [0u8; 16];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = (i as u8) | !lanes[i];
    }
    out
}

#[inline]
pub(crate) fn first_index_webkit(lanes: &[u8; 16]) -> Option<usize> {
    let max = lanes.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return None;
    }
    let min = webkit_candidates(lanes)
        .iter()
        .copied()
        .min()
        .unwrap_or(0xFF);
    Some(min as usize)
}

/// Shift-right-narrow movemask: the sixteen lanes viewed as eight
/// little-endian 16-bit words, each shifted right by four with only its low
/// byte kept, concatenated little-endian. Every matching lane contributes a
/// 0xF nibble at bit position 4*lane.
#[inline]
pub(crate) fn blink_narrowed_mask(lanes: &[u8; 16]) -> u64 {
    let mut out = 0u64;
    for w in 0..8 {
        let word = u16::from_le_bytes([lanes[2 * w], lanes[2 * w + 1]]);
        out |= (((word >> 4) & 0xFF) as u64) << (8 * w);
    }
    out
}

#[inline]
pub(crate) fn first_index_blink(lanes: &[u8; 16]) -> Option<usize> {
    let mask = blink_narrowed_mask(lanes);
    if mask == 0 {
        None
    } else {
        Some((mask.trailing_zeros() / 4) as usize)
    }
}

/// Pairwise byte addition: `out[i] = a[2i] + a[2i+1]` for the low half and
/// the same over `b` for the high half, mirroring a two-register horizontal
/// add.
#[inline]
fn pairwise_add(a: &[u8; 16], b: &[u8; 16]) -> [u8; 16] {
    let mut out = [0u8; 16];
    for i in 0..8 {
        out[i] = a[2 * i].wrapping_add(a[2 * i + 1]);
        out[8 + i] = b[2 * i].wrapping_add(b[2 * i + 1]);
    }
    out
}

/// Builds the 64-bit match index for one 64-byte block: classify the four
/// 16-byte sub-blocks, AND with the bit weights, then collapse with three
/// rounds of pairwise addition and keep the low 64-bit half.
pub(crate) fn build_index64(table: &[u8; 16], block: &[u8; 64]) -> u64 {
    let mut weighted = [[0u8; 16]; 4];
    for (j, sub) in block.chunks_exact(16).enumerate() {
        let lanes = classify16(table, sub.try_into().expect("16-byte sub-block"));
        for i in 0..16 {
            weighted[j][i] = lanes[i] & BIT_WEIGHTS[i];
        }
    }
    let sum0 = pairwise_add(&weighted[0], &weighted[1]);
    let sum1 = pairwise_add(&weighted[2], &weighted[3]);
    let sum2 = pairwise_add(&sum0, &sum1);
    let sum3 = pairwise_add(&sum2, &sum2);
    u64::from_le_bytes(sum3[..8].try_into().expect("low half"))
}

#[inline]
pub(crate) fn scan_scalar(table: &[u8; 16], data: &[u8], from: usize) -> Option<usize> {
    let rest = data.get(from..)?;
    rest.iter()
        .position(|&b| table[(b & 0x0F) as usize] == b)
        .map(|i| from + i)
}

pub(crate) fn scan_block16(
    table: &[u8; 16],
    data: &[u8],
    from: usize,
    variant: Block16Variant,
) -> Option<usize> {
    let n = data.len();
    if from > n {
        return None;
    }
    let mut i = from;
    while i + 16 <= n {
        let block: &[u8; 16] = data[i..i + 16].try_into().expect("16-byte block");
        let lanes = classify16(table, block);
        let hit = match variant {
            Block16Variant::Webkit => first_index_webkit(&lanes),
            Block16Variant::Blink => first_index_blink(&lanes),
        };
        if let Some(k) = hit {
            return Some(i + k);
        }
        i += 16;
    }
    scan_scalar(table, data, i)
}

/// Classifies non-overlapping 64-byte blocks starting at `base`, collecting
/// `(offset, mask)` pairs for the nonzero ones, until `out` is full or fewer
/// than 64 bytes remain. Returns how many pairs were filled, the offset to
/// resume from, and how many blocks were classified.
pub(crate) fn index64_masks(
    table: &[u8; 16],
    data: &[u8],
    base: usize,
    out: &mut [(usize, u64); super::MASK_BATCH],
) -> (usize, usize, u64) {
    let n = data.len();
    let mut at = base;
    let mut loaded = 0u64;
    let mut filled = 0usize;
    while at + 64 <= n && filled < out.len() {
        let block: &[u8; 64] = data[at..at + 64].try_into().expect("64-byte block");
        let mask = build_index64(table, block);
        loaded += 1;
        if mask != 0 {
            out[filled] = (at, mask);
            filled += 1;
        }
        at += 64;
    }
    (filled, at, loaded)
}
