//! AArch64 kernel paths (NEON).
//!
//! Classification is `and` + `tbl` + `cmeq`. The webkit16 variant detects a
//! match with a horizontal byte max and extracts the first index with
//! or-not/min; the blink16 variant narrows the compare result with a 4-bit
//! shift-right-narrow and counts trailing zeros; the index64 variant folds
//! four classified registers into one 64-bit index with bit weights and
//! pairwise adds.

use std::arch::aarch64::*;

use super::scalar;
use super::Block16Variant;

const LANE_INDEXES: [u8; 16] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];

#[inline]
pub(crate) fn available() -> bool {
    std::arch::is_aarch64_feature_detected!("neon")
}

#[inline]
unsafe fn classify_reg(tbl: uint8x16_t, v: uint8x16_t) -> uint8x16_t {
    let idx = vandq_u8(v, vdupq_n_u8(0x0F));
    vceqq_u8(vqtbl1q_u8(tbl, idx), v)
}

pub(crate) unsafe fn classify16(table: &[u8; 16], block: &[u8; 16]) -> [u8; 16] {
    let eq = classify_reg(vld1q_u8(table.as_ptr()), vld1q_u8(block.as_ptr()));
    let mut out = [0u8; 16];
    vst1q_u8(out.as_mut_ptr(), eq);
    out
}

#[inline]
unsafe fn narrowed_mask_reg(eq: uint8x16_t) -> u64 {
    let narrowed = vshrn_n_u16::<4>(vreinterpretq_u16_u8(eq));
    vget_lane_u64::<0>(vreinterpret_u64_u8(narrowed))
}

pub(crate) unsafe fn scan_block16(
    table: &[u8; 16],
    data: &[u8],
    from: usize,
    variant: Block16Variant,
) -> Option<usize> {
    let n = data.len();
    if from > n {
        return None;
    }
    let tbl = vld1q_u8(table.as_ptr());
    let mut i = from;
    match variant {
        Block16Variant::Webkit => {
            let idxv = vld1q_u8(LANE_INDEXES.as_ptr());
            while i + 16 <= n {
                let eq = classify_reg(tbl, vld1q_u8(data.as_ptr().add(i)));
                if vmaxvq_u8(eq) != 0 {
                    return Some(i + vminvq_u8(vornq_u8(idxv, eq)) as usize);
                }
                i += 16;
            }
        }
        Block16Variant::Blink => {
            while i + 16 <= n {
                let eq = classify_reg(tbl, vld1q_u8(data.as_ptr().add(i)));
                let mask = narrowed_mask_reg(eq);
                if mask != 0 {
                    return Some(i + (mask.trailing_zeros() / 4) as usize);
                }
                i += 16;
            }
        }
    }
    scalar::scan_scalar(table, data, i)
}

#[inline]
unsafe fn index64_at(tbl: uint8x16_t, weights: uint8x16_t, p: *const u8) -> u64 {
    let m0 = vandq_u8(classify_reg(tbl, vld1q_u8(p)), weights);
    let m1 = vandq_u8(classify_reg(tbl, vld1q_u8(p.add(16))), weights);
    let m2 = vandq_u8(classify_reg(tbl, vld1q_u8(p.add(32))), weights);
    let m3 = vandq_u8(classify_reg(tbl, vld1q_u8(p.add(48))), weights);
    let s0 = vpaddq_u8(m0, m1);
    let s1 = vpaddq_u8(m2, m3);
    let s2 = vpaddq_u8(s0, s1);
    let s3 = vpaddq_u8(s2, s2);
    vgetq_lane_u64::<0>(vreinterpretq_u64_u8(s3))
}

pub(crate) unsafe fn build_index64(table: &[u8; 16], block: &[u8; 64]) -> u64 {
    let tbl = vld1q_u8(table.as_ptr());
    let weights = vld1q_u8(scalar::BIT_WEIGHTS.as_ptr());
    index64_at(tbl, weights, block.as_ptr())
}

pub(crate) unsafe fn index64_masks(
    table: &[u8; 16],
    data: &[u8],
    base: usize,
    out: &mut [(usize, u64); super::MASK_BATCH],
) -> (usize, usize, u64) {
    let n = data.len();
    let tbl = vld1q_u8(table.as_ptr());
    let weights = vld1q_u8(scalar::BIT_WEIGHTS.as_ptr());
    let mut at = base;
    let mut loaded = 0u64;
    let mut filled = 0usize;
    while at + 64 <= n && filled < out.len() {
        let mask = index64_at(tbl, weights, data.as_ptr().add(at));
        loaded += 1;
        if mask != 0 {
            out[filled] = (at, mask);
            filled += 1;
        }
        at += 64;
    }
    (filled, at, loaded)
}
