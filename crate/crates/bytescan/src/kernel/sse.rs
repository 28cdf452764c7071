//! x86-64 kernel paths (SSSE3).
//!
//! Classification is a byte shuffle through the nibble table followed by an
//! equality compare. The webkit16 variant emulates horizontal max/min
//! reductions the way a NEON-emulation layer lowers them to SSE, while the
//! blink16 and index64 variants use the native 16-lane movemask.

use std::arch::x86_64::*;

use super::scalar;
use super::Block16Variant;

#[inline]
pub(crate) fn available() -> bool {
    is_x86_feature_detected!("ssse3")
}

#[inline]
#[target_feature(enable = "ssse3")]
unsafe fn classify_reg(tbl: __m128i, nib: __m128i, v: __m128i) -> __m128i {
    let idx = _mm_and_si128(v, nib);
    let looked = _mm_shuffle_epi8(tbl, idx);
    _mm_cmpeq_epi8(looked, v)
}

#[target_feature(enable = "ssse3")]
pub(crate) unsafe fn classify16(table: &[u8; 16], block: &[u8; 16]) -> [u8; 16] {
    let tbl = _mm_loadu_si128(table.as_ptr().cast());
    let nib = _mm_set1_epi8(0x0F);
    let v = _mm_loadu_si128(block.as_ptr().cast());
    let eq = classify_reg(tbl, nib, v);
    let mut out = [0u8; 16];
    _mm_storeu_si128(out.as_mut_ptr().cast(), eq);
    out
}

/// Horizontal max over 16 unsigned lanes. Shifted-in zeros never win a max.
#[inline]
#[target_feature(enable = "ssse3")]
unsafe fn max_across_u8(v: __m128i) -> u8 {
    let m = _mm_max_epu8(v, _mm_srli_si128::<8>(v));
    let m = _mm_max_epu8(m, _mm_srli_si128::<4>(m));
    let m = _mm_max_epu8(m, _mm_srli_si128::<2>(m));
    let m = _mm_max_epu8(m, _mm_srli_si128::<1>(m));
    (_mm_cvtsi128_si32(m) & 0xFF) as u8
}

/// Horizontal min over 16 unsigned lanes, using permutes (not shifts) so no
/// zero lanes are invented.
#[inline]
#[target_feature(enable = "ssse3")]
unsafe fn min_across_u8(v: __m128i) -> u8 {
    let m = _mm_min_epu8(v, _mm_shuffle_epi32::<0b0100_1110>(v));
    let m = _mm_min_epu8(m, _mm_shuffle_epi32::<0b1011_0001>(m));
    let m = _mm_min_epu8(m, _mm_shufflelo_epi16::<0b1011_0001>(m));
    // Fold the two bytes of the low word; byte 0 ends up holding the min.
    let m = _mm_min_epu8(m, _mm_srli_epi16::<8>(m));
    (_mm_cvtsi128_si32(m) & 0xFF) as u8
}

#[target_feature(enable = "ssse3")]
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
    let tbl = _mm_loadu_si128(table.as_ptr().cast());
    let nib = _mm_set1_epi8(0x0F);
    let mut i = from;
    match variant {
        Block16Variant::Webkit => {
            let idxv = _mm_setr_epi8(0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15);
            let ones = _mm_set1_epi8(-1);
            while i + 16 <= n {
                let v = _mm_loadu_si128(data.as_ptr().add(i).cast());
                let eq = classify_reg(tbl, nib, v);
                if max_across_u8(eq) != 0 {
                    let cand = _mm_or_si128(idxv, _mm_xor_si128(eq, ones));
                    return Some(i + min_across_u8(cand) as usize);
                }
                i += 16;
            }
        }
        Block16Variant::Blink => {
            while i + 16 <= n {
                let v = _mm_loadu_si128(data.as_ptr().add(i).cast());
                let eq = classify_reg(tbl, nib, v);
                let mask = _mm_movemask_epi8(eq) as u32;
                if mask != 0 {
                    return Some(i + mask.trailing_zeros() as usize);
                }
                i += 16;
            }
        }
    }
    scalar::scan_scalar(table, data, i)
}

#[inline]
#[target_feature(enable = "ssse3")]
unsafe fn index64_at(tbl: __m128i, nib: __m128i, p: *const u8) -> u64 {
    let m0 = _mm_movemask_epi8(classify_reg(tbl, nib, _mm_loadu_si128(p.cast()))) as u64;
    let m1 = _mm_movemask_epi8(classify_reg(tbl, nib, _mm_loadu_si128(p.add(16).cast()))) as u64;
    let m2 = _mm_movemask_epi8(classify_reg(tbl, nib, _mm_loadu_si128(p.add(32).cast()))) as u64;
    let m3 = _mm_movemask_epi8(classify_reg(tbl, nib, _mm_loadu_si128(p.add(48).cast()))) as u64;
    m0 | (m1 << 16) | (m2 << 32) | (m3 << 48)
}

#[target_feature(enable = "ssse3")]
pub(crate) unsafe fn build_index64(table: &[u8; 16], block: &[u8; 64]) -> u64 {
    let tbl = _mm_loadu_si128(table.as_ptr().cast());
    let nib = _mm_set1_epi8(0x0F);
    index64_at(tbl, nib, block.as_ptr())
}

#[target_feature(enable = "ssse3")]
pub(crate) unsafe fn index64_masks(
    table: &[u8; 16],
    data: &[u8],
    base: usize,
    out: &mut [(usize, u64); super::MASK_BATCH],
) -> (usize, usize, u64) {
    let n = data.len();
    let tbl = _mm_loadu_si128(table.as_ptr().cast());
    let nib = _mm_set1_epi8(0x0F);
    let mut at = base;
    let mut loaded = 0u64;
    let mut filled = 0usize;
    while at + 64 <= n && filled < out.len() {
        let p = data.as_ptr().add(at);
        let eq0 = classify_reg(tbl, nib, _mm_loadu_si128(p.cast()));
        let eq1 = classify_reg(tbl, nib, _mm_loadu_si128(p.add(16).cast()));
        let eq2 = classify_reg(tbl, nib, _mm_loadu_si128(p.add(32).cast()));
        let eq3 = classify_reg(tbl, nib, _mm_loadu_si128(p.add(48).cast()));
        loaded += 1;
        // One test for the whole block; the per-16-byte masks are only
        // composed when something matched.
        let any = _mm_or_si128(_mm_or_si128(eq0, eq1), _mm_or_si128(eq2, eq3));
        if _mm_movemask_epi8(any) != 0 {
            let mask = (_mm_movemask_epi8(eq0) as u64)
                | ((_mm_movemask_epi8(eq1) as u64) << 16)
                | ((_mm_movemask_epi8(eq2) as u64) << 32)
                | ((_mm_movemask_epi8(eq3) as u64) << 48);
            out[filled] = (at, mask);
            filled += 1;
        }
        at += 64;
    }
    (filled, at, loaded)
}
