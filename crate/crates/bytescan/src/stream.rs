//! Document-level iteration over every match position.
//!
//! A [`MatchStream`] yields strictly ascending positions of set members. The
//! block16 kernels restart their forward scan after each yield, reloading
//! bytes they have already seen; the index64 kernel instead consumes set
//! bits of one 64-bit block index at a time and classifies each 64-byte
//! block exactly once per traversal. [`ScanMetrics`] counts that work.

use crate::charset::CharSet;
use crate::kernel::{self, Block16Variant, KernelId};

/// Work counters for one traversal, kept by the index64 kernel.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ScanMetrics {
    /// 64-byte blocks classified.
    pub block_loads: u64,
    /// Bytes examined one at a time in the trailing sub-block remainder.
    pub tail_bytes: u64,
}

/// Resumable scan state, separate from the borrowed set and data so handle
/// types (e.g. over FFI) can own it. Callers must pass the same `set` and
/// `data` to every [`StreamCursor::next`] call; the document must not change
/// while a cursor over it is live.
#[derive(Debug, Clone)]
pub struct StreamCursor {
    kernel: KernelId,
    /// Next position to scan from (scalar and block16), or the scalar-tail
    /// cursor once the index64 kernel runs out of full blocks.
    cursor: usize,
    /// Pending match bits of the current 64-byte block (index64 only).
    mask: u64,
    /// Absolute position of the pending mask's bit 0.
    mask_base: usize,
    /// Nonzero masks already classified but not yet consumed.
    queued: [(usize, u64); kernel::MASK_BATCH],
    queued_head: u8,
    queued_len: u8,
    /// Offset of the next unclassified 64-byte block.
    block_base: usize,
    in_tail: bool,
    metrics: ScanMetrics,
}

impl StreamCursor {
    pub fn new(kernel: KernelId) -> Self {
        StreamCursor {
            kernel,
            cursor: 0,
            mask: 0,
            mask_base: 0,
            queued: [(0, 0); kernel::MASK_BATCH],
            queued_head: 0,
            queued_len: 0,
            block_base: 0,
            in_tail: false,
            metrics: ScanMetrics::default(),
        }
    }

    pub fn kernel(&self) -> KernelId {
        self.kernel
    }

    pub fn metrics(&self) -> ScanMetrics {
        self.metrics
    }

    /// Yields the next match position at or after the previous one.
    pub fn next(&mut self, set: &CharSet, data: &[u8]) -> Option<usize> {
        match self.kernel {
            KernelId::Scalar => self.advance(kernel::scan_scalar(set, data, self.cursor)),
            KernelId::Webkit16 => self.advance(kernel::scan_block16(
                set,
                data,
                self.cursor,
                Block16Variant::Webkit,
            )),
            KernelId::Blink16 => self.advance(kernel::scan_block16(
                set,
                data,
                self.cursor,
                Block16Variant::Blink,
            )),
            KernelId::Index64 => self.next_index64(set, data),
        }
    }

    #[inline]
    fn advance(&mut self, found: Option<usize>) -> Option<usize> {
        if let Some(p) = found {
            self.cursor = p + 1;
        }
        found
    }

    fn next_index64(&mut self, set: &CharSet, data: &[u8]) -> Option<usize> {
        loop {
            if self.mask != 0 {
                let tz = self.mask.trailing_zeros() as usize;
                // Consume by clearing the lowest set bit.
                self.mask &= self.mask - 1;
                return Some(self.mask_base + tz);
            }
            if self.queued_head < self.queued_len {
                let (base, mask) = self.queued[self.queued_head as usize];
                self.queued_head += 1;
                self.mask = mask;
                self.mask_base = base;
                continue;
            }
            if self.in_tail {
                while self.cursor < data.len() {
                    let p = self.cursor;
                    self.cursor += 1;
                    self.metrics.tail_bytes += 1;
                    if set.contains(data[p]) {
                        return Some(p);
                    }
                }
                return None;
            }
            let (filled, resume, loaded) =
                kernel::index64_masks(set, data, self.block_base, &mut self.queued);
            self.metrics.block_loads += loaded;
            self.queued_head = 0;
            self.queued_len = filled as u8;
            self.block_base = resume;
            if filled == 0 {
                self.in_tail = true;
                self.cursor = resume;
            }
        }
    }
}

/// Iterator over all match positions in a document.
///
/// Borrows the set and the document for its lifetime; distinct streams over
/// the same document can run on different threads.
#[derive(Debug)]
pub struct MatchStream<'a> {
    set: &'a CharSet,
    data: &'a [u8],
    cursor: StreamCursor,
}

impl<'a> MatchStream<'a> {
    pub fn new(set: &'a CharSet, data: &'a [u8], kernel: KernelId) -> Self {
        MatchStream {
            set,
            data,
            cursor: StreamCursor::new(kernel),
        }
    }

    pub fn kernel(&self) -> KernelId {
        self.cursor.kernel()
    }

    /// Work counters accumulated so far (index64 kernel).
    pub fn metrics(&self) -> ScanMetrics {
        self.cursor.metrics()
    }
}

impl Iterator for MatchStream<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        self.cursor.next(self.set, self.data)
    }
}

/// Match count plus density for a document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchCount {
    pub count: u64,
    /// `count / len`, 0 for an empty document.
    pub ratio: f64,
}

pub fn count_matches(set: &CharSet, data: &[u8], kernel: KernelId) -> MatchCount {
    let count = MatchStream::new(set, data, kernel).count() as u64;
    let ratio = if data.is_empty() {
        0.0
    } else {
        count as f64 / data.len() as f64
    };
    MatchCount { count, ratio }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SplitMix64;

    fn collect(set: &CharSet, data: &[u8], kernel: KernelId) -> Vec<usize> {
        MatchStream::new(set, data, kernel).collect()
    }

    fn brute_force(set: &CharSet, data: &[u8]) -> Vec<usize> {
        data.iter()
            .enumerate()
            .filter(|(_, &b)| set.contains(b))
            .map(|(i, _)| i)
            .collect()
    }

    fn random_doc(rng: &mut SplitMix64, len: usize) -> Vec<u8> {
        let mut data = vec![0u8; len];
        for b in data.iter_mut() {
            let r = rng.next_u64();
            *b = if r.is_multiple_of(11) {
                [0x3C, 0x0D, 0x26, 0x00][(r >> 8) as usize % 4]
            } else {
                r as u8
            };
        }
        data
    }

    #[test]
    fn empty_document_is_exhausted() {
        let set = CharSet::html();
        for kernel in KernelId::ALL {
            assert_eq!(collect(&set, b"", kernel), Vec::<usize>::new());
        }
    }

    #[test]
    fn single_byte_document_hits_the_tail() {
        let set = CharSet::html();
        assert_eq!(collect(&set, b"<", KernelId::Index64), vec![0]);
        let m = {
            let mut s = MatchStream::new(&set, b"<", KernelId::Index64);
            s.by_ref().for_each(drop);
            s.metrics()
        };
        assert_eq!(m.block_loads, 0);
        assert_eq!(m.tail_bytes, 1);
    }

    #[test]
    fn angle_tag_positions() {
        let html = CharSet::html();
        assert_eq!(collect(&html, b"<a><b>", KernelId::Index64), vec![0, 3]);
        let angles = CharSet::new(b"<>").unwrap();
        for kernel in KernelId::ALL {
            assert_eq!(collect(&angles, b"<a><b>", kernel), vec![0, 2, 3, 5]);
        }
    }

    #[test]
    fn all_member_block_yields_every_position() {
        let set = CharSet::html();
        let data = [0u8; 64];
        let want: Vec<usize> = (0..64).collect();
        for kernel in KernelId::ALL {
            assert_eq!(collect(&set, &data, kernel), want);
        }
    }

    #[test]
    fn kernels_yield_identical_sequences() {
        let set = CharSet::html();
        let mut rng = SplitMix64::new(21);
        for len in [0, 1, 15, 16, 17, 63, 64, 65, 127, 1000, 4096] {
            let data = random_doc(&mut rng, len);
            let want = brute_force(&set, &data);
            for kernel in KernelId::ALL {
                assert_eq!(
                    collect(&set, &data, kernel),
                    want,
                    "kernel {kernel} len {len}"
                );
            }
        }
    }

    #[test]
    fn repeated_scans_equal_stream_output() {
        let set = CharSet::html();
        let mut rng = SplitMix64::new(5);
        let data = random_doc(&mut rng, 777);
        let want = brute_force(&set, &data);

        let mut by_scan = Vec::new();
        let mut from = 0;
        while let Some(p) = kernel::scan_scalar(&set, &data, from) {
            by_scan.push(p);
            from = p + 1;
        }
        assert_eq!(by_scan, want);

        for variant in [Block16Variant::Webkit, Block16Variant::Blink] {
            let mut by_block = Vec::new();
            let mut from = 0;
            while let Some(p) = kernel::scan_block16(&set, &data, from, variant) {
                by_block.push(p);
                from = p + 1;
            }
            assert_eq!(by_block, want);
        }
    }

    #[test]
    fn index64_classifies_each_block_once() {
        let set = CharSet::html();
        let mut rng = SplitMix64::new(33);
        for len in [0usize, 1, 63, 64, 65, 128, 200, 4096, 4159] {
            // Dense and sparse inputs must do identical block work.
            for fill in [0x00u8, b'x'] {
                let mut data = vec![fill; len];
                for _ in 0..len / 7 {
                    let at = (rng.next_u64() as usize) % len.max(1);
                    data[at] = 0x3C;
                }
                let mut stream = MatchStream::new(&set, &data, KernelId::Index64);
                stream.by_ref().for_each(drop);
                let m = stream.metrics();
                assert_eq!(m.block_loads as usize, len / 64, "len {len} fill {fill}");
                assert_eq!(m.tail_bytes as usize, len % 64, "len {len} fill {fill}");
            }
        }
    }

    #[test]
    fn positions_are_ascending_members_and_complete() {
        let set = CharSet::new(b"<>\"").unwrap();
        let mut rng = SplitMix64::new(8);
        let data = random_doc(&mut rng, 2048);
        for kernel in KernelId::ALL {
            let got = collect(&set, &data, kernel);
            for w in got.windows(2) {
                assert!(w[0] < w[1]);
            }
            for &p in &got {
                assert!(set.contains(data[p]));
            }
            assert_eq!(got, brute_force(&set, &data));
        }
    }

    #[test]
    fn count_matches_ratio() {
        let set = CharSet::html();
        let empty = count_matches(&set, b"", KernelId::Scalar);
        assert_eq!((empty.count, empty.ratio), (0, 0.0));
        let all = count_matches(&set, &[b'<'; 10], KernelId::Index64);
        assert_eq!(all.count, 10);
        assert_eq!(all.ratio, 1.0);
        let half = count_matches(&set, b"<a", KernelId::Blink16);
        assert_eq!(half.count, 1);
        assert_eq!(half.ratio, 0.5);
    }
}
