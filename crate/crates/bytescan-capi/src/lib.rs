//! C ABI for the bytescan library.
//!
//! Handles are opaque pointers owned by this library; every constructor has
//! a matching `_free`, and all functions tolerate NULL arguments by
//! returning an error status (or false) instead of crashing. Documents are
//! passed as `(pointer, length)` pairs that the caller keeps alive and
//! unmodified for as long as any stream over them exists.

use std::ffi::{c_char, CStr, CString};
use std::sync::OnceLock;

use bytescan::charset::{CharSet, CharSetError, SpecError};
use bytescan::kernel::{self, KernelId};
use bytescan::stream::{self, StreamCursor};

/// Call outcomes. Zero is success; everything else names the complaint.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BytescanStatus {
    Ok = 0,
    NullArg = 1,
    EmptySet = 2,
    TooManyMembers = 3,
    DuplicateMember = 4,
    NibbleCollision = 5,
    BadKernel = 6,
    BadSpec = 7,
}

/// Kernel selector matching the library's kernel names.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BytescanKernel {
    Scalar = 0,
    Webkit16 = 1,
    Blink16 = 2,
    Index64 = 3,
}

impl From<BytescanKernel> for KernelId {
    fn from(k: BytescanKernel) -> KernelId {
        match k {
            BytescanKernel::Scalar => KernelId::Scalar,
            BytescanKernel::Webkit16 => KernelId::Webkit16,
            BytescanKernel::Blink16 => KernelId::Blink16,
            BytescanKernel::Index64 => KernelId::Index64,
        }
    }
}

/// Opaque validated character set.
pub struct BytescanCharset(CharSet);

/// Opaque match stream over a caller-owned document.
pub struct BytescanStream {
    set: CharSet,
    data: *const u8,
    len: usize,
    cursor: StreamCursor,
}

fn set_error_status(err: CharSetError) -> BytescanStatus {
    match err {
        CharSetError::Empty => BytescanStatus::EmptySet,
        CharSetError::TooManyMembers(_) => BytescanStatus::TooManyMembers,
        CharSetError::DuplicateMember(_) => BytescanStatus::DuplicateMember,
        CharSetError::NibbleCollision { .. } => BytescanStatus::NibbleCollision,
    }
}

/// Builds a character set from `len` member bytes.
///
/// On success writes a new handle to `out` and returns OK. The members must
/// be non-empty, at most 16, duplicate-free, and pairwise distinct in their
/// low nibbles.
///
/// # Safety
/// `members` must point to `len` readable bytes and `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn bytescan_charset_new(
    members: *const u8,
    len: usize,
    out: *mut *mut BytescanCharset,
) -> BytescanStatus {
    if out.is_null() || (members.is_null() && len > 0) {
        return BytescanStatus::NullArg;
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(members, len)
    };
    match CharSet::new(slice) {
        Ok(set) => {
            *out = Box::into_raw(Box::new(BytescanCharset(set)));
            BytescanStatus::Ok
        }
        Err(e) => set_error_status(e),
    }
}

/// Builds a character set from the CLI-style spec string, e.g.
/// `"LT,CR,AMP,NUL"` or `"'<',\x0d"`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bytescan_charset_from_spec(
    spec: *const c_char,
    out: *mut *mut BytescanCharset,
) -> BytescanStatus {
    if spec.is_null() || out.is_null() {
        return BytescanStatus::NullArg;
    }
    let Ok(spec) = CStr::from_ptr(spec).to_str() else {
        return BytescanStatus::BadSpec;
    };
    match CharSet::from_spec(spec) {
        Ok(set) => {
            *out = Box::into_raw(Box::new(BytescanCharset(set)));
            BytescanStatus::Ok
        }
        Err(SpecError::Set(e)) => set_error_status(e),
        Err(_) => BytescanStatus::BadSpec,
    }
}

/// The default HTML scanning set: `<`, CR, `&`, NUL.
#[no_mangle]
pub extern "C" fn bytescan_charset_html() -> *mut BytescanCharset {
    Box::into_raw(Box::new(BytescanCharset(CharSet::html())))
}

/// Membership test; false when `set` is NULL.
///
/// # Safety
/// `set` must be NULL or a live charset handle.
#[no_mangle]
pub unsafe extern "C" fn bytescan_charset_contains(set: *const BytescanCharset, byte: u8) -> bool {
    match set.as_ref() {
        Some(set) => set.0.contains(byte),
        None => false,
    }
}

/// Number of members in the set; 0 when `set` is NULL.
///
/// # Safety
/// `set` must be NULL or a live charset handle.
#[no_mangle]
pub unsafe extern "C" fn bytescan_charset_member_count(set: *const BytescanCharset) -> usize {
    set.as_ref().map_or(0, |s| s.0.members().len())
}

/// Copies up to `cap` member bytes into `out` in their original order and
/// returns the full member count.
///
/// # Safety
/// `set` must be NULL or a live handle; `out` must point to `cap` writable
/// bytes when `cap > 0`.
#[no_mangle]
pub unsafe extern "C" fn bytescan_charset_members(
    set: *const BytescanCharset,
    out: *mut u8,
    cap: usize,
) -> usize {
    let Some(set) = set.as_ref() else { return 0 };
    let members = set.0.members();
    if !out.is_null() {
        let n = members.len().min(cap);
        std::ptr::copy_nonoverlapping(members.as_ptr(), out, n);
    }
    members.len()
}

/// Frees a charset handle; NULL is a no-op.
///
/// # Safety
/// `set` must be NULL or a handle from one of the charset constructors,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bytescan_charset_free(set: *mut BytescanCharset) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Resolves a kernel name ("scalar", "webkit16", "blink16", "index64").
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bytescan_kernel_from_name(
    name: *const c_char,
    out: *mut BytescanKernel,
) -> BytescanStatus {
    if name.is_null() || out.is_null() {
        return BytescanStatus::NullArg;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return BytescanStatus::BadKernel;
    };
    let kernel = match name.parse::<KernelId>() {
        Ok(KernelId::Scalar) => BytescanKernel::Scalar,
        Ok(KernelId::Webkit16) => BytescanKernel::Webkit16,
        Ok(KernelId::Blink16) => BytescanKernel::Blink16,
        Ok(KernelId::Index64) => BytescanKernel::Index64,
        Err(_) => return BytescanStatus::BadKernel,
    };
    *out = kernel;
    BytescanStatus::Ok
}

/// The canonical NUL-terminated name for a kernel.
#[no_mangle]
pub extern "C" fn bytescan_kernel_name(kernel: BytescanKernel) -> *const c_char {
    static NAMES: OnceLock<[CString; 4]> = OnceLock::new();
    let names = NAMES.get_or_init(|| {
        [
            CString::new("scalar").unwrap(),
            CString::new("webkit16").unwrap(),
            CString::new("blink16").unwrap(),
            CString::new("index64").unwrap(),
        ]
    });
    names[kernel as usize].as_ptr()
}

/// Whether the vector kernel paths are active on this host.
#[no_mangle]
pub extern "C" fn bytescan_simd_active() -> bool {
    kernel::simd_active()
}

/// One-shot scan: finds the smallest match position at or after `from`.
/// Returns true and writes the position, or false when there is none (or an
/// argument is NULL).
///
/// # Safety
/// `data` must point to `len` readable bytes; `set` and `out_pos` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn bytescan_next_match(
    set: *const BytescanCharset,
    data: *const u8,
    len: usize,
    from: usize,
    kernel: BytescanKernel,
    out_pos: *mut usize,
) -> bool {
    let Some(set) = set.as_ref() else {
        return false;
    };
    if out_pos.is_null() || (data.is_null() && len > 0) {
        return false;
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(data, len)
    };
    let found = match kernel {
        BytescanKernel::Scalar => kernel::scan_scalar(&set.0, slice, from),
        BytescanKernel::Webkit16 => {
            kernel::scan_block16(&set.0, slice, from, kernel::Block16Variant::Webkit)
        }
        BytescanKernel::Blink16 => {
            kernel::scan_block16(&set.0, slice, from, kernel::Block16Variant::Blink)
        }
        BytescanKernel::Index64 => {
            let mut cursor = StreamCursor::new(KernelId::Index64);
            let mut next = cursor.next(&set.0, slice);
            while let Some(p) = next {
                if p >= from {
                    break;
                }
                next = cursor.next(&set.0, slice);
            }
            next
        }
    };
    match found {
        Some(p) => {
            *out_pos = p;
            true
        }
        None => false,
    }
}

/// Counts all matches in the document and writes the density ratio (0 for
/// an empty document) when `out_ratio` is non-NULL.
///
/// # Safety
/// `data` must point to `len` readable bytes; `set` and `out_count` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn bytescan_count_matches(
    set: *const BytescanCharset,
    data: *const u8,
    len: usize,
    kernel: BytescanKernel,
    out_count: *mut u64,
    out_ratio: *mut f64,
) -> BytescanStatus {
    let Some(set) = set.as_ref() else {
        return BytescanStatus::NullArg;
    };
    if out_count.is_null() || (data.is_null() && len > 0) {
        return BytescanStatus::NullArg;
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(data, len)
    };
    let mc = stream::count_matches(&set.0, slice, KernelId::from(kernel));
    *out_count = mc.count;
    if !out_ratio.is_null() {
        *out_ratio = mc.ratio;
    }
    BytescanStatus::Ok
}

/// Opens a match stream over `len` bytes at `data`. The buffer must stay
/// alive and unmodified until the stream is freed.
///
/// # Safety
/// `set` must be a live handle, `data` must point to `len` readable bytes
/// for the stream's whole lifetime, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bytescan_stream_new(
    set: *const BytescanCharset,
    data: *const u8,
    len: usize,
    kernel: BytescanKernel,
    out: *mut *mut BytescanStream,
) -> BytescanStatus {
    let Some(set) = set.as_ref() else {
        return BytescanStatus::NullArg;
    };
    if out.is_null() || (data.is_null() && len > 0) {
        return BytescanStatus::NullArg;
    }
    *out = Box::into_raw(Box::new(BytescanStream {
        set: set.0.clone(),
        data,
        len,
        cursor: StreamCursor::new(KernelId::from(kernel)),
    }));
    BytescanStatus::Ok
}

/// Yields the next match position in ascending order. Returns false when the
/// stream is exhausted or an argument is NULL.
///
/// # Safety
/// `stream` must be NULL or a live stream handle whose document is still
/// valid; `out_pos` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bytescan_stream_next(
    stream: *mut BytescanStream,
    out_pos: *mut usize,
) -> bool {
    let Some(stream) = stream.as_mut() else {
        return false;
    };
    if out_pos.is_null() {
        return false;
    }
    let data = if stream.len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(stream.data, stream.len)
    };
    match stream.cursor.next(&stream.set, data) {
        Some(p) => {
            *out_pos = p;
            true
        }
        None => false,
    }
}

/// Reads the stream's work counters: 64-byte blocks classified and bytes
/// examined in the scalar tail (populated by the index64 kernel).
///
/// # Safety
/// `stream` must be NULL or a live stream handle; non-NULL out pointers must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn bytescan_stream_metrics(
    stream: *const BytescanStream,
    out_block_loads: *mut u64,
    out_tail_bytes: *mut u64,
) -> BytescanStatus {
    let Some(stream) = stream.as_ref() else {
        return BytescanStatus::NullArg;
    };
    let metrics = stream.cursor.metrics();
    if !out_block_loads.is_null() {
        *out_block_loads = metrics.block_loads;
    }
    if !out_tail_bytes.is_null() {
        *out_tail_bytes = metrics.tail_bytes;
    }
    BytescanStatus::Ok
}

/// Frees a stream handle; NULL is a no-op.
///
/// # Safety
/// `stream` must be NULL or a handle from `bytescan_stream_new`, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn bytescan_stream_free(stream: *mut BytescanStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}
