#ifndef BYTESCAN_H
#define BYTESCAN_H

/* This file is generated by cbindgen from bytescan-capi; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Kernel selector matching the library's kernel names.
typedef enum BytescanKernel {
  BYTESCAN_KERNEL_SCALAR = 0,
  BYTESCAN_KERNEL_WEBKIT16 = 1,
  BYTESCAN_KERNEL_BLINK16 = 2,
  BYTESCAN_KERNEL_INDEX64 = 3,
} BytescanKernel;

// Call outcomes. Zero is success; everything else names the complaint.
typedef enum BytescanStatus {
  BYTESCAN_STATUS_OK = 0,
  BYTESCAN_STATUS_NULL_ARG = 1,
  BYTESCAN_STATUS_EMPTY_SET = 2,
  BYTESCAN_STATUS_TOO_MANY_MEMBERS = 3,
  BYTESCAN_STATUS_DUPLICATE_MEMBER = 4,
  BYTESCAN_STATUS_NIBBLE_COLLISION = 5,
  BYTESCAN_STATUS_BAD_KERNEL = 6,
  BYTESCAN_STATUS_BAD_SPEC = 7,
} BytescanStatus;

// Opaque validated character set.
typedef struct BytescanCharset BytescanCharset;

// Opaque match stream over a caller-owned document.
typedef struct BytescanStream BytescanStream;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a character set from `len` member bytes.
//
// On success writes a new handle to `out` and returns OK. The members must
// be non-empty, at most 16, duplicate-free, and pairwise distinct in their
// low nibbles.
//
// # Safety
// `members` must point to `len` readable bytes and `out` must be a valid
// pointer.
enum BytescanStatus bytescan_charset_new(const uint8_t *members,
                                         size_t len,
                                         struct BytescanCharset **out);

// Builds a character set from the CLI-style spec string, e.g.
// `"LT,CR,AMP,NUL"` or `"'<',\x0d"`.
//
// # Safety
// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
enum BytescanStatus bytescan_charset_from_spec(const char *spec, struct BytescanCharset **out);

// The default HTML scanning set: `<`, CR, `&`, NUL.
struct BytescanCharset *bytescan_charset_html(void);

// Membership test; false when `set` is NULL.
//
// # Safety
// `set` must be NULL or a live charset handle.
bool bytescan_charset_contains(const struct BytescanCharset *set, uint8_t byte);

// Number of members in the set; 0 when `set` is NULL.
//
// # Safety
// `set` must be NULL or a live charset handle.
size_t bytescan_charset_member_count(const struct BytescanCharset *set);

// Copies up to `cap` member bytes into `out` in their original order and
// returns the full member count.
//
// # Safety
// `set` must be NULL or a live handle; `out` must point to `cap` writable
// bytes when `cap > 0`.
size_t bytescan_charset_members(const struct BytescanCharset *set, uint8_t *out, size_t cap);

// Frees a charset handle; NULL is a no-op.
//
// # Safety
// `set` must be NULL or a handle from one of the charset constructors,
// not yet freed.
void bytescan_charset_free(struct BytescanCharset *set);

// Resolves a kernel name ("scalar", "webkit16", "blink16", "index64").
//
// # Safety
// `name` must be a valid NUL-terminated string and `out` a valid pointer.
enum BytescanStatus bytescan_kernel_from_name(const char *name, enum BytescanKernel *out);

// The canonical NUL-terminated name for a kernel.
const char *bytescan_kernel_name(enum BytescanKernel kernel);

// Whether the vector kernel paths are active on this host.
bool bytescan_simd_active(void);

// One-shot scan: finds the smallest match position at or after `from`.
// Returns true and writes the position, or false when there is none (or an
// argument is NULL).
//
// # Safety
// `data` must point to `len` readable bytes; `set` and `out_pos` must be
// valid.
bool bytescan_next_match(const struct BytescanCharset *set,
                         const uint8_t *data,
                         size_t len,
                         size_t from,
                         enum BytescanKernel kernel,
                         size_t *out_pos);

// Counts all matches in the document and writes the density ratio (0 for
// an empty document) when `out_ratio` is non-NULL.
//
// # Safety
// `data` must point to `len` readable bytes; `set` and `out_count` must be
// valid.
enum BytescanStatus bytescan_count_matches(const struct BytescanCharset *set,
                                           const uint8_t *data,
                                           size_t len,
                                           enum BytescanKernel kernel,
                                           uint64_t *out_count,
                                           double *out_ratio);

// Opens a match stream over `len` bytes at `data`. The buffer must stay
// alive and unmodified until the stream is freed.
//
// # Safety
// `set` must be a live handle, `data` must point to `len` readable bytes
// for the stream's whole lifetime, and `out` must be valid.
enum BytescanStatus bytescan_stream_new(const struct BytescanCharset *set,
                                        const uint8_t *data,
                                        size_t len,
                                        enum BytescanKernel kernel,
                                        struct BytescanStream **out);

// Yields the next match position in ascending order. Returns false when the
// stream is exhausted or an argument is NULL.
//
// # Safety
// `stream` must be NULL or a live stream handle whose document is still
// valid; `out_pos` must be valid.
bool bytescan_stream_next(struct BytescanStream *stream, size_t *out_pos);

// Reads the stream's work counters: 64-byte blocks classified and bytes
// examined in the scalar tail (populated by the index64 kernel).
//
// # Safety
// `stream` must be NULL or a live stream handle; non-NULL out pointers must
// be valid.
enum BytescanStatus bytescan_stream_metrics(const struct BytescanStream *stream,
                                            uint64_t *out_block_loads,
                                            uint64_t *out_tail_bytes);

// Frees a stream handle; NULL is a no-op.
//
// # Safety
// `stream` must be NULL or a handle from `bytescan_stream_new`, not yet
// freed.
void bytescan_stream_free(struct BytescanStream *stream);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BYTESCAN_H */
