//! Find every occurrence of a small set of byte values in a document.
//!
//! The target set holds at most 16 bytes, no two sharing a low nibble, which
//! lets a single 16-entry table classify a whole SIMD register of input at
//! once. Four interchangeable kernels walk a document with identical
//! results: a byte-at-a-time scalar loop, two 16-byte block kernels that
//! differ in how they extract the first matching lane, and a 64-byte kernel
//! that folds each block into a bit-per-byte index and then iterates set
//! bits without touching the input again.
//!
//! ```
//! use bytescan::{CharSet, KernelId, MatchStream};
//!
//! let set = CharSet::html();
//! let doc = b"<p>fish &amp; chips</p>";
//! let positions: Vec<usize> = MatchStream::new(&set, doc, KernelId::Index64).collect();
//! assert_eq!(positions, vec![0, 8, 19]);
//! ```

pub mod bench;
pub mod charset;
pub mod corpus;
pub mod kernel;
pub mod perf;
pub mod stream;

pub use charset::CharSet;
pub use kernel::KernelId;
pub use stream::MatchStream;
