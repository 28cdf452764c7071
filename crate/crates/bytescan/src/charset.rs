//! Target byte sets and their nibble-indexed classification tables.
//!
//! A [`CharSet`] holds up to 16 target byte values, no two of which share a
//! low nibble. That restriction is what makes single-table vectorized
//! classification possible: membership of a byte `v` reduces to
//! `table[v & 0x0F] == v`, which a 16-entry SIMD table lookup answers for a
//! whole block at once.

use std::fmt;
use thiserror::Error;

/// Errors from [`CharSet::new`].
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CharSetError {
    #[error("character set must not be empty")]
    Empty,
    #[error("character set has {0} members; a nibble table supports at most 16")]
    TooManyMembers(usize),
    #[error("duplicate member 0x{0:02X}")]
    DuplicateMember(u8),
    #[error("members 0x{first:02X} and 0x{second:02X} share low nibble 0x{nibble:X}")]
    NibbleCollision { first: u8, second: u8, nibble: u8 },
}

/// Errors from [`CharSet::from_spec`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("empty character spec")]
    Empty,
    #[error(
        "bad token {0:?}: expected a quoted printable character, \\xNN, or one of NUL, CR, AMP, LT"
    )]
    BadToken(String),
    #[error(transparent)]
    Set(#[from] CharSetError),
}

/// A validated set of at most 16 target bytes with distinct low nibbles.
///
/// Immutable after construction and safe to share across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct CharSet {
    members: Vec<u8>,
    table: [u8; 16],
}

impl CharSet {
    /// Builds a set from `members`, preserving their order.
    ///
    /// Fails if the set is empty, has more than 16 members, repeats a member,
    /// or contains two members with the same low nibble.
    pub fn new(members: &[u8]) -> Result<Self, CharSetError> {
        if members.is_empty() {
            return Err(CharSetError::Empty);
        }
        if members.len() > 16 {
            return Err(CharSetError::TooManyMembers(members.len()));
        }
        let mut slot_owner: [Option<u8>; 16] = [None; 16];
        for &m in members {
            let nibble = m & 0x0F;
            match slot_owner[nibble as usize] {
                Some(prev) if prev == m => return Err(CharSetError::DuplicateMember(m)),
                Some(prev) => {
                    return Err(CharSetError::NibbleCollision {
                        first: prev,
                        second: m,
                        nibble,
                    })
                }
                None => slot_owner[nibble as usize] = Some(m),
            }
        }
        let mut table = [0u8; 16];
        for (slot, entry) in table.iter_mut().enumerate() {
            *entry = match slot_owner[slot] {
                Some(m) => m,
                None => unused_slot_filler(slot as u8),
            };
        }
        Ok(CharSet {
            members: members.to_vec(),
            table,
        })
    }

    /// The byte set an HTML tokenizer scans for: `<`, CR, `&`, and NUL.
    pub fn html() -> Self {
        CharSet::new(&[0x3C, 0x0D, 0x26, 0x00]).expect("html set is valid")
    }

    /// Parses the CLI-facing spec string: comma-separated tokens, each a
    /// quoted printable character (`'<'`), a hex escape (`\x3C`), or one of
    /// the names `NUL`, `CR`, `AMP`, `LT`.
    pub fn from_spec(spec: &str) -> Result<Self, SpecError> {
        let mut members = Vec::new();
        let trimmed = spec.trim();
        if trimmed.is_empty() {
            return Err(SpecError::Empty);
        }
        for token in trimmed.split(',') {
            members.push(parse_token(token.trim())?);
        }
        Ok(CharSet::new(&members)?)
    }

    /// Membership test: `table[v & 0x0F] == v`.
    #[inline]
    pub fn contains(&self, v: u8) -> bool {
        self.table[(v & 0x0F) as usize] == v
    }

    /// The member bytes in the order they were supplied.
    pub fn members(&self) -> &[u8] {
        &self.members
    }

    /// The 16-entry classification table indexed by low nibble.
    #[inline]
    pub fn nibble_table(&self) -> &[u8; 16] {
        &self.table
    }
}

impl fmt::Debug for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharSet{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "0x{m:02X}")?;
        }
        write!(f, "}}")
    }
}

/// Filler for an unused table slot: a byte whose own low nibble differs from
/// the slot index, so no byte can ever match against it. Slot 0 cannot use
/// the high-nibble form (0x10 has low nibble 0) and falls back to 0xFF.
fn unused_slot_filler(slot: u8) -> u8 {
    let candidate = 0x10u8.wrapping_mul((slot + 1) % 16);
    if candidate & 0x0F != slot {
        candidate
    } else {
        slot ^ 0xFF
    }
}

fn parse_token(token: &str) -> Result<u8, SpecError> {
    let bad = || SpecError::BadToken(token.to_string());
    match token {
        "NUL" => return Ok(0x00),
        "CR" => return Ok(0x0D),
        "AMP" => return Ok(0x26),
        "LT" => return Ok(0x3C),
        _ => {}
    }
    if let Some(hex) = token.strip_prefix("\\x") {
        if hex.len() == 2 {
            return u8::from_str_radix(hex, 16).map_err(|_| bad());
        }
        return Err(bad());
    }
    let bytes = token.as_bytes();
    if bytes.len() == 3 && bytes[0] == bytes[2] && (bytes[0] == b'\'' || bytes[0] == b'"') {
        let c = bytes[1];
        if (0x20..=0x7E).contains(&c) {
            return Ok(c);
        }
    }
    Err(bad())
}
