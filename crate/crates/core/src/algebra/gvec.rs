use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Largest supported ambient dimension; one machine word holds an element.
pub const MAX_DIM: usize = 64;

/// An element of the elementary abelian group `2^n`, stored as an `n`-bit
/// vector over GF(2).
///
/// Bit `i` is the coefficient of the `i`-th standard generator. The group law
/// is XOR and every element is its own inverse.
///
/// Elements are totally ordered lexicographically on the coordinate string
/// `(bit 0, bit 1, ...)`, so the first generator is the most significant
/// position. With `u`, `v` the first two generators the strings are `10`,
/// `01` and `11`, giving `v < u < uv`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GVec {
    bits: u64,
    dim: u8,
}

fn dim_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

impl GVec {
    pub fn new(bits: u64, dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim));
        }
        if bits & !dim_mask(dim) != 0 {
            return Err(Error::ValueTooWide { value: bits, dim });
        }
        Ok(GVec {
            bits,
            dim: dim as u8,
        })
    }

    /// Builds an element without range checks. Bits above `dim` are masked off.
    pub(crate) fn from_raw(bits: u64, dim: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&dim));
        GVec {
            bits: bits & dim_mask(dim),
            dim: dim as u8,
        }
    }

    pub fn zero(dim: usize) -> Result<Self> {
        GVec::new(0, dim)
    }

    /// The `i`-th standard generator of `2^dim`.
    pub fn generator(i: usize, dim: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfBounds(format!(
                "generator {i} of 2^{dim}"
            )));
        }
        GVec::new(1u64 << i, dim)
    }

    /// Parses a multiplicative word such as `uvw` or `1` against a list of
    /// generator names, where `names[i]` denotes bit `i`.
    ///
    /// ```
    /// use logsig::GVec;
    /// let g = GVec::from_word("uvy", "uvwxyz").unwrap();
    /// assert_eq!(g.bits(), 0b010011);
    /// assert_eq!(GVec::from_word("1", "uvwxyz").unwrap().bits(), 0);
    /// ```
    pub fn from_word(word: &str, names: &str) -> Result<Self> {
        let names: Vec<char> = names.chars().collect();
        let mut bits = 0u64;
        if word != "1" {
            for ch in word.chars() {
                let pos = names.iter().position(|&c| c == ch).ok_or_else(|| {
                    Error::parse(0, format!("unknown generator '{ch}' in word '{word}'"))
                })?;
                bits ^= 1u64 << pos;
            }
        }
        GVec::new(bits, names.len())
    }

    /// Inverse of [`GVec::from_word`]; the identity is written `1`.
    pub fn to_word(self, names: &str) -> String {
        if self.bits == 0 {
            return "1".to_string();
        }
        names
            .chars()
            .enumerate()
            .filter(|&(i, _)| i < self.dim() && self.bit(i))
            .map(|(_, c)| c)
            .collect()
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn bit(self, i: usize) -> bool {
        i < 64 && (self.bits >> i) & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Group operation with a dimension check.
    pub fn checked_add(self, other: GVec) -> Result<GVec> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(GVec {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        })
    }

    /// Sort key realising the lexicographic order: bit 0 becomes the most
    /// significant bit of the key.
    pub fn lex_key(self) -> u64 {
        self.bits.reverse_bits() >> (64 - self.dim())
    }

    /// Lowercase hex, most significant bit first, `ceil(dim/4)` digits.
    pub fn to_hex(self) -> String {
        let width = self.dim().div_ceil(4);
        format!("{:0width$x}", self.bits, width = width)
    }

    pub fn from_hex(s: &str, dim: usize) -> Result<Self> {
        let width = dim.div_ceil(4);
        if s.len() != width {
            return Err(Error::parse(
                0,
                format!("hex token '{s}' has {} digits, expected {width}", s.len()),
            ));
        }
        if !s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(Error::parse(0, format!("malformed hex token '{s}'")));
        }
        let bits = u64::from_str_radix(s, 16)
            .map_err(|e| Error::parse(0, format!("malformed hex token '{s}': {e}")))?;
        GVec::new(bits, dim)
    }
}

impl Add for GVec {
    type Output = GVec;

    /// XOR. Panics in debug builds on a dimension mismatch; use
    /// [`GVec::checked_add`] for untrusted input.
    fn add(self, rhs: GVec) -> GVec {
        debug_assert_eq!(self.dim, rhs.dim, "GVec dimension mismatch");
        GVec {
            bits: self.bits ^ rhs.bits,
            dim: self.dim,
        }
    }
}

impl Ord for GVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for GVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl serde::Serialize for GVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl fmt::Debug for GVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GVec({}; 2^{})", self.to_hex(), self.dim)
    }
}
