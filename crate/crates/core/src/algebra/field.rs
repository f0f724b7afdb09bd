use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Lexicographically least irreducible polynomial of each degree 2..=32,
/// leading term included. Index `n - 2`.
const IRREDUCIBLE: [u64; 31] = [
    0x7,
    0xb,
    0x13,
    0x25,
    0x43,
    0x83,
    0x11b,
    0x203,
    0x409,
    0x805,
    0x1009,
    0x201b,
    0x4021,
    0x8003,
    0x1002b,
    0x20009,
    0x40009,
    0x80027,
    0x100009,
    0x200005,
    0x400003,
    0x800021,
    0x100001b,
    0x2000009,
    0x400001b,
    0x8000027,
    0x10000003,
    0x20000005,
    0x40000003,
    0x80000009,
    0x10000008d,
];

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 32;

/// The fixed reduction polynomial for `F_{2^n}`.
pub fn modulus(n: usize) -> Result<u64> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        return Err(Error::UnsupportedDegree(n));
    }
    Ok(IRREDUCIBLE[n - MIN_DEGREE])
}

/// Carry-less product of two polynomials of degree < 32.
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn reduce(mut v: u64, n: usize, poly: u64) -> u64 {
    for bit in (n..64).rev() {
        if (v >> bit) & 1 == 1 {
            v ^= poly << (bit - n);
        }
    }
    v
}

/// An element of `F_{2^n}` in the polynomial basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    bits: u64,
    deg: u8,
}

impl FieldElem {
    pub fn new(bits: u64, n: usize) -> Result<Self> {
        modulus(n)?;
        if bits >> n != 0 {
            return Err(Error::ValueTooWide { value: bits, dim: n });
        }
        Ok(FieldElem {
            bits,
            deg: n as u8,
        })
    }

    pub(crate) fn from_raw(bits: u64, n: usize) -> Self {
        FieldElem {
            bits: bits & ((1u64 << n) - 1),
            deg: n as u8,
        }
    }

    pub fn zero(n: usize) -> Result<Self> {
        FieldElem::new(0, n)
    }

    pub fn one(n: usize) -> Result<Self> {
        FieldElem::new(1, n)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn degree(self) -> usize {
        self.deg as usize
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn order(n: usize) -> u64 {
        1u64 << n
    }

    /// All `2^n` elements in increasing bit order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = FieldElem>> {
        modulus(n)?;
        Ok((0..(1u64 << n)).map(move |b| FieldElem::from_raw(b, n)))
    }

    fn check(self, other: FieldElem) -> Result<()> {
        if self.deg != other.deg {
            return Err(Error::DimensionMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(self, other: FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn pow(self, mut k: u64) -> FieldElem {
        let mut base = self;
        let mut acc = FieldElem::from_raw(1, self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow((1u64 << self.degree()) - 2))
    }

    /// `a^(2^k)`, the `k`-th power of the Frobenius automorphism.
    pub fn frobenius(self, k: usize) -> Result<FieldElem> {
        let n = self.degree();
        if k == 0 || k >= n {
            return Err(Error::FrobeniusExponent { k, n });
        }
        let mut a = self;
        for _ in 0..k {
            a = a * a;
        }
        Ok(a)
    }

    pub fn to_hex(self) -> String {
        let width = self.degree().div_ceil(4);
        format!("{:0width$x}", self.bits, width = width)
    }

    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        let g = super::GVec::from_hex(s, n)?;
        FieldElem::new(g.bits(), n)
    }
}

/// Order of `a -> a^(2^k)` as an automorphism of `F_{2^n}`.
pub fn frobenius_order(n: usize, k: usize) -> usize {
    n / gcd(n, k)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Add for FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: FieldElem) -> FieldElem {
        debug_assert_eq!(self.deg, rhs.deg);
        FieldElem {
            bits: self.bits ^ rhs.bits,
            deg: self.deg,
        }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;

    fn mul(self, rhs: FieldElem) -> FieldElem {
        debug_assert_eq!(self.deg, rhs.deg);
        let n = self.degree();
        FieldElem {
            bits: reduce(clmul(self.bits, rhs.bits), n, IRREDUCIBLE[n - MIN_DEGREE]),
            deg: self.deg,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}({})", 1u64 << self.deg, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook long division, bit by bit from the top.
    fn poly_rem(mut a: u64, m: u64) -> u64 {
        let dm = 63 - m.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= dm {
            a ^= m << (63 - a.leading_zeros() - dm);
        }
        a
    }

    fn is_irreducible(p: u64) -> bool {
        let d = 63 - p.leading_zeros();
        (2u64..(1 << (d / 2 + 1))).all(|q| poly_rem(p, q) != 0)
    }

    #[test]
    fn table_is_least_irreducible_up_to_16() {
        for n in 2..=16usize {
            let p = modulus(n).unwrap();
            assert_eq!(63 - p.leading_zeros(), n as u32);
            assert!(is_irreducible(p), "degree {n}");
            let least = ((1u64 << n) + 1..p)
                .step_by(2)
                .find(|&c| is_irreducible(c));
            assert_eq!(least, None, "degree {n} has a smaller irreducible");
        }
    }

    #[test]
    fn f8_product_matches_long_division() {
        let x = FieldElem::new(0b010, 3).unwrap();
        let x2 = FieldElem::new(0b100, 3).unwrap();
        assert_eq!((x * x2).bits(), 0b011);
        for a in 0..8u64 {
            for b in 0..8u64 {
                let expect = poly_rem(clmul(a, b), 0xb);
                let got = FieldElem::new(a, 3).unwrap() * FieldElem::new(b, 3).unwrap();
                assert_eq!(got.bits(), expect);
            }
        }
    }

    #[test]
    fn wide_degree_reduction() {
        let n = 32;
        let p = modulus(n).unwrap();
        let a = FieldElem::new(0xdead_beef, n).unwrap();
        let b = FieldElem::new(0x1234_5679, n).unwrap();
        assert_eq!((a * b).bits(), poly_rem(clmul(a.bits(), b.bits()), p));
        assert_eq!(a * a.inverse().unwrap(), FieldElem::one(n).unwrap());
    }

    #[test]
    fn frobenius_basics() {
        let x = FieldElem::new(0b10, 3).unwrap();
        assert_eq!(x.frobenius(1).unwrap(), x * x);
        assert!(FieldElem::zero(3).unwrap().frobenius(1).unwrap().is_zero());
        assert_eq!(
            FieldElem::one(5).unwrap().frobenius(3).unwrap(),
            FieldElem::one(5).unwrap()
        );
        assert!(x.frobenius(0).is_err());
        assert!(x.frobenius(3).is_err());
    }

    #[test]
    fn degree_checks() {
        assert!(FieldElem::new(0, 1).is_err());
        assert!(FieldElem::new(0, 33).is_err());
        assert!(FieldElem::new(8, 3).is_err());
        let a = FieldElem::one(3).unwrap();
        let b = FieldElem::one(4).unwrap();
        assert!(a.checked_mul(b).is_err());
        assert!(a.checked_add(b).is_err());
    }
}
