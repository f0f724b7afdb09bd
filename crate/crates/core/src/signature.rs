//! Covers and logarithmic signatures over `2^n`.
//!
//! A signature is a sequence of blocks `[A_1, ..., A_s]`. Picking one element
//! from each block and adding them up gives a *product*; the signature is a
//! cover of a target set `K` when the products are exactly `K`, and a
//! logarithmic signature when additionally every element of `K` arises from a
//! single index tuple.
//!
//! Index tuples are zero-based. The mixed-radix map [`tau`] sends
//! `(j_1, ..., j_s)` to `j_1 + j_2 r_1 + j_3 r_1 r_2 + ...`, so the first block
//! varies fastest.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Deref;

use serde::Serialize;

use crate::algebra::{GVec, Subgroup};
use crate::error::{Error, Result};

/// Default cap on the number of products any enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// An ordered sequence of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    elems: Vec<GVec>,
}

impl Block {
    pub fn new(elems: Vec<GVec>) -> Result<Self> {
        let first = elems
            .first()
            .ok_or_else(|| Error::InvalidSignature("empty block".into()))?;
        if let Some(g) = elems.iter().find(|g| g.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: g.dim(),
            });
        }
        Ok(Block { elems })
    }

    /// Builds a block from words like `["1", "u", "vw"]`.
    pub fn from_words(words: &[&str], names: &str) -> Result<Self> {
        Block::new(
            words
                .iter()
                .map(|w| GVec::from_word(w, names))
                .collect::<Result<_>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elems[0].dim()
    }

    pub fn elems(&self) -> &[GVec] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GVec> {
        self.elems.iter()
    }

    /// The elements as a sorted, deduplicated vector of raw bits.
    pub fn sorted_set(&self) -> Vec<u64> {
        sorted_set(&self.elems)
    }

    pub fn set_eq(&self, other: &Block) -> bool {
        self.sorted_set() == other.sorted_set()
    }

    pub fn has_duplicates(&self) -> bool {
        self.sorted_set().len() != self.elems.len()
    }

    /// `g + B`, element order preserved.
    pub fn translate(&self, g: GVec) -> Block {
        Block {
            elems: self.elems.iter().map(|&a| a + g).collect(),
        }
    }

    pub fn words(&self, names: &str) -> Vec<String> {
        self.elems.iter().map(|g| g.to_word(names)).collect()
    }
}

pub(crate) fn sorted_set(elems: &[GVec]) -> Vec<u64> {
    let mut v: Vec<u64> = elems.iter().map(|g| g.bits()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The set `K` a signature is meant to factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// The whole group `2^n`.
    Group,
    /// A subgroup given by a basis.
    Subgroup(Subgroup),
    /// An explicit subset.
    Set(Vec<GVec>),
}

impl Target {
    pub fn kind(&self) -> &'static str {
        match self {
            Target::Group => "group",
            Target::Subgroup(_) => "subgroup",
            Target::Set(_) => "set",
        }
    }

    pub fn size(&self, dim: usize) -> u128 {
        match self {
            Target::Group => 1u128 << dim,
            Target::Subgroup(s) => s.order(),
            Target::Set(v) => sorted_set(v).len() as u128,
        }
    }

    fn membership(&self) -> Membership<'_> {
        match self {
            Target::Group => Membership::All,
            Target::Subgroup(s) => Membership::Subgroup(s),
            Target::Set(v) => Membership::Set(v.iter().map(|g| g.bits()).collect()),
        }
    }
}

enum Membership<'a> {
    All,
    Subgroup(&'a Subgroup),
    Set(HashSet<u64>),
}

impl Membership<'_> {
    fn contains(&self, g: GVec) -> bool {
        match self {
            Membership::All => true,
            Membership::Subgroup(s) => s.contains(g),
            Membership::Set(s) => s.contains(&g.bits()),
        }
    }
}

/// A zero-based index tuple `(j_1, ..., j_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTuple(pub Vec<usize>);

impl Deref for IndexTuple {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Product of the block sizes, `None` on overflow.
pub fn type_order(type_vec: &[usize]) -> Option<u128> {
    type_vec
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
}

/// Mixed-radix encoding: `sum_i j_i * m_i` with `m_1 = 1`, `m_i = r_1 ... r_{i-1}`.
///
/// ```
/// use logsig::signature::tau;
/// assert_eq!(tau(&[2, 3], &[1, 2]).unwrap(), 5);
/// assert_eq!(tau(&[8, 8], &[7, 7]).unwrap(), 63);
/// ```
pub fn tau(type_vec: &[usize], idx: &[usize]) -> Result<u128> {
    if idx.len() != type_vec.len() {
        return Err(Error::IndexOutOfBounds(format!(
            "tuple of length {} for type of length {}",
            idx.len(),
            type_vec.len()
        )));
    }
    let mut x = 0u128;
    let mut radix = 1u128;
    for (i, (&j, &r)) in idx.iter().zip(type_vec).enumerate() {
        if j >= r {
            return Err(Error::IndexOutOfBounds(format!(
                "component {i} is {j}, block size {r}"
            )));
        }
        x += j as u128 * radix;
        radix = radix
            .checked_mul(r as u128)
            .ok_or_else(|| Error::IndexOutOfBounds("type order overflows".into()))?;
    }
    Ok(x)
}

/// Inverse of [`tau`], by repeated division with remainder.
pub fn tau_inv(type_vec: &[usize], x: u128) -> Result<IndexTuple> {
    let m = type_order(type_vec)
        .ok_or_else(|| Error::IndexOutOfBounds("type order overflows".into()))?;
    if x >= m {
        return Err(Error::IndexOutOfBounds(format!("{x} not below {m}")));
    }
    let mut rest = x;
    let idx = type_vec
        .iter()
        .map(|&r| {
            let j = (rest % r as u128) as usize;
            rest /= r as u128;
            j
        })
        .collect();
    Ok(IndexTuple(idx))
}

/// Collision statistics gathered by [`LogSig::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Number of index tuples, `prod r_i`.
    pub products: u128,
    pub target_size: u128,
    /// Number of distinct products.
    pub distinct: u64,
    /// Products landing outside the target.
    pub outside_target: u64,
    /// Target elements never produced.
    pub missing: u128,
    pub is_cover: bool,
    pub is_logsig: bool,
    /// Maps a factorization count `alpha_g >= 1` to how many elements have it.
    pub collision_histogram: BTreeMap<u64, u64>,
    pub warnings: Vec<String>,
}

/// A sequence of blocks together with the set it is meant to factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSig {
    dim: usize,
    blocks: Vec<Block>,
    target: Target,
}

impl LogSig {
    pub fn new(blocks: Vec<Block>, target: Target) -> Result<Self> {
        let dim = blocks
            .first()
            .ok_or_else(|| Error::InvalidSignature("no blocks".into()))?
            .dim();
        if let Some(b) = blocks.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: b.dim(),
            });
        }
        match &target {
            Target::Subgroup(s) if s.ambient_dim() != dim => {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: s.ambient_dim(),
                })
            }
            Target::Set(v) => {
                if let Some(g) = v.iter().find(|g| g.dim() != dim) {
                    return Err(Error::DimensionMismatch {
                        left: dim,
                        right: g.dim(),
                    });
                }
            }
            _ => {}
        }
        if type_order(&blocks.iter().map(Block::len).collect::<Vec<_>>()).is_none() {
            return Err(Error::InvalidSignature("type order overflows".into()));
        }
        Ok(LogSig {
            dim,
            blocks,
            target,
        })
    }

    /// A signature for the whole group, from generator words.
    pub fn from_words(blocks: &[&[&str]], names: &str) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|b| Block::from_words(b, names))
            .collect::<Result<_>>()?;
        LogSig::new(blocks, Target::Group)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn with_target(mut self, target: Target) -> Result<Self> {
        self.target = target;
        LogSig::new(self.blocks, self.target)
    }

    pub fn type_vec(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::len).collect()
    }

    /// `l(alpha)`, the total number of block entries.
    pub fn length(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    /// `prod r_i`.
    pub fn order(&self) -> u128 {
        type_order(&self.type_vec()).expect("checked at construction")
    }

    /// Warns when the length exceeds `64 n`, a practical stand-in for the
    /// polynomial-length requirement on covers.
    pub fn length_warning(&self) -> Option<String> {
        let limit = 64 * self.dim;
        (self.length() > limit).then(|| {
            format!(
                "length {} exceeds 64*n = {limit}; covers are expected to stay short",
                self.length()
            )
        })
    }

    /// The product selected by `tau_inv(x)`.
    pub fn breve(&self, x: u128) -> Result<GVec> {
        let idx = tau_inv(&self.type_vec(), x)?;
        Ok(self.product(&idx))
    }

    /// Product of the entries selected by an in-bounds index tuple.
    pub fn product(&self, idx: &[usize]) -> GVec {
        self.blocks
            .iter()
            .zip(idx)
            .fold(GVec::from_raw(0, self.dim), |acc, (b, &j)| acc + b.elems[j])
    }

    /// The full table `x -> breve(x)`, built block by block.
    pub fn products(&self, budget: u128) -> Result<Vec<GVec>> {
        let m = self.order();
        if m > budget {
            return Err(Error::BudgetExceeded {
                needed: m,
                budget,
            });
        }
        let mut table = Vec::with_capacity(m as usize);
        table.push(GVec::from_raw(0, self.dim));
        for block in &self.blocks {
            let prev = std::mem::take(&mut table);
            table.reserve(prev.len() * block.len());
            for &a in block.iter() {
                table.extend(prev.iter().map(|&p| p + a));
            }
        }
        Ok(table)
    }

    /// Enumerates all products and checks them against the target.
    pub fn validate(&self, budget: u128) -> Result<ValidationReport> {
        let table = self.products(budget)?;
        let target_size = self.target.size(self.dim);
        if target_size > budget {
            return Err(Error::BudgetExceeded {
                needed: target_size,
                budget,
            });
        }
        let member = self.target.membership();
        let mut counts: HashMap<u64, u64> = HashMap::with_capacity(table.len());
        let mut outside = 0u64;
        for &g in &table {
            if !member.contains(g) {
                outside += 1;
            }
            *counts.entry(g.bits()).or_default() += 1;
        }
        let inside_distinct = counts
            .keys()
            .filter(|&&b| member.contains(GVec::from_raw(b, self.dim)))
            .count() as u128;
        let missing = target_size - inside_distinct;
        let mut histogram = BTreeMap::new();
        for &c in counts.values() {
            *histogram.entry(c).or_default() += 1;
        }
        let is_cover = outside == 0 && missing == 0;
        let is_logsig = is_cover && table.len() as u128 == target_size;
        let mut warnings = Vec::new();
        warnings.extend(self.length_warning());
        if is_logsig {
            if let Some(i) = self.blocks.iter().position(Block::has_duplicates) {
                warnings.push(format!("block {} repeats an element", i + 1));
            }
        }
        Ok(ValidationReport {
            products: table.len() as u128,
            target_size,
            distinct: counts.len() as u64,
            outside_target: outside,
            missing,
            is_cover,
            is_logsig,
            collision_histogram: histogram,
            warnings,
        })
    }

    /// Every index tuple whose product equals `g`, by enumeration.
    pub fn brute_force_factor(&self, g: GVec, budget: u128) -> Result<Vec<IndexTuple>> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: g.dim(),
            });
        }
        let types = self.type_vec();
        let table = self.products(budget)?;
        table
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == g)
            .map(|(x, _)| tau_inv(&types, x as u128))
            .collect()
    }
}
