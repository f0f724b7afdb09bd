use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{GVec, Subgroup};
use crate::error::{Error, Result};
use crate::periodicity::is_aperiodic;
use crate::signature::{Block, LogSig, Target};

/// A strictly decreasing chain `G_0 > G_1 > ... > G_s = {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupChain {
    groups: Vec<Subgroup>,
}

impl SubgroupChain {
    pub fn new(groups: Vec<Subgroup>) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::InvalidChain("a chain needs at least two groups".into()));
        }
        for (i, pair) in groups.windows(2).enumerate() {
            let (big, small) = (&pair[0], &pair[1]);
            if !small.is_subgroup_of(big) || small.rank() == big.rank() {
                return Err(Error::InvalidChain(format!(
                    "G_{} is not a proper subgroup of G_{}",
                    i + 1,
                    i
                )));
            }
        }
        if groups.last().map(Subgroup::rank) != Some(0) {
            return Err(Error::InvalidChain("chain must end in the trivial group".into()));
        }
        Ok(SubgroupChain { groups })
    }

    /// `2^n` down to the trivial group, step `i` dropping `drops[i]` of the
    /// highest remaining standard generators.
    pub fn standard(n: usize, drops: &[usize]) -> Result<Self> {
        if drops.iter().sum::<usize>() != n {
            return Err(Error::InvalidChain(format!(
                "steps {drops:?} do not add up to {n}"
            )));
        }
        let mut keep = n;
        let mut groups = vec![Subgroup::whole(n)?];
        for &d in drops {
            keep -= d;
            let gens = (0..keep)
                .map(|i| GVec::generator(i, n))
                .collect::<Result<Vec<_>>>()?;
            groups.push(Subgroup::span(n, &gens)?);
        }
        SubgroupChain::new(groups)
    }

    pub fn groups(&self) -> &[Subgroup] {
        &self.groups
    }

    pub fn top(&self) -> &Subgroup {
        &self.groups[0]
    }

    fn target(&self) -> Target {
        let top = self.top();
        if top.rank() == top.ambient_dim() {
            Target::Group
        } else {
            Target::Subgroup(top.clone())
        }
    }
}

/// Left or right transversals. `2^n` is abelian, so both give the same blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The exact transversal signature of a chain: block `i` is the complement of
/// `G_i` in `G_{i-1}`, so the last block is `G_{s-1}` itself.
pub fn exact_transversal(chain: &SubgroupChain, _side: Side) -> Result<LogSig> {
    let blocks = chain
        .groups()
        .windows(2)
        .map(|pair| Block::new(pair[1].complement_in(&pair[0])?.reps().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    LogSig::new(blocks, chain.target())
}

/// Like [`exact_transversal`], but every representative is moved to a random
/// element of its coset and each block is shuffled.
pub fn exact_transversal_randomized<R: Rng + ?Sized>(
    chain: &SubgroupChain,
    _side: Side,
    rng: &mut R,
) -> Result<LogSig> {
    let blocks = chain
        .groups()
        .windows(2)
        .map(|pair| {
            let (big, small) = (&pair[0], &pair[1]);
            let members = small.elements();
            let mut reps: Vec<GVec> = small
                .complement_in(big)?
                .reps()
                .iter()
                .map(|&r| r + members[rng.gen_range(0..members.len())])
                .collect();
            reps.shuffle(rng);
            Block::new(reps)
        })
        .collect::<Result<Vec<_>>>()?;
    LogSig::new(blocks, chain.target())
}

/// One of the four transformations that preserve logarithmic signatures of
/// abelian groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtOp {
    /// New position `k` of the block holds old entry `perm[k]`.
    PermuteWithin { block: usize, perm: Vec<usize> },
    /// New block `k` is old block `perm[k]`.
    PermuteBlocks { perm: Vec<usize> },
    /// Replaces a block by its translate.
    Translate { block: usize, by: GVec },
    /// Replaces two blocks by their sumset, placed at the lower index.
    /// Entries of `first` vary fastest.
    Amalgamate { first: usize, second: usize },
}

fn check_perm(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(Error::IndexOutOfBounds(format!(
            "permutation of length {} for {len} items",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(Error::IndexOutOfBounds(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

fn check_block(i: usize, s: usize) -> Result<()> {
    if i >= s {
        return Err(Error::IndexOutOfBounds(format!("block {i} of {s}")));
    }
    Ok(())
}

/// Applies one operation.
pub fn apply_at_op(sig: &LogSig, op: &AtOp) -> Result<LogSig> {
    let target = sig.target().clone();
    let mut blocks = sig.blocks().to_vec();
    let s = blocks.len();
    match op {
        AtOp::PermuteWithin { block, perm } => {
            check_block(*block, s)?;
            let old = blocks[*block].elems();
            check_perm(perm, old.len())?;
            blocks[*block] = Block::new(perm.iter().map(|&p| old[p]).collect())?;
        }
        AtOp::PermuteBlocks { perm } => {
            check_perm(perm, s)?;
            blocks = perm.iter().map(|&p| blocks[p].clone()).collect();
        }
        AtOp::Translate { block, by } => {
            check_block(*block, s)?;
            if by.dim() != sig.dim() {
                return Err(Error::DimensionMismatch {
                    left: sig.dim(),
                    right: by.dim(),
                });
            }
            blocks[*block] = blocks[*block].translate(*by);
        }
        AtOp::Amalgamate { first, second } => {
            check_block(*first, s)?;
            check_block(*second, s)?;
            if first == second {
                return Err(Error::IndexOutOfBounds(format!(
                    "cannot amalgamate block {first} with itself"
                )));
            }
            let (a, b) = (&blocks[*first], &blocks[*second]);
            let merged: Vec<GVec> = b
                .iter()
                .flat_map(|&y| a.iter().map(move |&x| x + y))
                .collect();
            let merged = Block::new(merged)?;
            let got = merged.sorted_set().len();
            if got != merged.len() {
                return Err(Error::AmalgamationCollision {
                    first: *first,
                    second: *second,
                    got,
                    expected: merged.len(),
                });
            }
            let (lo, hi) = (*first.min(second), *first.max(second));
            blocks[lo] = merged;
            blocks.remove(hi);
        }
    }
    LogSig::new(blocks, target)
}

/// A signature after hiding transformations, with its periodicity rechecked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hidden {
    pub sig: LogSig,
    /// Amalgamation can introduce periods, so this is recomputed.
    pub aperiodic: bool,
}

/// Applies `ops` in order.
pub fn hide_seed(sig: &LogSig, ops: &[AtOp]) -> Result<Hidden> {
    let sig = ops
        .iter()
        .try_fold(sig.clone(), |acc, op| apply_at_op(&acc, op))?;
    let aperiodic = is_aperiodic(&sig);
    Ok(Hidden { sig, aperiodic })
}
