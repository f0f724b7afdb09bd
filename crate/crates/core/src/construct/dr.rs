//! The decomposed-and-reunited construction.
//!
//! Inputs are a subgroup `U`, a transversal `R` of `U`, a logarithmic
//! signature `delta = [D_1, ..., D_s]` of `R` with `D_i = [d_{i,1}, ...]`,
//! and for every block index `i` and every `j` a set `A_i^(j)` inside `U`.
//! Whenever `(A_1^(j_1), ..., A_s^(j_s))` is a logarithmic signature of `U`
//! for every index tuple, the blocks
//!
//! ```text
//! B_i = (d_{i,1} + A_i^(1)) u ... u (d_{i,r_i} + A_i^(r_i))
//! ```
//!
//! form a logarithmic signature of the whole group, of type
//! `(sum_j |A_i^(j)|)_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Subgroup, Transversal};
use crate::error::{Error, Result};
use crate::signature::{tau_inv, type_order, Block, LogSig, Target};

/// Tuples checked when the full tuple space exceeds the budget.
pub const TUPLE_SAMPLE: u128 = 10_000;

/// Everything the construction consumes.
#[derive(Clone, Debug)]
pub struct DrBlueprint {
    transversal: Transversal,
    delta: Vec<Block>,
    family: Vec<Vec<Block>>,
}

/// How much of the all-tuples condition was verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleCheck {
    /// Every tuple was validated.
    Exhaustive { tuples: u128 },
    /// A pseudo-random sample of tuples was validated.
    Sampled { tuples: u128, of: u128 },
    /// A single tuple already exceeds the budget.
    Skipped,
}

/// The assembled signature and the extent of its validation.
#[derive(Clone, Debug)]
pub struct DrOutput {
    pub sig: LogSig,
    pub tuple_check: TupleCheck,
}

impl DrBlueprint {
    /// Checks everything except the all-tuples condition: shapes, that
    /// `delta` is a logarithmic signature of `R`, that the `d_{i,j}` of one
    /// block lie in distinct cosets of `U`, and that every `A_i^(j)` lies in
    /// `U`.
    pub fn new(transversal: Transversal, delta: Vec<Block>, family: Vec<Vec<Block>>) -> Result<Self> {
        let u = transversal.subgroup();
        let n = u.ambient_dim();
        if delta.len() != family.len() || delta.is_empty() {
            return Err(Error::InvalidBlueprint(format!(
                "{} blocks in delta, {} families",
                delta.len(),
                family.len()
            )));
        }
        for (i, (d, f)) in delta.iter().zip(&family).enumerate() {
            if d.dim() != n {
                return Err(Error::DimensionMismatch { left: n, right: d.dim() });
            }
            if d.len() != f.len() {
                return Err(Error::InvalidBlueprint(format!(
                    "block {}: {} translation elements but {} sets",
                    i + 1,
                    d.len(),
                    f.len()
                )));
            }
            for (j, &a) in d.iter().enumerate() {
                for &b in &d.elems()[j + 1..] {
                    if u.contains(a + b) {
                        return Err(Error::InvalidBlueprint(format!(
                            "block {}: {a} and {b} lie in the same coset of U",
                            i + 1
                        )));
                    }
                }
            }
            for (j, set) in f.iter().enumerate() {
                if let Some(x) = set.iter().find(|&&x| !u.contains(x)) {
                    return Err(Error::InvalidBlueprint(format!(
                        "A_{}^({}) contains {x}, which is not in U",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let delta_sig = LogSig::new(delta.clone(), Target::Set(transversal.reps().to_vec()))?;
        let report = delta_sig.validate(crate::signature::DEFAULT_BUDGET)?;
        if !report.is_logsig {
            return Err(Error::InvalidBlueprint(
                "delta is not a logarithmic signature of R".into(),
            ));
        }
        Ok(DrBlueprint {
            transversal,
            delta,
            family,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.transversal.subgroup()
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn delta(&self) -> &[Block] {
        &self.delta
    }

    pub fn family(&self) -> &[Vec<Block>] {
        &self.family
    }

    fn tuple_sig(&self, idx: &[usize]) -> Result<LogSig> {
        let blocks = self
            .family
            .iter()
            .zip(idx)
            .map(|(f, &j)| f[j].clone())
            .collect();
        LogSig::new(blocks, Target::Subgroup(self.subgroup().clone()))
    }

    fn check_tuple(&self, types: &[usize], x: u128, budget: u128) -> Result<()> {
        let idx = tau_inv(types, x)?;
        if !self.tuple_sig(&idx)?.validate(budget)?.is_logsig {
            let shown: Vec<String> = idx.iter().map(|j| (j + 1).to_string()).collect();
            return Err(Error::InvalidBlueprint(format!(
                "(A_1^({}), ...) is not a logarithmic signature of U",
                shown.join(",")
            )));
        }
        Ok(())
    }

    /// Verifies that every tuple `(A_1^(j_1), ..., A_s^(j_s))` is a
    /// logarithmic signature of `U`, within `budget` enumerated products.
    ///
    /// Past the budget a reproducible pseudo-random sample of at most
    /// [`TUPLE_SAMPLE`] tuples is checked instead.
    pub fn check_tuples(&self, budget: u128) -> Result<TupleCheck> {
        let types: Vec<usize> = self.delta.iter().map(Block::len).collect();
        let tuples = type_order(&types)
            .ok_or_else(|| Error::InvalidBlueprint("tuple count overflows".into()))?;
        let per_tuple = self.subgroup().order();
        if per_tuple > budget {
            return Ok(TupleCheck::Skipped);
        }
        if tuples.saturating_mul(per_tuple) <= budget {
            for x in 0..tuples {
                self.check_tuple(&types, x, budget)?;
            }
            return Ok(TupleCheck::Exhaustive { tuples });
        }
        let sample = (budget / per_tuple).clamp(1, TUPLE_SAMPLE);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..sample {
            self.check_tuple(&types, rng.gen_range(0..tuples), budget)?;
        }
        Ok(TupleCheck::Sampled {
            tuples: sample,
            of: tuples,
        })
    }
}

/// Builds `beta` from a blueprint. Block `i` lists `d_{i,1} + A_i^(1)` first,
/// keeping the internal order of each `A_i^(j)`.
pub fn dr_construct(bp: &DrBlueprint, budget: u128) -> Result<DrOutput> {
    let tuple_check = bp.check_tuples(budget)?;
    let blocks = bp
        .delta
        .iter()
        .zip(&bp.family)
        .enumerate()
        .map(|(i, (d, f))| {
            let elems: Vec<_> = d
                .iter()
                .zip(f)
                .flat_map(|(&dj, a)| a.iter().map(move |&x| dj + x))
                .collect();
            let block = Block::new(elems)?;
            // distinct cosets make the union disjoint
            if block.has_duplicates() {
                return Err(Error::InvalidBlueprint(format!(
                    "block {} is not a disjoint union",
                    i + 1
                )));
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>>>()?;
    let ambient = bp.transversal.ambient();
    let target = if ambient.rank() == ambient.ambient_dim() {
        Target::Group
    } else {
        Target::Subgroup(ambient.clone())
    };
    Ok(DrOutput {
        sig: LogSig::new(blocks, target)?,
        tuple_check,
    })
}
