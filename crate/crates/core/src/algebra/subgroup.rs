use std::collections::HashMap;

use super::gvec::GVec;
use crate::error::{Error, Result};

/// A subgroup of `2^n`, held as a basis in reduced row-echelon form.
///
/// Every basis vector owns a pivot bit (its highest set bit) that is clear in
/// all other basis vectors, so membership is a single reduction pass.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: usize,
    // sorted by pivot, descending
    basis: Vec<GVec>,
}

fn pivot(bits: u64) -> u32 {
    63 - bits.leading_zeros()
}

impl Subgroup {
    pub fn trivial(ambient: usize) -> Result<Self> {
        GVec::zero(ambient)?;
        Ok(Subgroup {
            ambient,
            basis: Vec::new(),
        })
    }

    pub fn whole(ambient: usize) -> Result<Self> {
        let gens = (0..ambient)
            .map(|i| GVec::generator(i, ambient))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::span(ambient, &gens)
    }

    /// The subgroup generated by `generators`.
    pub fn span(ambient: usize, generators: &[GVec]) -> Result<Self> {
        let mut sub = Subgroup::trivial(ambient)?;
        for &g in generators {
            if g.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: g.dim(),
                });
            }
            sub.insert(g);
        }
        Ok(sub)
    }

    /// Adds `g` to the generating set. Returns `false` when `g` was already
    /// a member.
    pub fn insert(&mut self, g: GVec) -> bool {
        let r = self.reduce(g);
        if r.is_zero() {
            return false;
        }
        let p = pivot(r.bits());
        for b in &mut self.basis {
            if b.bit(p as usize) {
                *b = *b + r;
            }
        }
        let pos = self
            .basis
            .iter()
            .position(|b| pivot(b.bits()) < p)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, r);
        true
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> u128 {
        1u128 << self.rank()
    }

    pub fn basis(&self) -> &[GVec] {
        &self.basis
    }

    /// Canonical coset representative of `g`: `g` with every pivot bit cleared.
    pub fn reduce(&self, g: GVec) -> GVec {
        let mut r = g;
        for &b in &self.basis {
            if r.bit(pivot(b.bits()) as usize) {
                r = r + b;
            }
        }
        r
    }

    pub fn contains(&self, g: GVec) -> bool {
        g.dim() == self.ambient && self.reduce(g).is_zero()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|&b| other.contains(b))
    }

    /// All elements, ordered by the binary counter over the basis.
    pub fn elements(&self) -> Vec<GVec> {
        let mut out = vec![GVec::from_raw(0, self.ambient)];
        for &b in self.basis.iter().rev() {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] + b);
            }
        }
        out
    }

    /// A transversal of `self` in the larger group `sup`, taken as the span of
    /// a complement of `self`'s basis within `sup`. The result is itself a
    /// subgroup and contains the identity.
    pub fn complement_in(&self, sup: &Subgroup) -> Result<Transversal> {
        if !self.is_subgroup_of(sup) {
            return Err(Error::NotTransversal(
                "subgroup is not contained in the ambient group".into(),
            ));
        }
        let mut acc = self.clone();
        let mut extra = Vec::new();
        for &b in sup.basis().iter().rev() {
            if acc.insert(b) {
                extra.push(b);
            }
        }
        let reps = Subgroup::span(self.ambient, &extra)?.elements();
        Transversal::new(self.clone(), sup.clone(), reps)
    }
}

/// One representative per coset of `subgroup` inside `ambient`.
#[derive(Clone, Debug)]
pub struct Transversal {
    subgroup: Subgroup,
    ambient: Subgroup,
    reps: Vec<GVec>,
    by_coset: HashMap<u64, usize>,
}

impl Transversal {
    /// Checks that `reps` lie in pairwise distinct cosets and that there is
    /// exactly one per coset.
    pub fn new(subgroup: Subgroup, ambient: Subgroup, reps: Vec<GVec>) -> Result<Self> {
        if !subgroup.is_subgroup_of(&ambient) {
            return Err(Error::NotTransversal(
                "subgroup is not contained in the ambient group".into(),
            ));
        }
        let mut by_coset = HashMap::with_capacity(reps.len());
        for (i, &r) in reps.iter().enumerate() {
            if !ambient.contains(r) {
                return Err(Error::NotTransversal(format!(
                    "representative {r} lies outside the ambient group"
                )));
            }
            if let Some(j) = by_coset.insert(subgroup.reduce(r).bits(), i) {
                return Err(Error::NotTransversal(format!(
                    "representatives {} and {} share a coset",
                    reps[j], r
                )));
            }
        }
        if (reps.len() as u128) * subgroup.order() != ambient.order() {
            return Err(Error::NotTransversal(format!(
                "{} representatives for index {}",
                reps.len(),
                ambient.order() / subgroup.order()
            )));
        }
        Ok(Transversal {
            subgroup,
            ambient,
            reps,
            by_coset,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn reps(&self) -> &[GVec] {
        &self.reps
    }

    /// The representative of `g`'s coset, found by canonical reduction.
    pub fn rep_of(&self, g: GVec) -> Result<GVec> {
        if !self.ambient.contains(g) {
            return Err(Error::NotTransversal(format!(
                "{g} lies outside the ambient group"
            )));
        }
        let i = self.by_coset[&self.subgroup.reduce(g).bits()];
        Ok(self.reps[i])
    }
}

/// The unique `r` in `reps` with `g + r` in `subgroup`, found by scanning.
///
/// Unlike [`Transversal::rep_of`] this takes an unchecked list and reports
/// when it is not a transversal around `g`.
pub fn coset_rep(g: GVec, subgroup: &Subgroup, reps: &[GVec]) -> Result<GVec> {
    let mut hits = reps.iter().filter(|&&r| subgroup.contains(g + r));
    match (hits.next(), hits.next()) {
        (Some(&r), None) => Ok(r),
        (None, _) => Err(Error::NotTransversal(format!(
            "no representative for the coset of {g}"
        ))),
        (Some(&a), Some(&b)) => Err(Error::NotTransversal(format!(
            "{a} and {b} both represent the coset of {g}"
        ))),
    }
}
