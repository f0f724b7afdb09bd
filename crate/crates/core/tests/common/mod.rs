#![allow(dead_code)]

use logsig::algebra::{GVec, Subgroup};
use logsig::signature::Block;
use rand::seq::SliceRandom;
use rand::Rng;

pub const EX6_NAMES: &str = "uvwxyz";
pub const EX7_NAMES: &str = "tuvwxyz";

pub fn w(word: &str, names: &str) -> GVec {
    GVec::from_word(word, names).unwrap()
}

pub fn words(ws: &[&str], names: &str) -> Vec<GVec> {
    ws.iter().map(|s| w(s, names)).collect()
}

pub fn random_elem<R: Rng>(rng: &mut R, n: usize) -> GVec {
    GVec::new(rng.gen_range(0..1u64 << n), n).unwrap()
}

/// A random subgroup of dimension `dim` inside `within`.
pub fn random_subgroup<R: Rng>(rng: &mut R, within: &Subgroup, dim: usize) -> Subgroup {
    let members = within.elements();
    let mut s = Subgroup::trivial(within.ambient_dim()).unwrap();
    while s.rank() < dim {
        s.insert(*members.choose(rng).unwrap());
    }
    s
}

/// `r` elements lying in pairwise distinct cosets of `u`.
pub fn distinct_coset_reps<R: Rng>(rng: &mut R, u: &Subgroup, r: usize) -> Vec<GVec> {
    let n = u.ambient_dim();
    let mut reps: Vec<GVec> = Vec::new();
    while reps.len() < r {
        let g = random_elem(rng, n);
        if reps.iter().all(|&d| !u.contains(d + g)) {
            reps.push(g);
        }
    }
    reps
}

/// Translation elements and subgroup sets for one block: `U` of dimension
/// `m` in `2^n`, `r` coset representatives, each `A_j` drawn from a pool of
/// `pool` subgroups of `U` of a common dimension so that repeats occur.
pub fn subgroup_instance<R: Rng>(rng: &mut R) -> (Vec<GVec>, Vec<Block>) {
    let n = rng.gen_range(3..=10);
    let m = rng.gen_range(1..n);
    let max_r = (1usize << (n - m)).min(6);
    let r = rng.gen_range(1..=max_r);
    let whole = Subgroup::whole(n).unwrap();
    let u = random_subgroup(rng, &whole, m);
    let ds = distinct_coset_reps(rng, &u, r);
    let k = rng.gen_range(0..=m);
    let pool: Vec<Block> = (0..rng.gen_range(1..=3))
        .map(|_| Block::new(random_subgroup(rng, &u, k).elements()).unwrap())
        .collect();
    let as_ = (0..r).map(|_| pool.choose(rng).unwrap().clone()).collect();
    (ds, as_)
}

/// Like [`subgroup_instance`] but the sets are random subsets of `U` of a
/// common size, some repeated, some translated.
pub fn subset_instance<R: Rng>(rng: &mut R) -> (Vec<GVec>, Vec<Block>) {
    let n = rng.gen_range(3..=9);
    let m = rng.gen_range(1..n);
    let max_r = (1usize << (n - m)).min(5);
    let r = rng.gen_range(1..=max_r);
    let whole = Subgroup::whole(n).unwrap();
    let u = random_subgroup(rng, &whole, m);
    let ds = distinct_coset_reps(rng, &u, r);
    let members = u.elements();
    let size = rng.gen_range(1..=members.len());
    let pool: Vec<Block> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut pick = members.clone();
            pick.shuffle(rng);
            pick.truncate(size);
            Block::new(pick).unwrap()
        })
        .collect();
    let as_ = (0..r)
        .map(|_| {
            let b = pool.choose(rng).unwrap().clone();
            if rng.gen_bool(0.2) {
                b.translate(*members.choose(rng).unwrap())
            } else {
                b
            }
        })
        .collect();
    (ds, as_)
}
