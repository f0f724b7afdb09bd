//! Periods of subsets of `2^n` and the criteria that predict when a block
//! assembled as `B = (d_1 + A_1) u ... u (d_r + A_r)` is periodic.
//!
//! A nonzero `g` is a period of `B` when `g + B = B`. Together with zero the
//! periods form a subgroup, the stabilizer of `B` under translation, and
//! translating `B` does not change them.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::GVec;
use crate::error::{Error, Result};
use crate::signature::{sorted_set, type_order, Block, LogSig, Target};

/// Largest ambient dimension the brute-force period scan accepts.
pub const BRUTE_FORCE_MAX_DIM: usize = 24;

/// The set `P(B)` of nonzero periods of a block, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodSet {
    periods: Vec<GVec>,
}

impl PeriodSet {
    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn contains(&self, g: GVec) -> bool {
        self.periods.binary_search(&g).is_ok()
    }

    pub fn periods(&self) -> &[GVec] {
        &self.periods
    }

    pub fn intersect(&self, other: &PeriodSet) -> PeriodSet {
        PeriodSet {
            periods: self
                .periods
                .iter()
                .copied()
                .filter(|&g| other.contains(g))
                .collect(),
        }
    }

    fn from_unsorted(mut periods: Vec<GVec>) -> Self {
        periods.sort();
        periods.dedup();
        PeriodSet { periods }
    }
}

fn is_period(g: GVec, set: &HashSet<u64>) -> bool {
    set.iter().all(|&b| set.contains(&(b ^ g.bits())))
}

/// `P(B)`, treating the elements of `block` as a set.
///
/// Any period maps the least element `b_0` onto some `b` in the set, so the
/// only candidates are `b_0 + b`.
pub fn period_set(block: &[GVec]) -> PeriodSet {
    let Some(&least) = block.iter().min() else {
        return PeriodSet::default();
    };
    let set: HashSet<u64> = block.iter().map(|g| g.bits()).collect();
    let periods = block
        .iter()
        .map(|&b| b + least)
        .filter(|g| !g.is_zero() && is_period(*g, &set))
        .collect();
    PeriodSet::from_unsorted(periods)
}

/// `P(B)` by testing every nonzero element of the ambient group.
pub fn period_set_brute_force(block: &[GVec]) -> Result<PeriodSet> {
    let Some(first) = block.first() else {
        return Ok(PeriodSet::default());
    };
    let dim = first.dim();
    if dim > BRUTE_FORCE_MAX_DIM {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << dim,
            budget: 1u128 << BRUTE_FORCE_MAX_DIM,
        });
    }
    let set: HashSet<u64> = block.iter().map(|g| g.bits()).collect();
    let periods = (1u64..(1u64 << dim))
        .map(|b| GVec::from_raw(b, dim))
        .filter(|&g| is_period(g, &set))
        .collect();
    Ok(PeriodSet::from_unsorted(periods))
}

/// True when no block of `sig` has a period.
pub fn is_aperiodic(sig: &LogSig) -> bool {
    sig.blocks().iter().all(|b| period_set(b.elems()).is_empty())
}

/// Indices of the periodic blocks of `sig`.
pub fn periodic_blocks(sig: &LogSig) -> Vec<usize> {
    sig.blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| !period_set(b.elems()).is_empty())
        .map(|(i, _)| i)
        .collect()
}

/// Every amalgamated-transversal signature has a periodic block, and a
/// periodic block is what the known attack on MST3 exploits. A signature
/// with a periodic block is therefore flagged as at risk.
pub fn at_risk(sig: &LogSig) -> bool {
    !is_aperiodic(sig)
}

/// Witness that `A` is a multiple of `B`: `witness + A = B` as sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Multiple {
    pub witness: GVec,
    /// `A` and `B` differ as sets.
    pub proper: bool,
}

/// Finds `g` with `g + A = B` (as sets), if any.
pub fn multiple_of(a: &[GVec], b: &[GVec]) -> Option<Multiple> {
    let sa = sorted_set(a);
    let sb = sorted_set(b);
    if sa.len() != sb.len() || sa.is_empty() {
        return None;
    }
    let set_b: HashSet<u64> = sb.iter().copied().collect();
    let a0 = sa[0];
    sb.iter().map(|&b0| a0 ^ b0).find_map(|g| {
        sa.iter().all(|&x| set_b.contains(&(x ^ g))).then(|| Multiple {
            witness: GVec::from_raw(g, a[0].dim()),
            proper: sa != sb,
        })
    })
}

/// One class `D^(j)`: the translation elements `d_k` whose sets `A_k` agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SameSetClass {
    /// Positions `k` in the input, ascending.
    pub members: Vec<usize>,
    /// The corresponding `d_k`.
    pub elements: Vec<GVec>,
}

/// Partitions `ds` by set-equality of the matching `As`, classes ordered by
/// first member.
pub fn same_set_classes(ds: &[GVec], as_: &[Block]) -> Result<Vec<SameSetClass>> {
    if ds.len() != as_.len() {
        return Err(Error::IndexOutOfBounds(format!(
            "{} translation elements for {} sets",
            ds.len(),
            as_.len()
        )));
    }
    let keys: Vec<Vec<u64>> = as_.iter().map(Block::sorted_set).collect();
    let mut classes: Vec<(usize, SameSetClass)> = Vec::new();
    for (k, key) in keys.iter().enumerate() {
        match classes.iter_mut().find(|(rep, _)| &keys[*rep] == key) {
            Some((_, class)) => {
                class.members.push(k);
                class.elements.push(ds[k]);
            }
            None => classes.push((
                k,
                SameSetClass {
                    members: vec![k],
                    elements: vec![ds[k]],
                },
            )),
        }
    }
    Ok(classes.into_iter().map(|(_, c)| c).collect())
}

/// `(d_1 + A_1) u ... u (d_r + A_r)`, in that order.
pub fn assemble_block(ds: &[GVec], as_: &[Block]) -> Vec<GVec> {
    ds.iter()
        .zip(as_)
        .flat_map(|(&d, a)| a.iter().map(move |&x| d + x))
        .collect()
}

/// Which hypothesis the periodicity criterion is evaluated under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionMode {
    /// Every `A_j` is a subgroup; all `2^r` choices of `A_j` / `D^(j)` are tried.
    Subgroup,
    /// No `A_j` is a proper multiple of another; all `2^r` choices are tried.
    NoProperMultiple,
    /// No `A_j` is a multiple of another `A_k`; only `P(A_1) n ... n P(A_r)`.
    NoMultiple,
}

impl CriterionMode {
    pub fn name(self) -> &'static str {
        match self {
            CriterionMode::Subgroup => "subgroup",
            CriterionMode::NoProperMultiple => "no-proper-multiple",
            CriterionMode::NoMultiple => "no-multiple",
        }
    }
}

/// Which set was picked for position `j` in a witnessing tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Choice {
    A,
    D,
}

/// Outcome of [`check_periodicity_criterion`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub mode: CriterionMode,
    pub hypothesis_holds: bool,
    pub hypothesis_failure: Option<String>,
    /// The criterion's verdict, `None` when the hypothesis fails.
    pub predicted_periodic: Option<bool>,
    /// First tuple with a nonempty intersection of period sets.
    pub witness_tuple: Option<Vec<Choice>>,
    pub witness_periods: Vec<GVec>,
    /// `P(B)` of the assembled block, computed directly.
    pub direct_periods: PeriodSet,
}

impl CriterionReport {
    /// `Some(true)` when prediction and direct computation match.
    pub fn agrees(&self) -> Option<bool> {
        self.predicted_periodic
            .map(|p| p == !self.direct_periods.is_empty())
    }

    /// `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out += &format!("mode={}\n", self.mode.name());
        out += &format!("hypothesis_holds={}\n", self.hypothesis_holds);
        if let Some(f) = &self.hypothesis_failure {
            out += &format!("hypothesis_failure={f}\n");
        }
        match self.predicted_periodic {
            Some(p) => out += &format!("predicted_periodic={p}\n"),
            None => out += "predicted_periodic=none\n",
        }
        if let Some(t) = &self.witness_tuple {
            let t: Vec<&str> = t
                .iter()
                .map(|c| match c {
                    Choice::A => "A",
                    Choice::D => "D",
                })
                .collect();
            out += &format!("witness_tuple={}\n", t.join(","));
        }
        out += &format!("witness_periods={}\n", hex_list(&self.witness_periods));
        out += &format!(
            "direct_periods={}\n",
            hex_list(self.direct_periods.periods())
        );
        out
    }
}

fn hex_list(v: &[GVec]) -> String {
    v.iter().map(|g| g.to_hex()).collect::<Vec<_>>().join(",")
}

fn is_subgroup(block: &Block) -> bool {
    let set: HashSet<u64> = block.iter().map(|g| g.bits()).collect();
    set.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&(a ^ b))))
}

fn check_hypothesis(as_: &[Block], mode: CriterionMode) -> Option<String> {
    match mode {
        CriterionMode::Subgroup => as_
            .iter()
            .position(|a| !is_subgroup(a))
            .map(|j| format!("A_{} is not a subgroup", j + 1)),
        CriterionMode::NoProperMultiple | CriterionMode::NoMultiple => {
            let proper_only = mode == CriterionMode::NoProperMultiple;
            for (j, a) in as_.iter().enumerate() {
                for (k, b) in as_.iter().enumerate() {
                    if j == k {
                        continue;
                    }
                    if let Some(m) = multiple_of(a.elems(), b.elems()) {
                        if m.proper || !proper_only {
                            return Some(format!(
                                "A_{} is a {}multiple of A_{} (witness {})",
                                j + 1,
                                if m.proper { "proper " } else { "" },
                                k + 1,
                                m.witness
                            ));
                        }
                    }
                }
            }
            None
        }
    }
}

/// Largest block count for which all `2^r` tuples are enumerated.
pub const MAX_TUPLE_BITS: usize = 20;

/// Evaluates the periodicity criterion for the block assembled from `ds` and
/// `as_` under `mode`.
///
/// The hypothesis is checked first. When it fails the report carries no
/// prediction, only the directly computed period set.
pub fn check_periodicity_criterion(
    ds: &[GVec],
    as_: &[Block],
    mode: CriterionMode,
) -> Result<CriterionReport> {
    let classes = same_set_classes(ds, as_)?;
    let direct_periods = period_set(&assemble_block(ds, as_));
    let r = as_.len();
    let mut report = CriterionReport {
        mode,
        hypothesis_holds: true,
        hypothesis_failure: None,
        predicted_periodic: None,
        witness_tuple: None,
        witness_periods: Vec::new(),
        direct_periods,
    };
    if let Some(failure) = check_hypothesis(as_, mode) {
        report.hypothesis_holds = false;
        report.hypothesis_failure = Some(failure);
        return Ok(report);
    }

    let pa: Vec<PeriodSet> = as_.iter().map(|a| period_set(a.elems())).collect();
    if mode == CriterionMode::NoMultiple {
        let meet = pa[1..].iter().fold(pa[0].clone(), |acc, p| acc.intersect(p));
        report.predicted_periodic = Some(!meet.is_empty());
        if !meet.is_empty() {
            report.witness_tuple = Some(vec![Choice::A; r]);
            report.witness_periods = meet.periods;
        }
        return Ok(report);
    }

    if r > MAX_TUPLE_BITS {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << r,
            budget: 1u128 << MAX_TUPLE_BITS,
        });
    }
    let mut class_of = vec![0usize; r];
    for (c, class) in classes.iter().enumerate() {
        for &k in &class.members {
            class_of[k] = c;
        }
    }
    let pd: Vec<PeriodSet> = classes.iter().map(|c| period_set(&c.elements)).collect();
    for mask in 0u64..(1u64 << r) {
        let choose = |j: usize| {
            if (mask >> j) & 1 == 1 {
                &pd[class_of[j]]
            } else {
                &pa[j]
            }
        };
        let meet = (1..r).fold(choose(0).clone(), |acc, j| acc.intersect(choose(j)));
        if !meet.is_empty() {
            report.predicted_periodic = Some(true);
            report.witness_tuple = Some(
                (0..r)
                    .map(|j| if (mask >> j) & 1 == 1 { Choice::D } else { Choice::A })
                    .collect(),
            );
            report.witness_periods = meet.periods;
            return Ok(report);
        }
    }
    report.predicted_periodic = Some(false);
    Ok(report)
}

/// Result of [`exhaustive_aperiodic_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub n: usize,
    pub type_vec: Vec<usize>,
    pub witness: Option<LogSig>,
    /// First blocks surviving normalization and the aperiodicity filter.
    pub first_blocks: u64,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

/// How the candidate space is cut down before searching.
pub const SEARCH_NORMALIZATION: &str = "every block contains 0; block elements ascending; \
first block lexicographically least among its translates that contain 0";

impl SearchOutcome {
    pub fn to_text(&self) -> String {
        let types: Vec<String> = self.type_vec.iter().map(|r| r.to_string()).collect();
        let mut out = format!("n={}\ntype={}\n", self.n, types.join(","));
        out += &format!("normalization={SEARCH_NORMALIZATION}\n");
        out += &format!("first_blocks={}\nnodes={}\n", self.first_blocks, self.nodes);
        match &self.witness {
            None => out += "result=none\n",
            Some(sig) => {
                out += "result=found\n";
                for (i, b) in sig.blocks().iter().enumerate() {
                    let elems: Vec<String> = b.iter().map(|g| g.to_hex()).collect();
                    out += &format!("block{}={}\n", i + 1, elems.join(","));
                }
            }
        }
        out
    }
}

/// Default node budget for [`exhaustive_aperiodic_search`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

/// Looks for an aperiodic logarithmic signature of `2^n` with the given type.
///
/// Translating a block changes neither validity nor periods, so every block
/// is taken to contain 0, and the first block is taken least among the
/// translates of itself that contain 0. Within each block elements are
/// chosen in increasing order. First-block candidates are split across
/// threads; the reported witness is the first in candidate order.
pub fn exhaustive_aperiodic_search(
    n: usize,
    type_vec: &[usize],
    budget: u64,
) -> Result<SearchOutcome> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidParams(format!(
            "search supports 1 <= n <= 20, got {n}"
        )));
    }
    if type_vec.is_empty() || type_vec.contains(&0) {
        return Err(Error::InvalidParams("type must be nonempty with positive entries".into()));
    }
    if type_order(type_vec) != Some(1u128 << n) {
        return Err(Error::InvalidParams(format!(
            "type {type_vec:?} does not multiply to 2^{n}"
        )));
    }
    let size = 1u64 << n;
    let r1 = type_vec[0];

    let mut first_blocks = Vec::new();
    let mut combo: Vec<u64> = vec![0];
    enumerate_first_blocks(size, r1, &mut combo, 1, &mut first_blocks, budget)?;
    let survivors: Vec<Vec<u64>> = first_blocks
        .into_iter()
        .filter(|b| is_translate_minimal(b) && raw_aperiodic(b))
        .collect();

    let nodes = AtomicU64::new(survivors.len() as u64);
    let over_budget = std::sync::atomic::AtomicBool::new(false);
    let found = survivors.par_iter().find_map_first(|b1| {
        if over_budget.load(Ordering::Relaxed) {
            return None;
        }
        let mut blocks = vec![b1.clone()];
        let mut search = Dfs {
            size,
            type_vec,
            nodes: &nodes,
            budget,
            over_budget: &over_budget,
        };
        search.extend(b1, 1, &mut blocks).then_some(blocks)
    });
    if over_budget.load(Ordering::Relaxed) && found.is_none() {
        return Err(Error::BudgetExceeded {
            needed: nodes.load(Ordering::Relaxed) as u128,
            budget: budget as u128,
        });
    }
    let witness = found
        .map(|blocks| {
            let blocks = blocks
                .into_iter()
                .map(|b| Block::new(b.into_iter().map(|x| GVec::from_raw(x, n)).collect()))
                .collect::<Result<Vec<_>>>()?;
            LogSig::new(blocks, Target::Group)
        })
        .transpose()?;
    Ok(SearchOutcome {
        n,
        type_vec: type_vec.to_vec(),
        witness,
        first_blocks: survivors.len() as u64,
        nodes: nodes.load(Ordering::Relaxed),
    })
}

fn enumerate_first_blocks(
    size: u64,
    r: usize,
    combo: &mut Vec<u64>,
    start: u64,
    out: &mut Vec<Vec<u64>>,
    budget: u64,
) -> Result<()> {
    if combo.len() == r {
        if out.len() as u64 >= budget {
            return Err(Error::BudgetExceeded {
                needed: out.len() as u128 + 1,
                budget: budget as u128,
            });
        }
        out.push(combo.clone());
        return Ok(());
    }
    for x in start..size {
        if size - x < (r - combo.len()) as u64 {
            break;
        }
        combo.push(x);
        enumerate_first_blocks(size, r, combo, x + 1, out, budget)?;
        combo.pop();
    }
    Ok(())
}

fn raw_aperiodic(block: &[u64]) -> bool {
    let set: HashSet<u64> = block.iter().copied().collect();
    let least = *block.iter().min().expect("nonempty");
    block
        .iter()
        .map(|&b| b ^ least)
        .filter(|&g| g != 0)
        .all(|g| !set.iter().all(|&x| set.contains(&(x ^ g))))
}

/// `block` (sorted, containing 0) is lexicographically least among the
/// translates `block + b` for `b` in `block`.
fn is_translate_minimal(block: &[u64]) -> bool {
    let key = |v: &[u64]| -> Vec<u64> {
        let mut k: Vec<u64> = v.to_vec();
        k.sort_unstable();
        k
    };
    let base = key(block);
    block.iter().all(|&b| {
        let t: Vec<u64> = block.iter().map(|&x| x ^ b).collect();
        key(&t) >= base
    })
}

fn set_bit(bits: &mut [u64], i: u64) {
    bits[(i / 64) as usize] |= 1 << (i % 64);
}

fn get_bit(bits: &[u64], i: u64) -> bool {
    (bits[(i / 64) as usize] >> (i % 64)) & 1 == 1
}

struct Dfs<'a> {
    size: u64,
    type_vec: &'a [usize],
    nodes: &'a AtomicU64,
    budget: u64,
    over_budget: &'a std::sync::atomic::AtomicBool,
}

impl Dfs<'_> {
    /// Chooses block `i` given the sumset of the blocks before it.
    fn extend(&mut self, sumset: &[u64], i: usize, blocks: &mut Vec<Vec<u64>>) -> bool {
        if i == self.type_vec.len() {
            return true;
        }
        let mut covered = vec![0u64; (self.size as usize).div_ceil(64)];
        for &s in sumset {
            set_bit(&mut covered, s);
        }
        let mut chosen = vec![0u64];
        self.grow(sumset, i, &mut chosen, &mut covered, 1, blocks)
    }

    fn grow(
        &mut self,
        sumset: &[u64],
        i: usize,
        chosen: &mut Vec<u64>,
        covered: &mut Vec<u64>,
        start: u64,
        blocks: &mut Vec<Vec<u64>>,
    ) -> bool {
        if self.over_budget.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.over_budget.store(true, Ordering::Relaxed);
            return false;
        }
        let r = self.type_vec[i];
        if chosen.len() == r {
            if !raw_aperiodic(chosen) {
                return false;
            }
            let next: Vec<u64> = chosen
                .iter()
                .flat_map(|&b| sumset.iter().map(move |&s| s ^ b))
                .collect();
            blocks.push(chosen.clone());
            if self.extend(&next, i + 1, blocks) {
                return true;
            }
            blocks.pop();
            return false;
        }
        for x in start..self.size {
            if self.size - x < (r - chosen.len()) as u64 {
                break;
            }
            if sumset.iter().any(|&s| get_bit(covered, s ^ x)) {
                continue;
            }
            for &s in sumset {
                set_bit(covered, s ^ x);
            }
            chosen.push(x);
            let done = self.grow(sumset, i, chosen, covered, x + 1, blocks);
            chosen.pop();
            for &s in sumset {
                covered[((s ^ x) / 64) as usize] &= !(1 << ((s ^ x) % 64));
            }
            if done {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAMES: &str = "uvwxyz";

    fn w(s: &str) -> GVec {
        GVec::from_word(s, NAMES).unwrap()
    }

    fn block(words: &[&str]) -> Block {
        Block::from_words(words, NAMES).unwrap()
    }

    #[test]
    fn subgroup_is_its_own_stabilizer() {
        let u = crate::algebra::Subgroup::span(6, &[w("u"), w("v"), w("w")]).unwrap();
        let elems = u.elements();
        let p = period_set(&elems);
        assert_eq!(p.len(), 7);
        assert!(elems.iter().filter(|g| !g.is_zero()).all(|&g| p.contains(g)));
    }

    #[test]
    fn periodic_counterexample_block() {
        let b1 = block(&["1", "u", "v", "uvw", "uy", "y", "uvy", "vwy"]);
        assert!(period_set(b1.elems()).contains(w("uy")));
        assert!(period_set(block(&["1", "u", "v", "uvw"]).elems()).is_empty());
    }

    #[test]
    fn fast_path_matches_scan_on_small_sets() {
        let b = block(&["1", "uv", "wx", "uvwx", "y"]);
        assert_eq!(period_set(b.elems()), period_set_brute_force(b.elems()).unwrap());
    }

    #[test]
    fn multiples() {
        let a = block(&["1", "u", "v", "uvw"]);
        assert_eq!(
            multiple_of(a.elems(), a.elems()),
            Some(Multiple { witness: w("1"), proper: false })
        );
        let a2 = block(&["u", "1", "uv", "vw"]);
        let m = multiple_of(a2.elems(), a.elems()).unwrap();
        assert_eq!(m.witness, w("u"));
        assert!(m.proper);
        let names = "uv";
        let p = Block::from_words(&["1", "u"], names).unwrap();
        let q = Block::from_words(&["1", "v"], names).unwrap();
        assert_eq!(multiple_of(p.elems(), q.elems()), None);
        assert_eq!(multiple_of(p.elems(), a.elems()), None);
    }

    #[test]
    fn classes() {
        let ds = vec![w("1"), w("z")];
        let a = block(&["1", "w", "x", "wx"]);
        let c = same_set_classes(&ds, &[a.clone(), a.clone()]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].elements, vec![w("1"), w("z")]);

        let c = same_set_classes(&ds, &[block(&["1", "u", "v", "uv"]), a.clone()]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].elements, vec![w("1")]);
        assert_eq!(c[1].elements, vec![w("z")]);

        // set equality ignores order
        let c = same_set_classes(&ds, &[a.clone(), block(&["wx", "x", "w", "1"])]).unwrap();
        assert_eq!(c.len(), 1);
        assert!(same_set_classes(&ds, &[a]).is_err());
    }

    #[test]
    fn criterion_on_distinct_subgroups() {
        let ds = vec![w("1"), w("z")];
        let as_ = [block(&["1", "u", "v", "uv"]), block(&["1", "w", "x", "wx"])];
        for mode in [CriterionMode::Subgroup, CriterionMode::NoMultiple] {
            let r = check_periodicity_criterion(&ds, &as_, mode).unwrap();
            assert_eq!(r.predicted_periodic, Some(false), "{mode:?}");
            assert_eq!(r.agrees(), Some(true));
        }
    }

    #[test]
    fn criterion_hypothesis_failure() {
        let ds = vec![w("1"), w("y")];
        let as_ = [block(&["1", "u", "v", "uvw"]), block(&["u", "1", "uv", "vw"])];
        let r = check_periodicity_criterion(&ds, &as_, CriterionMode::NoProperMultiple).unwrap();
        assert!(!r.hypothesis_holds);
        assert_eq!(r.predicted_periodic, None);
        assert!(r.direct_periods.contains(w("uy")));
        let r = check_periodicity_criterion(&ds, &as_, CriterionMode::Subgroup).unwrap();
        assert!(!r.hypothesis_holds);
    }

    #[test]
    fn single_subgroup_is_periodic() {
        let u = block(&["1", "u", "v", "uv"]);
        let r = check_periodicity_criterion(&[w("1")], &[u], CriterionMode::Subgroup).unwrap();
        assert_eq!(r.predicted_periodic, Some(true));
        assert_eq!(r.witness_periods.len(), 3);
        assert!(r.to_text().contains("predicted_periodic=true"));
    }

    #[test]
    fn search_small_nonexistence() {
        for (n, ty) in [(2, vec![4]), (3, vec![4, 2]), (3, vec![2, 2, 2])] {
            let out = exhaustive_aperiodic_search(n, &ty, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(out.witness.is_none(), "{n} {ty:?}");
        }
    }

    #[test]
    fn search_rejects_bad_type() {
        assert!(exhaustive_aperiodic_search(3, &[4, 4], 1000).is_err());
        assert!(exhaustive_aperiodic_search(3, &[], 1000).is_err());
    }

    #[test]
    fn search_budget() {
        assert!(matches!(
            exhaustive_aperiodic_search(4, &[4, 4], 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
