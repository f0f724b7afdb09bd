mod common;

use common::{distinct_coset_reps, random_subgroup, w, words, EX6_NAMES};
use logsig::algebra::{GVec, Subgroup};
use logsig::construct::{dr_construct, exact_transversal, Side, SubgroupChain, EX6_INPUTS, EX7_INPUTS};
use logsig::periodicity::{
    assemble_block, at_risk, check_periodicity_criterion, exhaustive_aperiodic_search,
    is_aperiodic, multiple_of, period_set, period_set_brute_force, periodic_blocks,
    same_set_classes, Choice, CriterionMode, DEFAULT_SEARCH_BUDGET,
};
use logsig::signature::{Block, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn blk(ws: &[&str]) -> Block {
    Block::from_words(ws, EX6_NAMES).unwrap()
}

#[test]
fn period_set_examples() {
    let u = Subgroup::span(6, &words(&["u", "v", "w"], EX6_NAMES)).unwrap();
    let p = period_set(&u.elements());
    assert_eq!(p.len(), 7);
    let b1 = blk(&["1", "u", "v", "uvw", "uy", "y", "uvy", "vwy"]);
    assert!(period_set(b1.elems()).contains(w("uy", EX6_NAMES)));
    assert!(period_set(blk(&["1", "u", "v", "uvw"]).elems()).is_empty());
}

#[test]
fn aperiodicity_examples() {
    let ex6 = dr_construct(&EX6_INPUTS.blueprint().unwrap(), DEFAULT_BUDGET).unwrap().sig;
    assert!(is_aperiodic(&ex6));
    assert!(!at_risk(&ex6));
    let ex7 = dr_construct(&EX7_INPUTS.blueprint().unwrap(), DEFAULT_BUDGET).unwrap().sig;
    assert!(is_aperiodic(&ex7));
    let et = exact_transversal(&SubgroupChain::standard(6, &[2, 2, 2]).unwrap(), Side::Left).unwrap();
    assert!(at_risk(&et));
    assert!(periodic_blocks(&et).contains(&2));
}

#[test]
fn multiple_examples() {
    let a = blk(&["1", "u", "v", "uvw"]);
    let m = multiple_of(a.elems(), a.elems()).unwrap();
    assert!(m.witness.is_zero() && !m.proper);
    let a2 = blk(&["u", "1", "uv", "vw"]);
    let m = multiple_of(a2.elems(), a.elems()).unwrap();
    assert_eq!(m.witness, w("u", EX6_NAMES));
    assert!(m.proper);
    let n = "uv";
    let one_u = Block::from_words(&["1", "u"], n).unwrap();
    let one_v = Block::from_words(&["1", "v"], n).unwrap();
    assert!(multiple_of(one_u.elems(), one_v.elems()).is_none());
    assert!(multiple_of(one_u.elems(), &[]).is_none());
}

#[test]
fn same_set_class_examples() {
    let n = EX6_NAMES;
    let wx = blk(&["1", "w", "x", "wx"]);
    let classes = same_set_classes(&words(&["1", "z"], n), &[wx.clone(), wx]).unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].elements, words(&["1", "z"], n));
    let classes = same_set_classes(
        &words(&["1", "z"], n),
        &[blk(&["1", "u", "v", "uv"]), blk(&["1", "w", "x", "wx"])],
    )
    .unwrap();
    assert_eq!(classes.len(), 2);
    assert!(same_set_classes(&words(&["1"], n), &[]).is_err());
}

#[test]
fn criterion_examples() {
    let n = EX6_NAMES;
    let ds = words(&["1", "z"], n);
    let as_ = [blk(&["1", "u", "v", "uv"]), blk(&["1", "w", "x", "wx"])];
    let r = check_periodicity_criterion(&ds, &as_, CriterionMode::Subgroup).unwrap();
    assert_eq!(r.predicted_periodic, Some(false));
    assert_eq!(r.agrees(), Some(true));

    let ds = words(&["1", "y"], n);
    let as_ = [blk(&["1", "u", "v", "uvw"]), blk(&["u", "1", "uv", "vw"])];
    let r = check_periodicity_criterion(&ds, &as_, CriterionMode::NoProperMultiple).unwrap();
    assert!(!r.hypothesis_holds);
    assert!(r.predicted_periodic.is_none());
    assert!(r.direct_periods.contains(w("uy", n)));
    assert!(r.to_text().contains("hypothesis_holds=false"));

    let u = Subgroup::span(6, &words(&["u", "v"], n)).unwrap();
    let r = check_periodicity_criterion(
        &words(&["1"], n),
        &[Block::new(u.elements()).unwrap()],
        CriterionMode::Subgroup,
    )
    .unwrap();
    assert_eq!(r.predicted_periodic, Some(true));
    assert_eq!(r.witness_tuple, Some(vec![Choice::A]));
    assert_eq!(r.witness_periods.len(), 3);
}

/// A period can mix an `A`-period with a `D`-period across two classes; the
/// tuple criterion then predicts aperiodic although the block is periodic.
#[test]
fn subgroup_criterion_misses_mixed_period() {
    let n = "uwyz";
    let a = Block::from_words(&["1", "u"], n).unwrap();
    let c = Block::from_words(&["1", "w"], n).unwrap();
    let ds = words(&["1", "y", "z", "yzuw"], n);
    let as_ = [a.clone(), a, c.clone(), c];
    let b = assemble_block(&ds, &as_);
    let p = period_set(&b);
    assert_eq!(p.periods(), &[w("uy", n)]);
    let r = check_periodicity_criterion(&ds, &as_, CriterionMode::Subgroup).unwrap();
    assert!(r.hypothesis_holds);
    assert_eq!(r.predicted_periodic, Some(false));
    assert_eq!(r.agrees(), Some(false));
}

#[test]
fn search_nonexistence() {
    for (n, t) in [(3, vec![4, 2]), (4, vec![8, 2]), (4, vec![4, 4]), (2, vec![4])] {
        let out = exhaustive_aperiodic_search(n, &t, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(out.witness.is_none(), "{t:?}");
        assert!(out.to_text().contains("result=none"));
    }
    assert!(exhaustive_aperiodic_search(4, &[4, 2], DEFAULT_SEARCH_BUDGET).is_err());
    assert!(exhaustive_aperiodic_search(4, &[4, 4], 10).is_err());
}

#[test]
fn stabilizer_is_subgroup_exhaustive() {
    for n in 1..=4usize {
        for mask in 1u64..(1u64 << (1 << n)) {
            let b: Vec<GVec> = (0..1u64 << n)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| GVec::new(i, n).unwrap())
                .collect();
            let p = period_set(&b);
            let mut closed: Vec<u64> = p.periods().iter().map(|g| g.bits()).collect();
            closed.push(0);
            for &x in &closed {
                for &y in &closed {
                    assert!(closed.contains(&(x ^ y)));
                }
            }
        }
    }
}

fn arb_block(max_n: usize) -> impl Strategy<Value = Vec<GVec>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0..1u64 << n, 1..=24)
            .prop_map(move |v| v.into_iter().map(|b| GVec::new(b, n).unwrap()).collect())
    })
}

/// Sets and translations satisfying the distinct-subgroup or no-multiple
/// hypotheses.
fn corollary_instance(seed: u64, subgroups: bool) -> (Vec<GVec>, Vec<Block>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=9);
        let m = rng.gen_range(1..n);
        let whole = Subgroup::whole(n).unwrap();
        let u = random_subgroup(&mut rng, &whole, m);
        let r = rng.gen_range(1..=(1usize << (n - m)).min(4));
        let ds = distinct_coset_reps(&mut rng, &u, r);
        let k = rng.gen_range(0..=m);
        let members = u.elements();
        let as_: Vec<Block> = (0..r)
            .map(|_| {
                if subgroups {
                    Block::new(random_subgroup(&mut rng, &u, k).elements()).unwrap()
                } else {
                    let mut b: Vec<GVec> = members.clone();
                    for i in (1..b.len()).rev() {
                        b.swap(i, rng.gen_range(0..=i));
                    }
                    b.truncate(1 << k);
                    Block::new(b).unwrap()
                }
            })
            .collect();
        let mode = if subgroups {
            CriterionMode::Subgroup
        } else {
            CriterionMode::NoMultiple
        };
        let distinct = (0..r).all(|j| (0..j).all(|l| !as_[j].set_eq(&as_[l])));
        let ok = check_periodicity_criterion(&ds, &as_, mode).unwrap();
        if ok.hypothesis_holds && distinct {
            return (ds, as_);
        }
    }
}

proptest! {
    #[test]
    fn fast_period_set_matches_brute_force(b in arb_block(8)) {
        prop_assert_eq!(period_set(&b), period_set_brute_force(&b).unwrap());
    }

    #[test]
    fn stabilizer_is_subgroup(b in arb_block(6)) {
        let p = period_set(&b);
        for &x in p.periods() {
            for &y in p.periods() {
                prop_assert!(x == y || p.contains(x + y));
            }
        }
    }

    #[test]
    fn translate_invariance(b in arb_block(8), g in any::<u64>()) {
        let n = b[0].dim();
        let g = GVec::new(g & ((1 << n) - 1), n).unwrap();
        let moved: Vec<GVec> = b.iter().map(|&x| x + g).collect();
        prop_assert_eq!(period_set(&moved), period_set(&b));
    }

    #[test]
    fn distinct_subgroups_corollary(seed in any::<u64>()) {
        let (ds, as_) = corollary_instance(seed, true);
        let r = check_periodicity_criterion(&ds, &as_, CriterionMode::Subgroup).unwrap();
        let meet = as_[1..]
            .iter()
            .fold(period_set(as_[0].elems()), |acc, a| acc.intersect(&period_set(a.elems())));
        prop_assert_eq!(!meet.is_empty(), !r.direct_periods.is_empty());
        prop_assert_eq!(r.agrees(), Some(true));
    }

    #[test]
    fn no_multiple_corollary(seed in any::<u64>()) {
        let (ds, as_) = corollary_instance(seed, false);
        let r = check_periodicity_criterion(&ds, &as_, CriterionMode::NoMultiple).unwrap();
        prop_assert_eq!(r.agrees(), Some(true));
    }

    #[test]
    fn period_maps_pieces_onto_pieces(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ds, as_) = common::subgroup_instance(&mut rng);
        let b = assemble_block(&ds, &as_);
        for &g in period_set(&b).periods() {
            for (j, a) in as_.iter().enumerate() {
                let image: Vec<GVec> = a.iter().map(|&x| g + ds[j] + x).collect();
                let hit = (0..as_.len()).any(|k| {
                    let piece: Vec<GVec> = as_[k].iter().map(|&x| ds[k] + x).collect();
                    Block::new(image.clone()).unwrap().set_eq(&Block::new(piece).unwrap())
                });
                prop_assert!(hit, "g={} piece {}", g, j);
            }
        }
    }
}
