mod common;

use common::{w, EX6_NAMES};
use logsig::algebra::{coset_rep, frobenius_order, modulus, FieldElem, GVec, Subgroup, Transversal};
use proptest::prelude::*;

fn all_elems(n: usize) -> Vec<GVec> {
    (0..1u64 << n).map(|b| GVec::new(b, n).unwrap()).collect()
}

#[test]
fn group_axioms_exhaustive() {
    for n in 1..=4 {
        let g = all_elems(n);
        let zero = GVec::zero(n).unwrap();
        for &a in &g {
            assert_eq!(a + zero, a);
            assert_eq!(a + a, zero);
            for &b in &g {
                assert_eq!(a + b, b + a);
                for &c in &g {
                    assert_eq!((a + b) + c, a + (b + c));
                }
            }
        }
    }
}

#[test]
fn gvec_examples() {
    assert_eq!(w("u", EX6_NAMES) + w("uv", EX6_NAMES), w("v", EX6_NAMES));
    assert!(GVec::new(0, 4).unwrap().checked_add(GVec::new(0, 5).unwrap()).is_err());
    assert!(GVec::new(0x10, 4).is_err());
    assert_eq!(GVec::new(0x2a, 6).unwrap().to_hex(), "2a");
    assert_eq!(GVec::new(0x5, 9).unwrap().to_hex(), "005");
    assert!(GVec::from_hex("2A", 6).is_err());
    assert!(GVec::from_hex("02a", 6).is_err());
}

#[test]
fn span_examples() {
    let n = EX6_NAMES;
    let s = Subgroup::span(6, &[w("u", n), w("v", n), w("uv", n)]).unwrap();
    assert_eq!(s.rank(), 2);
    assert_eq!(Subgroup::span(6, &[]).unwrap().rank(), 0);
    let u = Subgroup::span(6, &[w("u", n), w("v", n), w("w", n), w("x", n)]).unwrap();
    assert_eq!(u.order(), 16);
}

#[test]
fn coset_rep_examples() {
    let n = EX6_NAMES;
    let u = Subgroup::span(6, &[w("u", n), w("v", n), w("w", n), w("x", n)]).unwrap();
    let reps = vec![w("1", n), w("y", n), w("z", n), w("yz", n)];
    assert_eq!(coset_rep(w("uw", n), &u, &reps).unwrap(), w("1", n));
    assert_eq!(coset_rep(w("zvx", n), &u, &reps).unwrap(), w("z", n));
    assert_eq!(coset_rep(w("uvy", n), &u, &reps).unwrap(), w("y", n));
    let bad = vec![w("1", n), w("u", n), w("z", n), w("yz", n)];
    assert!(coset_rep(w("u", n), &u, &bad).is_err());
    assert!(coset_rep(w("y", n), &u, &bad).is_err());
    assert!(Transversal::new(u, Subgroup::whole(6).unwrap(), bad).is_err());
}

#[test]
fn field_axioms_exhaustive() {
    for n in 2..=4 {
        let all: Vec<FieldElem> = FieldElem::all(n).unwrap().collect();
        let one = FieldElem::one(n).unwrap();
        let zero = FieldElem::zero(n).unwrap();
        for &a in &all {
            assert_eq!(a * one, a);
            assert_eq!(a + zero, a);
            if !a.is_zero() {
                assert_eq!(a * a.inverse().unwrap(), one);
                assert_eq!(a.pow((1 << n) - 1), one);
            }
            for &b in &all {
                assert_eq!(a * b, b * a);
                for &c in &all {
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }
}

#[test]
fn frobenius_is_automorphism_exhaustive() {
    for n in 2..=4 {
        let all: Vec<FieldElem> = FieldElem::all(n).unwrap().collect();
        for k in 1..n {
            for &a in &all {
                for &b in &all {
                    let f = |x: FieldElem| x.frobenius(k).unwrap();
                    assert_eq!(f(a + b), f(a) + f(b));
                    assert_eq!(f(a * b), f(a) * f(b));
                }
            }
        }
        assert!(all[1].frobenius(0).is_err());
        assert!(all[1].frobenius(n).is_err());
    }
}

#[test]
fn field_examples() {
    let x = FieldElem::new(0b10, 3).unwrap();
    assert_eq!(modulus(3).unwrap(), 0b1011);
    assert_eq!(x * FieldElem::new(0b100, 3).unwrap(), FieldElem::new(0b011, 3).unwrap());
    assert_eq!(x.frobenius(1).unwrap(), x * x);
    assert!(FieldElem::new(1, 3).unwrap().checked_mul(FieldElem::new(1, 4).unwrap()).is_err());
}

#[test]
fn theta_order() {
    for n in 2..=10 {
        for k in 1..n {
            let one = FieldElem::one(n).unwrap();
            let all: Vec<FieldElem> = FieldElem::all(n).unwrap().collect();
            let mut t = 1;
            loop {
                let fixes = all.iter().all(|&a| {
                    let mut b = a;
                    for _ in 0..t {
                        b = b.frobenius(k).unwrap();
                    }
                    b == a
                });
                if fixes {
                    break;
                }
                t += 1;
            }
            assert_eq!(t, frobenius_order(n, k), "n={n} k={k}");
            assert_eq!(one.frobenius(k).unwrap(), one);
        }
    }
}

fn arb_vecs(n: usize, count: usize) -> impl Strategy<Value = Vec<GVec>> {
    prop::collection::vec(0..1u64 << n, 0..=count)
        .prop_map(move |v| v.into_iter().map(|b| GVec::new(b, n).unwrap()).collect())
}

proptest! {
    #[test]
    fn span_is_closed_and_ranked((n, gens) in (1usize..=10).prop_flat_map(|n| (Just(n), arb_vecs(n, 6)))) {
        let s = Subgroup::span(n, &gens).unwrap();
        prop_assert!(gens.iter().all(|&g| s.contains(g)));
        let elems = s.elements();
        prop_assert_eq!(elems.len() as u128, s.order());
        for &a in elems.iter().take(16) {
            for &b in elems.iter().take(16) {
                prop_assert!(s.contains(a + b));
            }
        }
        prop_assert!(s.rank() <= gens.len());
    }

    #[test]
    fn canonical_transversal_has_distinct_cosets((n, gens) in (1usize..=9).prop_flat_map(|n| (Just(n), arb_vecs(n, 5)))) {
        let u = Subgroup::span(n, &gens).unwrap();
        let whole = Subgroup::whole(n).unwrap();
        let t = u.complement_in(&whole).unwrap();
        let reps = t.reps();
        prop_assert_eq!(reps.len() as u128 * u.order(), whole.order());
        for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[i + 1..] {
                prop_assert!(!u.contains(a + b));
            }
        }
        for g in whole.elements().into_iter().step_by(7) {
            let r = t.rep_of(g).unwrap();
            prop_assert!(u.contains(g + r));
        }
    }

    #[test]
    fn field_mul_matches_long_division(a in 0u64..1 << 12, b in 0u64..1 << 12) {
        let n = 12;
        let p = modulus(n).unwrap();
        let mut prod: u64 = 0;
        for i in 0..n {
            if (b >> i) & 1 == 1 {
                prod ^= a << i;
            }
        }
        for bit in (n..2 * n).rev() {
            if (prod >> bit) & 1 == 1 {
                prod ^= p << (bit - n);
            }
        }
        let got = FieldElem::new(a, n).unwrap() * FieldElem::new(b, n).unwrap();
        prop_assert_eq!(got.bits(), prod);
    }

    #[test]
    fn hex_roundtrip(n in 1usize..=64, raw in any::<u64>()) {
        let bits = if n == 64 { raw } else { raw & ((1 << n) - 1) };
        let g = GVec::new(bits, n).unwrap();
        prop_assert_eq!(GVec::from_hex(&g.to_hex(), n).unwrap(), g);
    }
}
