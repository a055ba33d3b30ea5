//! Randomized checks of the structural laws over small parameters.

use std::collections::BTreeSet;

use proptest::prelude::*;

use serre_weights::global_weights::{
    check_det_compatibility, global_weight_set, twist_global, twist_weight_set, GlobalDatum,
    LocalDatum,
};
use serre_weights::local_factors::{
    classify_pi_d, FactorDescriptor, FactorShape, LocalFactorInput,
};
use serre_weights::modarith::{
    frobenius_shift, signed_digit_solve, signed_digit_value, signed_window, FieldParams, Residue,
    SubsetB,
};
use serre_weights::q_table::{crosscheck_nonsplit, weights_q, QClass, QShape};
use serre_weights::recipe_irred::{
    count_closed_form_irred, enumerate_wprime_irred, injectivity_fails_irred, wp_irred,
    NiveauTwoDatum,
};
use serre_weights::recipe_red::{
    count_closed_form_red, enumerate_wprime_red, injectivity_fails_red, is_generic, wp_red_partial,
    wp_red_split, ExtClass, ReducibleDatum,
};
use serre_weights::weights::{
    canonical_weight, det_exponent, twist_weight, SerreWeight, TwistExponent,
};

const SMALL: &[(u64, u32)] = &[
    (2, 1),
    (2, 2),
    (2, 3),
    (2, 4),
    (3, 1),
    (3, 2),
    (3, 3),
    (5, 1),
    (5, 2),
    (7, 1),
    (7, 2),
    (11, 1),
    (13, 1),
];

fn params() -> impl Strategy<Value = FieldParams> {
    prop::sample::select(SMALL).prop_map(|(l, f)| FieldParams::new(l, f).unwrap())
}

fn digits(p: FieldParams) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=p.ell() as u32, p.f() as usize)
}

fn subset(p: FieldParams) -> impl Strategy<Value = SubsetB> {
    (0..1u32 << p.f()).prop_map(move |m| SubsetB::from_mask(m, p.f()).unwrap())
}

fn weight() -> impl Strategy<Value = SerreWeight> {
    params().prop_flat_map(|p| {
        (any::<i64>(), digits(p))
            .prop_map(move |(a, b)| canonical_weight(a as i128, &b, &p).unwrap())
    })
}

fn irred_datum() -> impl Strategy<Value = NiveauTwoDatum> {
    params().prop_flat_map(|p| {
        (0..p.m_big())
            .prop_filter("niveau 2", move |n| n % p.m_plus() != 0)
            .prop_map(move |n| NiveauTwoDatum::new(p, n as i128).unwrap())
    })
}

fn red_datum(ext: ExtClass) -> impl Strategy<Value = ReducibleDatum> {
    params().prop_flat_map(move |p| {
        (0..p.m_minus(), 0..p.m_minus())
            .prop_map(move |(a, b)| ReducibleDatum::new(p, a as i128, b as i128, ext))
    })
}

fn rotate_digits(b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(b.len());
    out.push(b[b.len() - 1]);
    out.extend_from_slice(&b[..b.len() - 1]);
    out
}

/// Shift of a niveau-2 label: indices move up by one, and index `f - 1`
/// wraps into `0` with its membership flipped.
fn shift_label_irred(set: SubsetB, f: u32) -> SubsetB {
    let full = SubsetB::full(f).mask();
    let wrapped = (!set.contains(f - 1)) as u32;
    SubsetB::from_mask(((set.mask() << 1) & full) | wrapped, f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn window_roundtrip((p, b, set) in params().prop_flat_map(|p| (Just(p), digits(p), subset(p)))) {
        let v = signed_digit_value(&b, set, &p);
        let (lo, hi) = signed_window(set, &p);
        prop_assert!(lo <= v && v <= hi);
        prop_assert_eq!(hi - lo + 1, p.q() as i64);
        prop_assert_eq!(signed_digit_solve(v, set, &p).unwrap(), b);
    }

    #[test]
    fn frobenius_orders((p, x) in params().prop_flat_map(|p| (Just(p), any::<u64>()))) {
        let big = Residue::new(x, p.m_big());
        prop_assert_eq!(frobenius_shift(big, 2 * p.f() as i64, &p), big);
        let minus = Residue::new(x, p.m_minus());
        prop_assert_eq!(frobenius_shift(minus, p.f() as i64, &p), minus);
        prop_assert_eq!(frobenius_shift(frobenius_shift(big, 3, &p), -3, &p), big);
    }

    #[test]
    fn twist_is_group_action(v in weight(), c in any::<i32>()) {
        let p = *v.params();
        let m = p.m_minus() as i128;
        let t = twist_weight(&v, TwistExponent::new(c as i128, &p)).unwrap();
        let back = twist_weight(&t, TwistExponent::new(m - c as i128, &p)).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(det_exponent(&t), det_exponent(&v) + p.residue_minus(2 * c as i128));
    }

    #[test]
    fn weight_json_roundtrip(v in weight()) {
        let s = serde_json::to_string(&v).unwrap();
        let back: SerreWeight = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn irred_laws(d in irred_datum()) {
        let p = *d.params();
        let labeled = enumerate_wprime_irred(&d);
        let wp = wp_irred(&d);
        prop_assert_eq!(labeled.len() as u64, count_closed_form_irred(&d));
        prop_assert_eq!(injectivity_fails_irred(&d).is_some(), wp.len() < labeled.len());
        prop_assert!(!wp.is_empty());
        let n = d.n().reduce_to(p.m_minus());
        for l in &labeled {
            prop_assert_eq!(det_exponent(&l.weight), n);
        }

        // Conjugation: same weights, complementary labels.
        let conj = NiveauTwoDatum::new(p, (d.n().value() as i128) * p.q() as i128).unwrap();
        let mapped: BTreeSet<_> = labeled
            .iter()
            .map(|l| (l.weight.clone(), l.set.complement(p.f())))
            .collect();
        let got: BTreeSet<_> = enumerate_wprime_irred(&conj)
            .into_iter()
            .map(|l| (l.weight, l.set))
            .collect();
        prop_assert_eq!(got, mapped);
        prop_assert_eq!(wp_irred(&conj), wp);

        // Frobenius: a -> ell a, digits rotated, labels shifted.
        let frob = NiveauTwoDatum::new(p, (d.n().value() as i128) * p.ell() as i128).unwrap();
        let mapped: BTreeSet<_> = labeled
            .iter()
            .map(|l| {
                let w = canonical_weight(
                    l.weight.a().value() as i128 * p.ell() as i128,
                    &rotate_digits(l.weight.b()),
                    &p,
                )
                .unwrap();
                (w, shift_label_irred(l.set, p.f()))
            })
            .collect();
        let got: BTreeSet<_> = enumerate_wprime_irred(&frob)
            .into_iter()
            .map(|l| (l.weight, l.set))
            .collect();
        prop_assert_eq!(got, mapped);
    }

    #[test]
    fn red_laws(d in red_datum(ExtClass::Split)) {
        let p = *d.params();
        let labeled = enumerate_wprime_red(&d);
        let wp = wp_red_split(&d).unwrap();
        prop_assert_eq!(labeled.len() as u64, count_closed_form_red(&d));
        prop_assert_eq!(injectivity_fails_red(&d).is_some(), wp.len() < labeled.len());
        for l in &labeled {
            prop_assert_eq!(det_exponent(&l.weight), d.n1() + d.n2());
        }
        let labels: BTreeSet<_> = labeled.iter().map(|l| l.set).collect();
        prop_assert_eq!(labels.len(), 1usize << p.f());
        if is_generic(&d) {
            prop_assert_eq!(wp.len(), 1usize << p.f());
        }

        let sw = d.swapped();
        let mapped: BTreeSet<_> = labeled
            .iter()
            .map(|l| (l.weight.clone(), l.set.complement(p.f())))
            .collect();
        let got: BTreeSet<_> = enumerate_wprime_red(&sw)
            .into_iter()
            .map(|l| (l.weight, l.set))
            .collect();
        prop_assert_eq!(got, mapped);
        prop_assert_eq!(wp_red_split(&sw).unwrap(), wp.clone());

        let frob = ReducibleDatum::new(
            p,
            d.n1().value() as i128 * p.ell() as i128,
            d.n2().value() as i128 * p.ell() as i128,
            ExtClass::Split,
        );
        let mapped: BTreeSet<_> = labeled
            .iter()
            .map(|l| {
                let w = canonical_weight(
                    l.weight.a().value() as i128 * p.ell() as i128,
                    &rotate_digits(l.weight.b()),
                    &p,
                )
                .unwrap();
                (w, l.set.rotate(p.f()))
            })
            .collect();
        let got: BTreeSet<_> = enumerate_wprime_red(&frob)
            .into_iter()
            .map(|l| (l.weight, l.set))
            .collect();
        prop_assert_eq!(got, mapped);
    }

    #[test]
    fn partial_sandwich(d in red_datum(ExtClass::NonSplitUnknown)) {
        let part = wp_red_partial(&d).unwrap();
        let split = wp_red_split(&d.with_ext(ExtClass::Split)).unwrap();
        prop_assert!(!part.certain.is_empty());
        prop_assert!(part.certain.is_subset(&split));
        prop_assert!(part.certain.is_disjoint(&part.possible));
        let union: BTreeSet<_> = part.certain.union(&part.possible).cloned().collect();
        prop_assert_eq!(union, split);
    }

    #[test]
    fn global_twist_and_product(
        (ell, slots, twists) in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|ell| {
            let slot = (1u32..=2, any::<u64>(), any::<u64>(), 0u8..3);
            (Just(ell), prop::collection::vec(slot, 1..=3), prop::collection::vec(any::<i16>(), 3))
        })
    ) {
        let primes: Vec<LocalDatum> = slots
            .iter()
            .map(|&(f, x, y, kind)| {
                let p = FieldParams::new(ell, f).unwrap();
                match kind {
                    0 => {
                        let mut n = x % p.m_big();
                        if n.is_multiple_of(p.m_plus()) {
                            n += 1;
                        }
                        LocalDatum::Irreducible(NiveauTwoDatum::new(p, n as i128).unwrap())
                    }
                    1 => LocalDatum::Reducible(ReducibleDatum::new(p, x as i128, y as i128, ExtClass::Split)),
                    _ => LocalDatum::Reducible(ReducibleDatum::new(p, x as i128, y as i128, ExtClass::NonSplitUnknown)),
                }
            })
            .collect();
        let d = GlobalDatum::new(ell, primes).unwrap();
        let c: Vec<i128> = twists[..slots.len()].iter().map(|&c| c as i128).collect();
        let set = global_weight_set(&d).unwrap();
        let lhs = global_weight_set(&twist_global(&d, &c).unwrap()).unwrap();
        let rhs = twist_weight_set(&set, &c).unwrap();
        prop_assert_eq!(lhs, rhs);

        let expected: u128 = d
            .primes()
            .iter()
            .map(|p| p.local_weights().unwrap().certain.len() as u128)
            .product();
        prop_assert_eq!(set.certain_len(), expected);
        prop_assert_eq!(set.certain().count() as u128, expected);
        prop_assert!(check_det_compatibility(&d).unwrap().passed());
    }

    #[test]
    fn classifier_invariants(
        ell in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        k in 0u64..40,
        r in 1u64..11,
        kind in 0u8..4,
        ext_nonzero in any::<bool>(),
    ) {
        let q = k * ell + 1 + r % (ell - 1).max(1);
        let shape = match kind {
            0 => FactorShape::Irreducible,
            1 => FactorShape::CycTwistExt { split: true },
            2 => FactorShape::CycTwistExt { split: false },
            _ => FactorShape::OtherReducible,
        };
        let input = LocalFactorInput { ell, q_mod_ell: q, shape, ext_nonzero, split_algebra: false };
        let c = classify_pi_d(&input).unwrap();
        prop_assert_eq!(&classify_pi_d(&input).unwrap(), &c);
        prop_assert_eq!(c.factor == FactorDescriptor::Zero, shape == FactorShape::OtherReducible);
        if matches!(c.factor, FactorDescriptor::DirectSumTwo { .. }) {
            prop_assert!(q % ell == 1 && ell > 2);
            prop_assert_eq!(shape, FactorShape::CycTwistExt { split: true });
        }
    }
}

#[test]
fn weight_count_by_enumeration() {
    for &(ell, f) in SMALL {
        let p = FieldParams::new(ell, f).unwrap();
        if p.q() > 64 {
            continue;
        }
        let mut all = BTreeSet::new();
        for a in 0..3 * p.m_minus() as i128 {
            for code in 0..p.q() {
                let b: Vec<u32> = (0..f).map(|i| (code / p.pow(i) % ell) as u32 + 1).collect();
                all.insert(canonical_weight(a, &b, &p).unwrap());
            }
        }
        assert_eq!(all.len() as u64, p.m_minus() * p.q(), "ell={ell} f={f}");
    }
}

#[test]
fn table_consistency_all_small_primes() {
    for ell in [2u64, 3, 5, 7, 11, 13] {
        for shape in QShape::all_legal(ell) {
            if let serre_weights::q_table::QVariant::Niveau1 { b, cls } = shape.variant {
                if cls != QClass::Split {
                    assert!(crosscheck_nonsplit(&shape).unwrap(), "{shape}");
                }
                if b == 1 && cls == QClass::NonSplitTres {
                    let tres = weights_q(&shape).unwrap();
                    let peu =
                        weights_q(&QShape::niveau1(ell, 1, QClass::NonSplitPeu).unwrap()).unwrap();
                    assert!(tres.is_subset(&peu), "ell={ell}");
                }
            }
        }
    }
}
