//! Weights attached to an irreducible local representation
//! `Ind(xi)`, where `xi` restricted to inertia is `(omega')^n` for the
//! niveau-2 fundamental character `omega'`.
//!
//! A labeled weight is a triple `(a, b, B)` with
//!
//! ```text
//! n = (ell^f + 1) a + sum_{i in B} b_i ell^i + sum_{i not in B} b_i ell^(f+i)   mod ell^(2f) - 1
//! ```
//!
//! Reducing modulo `ell^f + 1` leaves the signed digit sum of `b`, which
//! ranges over a window of `ell^f` consecutive integers missing exactly the
//! class of `n'_B`. So each `B` contributes one triple, or none when
//! `n = n'_B mod ell^f + 1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{decode_signed_digits, reduce, FieldParams, Residue, SubsetB};
use crate::weights::{canonical_weight, SerreWeight, WeightSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NiveauTwoDatum {
    params: FieldParams,
    n: Residue,
}

impl NiveauTwoDatum {
    pub fn new(params: FieldParams, n: i128) -> Result<Self> {
        let n = reduce(n, params.m_big());
        if n.value().is_multiple_of(params.m_plus()) {
            return Err(Error::InvalidNiveauTwo {
                n: n.value(),
                m_plus: params.m_plus(),
            });
        }
        Ok(NiveauTwoDatum { params, n })
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn n(&self) -> Residue {
        self.n
    }
}

/// An element `(V, J_B)` of `W'(xi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledWeightN2 {
    pub weight: SerreWeight,
    pub set: SubsetB,
}

#[derive(Serialize, Deserialize)]
struct LabeledJson {
    weight: SerreWeight,
    #[serde(rename = "B")]
    set: Vec<u32>,
}

impl Serialize for LabeledWeightN2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = self.weight.params().f();
        LabeledJson {
            weight: self.weight.clone(),
            set: self.set.indices(f).collect(),
        }
        .serialize(s)
    }
}

impl fmt::Display for LabeledWeightN2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, B={})", self.weight, self.set)
    }
}

/// `n'_B = sum_{i in B} ell^(i+1) - sum_{i not in B} ell^i + 1`.
pub fn nb_prime(set: SubsetB, params: &FieldParams) -> i64 {
    let mut s = 1i64;
    for i in 0..params.f() {
        let p = params.pow(i) as i64;
        if set.contains(i) {
            s += p * params.ell() as i64;
        } else {
            s -= p;
        }
    }
    s
}

/// A triple in integer form: `bcode = sum (b_i - 1) ell^i` identifies `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RawTriple {
    pub a: u64,
    pub bcode: u64,
    pub set: SubsetB,
    pub b_value: u64,
}

pub(crate) fn bcode_of(b: &[u32], params: &FieldParams) -> (u64, u64) {
    let mut code = 0u64;
    let mut value = 0u64;
    for (i, &d) in b.iter().enumerate() {
        let p = params.pow(i as u32);
        code += (d as u64 - 1) * p;
        value += d as u64 * p;
    }
    (code, value)
}

pub(crate) fn digits_of_bcode(bcode: u64, params: &FieldParams) -> Vec<u32> {
    let mut c = bcode;
    (0..params.f())
        .map(|_| {
            let d = c % params.ell();
            c /= params.ell();
            d as u32 + 1
        })
        .collect()
}

/// Per-parameter tables reused across many values of `n`.
#[derive(Clone, Debug)]
pub struct IrredEnumerator {
    params: FieldParams,
    nbp: Vec<i64>,
}

impl IrredEnumerator {
    pub fn new(params: FieldParams) -> Self {
        let nbp = params.subsets().map(|s| nb_prime(s, &params)).collect();
        IrredEnumerator { params, nbp }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    /// Appends the triples for the canonical residue `n`, which must not be
    /// divisible by `ell^f + 1`.
    pub(crate) fn raw(&self, n: u64, out: &mut Vec<RawTriple>) {
        let p = &self.params;
        let m_plus = p.m_plus() as i64;
        let m_big = p.m_big() as i128;
        let q = p.q() as i64;
        let f = p.f() as usize;
        let mut b = [0u32; 32];
        for (mask, &nbp) in self.nbp.iter().enumerate() {
            let set = SubsetB::from_mask(mask as u32, p.f()).expect("mask below 2^f");
            let lo = nbp - q;
            let v = lo + (n as i64 - lo).rem_euclid(m_plus);
            if v >= nbp {
                continue;
            }
            let ok = decode_signed_digits(v, set, p, &mut b[..f]);
            debug_assert!(ok);
            let mut inside = 0i128;
            let mut outside = 0i128;
            for (i, &d) in b[..f].iter().enumerate() {
                let t = d as i128 * p.pow(i as u32) as i128;
                if set.contains(i as u32) {
                    inside += t;
                } else {
                    outside += t;
                }
            }
            let r = (n as i128 - inside - q as i128 * outside).rem_euclid(m_big);
            assert_eq!(
                r % m_plus as i128,
                0,
                "numerator not divisible by ell^f + 1"
            );
            let a = (r / m_plus as i128) as u64 % p.m_minus();
            let (bcode, b_value) = bcode_of(&b[..f], p);
            out.push(RawTriple {
                a,
                bcode,
                set,
                b_value,
            });
        }
    }
}

pub fn enumerate_wprime_irred(d: &NiveauTwoDatum) -> BTreeSet<LabeledWeightN2> {
    let e = IrredEnumerator::new(d.params);
    let mut raw = Vec::new();
    e.raw(d.n.value(), &mut raw);
    raw.into_iter()
        .map(|t| LabeledWeightN2 {
            weight: canonical_weight(t.a as i128, &digits_of_bcode(t.bcode, &d.params), &d.params)
                .expect("decoded digits lie in 1..=ell"),
            set: t.set,
        })
        .collect()
}

/// `W_p(rho)`: the weights of `W'(xi)` with labels forgotten.
pub fn wp_irred(d: &NiveauTwoDatum) -> WeightSet {
    let mut raw = Vec::new();
    IrredEnumerator::new(d.params).raw(d.n.value(), &mut raw);
    weights_of_raw(raw.iter(), &d.params)
}

/// Distinct weights among `raw`, built once each.
pub(crate) fn weights_of_raw<'a>(
    raw: impl Iterator<Item = &'a RawTriple>,
    params: &FieldParams,
) -> WeightSet {
    let mut keys: Vec<(u64, u64)> = raw.map(|t| (t.a, t.bcode)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(a, code)| {
            canonical_weight(a as i128, &digits_of_bcode(code, params), params)
                .expect("decoded digits lie in 1..=ell")
        })
        .collect()
}

/// The closed-form prediction of `|W'(xi)|`, precomputed per parameters.
#[derive(Clone, Debug)]
pub struct IrredClosedForm {
    params: FieldParams,
    exceptional: BTreeSet<u64>,
}

impl IrredClosedForm {
    pub fn new(params: FieldParams) -> Self {
        let mut exceptional = BTreeSet::new();
        let f = params.f();
        if params.ell() != 2 {
            let m = params.m_plus();
            let ell1 = params.ell() as i128 + 1;
            for s in params.subsets() {
                let alt: i128 = s
                    .indices(f)
                    .map(|i| {
                        let t = params.pow(i) as i128;
                        if i % 2 == 0 {
                            t
                        } else {
                            -t
                        }
                    })
                    .sum();
                if f.is_multiple_of(2) {
                    exceptional.insert(reduce(-1 + ell1 * alt, m).value());
                } else if !s.is_empty() && s != params.full_subset() {
                    exceptional.insert(reduce(ell1 * alt, m).value());
                }
            }
        }
        IrredClosedForm {
            params,
            exceptional,
        }
    }

    /// The residues modulo `ell^f + 1` for which one subset drops out
    /// (odd `ell` only).
    pub fn exceptional_classes(&self) -> &BTreeSet<u64> {
        &self.exceptional
    }

    pub fn count(&self, n: u64) -> u64 {
        let full = 1u64 << self.params.f();
        if self.params.ell() == 2 {
            if self.params.f().is_multiple_of(2) {
                full - 1
            } else if n.is_multiple_of(3) {
                full - 3
            } else {
                full
            }
        } else if self.exceptional.contains(&(n % self.params.m_plus())) {
            full - 1
        } else {
            full
        }
    }
}

pub fn count_closed_form_irred(d: &NiveauTwoDatum) -> u64 {
    IrredClosedForm::new(d.params).count(d.n.value())
}

/// A pair `(r, m)` with `ell^r n = m mod ell^f + 1` and `|m|` within the
/// bound of the injectivity criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityWitness {
    pub r: u32,
    pub m: i64,
}

/// `ell (ell^(f-2) - 1) / (ell - 1)`, or `-1` when `f = 1`.
pub fn injectivity_bound(params: &FieldParams) -> i64 {
    if params.f() < 2 {
        return -1;
    }
    let ell = params.ell() as i64;
    ell * (params.pow(params.f() - 2) as i64 - 1) / (ell - 1)
}

/// `Some(witness)` exactly when `W'(xi) -> W_p(rho)` fails to be injective.
pub fn injectivity_fails_irred(d: &NiveauTwoDatum) -> Option<InjectivityWitness> {
    let p = &d.params;
    let bound = injectivity_bound(p);
    let m_plus = p.m_plus();
    let mut x = d.n.value() % m_plus;
    for r in 0..2 * p.f() {
        let near = m_plus - x;
        if (x as i64) <= bound {
            return Some(InjectivityWitness { r, m: x as i64 });
        }
        if (near as i64) <= bound {
            return Some(InjectivityWitness {
                r,
                m: -(near as i64),
            });
        }
        x = ((x as u128 * p.ell() as u128) % m_plus as u128) as u64;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::det_exponent;

    fn p(ell: u64, f: u32) -> FieldParams {
        FieldParams::new(ell, f).unwrap()
    }

    fn datum(ell: u64, f: u32, n: i128) -> NiveauTwoDatum {
        NiveauTwoDatum::new(p(ell, f), n).unwrap()
    }

    fn all_b(params: &FieldParams) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..params.f() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (1..=params.ell() as u32).map(move |d| {
                        let mut x = v.clone();
                        x.push(d);
                        x
                    })
                })
                .collect();
        }
        out
    }

    /// Every `(a, b, B)` tested against the defining congruence.
    fn oracle(d: &NiveauTwoDatum) -> BTreeSet<(u64, Vec<u32>, SubsetB)> {
        let params = d.params();
        let mut out = BTreeSet::new();
        for set in params.subsets() {
            for b in all_b(params) {
                for a in 0..params.m_minus() {
                    let mut s = (params.q() as i128 + 1) * a as i128;
                    for (i, &bi) in b.iter().enumerate() {
                        let shift = if set.contains(i as u32) {
                            i as u32
                        } else {
                            params.f() + i as u32
                        };
                        s += bi as i128 * params.pow(shift) as i128;
                    }
                    if reduce(s, params.m_big()) == d.n() {
                        out.insert((a, b.clone(), set));
                    }
                }
            }
        }
        out
    }

    fn as_triples(set: &BTreeSet<LabeledWeightN2>) -> BTreeSet<(u64, Vec<u32>, SubsetB)> {
        set.iter()
            .map(|l| (l.weight.a().value(), l.weight.b().to_vec(), l.set))
            .collect()
    }

    fn s(indices: &[u32], f: u32) -> SubsetB {
        SubsetB::from_indices(indices.iter().copied(), f).unwrap()
    }

    fn w(a: i128, b: &[u32], params: &FieldParams) -> SerreWeight {
        canonical_weight(a, b, params).unwrap()
    }

    #[test]
    fn nb_prime_examples() {
        assert_eq!(nb_prime(s(&[0], 1), &p(3, 1)), 4);
        for ell in [2, 3, 5, 7] {
            assert_eq!(nb_prime(SubsetB::EMPTY, &p(ell, 1)), 0);
        }
        assert_eq!(nb_prime(s(&[0, 1], 2), &p(2, 2)), 7);
    }

    #[test]
    fn enumerate_examples() {
        let p31 = p(3, 1);
        let got = enumerate_wprime_irred(&datum(3, 1, 2));
        let expected: BTreeSet<_> = [
            LabeledWeightN2 {
                weight: w(0, &[2], &p31),
                set: s(&[0], 1),
            },
            LabeledWeightN2 {
                weight: w(1, &[2], &p31),
                set: SubsetB::EMPTY,
            },
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);

        let p21 = p(2, 1);
        let got = enumerate_wprime_irred(&datum(2, 1, 1));
        let expected: BTreeSet<_> = [
            LabeledWeightN2 {
                weight: w(0, &[1], &p21),
                set: s(&[0], 1),
            },
            LabeledWeightN2 {
                weight: w(0, &[2], &p21),
                set: SubsetB::EMPTY,
            },
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);

        assert_eq!(
            NiveauTwoDatum::new(p31, 4),
            Err(Error::InvalidNiveauTwo { n: 4, m_plus: 4 })
        );
        assert!(NiveauTwoDatum::new(p31, 0).is_err());
    }

    #[test]
    fn wp_examples() {
        let p31 = p(3, 1);
        let got = wp_irred(&datum(3, 1, 1));
        assert_eq!(
            got,
            [w(0, &[1], &p31), w(0, &[3], &p31)].into_iter().collect()
        );
        let got = wp_irred(&datum(3, 1, 2));
        assert_eq!(
            got,
            [w(0, &[2], &p31), w(1, &[2], &p31)].into_iter().collect()
        );
    }

    #[test]
    fn worked_example_f3_n1() {
        for ell in [3, 5, 7] {
            let d = datum(ell, 3, 1);
            let wp = enumerate_wprime_irred(&d);
            assert_eq!(wp.len(), 8, "ell = {ell}");
            assert_eq!(wp_irred(&d).len(), 6, "ell = {ell}");
            let params = p(ell, 3);
            let v = w(-(ell as i128 * ell as i128), &[1, ell as u32, 1], &params);
            for set in [s(&[0, 1], 3), s(&[0, 2], 3)] {
                assert!(wp.contains(&LabeledWeightN2 {
                    weight: v.clone(),
                    set
                }));
            }
        }
    }

    #[test]
    fn matches_brute_force_oracle() {
        for (ell, f) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (3, 1),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 1),
        ] {
            let params = p(ell, f);
            let cf = IrredClosedForm::new(params);
            for n in 0..params.m_big() {
                let Ok(d) = NiveauTwoDatum::new(params, n as i128) else {
                    continue;
                };
                let got = enumerate_wprime_irred(&d);
                assert_eq!(as_triples(&got), oracle(&d), "ell={ell} f={f} n={n}");
                assert_eq!(got.len() as u64, cf.count(n), "ell={ell} f={f} n={n}");
                for l in &got {
                    assert_eq!(det_exponent(&l.weight), d.n().reduce_to(params.m_minus()));
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let cf = IrredClosedForm::new(p(3, 2));
        assert_eq!(
            cf.exceptional_classes(),
            &[1, 3, 7, 9].into_iter().collect()
        );
        assert_eq!(count_closed_form_irred(&datum(3, 2, 2)), 4);
        assert_eq!(count_closed_form_irred(&datum(3, 2, 1)), 3);
        assert_eq!(count_closed_form_irred(&datum(2, 2, 1)), 3);
        assert_eq!(enumerate_wprime_irred(&datum(3, 2, 2)).len(), 4);
        assert_eq!(enumerate_wprime_irred(&datum(3, 2, 1)).len(), 3);
    }

    #[test]
    fn injectivity_examples() {
        for (ell, f) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 2), (7, 2)] {
            let params = p(ell, f);
            for n in 0..params.m_big() {
                if let Ok(d) = NiveauTwoDatum::new(params, n as i128) {
                    assert_eq!(injectivity_fails_irred(&d), None);
                }
            }
        }
        assert_eq!(
            injectivity_fails_irred(&datum(3, 3, 1)),
            Some(InjectivityWitness { r: 0, m: 1 })
        );
        assert_eq!(injectivity_fails_irred(&datum(3, 3, 5)), None);
        assert_eq!(injectivity_bound(&p(3, 3)), 3);
    }

    #[test]
    fn injectivity_agrees_with_enumeration_small() {
        for (ell, f) in [(2, 3), (2, 4), (3, 3), (5, 3)] {
            let params = p(ell, f);
            for n in 0..params.m_big() {
                let Ok(d) = NiveauTwoDatum::new(params, n as i128) else {
                    continue;
                };
                let fails = wp_irred(&d).len() < enumerate_wprime_irred(&d).len();
                assert_eq!(
                    injectivity_fails_irred(&d).is_some(),
                    fails,
                    "ell={ell} f={f} n={n}"
                );
            }
        }
    }

    #[test]
    fn labeled_json() {
        let l = LabeledWeightN2 {
            weight: w(0, &[2], &p(3, 1)),
            set: s(&[0], 1),
        };
        assert_eq!(
            serde_json::to_string(&l).unwrap(),
            r#"{"weight":{"ell":3,"f":1,"a":0,"b":[2]},"B":[0]}"#
        );
    }
}
