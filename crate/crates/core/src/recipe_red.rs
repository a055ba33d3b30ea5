//! Weights attached to a reducible local representation
//! `(chi_1, *; 0, chi_2)` with `chi_nu = omega^{n_nu}` on inertia.
//!
//! A labeled weight is a triple `(a, b, B)` with
//!
//! ```text
//! n_1 = a + sum_{i in B} b_i ell^i,   n_2 = a + sum_{i not in B} b_i ell^i   mod ell^f - 1.
//! ```
//!
//! Subtracting leaves the signed digit sum of `b` congruent to
//! `n = n_1 - n_2`. Its window has `ell^f = (ell^f - 1) + 1` entries, so the
//! class of `n_B` is hit twice and every other class once.
//!
//! In the non-split case a weight survives only if the extension class lies
//! in a subspace `L_alpha` of `H^1`; only its dimension is modelled here.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modarith::{
    decode_signed_digits, digits_base_ell, reduce, FieldParams, Residue, SubsetB,
};
use crate::recipe_irred::{
    bcode_of, digits_of_bcode, weights_of_raw, InjectivityWitness, RawTriple,
};
use crate::weights::{canonical_weight, SerreWeight, WeightSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtClass {
    Split,
    NonSplitUnknown,
}

impl ExtClass {
    pub fn name(&self) -> &'static str {
        match self {
            ExtClass::Split => "split",
            ExtClass::NonSplitUnknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReducibleDatum {
    params: FieldParams,
    n1: Residue,
    n2: Residue,
    ext: ExtClass,
}

impl ReducibleDatum {
    pub fn new(params: FieldParams, n1: i128, n2: i128, ext: ExtClass) -> Self {
        ReducibleDatum {
            params,
            n1: reduce(n1, params.m_minus()),
            n2: reduce(n2, params.m_minus()),
            ext,
        }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn n1(&self) -> Residue {
        self.n1
    }

    pub fn n2(&self) -> Residue {
        self.n2
    }

    pub fn ext(&self) -> ExtClass {
        self.ext
    }

    /// `n = n_1 - n_2`, the exponent of `chi_1 / chi_2`.
    pub fn n(&self) -> Residue {
        self.n1 - self.n2
    }

    pub fn with_ext(&self, ext: ExtClass) -> Self {
        ReducibleDatum { ext, ..*self }
    }

    pub fn swapped(&self) -> Self {
        ReducibleDatum {
            n1: self.n2,
            n2: self.n1,
            ..*self
        }
    }
}

/// An element `(V, J = B)` of `W'(chi_1, chi_2)`; `solution` is 0 or 1 and
/// separates the two triples a boundary subset can contribute.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledWeightN1 {
    pub weight: SerreWeight,
    pub set: SubsetB,
    pub solution: u8,
}

impl Serialize for LabeledWeightN1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            weight: &'a SerreWeight,
            #[serde(rename = "B")]
            set: Vec<u32>,
            solution: u8,
        }
        Json {
            weight: &self.weight,
            set: self.set.indices(self.weight.params().f()).collect(),
            solution: self.solution,
        }
        .serialize(s)
    }
}

impl fmt::Display for LabeledWeightN1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, B={}, #{})", self.weight, self.set, self.solution)
    }
}

/// `n_B = sum_{i in B} ell^(i+1) - sum_{i not in B} ell^i`.
pub fn nb(set: SubsetB, params: &FieldParams) -> i64 {
    let mut s = 0i64;
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

#[derive(Clone, Debug)]
pub struct RedEnumerator {
    params: FieldParams,
    nb: Vec<i64>,
}

impl RedEnumerator {
    pub fn new(params: FieldParams) -> Self {
        let nb = params.subsets().map(|s| nb(s, &params)).collect();
        RedEnumerator { params, nb }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    /// Appends all triples for canonical `(n1, n2)`; the `solution` index of
    /// each triple is its rank among triples with the same `B`.
    pub(crate) fn raw(&self, n1: u64, n2: u64, out: &mut Vec<RawTriple>) {
        let p = &self.params;
        let mm = p.m_minus() as i64;
        let n = (n1 as i64 - n2 as i64).rem_euclid(mm);
        let q = p.q() as i64;
        let f = p.f() as usize;
        let mut b = [0u32; 32];
        for (mask, &hi) in self.nb.iter().enumerate() {
            let set = SubsetB::from_mask(mask as u32, p.f()).expect("mask below 2^f");
            let lo = hi + 1 - q;
            let mut v = lo + (n - lo).rem_euclid(mm);
            while v <= hi {
                let ok = decode_signed_digits(v, set, p, &mut b[..f]);
                debug_assert!(ok);
                let inside: i128 = b[..f]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| set.contains(*i as u32))
                    .map(|(i, &d)| d as i128 * p.pow(i as u32) as i128)
                    .sum();
                let a = reduce(n1 as i128 - inside, p.m_minus()).value();
                let (bcode, b_value) = bcode_of(&b[..f], p);
                out.push(RawTriple {
                    a,
                    bcode,
                    set,
                    b_value,
                });
                v += mm;
            }
        }
    }
}

fn labeled_from_raw(raw: &[RawTriple], params: &FieldParams) -> BTreeSet<LabeledWeightN1> {
    let mut out = BTreeSet::new();
    let mut prev: Option<SubsetB> = None;
    let mut idx = 0u8;
    for t in raw {
        idx = if prev == Some(t.set) { idx + 1 } else { 0 };
        prev = Some(t.set);
        out.insert(LabeledWeightN1 {
            weight: canonical_weight(t.a as i128, &digits_of_bcode(t.bcode, params), params)
                .expect("decoded digits lie in 1..=ell"),
            set: t.set,
            solution: idx,
        });
    }
    out
}

pub fn enumerate_wprime_red(d: &ReducibleDatum) -> BTreeSet<LabeledWeightN1> {
    let mut raw = Vec::new();
    RedEnumerator::new(d.params).raw(d.n1.value(), d.n2.value(), &mut raw);
    labeled_from_raw(&raw, &d.params)
}

fn raw_triples(d: &ReducibleDatum) -> Vec<RawTriple> {
    let mut raw = Vec::new();
    RedEnumerator::new(d.params).raw(d.n1.value(), d.n2.value(), &mut raw);
    raw
}

fn projection(d: &ReducibleDatum) -> WeightSet {
    weights_of_raw(raw_triples(d).iter(), &d.params)
}

/// The closed-form prediction of `|W'(chi_1, chi_2)|` counted with
/// multiplicity, precomputed per parameters.
#[derive(Clone, Debug)]
pub struct RedClosedForm {
    params: FieldParams,
    exceptional: BTreeSet<u64>,
}

impl RedClosedForm {
    pub fn new(params: FieldParams) -> Self {
        let mut exceptional = BTreeSet::new();
        let f = params.f();
        if params.ell() != 2 {
            let m = params.m_minus();
            let ell1 = params.ell() as i128 + 1;
            let evens = SubsetB::from_indices((0..f).step_by(2), f).expect("in range");
            let odds = SubsetB::from_indices((1..f).step_by(2), f).expect("in range");
            for s in params.subsets() {
                if params.ell() == 3 && (s == evens || s == odds) {
                    continue;
                }
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
                if f % 2 == 1 {
                    exceptional.insert(reduce(-1 + ell1 * alt, m).value());
                } else if !s.is_empty() && s != params.full_subset() {
                    exceptional.insert(reduce(ell1 * alt, m).value());
                }
            }
        }
        RedClosedForm {
            params,
            exceptional,
        }
    }

    /// Residues modulo `ell^f - 1` where one extra triple appears
    /// (`ell >= 3` only).
    pub fn exceptional_classes(&self) -> &BTreeSet<u64> {
        &self.exceptional
    }

    /// Count for the ratio exponent `n = n_1 - n_2` (canonical).
    pub fn count(&self, n: u64) -> u64 {
        let p = &self.params;
        let full = 1u64 << p.f();
        let even = p.f().is_multiple_of(2);
        if p.ell() == 2 {
            return match (even, n) {
                (true, 0) => full + 4,
                (true, n) if n % 3 == 0 => full + 3,
                (true, _) => full,
                (false, 0) => full + 2,
                (false, _) => full + 1,
            };
        }
        if (n == 0 && even) || (p.ell() == 3 && n == p.m_minus() / 2) {
            full + 2
        } else if self.exceptional.contains(&n) {
            full + 1
        } else {
            full
        }
    }
}

pub fn count_closed_form_red(d: &ReducibleDatum) -> u64 {
    RedClosedForm::new(d.params).count(d.n().value())
}

/// `max(0, ell (ell^(f-2) - 1) / (ell - 1))`.
pub fn injectivity_bound_red(params: &FieldParams) -> i64 {
    crate::recipe_irred::injectivity_bound(params).max(0)
}

/// `Some(witness)` exactly when `W' -> W_p` fails to be injective; the ratio
/// `n = 0` always fails, with witness `(0, 0)`.
pub fn injectivity_fails_red(d: &ReducibleDatum) -> Option<InjectivityWitness> {
    let p = &d.params;
    let mm = p.m_minus();
    let bound = injectivity_bound_red(p);
    let mut x = d.n().value();
    for r in 0..p.f() {
        let near = mm - x;
        if (x as i64) <= bound {
            return Some(InjectivityWitness { r, m: x as i64 });
        }
        if (near as i64) <= bound {
            return Some(InjectivityWitness {
                r,
                m: -(near as i64),
            });
        }
        x = ((x as u128 * p.ell() as u128) % mm as u128) as u64;
    }
    None
}

/// `dim H^1(K, chi_1 / chi_2) = f + [n = 0] + [n = cyclotomic]`.
pub fn h1_dim(d: &ReducibleDatum) -> u32 {
    let n = d.n();
    let cyc = d.params.cyclotomic_exponent();
    d.params.f() + n.is_zero() as u32 + (n == cyc) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimCase {
    /// `L_alpha` is all of `H^1`: cyclotomic ratio, `b = (ell, ..., ell)`, `J = S`.
    FullCyclotomic,
    /// Trivial ratio with `b = (ell, ..., ell)`; `L_ur` is not in `L'_alpha`.
    TrivialTopDigits,
    /// Trivial ratio with `J = S`; `L_ur` lies in `L'_alpha`.
    TrivialFullLabel,
    /// Trivial ratio otherwise; depends on whether `L_ur` lies in `L'_alpha`.
    TrivialUndecided,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub generic_dim: u32,
    /// When undecidable this is the smaller of the two possible values;
    /// the larger is `delta + 1`.
    pub delta: u32,
    pub decidable: bool,
    pub case: DimCase,
}

impl DimReport {
    pub fn dim(&self) -> Option<u32> {
        self.decidable.then_some(self.generic_dim + self.delta)
    }
}

fn in_wprime(alpha: &LabeledWeightN1, d: &ReducibleDatum) -> bool {
    let p = &d.params;
    if alpha.weight.params() != p {
        return false;
    }
    let mut inside = 0i128;
    let mut outside = 0i128;
    for (i, &b) in alpha.weight.b().iter().enumerate() {
        let t = b as i128 * p.pow(i as u32) as i128;
        if alpha.set.contains(i as u32) {
            inside += t;
        } else {
            outside += t;
        }
    }
    let a = alpha.weight.a().value() as i128;
    reduce(a + inside, p.m_minus()) == d.n1 && reduce(a + outside, p.m_minus()) == d.n2
}

pub fn dim_l_alpha(alpha: &LabeledWeightN1, d: &ReducibleDatum) -> Result<DimReport> {
    if !in_wprime(alpha, d) {
        return Err(Error::NotInWprime(alpha.to_string()));
    }
    let p = &d.params;
    let top = alpha.weight.b().iter().all(|&x| x as u64 == p.ell());
    Ok(dim_report(alpha.set, top, d))
}

/// Dimension bookkeeping from the label alone; `top` says `b = (ell, ..., ell)`.
pub(crate) fn dim_report(set: SubsetB, top: bool, d: &ReducibleDatum) -> DimReport {
    let p = &d.params;
    let generic_dim = set.len();
    let full_label = set == p.full_subset();
    let n = d.n();
    let report = |delta, decidable, case| DimReport {
        generic_dim,
        delta,
        decidable,
        case,
    };
    if n == p.cyclotomic_exponent() && top && full_label {
        report(h1_dim(d) - generic_dim, true, DimCase::FullCyclotomic)
    } else if n.is_zero() && top {
        report(2, true, DimCase::TrivialTopDigits)
    } else if n.is_zero() && full_label {
        report(1, true, DimCase::TrivialFullLabel)
    } else if n.is_zero() {
        report(1, false, DimCase::TrivialUndecided)
    } else {
        report(0, true, DimCase::Generic)
    }
}

/// `W_p(rho) = pi_1(W')` for a split representation.
pub fn wp_red_split(d: &ReducibleDatum) -> Result<WeightSet> {
    if d.ext != ExtClass::Split {
        return Err(Error::WrongExtClass {
            expected: ExtClass::Split.name(),
            got: d.ext.name(),
        });
    }
    Ok(projection(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialWeights {
    pub certain: WeightSet,
    pub possible: WeightSet,
}

/// Bounds on `W_p(rho)` for an unknown non-split class: `certain` holds the
/// weights with some `L_alpha` equal to all of `H^1`, `possible` the other
/// weights of `pi_1(W')`.
pub fn wp_red_partial(d: &ReducibleDatum) -> Result<PartialWeights> {
    if d.ext != ExtClass::NonSplitUnknown {
        return Err(Error::WrongExtClass {
            expected: ExtClass::NonSplitUnknown.name(),
            got: d.ext.name(),
        });
    }
    let h1 = h1_dim(d);
    let raw = raw_triples(d);
    let top_code = d.params.q() - 1;
    let is_certain = |t: &RawTriple| dim_report(t.set, t.bcode == top_code, d).dim() == Some(h1);
    let certain = weights_of_raw(raw.iter().filter(|t| is_certain(t)), &d.params);
    let possible = weights_of_raw(raw.iter(), &d.params)
        .into_iter()
        .filter(|v| !certain.contains(v))
        .collect();
    Ok(PartialWeights { certain, possible })
}

/// Whether `n` is `sum b_i ell^i` with every `b_i` in `{1..ell-2}` and `b`
/// neither constantly 1 nor constantly `ell - 2`.
///
/// Such a sum lies strictly between 0 and `ell^f - 1`, so it equals the
/// canonical residue and its digits are the base-`ell` digits of `n`.
pub fn is_generic(d: &ReducibleDatum) -> bool {
    let p = &d.params;
    if p.ell() <= 3 {
        return false;
    }
    let top = p.ell() as u32 - 2;
    let digits = digits_base_ell(d.n(), p);
    digits.iter().all(|&x| (1..=top).contains(&x))
        && !digits.iter().all(|&x| x == 1)
        && !digits.iter().all(|&x| x == top)
}
