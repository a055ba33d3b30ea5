//! Global weight sets: one local set per prime above `ell`, combined as
//! tensor products `V = (x)_p V_p`.
//!
//! Twisting by a character `chi` with `chi|_{I_p} = omega^c` sends a
//! reducible datum `(n1, n2)` to `(n1 + c, n2 + c)`. For an irreducible datum,
//! `chi` restricted to the unramified quadratic extension is
//! `omega^c = (omega')^{c (ell^f + 1)}`, so `n` becomes `n + c (ell^f + 1)`.
//! Either way the weights move by `a -> a + c`.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{FieldParams, Residue};
use crate::recipe_irred::{wp_irred, NiveauTwoDatum};
use crate::recipe_red::{wp_red_partial, wp_red_split, ExtClass, ReducibleDatum};
use crate::weights::{det_exponent, twist_weight, SerreWeight, TwistExponent, WeightSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalDatum {
    Irreducible(NiveauTwoDatum),
    Reducible(ReducibleDatum),
}

impl LocalDatum {
    pub fn params(&self) -> &FieldParams {
        match self {
            LocalDatum::Irreducible(d) => d.params(),
            LocalDatum::Reducible(d) => d.params(),
        }
    }

    /// The exponent of `det rho` on inertia, modulo `ell^f - 1`.
    pub fn det_exponent(&self) -> Residue {
        match self {
            LocalDatum::Irreducible(d) => d.n().reduce_to(d.params().m_minus()),
            LocalDatum::Reducible(d) => d.n1() + d.n2(),
        }
    }

    pub fn twist(&self, c: i128) -> LocalDatum {
        match self {
            LocalDatum::Irreducible(d) => {
                let p = *d.params();
                let n = d.n().value() as i128 + c * p.m_plus() as i128;
                LocalDatum::Irreducible(
                    NiveauTwoDatum::new(p, n).expect("twisting preserves n mod ell^f + 1"),
                )
            }
            LocalDatum::Reducible(d) => LocalDatum::Reducible(ReducibleDatum::new(
                *d.params(),
                d.n1().value() as i128 + c,
                d.n2().value() as i128 + c,
                d.ext(),
            )),
        }
    }

    pub fn local_weights(&self) -> Result<LocalWeights> {
        Ok(match self {
            LocalDatum::Irreducible(d) => LocalWeights::exact(wp_irred(d)),
            LocalDatum::Reducible(d) => match d.ext() {
                ExtClass::Split => LocalWeights::exact(wp_red_split(d)?),
                ExtClass::NonSplitUnknown => {
                    let p = wp_red_partial(d)?;
                    LocalWeights {
                        certain: p.certain,
                        possible: p.possible,
                    }
                }
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
enum LocalJson {
    Irreducible {
        f: u32,
        n: i64,
    },
    Reducible {
        f: u32,
        n1: i64,
        n2: i64,
        ext: ExtJson,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ExtJson {
    Split,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GlobalJson {
    ell: u64,
    primes: Vec<LocalJson>,
}

/// Local data at every prime above `ell`, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GlobalJson", into = "GlobalJson")]
pub struct GlobalDatum {
    ell: u64,
    primes: Vec<LocalDatum>,
}

impl TryFrom<GlobalJson> for GlobalDatum {
    type Error = Error;
    fn try_from(raw: GlobalJson) -> Result<Self> {
        let primes = raw
            .primes
            .into_iter()
            .map(|p| match p {
                LocalJson::Irreducible { f, n } => Ok(LocalDatum::Irreducible(
                    NiveauTwoDatum::new(FieldParams::new(raw.ell, f)?, n as i128)?,
                )),
                LocalJson::Reducible { f, n1, n2, ext } => {
                    let ext = match ext {
                        ExtJson::Split => ExtClass::Split,
                        ExtJson::Unknown => ExtClass::NonSplitUnknown,
                    };
                    Ok(LocalDatum::Reducible(ReducibleDatum::new(
                        FieldParams::new(raw.ell, f)?,
                        n1 as i128,
                        n2 as i128,
                        ext,
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        GlobalDatum::new(raw.ell, primes)
    }
}

impl From<GlobalDatum> for GlobalJson {
    fn from(d: GlobalDatum) -> Self {
        GlobalJson {
            ell: d.ell,
            primes: d
                .primes
                .iter()
                .map(|p| match p {
                    LocalDatum::Irreducible(x) => LocalJson::Irreducible {
                        f: x.params().f(),
                        n: x.n().value() as i64,
                    },
                    LocalDatum::Reducible(x) => LocalJson::Reducible {
                        f: x.params().f(),
                        n1: x.n1().value() as i64,
                        n2: x.n2().value() as i64,
                        ext: match x.ext() {
                            ExtClass::Split => ExtJson::Split,
                            ExtClass::NonSplitUnknown => ExtJson::Unknown,
                        },
                    },
                })
                .collect(),
        }
    }
}

impl GlobalDatum {
    pub fn new(ell: u64, primes: Vec<LocalDatum>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyPrimeList);
        }
        for (i, p) in primes.iter().enumerate() {
            if p.params().ell() != ell {
                return Err(Error::ParamMismatch(format!(
                    "prime slot {i} has ell = {}, datum has ell = {ell}",
                    p.params().ell()
                )));
            }
        }
        Ok(GlobalDatum { ell, primes })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn primes(&self) -> &[LocalDatum] {
        &self.primes
    }
}

/// Bounds `certain <= W_p(rho) <= certain + possible`; `possible` is empty
/// whenever the local set is known exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalWeights {
    pub certain: WeightSet,
    pub possible: WeightSet,
}

impl LocalWeights {
    pub fn exact(set: WeightSet) -> Self {
        LocalWeights {
            certain: set,
            possible: WeightSet::new(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.possible.is_empty()
    }

    pub fn closure(&self) -> WeightSet {
        self.certain.union(&self.possible).cloned().collect()
    }
}

/// One weight per prime slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GlobalWeight(pub Vec<SerreWeight>);

impl fmt::Display for GlobalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" ⊗ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalWeightSet {
    pub slots: Vec<LocalWeights>,
}

impl GlobalWeightSet {
    pub fn is_exact(&self) -> bool {
        self.slots.iter().all(LocalWeights::is_exact)
    }

    /// Products of certain local weights, in lexicographic slot order.
    pub fn certain(&self) -> impl Iterator<Item = GlobalWeight> + '_ {
        self.slots
            .iter()
            .map(|s| s.certain.iter().cloned())
            .multi_cartesian_product()
            .map(GlobalWeight)
    }

    /// Products drawn from `certain + possible` at every slot.
    pub fn closure(&self) -> impl Iterator<Item = GlobalWeight> {
        self.slots
            .iter()
            .map(|s| s.closure().into_iter().collect::<Vec<_>>().into_iter())
            .collect::<Vec<_>>()
            .into_iter()
            .multi_cartesian_product()
            .map(GlobalWeight)
    }

    pub fn certain_len(&self) -> u128 {
        self.slots.iter().map(|s| s.certain.len() as u128).product()
    }

    pub fn closure_len(&self) -> u128 {
        self.slots
            .iter()
            .map(|s| (s.certain.len() + s.possible.len()) as u128)
            .product()
    }
}

pub fn global_weight_set(d: &GlobalDatum) -> Result<GlobalWeightSet> {
    let slots = d
        .primes
        .iter()
        .map(LocalDatum::local_weights)
        .collect::<Result<Vec<_>>>()?;
    Ok(GlobalWeightSet { slots })
}

/// The datum of `chi rho`, where `chi` has inertial exponent `c[i]` at the
/// `i`-th prime.
pub fn twist_global(d: &GlobalDatum, c: &[i128]) -> Result<GlobalDatum> {
    if c.len() != d.primes.len() {
        return Err(Error::ParamMismatch(format!(
            "{} twist exponents for {} primes",
            c.len(),
            d.primes.len()
        )));
    }
    let primes = d.primes.iter().zip(c).map(|(p, &c)| p.twist(c)).collect();
    GlobalDatum::new(d.ell, primes)
}

/// `V -> V (x) det^c` applied slot by slot.
pub fn twist_weight_set(s: &GlobalWeightSet, c: &[i128]) -> Result<GlobalWeightSet> {
    if c.len() != s.slots.len() {
        return Err(Error::ParamMismatch(format!(
            "{} twist exponents for {} slots",
            c.len(),
            s.slots.len()
        )));
    }
    let tw = |set: &WeightSet, c: i128| -> Result<WeightSet> {
        set.iter()
            .map(|v| twist_weight(v, TwistExponent::new(c, v.params())))
            .collect()
    };
    let slots = s
        .slots
        .iter()
        .zip(c)
        .map(|(slot, &c)| {
            Ok(LocalWeights {
                certain: tw(&slot.certain, c)?,
                possible: tw(&slot.possible, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GlobalWeightSet { slots })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetViolation {
    pub slot: usize,
    pub weight: SerreWeight,
    pub expected: u64,
    pub got: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetReport {
    pub checked: u64,
    pub violations: Vec<DetViolation>,
}

impl DetReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `det_exponent(V)` against the datum for every weight in `sets`
/// (certain and possible alike).
pub fn check_det_sets(d: &GlobalDatum, sets: &GlobalWeightSet) -> DetReport {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (slot, (local, weights)) in d.primes.iter().zip(&sets.slots).enumerate() {
        let expected = local.det_exponent();
        for v in weights.certain.iter().chain(&weights.possible) {
            checked += 1;
            let got = det_exponent(v);
            if v.params() != local.params() || got != expected {
                violations.push(DetViolation {
                    slot,
                    weight: v.clone(),
                    expected: expected.value(),
                    got: got.value(),
                });
            }
        }
    }
    DetReport {
        checked,
        violations,
    }
}

pub fn check_det_compatibility(d: &GlobalDatum) -> Result<DetReport> {
    Ok(check_det_sets(d, &global_weight_set(d)?))
}
