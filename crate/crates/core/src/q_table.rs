//! The explicit weight sets over `Q_ell` (`f = 1`), transcribed row by row
//! so that they can be checked against the general recipes.
//!
//! After twisting, `rho` restricted to inertia is either
//! `diag(omega_2^b, omega_2^(ell b))` (niveau 2) or `(omega^b, *; 0, 1)`
//! (niveau 1), with `1 <= b <= ell - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{is_prime, FieldParams};
use crate::recipe_irred::{wp_irred, NiveauTwoDatum};
use crate::recipe_red::{wp_red_partial, wp_red_split, ExtClass, ReducibleDatum};
use crate::weights::{canonical_weight, WeightSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QClass {
    Split,
    /// Non-split, cyclotomic ratio, peu ramifiée.
    NonSplitPeu,
    /// Non-split, cyclotomic ratio, très ramifiée.
    NonSplitTres,
    /// Non-split with non-cyclotomic ratio.
    NonSplitGeneric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "niveau", rename_all = "lowercase")]
pub enum QVariant {
    #[serde(rename = "2")]
    Niveau2 { b: u64 },
    #[serde(rename = "1")]
    Niveau1 { b: u64, cls: QClass },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QShape {
    pub ell: u64,
    pub variant: QVariant,
}

/// Which line of the table produced a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QRow {
    Niveau2,
    /// `1 < b < ell - 1`, non-split.
    MiddleNonSplit,
    /// `1 < b < ell - 2`, split.
    MiddleSplit,
    /// `b = ell - 2`, `ell > 3`, split.
    EllMinusTwoSplit,
    /// `b = ell - 1`, `ell > 2`.
    EllMinusOne,
    /// `b = 1`, très ramifiée.
    Tres,
    /// `b = 1`, `ell > 3`, split.
    OneSplit,
    /// `b = 1`, `ell = 3`, split.
    OneSplitEllThree,
    Otherwise,
}

impl QRow {
    /// Position in the printed niveau-1 table (1 to 8), or 0 for niveau 2.
    pub fn index(&self) -> u8 {
        match self {
            QRow::Niveau2 => 0,
            QRow::MiddleNonSplit => 1,
            QRow::MiddleSplit => 2,
            QRow::EllMinusTwoSplit => 3,
            QRow::EllMinusOne => 4,
            QRow::Tres => 5,
            QRow::OneSplit => 6,
            QRow::OneSplitEllThree => 7,
            QRow::Otherwise => 8,
        }
    }
}

impl fmt::Display for QShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            QVariant::Niveau2 { b } => write!(f, "ell={} niveau=2 b={}", self.ell, b),
            QVariant::Niveau1 { b, cls } => {
                write!(f, "ell={} niveau=1 b={} class={:?}", self.ell, b, cls)
            }
        }
    }
}

/// Whether `omega^b` is the cyclotomic character, i.e. `b = 1 mod ell - 1`.
fn ratio_is_cyclotomic(ell: u64, b: u64) -> bool {
    (b as i64 - 1).rem_euclid(ell as i64 - 1) == 0
}

impl QShape {
    pub fn niveau2(ell: u64, b: u64) -> Result<Self> {
        QShape {
            ell,
            variant: QVariant::Niveau2 { b },
        }
        .validated()
    }

    pub fn niveau1(ell: u64, b: u64, cls: QClass) -> Result<Self> {
        QShape {
            ell,
            variant: QVariant::Niveau1 { b, cls },
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !is_prime(self.ell) {
            return Err(Error::NotPrime(self.ell));
        }
        let b = match self.variant {
            QVariant::Niveau2 { b } | QVariant::Niveau1 { b, .. } => b,
        };
        if b < 1 || b > self.ell - 1 {
            return Err(Error::IllegalShape(format!(
                "b = {b} outside 1..={}",
                self.ell - 1
            )));
        }
        if let QVariant::Niveau1 { cls, .. } = self.variant {
            let cyclotomic = ratio_is_cyclotomic(self.ell, b);
            match cls {
                QClass::NonSplitPeu | QClass::NonSplitTres if !cyclotomic => {
                    return Err(Error::IllegalShape(format!(
                        "{cls:?} needs a cyclotomic ratio, omega^{b} is not (ell = {})",
                        self.ell
                    )));
                }
                QClass::NonSplitGeneric if cyclotomic => {
                    return Err(Error::IllegalShape(format!(
                        "omega^{b} is cyclotomic for ell = {}; use NonSplitPeu or NonSplitTres",
                        self.ell
                    )));
                }
                _ => {}
            }
        }
        Ok(self)
    }

    /// Every legal shape for `ell`, niveau 2 first.
    pub fn all_legal(ell: u64) -> Vec<QShape> {
        let mut out = Vec::new();
        for b in 1..ell {
            out.extend(QShape::niveau2(ell, b));
        }
        for b in 1..ell {
            for cls in [
                QClass::Split,
                QClass::NonSplitPeu,
                QClass::NonSplitTres,
                QClass::NonSplitGeneric,
            ] {
                out.extend(QShape::niveau1(ell, b, cls));
            }
        }
        out
    }
}

/// `(row, W(rho))` for a table shape.
pub fn weights_q_row(shape: &QShape) -> Result<(QRow, WeightSet)> {
    let shape = shape.validated()?;
    let ell = shape.ell;
    let params = FieldParams::new(ell, 1)?;
    let v = |a: u64, b: u64| {
        canonical_weight(a as i128, &[b as u32], &params).expect("table digits lie in 1..=ell")
    };
    let set = |ws: Vec<(u64, u64)>| ws.into_iter().map(|(a, b)| v(a, b)).collect::<WeightSet>();
    let split = |cls: QClass| cls == QClass::Split;
    Ok(match shape.variant {
        QVariant::Niveau2 { b } => (QRow::Niveau2, set(vec![(0, b), (b - 1, ell + 1 - b)])),
        QVariant::Niveau1 { b, cls } => {
            if 1 < b && b + 1 < ell && !split(cls) {
                (QRow::MiddleNonSplit, set(vec![(0, b)]))
            } else if 1 < b && b + 2 < ell && split(cls) {
                (QRow::MiddleSplit, set(vec![(0, b), (b, ell - 1 - b)]))
            } else if b + 2 == ell && ell > 3 && split(cls) {
                (
                    QRow::EllMinusTwoSplit,
                    set(vec![(0, ell - 2), (ell - 2, ell), (ell - 2, 1)]),
                )
            } else if b + 1 == ell && ell > 2 {
                (QRow::EllMinusOne, set(vec![(0, ell - 1)]))
            } else if b == 1 && cls == QClass::NonSplitTres {
                (QRow::Tres, set(vec![(0, ell)]))
            } else if b == 1 && ell > 3 && split(cls) {
                (QRow::OneSplit, set(vec![(0, ell), (0, 1), (1, ell - 2)]))
            } else if b == 1 && ell == 3 && split(cls) {
                (
                    QRow::OneSplitEllThree,
                    set(vec![(0, 3), (0, 1), (1, 3), (1, 1)]),
                )
            } else {
                (QRow::Otherwise, set(vec![(0, ell), (0, 1)]))
            }
        }
    })
}

pub fn weights_q(shape: &QShape) -> Result<WeightSet> {
    weights_q_row(shape).map(|(_, s)| s)
}

/// The table's niveau-2 line against the irreducible recipe at `f = 1`.
pub fn crosscheck_niveau2(ell: u64, b: u64) -> Result<bool> {
    let table = weights_q(&QShape::niveau2(ell, b)?)?;
    let d = NiveauTwoDatum::new(FieldParams::new(ell, 1)?, b as i128)?;
    Ok(table == wp_irred(&d))
}

/// A split niveau-1 line against the reducible recipe at `f = 1`.
pub fn crosscheck_split(ell: u64, b: u64) -> Result<bool> {
    let table = weights_q(&QShape::niveau1(ell, b, QClass::Split)?)?;
    let d = ReducibleDatum::new(FieldParams::new(ell, 1)?, b as i128, 0, ExtClass::Split);
    Ok(table == wp_red_split(&d)?)
}

/// For a non-split line: the table set lies between the certain weights of
/// the partial computation and the split projection.
pub fn crosscheck_nonsplit(shape: &QShape) -> Result<bool> {
    let shape = shape.validated()?;
    let QVariant::Niveau1 { b, cls } = shape.variant else {
        return Err(Error::IllegalShape(
            "niveau-2 shapes have no extension class".into(),
        ));
    };
    if cls == QClass::Split {
        return Err(Error::IllegalShape(
            "split shape passed to the non-split check".into(),
        ));
    }
    let table = weights_q(&shape)?;
    let params = FieldParams::new(shape.ell, 1)?;
    let d = ReducibleDatum::new(params, b as i128, 0, ExtClass::NonSplitUnknown);
    let partial = wp_red_partial(&d)?;
    let projection = wp_red_split(&d.with_ext(ExtClass::Split))?;
    Ok(partial.certain.is_subset(&table) && table.is_subset(&projection))
}
