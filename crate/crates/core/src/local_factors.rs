//! The mod-`ell` local factor `pi^{D_p}(rho)` at a prime `p` not dividing
//! `ell` where the quaternion algebra `D` ramifies, as a symbolic decision
//! table.
//!
//! Inputs are `q = N(p)` modulo `ell` and the shape of `rho`:
//!
//! * irreducible: the reduction of the Jacquet–Langlands transfer of any
//!   lift, which is irreducible and independent of the lift;
//! * an extension of `chi omega^{-1}` by `chi` (`omega` the mod-`ell`
//!   cyclotomic character): a character, a sum of two characters, or an
//!   extension on the `D^x` side, depending on `q` and the class `c_rho`;
//! * any other reducible `rho`: no square-integrable lifts, factor `0`.
//!
//! For `ell = 2` every odd `q` is `-1 mod 2`, and that branch is used.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::is_prime;

pub const CHI_INV_DET: &str = "chi_inv_det";
pub const CHI_INV_OMEGA_INV_DET: &str = "chi_inv_omega_inv_det";
pub const KUMMER_IMAGE: &str = "det_kummer_image_of_c_rho";
pub const EMERTON_FACTOR: &str = "emerton_factor";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FactorShape {
    Irreducible,
    /// `(chi, *; 0, chi omega^{-1})`; `split` says whether `* = 0`.
    CycTwistExt {
        split: bool,
    },
    OtherReducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFactorInput {
    pub ell: u64,
    /// `N(p)` modulo `ell`; any integer, reduced on use.
    pub q_mod_ell: u64,
    pub shape: FactorShape,
    /// Whether `c_rho` is non-zero; read only on the `q = -1` branch.
    #[serde(default)]
    pub ext_nonzero: bool,
    /// Ask for the split-algebra factor instead; it is returned as an
    /// opaque token.
    #[serde(default)]
    pub split_algebra: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FactorDescriptor {
    Zero,
    Character {
        desc: String,
    },
    DirectSumTwo {
        desc: String,
    },
    /// An extension of `quot` by `sub`. For `ell = 2` the class is named by
    /// `class`, the image of `c_rho` under the isomorphism
    /// `H^1(G_K, F_2) -> H^1(D^x, F_2)` induced by `det` and class field
    /// theory.
    Extension {
        split: bool,
        sub: String,
        quot: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        class: Option<String>,
    },
    JlReduction,
    EmertonFactor {
        token: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub factor: FactorDescriptor,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ext_space_dim: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub caveats: Vec<String>,
}

/// The residue class of `q` that drives the case split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QClassMod {
    MinusOne,
    One,
    Other,
}

fn check(ell: u64, q: u64) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::InvalidInput(format!("ell = {ell} is not prime")));
    }
    let q = q % ell;
    if q == 0 {
        return Err(Error::InvalidInput(format!(
            "q must be prime to ell = {ell}"
        )));
    }
    Ok(q)
}

/// `-1` is tested first, so `ell = 2` always lands there.
pub fn q_class(ell: u64, q_mod_ell: u64) -> Result<QClassMod> {
    let q = check(ell, q_mod_ell)?;
    Ok(if q == ell - 1 {
        QClassMod::MinusOne
    } else if q == 1 {
        QClassMod::One
    } else {
        QClassMod::Other
    })
}

/// `dim Ext^1((chi omega)^{-1} o det, chi^{-1} o det)` when `q = -1 mod ell`.
pub fn ext_space_dim(ell: u64, q_mod_ell: u64) -> Result<u32> {
    match q_class(ell, q_mod_ell)? {
        QClassMod::MinusOne => Ok(if ell == 2 { 2 } else { 1 }),
        _ => Err(Error::InvalidInput(format!(
            "q = {} is not -1 mod {ell}",
            q_mod_ell % ell
        ))),
    }
}

pub fn classify_pi_d(input: &LocalFactorInput) -> Result<Classification> {
    let ell = input.ell;
    let qc = q_class(ell, input.q_mod_ell)?;
    if input.split_algebra {
        return Ok(Classification {
            factor: FactorDescriptor::EmertonFactor {
                token: EMERTON_FACTOR.into(),
            },
            ext_space_dim: None,
            caveats: vec![],
        });
    }
    let mut caveats = Vec::new();
    let mut ext_dim = None;
    let factor = match input.shape {
        FactorShape::Irreducible => FactorDescriptor::JlReduction,
        FactorShape::OtherReducible => FactorDescriptor::Zero,
        FactorShape::CycTwistExt { split } => {
            if ell == 2 || (qc == QClassMod::One && ell > 2) {
                caveats.push(
                    "not characterised by the reductions of its square-integrable lifts".into(),
                );
            }
            match qc {
                QClassMod::MinusOne => {
                    ext_dim = Some(ext_space_dim(ell, input.q_mod_ell)?);
                    FactorDescriptor::Extension {
                        split: !input.ext_nonzero,
                        sub: CHI_INV_DET.into(),
                        quot: CHI_INV_OMEGA_INV_DET.into(),
                        class: (ell == 2).then(|| KUMMER_IMAGE.into()),
                    }
                }
                QClassMod::One if split => FactorDescriptor::DirectSumTwo {
                    desc: CHI_INV_DET.into(),
                },
                QClassMod::One | QClassMod::Other => FactorDescriptor::Character {
                    desc: CHI_INV_DET.into(),
                },
            }
        }
    };
    Ok(Classification {
        factor,
        ext_space_dim: ext_dim,
        caveats,
    })
}
