//! Serre weights `V_{a,b}` of `GL_2(F_{ell^f})`.
//!
//! A weight is named by a determinant twist `a` modulo `ell^f - 1` (whose
//! base-`ell` digits are the per-embedding exponents `a_i`) and a digit
//! vector `b` in `{1..ell}^f` (the symmetric-power dimensions). Distinct pairs
//! name inequivalent representations, so the pair is used as the identity.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modarith::{digits_base_ell, reduce, FieldParams, Residue};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SerreWeight {
    params: FieldParams,
    a: Residue,
    b: Vec<u32>,
}

/// Sorted by `(b, a)` within equal parameters.
pub type WeightSet = BTreeSet<SerreWeight>;

impl SerreWeight {
    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn a(&self) -> Residue {
        self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    /// The exponents `(a_0, ..., a_{f-1})`.
    pub fn a_digits(&self) -> Vec<u32> {
        digits_base_ell(self.a, &self.params)
    }

    /// `sum b_i ell^i` as an integer.
    pub fn b_value(&self) -> u64 {
        self.b
            .iter()
            .enumerate()
            .map(|(i, &d)| d as u64 * self.params.pow(i as u32))
            .sum()
    }
}

impl Ord for SerreWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.params
            .cmp(&other.params)
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.a.cmp(&other.a))
    }
}

impl PartialOrd for SerreWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "V[{} ; {}]", join(&self.a_digits()), join(&self.b))
    }
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    ell: u64,
    f: u32,
    a: u64,
    b: Vec<u32>,
}

impl Serialize for SerreWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightJson {
            ell: self.params.ell(),
            f: self.params.f(),
            a: self.a.value(),
            b: self.b.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SerreWeight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = WeightJson::deserialize(d)?;
        let params = FieldParams::new(raw.ell, raw.f).map_err(D::Error::custom)?;
        if raw.a >= params.m_minus() {
            return Err(D::Error::custom(format!(
                "a = {} is not canonical modulo {}",
                raw.a,
                params.m_minus()
            )));
        }
        canonical_weight(raw.a as i128, &raw.b, &params).map_err(D::Error::custom)
    }
}

fn check_digits(b: &[u32], params: &FieldParams) -> Result<()> {
    if b.len() != params.f() as usize {
        return Err(Error::BadDigitCount {
            got: b.len(),
            expected: params.f(),
        });
    }
    for (index, &value) in b.iter().enumerate() {
        if value < 1 || value as u64 > params.ell() {
            return Err(Error::BadWeightDigits {
                index,
                value: value as u64,
                ell: params.ell(),
            });
        }
    }
    Ok(())
}

pub fn canonical_weight(a_raw: i128, b: &[u32], params: &FieldParams) -> Result<SerreWeight> {
    check_digits(b, params)?;
    Ok(SerreWeight {
        params: *params,
        a: reduce(a_raw, params.m_minus()),
        b: b.to_vec(),
    })
}

/// The inertial exponent `c` of a character `chi`, so that twisting by
/// `chi` sends `V_{a,b}` to `V_{a+c,b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistExponent {
    c: Residue,
}

impl TwistExponent {
    pub fn new(c: i128, params: &FieldParams) -> Self {
        TwistExponent {
            c: reduce(c, params.m_minus()),
        }
    }

    pub fn value(&self) -> Residue {
        self.c
    }
}

pub fn twist_weight(v: &SerreWeight, c: TwistExponent) -> Result<SerreWeight> {
    if c.c.modulus() != v.params.m_minus() {
        return Err(Error::ParamMismatch(format!(
            "twist modulus {} against weight modulus {}",
            c.c.modulus(),
            v.params.m_minus()
        )));
    }
    Ok(SerreWeight {
        params: v.params,
        a: v.a + c.c,
        b: v.b.clone(),
    })
}

/// `sum (2 a_i + b_i - 1) ell^i` modulo `ell^f - 1`.
pub fn central_character_exponent(v: &SerreWeight) -> Residue {
    det_exponent(v) - v.params.cyclotomic_exponent()
}

/// `sum (2 a_i + b_i) ell^i` modulo `ell^f - 1`: the inertial exponent of
/// `det rho` for any `rho` modular of weight `v`.
pub fn det_exponent(v: &SerreWeight) -> Residue {
    let m = v.params.m_minus();
    reduce(2 * v.a.value() as i128 + v.b_value() as i128, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ell: u64, f: u32) -> FieldParams {
        FieldParams::new(ell, f).unwrap()
    }

    fn w(a: i128, b: &[u32], params: &FieldParams) -> SerreWeight {
        canonical_weight(a, b, params).unwrap()
    }

    /// Digit-wise formula, independent of the residue shortcut.
    fn central_oracle(v: &SerreWeight) -> u64 {
        let params = v.params();
        let s: i128 = v
            .a_digits()
            .iter()
            .zip(v.b())
            .enumerate()
            .map(|(i, (&a, &b))| (2 * a as i128 + b as i128 - 1) * params.pow(i as u32) as i128)
            .sum();
        reduce(s, params.m_minus()).value()
    }

    #[test]
    fn canonical_weight_examples() {
        assert_eq!(w(-9, &[1, 3, 1], &p(3, 3)).a().value(), 17);
        assert_eq!(w(5, &[2], &p(5, 1)).a().value(), 1);
        assert!(matches!(
            canonical_weight(0, &[0], &p(3, 1)),
            Err(Error::BadWeightDigits {
                index: 0,
                value: 0,
                ell: 3
            })
        ));
        assert!(matches!(
            canonical_weight(0, &[4], &p(3, 1)),
            Err(Error::BadWeightDigits { .. })
        ));
        assert!(matches!(
            canonical_weight(0, &[1, 1], &p(3, 1)),
            Err(Error::BadDigitCount {
                got: 2,
                expected: 1
            })
        ));
    }

    #[test]
    fn twist_examples() {
        let params = p(5, 1);
        let v = w(0, &[2], &params);
        assert_eq!(
            twist_weight(&v, TwistExponent::new(1, &params)).unwrap(),
            w(1, &[2], &params)
        );
        assert_eq!(twist_weight(&v, TwistExponent::new(0, &params)).unwrap(), v);
        let p32 = p(3, 2);
        assert_eq!(
            twist_weight(&w(3, &[1, 2], &p32), TwistExponent::new(5, &p32)).unwrap(),
            w(0, &[1, 2], &p32)
        );
        assert!(matches!(
            twist_weight(&v, TwistExponent::new(1, &p32)),
            Err(Error::ParamMismatch(_))
        ));
    }

    #[test]
    fn central_and_det_examples() {
        assert_eq!(central_character_exponent(&w(0, &[2], &p(5, 1))).value(), 1);
        for ell in [2, 3, 5, 7] {
            assert_eq!(
                central_character_exponent(&w(0, &[1], &p(ell, 1))).value(),
                0
            );
        }
        assert_eq!(
            central_character_exponent(&w(0, &[1, 1], &p(2, 2))).value(),
            0
        );
        assert_eq!(det_exponent(&w(0, &[2], &p(5, 1))).value(), 2);
        assert_eq!(det_exponent(&w(1, &[2], &p(3, 1))).value(), 0);
        assert_eq!(det_exponent(&w(0, &[1, 1], &p(3, 2))).value(), 4);
    }

    fn all_weights(params: &FieldParams) -> Vec<SerreWeight> {
        let ell = params.ell() as u32;
        let mut bs: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..params.f() {
            bs = bs
                .into_iter()
                .flat_map(|v| {
                    (1..=ell).map(move |d| {
                        let mut x = v.clone();
                        x.push(d);
                        x
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for b in &bs {
            for a in 0..params.m_minus() {
                out.push(w(a as i128, b, params));
            }
        }
        out
    }

    #[test]
    fn weight_count_and_central_oracle() {
        for (ell, f) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 1),
            (3, 2),
            (3, 3),
            (5, 1),
            (5, 2),
            (7, 1),
            (7, 2),
        ] {
            let params = p(ell, f);
            let all = all_weights(&params);
            let set: WeightSet = all.iter().cloned().collect();
            assert_eq!(set.len() as u64, params.m_minus() * params.q());
            for v in &all {
                assert_eq!(central_character_exponent(v).value(), central_oracle(v));
            }
        }
    }

    #[test]
    fn display_and_json() {
        let v = w(17, &[1, 3, 1], &p(3, 3));
        assert_eq!(v.to_string(), "V[2,2,1 ; 1,3,1]");
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"ell":3,"f":3,"a":17,"b":[1,3,1]}"#);
        let back: SerreWeight = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<SerreWeight>(r#"{"ell":3,"f":1,"a":2,"b":[1]}"#).is_err());
        assert!(serde_json::from_str::<SerreWeight>(r#"{"ell":3,"f":1,"a":0,"b":[4]}"#).is_err());
    }

    #[test]
    fn order_is_b_then_a() {
        let params = p(5, 1);
        let set: WeightSet = [
            w(3, &[5], &params),
            w(0, &[3], &params),
            w(3, &[1], &params),
        ]
        .into_iter()
        .collect();
        let shown: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["V[3 ; 1]", "V[0 ; 3]", "V[3 ; 5]"]);
    }
}
