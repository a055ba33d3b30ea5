//! Exact residue arithmetic over the moduli `ell^f - 1`, `ell^f + 1` and
//! `ell^(2f) - 1`, plus the signed base-`ell` digit decoding shared by both
//! weight recipes.
//!
//! Every modulus handled here divides `ell^(2f) - 1`, which is kept below
//! `2^62`; intermediate products are formed in `u128`/`i128` so no operation
//! can overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// Exclusive upper bound for `ell^(2f) - 1`.
pub const WIDTH_LIMIT: u64 = 1 << 62;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime `ell`, the residue degree `f`, and the derived moduli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct FieldParams {
    ell: u64,
    f: u32,
    q: u64,
    m_plus: u64,
    m_minus: u64,
    m_big: u64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    ell: u64,
    f: u32,
}

impl TryFrom<RawParams> for FieldParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        FieldParams::new(raw.ell, raw.f)
    }
}

impl From<FieldParams> for RawParams {
    fn from(p: FieldParams) -> Self {
        RawParams { ell: p.ell, f: p.f }
    }
}

impl FieldParams {
    pub fn new(ell: u64, f: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if f == 0 {
            return Err(Error::ZeroDegree);
        }
        let too_large = Error::ParamsTooLarge { ell, f };
        let q = ell.checked_pow(f).ok_or(too_large.clone())?;
        let q2 = q.checked_mul(q).ok_or(too_large.clone())?;
        if q2 > WIDTH_LIMIT {
            return Err(too_large);
        }
        Ok(FieldParams {
            ell,
            f,
            q,
            m_plus: q + 1,
            m_minus: q - 1,
            m_big: q2 - 1,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// `ell^f`, the size of the residue field.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m_plus(&self) -> u64 {
        self.m_plus
    }

    pub fn m_minus(&self) -> u64 {
        self.m_minus
    }

    pub fn m_big(&self) -> u64 {
        self.m_big
    }

    /// `ell^i`; valid for `i <= 2f`.
    pub fn pow(&self, i: u32) -> u64 {
        debug_assert!(i <= 2 * self.f);
        self.ell.pow(i)
    }

    /// Exponent of the mod-`ell` cyclotomic character in terms of the
    /// fundamental character: `sum_{i<f} ell^i mod (ell^f - 1)`.
    pub fn cyclotomic_exponent(&self) -> Residue {
        let s: u64 = (0..self.f).map(|i| self.pow(i)).sum();
        Residue::new(s, self.m_minus)
    }

    /// All subsets of `{0, ..., f-1}` in increasing bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetB> {
        (0..1u32 << self.f).map(SubsetB)
    }

    pub fn full_subset(&self) -> SubsetB {
        SubsetB::full(self.f)
    }

    pub fn residue_minus(&self, x: i128) -> Residue {
        reduce(x, self.m_minus)
    }

    pub fn residue_plus(&self, x: i128) -> Residue {
        reduce(x, self.m_plus)
    }

    pub fn residue_big(&self, x: i128) -> Residue {
        reduce(x, self.m_big)
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ell={} f={}", self.ell, self.f)
    }
}

/// A canonical residue `0 <= value < modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Residue::new(0, modulus)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Reinterpret modulo a divisor of the current modulus.
    pub fn reduce_to(&self, modulus: u64) -> Residue {
        assert!(
            self.modulus.is_multiple_of(modulus),
            "{} does not divide {}",
            modulus,
            self.modulus
        );
        Residue::new(self.value, modulus)
    }

    pub fn mul_int(&self, k: i128) -> Residue {
        reduce(self.value as i128 * k, self.modulus)
    }

    fn check(&self, other: &Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic across different moduli"
        );
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        let s = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        Residue::new(s as u64, self.modulus)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::new((self.modulus - self.value) % self.modulus, self.modulus)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        let p = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Residue::new(p as u64, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Canonical residue of `x` modulo `m`.
pub fn reduce(x: i128, m: u64) -> Residue {
    assert!(m >= 1, "modulus must be positive");
    Residue {
        value: x.rem_euclid(m as i128) as u64,
        modulus: m,
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// `ell^k * n`; moving the base embedding `k` steps along Frobenius.
///
/// The modulus of `n` must divide `ell^(2f) - 1`, so `ell` is invertible and
/// negative `k` are allowed.
pub fn frobenius_shift(n: Residue, k: i64, params: &FieldParams) -> Residue {
    assert!(
        params.m_big.is_multiple_of(n.modulus),
        "modulus {} does not divide ell^(2f) - 1",
        n.modulus
    );
    let e = k.rem_euclid(2 * params.f as i64) as u64;
    let factor = pow_mod(params.ell, e, n.modulus);
    n * Residue::new(factor, n.modulus)
}

/// Base-`ell` digits `(a_0, ..., a_{f-1})` of the canonical representative
/// of `a` modulo `ell^f - 1`.
pub fn digits_base_ell(a: Residue, params: &FieldParams) -> Vec<u32> {
    let a = a.reduce_to(params.m_minus);
    let mut v = a.value;
    (0..params.f)
        .map(|_| {
            let d = v % params.ell;
            v /= params.ell;
            d as u32
        })
        .collect()
}

/// A subset of `{0, ..., f-1}`, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetB(u32);

impl SubsetB {
    pub const EMPTY: SubsetB = SubsetB(0);

    pub fn from_mask(mask: u32, f: u32) -> Option<SubsetB> {
        if f < 32 && mask >> f != 0 {
            return None;
        }
        Some(SubsetB(mask))
    }

    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I, f: u32) -> Option<SubsetB> {
        let mut mask = 0u32;
        for i in indices {
            if i >= f {
                return None;
            }
            mask |= 1 << i;
        }
        Some(SubsetB(mask))
    }

    pub fn full(f: u32) -> SubsetB {
        SubsetB(((1u64 << f) - 1) as u32)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn complement(&self, f: u32) -> SubsetB {
        SubsetB(!self.0 & SubsetB::full(f).0)
    }

    pub fn indices(&self, f: u32) -> impl Iterator<Item = u32> + '_ {
        (0..f).filter(move |&i| self.contains(i))
    }

    /// Cyclic shift `i -> i + 1 mod f`.
    pub fn rotate(&self, f: u32) -> SubsetB {
        let top = self.contains(f - 1) as u32;
        SubsetB(((self.0 << 1) & SubsetB::full(f).0) | top)
    }
}

impl fmt::Display for SubsetB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..32)
            .filter(|&i| self.contains(i))
            .map(|i| i.to_string())
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `sum_{i in B} b_i ell^i - sum_{i not in B} b_i ell^i`.
pub fn signed_digit_value(b: &[u32], set: SubsetB, params: &FieldParams) -> i64 {
    b.iter()
        .enumerate()
        .map(|(i, &d)| {
            let t = d as i64 * params.pow(i as u32) as i64;
            if set.contains(i as u32) {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// The `ell^f` consecutive integers hit by [`signed_digit_value`] for a
/// fixed `B`, as an inclusive range `(lo, hi)`.
pub fn signed_window(set: SubsetB, params: &FieldParams) -> (i64, i64) {
    let mut hi = 0i64;
    for i in 0..params.f {
        let p = params.pow(i) as i64;
        if set.contains(i) {
            hi += p * params.ell as i64;
        } else {
            hi -= p;
        }
    }
    (hi + 1 - params.q as i64, hi)
}

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
#[error("{v} lies outside the window [{lo}, {hi}]")]
pub struct NotInWindow {
    pub v: i64,
    pub lo: i64,
    pub hi: i64,
}

/// Digit-by-digit decode into `out`; returns `false` when no digit vector
/// reaches `v`. Each digit is forced modulo `ell`, so the decode is unique.
pub(crate) fn decode_signed_digits(
    v: i64,
    set: SubsetB,
    params: &FieldParams,
    out: &mut [u32],
) -> bool {
    let ell = params.ell as i64;
    let mut rest = v;
    let mut p = 1i64;
    for (i, slot) in out.iter_mut().enumerate().take(params.f as usize) {
        let q = rest / p;
        let sign = if set.contains(i as u32) { 1 } else { -1 };
        let mut d = (sign * q).rem_euclid(ell);
        if d == 0 {
            d = ell;
        }
        *slot = d as u32;
        rest -= sign * d * p;
        if i + 1 < params.f as usize {
            p *= ell;
        }
    }
    rest == 0
}

/// Recover `b` in `{1..ell}^f` with `signed_digit_value(b, B) == v`.
pub fn signed_digit_solve(
    v: i64,
    set: SubsetB,
    params: &FieldParams,
) -> std::result::Result<Vec<u32>, NotInWindow> {
    let (lo, hi) = signed_window(set, params);
    if v < lo || v > hi {
        return Err(NotInWindow { v, lo, hi });
    }
    let mut out = vec![0u32; params.f as usize];
    let ok = decode_signed_digits(v, set, params, &mut out);
    debug_assert!(ok, "window value {v} failed to decode");
    Ok(out)
}
