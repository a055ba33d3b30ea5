//! Exhaustive sweeps comparing the recipes against their closed forms and
//! structural laws.
//!
//! Every sweep enumerates all data for every `(ell, f)` in range, checks one
//! family of statements per datum, and reports the first few mismatches with
//! the triples that produced them. Work is split into fixed chunks whose
//! partial tallies are merged in input order, so a parallel run reports
//! exactly what a serial one does.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::global_weights::{
    global_weight_set, twist_global, twist_weight_set, GlobalDatum, LocalDatum,
};
use crate::modarith::{FieldParams, SubsetB};
use crate::q_table::{
    crosscheck_niveau2, crosscheck_nonsplit, crosscheck_split, QClass, QShape, QVariant,
};
use crate::recipe_irred::{
    enumerate_wprime_irred, injectivity_fails_irred, wp_irred, IrredClosedForm, IrredEnumerator,
    NiveauTwoDatum, RawTriple,
};
use crate::recipe_red::{
    dim_report, h1_dim, injectivity_fails_red, is_generic, ExtClass, RedClosedForm, RedEnumerator,
    ReducibleDatum,
};
use crate::weights::canonical_weight;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_RANGE_CAP: u64 = 10_000_000;
pub const MISMATCH_CAP: usize = 50;
const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    CountsIrred,
    CountsRed,
    InjectivityIrred,
    InjectivityRed,
    DetLaw,
    Symmetry,
    QtableCrosscheck,
    Nonempty,
    GenericSplit,
    WorkedExample,
}

impl SweepKind {
    pub const ALL: [SweepKind; 10] = [
        SweepKind::CountsIrred,
        SweepKind::CountsRed,
        SweepKind::InjectivityIrred,
        SweepKind::InjectivityRed,
        SweepKind::DetLaw,
        SweepKind::Symmetry,
        SweepKind::QtableCrosscheck,
        SweepKind::Nonempty,
        SweepKind::GenericSplit,
        SweepKind::WorkedExample,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::CountsIrred => "counts-irred",
            SweepKind::CountsRed => "counts-red",
            SweepKind::InjectivityIrred => "injectivity-irred",
            SweepKind::InjectivityRed => "injectivity-red",
            SweepKind::DetLaw => "det-law",
            SweepKind::Symmetry => "symmetry",
            SweepKind::QtableCrosscheck => "qtable-crosscheck",
            SweepKind::Nonempty => "nonempty",
            SweepKind::GenericSplit => "generic-split",
            SweepKind::WorkedExample => "worked-example",
        }
    }

    /// Whether the kind enumerates residues and so counts against the
    /// budget.
    pub fn sweeps_residues(&self) -> bool {
        !matches!(self, SweepKind::QtableCrosscheck | SweepKind::WorkedExample)
    }

    /// Kinds named by `s`; `counts`, `injectivity` and `all` expand to
    /// several.
    pub fn expand(s: &str) -> Option<Vec<SweepKind>> {
        Some(match s {
            "counts" => vec![SweepKind::CountsIrred, SweepKind::CountsRed],
            "injectivity" => vec![SweepKind::InjectivityIrred, SweepKind::InjectivityRed],
            "all" => SweepKind::ALL.to_vec(),
            other => vec![other.parse().ok()?],
        })
    }
}

impl FromStr for SweepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sweep kind '{s}'")))
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepBounds {
    pub ells: Vec<u64>,
    pub f_max: u32,
    /// Pairs with `ell^(2f)` above this are skipped.
    pub range_cap: u64,
    /// Upper limit on `sum ell^(2f) 2^f` over swept pairs.
    pub budget: u64,
    #[serde(skip)]
    pub parallel: bool,
}

impl SweepBounds {
    pub fn new(ells: Vec<u64>, f_max: u32) -> Self {
        SweepBounds {
            ells,
            f_max,
            range_cap: DEFAULT_RANGE_CAP,
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_range_cap(mut self, cap: u64) -> Self {
        self.range_cap = cap;
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    /// The `(ell, f)` pairs the sweep visits, in input order.
    pub fn pairs(&self) -> Result<Vec<FieldParams>> {
        let mut out = Vec::new();
        for &ell in &self.ells {
            for f in 1..=self.f_max {
                let width = ell.checked_pow(2 * f);
                if width.is_none_or(|w| w > self.range_cap) {
                    continue;
                }
                out.push(FieldParams::new(ell, f)?);
            }
        }
        Ok(out)
    }

    /// `sum ell^(2f) 2^f`, the number of window evaluations in one pass.
    pub fn cost(&self) -> Result<u64> {
        Ok(self
            .pairs()?
            .iter()
            .map(|p| (p.m_big() + 1).saturating_mul(1 << p.f()))
            .fold(0u64, u64::saturating_add))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub ell: u64,
    pub f: u32,
    pub datum: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeSummary {
    pub ell: u64,
    pub f: u32,
    pub data: u64,
    pub triples: u64,
    pub checks: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub kind: SweepKind,
    pub bounds: SweepBounds,
    pub ranges: Vec<RangeSummary>,
    pub checks: u64,
    pub mismatch_total: u64,
    pub mismatches: Vec<Mismatch>,
    /// Observations that are reported rather than judged.
    pub findings: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatch_total == 0
    }
}

#[derive(Default)]
struct Tally {
    data: u64,
    triples: u64,
    checks: u64,
    mismatch_total: u64,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn check(&mut self, ok: bool, make: impl FnOnce() -> Mismatch) {
        self.checks += 1;
        if !ok {
            self.mismatch_total += 1;
            if self.mismatches.len() < MISMATCH_CAP {
                self.mismatches.push(make());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.data += other.data;
        self.triples += other.triples;
        self.checks += other.checks;
        self.mismatch_total += other.mismatch_total;
        let room = MISMATCH_CAP - self.mismatches.len();
        self.mismatches
            .extend(other.mismatches.into_iter().take(room));
    }
}

fn run_chunks<F>(len: u64, parallel: bool, body: F) -> Tally
where
    F: Fn(Range<u64>, &mut Tally) + Sync,
{
    let mut total = Tally::default();
    if !parallel {
        body(0..len, &mut total);
        return total;
    }
    let starts: Vec<u64> = (0..len).step_by(CHUNK as usize).collect();
    let parts: Vec<Tally> = starts
        .par_iter()
        .map(|&s| {
            let mut t = Tally::default();
            body(s..(s + CHUNK).min(len), &mut t);
            t
        })
        .collect();
    for p in parts {
        total.merge(p);
    }
    total
}

type Key = (u64, u64, u32);

fn keys(raw: &[RawTriple]) -> Vec<Key> {
    let mut k: Vec<Key> = raw.iter().map(|t| (t.a, t.bcode, t.set.mask())).collect();
    k.sort_unstable();
    k
}

fn distinct_weights(raw: &[RawTriple]) -> usize {
    let mut w: Vec<(u64, u64)> = raw.iter().map(|t| (t.a, t.bcode)).collect();
    w.sort_unstable();
    w.dedup();
    w.len()
}

fn show(raw: &[RawTriple], p: &FieldParams) -> String {
    raw.iter()
        .map(|t| {
            let mut code = t.bcode;
            let b: Vec<String> = (0..p.f())
                .map(|_| {
                    let d = code % p.ell() + 1;
                    code /= p.ell();
                    d.to_string()
                })
                .collect();
            format!("(a={}, b=({}), B={})", t.a, b.join(","), t.set)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `(a, b, J)` after re-choosing the base embedding one step along
/// Frobenius, in the niveau-2 frame: `J` lives in `Z/2f` and the index
/// `f - 1` wraps to `f` (i.e. `0` outside `B`) or `2f - 1` wraps to `0`.
fn frobenius_key_irred(k: Key, p: &FieldParams) -> Key {
    let f = p.f();
    let full = p.full_subset().mask();
    let top = k.2 >> (f - 1) & 1;
    let mask = ((k.2 << 1) & full) | (1 - top);
    (
        (k.0 as u128 * p.ell() as u128 % p.m_minus() as u128) as u64,
        rotate_code(k.1, p),
        mask,
    )
}

fn frobenius_key_red(k: Key, p: &FieldParams) -> Key {
    (
        (k.0 as u128 * p.ell() as u128 % p.m_minus() as u128) as u64,
        rotate_code(k.1, p),
        SubsetB::from_mask(k.2, p.f())
            .expect("mask in range")
            .rotate(p.f())
            .mask(),
    )
}

fn rotate_code(code: u64, p: &FieldParams) -> u64 {
    let hi = p.pow(p.f() - 1);
    (code % hi) * p.ell() + code / hi
}

fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    (x as u128 * y as u128 % m as u128) as u64
}

fn mismatch(p: &FieldParams, datum: String, check: &str, detail: String) -> Mismatch {
    Mismatch {
        ell: p.ell(),
        f: p.f(),
        datum,
        check: check.into(),
        detail,
    }
}

fn irred_sweep<F>(p: &FieldParams, parallel: bool, per_datum: F) -> Tally
where
    F: Fn(u64, &[RawTriple], &mut Vec<RawTriple>, &mut Tally) + Sync,
{
    let e = IrredEnumerator::new(*p);
    run_chunks(p.m_big(), parallel, |range, t| {
        let mut raw = Vec::with_capacity(1 << p.f());
        let mut scratch = Vec::with_capacity(1 << p.f());
        for n in range {
            if n % p.m_plus() == 0 {
                continue;
            }
            raw.clear();
            e.raw(n, &mut raw);
            t.data += 1;
            t.triples += raw.len() as u64;
            per_datum(n, &raw, &mut scratch, t);
        }
    })
}

/// Visits every `(n1, n2)` when `all_pairs`, otherwise `(n1, 0)`.
fn red_sweep<F>(p: &FieldParams, parallel: bool, all_pairs: bool, per_datum: F) -> Tally
where
    F: Fn(u64, u64, &[RawTriple], &mut Vec<RawTriple>, &mut Tally) + Sync,
{
    let e = RedEnumerator::new(*p);
    let mm = p.m_minus();
    let len = if all_pairs { mm * mm } else { mm };
    run_chunks(len, parallel, |range, t| {
        let mut raw = Vec::with_capacity(2 << p.f());
        let mut scratch = Vec::with_capacity(2 << p.f());
        for k in range {
            let (n1, n2) = if all_pairs { (k / mm, k % mm) } else { (k, 0) };
            raw.clear();
            e.raw(n1, n2, &mut raw);
            t.data += 1;
            t.triples += raw.len() as u64;
            per_datum(n1, n2, &raw, &mut scratch, t);
        }
    })
}

fn pair_label(n1: u64, n2: u64) -> String {
    format!("n1={n1},n2={n2}")
}

fn sweep_counts_irred(p: &FieldParams, par: bool) -> Tally {
    let cf = IrredClosedForm::new(*p);
    irred_sweep(p, par, |n, raw, _, t| {
        let want = cf.count(n);
        t.check(raw.len() as u64 == want, || {
            mismatch(
                p,
                format!("n={n}"),
                "count",
                format!(
                    "enumerated {} [{}], closed form {want}",
                    raw.len(),
                    show(raw, p)
                ),
            )
        });
    })
}

fn sweep_counts_red(p: &FieldParams, par: bool, all_pairs: bool) -> Tally {
    let cf = RedClosedForm::new(*p);
    let mm = p.m_minus();
    red_sweep(p, par, all_pairs, |n1, n2, raw, _, t| {
        let want = cf.count((n1 + mm - n2) % mm);
        t.check(raw.len() as u64 == want, || {
            mismatch(
                p,
                pair_label(n1, n2),
                "count",
                format!(
                    "enumerated {} [{}], closed form {want}",
                    raw.len(),
                    show(raw, p)
                ),
            )
        });
    })
}

fn sweep_injectivity_irred(p: &FieldParams, par: bool) -> Tally {
    irred_sweep(p, par, |n, raw, _, t| {
        let d = NiveauTwoDatum::new(*p, n as i128).expect("valid by construction");
        let predicted = injectivity_fails_irred(&d);
        let actual = distinct_weights(raw) < raw.len();
        t.check(predicted.is_some() == actual, || {
            mismatch(
                p,
                format!("n={n}"),
                "injectivity",
                format!(
                    "criterion {predicted:?}, enumeration collapses: {actual} [{}]",
                    show(raw, p)
                ),
            )
        });
    })
}

fn sweep_injectivity_red(p: &FieldParams, par: bool) -> Tally {
    red_sweep(p, par, true, |n1, n2, raw, _, t| {
        let d = ReducibleDatum::new(*p, n1 as i128, n2 as i128, ExtClass::Split);
        let predicted = injectivity_fails_red(&d);
        let actual = distinct_weights(raw) < raw.len();
        t.check(predicted.is_some() == actual, || {
            mismatch(
                p,
                pair_label(n1, n2),
                "injectivity",
                format!(
                    "criterion {predicted:?}, enumeration collapses: {actual} [{}]",
                    show(raw, p)
                ),
            )
        });
    })
}

fn det_of(t: &RawTriple, p: &FieldParams) -> u64 {
    ((2 * t.a as u128 + t.b_value as u128) % p.m_minus() as u128) as u64
}

fn sweep_det_law(p: &FieldParams, par: bool) -> Tally {
    let mm = p.m_minus();
    let mut tally = irred_sweep(p, par, |n, raw, _, t| {
        for tr in raw {
            t.check(det_of(tr, p) == n % mm, || {
                mismatch(
                    p,
                    format!("n={n}"),
                    "det-irred",
                    show(std::slice::from_ref(tr), p),
                )
            });
        }
    });
    tally.merge(red_sweep(p, par, true, |n1, n2, raw, _, t| {
        for tr in raw {
            t.check(det_of(tr, p) == (n1 + n2) % mm, || {
                mismatch(
                    p,
                    pair_label(n1, n2),
                    "det-red",
                    show(std::slice::from_ref(tr), p),
                )
            });
        }
    }));
    tally
}

fn sweep_symmetry(p: &FieldParams, par: bool) -> Tally {
    let e_irr = IrredEnumerator::new(*p);
    let e_red = RedEnumerator::new(*p);
    let mm = p.m_minus();
    let mb = p.m_big();
    let full = p.full_subset().mask();
    let mut tally = irred_sweep(p, par, |n, raw, scratch, t| {
        let base = keys(raw);

        scratch.clear();
        e_irr.raw(mul_mod(n, p.q(), mb), scratch);
        let conj: Vec<Key> = {
            let mut k: Vec<Key> = base.iter().map(|&(a, b, s)| (a, b, !s & full)).collect();
            k.sort_unstable();
            k
        };
        t.check(keys(scratch) == conj, || {
            mismatch(
                p,
                format!("n={n}"),
                "conjugation",
                format!("[{}] vs [{}]", show(raw, p), show(scratch, p)),
            )
        });

        scratch.clear();
        e_irr.raw(mul_mod(n, p.ell(), mb), scratch);
        let mut frob: Vec<Key> = base.iter().map(|&k| frobenius_key_irred(k, p)).collect();
        frob.sort_unstable();
        t.check(keys(scratch) == frob, || {
            mismatch(
                p,
                format!("n={n}"),
                "frobenius-irred",
                format!("[{}] vs [{}]", show(raw, p), show(scratch, p)),
            )
        });

        scratch.clear();
        e_irr.raw((n + p.m_plus()) % mb, scratch);
        let mut tw: Vec<Key> = base.iter().map(|&(a, b, s)| ((a + 1) % mm, b, s)).collect();
        tw.sort_unstable();
        t.check(keys(scratch) == tw, || {
            mismatch(
                p,
                format!("n={n}"),
                "twist-irred",
                format!("[{}] vs [{}]", show(raw, p), show(scratch, p)),
            )
        });
    });
    tally.merge(red_sweep(p, par, true, |n1, n2, raw, scratch, t| {
        let base = keys(raw);

        scratch.clear();
        e_red.raw(n2, n1, scratch);
        let mut swap: Vec<Key> = base.iter().map(|&(a, b, s)| (a, b, !s & full)).collect();
        swap.sort_unstable();
        t.check(keys(scratch) == swap, || {
            mismatch(
                p,
                pair_label(n1, n2),
                "swap",
                format!("[{}] vs [{}]", show(raw, p), show(scratch, p)),
            )
        });

        scratch.clear();
        e_red.raw(mul_mod(n1, p.ell(), mm), mul_mod(n2, p.ell(), mm), scratch);
        let mut frob: Vec<Key> = base.iter().map(|&k| frobenius_key_red(k, p)).collect();
        frob.sort_unstable();
        t.check(keys(scratch) == frob, || {
            mismatch(
                p,
                pair_label(n1, n2),
                "frobenius-red",
                format!("[{}] vs [{}]", show(raw, p), show(scratch, p)),
            )
        });

        scratch.clear();
        e_red.raw((n1 + 1) % mm, (n2 + 1) % mm, scratch);
        let mut tw: Vec<Key> = base.iter().map(|&(a, b, s)| ((a + 1) % mm, b, s)).collect();
        tw.sort_unstable();
        t.check(keys(scratch) == tw, || {
            mismatch(
                p,
                pair_label(n1, n2),
                "twist-red",
                format!("[{}] vs [{}]", show(raw, p), show(scratch, p)),
            )
        });
    }));
    tally.merge(sweep_global_twist(p, par));
    tally
}

fn local_label(d: &LocalDatum) -> String {
    match d {
        LocalDatum::Irreducible(x) => format!("n={}", x.n().value()),
        LocalDatum::Reducible(x) => format!(
            "{} {}",
            pair_label(x.n1().value(), x.n2().value()),
            x.ext().name()
        ),
    }
}

/// Twist naturality of `global_weight_set` by `c = 1` (a generator of the
/// twist group) on single-prime data, through the public API.
///
/// Data are walked along twist orbits, so each set is computed once and
/// compared with the twist of its predecessor.
fn sweep_global_twist(p: &FieldParams, par: bool) -> Tally {
    let ell = p.ell();
    let mm = p.m_minus();
    let walk = |orbit: &mut dyn Iterator<Item = LocalDatum>, t: &mut Tally| {
        let items: Vec<LocalDatum> = orbit.collect();
        let sets: Vec<_> = items
            .iter()
            .map(|local| {
                let d = GlobalDatum::new(ell, vec![*local]).expect("one slot");
                (d.clone(), global_weight_set(&d))
            })
            .collect();
        for (i, (d, set)) in sets.iter().enumerate() {
            t.data += 1;
            let (next_d, next_set) = &sets[(i + 1) % sets.len()];
            let twisted_datum = twist_global(d, &[1]);
            let twisted_set = set
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|s| twist_weight_set(s, &[1]));
            let ok = twisted_datum.as_ref() == Ok(next_d)
                && matches!((&twisted_set, next_set), (Ok(a), Ok(b)) if a == b);
            t.check(ok, || {
                mismatch(
                    p,
                    local_label(&items[i]),
                    "twist-global",
                    format!("{twisted_set:?} vs {next_set:?}"),
                )
            });
        }
    };
    // Irreducible orbits: n, n + (q + 1), ... for representatives 1..=q.
    let mut tally = run_chunks(p.m_plus() - 1, par, |range, t| {
        for r in range {
            let mut orbit = (0..mm).map(|k| {
                let n = (r + 1 + k * p.m_plus()) % p.m_big();
                let d = NiveauTwoDatum::new(*p, n as i128).expect("n prime to q + 1");
                LocalDatum::Irreducible(d)
            });
            walk(&mut orbit, t);
        }
    });
    // Reducible orbits: (k, 0), (k + 1, 1), ... for each difference k.
    for ext in [ExtClass::Split, ExtClass::NonSplitUnknown] {
        tally.merge(run_chunks(mm, par, |range, t| {
            for k in range {
                let mut orbit = (0..mm).map(|j| {
                    let (n1, n2) = ((k + j) % mm, j);
                    let d = ReducibleDatum::new(*p, n1 as i128, n2 as i128, ext);
                    LocalDatum::Reducible(d)
                });
                walk(&mut orbit, t);
            }
        }));
    }
    tally
}

fn sweep_nonempty(p: &FieldParams, par: bool) -> Tally {
    let mut tally = irred_sweep(p, par, |n, raw, _, t| {
        t.check(!raw.is_empty(), || {
            mismatch(p, format!("n={n}"), "nonempty-irred", String::new())
        });
    });
    let top_code = p.q() - 1;
    tally.merge(red_sweep(p, par, true, |n1, n2, raw, _, t| {
        let d = ReducibleDatum::new(*p, n1 as i128, n2 as i128, ExtClass::NonSplitUnknown);
        let h1 = h1_dim(&d);
        let certain = raw
            .iter()
            .any(|tr| dim_report(tr.set, tr.bcode == top_code, &d).dim() == Some(h1));
        t.check(certain, || {
            mismatch(p, pair_label(n1, n2), "nonempty-certain", show(raw, p))
        });
    }));
    tally
}

fn sweep_generic_split(p: &FieldParams, par: bool) -> Tally {
    let want = 1usize << p.f();
    red_sweep(p, par, true, |n1, n2, raw, _, t| {
        let d = ReducibleDatum::new(*p, n1 as i128, n2 as i128, ExtClass::Split);
        if !is_generic(&d) {
            return;
        }
        let got = distinct_weights(raw);
        t.check(got == want, || {
            mismatch(
                p,
                pair_label(n1, n2),
                "generic-split",
                format!("|W_p| = {got} [{}]", show(raw, p)),
            )
        });
    })
}

fn sweep_qtable(ell: u64) -> Result<Tally> {
    let p = FieldParams::new(ell, 1)?;
    let mut t = Tally::default();
    for b in 1..ell {
        t.data += 1;
        let n2 = crosscheck_niveau2(ell, b)?;
        t.check(n2, || {
            mismatch(&p, format!("b={b}"), "niveau2", String::new())
        });
        let sp = crosscheck_split(ell, b)?;
        t.check(sp, || {
            mismatch(&p, format!("b={b}"), "split", String::new())
        });
    }
    for shape in QShape::all_legal(ell) {
        if let QVariant::Niveau1 { b, cls } = shape.variant {
            if cls != QClass::Split {
                let ok = crosscheck_nonsplit(&shape)?;
                t.check(ok, || {
                    mismatch(
                        &p,
                        format!("b={b} {cls:?}"),
                        "nonsplit-sandwich",
                        String::new(),
                    )
                });
            }
        }
    }
    Ok(t)
}

/// The `f = 3`, `n = 1` example for one odd `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorkedExample {
    pub ell: u64,
    pub wprime: usize,
    pub wp: usize,
    /// Both `(-ell^2, (1, ell, 1), {0,1})` and `(..., {0,2})` occur.
    pub shared_labels_present: bool,
}

impl WorkedExample {
    pub fn matches_printed(&self) -> bool {
        self.wprime == 8 && self.wp == 6 && self.shared_labels_present
    }
}

pub fn worked_example(ell: u64) -> Result<WorkedExample> {
    let p = FieldParams::new(ell, 3)?;
    let d = NiveauTwoDatum::new(p, 1)?;
    let labeled = enumerate_wprime_irred(&d);
    let v = canonical_weight(-(ell as i128 * ell as i128), &[1, ell as u32, 1], &p)?;
    let shared_labels_present = [[0u32, 1], [0, 2]].iter().all(|ix| {
        let set = SubsetB::from_indices(ix.iter().copied(), 3).expect("in range");
        labeled.iter().any(|l| l.weight == v && l.set == set)
    });
    Ok(WorkedExample {
        ell,
        wprime: labeled.len(),
        wp: wp_irred(&d).len(),
        shared_labels_present,
    })
}

/// Runs one sweep. Fails with `BudgetExceeded` before doing any work when
/// the bounds are too wide.
pub fn verify_sweep(kind: SweepKind, bounds: &SweepBounds) -> Result<VerificationReport> {
    let pairs = bounds.pairs()?;
    let needed = if kind.sweeps_residues() {
        bounds.cost()?
    } else {
        0
    };
    if needed > bounds.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: bounds.budget,
        });
    }
    let start = Instant::now();
    let par = bounds.parallel;
    let mut ranges = Vec::new();
    let mut total = Tally::default();
    let mut findings = Vec::new();
    let mut record = |ell: u64, f: u32, t: Tally, ranges: &mut Vec<RangeSummary>| {
        ranges.push(RangeSummary {
            ell,
            f,
            data: t.data,
            triples: t.triples,
            checks: t.checks,
            mismatches: t.mismatch_total,
        });
        total.merge(t);
    };
    match kind {
        SweepKind::QtableCrosscheck => {
            for &ell in &bounds.ells {
                record(ell, 1, sweep_qtable(ell)?, &mut ranges);
            }
        }
        SweepKind::WorkedExample => {
            for &ell in &bounds.ells {
                if ell == 2 {
                    continue;
                }
                let w = worked_example(ell)?;
                let mut t = Tally {
                    data: 1,
                    triples: w.wprime as u64,
                    ..Tally::default()
                };
                findings.push(format!(
                    "ell={}: |W'|={} |W_p|={} shared labels present: {}",
                    w.ell, w.wprime, w.wp, w.shared_labels_present
                ));
                if ell == 3 {
                    let p = FieldParams::new(3, 3)?;
                    t.check(w.matches_printed(), || {
                        mismatch(&p, "n=1".into(), "worked-example", format!("{w:?}"))
                    });
                } else if !w.matches_printed() {
                    findings.push(format!("ell={ell} departs from |W'|=8, |W_p|=6"));
                }
                record(ell, 3, t, &mut ranges);
            }
        }
        _ => {
            for p in &pairs {
                let t = match kind {
                    SweepKind::CountsIrred => sweep_counts_irred(p, par),
                    SweepKind::CountsRed => {
                        let mut t = sweep_counts_red(p, par, false);
                        t.merge(sweep_counts_red(p, par, true));
                        t
                    }
                    SweepKind::InjectivityIrred => sweep_injectivity_irred(p, par),
                    SweepKind::InjectivityRed => sweep_injectivity_red(p, par),
                    SweepKind::DetLaw => sweep_det_law(p, par),
                    SweepKind::Symmetry => sweep_symmetry(p, par),
                    SweepKind::Nonempty => sweep_nonempty(p, par),
                    SweepKind::GenericSplit => sweep_generic_split(p, par),
                    SweepKind::QtableCrosscheck | SweepKind::WorkedExample => unreachable!(),
                };
                record(p.ell(), p.f(), t, &mut ranges);
            }
        }
    }
    Ok(VerificationReport {
        kind,
        bounds: bounds.clone(),
        ranges,
        checks: total.checks,
        mismatch_total: total.mismatch_total,
        mismatches: total.mismatches,
        findings,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepBounds {
        SweepBounds::new(vec![2, 3, 5], 3).with_range_cap(20_000)
    }

    #[test]
    fn budget_is_checked_first() {
        let b = SweepBounds::new(vec![2, 3, 5, 7], 4);
        assert_eq!(b.cost().unwrap(), 4680 + 111_150 + 6_377_550 + 93_187_710);
        assert!(matches!(
            verify_sweep(SweepKind::CountsIrred, &b),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn pairs_respect_cap() {
        let b = SweepBounds::new(vec![13, 2], 4);
        let got: Vec<(u64, u32)> = b
            .pairs()
            .unwrap()
            .iter()
            .map(|p| (p.ell(), p.f()))
            .collect();
        assert_eq!(
            got,
            vec![(13, 1), (13, 2), (13, 3), (2, 1), (2, 2), (2, 3), (2, 4)]
        );
        assert!(SweepBounds::new(vec![4], 1).pairs().is_err());
    }

    #[test]
    fn every_kind_passes_small() {
        for kind in SweepKind::ALL {
            let r = verify_sweep(kind, &small()).unwrap();
            assert!(r.passed(), "{kind}: {:?}", r.mismatches);
            assert!(r.checks > 0, "{kind}");
        }
    }

    #[test]
    fn parallel_equals_serial() {
        for kind in [
            SweepKind::CountsRed,
            SweepKind::Symmetry,
            SweepKind::InjectivityIrred,
        ] {
            let a = verify_sweep(kind, &small()).unwrap();
            let b = verify_sweep(kind, &small().serial()).unwrap();
            assert_eq!(a.ranges, b.ranges);
            assert_eq!((a.checks, a.mismatch_total), (b.checks, b.mismatch_total));
            assert_eq!(
                serde_json::to_string(&a.ranges).unwrap(),
                serde_json::to_string(&b.ranges).unwrap()
            );
        }
    }

    #[test]
    fn kind_names_roundtrip() {
        for k in SweepKind::ALL {
            assert_eq!(k.name().parse::<SweepKind>().unwrap(), k);
        }
        assert_eq!(SweepKind::expand("counts").unwrap().len(), 2);
        assert!(SweepKind::expand("bogus").is_none());
    }

    #[test]
    fn mismatch_cap_merges_in_order() {
        let mut a = Tally::default();
        for i in 0..40 {
            a.check(false, || Mismatch {
                ell: 2,
                f: 1,
                datum: i.to_string(),
                check: "x".into(),
                detail: String::new(),
            });
        }
        let mut b = Tally::default();
        for i in 40..80 {
            b.check(false, || Mismatch {
                ell: 2,
                f: 1,
                datum: i.to_string(),
                check: "x".into(),
                detail: String::new(),
            });
        }
        a.merge(b);
        assert_eq!(a.mismatch_total, 80);
        assert_eq!(a.mismatches.len(), MISMATCH_CAP);
        assert_eq!(
            a.mismatches.last().unwrap().datum,
            (MISMATCH_CAP - 1).to_string()
        );
    }

    #[test]
    fn frobenius_key_matches_recipe() {
        let p = FieldParams::new(3, 2).unwrap();
        let e = IrredEnumerator::new(p);
        for n in [1u64, 2, 5, 7, 11] {
            let mut a = Vec::new();
            let mut b = Vec::new();
            e.raw(n, &mut a);
            e.raw(n * 3 % p.m_big(), &mut b);
            let mut mapped: Vec<Key> = keys(&a)
                .into_iter()
                .map(|k| frobenius_key_irred(k, &p))
                .collect();
            mapped.sort_unstable();
            assert_eq!(mapped, keys(&b));
        }
    }
}
