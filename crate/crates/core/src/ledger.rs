//! Interval systems for slice counts, explicit point-count bounds as exact
//! predicates, threshold helpers and the proof-constant verifier.
//!
//! All verdicts are exact: endpoints are surds `r + s√q`, and the
//! `d^{13/3}` terms are compared after clearing the cube root.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    big, cmp_with_cube_root, dec, int, rat_to_f64, rat_to_string, ratio, rational_root_floor, rpow,
    RatPoly, Rational, Surd,
};
use crate::gf::prime_power_decomposition;
use crate::mpoly::Setting;

/// `(d-1)(d-2)`, the genus-like coefficient of `√q`.
pub fn a_coef(d: u32) -> i64 {
    (d as i64 - 1) * (d as i64 - 2)
}

fn e_coef(d: u32) -> i64 {
    let d = d as i64;
    d * d + d + 1
}

/// A rational strictly above `π²`, used wherever a verdict needs `π²`.
pub fn pi_squared_upper() -> Rational {
    ratio(98_697, 10_000)
}

pub fn pi_squared_lower() -> Rational {
    ratio(98_696, 10_000)
}

// ---------------------------------------------------------------------------
// Interval system

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntervalFlags {
    /// Replace `b_d` by the Schwartz–Zippel bound `d q` (`d q + 1` projectively).
    pub schwartz_zippel_bd: bool,
    /// Merge `I_0` and `I_1` into `J_1`.
    pub merge_j: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bin {
    K(u32),
    Infinity,
}

impl fmt::Display for Bin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bin::K(k) => write!(f, "{k}"),
            Bin::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Bin {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Bin(Bin),
    OutOfInterval,
}

#[derive(Clone, Debug)]
pub struct IntervalSystem {
    q: u64,
    d: u32,
    setting: Setting,
    flags: IntervalFlags,
    lo: Vec<Surd>,
    hi: Vec<Surd>,
    infinity: u64,
}

impl IntervalSystem {
    pub fn new(q: u64, d: u32, setting: Setting, flags: IntervalFlags) -> Result<Self> {
        if prime_power_decomposition(q).is_none() {
            return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        let r = int(q as i64);
        let qq = int(q as i64);
        let a = int(a_coef(d));
        let e = int(e_coef(d));
        let widen = match setting {
            Setting::Affine => int(0),
            Setting::Projective => int(d as i64),
        };
        let mut lo = vec![Surd::from_int(0, r.clone())];
        let mut hi = vec![Surd::rational(ratio((d * d) as i64, 4), r.clone())];
        let a1_const = match setting {
            Setting::Affine => &qq - int(d as i64) + int(1),
            Setting::Projective => &qq + int(1),
        };
        lo.push(Surd::new(a1_const, -a.clone(), r.clone()));
        hi.push(Surd::new(&qq + int(1), a.clone(), r.clone()));
        for k in 2..=d {
            let kq = int(k as i64) * &qq;
            lo.push(Surd::new(&kq - &e, -a.clone(), r.clone()));
            hi.push(Surd::new(&kq + &e + &widen, a.clone(), r.clone()));
        }
        if flags.schwartz_zippel_bd {
            let extra = match setting {
                Setting::Affine => 0,
                Setting::Projective => 1,
            };
            hi[d as usize] = Surd::from_int((d as u64 * q) as i64 + extra, r.clone());
        }
        let infinity = match setting {
            Setting::Affine => q * q,
            Setting::Projective => q * q + q + 1,
        };
        Ok(IntervalSystem {
            q,
            d,
            setting,
            flags,
            lo,
            hi,
            infinity,
        })
    }

    pub fn affine(q: u64, d: u32) -> Result<Self> {
        Self::new(q, d, Setting::Affine, IntervalFlags::default())
    }

    pub fn projective(q: u64, d: u32) -> Result<Self> {
        Self::new(q, d, Setting::Projective, IntervalFlags::default())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn flags(&self) -> IntervalFlags {
        self.flags
    }

    /// Left endpoint `a_k` of `I_k`.
    pub fn a(&self, k: u32) -> &Surd {
        &self.lo[k as usize]
    }

    /// Right endpoint `b_k` of `I_k`.
    pub fn b(&self, k: u32) -> &Surd {
        &self.hi[k as usize]
    }

    pub fn infinity_point(&self) -> u64 {
        self.infinity
    }

    /// The same endpoints with `J_1 = I_0 ∪ I_1`.
    pub fn with_merge_j(&self) -> Self {
        let mut s = self.clone();
        s.flags.merge_j = true;
        s
    }

    /// Bins in ascending order with their constituent closed intervals.
    pub fn bins(&self) -> Vec<(Bin, Vec<(Surd, Surd)>)> {
        let r = int(self.q as i64);
        let mut out = Vec::new();
        for k in 0..=self.d {
            let iv = (self.lo[k as usize].clone(), self.hi[k as usize].clone());
            if self.flags.merge_j && k == 0 {
                continue;
            }
            if self.flags.merge_j && k == 1 {
                let i0 = (self.lo[0].clone(), self.hi[0].clone());
                out.push((Bin::K(1), vec![i0, iv]));
            } else {
                out.push((Bin::K(k), vec![iv]));
            }
        }
        let inf = Surd::from_int(self.infinity as i64, r);
        out.push((Bin::Infinity, vec![(inf.clone(), inf)]));
        out
    }

    /// Whether distinct bins have disjoint unions of intervals.
    pub fn is_disjoint(&self) -> bool {
        let bins = self.bins();
        for (i, (_, ivs1)) in bins.iter().enumerate() {
            for (_, ivs2) in &bins[i + 1..] {
                for (l1, h1) in ivs1 {
                    for (l2, h2) in ivs2 {
                        let overlap = l1.cmp_surd(h2) != Ordering::Greater
                            && l2.cmp_surd(h1) != Ordering::Greater;
                        if overlap {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Whether `J_1, …, J_d` (and `J_∞`) are pairwise disjoint.
    pub fn j_disjoint(&self) -> bool {
        self.with_merge_j().is_disjoint()
    }

    fn contains(ivs: &[(Surd, Surd)], c: &Rational) -> bool {
        ivs.iter().any(|(l, h)| {
            l.cmp_rational(c) != Ordering::Greater && h.cmp_rational(c) != Ordering::Less
        })
    }

    /// Every bin whose intervals contain `c`.
    pub fn membership(&self, c: u64) -> Vec<Bin> {
        let c = big(c);
        self.bins()
            .into_iter()
            .filter(|(_, ivs)| Self::contains(ivs, &c))
            .map(|(b, _)| b)
            .collect()
    }

    /// The unique bin containing `c`. Fails when `c` lies in two bins, so
    /// overlapping systems still classify counts outside the overlaps.
    pub fn classify_count(&self, c: u64) -> Result<Classification> {
        match self.membership(c).as_slice() {
            [] => Ok(Classification::OutOfInterval),
            [b] => Ok(Classification::Bin(*b)),
            _ => Err(Error::IntervalOverlap),
        }
    }

    /// Lowest bin containing `c`, without the disjointness requirement.
    pub fn classify_lenient(&self, c: u64) -> Classification {
        match self.membership(c).first() {
            Some(&b) => Classification::Bin(b),
            None => Classification::OutOfInterval,
        }
    }

    pub fn report(&self) -> IntervalsReport {
        let intervals = self
            .bins()
            .into_iter()
            .flat_map(|(bin, ivs)| {
                ivs.into_iter().map(move |(l, h)| IntervalEntry {
                    bin,
                    lo: l.to_string(),
                    hi: h.to_string(),
                    lo_f64: l.to_f64(),
                    hi_f64: h.to_f64(),
                })
            })
            .collect();
        IntervalsReport {
            schema: 1,
            q: self.q,
            d: self.d,
            setting: self.setting,
            flags: self.flags,
            intervals,
            infinity: self.infinity,
            disjoint: self.is_disjoint(),
            j_disjoint: self.j_disjoint(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalEntry {
    pub bin: Bin,
    pub lo: String,
    pub hi: String,
    pub lo_f64: f64,
    pub hi_f64: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalsReport {
    pub schema: u32,
    pub q: u64,
    pub d: u32,
    pub setting: Setting,
    pub flags: IntervalFlags,
    pub intervals: Vec<IntervalEntry>,
    pub infinity: u64,
    pub disjoint: bool,
    pub j_disjoint: bool,
}

// ---------------------------------------------------------------------------
// Thresholds

/// `q > 15 d^{13/3}`, i.e. `q^3 > 3375 d^13`.
pub fn q_exceeds_cm(q: u64, d: u32) -> bool {
    BigInt::from(q).pow(3) > BigInt::from(3375) * BigInt::from(d).pow(13)
}

/// `r(d)^2 = 8A^2 + 2E + 4A√(4A^2 + 2E)` with `E = d^2 + d + 13`.
pub fn zone_root_squared(d: u32) -> Surd {
    let a = int(a_coef(d));
    let e = int((d as i64) * (d as i64) + d as i64 + 13);
    let radicand = int(4) * &a * &a + int(2) * &e;
    Surd::new(int(8) * &a * &a + int(2) * e, int(4) * a, radicand)
}

/// `q > r(d)^2`, the regime of the forbidden-interval theorem.
pub fn q_in_zone(q: u64, d: u32) -> bool {
    let r2 = zone_root_squared(d);
    r2.cmp_rational(&big(q)) == Ordering::Less
}

/// `4(d-1)(d-2)√q + 2(d^2 + d + 13)` as a surd over `q`.
pub fn zone_disjointness_value(q: u64, d: u32) -> Surd {
    let e = (d as i64) * (d as i64) + d as i64 + 13;
    Surd::new(int(2 * e), int(4 * a_coef(d)), int(q as i64))
}

fn next_prime_power_above(x: f64) -> Option<u64> {
    if !(x.is_finite()) || x > 1e10 {
        return None;
    }
    let mut q = x.floor().max(1.0) as u64;
    loop {
        q += 1;
        if prime_power_decomposition(q).is_some() {
            return Some(q);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdSet {
    pub schema: u32,
    pub d: u32,
    /// `15 d^{13/3}` for display.
    pub cm_threshold: f64,
    /// `(15 d^{13/3})^3 = 3375 d^13`, exact.
    pub cm_threshold_cubed: String,
    pub first_prime_power_above_cm: Option<u64>,
    pub zone_root: f64,
    pub zone_root_squared: String,
    pub zone_root_squared_f64: f64,
    pub first_prime_power_in_zone: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at_q: Option<ThresholdAtQ>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdAtQ {
    pub q: u64,
    pub exceeds_cm: bool,
    pub in_zone: bool,
    pub disjointness_value: String,
    pub disjointness_value_f64: f64,
    pub disjointness_holds: bool,
}

pub fn thresholds(d: u32, q: Option<u64>) -> ThresholdSet {
    let cm = 15.0 * (d as f64).powf(13.0 / 3.0);
    let r2 = zone_root_squared(d);
    let first_cm = next_prime_power_above(cm).map(|mut q| {
        // the float estimate may sit just below an exact boundary
        while !q_exceeds_cm(q, d) {
            q = next_prime_power_above(q as f64).expect("small");
        }
        q
    });
    let first_zone = next_prime_power_above(r2.to_f64()).map(|mut q| {
        while !q_in_zone(q, d) {
            q = next_prime_power_above(q as f64).expect("small");
        }
        q
    });
    let at_q = q.map(|q| {
        let v = zone_disjointness_value(q, d);
        ThresholdAtQ {
            q,
            exceeds_cm: q_exceeds_cm(q, d),
            in_zone: q_in_zone(q, d),
            disjointness_value: v.to_string(),
            disjointness_value_f64: v.to_f64(),
            disjointness_holds: v.cmp_rational(&big(q)) == Ordering::Less,
        }
    });
    ThresholdSet {
        schema: 1,
        d,
        cm_threshold: cm,
        cm_threshold_cubed: (BigInt::from(3375) * BigInt::from(d).pow(13)).to_string(),
        first_prime_power_above_cm: first_cm,
        zone_root: r2.to_f64().sqrt(),
        zone_root_squared: r2.to_string(),
        zone_root_squared_f64: r2.to_f64(),
        first_prime_power_in_zone: first_zone,
        at_q,
    }
}

// ---------------------------------------------------------------------------
// Bound report

#[derive(Clone, Debug, Serialize)]
pub struct BoundInputs {
    #[serde(rename = "N")]
    pub count: u128,
    pub q: u64,
    pub d: u32,
    pub n: usize,
    pub setting: Setting,
    /// Caller's claim; gates every bound that assumes it.
    pub geometrically_irreducible: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Satisfied,
    Violated,
    #[serde(rename = "n/a")]
    NotApplicable,
    /// Asymptotic statement; see the refine module.
    Series,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: &'static str,
    pub statement: String,
    pub condition: String,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_f64: Option<f64>,
    pub status: BoundStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema: u32,
    pub inputs: BoundInputs,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn any_violated(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.status == BoundStatus::Violated)
    }
}

struct Ctx {
    n_count: Rational,
    q: Rational,
    /// `q^{n-2}`
    p: Rational,
    a: Rational,
    d: u32,
}

impl Ctx {
    fn surd(&self, rational: Rational, sqrt_coef: Rational) -> Surd {
        Surd::new(rational, sqrt_coef, self.q.clone())
    }

    /// `q^{n-1} + s·A q^{n-3/2} + c q^{n-2}`.
    fn main_term(&self, s: i64, c: &Rational) -> Surd {
        self.surd(&self.p * &self.q + &self.p * c, int(s) * &self.a * &self.p)
    }
}

fn verdict(ok: bool) -> BoundStatus {
    if ok {
        BoundStatus::Satisfied
    } else {
        BoundStatus::Violated
    }
}

fn surd_entry(
    name: &str,
    kind: &'static str,
    statement: &str,
    condition: &str,
    applicable: bool,
    rhs: Surd,
    n_count: &Rational,
) -> BoundEntry {
    let ok = match kind {
        "upper" => rhs.cmp_rational(n_count) != Ordering::Less,
        _ => rhs.cmp_rational(n_count) != Ordering::Greater,
    };
    BoundEntry {
        name: name.into(),
        kind,
        statement: statement.into(),
        condition: condition.into(),
        applicable,
        rhs: Some(rhs.to_string()),
        rhs_f64: Some(rhs.to_f64()),
        status: if applicable {
            verdict(ok)
        } else {
            BoundStatus::NotApplicable
        },
    }
}

fn series_entry(name: &str, statement: &str) -> BoundEntry {
    BoundEntry {
        name: name.into(),
        kind: "series",
        statement: statement.into(),
        condition: "asymptotic in q; series - see refine module".into(),
        applicable: false,
        rhs: None,
        rhs_f64: None,
        status: BoundStatus::Series,
    }
}

fn affine_entries(ctx: &Ctx, inp: &BoundInputs, out: &mut Vec<BoundEntry>) {
    let gi = inp.geometrically_irreducible;
    let d = ctx.d;
    let n = inp.n;
    let gi_cond = "X geometrically irreducible";

    // Aubry–Perret, plane curves
    let ap = n == 2 && gi;
    out.push(surd_entry(
        "aubry_perret_upper",
        "upper",
        "N <= q + (d-1)(d-2) sqrt(q) + 1",
        "n = 2, X geometrically irreducible",
        ap,
        ctx.main_term(1, &int(1)),
        &ctx.n_count,
    ));
    out.push(surd_entry(
        "aubry_perret_lower",
        "lower",
        "N >= q - (d-1)(d-2) sqrt(q) - d + 1",
        "n = 2, X geometrically irreducible",
        ap,
        ctx.main_term(-1, &int(1 - d as i64)),
        &ctx.n_count,
    ));

    // Lang–Weil with C_d = 12 (d+3)^{n+1}
    let gl = int(12) * rpow(&int(d as i64 + 3), n as u32 + 1);
    out.push(surd_entry(
        "gl_upper",
        "upper",
        "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + 12 (d+3)^{n+1} q^{n-2}",
        gi_cond,
        gi,
        ctx.main_term(1, &gl),
        &ctx.n_count,
    ));
    out.push(surd_entry(
        "gl_lower",
        "lower",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - 12 (d+3)^{n+1} q^{n-2}",
        gi_cond,
        gi,
        ctx.main_term(-1, &-gl),
        &ctx.n_count,
    ));

    // C_d = 5 d^{13/3}: compare the excess against 5 q^{n-2} d^{13/3}
    let c = int(5) * &ctx.p;
    let k = big(BigInt::from(d).pow(13));
    let d133 = (d as f64).powf(13.0 / 3.0);
    let zero = int(0);
    for (name, kind, statement, excess) in [
        (
            "cm_upper",
            "upper",
            "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + 5 d^{13/3} q^{n-2}",
            ctx.surd(&ctx.n_count - &ctx.p * &ctx.q, -&ctx.a * &ctx.p),
        ),
        (
            "cm_lower",
            "lower",
            "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - 5 d^{13/3} q^{n-2}",
            ctx.surd(&ctx.p * &ctx.q - &ctx.n_count, -&ctx.a * &ctx.p),
        ),
    ] {
        let ok = cmp_with_cube_root(&excess, &c, &k) != Ordering::Greater;
        let s = if kind == "upper" { 1 } else { -1 };
        let base = ctx.main_term(s, &zero).to_f64();
        out.push(BoundEntry {
            name: name.into(),
            kind,
            statement: statement.into(),
            condition: gi_cond.into(),
            applicable: gi,
            rhs: Some(format!(
                "{} {} 5*{}*d^(13/3)",
                ctx.main_term(s, &zero),
                if s > 0 { "+" } else { "-" },
                rat_to_string(&ctx.p)
            )),
            rhs_f64: Some(base + s as f64 * 5.0 * rat_to_f64(&ctx.p) * d133),
            status: if gi {
                verdict(ok)
            } else {
                BoundStatus::NotApplicable
            },
        });
    }

    let above_cm = q_exceeds_cm(inp.q, d);
    let cm_cond = "X geometrically irreducible, q > 15 d^{13/3}";
    let cm_small = int(5 * (d as i64) * (d as i64) + d as i64 + 1);
    out.push(surd_entry(
        "cm_refined_upper",
        "upper",
        "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + (5d^2+d+1) q^{n-2}",
        cm_cond,
        gi && above_cm,
        ctx.main_term(1, &cm_small),
        &ctx.n_count,
    ));
    out.push(surd_entry(
        "cm_refined_lower",
        "lower",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - (5d^2+d+1) q^{n-2}",
        cm_cond,
        gi && above_cm,
        ctx.main_term(-1, &-cm_small),
        &ctx.n_count,
    ));
    out.push(surd_entry(
        "explicit_upper_5",
        "upper",
        "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + 5 q^{n-2}",
        cm_cond,
        gi && above_cm,
        ctx.main_term(1, &int(5)),
        &ctx.n_count,
    ));
    out.push(surd_entry(
        "explicit_lower_d_plus_0_6",
        "lower",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - (d+0.6) q^{n-2}",
        cm_cond,
        gi && above_cm,
        ctx.main_term(-1, &-(int(d as i64) + dec("0.6"))),
        &ctx.n_count,
    ));

    // forbidden interval: N <= rhs5 implies N <= rhs6
    let zone = q_in_zone(inp.q, d);
    let rhs5 = ctx.surd(
        ratio(3, 2) * &ctx.p * &ctx.q - int(e_coef(d)) * &ctx.p,
        -&ctx.a * &ctx.p,
    );
    let rhs6 = ctx.main_term(1, &int(12));
    let below5 = rhs5.cmp_rational(&ctx.n_count) != Ordering::Less;
    let below6 = rhs6.cmp_rational(&ctx.n_count) != Ordering::Less;
    out.push(BoundEntry {
        name: "forbidden_interval".into(),
        kind: "forbidden_interval",
        statement: "N <= (3/2) q^{n-1} - (d-1)(d-2) q^{n-3/2} - (d^2+d+1) q^{n-2} implies \
                    N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + 12 q^{n-2}"
            .into(),
        condition: "q > r(d)^2".into(),
        applicable: zone,
        rhs: Some(format!("({rhs6}, {rhs5}]")),
        rhs_f64: Some(rhs5.to_f64()),
        status: if zone {
            verdict(!below5 || below6)
        } else {
            BoundStatus::NotApplicable
        },
    });

    out.push(series_entry(
        "asymptotic_upper_pi",
        "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + (1 + pi^2/6) q^{n-2} + O_d(q^{n-5/2})",
    ));
    out.push(series_entry(
        "asymptotic_lower_d",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - d q^{n-2} - O_d(q^{n-5/2})",
    ));
    out.push(series_entry(
        "asymptotic_lower_long",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - d q^{n-2} - 2(d-1)(d-2) q^{n-5/2} \
         - (2(d-1)^2(d-2)^2 + d^2/2 + d + 2 + pi^2/6) q^{n-3} - O_d(q^{n-7/2})",
    ));
    out.push(series_entry(
        "prior_lower_d_plus_2",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - (d+2+eps) q^{n-2} for q >> 1",
    ));
    out.push(series_entry(
        "prior_upper_2d_plus_1",
        "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + ((2+eps) d + 1 + eps') q^{n-2} for q >> 1",
    ));
}

fn projective_entries(ctx: &Ctx, inp: &BoundInputs, out: &mut Vec<BoundEntry>) {
    let ap = inp.n == 2 && inp.geometrically_irreducible;
    let cond = "n = 2, X geometrically irreducible";
    out.push(surd_entry(
        "aubry_perret_projective_upper",
        "upper",
        "N <= q + 1 + (d-1)(d-2) sqrt(q)",
        cond,
        ap,
        ctx.main_term(1, &int(1)),
        &ctx.n_count,
    ));
    out.push(surd_entry(
        "aubry_perret_projective_lower",
        "lower",
        "N >= q + 1 - (d-1)(d-2) sqrt(q)",
        cond,
        ap,
        ctx.main_term(-1, &int(1)),
        &ctx.n_count,
    ));
    out.push(series_entry(
        "projective_asymptotic_lower",
        "N >= q^{n-1} - (d-1)(d-2) q^{n-3/2} - O_d(q^{n-5/2})",
    ));
    out.push(series_entry(
        "projective_asymptotic_upper",
        "N <= q^{n-1} + (d-1)(d-2) q^{n-3/2} + (1 + pi^2/6) q^{n-2} + O_d(q^{n-5/2})",
    ));
}

/// Evaluates every explicit bound at the given count.
pub fn bound_report(inputs: BoundInputs) -> Result<BoundReport> {
    if inputs.n < 2 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be >= 2".into(),
        ));
    }
    if inputs.d == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    if prime_power_decomposition(inputs.q).is_none() {
        return Err(Error::InvalidArgument(format!(
            "{} is not a prime power",
            inputs.q
        )));
    }
    let q = int(inputs.q as i64);
    let ctx = Ctx {
        n_count: big(inputs.count),
        p: rpow(&q, inputs.n as u32 - 2),
        q,
        a: int(a_coef(inputs.d)),
        d: inputs.d,
    };
    let mut entries = Vec::new();
    match inputs.setting {
        Setting::Affine => affine_entries(&ctx, &inputs, &mut entries),
        Setting::Projective => projective_entries(&ctx, &inputs, &mut entries),
    }
    Ok(BoundReport {
        schema: 1,
        inputs,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Proof-constant verifier

#[derive(Clone, Debug, Serialize)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub statement: String,
    pub passed: bool,
    /// First failing `d` (or `q`), if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    pub schema: u32,
    pub d_max: u32,
    pub checks: Vec<ConstantCheck>,
    pub all_passed: bool,
}

impl ConstantsReport {
    pub fn check(&self, name: &str) -> Option<&ConstantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `15 d^{13/3} > λ ((d-1)(d-2) √15 d^{13/6} + C)`, decided exactly.
///
/// With `t = √15 d^{13/6}` this is `t^2 - λA t - λC > 0`, i.e. `t > ρ` for
/// the positive root `ρ`, i.e. `3375 d^13 = t^6 > ρ^6`.
pub fn cm_ratio_exceeds(d: u32, lambda: &Rational, c: &Rational) -> bool {
    let (lf, af, cf) = (rat_to_f64(lambda), a_coef(d) as f64, rat_to_f64(c));
    let t = 15f64.sqrt() * (d as f64).powf(13.0 / 6.0);
    let rho = (lf * af + (lf * lf * af * af + 4.0 * lf * cf).sqrt()) / 2.0;
    clear_verdict(t, rho).unwrap_or_else(|| cm_ratio_exceeds_exact(d, lambda, c))
}

fn cm_ratio_exceeds_exact(d: u32, lambda: &Rational, c: &Rational) -> bool {
    let a = int(a_coef(d));
    let la = lambda * &a;
    let radicand = &la * &la + int(4) * lambda * c;
    let rho = Surd::new(&la / int(2), ratio(1, 2), radicand);
    let rho6 = rho.pow(6);
    let t6 = big(BigInt::from(3375) * BigInt::from(d).pow(13));
    Surd::new(t6 - rho6.a, -rho6.b, rho6.r).is_positive()
}

/// `lhs > rhs` from `f64` values carrying at most a few ulps of relative
/// error each; `None` when the margin is too thin to trust.
fn clear_verdict(lhs: f64, rhs: f64) -> Option<bool> {
    const MARGIN: f64 = 1e-9;
    if !(lhs.is_finite() && rhs.is_finite() && lhs > 0.0 && rhs > 0.0) {
        return None;
    }
    if lhs > rhs * (1.0 + MARGIN) {
        Some(true)
    } else if lhs < rhs * (1.0 - MARGIN) {
        Some(false)
    } else {
        None
    }
}

/// Smallest `d0 = 2^j` from which `15 d^{13/3} > λ(√15 d^{25/6} + K d^2)` is
/// certified: with `s = d^{1/6} >= L`, `15 s^14 - λU s^13 - λK` has
/// non-negative Taylor coefficients at `L` (`U >= √15`). Since
/// `(d-1)(d-2) <= d^2` and `C(d) <= K d^2`, this dominates the real check.
fn cm_tail_start(lambda: &Rational, k: &Rational) -> Option<u32> {
    let u = ratio(3873, 1000);
    let mut coeffs = vec![Rational::zero(); 15];
    coeffs[0] = -(lambda * k);
    coeffs[13] = -(lambda * &u);
    coeffs[14] = int(15);
    let phi = RatPoly(coeffs);
    let mut d0: u32 = 2;
    while d0 < (1 << 30) {
        let l = rational_root_floor(&int(d0 as i64), 6);
        if phi.positive_from(&l) {
            return Some(d0);
        }
        d0 *= 2;
    }
    None
}

fn sweep<F: Fn(u32) -> bool + Sync>(from: u32, to: u32, pred: F) -> Option<u32> {
    use rayon::prelude::*;
    (from..=to).into_par_iter().find_first(|&d| !pred(d))
}

fn cm_family_check(
    name: &'static str,
    statement: &str,
    d_max: u32,
    lambda: Rational,
    c_of: fn(u32) -> Rational,
    k: Rational,
) -> ConstantCheck {
    let tail = cm_tail_start(&lambda, &k);
    let (passed, witness, detail) = match tail {
        None => (false, None, "no tail certificate found".to_string()),
        Some(d0) => {
            let upto = d_max.max(d0);
            let fail = sweep(2, upto, |d| cm_ratio_exceeds(d, &lambda, &c_of(d)));
            (
                fail.is_none(),
                fail.map(u64::from),
                format!(
                    "exact for d in [2, {upto}]; certified for d >= {d0} via C(d) <= {} d^2",
                    rat_to_string(&k)
                ),
            )
        }
    };
    ConstantCheck {
        name,
        statement: statement.into(),
        passed,
        witness,
        detail,
    }
}

fn poly_tail_check(
    name: &'static str,
    statement: &str,
    d_max: u32,
    pred: impl Fn(u32) -> bool + Sync,
    tail_poly: RatPoly,
    tail_from: u32,
) -> ConstantCheck {
    let certified = tail_poly.positive_from(&int(tail_from as i64));
    let upto = d_max.max(tail_from);
    let fail = sweep(2, upto, pred);
    ConstantCheck {
        name,
        statement: statement.into(),
        passed: certified && fail.is_none(),
        witness: fail.map(u64::from),
        detail: format!(
            "exact for d in [2, {upto}]; polynomial tail {} from d = {tail_from}",
            if certified {
                "certified"
            } else {
                "NOT certified"
            }
        ),
    }
}

fn scalar_check(
    name: &'static str,
    statement: &str,
    passed: bool,
    detail: String,
) -> ConstantCheck {
    ConstantCheck {
        name,
        statement: statement.into(),
        passed,
        witness: None,
        detail,
    }
}

/// `c q / (a q - b)^2 < bound` at `q0` and `q ↦ c q/(a q - b)^2` decreasing
/// for `q >= q0` (derivative numerator `-(a q + b) < 0`, needs `a q0 > b`).
fn decreasing_tail(
    c: &Rational,
    a: &Rational,
    b: &Rational,
    q0: u64,
    bound: &Rational,
) -> (bool, Rational) {
    let q = big(q0);
    let denom = a * &q - b;
    let value = c * &q / (&denom * &denom);
    let ok = denom.is_positive() && b >= &Rational::zero() && &value < bound;
    (ok, value)
}

/// Checks every numeric constant of the explicit proofs for `d` in
/// `[2, d_max]`, with tail certificates beyond.
#[allow(clippy::vec_init_then_push)]
pub fn verify_proof_constants(d_max: u32) -> Result<ConstantsReport> {
    if d_max < 2 {
        return Err(Error::InvalidArgument("d_max must be >= 2".into()));
    }
    let mut checks = Vec::new();

    checks.push(cm_family_check(
        "g_exceeds_7_44",
        "15d^{13/3} / ((d-1)(d-2) sqrt(15) d^{13/6} + 5d^2+d+1) > 7.44, giving q + (d-1)(d-2)sqrt(q) + 5d^2+d+1 <= (8.44/7.44) q",
        d_max,
        dec("7.44"),
        |d| int(5 * (d as i64).pow(2) + d as i64 + 1),
        int(6),
    ));
    checks.push(cm_family_check(
        "j_intervals_disjoint_above_cm",
        "q > 2((d-1)(d-2) sqrt(q) + d^2+d+1) whenever q > 15d^{13/3}",
        d_max,
        int(2),
        |d| int((d as i64).pow(2) + d as i64 + 1),
        int(2),
    ));
    checks.push(cm_family_check(
        "gap_ratio_5_45_over_7_45",
        "(k-1)q - 2(d-1)(d-2) sqrt(q) - 2(3d^2+d+1) >= (5.45/7.45)(k-1)q for q > 15d^{13/3} (k = 2 suffices)",
        d_max,
        dec("7.45"),
        |d| int(3 * (d as i64).pow(2) + d as i64 + 1),
        int(4),
    ));
    checks.push(cm_family_check(
        "gap_ratio_6_44_over_7_44",
        "q - (d-1)(d-2) sqrt(q) - 21d^2/4 - d - 1 >= (6.44/7.44) q for q > 15d^{13/3}",
        d_max,
        dec("7.44"),
        |d| ratio(21 * (d as i64).pow(2), 4) + int(d as i64 + 1),
        ratio(25, 4),
    ));

    let v = dec("8.44") / dec("7.44");
    let g = dec("5.45") / dec("7.45");
    let tail_const = &v / (&g * &g);
    checks.push(scalar_check(
        "tail_constant_2_12",
        "(8.44/7.44) / (5.45/7.45)^2 < 2.12",
        tail_const < dec("2.12"),
        format!("value = {:.6}", rat_to_f64(&tail_const)),
    ));

    let chain = BigInt::from(3375) * BigInt::from(2).pow(13);
    let q302 = BigInt::from(302).pow(3);
    checks.push(scalar_check(
        "cm_threshold_exceeds_302",
        "15 * 2^{13/3} > 302, i.e. 3375 * 2^13 > 302^3",
        chain > q302,
        format!("{chain} > {q302}"),
    ));

    // p_inf b_inf = (8.44/7.44) q^3 / (q^2 - (8.44/7.44) q)^2 = 8.44*7.44 q / (7.44 q - 8.44)^2
    let (ok, val) = decreasing_tail(
        &(dec("8.44") * dec("7.44")),
        &dec("7.44"),
        &dec("8.44"),
        303,
        &dec("0.01"),
    );
    let q = int(303);
    let direct = &v * rpow(&q, 3) / rpow(&(&q * &q - &v * &q), 2);
    checks.push(scalar_check(
        "p_inf_b_inf_below_0_01",
        "8.44*7.44 q / (7.44 q - 8.44)^2 < 0.01 for q >= 303",
        ok && direct == val,
        format!("value at q = 303: {:.6}; decreasing in q", rat_to_f64(&val)),
    ));

    // (d^2+d)^3 < 0.027 d^13 is (d^2+d)/(15 d^{13/3}) < 0.02 cubed
    let mut p = vec![Rational::zero(); 14];
    p[13] = dec("0.027");
    let dd = RatPoly::from_ints(&[0, 1, 1]);
    let cube = dd.mul(&dd).mul(&dd);
    let tail_poly = RatPoly(p).add(&RatPoly(cube.0.iter().map(|c| -c).collect()));
    checks.push(poly_tail_check(
        "b2_increment_below_0_02",
        "(d^2+d) / (15 d^{13/3}) < 0.02",
        d_max,
        |d| {
            let d = BigInt::from(d);
            let lhs = big((&d * &d + &d).pow(3));
            lhs < dec("0.027") * big(d.pow(13))
        },
        tail_poly,
        2,
    ));

    let pi2 = pi_squared_upper();
    let final5 = int(1) + dec("2.12") * (&pi2 / int(6) + dec("0.02")) + dec("0.01");
    checks.push(scalar_check(
        "explicit_upper_constant_5",
        "1 + 2.12(pi^2/6 + 0.02) + 0.01 < 5",
        final5 < int(5),
        format!("value < {:.6} (pi^2 < 9.8697)", rat_to_f64(&final5)),
    ));

    let r2 = zone_root_squared(2);
    let r2_is_38 = r2.as_rational() == Some(int(38));
    let next = (39..).find(|&q| prime_power_decomposition(q).is_some());
    checks.push(scalar_check(
        "zone_root_r2_squared_38",
        "r(2)^2 = 38, so q >= 41",
        r2_is_38 && next == Some(41),
        format!("r(2)^2 = {r2}; next prime power {}", next.unwrap_or(0)),
    ));

    // (d^2+d)/r(d)^2 < 0.16; tail via r(d)^2 >= 8A^2
    let a_poly = RatPoly::from_ints(&[2, -3, 1]);
    let a2 = a_poly.mul(&a_poly);
    let zone_tail = RatPoly(a2.0.iter().map(|c| c * dec("1.28")).collect())
        .add(&RatPoly::from_ints(&[0, -1, -1]));
    checks.push(poly_tail_check(
        "zone_ratio_below_0_16",
        "(d^2+d) / r(d)^2 < 0.16",
        d_max,
        |d| {
            let r2 = zone_root_squared(d);
            let dd = int((d as i64) * (d as i64) + d as i64);
            r2.scale(&dec("0.16")).add_rational(&-dd).is_positive()
        },
        zone_tail,
        4,
    ));

    let (ok, val) = decreasing_tail(&int(6), &int(2), &int(3), 41, &dec("0.04"));
    let q = int(41);
    let th = ratio(3, 2);
    let direct = &th * rpow(&q, 3) / rpow(&(&q * &q - &th * &q), 2);
    checks.push(scalar_check(
        "zone_p_inf_b_inf_below_0_04",
        "6q / (2q - 3)^2 < 0.04 for q >= 41",
        ok && direct == val,
        format!("value at q = 41: {:.6}; decreasing in q", rat_to_f64(&val)),
    ));

    let six = ratio(3, 2) / rpow(&ratio(1, 2), 2);
    checks.push(scalar_check(
        "zone_tail_constant_6",
        "(3/2) / (1/2)^2 = 6",
        six == int(6),
        format!("value = {}", rat_to_string(&six)),
    ));

    let final12 = int(1) + int(6) * (&pi2 / int(6) + dec("0.16")) + dec("0.04");
    checks.push(scalar_check(
        "zone_constant_12",
        "1 + 6(pi^2/6 + 0.16) + 0.04 < 12",
        final12 < int(12),
        format!("value < {:.6}", rat_to_f64(&final12)),
    ));

    let w = dec("6.44") / dec("7.44");
    let bad = &v / (&w * &w);
    checks.push(scalar_check(
        "bad_plane_1_6",
        "(8.44/7.44) / (6.44/7.44)^2 <= 1.6",
        bad <= dec("1.6"),
        format!("value = {:.6}", rat_to_f64(&bad)),
    ));

    checks.push(final_lower_step_check(d_max));

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(ConstantsReport {
        schema: 1,
        d_max,
        checks,
        all_passed,
    })
}

/// `(1 - 1.6/q)(q - A√q - d + 1) - (q - A√q - d - 0.6)`, expanded in
/// `s = q^{-1/2}`, has non-negative coefficients for every `d`.
fn final_lower_step_check(d_max: u32) -> ConstantCheck {
    let c = dec("1.6");
    let fail = sweep(2, d_max, |d| {
        let a = int(a_coef(d));
        let dm1 = int(d as i64 - 1);
        // exponents of s from -2 to 2, stored at index e + 2
        let lhs_b = [int(1), -a.clone(), -dm1.clone()];
        let mut diff = vec![Rational::zero(); 5];
        for (i, b) in lhs_b.iter().enumerate() {
            diff[i] += b;
            diff[i + 2] -= &c * b;
        }
        diff[0] -= int(1);
        diff[1] += &a;
        diff[2] += int(d as i64) + dec("0.6");
        diff.iter().all(|x| !x.is_negative())
    });
    ConstantCheck {
        name: "explicit_lower_final_step",
        statement:
            "(1 - 1.6/q)(q - (d-1)(d-2) sqrt(q) - d + 1) >= q - (d-1)(d-2) sqrt(q) - (d + 0.6)"
                .into(),
        passed: fail.is_none(),
        witness: fail.map(u64::from),
        detail: format!(
            "difference = 1.6 A q^(-1/2) + 1.6 (d-1) q^(-1), checked for d in [2, {d_max}]"
        ),
    }
}
