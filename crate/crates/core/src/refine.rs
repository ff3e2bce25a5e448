//! Truncated series in `u = q^{-1/2}` with coefficients in `Q[π²]`, and
//! the refinement step that turns known bounds on `N / q^{n-1}` into two
//! more half-orders of both the upper and the lower bound.
//!
//! Every series carries an O-order: `Σ_{i<o} c_i u^i + O(u^o)`. Operations
//! propagate it and never invent a coefficient at or beyond it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, rat_to_f64, rat_to_string, ratio, rpow, Rational};
use crate::ledger::{a_coef, pi_squared_lower, pi_squared_upper};

/// Element of `Q[π²]`: power of `π²` ↦ nonzero rational.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPi2(BTreeMap<u32, Rational>);

impl QPi2 {
    pub fn zero() -> Self {
        QPi2::default()
    }

    pub fn one() -> Self {
        QPi2::rational(Rational::one())
    }

    pub fn rational(r: Rational) -> Self {
        QPi2::from_parts([(0, r)])
    }

    /// `c · π²`.
    pub fn pi2(c: Rational) -> Self {
        QPi2::from_parts([(1, c)])
    }

    pub fn from_parts(parts: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut out = QPi2::zero();
        for (k, c) in parts {
            out.add_part(k, c);
        }
        out
    }

    fn add_part(&mut self, k: u32, c: Rational) {
        let entry = self.0.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of `π^{2k}`.
    pub fn part(&self, k: u32) -> Rational {
        self.0.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value when it does not involve `π`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.keys().max() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.part(0)),
            _ => None,
        }
    }

    pub fn add(&self, other: &QPi2) -> QPi2 {
        let mut out = self.clone();
        for (&k, c) in &other.0 {
            out.add_part(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> QPi2 {
        QPi2(self.0.iter().map(|(&k, c)| (k, -c)).collect())
    }

    pub fn sub(&self, other: &QPi2) -> QPi2 {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPi2) -> QPi2 {
        let mut out = QPi2::zero();
        for (&i, a) in &self.0 {
            for (&j, b) in &other.0 {
                out.add_part(i + j, a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> QPi2 {
        if c.is_zero() {
            return QPi2::zero();
        }
        QPi2(self.0.iter().map(|(&k, x)| (k, x * c)).collect())
    }

    pub fn to_f64(&self) -> f64 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        self.0
            .iter()
            .map(|(&k, c)| rat_to_f64(c) * pi2.powi(k as i32))
            .sum()
    }

    /// Rational enclosure of the value, from `98696/10^4 < π² < 98697/10^4`.
    pub fn enclosure(&self) -> (Rational, Rational) {
        let (l, u) = (pi_squared_lower(), pi_squared_upper());
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (&k, c) in &self.0 {
            let (pl, pu) = (rpow(&l, k), rpow(&u, k));
            if c.is_negative() {
                lo += c * &pu;
                hi += c * &pl;
            } else {
                lo += c * &pl;
                hi += c * &pu;
            }
        }
        (lo, hi)
    }

    /// Certified `self >= other`.
    pub fn certainly_ge(&self, other: &QPi2) -> bool {
        let diff = self.sub(other);
        !diff.enclosure().0.is_negative()
    }
}

impl From<Rational> for QPi2 {
    fn from(r: Rational) -> Self {
        QPi2::rational(r)
    }
}

impl fmt::Display for QPi2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&k, c) in &self.0 {
            let mag = c.abs();
            let body = match k {
                0 => rat_to_string(&mag),
                _ => {
                    let p = if k == 1 {
                        "pi^2".to_string()
                    } else {
                        format!("pi^{}", 2 * k)
                    };
                    if mag.is_one() {
                        p
                    } else {
                        format!("{}*{p}", rat_to_string(&mag))
                    }
                }
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => f.write_str(&body)?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// A multiple of 1/2, stored doubled.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(self) -> i32 {
        self.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `2`, `3/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("{s:?} is not a multiple of 1/2"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i32 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "1" => Ok(HalfInt(2 * n)),
                "2" => Ok(HalfInt(n)),
                _ => Err(bad()),
            };
        }
        if let Some((w, frac)) = s.split_once('.') {
            let w: i32 = w.parse().map_err(|_| bad())?;
            let sign = if s.starts_with('-') { -1 } else { 1 };
            return match frac.trim_end_matches('0') {
                "" => Ok(HalfInt(2 * w)),
                "5" => Ok(HalfInt(2 * w + sign)),
                _ => Err(bad()),
            };
        }
        s.parse::<i32>().map(HalfInt::from_int).map_err(|_| bad())
    }
}

/// `Σ c_i u^i + O(u^order)`, `order = None` for an exact (finite) series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSeries {
    terms: BTreeMap<i32, QPi2>,
    order: Option<i32>,
}

fn min_order(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl HalfSeries {
    pub fn new(terms: impl IntoIterator<Item = (i32, QPi2)>, order: Option<i32>) -> Self {
        let mut s = HalfSeries {
            terms: BTreeMap::new(),
            order,
        };
        for (i, c) in terms {
            s.add_term(i, c);
        }
        s
    }

    pub fn exact(terms: impl IntoIterator<Item = (i32, QPi2)>) -> Self {
        Self::new(terms, None)
    }

    pub fn constant(c: QPi2) -> Self {
        Self::exact([(0, c)])
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(QPi2::rational(c))
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `c u^i`.
    pub fn monomial(i: i32, c: Rational) -> Self {
        Self::exact([(i, QPi2::rational(c))])
    }

    /// `O(u^order)`.
    pub fn big_o(order: i32) -> Self {
        Self::new([], Some(order))
    }

    /// The seed `1 + O(u)`.
    pub fn seed() -> Self {
        Self::new([(0, QPi2::one())], Some(1))
    }

    fn add_term(&mut self, i: i32, c: QPi2) {
        if self.order.is_some_and(|o| i >= o) {
            return;
        }
        let entry = self.terms.entry(i).or_default();
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&i);
        }
    }

    /// First exponent whose coefficient is unknown; `None` if exact.
    pub fn order(&self) -> Option<i32> {
        self.order
    }

    pub fn o_order(&self) -> Option<HalfInt> {
        self.order.map(HalfInt::from_twice)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &QPi2)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    /// Coefficient of `u^i`; fails at or beyond the O-order.
    pub fn coefficient(&self, i: i32) -> Result<QPi2> {
        if let Some(o) = self.order {
            if i >= o {
                return Err(Error::InsufficientOrder {
                    have: o,
                    need: i + 1,
                });
            }
        }
        Ok(self.terms.get(&i).cloned().unwrap_or_default())
    }

    /// Lowest exponent carrying information (a nonzero term or the O-term).
    fn valuation(&self) -> Option<i32> {
        min_order(self.terms.keys().next().copied(), self.order)
    }

    pub fn add(&self, other: &HalfSeries) -> HalfSeries {
        let order = min_order(self.order, other.order);
        HalfSeries::new(
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(&i, c)| (i, c.clone())),
            order,
        )
    }

    pub fn neg(&self) -> HalfSeries {
        HalfSeries::new(self.terms.iter().map(|(&i, c)| (i, c.neg())), self.order)
    }

    pub fn sub(&self, other: &HalfSeries) -> HalfSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QPi2) -> HalfSeries {
        if c.is_zero() {
            return HalfSeries::exact([]);
        }
        HalfSeries::new(self.terms.iter().map(|(&i, x)| (i, x.mul(c))), self.order)
    }

    pub fn scale_rational(&self, c: &Rational) -> HalfSeries {
        self.scale(&QPi2::rational(c.clone()))
    }

    pub fn mul(&self, other: &HalfSeries) -> HalfSeries {
        let cross = |o: Option<i32>, v: Option<i32>| match (o, v) {
            (Some(o), Some(v)) => Some(o + v),
            _ => None,
        };
        let order = min_order(
            cross(self.order, other.valuation()),
            cross(other.order, self.valuation()),
        );
        let mut out = HalfSeries::new([], order);
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                out.add_term(i + j, a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HalfSeries {
        (0..e).fold(HalfSeries::one(), |acc, _| acc.mul(self))
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i32) -> HalfSeries {
        HalfSeries::new(
            self.terms.iter().map(|(&i, c)| (i + k, c.clone())),
            self.order.map(|o| o + k),
        )
    }

    /// Forgets everything from `u^order` on.
    pub fn truncate(&self, order: i32) -> HalfSeries {
        HalfSeries::new(
            self.terms.iter().map(|(&i, c)| (i, c.clone())),
            min_order(self.order, Some(order)),
        )
    }

    /// `1 / self` up to `O(u^max_order)`; needs a nonzero rational constant
    /// term and no negative exponents.
    pub fn reciprocal(&self, max_order: i32) -> Result<HalfSeries> {
        if self.terms.keys().next().is_some_and(|&i| i < 0) || self.order.is_some_and(|o| o <= 0) {
            return Err(Error::NonUnitLeading);
        }
        let c0 = self
            .terms
            .get(&0)
            .and_then(QPi2::as_rational)
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonUnitLeading)?;
        let inv0 = c0.recip();
        let target = min_order(self.order, Some(max_order)).expect("bounded");
        let mut b: Vec<QPi2> = Vec::with_capacity(target.max(0) as usize);
        for i in 0..target {
            let mut acc = if i == 0 {
                QPi2::rational(Rational::one())
            } else {
                QPi2::zero()
            };
            for j in 1..=i {
                if let Some(a) = self.terms.get(&j) {
                    acc = acc.sub(&a.mul(&b[(i - j) as usize]));
                }
            }
            b.push(acc.scale(&inv0));
        }
        Ok(HalfSeries::new(
            b.into_iter().enumerate().map(|(i, c)| (i as i32, c)),
            Some(target),
        ))
    }

    /// Value of the known part at `u`.
    pub fn eval(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&i, c)| c.to_f64() * u.powi(i))
            .sum()
    }

    /// Value of the known part at `u = q^{-1/2}`.
    pub fn eval_at_q(&self, q: f64) -> f64 {
        self.eval(q.sqrt().recip())
    }
}

impl fmt::Display for HalfSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (&i, c) in &self.terms {
            let cs = c.to_string();
            let compound = c.0.len() > 1;
            let (neg, mag) = match (compound, cs.strip_prefix('-')) {
                (false, Some(rest)) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let coef = if compound { format!("({mag})") } else { mag };
            let body = match i {
                0 => coef,
                _ => {
                    let var = if i == 1 {
                        "u".to_string()
                    } else {
                        format!("u^{i}")
                    };
                    if coef == "1" {
                        var
                    } else {
                        format!("{coef}{var}")
                    }
                }
            };
            parts.push(if neg {
                format!("- {body}")
            } else {
                format!("+ {body}")
            });
        }
        if let Some(o) = self.order {
            parts.push(match o {
                0 => "+ O(1)".to_string(),
                1 => "+ O(u)".to_string(),
                _ => format!("+ O(u^{o})"),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let joined = parts.join(" ");
        let s = joined
            .strip_prefix("+ ")
            .map(str::to_string)
            .unwrap_or_else(|| format!("-{}", &joined[2..]));
        f.write_str(&s)
    }
}

/// `Σ_{m=1}^{d-1} m^{-s}`.
fn harmonic(d: u32, s: u32) -> Rational {
    (1..d as i64).map(|m| rpow(&ratio(1, m), s)).sum()
}

fn check_input(s: &HalfSeries, what: &str) -> Result<i32> {
    let o = s
        .order()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} bound must carry an O-term")))?;
    if o < 1 {
        return Err(Error::InsufficientOrder { have: o, need: 1 });
    }
    if s.coefficient(0)? != QPi2::one() {
        return Err(Error::InvalidArgument(format!(
            "{what} bound must start with 1"
        )));
    }
    Ok(o)
}

/// One upper-bound step on `N / q^{n-1}` as a series in `u`.
///
/// Chebyshev bounds `P(count >= a_k) <= σ²/(a_k - μ)²` with `σ² <= μ <= qU`,
/// then Abel summation against `b_k - b_{k-1}` (`q + d² + d` for `k = 2`,
/// `q` after), plus the `q²` atom.
pub fn refine_upper(upper: &HalfSeries, d: u32, relax_pi: bool) -> Result<HalfSeries> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let o = check_input(upper, "upper")?;
    let target = o + 2;
    let a = int(a_coef(d));
    let e = int(d as i64 * d as i64 + d as i64 + 1);
    let one = HalfSeries::one();

    // (a_k - qU)/q = (k-1) - δ with δ = A u + E u² + (U - 1)
    let delta = HalfSeries::monomial(1, a.clone())
        .add(&HalfSeries::monomial(2, e))
        .add(&upper.sub(&one));

    // Σ_{m=1}^{d-1} 1/(m - δ)² = Σ_i (i+1) δ^i H_{i+2}, and the extra
    // (d² + d) u² / (1 - δ)² from b_2 - b_1
    let terms = o;
    let mut bracket = HalfSeries::exact([]);
    if d >= 2 {
        let mut delta_pow = HalfSeries::one();
        let mut plain = HalfSeries::exact([]);
        for i in 0..terms {
            let weight = int(i as i64 + 1);
            let h = if i == 0 && relax_pi {
                QPi2::pi2(ratio(1, 6))
            } else {
                QPi2::rational(harmonic(d, i as u32 + 2))
            };
            bracket = bracket.add(&delta_pow.scale(&h.scale(&weight)));
            plain = plain.add(&delta_pow.scale_rational(&weight));
            delta_pow = delta_pow.mul(&delta);
        }
        let extra = plain
            .shift(2)
            .scale_rational(&int(d as i64 * d as i64 + d as i64));
        bracket = bracket.add(&extra).truncate(terms);
    }
    let tails = bracket.mul(upper).shift(2);

    // p∞ b∞ <= U u⁴ / (1 - U u²)²
    let gap = one.sub(&upper.shift(2));
    let inv = gap.reciprocal(target)?;
    let p_inf = upper.mul(&inv).mul(&inv).shift(4);

    let b1 = HalfSeries::exact([(0, QPi2::one()), (1, QPi2::rational(a)), (2, QPi2::one())]);
    Ok(b1.add(&tails).add(&p_inf).truncate(target))
}

/// One lower-bound step: a plane is bad when its count is at most `d²/4`;
/// `P(bad) <= σ²/(μ - d²/4)²`, and every good plane has at least `a_1` points.
pub fn refine_lower(
    upper: &HalfSeries,
    lower: &HalfSeries,
    d: u32,
    _relax_pi: bool,
) -> Result<HalfSeries> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let ou = check_input(upper, "upper")?;
    let ol = check_input(lower, "lower")?;
    let target = ou.min(ol) + 2;
    let quarter = HalfSeries::monomial(2, ratio(d as i64 * d as i64, 4));
    let inv = lower.sub(&quarter).reciprocal(target)?;
    let bad = upper.mul(&inv).mul(&inv).shift(2);
    let a1 = HalfSeries::exact([
        (0, QPi2::one()),
        (1, QPi2::rational(int(-a_coef(d)))),
        (2, QPi2::rational(int(1 - d as i64))),
    ]);
    Ok(HalfSeries::one().sub(&bad).mul(&a1).truncate(target))
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub j: HalfInt,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
}

#[derive(Clone, Debug)]
pub struct RefinementTable {
    pub d: u32,
    pub relax_pi: bool,
    pub upper: HalfSeries,
    pub lower: HalfSeries,
    pub iterations: u32,
}

impl RefinementTable {
    /// Largest half-integer `r` with all `C^{(j)}`, `D^{(j)}`, `j <= r`, known.
    pub fn r(&self) -> HalfInt {
        let o = self
            .upper
            .order()
            .unwrap_or(0)
            .min(self.lower.order().unwrap_or(0));
        HalfInt::from_twice(o - 1)
    }

    /// `C_d^{(j)}`: coefficient of `q^{n-1-j}` in the upper bound.
    pub fn c(&self, j: HalfInt) -> Result<QPi2> {
        self.upper.coefficient(j.twice())
    }

    /// `D_d^{(j)}`: the lower bound is `q^{n-1} - Σ D^{(j)} q^{n-1-j}`.
    pub fn d_coef(&self, j: HalfInt) -> Result<QPi2> {
        Ok(self.lower.coefficient(j.twice())?.neg())
    }

    pub fn rows(&self) -> Vec<TableRow> {
        (1..=self.r().twice())
            .map(|t| {
                let j = HalfInt::from_twice(t);
                TableRow {
                    j,
                    c: self.c(j).expect("known").to_string(),
                    d: self.d_coef(j).expect("known").to_string(),
                }
            })
            .collect()
    }

    pub fn report(&self, r_max: HalfInt) -> RefineReport {
        RefineReport {
            schema: 1,
            d: self.d,
            rmax: r_max,
            relax_pi: self.relax_pi,
            iterations: self.iterations,
            r: self.r(),
            upper: self.upper.to_string(),
            lower: self.lower.to_string(),
            table: self.rows(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RefineReport {
    pub schema: u32,
    pub d: u32,
    pub rmax: HalfInt,
    pub relax_pi: bool,
    pub iterations: u32,
    pub r: HalfInt,
    pub upper: String,
    pub lower: String,
    pub table: Vec<TableRow>,
}

/// Runs the refinement from `1 + O(u)` until the O-order exceeds `r_max`.
pub fn iterate(r_max: HalfInt, d: u32, relax_pi: bool) -> Result<RefinementTable> {
    if r_max.twice() < 0 {
        return Err(Error::InvalidArgument("r_max must be >= 0".into()));
    }
    let mut upper = HalfSeries::seed();
    let mut lower = HalfSeries::seed();
    let mut iterations = 0;
    while upper.order().expect("seeded") <= r_max.twice() {
        let next_upper = refine_upper(&upper, d, relax_pi)?;
        lower = refine_lower(&upper, &lower, d, relax_pi)?;
        upper = next_upper;
        iterations += 1;
    }
    Ok(RefinementTable {
        d,
        relax_pi,
        upper,
        lower,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(r: Rational) -> QPi2 {
        QPi2::rational(r)
    }

    fn one_plus_pi_sixth() -> QPi2 {
        QPi2::from_parts([(0, int(1)), (1, ratio(1, 6))])
    }

    #[test]
    fn qpi2_arithmetic_and_display() {
        let x = one_plus_pi_sixth();
        assert_eq!(x.sub(&QPi2::one()), QPi2::pi2(ratio(1, 6)));
        assert_eq!(x.to_string(), "1 + 1/6*pi^2");
        assert_eq!(
            QPi2::from_parts([(0, ratio(35, 2)), (1, ratio(1, 6))]).to_string(),
            "35/2 + 1/6*pi^2"
        );
        assert_eq!(
            QPi2::from_parts([(0, int(1)), (1, ratio(-1, 6))]).to_string(),
            "1 - 1/6*pi^2"
        );
        assert_eq!(QPi2::zero().to_string(), "0");
        assert_eq!(x.mul(&x).part(2), ratio(1, 36));
        assert!((x.to_f64() - (1.0 + std::f64::consts::PI.powi(2) / 6.0)).abs() < 1e-12);
        assert!(x.certainly_ge(&q(ratio(264, 100))));
        assert!(!x.certainly_ge(&q(ratio(265, 100))));
    }

    #[test]
    fn halfint_parsing() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.25".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(5).to_string(), "5/2");
    }

    #[test]
    fn geometric_series() {
        let s = HalfSeries::exact([(0, QPi2::one()), (1, q(int(-1)))]);
        let r = s.reciprocal(3).unwrap();
        assert_eq!(r.to_string(), "1 + u + u^2 + O(u^3)");
        assert_eq!(r.mul(&r).to_string(), "1 + 2u + 3u^2 + O(u^3)");
        assert_eq!(r.mul(&s).to_string(), "1 + O(u^3)");
    }

    #[test]
    fn o_absorption() {
        let a = HalfSeries::seed();
        let b = HalfSeries::new([(0, QPi2::one()), (1, QPi2::one())], Some(2));
        assert_eq!(a.mul(&b).to_string(), "1 + O(u)");
        assert_eq!(a.add(&b).order(), Some(1));
        // u^2 O(u) = O(u^3)
        assert_eq!(HalfSeries::big_o(1).shift(2).order(), Some(3));
        assert_eq!(
            HalfSeries::exact([]).mul(&HalfSeries::big_o(0)).order(),
            None
        );
    }

    #[test]
    fn reciprocal_errors() {
        assert_eq!(
            HalfSeries::monomial(1, int(1)).reciprocal(3),
            Err(Error::NonUnitLeading)
        );
        assert_eq!(
            HalfSeries::constant(QPi2::pi2(int(1))).reciprocal(3),
            Err(Error::NonUnitLeading)
        );
        assert_eq!(
            HalfSeries::big_o(0).reciprocal(3),
            Err(Error::NonUnitLeading)
        );
    }

    #[test]
    fn insufficient_order() {
        let e = refine_upper(&HalfSeries::new([], Some(0)), 3, true);
        assert_eq!(e, Err(Error::InsufficientOrder { have: 0, need: 1 }));
        assert!(HalfSeries::seed().coefficient(1).is_err());
    }

    #[test]
    fn first_iteration_d3() {
        let up = refine_upper(&HalfSeries::seed(), 3, true).unwrap();
        assert_eq!(up.to_string(), "1 + 2u + (1 + 1/6*pi^2)u^2 + O(u^3)");
        let lo = refine_lower(&HalfSeries::seed(), &HalfSeries::seed(), 3, true).unwrap();
        assert_eq!(lo.to_string(), "1 - 2u - 3u^2 + O(u^3)");
    }

    #[test]
    fn exact_sums_small_degrees() {
        let up = refine_upper(&HalfSeries::seed(), 2, false).unwrap();
        assert_eq!(up.coefficient(1).unwrap(), QPi2::zero());
        assert_eq!(up.coefficient(2).unwrap(), q(int(2)));
        let up1 = refine_upper(&HalfSeries::seed(), 1, false).unwrap();
        assert_eq!(up1.to_string(), "1 + u^2 + O(u^3)");
        let lo1 = refine_lower(&HalfSeries::seed(), &HalfSeries::seed(), 1, false).unwrap();
        assert_eq!(lo1.to_string(), "1 - u^2 + O(u^3)");
        // d = 3 exact: H = 1 + 1/4
        let up3 = refine_upper(&HalfSeries::seed(), 3, false).unwrap();
        assert_eq!(up3.coefficient(2).unwrap(), q(ratio(9, 4)));
    }

    #[test]
    fn second_iteration_lower_d3() {
        let t = iterate(HalfInt::from_int(2), 3, true).unwrap();
        assert_eq!(t.iterations, 2);
        assert_eq!(t.d_coef(HalfInt::from_twice(3)).unwrap(), q(int(4)));
        assert_eq!(
            t.d_coef(HalfInt::from_int(2)).unwrap(),
            QPi2::from_parts([(0, ratio(35, 2)), (1, ratio(1, 6))])
        );
        let rows = t.rows();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3].d, "35/2 + 1/6*pi^2");
    }

    #[test]
    fn closed_forms_for_d_2_to_10() {
        for d in 2..=10u32 {
            let a = int(a_coef(d));
            let t1 = iterate(HalfInt::from_int(1), d, true).unwrap();
            let half = HalfInt::from_twice(1);
            let one = HalfInt::from_int(1);
            assert_eq!(t1.c(half).unwrap(), q(a.clone()));
            assert_eq!(t1.d_coef(half).unwrap(), q(a.clone()));
            assert_eq!(t1.c(one).unwrap(), one_plus_pi_sixth());
            assert_eq!(t1.d_coef(one).unwrap(), q(int(d as i64)));
            let t2 = iterate(HalfInt::from_int(2), d, true).unwrap();
            assert_eq!(t2.d_coef(HalfInt::from_twice(3)).unwrap(), q(int(2) * &a));
            let dd = int(d as i64);
            let expected = QPi2::from_parts([
                (0, int(2) * &a * &a + &dd * &dd / int(2) + &dd + int(2)),
                (1, ratio(1, 6)),
            ]);
            assert_eq!(
                t2.d_coef(HalfInt::from_int(2)).unwrap(),
                expected,
                "d = {d}"
            );
        }
    }

    #[test]
    fn truncation_stability() {
        for d in 1..=6 {
            let t1 = iterate(HalfInt::from_int(1), d, true).unwrap();
            let t2 = iterate(HalfInt::from_int(2), d, true).unwrap();
            for tw in 0..=2 {
                let j = HalfInt::from_twice(tw);
                assert_eq!(t1.c(j).unwrap(), t2.c(j).unwrap());
                assert_eq!(t1.d_coef(j).unwrap(), t2.d_coef(j).unwrap());
            }
        }
        assert_eq!(
            iterate(HalfInt::from_int(0), 3, true).unwrap().iterations,
            0
        );
        assert_eq!(
            iterate(HalfInt::from_twice(1), 3, true).unwrap().iterations,
            1
        );
        assert_eq!(
            iterate(HalfInt::from_int(3), 3, true).unwrap().iterations,
            3
        );
    }

    #[test]
    fn relaxation_only_weakens() {
        for d in 2..=8 {
            let relaxed = iterate(HalfInt::from_int(2), d, true).unwrap();
            let exact = iterate(HalfInt::from_int(2), d, false).unwrap();
            for tw in 1..=4 {
                let j = HalfInt::from_twice(tw);
                assert!(
                    relaxed.c(j).unwrap().certainly_ge(&exact.c(j).unwrap()),
                    "C d={d} j={j}"
                );
                assert!(
                    relaxed
                        .d_coef(j)
                        .unwrap()
                        .certainly_ge(&exact.d_coef(j).unwrap()),
                    "D d={d} j={j}"
                );
            }
        }
    }

    #[test]
    fn numeric_sanity() {
        let t = iterate(HalfInt::from_int(2), 3, true).unwrap();
        for qv in [1e4, 1e6] {
            assert!(t.upper.eval_at_q(qv) > t.lower.eval_at_q(qv));
        }
    }

    #[test]
    fn report_json_shape() {
        let t = iterate(HalfInt::from_int(2), 3, true).unwrap();
        let v = serde_json::to_value(t.report(HalfInt::from_int(2))).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["table"][2]["j"], "3/2");
        assert_eq!(v["table"][2]["D"], "4");
        assert_eq!(v["table"][1]["C"], "1 + 1/6*pi^2");
    }
}
