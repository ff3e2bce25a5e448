//! Random and exhaustive plane slicing.
//!
//! Planes are kept in reduced row echelon form, so equal planes have equal
//! frames and "uniform" means uniform over distinct planes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{
    count_affine_with, count_projective_with, count_projective_zeros, count_zeros, CountOptions,
};
use crate::error::{Error, Result};
use crate::exact::{big, rat_to_f64, rat_to_string, Rational, Surd};
use crate::gf::{Elem, Field};
use crate::ledger::{Bin, Classification, IntervalSystem};
use crate::mpoly::{restrict_to_plane, Hypersurface, Setting};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaneFrame {
    /// `{base + s·dirs[0] + w·dirs[1]}` in `A^n`.
    Affine {
        base: Vec<Elem>,
        dirs: [Vec<Elem>; 2],
    },
    /// Row span of a `3 × (n+1)` matrix in `P^n`.
    Projective { rows: [Vec<Elem>; 3] },
}

/// Row-reduces in place; returns the pivot columns.
fn rref(field: &Field, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl PlaneFrame {
    pub fn setting(&self) -> Setting {
        match self {
            PlaneFrame::Affine { .. } => Setting::Affine,
            PlaneFrame::Projective { .. } => Setting::Projective,
        }
    }

    /// The unique RREF representative; fails on rank-deficient frames.
    pub fn canonicalize(&self, field: &Field) -> Result<PlaneFrame> {
        match self {
            PlaneFrame::Affine { base, dirs } => {
                let mut rows = dirs.to_vec();
                let pivots = rref(field, &mut rows);
                if pivots.len() < 2 {
                    return Err(Error::InvalidArgument(
                        "direction vectors are dependent".into(),
                    ));
                }
                let mut base = base.clone();
                for (row, &c) in rows.iter().zip(&pivots) {
                    let f = base[c];
                    if !f.is_zero() {
                        for (b, &x) in base.iter_mut().zip(row) {
                            *b = field.sub(*b, field.mul(f, x));
                        }
                    }
                }
                let [d0, d1]: [Vec<Elem>; 2] = rows.try_into().expect("two rows");
                Ok(PlaneFrame::Affine {
                    base,
                    dirs: [d0, d1],
                })
            }
            PlaneFrame::Projective { rows } => {
                let mut m = rows.to_vec();
                if rref(field, &mut m).len() < 3 {
                    return Err(Error::InvalidArgument(
                        "plane matrix is not of full rank".into(),
                    ));
                }
                let rows: [Vec<Elem>; 3] = m.try_into().expect("three rows");
                Ok(PlaneFrame::Projective { rows })
            }
        }
    }

    pub fn is_canonical(&self, field: &Field) -> bool {
        self.canonicalize(field).is_ok_and(|c| &c == self)
    }

    /// Whether the (affine or projective) point lies on the plane.
    pub fn contains(&self, field: &Field, point: &[Elem]) -> bool {
        match self {
            PlaneFrame::Affine { base, dirs } => {
                let diff: Vec<Elem> = point
                    .iter()
                    .zip(base)
                    .map(|(&p, &b)| field.sub(p, b))
                    .collect();
                let mut m = vec![dirs[0].clone(), dirs[1].clone(), diff];
                rref(field, &mut m).len() == 2
            }
            PlaneFrame::Projective { rows } => {
                let mut m = rows.to_vec();
                m.push(point.to_vec());
                rref(field, &mut m).len() == 3
            }
        }
    }
}

/// `[n choose k]_q`, the number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n - i) - 1u32;
        den *= q.pow(k - i) - 1u32;
    }
    num / den
}

/// Number of distinct planes in `A^n(F_q)` or `P^n(F_q)`.
pub fn plane_census(n: usize, q: u64, setting: Setting) -> BigUint {
    let n = n as u32;
    match setting {
        Setting::Affine => BigUint::from(q).pow(n - 2) * gaussian_binomial(n, 2, q),
        Setting::Projective => gaussian_binomial(n + 1, 3, q),
    }
}

/// `(ρ1, ρ2)`: probabilities that a random plane of `P^n` contains one,
/// resp. two distinct, given points.
pub fn projective_incidence(n: u32, q: u64) -> (Rational, Rational) {
    let qb = num_bigint::BigInt::from(q);
    let rho1 = Rational::new(qb.pow(3) - 1, qb.pow(n + 1) - 1);
    let planes = gaussian_binomial(n + 1, 3, q);
    let through_two = gaussian_binomial(n - 1, 1, q);
    let rho2 = Rational::new(through_two.into(), planes.into());
    (rho1, rho2)
}

/// All `k × ncols` RREF matrices of rank `k`, in a fixed order.
fn enumerate_rref(field: &Field, k: usize, ncols: usize) -> Vec<Vec<Vec<Elem>>> {
    let q = field.q();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..ncols)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut m = vec![vec![Elem::ZERO; ncols]; k];
            for (r, &c) in pivots.iter().enumerate() {
                m[r][c] = Elem::ONE;
            }
            for &(r, c) in &free {
                m[r][c] = field.element(idx % q);
                idx /= q;
            }
            out.push(m);
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < ncols - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every plane exactly once, as canonical frames.
pub fn enumerate_planes(
    n: usize,
    field: &Field,
    setting: Setting,
    cap: u128,
) -> Result<Vec<PlaneFrame>> {
    let census = plane_census(n, field.q(), setting);
    let estimated = census.to_u128().unwrap_or(u128::MAX);
    if estimated > cap {
        return Err(Error::WorkCapExceeded { estimated, cap });
    }
    if n < 2 {
        return Err(Error::DimensionMismatch(format!(
            "no planes in dimension {n}"
        )));
    }
    let q = field.q();
    Ok(match setting {
        Setting::Affine => {
            let mut out = Vec::with_capacity(estimated as usize);
            for m in enumerate_rref(field, 2, n) {
                let pivots: Vec<usize> = m
                    .iter()
                    .map(|r| r.iter().position(|x| !x.is_zero()).expect("pivot"))
                    .collect();
                let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
                for mut idx in 0..q.pow(free.len() as u32) {
                    let mut base = vec![Elem::ZERO; n];
                    for &c in &free {
                        base[c] = field.element(idx % q);
                        idx /= q;
                    }
                    out.push(PlaneFrame::Affine {
                        base,
                        dirs: [m[0].clone(), m[1].clone()],
                    });
                }
            }
            out
        }
        Setting::Projective => enumerate_rref(field, 3, n + 1)
            .into_iter()
            .map(|m| {
                let rows: [Vec<Elem>; 3] = m.try_into().expect("three rows");
                PlaneFrame::Projective { rows }
            })
            .collect(),
    })
}

fn random_vec<R: Rng + ?Sized>(field: &Field, len: usize, rng: &mut R) -> Vec<Elem> {
    (0..len)
        .map(|_| field.element(rng.gen_range(0..field.q())))
        .collect()
}

/// A uniformly random plane, returned in canonical form.
pub fn sample_plane<R: Rng + ?Sized>(
    n: usize,
    field: &Field,
    setting: Setting,
    rng: &mut R,
) -> PlaneFrame {
    assert!(n >= 2, "planes need n >= 2");
    match setting {
        Setting::Affine => loop {
            let dirs = [random_vec(field, n, rng), random_vec(field, n, rng)];
            let base = random_vec(field, n, rng);
            if let Ok(p) = (PlaneFrame::Affine { base, dirs }).canonicalize(field) {
                return p;
            }
        },
        Setting::Projective => loop {
            let rows = [
                random_vec(field, n + 1, rng),
                random_vec(field, n + 1, rng),
                random_vec(field, n + 1, rng),
            ];
            if let Ok(p) = (PlaneFrame::Projective { rows }).canonicalize(field) {
                return p;
            }
        },
    }
}

/// Samples per independent RNG stream in Monte Carlo mode.
pub const MC_CHUNK: u64 = 1024;

/// Census size up to which the CLI defaults to exhaustive mode.
pub const EXHAUSTIVE_DEFAULT_MAX: u64 = 100_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SliceMode {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

/// `#(X ∩ H)(F_q)`.
pub fn slice_count(x: &Hypersurface, plane: &PlaneFrame) -> Result<u64> {
    let g = restrict_to_plane(x, plane)?;
    let opts = CountOptions::sequential();
    Ok(match x.setting() {
        Setting::Affine => count_zeros(&g, &opts)?.0,
        Setting::Projective => count_projective_zeros(&g, &opts)?.0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramEntry {
    pub bin: String,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceReport {
    pub schema: u32,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub q: u64,
    pub n: usize,
    pub d: u32,
    pub setting: Setting,
    pub planes: u64,
    pub histogram: Vec<HistogramEntry>,
    pub out_of_interval: u64,
    pub intervals_disjoint: bool,
    /// Exact rational in exhaustive mode, decimal otherwise.
    pub mean: String,
    pub variance: String,
    pub mean_f64: f64,
    pub variance_f64: f64,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub total_points: Option<u64>,
    /// `N / q^{n-2}` (affine) or `N ρ1` (projective), the predicted mean.
    #[serde(rename = "N_over_q_pow", skip_serializing_if = "Option::is_none")]
    pub predicted_mean: Option<String>,
    #[serde(skip)]
    pub exact: Option<ExactMoments>,
    #[serde(skip)]
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMoments {
    pub mean: Rational,
    pub variance: Rational,
    pub predicted_mean: Option<Rational>,
}

impl SliceReport {
    /// Histogram value for a bin label such as `"1"`, `"inf"`.
    pub fn bin(&self, label: &str) -> u64 {
        self.histogram
            .iter()
            .find(|h| h.bin == label)
            .map_or(0, |h| h.count)
    }

    /// Lemma-style verdict: no count escapes the intervals when they are disjoint.
    pub fn lemma_ok(&self) -> bool {
        !self.intervals_disjoint || self.out_of_interval == 0
    }
}

#[derive(Default, Clone)]
struct Tally {
    sum: u128,
    sum_sq: u128,
    n: u64,
    bins: BTreeMap<Bin, u64>,
    out: u64,
    counts: Vec<u64>,
}

impl Tally {
    fn push(&mut self, c: u64, intervals: &IntervalSystem, keep: bool) {
        self.sum += c as u128;
        self.sum_sq += (c as u128) * (c as u128);
        self.n += 1;
        match intervals.classify_lenient(c) {
            Classification::Bin(b) => *self.bins.entry(b).or_default() += 1,
            Classification::OutOfInterval => self.out += 1,
        }
        if keep {
            self.counts.push(c);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.n += other.n;
        for (b, c) in other.bins {
            *self.bins.entry(b).or_default() += c;
        }
        self.out += other.out;
        self.counts.extend(other.counts);
        self
    }
}

fn check_compatible(x: &Hypersurface, intervals: &IntervalSystem) -> Result<()> {
    if x.field().q() != intervals.q()
        || x.degree() != intervals.d()
        || x.setting() != intervals.setting()
    {
        return Err(Error::InvalidArgument(format!(
            "interval system (q = {}, d = {}, {}) does not match the hypersurface (q = {}, d = {}, {})",
            intervals.q(),
            intervals.d(),
            intervals.setting(),
            x.field().q(),
            x.degree(),
            x.setting()
        )));
    }
    Ok(())
}

/// Distribution of slice counts over all planes or over seeded samples.
///
/// Counts are binned into the lowest interval containing them; when the
/// intervals overlap the report says so instead of failing.
pub fn slice_distribution(
    x: &Hypersurface,
    intervals: &IntervalSystem,
    mode: SliceMode,
    opts: &CountOptions,
) -> Result<SliceReport> {
    check_compatible(x, intervals)?;
    let field = x.field();
    let n = x.ambient_dim();
    let q = field.q();
    let tally = match mode {
        SliceMode::Exhaustive => {
            let planes = enumerate_planes(n, field, x.setting(), opts.work_cap)?;
            let counts: Vec<u64> = planes
                .par_iter()
                .map(|h| slice_count(x, h))
                .collect::<Result<_>>()?;
            let mut t = Tally::default();
            for c in counts {
                t.push(c, intervals, true);
            }
            t
        }
        SliceMode::MonteCarlo { samples, seed } => {
            let chunks = samples.div_ceil(MC_CHUNK);
            let parts: Vec<Tally> = (0..chunks)
                .into_par_iter()
                .map(|i| -> Result<Tally> {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i);
                    let len = MC_CHUNK.min(samples - i * MC_CHUNK);
                    let mut t = Tally::default();
                    for _ in 0..len {
                        let h = sample_plane(n, field, x.setting(), &mut rng);
                        t.push(slice_count(x, &h)?, intervals, false);
                    }
                    Ok(t)
                })
                .collect::<Result<_>>()?;
            parts.into_iter().fold(Tally::default(), Tally::merge)
        }
    };

    let total_points = match x.setting() {
        Setting::Affine => count_affine_with(x, field, opts).ok().map(|r| r.count),
        Setting::Projective => count_projective_with(x, field, opts).ok().map(|r| r.count),
    };
    let predicted = total_points.map(|nn| match x.setting() {
        Setting::Affine => Rational::new(nn.into(), num_bigint::BigInt::from(q).pow(n as u32 - 2)),
        Setting::Projective => big(nn) * projective_incidence(n as u32, q).0,
    });

    let planes = tally.n;
    let mean_r = BigRational::new(tally.sum.into(), planes.max(1).into());
    let second = BigRational::new(tally.sum_sq.into(), planes.max(1).into());
    let var_r = &second - &mean_r * &mean_r;
    let exhaustive = mode == SliceMode::Exhaustive;

    let mut histogram = Vec::new();
    for k in 0..=intervals.d() {
        if intervals.flags().merge_j && k == 0 {
            continue;
        }
        histogram.push(HistogramEntry {
            bin: k.to_string(),
            count: tally.bins.get(&Bin::K(k)).copied().unwrap_or(0),
        });
    }
    histogram.push(HistogramEntry {
        bin: "inf".into(),
        count: tally.bins.get(&Bin::Infinity).copied().unwrap_or(0),
    });
    histogram.push(HistogramEntry {
        bin: "out_of_interval".into(),
        count: tally.out,
    });

    let (samples, seed) = match mode {
        SliceMode::Exhaustive => (None, None),
        SliceMode::MonteCarlo { samples, seed } => (Some(samples), Some(seed)),
    };
    let mean_f64 = rat_to_f64(&mean_r);
    let variance_f64 = rat_to_f64(&var_r);
    Ok(SliceReport {
        schema: 1,
        mode: if exhaustive {
            "exhaustive"
        } else {
            "monte_carlo"
        },
        samples,
        seed,
        q,
        n,
        d: x.degree(),
        setting: x.setting(),
        planes,
        histogram,
        out_of_interval: tally.out,
        intervals_disjoint: intervals.is_disjoint(),
        mean: if exhaustive {
            rat_to_string(&mean_r)
        } else {
            format!("{mean_f64}")
        },
        variance: if exhaustive {
            rat_to_string(&var_r)
        } else {
            format!("{variance_f64}")
        },
        mean_f64,
        variance_f64,
        total_points,
        predicted_mean: predicted.as_ref().map(rat_to_string),
        exact: exhaustive.then(|| ExactMoments {
            mean: mean_r.clone(),
            variance: var_r.clone(),
            predicted_mean: predicted.clone(),
        }),
        counts: tally.counts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TailCheck {
    pub k: u32,
    pub observed: String,
    pub chebyshev_bound: String,
    pub holds: bool,
}

/// For each `k >= 2` with `a_k > μ`: the fraction of planes with count at
/// least `a_k` is at most `σ² / (a_k − μ)²`. Needs an exhaustive report.
pub fn chebyshev_tails(report: &SliceReport, intervals: &IntervalSystem) -> Result<Vec<TailCheck>> {
    let exact = report
        .exact
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("tail check needs exhaustive moments".into()))?;
    let q = big(intervals.q());
    let planes = report.counts.len() as u64;
    let mut out = Vec::new();
    for k in 2..=intervals.d() {
        let ak = intervals.a(k);
        let gap = ak.add_rational(&-exact.mean.clone());
        if !gap.is_positive() {
            continue;
        }
        let beyond = report
            .counts
            .iter()
            .filter(|&&c| ak.cmp_rational(&big(c)) != std::cmp::Ordering::Greater)
            .count() as u64;
        let observed = Rational::new(beyond.into(), planes.into());
        // observed · gap² <= σ²
        let lhs = gap.mul(&gap).scale(&observed);
        let holds = Surd::rational(exact.variance.clone(), q.clone())
            .sub(&lhs)
            .signum()
            != std::cmp::Ordering::Less;
        let bound = exact.variance.to_f64().unwrap_or(f64::NAN) / gap.mul(&gap).to_f64();
        out.push(TailCheck {
            k,
            observed: rat_to_string(&observed),
            chebyshev_bound: format!("{bound}"),
            holds,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::mpoly::MultiPoly;
    use std::collections::HashSet;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(5, 0, 3), BigUint::one());
        assert_eq!(gaussian_binomial(3, 2, 3), BigUint::from(13u32));
        assert_eq!(gaussian_binomial(4, 3, 2), BigUint::from(15u32));
        for n in 0..=6 {
            for k in 0..=n {
                for q in [2, 3, 4] {
                    assert_eq!(gaussian_binomial(n, k, q), gaussian_binomial(n, n - k, q));
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_census() {
        let f3 = make_field(3, 1).unwrap();
        let planes = enumerate_planes(3, &f3, Setting::Affine, u128::MAX).unwrap();
        assert_eq!(planes.len(), 39);
        let distinct: HashSet<_> = planes.iter().cloned().collect();
        assert_eq!(distinct.len(), 39);
        assert!(planes.iter().all(|p| p.is_canonical(&f3)));

        let one = enumerate_planes(2, &f3, Setting::Affine, u128::MAX).unwrap();
        assert_eq!(one.len(), 1);

        let f2 = make_field(2, 1).unwrap();
        let proj = enumerate_planes(3, &f2, Setting::Projective, u128::MAX).unwrap();
        assert_eq!(proj.len(), 15);
        for (n, q) in [(3, 4u64), (4, 2)] {
            let f = crate::gf::field_of_order(q).unwrap();
            for s in [Setting::Affine, Setting::Projective] {
                let all = enumerate_planes(n, &f, s, u128::MAX).unwrap();
                assert_eq!(BigUint::from(all.len()), plane_census(n, q, s));
                assert!(all.iter().all(|p| p.is_canonical(&f)));
            }
        }
    }

    #[test]
    fn census_cap() {
        let f = make_field(7, 1).unwrap();
        assert!(matches!(
            enumerate_planes(4, &f, Setting::Affine, 100),
            Err(Error::WorkCapExceeded { .. })
        ));
    }

    #[test]
    fn sampling_is_canonical_and_deterministic() {
        let f = make_field(5, 1).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = sample_plane(4, &f, Setting::Affine, &mut a);
            assert!(p.is_canonical(&f));
            assert_eq!(p, sample_plane(4, &f, Setting::Affine, &mut b));
            let r = sample_plane(3, &f, Setting::Projective, &mut a);
            assert!(r.is_canonical(&f));
            let _ = sample_plane(3, &f, Setting::Projective, &mut b);
        }
    }

    #[test]
    fn sampling_is_uniform_chi_squared() {
        let f = make_field(2, 1).unwrap();
        let planes = enumerate_planes(3, &f, Setting::Affine, u128::MAX).unwrap();
        assert_eq!(planes.len(), 14);
        let index: std::collections::HashMap<_, _> = planes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut freq = [0u64; 14];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let samples = 14_000;
        for _ in 0..samples {
            freq[index[&sample_plane(3, &f, Setting::Affine, &mut rng)]] += 1;
        }
        let expected = samples as f64 / 14.0;
        let chi2: f64 = freq
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // chi-squared critical value, 13 degrees of freedom, alpha = 0.001
        assert!(chi2 < 34.528, "chi2 = {chi2}");
    }

    #[test]
    fn projective_incidence_values() {
        let (r1, r2) = projective_incidence(3, 2);
        assert_eq!(r1, Rational::new(7.into(), 15.into()));
        for n in 2..=6 {
            for q in [2, 3, 4, 5, 7, 8, 9] {
                let (r1, r2) = projective_incidence(n, q);
                assert!(r2 <= &r1 * &r1, "n={n} q={q}");
            }
        }
        // planes through two fixed points of P^3(F_2), counted directly
        let f = make_field(2, 1).unwrap();
        let planes = enumerate_planes(3, &f, Setting::Projective, u128::MAX).unwrap();
        let p1 = vec![Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO];
        let p2 = vec![Elem::ZERO, Elem::ONE, Elem::ONE, Elem::ZERO];
        let both = planes
            .iter()
            .filter(|h| h.contains(&f, &p1) && h.contains(&f, &p2))
            .count();
        assert_eq!(Rational::new(both.into(), 15.into()), r2);
        let one = planes.iter().filter(|h| h.contains(&f, &p1)).count();
        assert_eq!(Rational::new(one.into(), 15.into()), r1);
    }

    #[test]
    fn hyperplane_mean_is_exact() {
        let f3 = make_field(3, 1).unwrap();
        let x = Hypersurface::affine(MultiPoly::parse("x", 3, &f3).unwrap()).unwrap();
        let iv = IntervalSystem::affine(3, 1).unwrap();
        let r =
            slice_distribution(&x, &iv, SliceMode::Exhaustive, &CountOptions::default()).unwrap();
        assert_eq!(r.planes, 39);
        let ex = r.exact.as_ref().unwrap();
        assert_eq!(ex.mean, big(3u64));
        assert_eq!(ex.predicted_mean, Some(big(3u64)));
        assert!(ex.variance <= ex.mean);
        assert_eq!(r.out_of_interval, 0);
        assert_eq!(r.total_points, Some(9));
    }

    #[test]
    fn mc_is_deterministic_across_runs() {
        let f = make_field(3, 1).unwrap();
        let x = Hypersurface::affine(MultiPoly::parse("x^2 + y*z + 1", 3, &f).unwrap()).unwrap();
        let iv = IntervalSystem::affine(3, 2).unwrap();
        let mode = SliceMode::MonteCarlo {
            samples: 3000,
            seed: 5,
        };
        let a = slice_distribution(&x, &iv, mode, &CountOptions::default()).unwrap();
        let b = slice_distribution(&x, &iv, mode, &CountOptions::sequential()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.planes, 3000);
    }
}
