//! Exact point counts of affine and projective hypersurfaces.
//!
//! The affine count walks the `q^{n-1}` fibers over the first `n - 1`
//! coordinates. Each fiber reduces `f` to a univariate polynomial in the
//! last variable: the zero polynomial contributes `q`, anything else
//! contributes its number of distinct roots in `F_q`. Fibers are summed in
//! parallel; the sum does not depend on the partition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{embed, make_field, Elem, Field};
use crate::mpoly::{Hypersurface, MultiPoly, Setting};
use crate::upoly;

pub const DEFAULT_WORK_CAP: u128 = 1_000_000_000;

/// Fields up to this order count fiber roots by exhaustive scan.
pub const SCAN_MAX_Q: u64 = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Brute,
    Fiberwise,
    FiberwiseGcd,
}

impl CountMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMethod::Brute => "brute",
            CountMethod::Fiberwise => "fiberwise",
            CountMethod::FiberwiseGcd => "fiberwise_gcd",
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    /// Scan for `q <= 64`, gcd above.
    #[default]
    Auto,
    Brute,
    Scan,
    Gcd,
}

#[derive(Copy, Clone, Debug)]
pub struct CountOptions {
    pub work_cap: u128,
    pub method: MethodChoice,
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            work_cap: DEFAULT_WORK_CAP,
            method: MethodChoice::Auto,
            parallel: true,
        }
    }
}

impl CountOptions {
    pub fn with_method(method: MethodChoice) -> Self {
        CountOptions {
            method,
            ..Default::default()
        }
    }

    pub fn sequential() -> Self {
        CountOptions {
            parallel: false,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: u64,
    pub q: u64,
    pub n: usize,
    pub setting: Setting,
    pub method: CountMethod,
}

fn resolve_method(choice: MethodChoice, q: u64) -> CountMethod {
    match choice {
        MethodChoice::Brute => CountMethod::Brute,
        MethodChoice::Scan => CountMethod::Fiberwise,
        MethodChoice::Gcd => CountMethod::FiberwiseGcd,
        MethodChoice::Auto if q <= SCAN_MAX_Q => CountMethod::Fiberwise,
        MethodChoice::Auto => CountMethod::FiberwiseGcd,
    }
}

fn sat_pow(q: u64, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

fn ceil_log2(q: u64) -> u128 {
    (64 - (q.max(2) - 1).leading_zeros()) as u128
}

/// Estimated field operations for counting zeros of `f` with `method`.
pub fn estimate_work(f: &MultiPoly, method: CountMethod) -> u128 {
    let q = f.field().q();
    let n = f.nvars();
    if n == 0 {
        return 1;
    }
    let terms = f.num_terms().max(1) as u128;
    match method {
        CountMethod::Brute => sat_pow(q, n).saturating_mul(terms),
        CountMethod::Fiberwise => {
            let d = f.degree_in(n - 1).unwrap_or(0) as u128 + 1;
            sat_pow(q, n - 1).saturating_mul(terms + q as u128 * d)
        }
        CountMethod::FiberwiseGcd => {
            let d = f.degree_in(n - 1).unwrap_or(0) as u128 + 1;
            sat_pow(q, n - 1).saturating_mul(terms + d * d * (ceil_log2(q) + 1))
        }
    }
}

fn check_cap(estimated: u128, cap: u128) -> Result<()> {
    if estimated > cap {
        Err(Error::WorkCapExceeded { estimated, cap })
    } else {
        Ok(())
    }
}

fn decode(mut idx: u64, q: u64, out: &mut [Elem]) {
    for slot in out.iter_mut() {
        *slot = Elem((idx % q) as u32);
        idx /= q;
    }
}

fn count_brute(f: &MultiPoly, parallel: bool) -> u64 {
    let q = f.field().q();
    let n = f.nvars();
    let total = q.pow(n as u32);
    let one = |idx: u64| {
        let mut pt = vec![Elem::ZERO; n];
        decode(idx, q, &mut pt);
        u64::from(f.eval_unchecked(&pt).is_zero())
    };
    if parallel {
        (0..total).into_par_iter().map(one).sum()
    } else {
        (0..total).map(one).sum()
    }
}

struct FiberPlan {
    field: Field,
    by_power: Vec<Vec<(Vec<u32>, Elem)>>,
    max_exp: Vec<u32>,
    use_gcd: bool,
}

impl FiberPlan {
    fn new(f: &MultiPoly, use_gcd: bool) -> Self {
        let n = f.nvars();
        FiberPlan {
            field: f.field().clone(),
            by_power: f.split_last(),
            max_exp: (0..n - 1).map(|i| f.degree_in(i).unwrap_or(0)).collect(),
            use_gcd,
        }
    }

    fn count_fiber(&self, idx: u64) -> u64 {
        let field = &self.field;
        let q = field.q();
        let k = self.max_exp.len();
        let mut coords = vec![Elem::ZERO; k];
        decode(idx, q, &mut coords);
        let powers: Vec<Vec<Elem>> = coords
            .iter()
            .zip(&self.max_exp)
            .map(|(&x, &e)| {
                let mut row = Vec::with_capacity(e as usize + 1);
                row.push(Elem::ONE);
                for i in 1..=e as usize {
                    row.push(field.mul(row[i - 1], x));
                }
                row
            })
            .collect();
        let mut uni: Vec<Elem> = self
            .by_power
            .iter()
            .map(|terms| {
                terms.iter().fold(Elem::ZERO, |acc, (exps, c)| {
                    let v = exps
                        .iter()
                        .enumerate()
                        .fold(*c, |v, (i, &e)| field.mul(v, powers[i][e as usize]));
                    field.add(acc, v)
                })
            })
            .collect();
        upoly::trim(&mut uni);
        match uni.len() {
            0 => q,
            1 => 0,
            2 => 1,
            _ if self.use_gcd => upoly::count_roots_gcd(field, &uni),
            _ => upoly::count_roots_scan(field, &uni),
        }
    }
}

fn count_fiberwise(f: &MultiPoly, use_gcd: bool, parallel: bool) -> u64 {
    let q = f.field().q();
    let fibers = q.pow(f.nvars() as u32 - 1);
    let plan = FiberPlan::new(f, use_gcd);
    if parallel && fibers > 64 {
        (0..fibers)
            .into_par_iter()
            .map(|i| plan.count_fiber(i))
            .sum()
    } else {
        (0..fibers).map(|i| plan.count_fiber(i)).sum()
    }
}

/// Number of zeros of `f` in `A^{nvars}` over its own field. Works for any
/// number of variables, including zero, and for the zero polynomial.
pub fn count_zeros(f: &MultiPoly, opts: &CountOptions) -> Result<(u64, CountMethod)> {
    let q = f.field().q();
    let n = f.nvars();
    let method = resolve_method(opts.method, q);
    if f.is_zero() {
        let total = sat_pow(q, n);
        if total > u64::MAX as u128 {
            return Err(Error::WorkCapExceeded {
                estimated: total,
                cap: u64::MAX as u128,
            });
        }
        return Ok((total as u64, method));
    }
    if n == 0 {
        return Ok((0, method));
    }
    check_cap(estimate_work(f, method), opts.work_cap)?;
    let count = match method {
        CountMethod::Brute => count_brute(f, opts.parallel),
        CountMethod::Fiberwise => count_fiberwise(f, false, opts.parallel),
        CountMethod::FiberwiseGcd => count_fiberwise(f, true, opts.parallel),
    };
    Ok((count, method))
}

/// Number of points of `{f = 0}` in `P^{nvars-1}` for a form `f` (the zero
/// form counts every point).
pub fn count_projective_zeros(f: &MultiPoly, opts: &CountOptions) -> Result<(u64, CountMethod)> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if f.nvars() == 0 {
        return Err(Error::DimensionMismatch("form in zero variables".into()));
    }
    let mut rest = f.clone();
    let mut total = 0u64;
    let mut method = None;
    // P^k = {x_0 != 0} ⊔ {x_0 = 0}; the first chart is A^k.
    loop {
        let chart = rest.dehomogenize(0)?;
        let (c, m) = count_zeros(&chart, opts)?;
        total += c;
        method.get_or_insert(m);
        if rest.nvars() == 1 {
            break;
        }
        rest = rest.set_var_to_zero(0);
    }
    Ok((total, method.expect("at least one chart")))
}

fn over_field(x: &Hypersurface, field: &Field) -> Result<MultiPoly> {
    if x.field() == field {
        Ok(x.poly().clone())
    } else {
        let e = embed(x.field(), field)?;
        x.poly().map_coefficients(&e)
    }
}

pub fn count_affine(x: &Hypersurface, field: &Field) -> Result<CountResult> {
    count_affine_with(x, field, &CountOptions::default())
}

/// `|X(F)|` for affine `X`; `F` may be an extension of the field of definition.
pub fn count_affine_with(
    x: &Hypersurface,
    field: &Field,
    opts: &CountOptions,
) -> Result<CountResult> {
    if x.setting() != Setting::Affine {
        return Err(Error::DimensionMismatch(
            "expected an affine hypersurface".into(),
        ));
    }
    let f = over_field(x, field)?;
    let (count, method) = count_zeros(&f, opts)?;
    Ok(CountResult {
        count,
        q: field.q(),
        n: x.ambient_dim(),
        setting: Setting::Affine,
        method,
    })
}

pub fn count_projective(x: &Hypersurface, field: &Field) -> Result<CountResult> {
    count_projective_with(x, field, &CountOptions::default())
}

pub fn count_projective_with(
    x: &Hypersurface,
    field: &Field,
    opts: &CountOptions,
) -> Result<CountResult> {
    if x.setting() != Setting::Projective {
        return Err(Error::DimensionMismatch(
            "expected a projective hypersurface".into(),
        ));
    }
    let f = over_field(x, field)?;
    let (count, method) = count_projective_zeros(&f, opts)?;
    Ok(CountResult {
        count,
        q: field.q(),
        n: x.ambient_dim(),
        setting: Setting::Projective,
        method,
    })
}

/// Zeros of a bivariate `g` over `F_q` counted in `A^2(F_{q^m})`.
pub fn count_curve_ext(g: &MultiPoly, m: u32) -> Result<CountResult> {
    count_curve_ext_with(g, m, &CountOptions::default())
}

pub fn count_curve_ext_with(g: &MultiPoly, m: u32, opts: &CountOptions) -> Result<CountResult> {
    if g.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: g.nvars(),
        });
    }
    if g.is_zero() {
        return Err(Error::InvalidArgument(
            "zero polynomial defines no curve".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidArgument(
            "extension degree must be >= 1".into(),
        ));
    }
    let base = g.field();
    let degree = base
        .m()
        .checked_mul(m)
        .ok_or(Error::OrderTooLarge { p: base.p(), m })?;
    let target = make_field(base.p(), degree)?;
    let e = embed(base, &target)?;
    let lifted = g.map_coefficients(&e)?;
    let (count, method) = count_zeros(&lifted, opts)?;
    Ok(CountResult {
        count,
        q: target.q(),
        n: 2,
        setting: Setting::Affine,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_of_order, make_field};
    use crate::mpoly::Degree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn affine(text: &str, n: usize, field: &Field) -> Hypersurface {
        Hypersurface::affine(MultiPoly::parse(text, n, field).unwrap()).unwrap()
    }

    fn projective(text: &str, nvars: usize, field: &Field) -> Hypersurface {
        Hypersurface::projective(MultiPoly::parse(text, nvars, field).unwrap()).unwrap()
    }

    #[test]
    fn hyperplanes() {
        for q in [2u64, 3, 4, 5, 7] {
            let f = field_of_order(q).unwrap();
            for n in 2..=4 {
                let x = affine("x1", n, &f);
                assert_eq!(count_affine(&x, &f).unwrap().count, q.pow(n as u32 - 1));
                let h = projective("x1", n + 1, &f);
                assert_eq!(
                    count_projective(&h, &f).unwrap().count,
                    (q.pow(n as u32) - 1) / (q - 1)
                );
            }
        }
    }

    #[test]
    fn hermitian_curve_and_cylinder_over_f4() {
        let f4 = make_field(2, 2).unwrap();
        let c = affine("y^2+y+x^3", 2, &f4);
        assert_eq!(count_affine(&c, &f4).unwrap().count, 8);
        let cyl = affine("y^2+y-x^3", 3, &f4);
        assert_eq!(count_affine(&cyl, &f4).unwrap().count, 32);
    }

    #[test]
    fn cone_and_conic() {
        let f4 = make_field(2, 2).unwrap();
        let cone = projective("y^2*z+y*z^2-x^3", 4, &f4);
        assert_eq!(count_projective(&cone, &f4).unwrap().count, 37);
        let f3 = make_field(3, 1).unwrap();
        let conic = projective("x^2+y*z", 3, &f3);
        assert_eq!(count_projective(&conic, &f3).unwrap().count, 4);
    }

    #[test]
    fn counting_over_an_extension_field() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let c = affine("y^2+y+x^3", 2, &f2);
        assert_eq!(count_affine(&c, &f4).unwrap().count, 8);
        assert!(count_affine(&c, &make_field(3, 1).unwrap()).is_err());
    }

    #[test]
    fn methods_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25] {
            let f = field_of_order(q).unwrap();
            for n in 2..=3usize {
                if q.pow(n as u32) > 1_000_000 {
                    continue;
                }
                for _ in 0..5 {
                    let g = random_nonzero(&f, n, 4, &mut rng);
                    let x = Hypersurface::affine(g).unwrap();
                    let brute =
                        count_affine_with(&x, &f, &CountOptions::with_method(MethodChoice::Brute))
                            .unwrap()
                            .count;
                    let scan =
                        count_affine_with(&x, &f, &CountOptions::with_method(MethodChoice::Scan))
                            .unwrap()
                            .count;
                    let gcd =
                        count_affine_with(&x, &f, &CountOptions::with_method(MethodChoice::Gcd))
                            .unwrap()
                            .count;
                    let seq = count_affine_with(&x, &f, &CountOptions::sequential())
                        .unwrap()
                        .count;
                    assert_eq!(brute, scan);
                    assert_eq!(brute, gcd);
                    assert_eq!(brute, seq);
                    // Schwartz-Zippel
                    assert!(brute <= x.degree() as u64 * q.pow(n as u32 - 1));
                }
            }
        }
    }

    fn random_nonzero(f: &Field, n: usize, deg: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
        loop {
            let terms: Vec<(Vec<u32>, Elem)> = (0..5)
                .map(|_| {
                    let mut budget = rng.gen_range(0..=deg);
                    let exps = (0..n)
                        .map(|_| {
                            let t = rng.gen_range(0..=budget);
                            budget -= t;
                            t
                        })
                        .collect();
                    (exps, f.element(rng.gen_range(0..f.q())))
                })
                .collect();
            let g = MultiPoly::from_terms(f, n, terms);
            if g.total_degree() >= Degree::Finite(1) {
                return g;
            }
        }
    }

    #[test]
    fn projective_chart_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for q in [2u64, 3, 4, 5] {
            let f = field_of_order(q).unwrap();
            for _ in 0..5 {
                let g = random_nonzero(&f, 2, 3, &mut rng).homogenize(0).unwrap();
                let x = Hypersurface::projective(g.clone()).unwrap();
                let total = count_projective(&x, &f).unwrap().count;
                let (chart0, _) =
                    count_zeros(&g.dehomogenize(0).unwrap(), &CountOptions::default()).unwrap();
                let (at_infinity, _) =
                    count_projective_zeros(&g.set_var_to_zero(0), &CountOptions::default())
                        .unwrap();
                assert_eq!(total, chart0 + at_infinity);
                // brute force over normalized representatives
                let mut brute = 0;
                for idx in 0..q.pow(3) {
                    let mut pt = vec![Elem::ZERO; 3];
                    decode(idx, q, &mut pt);
                    if let Some(first) = pt.iter().position(|c| !c.is_zero()) {
                        if pt[first] == Elem::ONE && g.eval_unchecked(&pt).is_zero() {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(total, brute);
            }
        }
    }

    #[test]
    fn curve_extension_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for (q, m) in [(2u64, 1u32), (2, 3), (3, 2), (4, 2), (3, 4), (9, 2), (2, 6)] {
            let f = field_of_order(q).unwrap();
            let diag = MultiPoly::parse("y-x", 2, &f).unwrap();
            assert_eq!(count_curve_ext(&diag, m).unwrap().count, q.pow(m));
            let one = MultiPoly::parse("1", 2, &f).unwrap();
            assert_eq!(count_curve_ext(&one, m).unwrap().count, 0);
        }
        let mut checked = 0;
        while checked < 30 {
            let (q, m) = [
                (2u64, 3u32),
                (3, 2),
                (4, 2),
                (3, 4),
                (9, 2),
                (2, 6),
                (5, 2),
                (8, 2),
            ][rng.gen_range(0..8)];
            let f = field_of_order(q).unwrap();
            let g = random_nonzero(&f, 2, 4, &mut rng);
            let big = count_curve_ext(&g, m).unwrap();
            let target = field_of_order(big.q).unwrap();
            let e = embed(&f, &target).unwrap();
            let lifted = g.map_coefficients(&e).unwrap();
            let mut brute = 0;
            for a in target.elements() {
                for b in target.elements() {
                    if lifted.eval_unchecked(&[a, b]).is_zero() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(big.count, brute);
            checked += 1;
        }
    }

    #[test]
    fn ext_degree_one_matches_affine_count() {
        let f = make_field(5, 1).unwrap();
        let g = MultiPoly::parse("y^2-x^3-x-1", 2, &f).unwrap();
        let x = Hypersurface::affine(g.clone()).unwrap();
        assert_eq!(
            count_curve_ext(&g, 1).unwrap().count,
            count_affine(&x, &f).unwrap().count
        );
    }

    #[test]
    fn work_cap_is_enforced() {
        let f = make_field(307, 1).unwrap();
        let x = affine("x1^2+x2^2+x3^2+x4^2-1", 4, &f);
        let opts = CountOptions {
            work_cap: 1000,
            ..Default::default()
        };
        assert!(matches!(
            count_affine_with(&x, &f, &opts),
            Err(Error::WorkCapExceeded { .. })
        ));
    }
}
