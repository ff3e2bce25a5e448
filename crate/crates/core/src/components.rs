//! Components of plane curves `{g = 0} ⊂ A^2(F_q)`: factorization over
//! `F_q` by trial division, and a point-count test for absolute
//! irreducibility of each factor.

use serde::Serialize;

use crate::counting::{count_curve_ext_with, CountOptions};
use crate::error::{Error, Result};
use crate::exact::{gcd_u64, Surd};
use crate::exact::{int, ratio};
use crate::gf::{Elem, Field, ORDER_CAP};
use crate::mpoly::{Degree, MultiPoly};

pub const FACTOR_DEGREE_CAP: u32 = 4;
pub const FACTOR_ORDER_CAP: u64 = 16;

const MAXD: usize = FACTOR_DEGREE_CAP as usize;
const NMON: usize = (MAXD + 1) * (MAXD + 2) / 2;

/// Monomials `x^i y^j`, `i + j <= 4`, in ascending graded-lex order
/// (degree first, then the power of `x`).
const fn monomials() -> [(u8, u8); NMON] {
    let mut out = [(0u8, 0u8); NMON];
    let mut idx = 0;
    let mut deg = 0;
    while deg <= MAXD {
        let mut i = 0;
        while i <= deg {
            out[idx] = (i as u8, (deg - i) as u8);
            idx += 1;
            i += 1;
        }
        deg += 1;
    }
    out
}

const MONS: [(u8, u8); NMON] = monomials();

fn mon_index(i: u8, j: u8) -> usize {
    let deg = (i + j) as usize;
    deg * (deg + 1) / 2 + i as usize
}

/// Dense bivariate polynomial of total degree at most 4.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Dense([Elem; NMON]);

impl Dense {
    fn zero() -> Self {
        Dense([Elem::ZERO; NMON])
    }

    fn from_poly(g: &MultiPoly) -> Self {
        let mut d = Dense::zero();
        for (m, c) in g.terms() {
            let e = m.exponents();
            d.0[mon_index(e[0] as u8, e[1] as u8)] = c;
        }
        d
    }

    fn to_poly(self, field: &Field) -> MultiPoly {
        MultiPoly::from_terms(
            field,
            2,
            MONS.iter()
                .zip(self.0)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&(i, j), c)| (vec![i as u32, j as u32], c)),
        )
    }

    /// Index of the leading monomial.
    fn lead(&self) -> Option<usize> {
        (0..NMON).rev().find(|&i| !self.0[i].is_zero())
    }

    fn degree(&self) -> Option<u32> {
        self.lead().map(|i| (MONS[i].0 + MONS[i].1) as u32)
    }

    fn scale(&mut self, field: &Field, c: Elem) {
        for x in self.0.iter_mut() {
            *x = field.mul(*x, c);
        }
    }

    /// Exact quotient by `h` (leading coefficient 1), or `None`.
    fn divide(&self, field: &Field, h: &Dense, h_lead: usize) -> Option<Dense> {
        let (hi, hj) = MONS[h_lead];
        let mut r = *self;
        let mut quot = Dense::zero();
        while let Some(l) = r.lead() {
            let (ri, rj) = MONS[l];
            if ri < hi || rj < hj {
                return None;
            }
            let (si, sj) = (ri - hi, rj - hj);
            let c = r.0[l];
            quot.0[mon_index(si, sj)] = c;
            for (k, &hc) in h.0.iter().enumerate() {
                if hc.is_zero() {
                    continue;
                }
                let (ki, kj) = MONS[k];
                let idx = mon_index(ki + si, kj + sj);
                r.0[idx] = field.sub(r.0[idx], field.mul(c, hc));
            }
        }
        Some(quot)
    }
}

/// Monic candidates of total degree `e` dividing `g`, first in canonical
/// order: leading monomial ascending, then lower coefficients as a base-q
/// counter over ascending monomials.
fn first_divisor(field: &Field, g: &Dense, e: usize) -> Option<(Dense, Dense)> {
    let q = field.q();
    let g_lead = MONS[g.lead()?];
    let start = e * (e + 1) / 2;
    for (lead, &(li, lj)) in MONS.iter().enumerate().skip(start).take(e + 1) {
        if li > g_lead.0 || lj > g_lead.1 {
            continue;
        }
        let free = lead;
        let total = q.checked_pow(free as u32)?;
        for mut counter in 0..total {
            let mut h = Dense::zero();
            h.0[lead] = Elem::ONE;
            for slot in h.0.iter_mut().take(free) {
                *slot = field.element(counter % q);
                counter /= q;
            }
            if let Some(quot) = g.divide(field, &h, lead) {
                return Some((h, quot));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: MultiPoly,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `g = unit · ∏ factor^multiplicity`
    pub unit: Elem,
    pub factors: Vec<Factor>,
}

fn check_caps(g: &MultiPoly) -> Result<u32> {
    if g.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: g.nvars(),
        });
    }
    let q = g.field().q();
    if q > FACTOR_ORDER_CAP {
        return Err(Error::OrderCapExceeded {
            order: q,
            cap: FACTOR_ORDER_CAP,
        });
    }
    match g.total_degree() {
        Degree::MinusInfinity => Err(Error::InvalidArgument("zero polynomial".into())),
        Degree::Finite(d) if d > FACTOR_DEGREE_CAP => Err(Error::DegreeCapExceeded {
            degree: d,
            cap: FACTOR_DEGREE_CAP,
        }),
        Degree::Finite(d) => Ok(d),
    }
}

/// Factorization into monic `F_q`-irreducibles (graded-lex leading
/// coefficient 1), factors in order of discovery.
pub fn factorize_bivariate(g: &MultiPoly) -> Result<Factorization> {
    check_caps(g)?;
    let field = g.field();
    let mut rest = Dense::from_poly(g);
    let unit = rest.0[rest.lead().expect("nonzero")];
    rest.scale(field, field.inv(unit)?);
    let mut factors = Vec::new();
    let mut e = 1usize;
    while rest.degree().is_some_and(|d| 2 * e <= d as usize) {
        match first_divisor(field, &rest, e) {
            Some((h, mut quot)) => {
                let lead = h.lead().expect("nonzero");
                let mut mult = 1;
                while let Some(next) = quot.divide(field, &h, lead) {
                    quot = next;
                    mult += 1;
                }
                rest = quot;
                factors.push(Factor {
                    poly: h.to_poly(field),
                    multiplicity: mult,
                });
            }
            None => e += 1,
        }
    }
    if rest.degree().is_some_and(|d| d >= 1) {
        factors.push(Factor {
            poly: rest.to_poly(field),
            multiplicity: 1,
        });
    }
    Ok(Factorization { unit, factors })
}

/// `Q - (e-1)(e-2)√Q - e + 1 > e^2/4` with `Q = q^m`: an absolutely
/// irreducible curve has more points than any union of conjugates.
fn separated(qm: u64, e: u32) -> bool {
    let a = (e as i64 - 1) * (e as i64 - 2);
    let lhs = Surd::new(
        int(qm as i64 - e as i64 + 1) - ratio((e * e) as i64, 4),
        int(-a),
        int(qm as i64),
    );
    lhs.is_positive()
}

/// Smallest `m >= 1`, coprime to `e`, at which the classifier separates.
pub fn classifier_degree(q: u64, e: u32) -> Result<u32> {
    let mut m = 1u32;
    loop {
        if gcd_u64(m as u64, e as u64) == 1 {
            let qm =
                q.checked_pow(m)
                    .filter(|&v| v <= ORDER_CAP)
                    .ok_or(Error::OrderCapExceeded {
                        order: q.saturating_pow(m),
                        cap: ORDER_CAP,
                    })?;
            if separated(qm, e) {
                return Ok(m);
            }
        }
        m += 1;
    }
}

/// For an `F_q`-irreducible `g` of degree `e`: absolutely irreducible iff
/// its zero count over `F_{q^m}` exceeds `e^2/4`, with `m` from
/// [`classifier_degree`]. Non-absolutely-irreducible factors split into a
/// Frobenius orbit of size dividing `e`, which stays non-rational over
/// `F_{q^m}` when `gcd(m, e) = 1`.
pub fn is_absolutely_irreducible(g: &MultiPoly) -> Result<bool> {
    is_absolutely_irreducible_with(g, &CountOptions::default())
}

pub fn is_absolutely_irreducible_with(g: &MultiPoly, opts: &CountOptions) -> Result<bool> {
    let e = match g.total_degree() {
        Degree::MinusInfinity => return Err(Error::InvalidArgument("zero polynomial".into())),
        Degree::Finite(0) => return Err(Error::InvalidArgument("constant polynomial".into())),
        Degree::Finite(e) => e,
    };
    if e == 1 {
        return Ok(true);
    }
    let m = classifier_degree(g.field().q(), e)?;
    let c = count_curve_ext_with(g, m, opts)?.count;
    Ok(4 * c as u128 > (e * e) as u128)
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub poly: String,
    pub mult: u32,
    pub deg: u32,
    pub abs_irred: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub k: u32,
    pub factors: Vec<FactorReport>,
}

/// Number of distinct `F_q`-irreducible factors of `g` that are absolutely
/// irreducible.
pub fn component_count(g: &MultiPoly) -> Result<ComponentReport> {
    let fac = factorize_bivariate(g)?;
    let mut factors = Vec::with_capacity(fac.factors.len());
    for f in &fac.factors {
        let deg = f.poly.total_degree().finite().expect("nonzero factor");
        factors.push(FactorReport {
            poly: f.poly.to_string(),
            mult: f.multiplicity,
            deg,
            abs_irred: is_absolutely_irreducible(&f.poly)?,
        });
    }
    let k = factors.iter().filter(|f| f.abs_irred).count() as u32;
    Ok(ComponentReport { k, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_zeros;
    use crate::gf::{field_of_order, make_field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(s: &str, q: u64) -> MultiPoly {
        MultiPoly::parse(s, 2, &field_of_order(q).unwrap()).unwrap()
    }

    fn product(f: &Factorization, field: &Field) -> MultiPoly {
        let mut acc = MultiPoly::constant(field, 2, f.unit);
        for fac in &f.factors {
            acc = acc.mul(&fac.poly.pow(fac.multiplicity)).unwrap();
        }
        acc
    }

    #[test]
    fn monomial_order() {
        assert_eq!(MONS[0], (0, 0));
        assert_eq!(MONS[1], (0, 1));
        assert_eq!(MONS[2], (1, 0));
        for (idx, &(i, j)) in MONS.iter().enumerate() {
            assert_eq!(mon_index(i, j), idx);
        }
    }

    #[test]
    fn simple_factorizations() {
        let f = factorize_bivariate(&poly("x*y", 3)).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().all(|x| x.multiplicity == 1));
        let names: Vec<String> = f.factors.iter().map(|x| x.poly.to_string()).collect();
        assert_eq!(names, ["y", "x"]);

        let sq = factorize_bivariate(&poly("x^2 + y^2", 2)).unwrap();
        assert_eq!(sq.factors.len(), 1);
        assert_eq!(sq.factors[0].poly.to_string(), "x+y");
        assert_eq!(sq.factors[0].multiplicity, 2);

        let herm = factorize_bivariate(&poly("y^2+y+x^3", 4)).unwrap();
        assert_eq!(herm.factors.len(), 1);
        assert_eq!(herm.factors[0].multiplicity, 1);
    }

    #[test]
    fn factor_product_recovers_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for q in [2u64, 3, 4, 5, 7] {
            let field = field_of_order(q).unwrap();
            for _ in 0..20 {
                // build products of small random factors
                let mut g = MultiPoly::constant(&field, 2, field.element(rng.gen_range(1..q)));
                let mut deg = 0;
                while deg < 3 {
                    let e = rng.gen_range(1..=2);
                    if deg + e > 4 {
                        break;
                    }
                    let mut h = MultiPoly::zero(&field, 2);
                    for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
                        if i + j <= e {
                            let c = field.element(rng.gen_range(0..q));
                            h = h
                                .add(&MultiPoly::from_terms(&field, 2, [(vec![i, j], c)]))
                                .unwrap();
                        }
                    }
                    if h.total_degree() == Degree::Finite(e) {
                        g = g.mul(&h).unwrap();
                        deg += e;
                    }
                }
                let fac = factorize_bivariate(&g).unwrap();
                assert_eq!(product(&fac, &field), g, "q={q} g={g}");
                let total: u32 = fac
                    .factors
                    .iter()
                    .map(|f| f.multiplicity * f.poly.total_degree().finite().unwrap())
                    .sum();
                assert_eq!(Degree::Finite(total), g.total_degree());
                // each factor is irreducible: no factor of its own
                for f in &fac.factors {
                    assert_eq!(factorize_bivariate(&f.poly).unwrap().factors.len(), 1);
                }
            }
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(
            factorize_bivariate(&poly("x^5+y", 2)),
            Err(Error::DegreeCapExceeded { degree: 5, cap: 4 })
        ));
        assert!(matches!(
            factorize_bivariate(&poly("x^2+y", 17)),
            Err(Error::OrderCapExceeded { order: 17, cap: 16 })
        ));
    }

    #[test]
    fn classifier_examples() {
        assert!(is_absolutely_irreducible(&poly("x+y+1", 7)).unwrap());
        assert!(!is_absolutely_irreducible(&poly("x^2+y^2", 3)).unwrap());
        assert!(is_absolutely_irreducible(&poly("y^2+y+x^3", 4)).unwrap());
        // the Frobenius-conjugate pair y^2 - t x^2 over F_5 (t non-square)
        assert!(!is_absolutely_irreducible(&poly("y^2-2*x^2", 5)).unwrap());
        assert!(is_absolutely_irreducible(&poly("y^2-x^3-1", 5)).unwrap());
    }

    #[test]
    fn classifier_degree_is_coprime_and_separates() {
        assert_eq!(classifier_degree(2, 2).unwrap(), 3);
        assert_eq!(classifier_degree(3, 2).unwrap(), 1);
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            for e in 2..=4 {
                let m = classifier_degree(q, e).unwrap();
                assert_eq!(gcd_u64(m as u64, e as u64), 1);
                assert!(separated(q.pow(m), e));
            }
        }
    }

    #[test]
    fn component_counts() {
        assert_eq!(component_count(&poly("x*y", 5)).unwrap().k, 2);
        assert_eq!(component_count(&poly("x^2+y^2", 3)).unwrap().k, 0);
        let r = component_count(&poly("x^2+y^2", 5)).unwrap();
        assert_eq!(r.k, 2);
        assert_eq!(r.factors.len(), 2);
        let json = serde_json::to_value(component_count(&poly("x^2+y^2", 2)).unwrap()).unwrap();
        assert_eq!(json["k"], 1);
        assert_eq!(json["factors"][0]["mult"], 2);
    }

    #[test]
    fn invariant_under_affine_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [3u64, 4, 5] {
            let field = make_field(
                crate::gf::prime_power_decomposition(q).unwrap().0,
                crate::gf::prime_power_decomposition(q).unwrap().1,
            )
            .unwrap();
            for g in [
                "x^2+y^2",
                "x*y",
                "y^2+y+x^3",
                "x^2*y+y^3+x+1",
                "x^2-y^2+x-y",
            ] {
                let g = MultiPoly::parse(g, 2, &field).unwrap();
                let k = component_count(&g).unwrap().k;
                for _ in 0..4 {
                    let (a, b, c, d) = loop {
                        let m: Vec<Elem> =
                            (0..4).map(|_| field.element(rng.gen_range(0..q))).collect();
                        let det = field.sub(field.mul(m[0], m[3]), field.mul(m[1], m[2]));
                        if !det.is_zero() {
                            break (m[0], m[1], m[2], m[3]);
                        }
                    };
                    let s = field.element(rng.gen_range(0..q));
                    let t = field.element(rng.gen_range(0..q));
                    let images = [
                        MultiPoly::linear(&field, s, &[a, b]),
                        MultiPoly::linear(&field, t, &[c, d]),
                    ];
                    let h = g.substitute(&images).unwrap();
                    assert_eq!(component_count(&h).unwrap().k, k, "q={q} g={g} h={h}");
                    assert_eq!(
                        count_zeros(&h, &CountOptions::default()).unwrap().0,
                        count_zeros(&g, &CountOptions::default()).unwrap().0
                    );
                }
            }
        }
    }
}
