//! Exact real numbers of the form `a + b·√r` with rational `a`, `b`, `r`.
//!
//! Every bound verdict in the crate goes through [`Surd::signum`]; floats
//! are only produced for display.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a decimal literal such as `"7.44"` exactly.
pub fn dec(s: &str) -> Rational {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{whole}{frac}");
    let num: BigInt = digits.parse().expect("decimal literal");
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let v = Rational::new(num, den);
    if neg {
        -v
    } else {
        v
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational power `r^e`.
pub fn rpow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Whether a non-negative rational is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub r: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, r: Rational) -> Self {
        assert!(!r.is_negative(), "radicand must be non-negative");
        Surd { a, b, r }
    }

    pub fn rational(a: Rational, r: Rational) -> Self {
        Surd::new(a, Rational::zero(), r)
    }

    pub fn from_int(a: i64, r: Rational) -> Self {
        Surd::rational(int(a), r)
    }

    /// `√r` itself.
    pub fn sqrt(r: Rational) -> Self {
        Surd::new(Rational::zero(), Rational::one(), r)
    }

    fn same_radicand(&self, other: &Surd) {
        assert_eq!(self.r, other.r, "surds over different radicands");
    }

    pub fn add(&self, other: &Surd) -> Surd {
        self.same_radicand(other);
        Surd::new(&self.a + &other.a, &self.b + &other.b, self.r.clone())
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        self.same_radicand(other);
        Surd::new(&self.a - &other.a, &self.b - &other.b, self.r.clone())
    }

    pub fn neg(&self) -> Surd {
        Surd::new(-&self.a, -&self.b, self.r.clone())
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        self.same_radicand(other);
        let a = &self.a * &other.a + &self.b * &other.b * &self.r;
        let b = &self.a * &other.b + &self.b * &other.a;
        Surd::new(a, b, self.r.clone())
    }

    pub fn scale(&self, c: &Rational) -> Surd {
        Surd::new(&self.a * c, &self.b * c, self.r.clone())
    }

    pub fn add_rational(&self, c: &Rational) -> Surd {
        Surd::new(&self.a + c, self.b.clone(), self.r.clone())
    }

    pub fn pow(&self, e: u32) -> Surd {
        let mut acc = Surd::from_int(1, self.r.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact sign of `a + b√r`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = if self.r.is_zero() {
            Ordering::Equal
        } else {
            self.b.cmp(&Rational::zero())
        };
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a^2 with b^2 r
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * &self.r;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn cmp_surd(&self, other: &Surd) -> Ordering {
        self.sub(other).signum()
    }

    pub fn cmp_rational(&self, c: &Rational) -> Ordering {
        self.add_rational(&-c).signum()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * rat_to_f64(&self.r).sqrt()
    }

    /// Collapses to a rational when `√r` is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            return Some(self.a.clone());
        }
        rational_sqrt(&self.r).map(|s| &self.a + &self.b * s)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_rational() {
            return f.write_str(&rat_to_string(&v));
        }
        let root = format!("sqrt({})", rat_to_string(&self.r));
        let b = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", rat_to_string(&self.b))
        };
        if self.a.is_zero() {
            f.write_str(&b)
        } else if let Some(mag) = b.strip_prefix('-') {
            write!(f, "{} - {}", rat_to_string(&self.a), mag)
        } else {
            write!(f, "{} + {}", rat_to_string(&self.a), b)
        }
    }
}

/// Compares a surd `x` with `c · ∛k` for rational `c > 0`, `k >= 0`:
/// returns the sign of `x - c∛k`.
pub fn cmp_with_cube_root(x: &Surd, c: &Rational, k: &Rational) -> Ordering {
    debug_assert!(c.is_positive() && !k.is_negative());
    if x.signum() != Ordering::Greater {
        return if k.is_zero() {
            x.signum()
        } else {
            Ordering::Less
        };
    }
    // both sides positive: compare cubes
    let cube = x.pow(3);
    let rhs = rpow(c, 3) * k;
    cube.cmp_rational(&rhs)
}

/// Polynomial with rational coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(pub Vec<Rational>);

impl RatPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return RatPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly(out)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        RatPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// `P(x + s)`.
    pub fn taylor_shift(&self, s: &Rational) -> RatPoly {
        let lin = RatPoly(vec![s.clone(), Rational::one()]);
        self.0.iter().rev().fold(RatPoly(Vec::new()), |acc, c| {
            acc.mul(&lin).add(&RatPoly(vec![c.clone()]))
        })
    }

    /// Certifies `P(x) > 0` for all real `x >= s`: every coefficient of
    /// `P(x + s)` is non-negative and the constant term is positive.
    pub fn positive_from(&self, s: &Rational) -> bool {
        let shifted = self.taylor_shift(s);
        shifted.0.iter().all(|c| !c.is_negative())
            && shifted.0.first().is_some_and(|c| c.is_positive())
    }
}

/// Largest `L = k / 10^6` with `L^e <= x`.
pub fn rational_root_floor(x: &Rational, e: u32) -> Rational {
    let approx = rat_to_f64(x).powf(1.0 / e as f64);
    let scale = 1_000_000i64;
    let mut k = (approx * scale as f64).floor() as i64;
    let mut l = ratio(k, scale);
    while rpow(&l, e) > *x {
        k -= 1;
        l = ratio(k, scale);
    }
    l
}

/// Whether `n` is a prime power.
pub fn is_prime_power(n: u64) -> bool {
    crate::gf::prime_power_decomposition(n).is_some()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
