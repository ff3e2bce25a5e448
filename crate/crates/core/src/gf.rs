//! Finite fields `F_{p^m}` presented as `F_p[t]/(h(t))`.
//!
//! Elements are packed into a single `u32`: the coordinate vector
//! `(c_0, ..., c_{m-1})` in the basis `1, t, ..., t^{m-1}` is stored as
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Enumeration order is the numeric
//! order of that packing. Multiplication goes through discrete log tables
//! built once per field; fields are cached per `(p, m)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const ORDER_CAP: u64 = 1 << 20;

/// A raw field element; only meaningful together with its [`Field`].
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Position in the enumeration order.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
pub struct FieldDescriptor {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldDescriptor {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic modulus `h(t)`, coefficients in ascending degree (length `m + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

/// Shared handle to an immutable field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl Deref for Field {
    type Target = FieldDescriptor;

    fn deref(&self) -> &FieldDescriptor {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p && self.m == other.m && self.modulus == other.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.m)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power_decomposition(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over Z/p, ascending coefficients, used only while
// building a field.
mod zp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&result, m, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `f` of degree `m` is irreducible iff `gcd(f, x^{p^i} - x) = 1`
    /// for `1 <= i <= m/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        if m <= 1 {
            return m == 1;
        }
        let x = vec![0u64, 1];
        let mut xp = x.clone();
        for _ in 0..m / 2 {
            xp = pow_mod(&xp, p, f, p);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn pack(coeffs: &[u64], p: u64) -> u32 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn unpack(mut v: u32, p: u64, m: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(v as u64 % p);
        v = (v as u64 / p) as u32;
    }
    out
}

fn first_irreducible(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for v in 0..count {
        let mut f = unpack(v as u32, p, m);
        f.push(1);
        if zp::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_field(p: u64, m: u32) -> FieldDescriptor {
    let q = p.pow(m);
    let modulus = first_irreducible(p, m);
    let order = q - 1;
    let factors = prime_factors(order);
    let generator = (1..q)
        .map(|v| {
            let mut c = unpack(v as u32, p, m);
            zp::trim(&mut c);
            c
        })
        .find(|g| {
            factors
                .iter()
                .all(|&l| zp::pow_mod(g, order / l, &modulus, p) != vec![1u64])
        })
        .expect("multiplicative group is cyclic");

    let n = order as usize;
    let mut exp = vec![0u32; 2 * n.max(1)];
    let mut log = vec![0u32; q as usize];
    let mut cur = vec![1u64];
    for i in 0..n {
        let mut padded = cur.clone();
        padded.resize(m as usize, 0);
        let packed = pack(&padded, p);
        exp[i] = packed;
        exp[i + n] = packed;
        log[packed as usize] = i as u32;
        cur = zp::mul_mod(&cur, &generator, &modulus, p);
    }
    FieldDescriptor {
        p,
        m,
        q,
        modulus,
        exp,
        log,
    }
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from cache) `F_{p^m}`, modulus chosen as the first
/// monic irreducible of degree `m` when the lower coefficients are read as
/// a base-`p` number `c_0 + c_1 p + ...`.
pub fn make_field(p: u64, m: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if m == 0 {
        return Err(Error::InvalidArgument(
            "extension degree must be >= 1".into(),
        ));
    }
    let q = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if q > ORDER_CAP as u128 {
        return Err(Error::OrderTooLarge { p, m });
    }
    if let Some(f) = field_cache().lock().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    let field = Field(Arc::new(build_field(p, m)));
    let mut cache = field_cache().lock().unwrap();
    Ok(cache.entry((p, m)).or_insert(field).clone())
}

/// `F_q` for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, m) = prime_power_decomposition(q)
        .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    make_field(p, m)
}

impl Field {
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given coordinates (ascending powers of `t`).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.m as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates for a degree-{} extension",
                coeffs.len(),
                self.m
            )));
        }
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        Ok(Elem(pack(&reduced, self.p)))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        unpack(a.0, self.p, self.m)
    }

    /// The class of `t`.
    pub fn generator(&self) -> Elem {
        if self.m == 1 {
            // t = -h_0 in a degree-one presentation.
            Elem(((self.p - self.modulus[0]) % self.p) as u32)
        } else {
            Elem(self.p as u32)
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        (a.0 as u64) < self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q as u32).map(Elem)
    }

    pub fn element(&self, index: u64) -> Elem {
        debug_assert!(index < self.q);
        Elem(index as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem(if s >= self.p { s - self.p } else { s } as u32);
        }
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p as u32;
        let (mut x, mut y) = (a.0, b.0);
        let mut place = 1u32;
        let mut out = 0u32;
        while x > 0 || y > 0 {
            let s = x % p + y % p;
            out += if s >= p { s - p } else { s } * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.m == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p as u32 - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let mut x = a.0;
        let mut place = 1u32;
        let mut out = 0u32;
        while x > 0 {
            let d = x % p;
            out += if d == 0 { 0 } else { p - d } * place;
            place *= p;
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.m == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % self.p) as u32);
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[i as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = (self.q - 1) as u32;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize] as u64;
        let idx = ((l as u128 * e as u128) % n as u128) as usize;
        Elem(self.exp[idx])
    }

    /// Square-and-multiply power, independent of the log tables.
    pub fn pow_by_squaring(&self, a: Elem, mut e: u64) -> Elem {
        let mut result = Elem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p)
    }

    /// Whether `a` is a square (zero counts as a square).
    pub fn is_square(&self, a: Elem) -> bool {
        a.0 == 0 || self.p == 2 || self.log[a.0 as usize].is_multiple_of(2)
    }

    pub fn format(&self, a: Elem) -> String {
        if self.m == 1 {
            return a.0.to_string();
        }
        let coeffs = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Parses the text form produced by [`Field::format`]; also accepts
    /// `-`, `*`, and spaces (e.g. `2*t^2 - t + 1`).
    pub fn parse(&self, text: &str) -> Result<Elem> {
        let s: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        if s.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty field element".into(),
            });
        }
        let mut i = 0;
        let mut acc = Elem::ZERO;
        let t = self.generator();
        while i < s.len() {
            let mut negative = false;
            if s[i].1 == '+' || s[i].1 == '-' {
                negative = s[i].1 == '-';
                i += 1;
            } else if i > 0 {
                return Err(Error::Parse {
                    pos: s[i].0,
                    msg: format!("unexpected '{}'", s[i].1),
                });
            }
            let start = i;
            let mut coeff: Option<i64> = None;
            while i < s.len() && s[i].1.is_ascii_digit() {
                let digit = s[i].1.to_digit(10).unwrap() as i64;
                coeff = Some(coeff.unwrap_or(0).saturating_mul(10).saturating_add(digit));
                i += 1;
            }
            if i < s.len() && s[i].1 == '*' {
                i += 1;
            }
            let mut power = 0u64;
            if i < s.len() && s[i].1 == 't' {
                i += 1;
                power = 1;
                if i < s.len() && s[i].1 == '^' {
                    i += 1;
                    let exp_start = i;
                    let mut e = 0u64;
                    while i < s.len() && s[i].1.is_ascii_digit() {
                        e = e * 10 + s[i].1.to_digit(10).unwrap() as u64;
                        i += 1;
                    }
                    if i == exp_start {
                        return Err(Error::Parse {
                            pos: s.get(i).map_or(text.len(), |c| c.0),
                            msg: "missing exponent".into(),
                        });
                    }
                    power = e;
                }
            } else if coeff.is_none() {
                return Err(Error::Parse {
                    pos: s.get(start).map_or(text.len(), |c| c.0),
                    msg: "expected a coefficient or 't'".into(),
                });
            }
            let c = self.from_int(coeff.map_or(1, |c| c % self.p as i64));
            let mut term = self.mul(c, self.pow_by_squaring(t, power));
            if negative {
                term = self.neg(term);
            }
            acc = self.add(acc, term);
        }
        Ok(acc)
    }
}

/// An element bundled with its field; arithmetic between different fields
/// is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.field.format(self.value), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Self {
        assert!(field.contains(value), "element out of range");
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.field.pow_by_squaring(self.value, e))
    }

    pub fn frobenius(&self) -> Self {
        self.wrap(self.field.frobenius(self.value))
    }
}

/// Ring embedding `F_{p^a} -> F_{p^b}` for `a | b`, determined by the image
/// of the generator `t`.
#[derive(Clone)]
pub struct Embedding {
    source: Field,
    target: Field,
    image_of_generator: Elem,
    map: Vec<Elem>,
    inverse: HashMap<Elem, Elem>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Embedding")
            .field("source", &self.source)
            .field("target", &self.target)
            .field(
                "image_of_generator",
                &self.target.format(self.image_of_generator),
            )
            .finish()
    }
}

/// Evaluates a polynomial with `F_p` coefficients at `x` inside `field`.
fn eval_prime_poly(field: &Field, coeffs: &[u64], x: Elem) -> Elem {
    coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| {
        field.add(field.mul(acc, x), field.from_int(c as i64))
    })
}

pub fn embed(source: &Field, target: &Field) -> Result<Embedding> {
    if source.p != target.p || !target.m.is_multiple_of(source.m) {
        return Err(Error::NoEmbedding {
            source_p: source.p,
            source_m: source.m,
            target_p: target.p,
            target_m: target.m,
        });
    }
    let root = target
        .elements()
        .find(|&x| eval_prime_poly(target, &source.modulus, x).is_zero())
        .expect("a degree dividing the target degree splits");
    let map: Vec<Elem> = source
        .elements()
        .map(|x| eval_prime_poly(target, &source.coeffs(x), root))
        .collect();
    let inverse = map
        .iter()
        .enumerate()
        .map(|(i, &y)| (y, Elem(i as u32)))
        .collect();
    Ok(Embedding {
        source: source.clone(),
        target: target.clone(),
        image_of_generator: root,
        map,
        inverse,
    })
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn image_of_generator(&self) -> Elem {
        self.image_of_generator
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x.0 as usize]
    }

    pub fn apply_element(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field != self.source {
            return Err(Error::MixedFields);
        }
        Ok(FieldElement::new(&self.target, self.apply(x.value)))
    }

    /// The source element mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: Elem) -> Option<Elem> {
        self.inverse.get(&y).copied()
    }
}
