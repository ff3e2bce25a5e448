//! Sparse multivariate polynomials over a finite field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Embedding, Field};
use crate::slicing::PlaneFrame;

const ALIASES: [char; 4] = ['x', 'y', 'z', 'w'];

/// Exponent vector, ordered graded-lexicographically with `x1 > x2 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree; the zero polynomial sits below every finite degree.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Elem>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({} over {:?})", self, self.field)
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MultiPoly {
            nvars,
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The `i`-th variable (0-based).
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial(exps), Elem::ONE);
        p
    }

    pub fn from_terms<I>(field: &Field, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Elem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    /// Linear form `c + sum_i a_i x_i`.
    pub fn linear(field: &Field, constant: Elem, coeffs: &[Elem]) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(field, n, constant);
        for (i, &a) in coeffs.iter().enumerate() {
            let mut exps = vec![0; n];
            exps[i] = 1;
            p.add_term(Monomial(exps), a);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let field = &self.field;
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v = field.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Elem)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, Elem)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Elem {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .copied()
            .unwrap_or(Elem::ZERO)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::MinusInfinity, |m| Degree::Finite(m.degree()))
    }

    /// Highest power of variable `i` appearing, `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> Self {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.field, self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(&self.field, self.nvars, Elem::ONE);
        for _ in 0..e {
            result = result.mul(self).expect("same ring");
        }
        result
    }

    pub fn evaluate(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Elem]) -> Elem {
        let f = &self.field;
        self.terms.iter().fold(Elem::ZERO, |acc, (m, &c)| {
            let v = m.0.iter().zip(point).fold(c, |v, (&e, &x)| {
                if e == 0 {
                    v
                } else {
                    f.mul(v, f.pow(x, e as u64))
                }
            });
            f.add(acc, v)
        })
    }

    /// Pads each term to the total degree with a new variable inserted at
    /// position `newvar_index`.
    pub fn homogenize(&self, newvar_index: usize) -> Result<Self> {
        if newvar_index > self.nvars {
            return Err(Error::InvalidArgument(format!(
                "new variable index {newvar_index} out of range"
            )));
        }
        let d = self.total_degree().finite().unwrap_or(0);
        let mut out = Self::zero(&self.field, self.nvars + 1);
        for (m, &c) in &self.terms {
            let mut exps = m.0.clone();
            exps.insert(newvar_index, d - m.degree());
            out.add_term(Monomial(exps), c);
        }
        Ok(out)
    }

    /// Sets variable `chart_index` to 1 and drops it.
    pub fn dehomogenize(&self, chart_index: usize) -> Result<Self> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.set_var_to_one(chart_index))
    }

    fn set_var_to_one(&self, index: usize) -> Self {
        assert!(index < self.nvars);
        let mut out = Self::zero(&self.field, self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut exps = m.0.clone();
            exps.remove(index);
            out.add_term(Monomial(exps), c);
        }
        out
    }

    /// Sets variable `index` to 0 and drops it.
    pub fn set_var_to_zero(&self, index: usize) -> Self {
        assert!(index < self.nvars);
        let mut out = Self::zero(&self.field, self.nvars - 1);
        for (m, &c) in &self.terms {
            if m.0[index] == 0 {
                let mut exps = m.0.clone();
                exps.remove(index);
                out.add_term(Monomial(exps), c);
            }
        }
        out
    }

    pub fn map_coefficients(&self, e: &Embedding) -> Result<Self> {
        if &self.field != e.source() {
            return Err(Error::MixedFields);
        }
        let mut out = Self::zero(e.target(), self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), e.apply(c));
        }
        Ok(out)
    }

    /// Composition `f(g_1, ..., g_nvars)`; all `g_i` share a ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let (target_field, target_nvars) = match images.first() {
            Some(g) => (g.field.clone(), g.nvars),
            None => (self.field.clone(), 0),
        };
        for g in images {
            if g.field != self.field {
                return Err(Error::MixedFields);
            }
            if g.nvars != target_nvars {
                return Err(Error::ArityMismatch {
                    expected: target_nvars,
                    got: g.nvars,
                });
            }
        }
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, g) in images.iter().enumerate() {
            let max_e = self.degree_in(i).unwrap_or(0);
            let mut row = vec![MultiPoly::constant(&target_field, target_nvars, Elem::ONE)];
            for e in 1..=max_e as usize {
                let next = row[e - 1].mul(g)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(&target_field, target_nvars);
        for (m, &c) in &self.terms {
            let mut term = MultiPoly::constant(&target_field, target_nvars, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            for (mm, &cc) in &term.terms {
                out.add_term(mm.clone(), cc);
            }
        }
        Ok(out)
    }

    /// Groups terms by the power of the last variable: entry `j` holds the
    /// terms of the coefficient of `x_n^j` (exponents of the other variables).
    pub(crate) fn split_last(&self) -> Vec<Vec<(Vec<u32>, Elem)>> {
        let n = self.nvars;
        let top = self.degree_in(n - 1).unwrap_or(0) as usize;
        let mut out = vec![Vec::new(); top + 1];
        for (m, &c) in &self.terms {
            out[m.0[n - 1] as usize].push((m.0[..n - 1].to_vec(), c));
        }
        out
    }

    pub fn parse(text: &str, nvars: usize, field: &Field) -> Result<Self> {
        Parser::new(text, nvars, field).parse()
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= ALIASES.len() {
        ALIASES[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let mut factors = Vec::new();
            let is_const = m.degree() == 0;
            if c != Elem::ONE || is_const {
                let s = self.field.format(c);
                if (c.index() as u64) < self.field.p() {
                    factors.push(s);
                } else {
                    factors.push(format!("({s})"));
                }
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(var_name(self.nvars, i)),
                    e => factors.push(format!("{}^{}", var_name(self.nvars, i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    nvars: usize,
    field: &'a Field,
    len: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &str, nvars: usize, field: &'a Field) -> Self {
        Parser {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            nvars,
            field,
            len: text.len(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = v
                .saturating_mul(10)
                .saturating_add(c.to_digit(10).unwrap() as u64);
            self.pos += 1;
        }
        (self.pos > start).then_some(v)
    }

    fn coefficient_number(&mut self) -> Elem {
        let p = self.field.p();
        let mut v: u64 = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = (v * 10 + c.to_digit(10).unwrap() as u64) % p;
            self.pos += 1;
        }
        self.field.from_int(v as i64)
    }

    fn variable(&mut self) -> Result<usize> {
        let c = self.peek().unwrap();
        self.pos += 1;
        if c == 'x' {
            if let Some(idx) = self.number() {
                if idx == 0 || idx as usize > self.nvars {
                    self.pos -= 1;
                    return self.err(format!("variable x{idx} out of range 1..={}", self.nvars));
                }
                return Ok(idx as usize - 1);
            }
        }
        match ALIASES.iter().position(|&a| a == c) {
            Some(i) if self.nvars <= ALIASES.len() && i < self.nvars => Ok(i),
            _ => {
                self.pos -= 1;
                self.err(format!(
                    "unknown variable '{c}' for {} variables",
                    self.nvars
                ))
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Elem)> {
        let mut coeff = Elem::ONE;
        let mut exps = vec![0u32; self.nvars];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = self.coefficient_number();
                    coeff = self.field.mul(coeff, v);
                }
                Some('(') => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c != ')') {
                        self.pos += 1;
                    }
                    if self.peek() != Some(')') {
                        return self.err("unclosed '('");
                    }
                    let inner: String = self.chars[start..self.pos]
                        .iter()
                        .map(|&(_, c)| c)
                        .collect();
                    let offset = self.chars[start].0;
                    let v = self.field.parse(&inner).map_err(|e| match e {
                        Error::Parse { pos, msg } => Error::Parse {
                            pos: pos + offset,
                            msg,
                        },
                        other => other,
                    })?;
                    self.pos += 1;
                    coeff = self.field.mul(coeff, v);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let i = self.variable()?;
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        match self.number() {
                            Some(v) if v <= u32::MAX as u64 => e = v as u32,
                            _ => return self.err("expected exponent after '^'"),
                        }
                    }
                    exps[i] += e;
                }
                _ => {
                    if factors == 0 {
                        return self.err("expected a term");
                    }
                    return self.err("unexpected character");
                }
            }
            factors += 1;
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                None | Some('+') | Some('-') => break,
                _ => {}
            }
        }
        Ok((Monomial(exps), coeff))
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.field, self.nvars);
        if self.chars.is_empty() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        while self.pos < self.chars.len() {
            let mut negative = false;
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    negative = true;
                    self.pos += 1;
                }
                _ if !first => return self.err("expected '+' or '-'"),
                _ => {}
            }
            first = false;
            let (m, mut c) = self.term()?;
            if negative {
                c = self.field.neg(c);
            }
            out.add_term(m, c);
        }
        Ok(out)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Affine,
    Projective,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Affine => "affine",
            Setting::Projective => "projective",
        })
    }
}

/// `X = {f = 0}` in `A^n` (f in n variables) or `P^n` (f homogeneous in n+1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    setting: Setting,
    f: MultiPoly,
    degree: u32,
}

impl Hypersurface {
    pub fn affine(f: MultiPoly) -> Result<Self> {
        let degree = match f.total_degree() {
            Degree::Finite(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidArgument(
                    "affine hypersurface needs a polynomial of degree >= 1".into(),
                ))
            }
        };
        if f.nvars() < 1 {
            return Err(Error::DimensionMismatch(
                "need at least one variable".into(),
            ));
        }
        Ok(Hypersurface {
            setting: Setting::Affine,
            f,
            degree,
        })
    }

    pub fn projective(f: MultiPoly) -> Result<Self> {
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = match f.total_degree() {
            Degree::Finite(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidArgument(
                    "projective hypersurface needs a form of degree >= 1".into(),
                ))
            }
        };
        if f.nvars() < 2 {
            return Err(Error::DimensionMismatch(
                "need at least two homogeneous coordinates".into(),
            ));
        }
        Ok(Hypersurface {
            setting: Setting::Projective,
            f,
            degree,
        })
    }

    pub fn new(setting: Setting, f: MultiPoly) -> Result<Self> {
        match setting {
            Setting::Affine => Self::affine(f),
            Setting::Projective => Self::projective(f),
        }
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.f
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `n` for `X ⊂ A^n` or `X ⊂ P^n`.
    pub fn ambient_dim(&self) -> usize {
        match self.setting {
            Setting::Affine => self.f.nvars(),
            Setting::Projective => self.f.nvars() - 1,
        }
    }
}

/// Pulls `f` back along the plane's parametrization. Affine planes give a
/// polynomial in `(s, w)`; projective planes give a ternary form in the
/// span coordinates. The result is zero exactly when the plane lies in `X`.
pub fn restrict_to_plane(x: &Hypersurface, h: &PlaneFrame) -> Result<MultiPoly> {
    let field = x.field();
    let n = x.ambient_dim();
    match (x.setting(), h) {
        (Setting::Affine, PlaneFrame::Affine { base, dirs }) => {
            if base.len() != n || dirs.iter().any(|d| d.len() != n) {
                return Err(Error::DimensionMismatch(format!(
                    "plane in A^{} vs hypersurface in A^{n}",
                    base.len()
                )));
            }
            let images: Vec<MultiPoly> = (0..n)
                .map(|i| MultiPoly::linear(field, base[i], &[dirs[0][i], dirs[1][i]]))
                .collect();
            x.poly().substitute(&images)
        }
        (Setting::Projective, PlaneFrame::Projective { rows }) => {
            if rows.iter().any(|r| r.len() != n + 1) {
                return Err(Error::DimensionMismatch(format!(
                    "plane in P^{} vs hypersurface in P^{n}",
                    rows[0].len().saturating_sub(1)
                )));
            }
            let images: Vec<MultiPoly> = (0..=n)
                .map(|i| {
                    MultiPoly::linear(field, Elem::ZERO, &[rows[0][i], rows[1][i], rows[2][i]])
                })
                .collect();
            x.poly().substitute(&images)
        }
        _ => Err(Error::DimensionMismatch(
            "plane and hypersurface live in different settings".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{embed, field_of_order, make_field};
    use crate::slicing::sample_plane;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_poly(
        field: &Field,
        nvars: usize,
        deg: u32,
        rng: &mut ChaCha8Rng,
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(field, nvars);
        for _ in 0..6 {
            let mut exps = vec![0u32; nvars];
            let mut budget = rng.gen_range(0..=deg);
            for e in exps.iter_mut() {
                let take = rng.gen_range(0..=budget);
                *e = take;
                budget -= take;
            }
            p.add_term(Monomial(exps), field.element(rng.gen_range(0..field.q())));
        }
        p
    }

    #[test]
    fn parse_and_evaluate() {
        let f2 = make_field(2, 1).unwrap();
        let g = MultiPoly::parse("y^2+y+x^3", 2, &f2).unwrap();
        assert_eq!(g.evaluate(&[Elem(0), Elem(0)]).unwrap(), Elem::ZERO);
        let f7 = make_field(7, 1).unwrap();
        let x = MultiPoly::parse("x", 1, &f7).unwrap();
        assert_eq!(x.evaluate(&[Elem(5)]).unwrap(), Elem(5));
        assert_eq!(
            x.evaluate(&[Elem(5), Elem(1)]),
            Err(Error::ArityMismatch {
                expected: 1,
                got: 2
            })
        );
        let c = MultiPoly::parse("y^2+y-x^3", 2, &f7).unwrap();
        assert_eq!(c.total_degree(), Degree::Finite(3));
        assert_eq!(
            MultiPoly::zero(&f7, 2).total_degree(),
            Degree::MinusInfinity
        );
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn canonical_printing() {
        let f5 = make_field(5, 1).unwrap();
        let g = MultiPoly::parse("y + y^2 - x^3 + 7", 2, &f5).unwrap();
        assert_eq!(g.to_string(), "4*x^3+y^2+y+2");
        let f4 = make_field(2, 2).unwrap();
        let h = MultiPoly::parse("(t+1)*x^2*y + (t) x + 1", 2, &f4).unwrap();
        assert_eq!(h.to_string(), "(t+1)*x^2*y+(t)*x+1");
        let many = MultiPoly::parse("x1*x5 - 3*x2^2", 5, &f5).unwrap();
        assert_eq!(many.to_string(), "x1*x5+2*x2^2");
    }

    #[test]
    fn parse_errors_report_positions() {
        let f5 = make_field(5, 1).unwrap();
        match MultiPoly::parse("x + q", 2, &f5) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            MultiPoly::parse("x^", 2, &f5),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MultiPoly::parse("z", 2, &f5),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MultiPoly::parse("x3", 2, &f5),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MultiPoly::parse("x + (t", 2, &f5),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MultiPoly::parse("", 2, &f5),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn homogenize_round_trip() {
        let f7 = make_field(7, 1).unwrap();
        let g = MultiPoly::parse("y^2+y-x^3", 2, &f7).unwrap();
        let h = g.homogenize(2).unwrap();
        assert_eq!(h, MultiPoly::parse("y^2*z+y*z^2-x^3", 3, &f7).unwrap());
        assert_eq!(h.dehomogenize(2).unwrap(), g);
        assert_eq!(g.dehomogenize(0), Err(Error::NotHomogeneous));

        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let f = random_poly(&f7, 3, 4, &mut rng);
            let h = f.homogenize(0).unwrap();
            let d = f.total_degree().finite().unwrap_or(0);
            assert!(h.terms().all(|(m, _)| m.degree() == d));
            assert_eq!(h.dehomogenize(0).unwrap(), f);
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [4u64, 5, 9, 13] {
            let f = field_of_order(q).unwrap();
            for _ in 0..30 {
                let a = random_poly(&f, 3, 3, &mut rng);
                let b = random_poly(&f, 3, 3, &mut rng);
                let pt: Vec<Elem> = (0..3).map(|_| f.element(rng.gen_range(0..q))).collect();
                let (va, vb) = (a.eval_unchecked(&pt), b.eval_unchecked(&pt));
                assert_eq!(a.add(&b).unwrap().eval_unchecked(&pt), f.add(va, vb));
                assert_eq!(a.mul(&b).unwrap().eval_unchecked(&pt), f.mul(va, vb));
            }
        }
    }

    #[test]
    fn coordinate_plane_restriction() {
        let f5 = make_field(5, 1).unwrap();
        let x = Hypersurface::affine(MultiPoly::parse("y^2+y-x^3", 3, &f5).unwrap()).unwrap();
        let h = PlaneFrame::Affine {
            base: vec![Elem(0); 3],
            dirs: [
                vec![Elem(1), Elem(0), Elem(0)],
                vec![Elem(0), Elem(1), Elem(0)],
            ],
        };
        let r = restrict_to_plane(&x, &h).unwrap();
        assert_eq!(r, MultiPoly::parse("y^2+y-x^3", 2, &f5).unwrap());

        let plane_x = Hypersurface::affine(MultiPoly::parse("x", 3, &f5).unwrap()).unwrap();
        let inside = PlaneFrame::Affine {
            base: vec![Elem(0); 3],
            dirs: [
                vec![Elem(0), Elem(1), Elem(0)],
                vec![Elem(0), Elem(0), Elem(1)],
            ],
        };
        assert!(restrict_to_plane(&plane_x, &inside).unwrap().is_zero());

        let wrong = PlaneFrame::Affine {
            base: vec![Elem(0); 4],
            dirs: [vec![Elem(0); 4], vec![Elem(0); 4]],
        };
        assert!(matches!(
            restrict_to_plane(&plane_x, &wrong),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn restriction_matches_pointwise_substitution() {
        let f5 = make_field(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut f = random_poly(&f5, 3, 3, &mut rng);
        while f.total_degree() != Degree::Finite(3) {
            f = random_poly(&f5, 3, 3, &mut rng);
        }
        let x = Hypersurface::affine(f.clone()).unwrap();
        let h = sample_plane(3, &f5, Setting::Affine, &mut rng);
        let r = restrict_to_plane(&x, &h).unwrap();
        assert!(r.total_degree() <= Degree::Finite(3));
        let PlaneFrame::Affine { base, dirs } = &h else {
            unreachable!()
        };
        for _ in 0..100 {
            let s = f5.element(rng.gen_range(0..5));
            let w = f5.element(rng.gen_range(0..5));
            let pt: Vec<Elem> = (0..3)
                .map(|i| {
                    f5.add(
                        base[i],
                        f5.add(f5.mul(s, dirs[0][i]), f5.mul(w, dirs[1][i])),
                    )
                })
                .collect();
            assert_eq!(r.evaluate(&[s, w]).unwrap(), f.evaluate(&pt).unwrap());
        }
    }

    #[test]
    fn map_coefficients_commutes_with_evaluation() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let e = embed(&f2, &f4).unwrap();
        let g = MultiPoly::parse("y^2+y+x^3+1", 2, &f2).unwrap();
        let mapped = g.map_coefficients(&e).unwrap();
        assert_eq!(mapped.to_string(), g.to_string());

        let f16 = make_field(2, 4).unwrap();
        let e = embed(&f4, &f16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = random_poly(&f4, 2, 4, &mut rng);
        let mapped = g.map_coefficients(&e).unwrap();
        for _ in 0..100 {
            let pt = [
                f4.element(rng.gen_range(0..4)),
                f4.element(rng.gen_range(0..4)),
            ];
            let img = [e.apply(pt[0]), e.apply(pt[1])];
            assert_eq!(
                mapped.evaluate(&img).unwrap(),
                e.apply(g.evaluate(&pt).unwrap())
            );
        }
        let id = embed(&f4, &f4).unwrap();
        assert_eq!(g.map_coefficients(&id).unwrap(), g);
        assert_eq!(mapped.map_coefficients(&id), Err(Error::MixedFields));
    }

    #[test]
    fn hypersurface_validation() {
        let f3 = make_field(3, 1).unwrap();
        let nonhom = MultiPoly::parse("x^2+y", 3, &f3).unwrap();
        assert_eq!(
            Hypersurface::projective(nonhom.clone()),
            Err(Error::NotHomogeneous)
        );
        let h = Hypersurface::affine(nonhom).unwrap();
        assert_eq!(h.degree(), 2);
        assert_eq!(h.ambient_dim(), 3);
        let cone = Hypersurface::projective(MultiPoly::parse("x^2+y*z", 4, &f3).unwrap()).unwrap();
        assert_eq!(cone.ambient_dim(), 3);
        assert!(Hypersurface::affine(MultiPoly::constant(&f3, 2, Elem::ONE)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn parse_print_is_identity(seed in any::<u64>(), q in prop::sample::select(vec![2u64, 4, 5, 9, 16, 49])) {
                let f = field_of_order(q).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = random_poly(&f, 3, 5, &mut rng);
                let printed = g.to_string();
                let back = MultiPoly::parse(&printed, 3, &f).unwrap();
                prop_assert_eq!(back.to_string(), printed);
                prop_assert_eq!(back, g);
            }
        }
    }
}
