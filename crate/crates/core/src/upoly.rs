//! Dense univariate polynomials over a [`Field`], ascending coefficients.
//! Only what distinct-root counting needs.

use crate::gf::{Elem, Field};

pub fn trim(a: &mut Vec<Elem>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn eval(field: &Field, a: &[Elem], x: Elem) -> Elem {
    a.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

fn make_monic(field: &Field, a: &mut [Elem]) {
    if let Some(&lead) = a.last() {
        if lead != Elem::ONE {
            let inv = field
                .inv(lead)
                .expect("trimmed polynomial has nonzero lead");
            for c in a.iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn rem_monic(field: &Field, a: &mut Vec<Elem>, m: &[Elem]) {
    let dm = m.len() - 1;
    trim(a);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = a[top];
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            a[shift + i] = field.sub(a[shift + i], field.mul(c, mi));
        }
        trim(a);
    }
}

fn mul_mod(field: &Field, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = field.add(prod[i + j], field.mul(ai, bj));
        }
    }
    rem_monic(field, &mut prod, m);
    prod
}

fn gcd(field: &Field, a: Vec<Elem>, b: Vec<Elem>) -> Vec<Elem> {
    let (mut a, mut b) = (a, b);
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        make_monic(field, &mut b);
        rem_monic(field, &mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    make_monic(field, &mut a);
    a
}

/// Number of distinct roots in the field of a nonzero polynomial, by
/// evaluating at every element.
pub fn count_roots_scan(field: &Field, a: &[Elem]) -> u64 {
    field
        .elements()
        .filter(|&x| eval(field, a, x).is_zero())
        .count() as u64
}

/// Number of distinct roots in the field of a nonzero polynomial:
/// `deg gcd(a, X^Q - X)` with `X^Q mod a` by repeated squaring.
pub fn count_roots_gcd(field: &Field, a: &[Elem]) -> u64 {
    let mut g = a.to_vec();
    trim(&mut g);
    match g.len() {
        0 => panic!("zero polynomial has no finite root count"),
        1 => return 0,
        2 => return 1,
        _ => {}
    }
    make_monic(field, &mut g);
    let mut result = vec![Elem::ONE];
    let mut base = vec![Elem::ZERO, Elem::ONE];
    rem_monic(field, &mut base, &g);
    let mut e = field.q();
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(field, &result, &base, &g);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(field, &base, &base, &g);
        }
    }
    // X^Q - X
    result.resize(result.len().max(2), Elem::ZERO);
    result[1] = field.sub(result[1], Elem::ONE);
    trim(&mut result);
    let d = gcd(field, g, result);
    (d.len() - 1) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_of_order, make_field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scan_and_gcd_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [
            2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81, 125, 128, 307,
        ] {
            let f = field_of_order(q).unwrap();
            for _ in 0..40 {
                let deg = rng.gen_range(1..7);
                let mut a: Vec<Elem> = (0..=deg).map(|_| f.element(rng.gen_range(0..q))).collect();
                trim(&mut a);
                if a.is_empty() {
                    continue;
                }
                assert_eq!(
                    count_roots_scan(&f, &a),
                    count_roots_gcd(&f, &a),
                    "q={q} a={a:?}"
                );
            }
        }
    }

    #[test]
    fn repeated_roots_count_once() {
        let f = make_field(5, 1).unwrap();
        // (X-1)^2 (X-2) = X^3 - 4X^2 + 5X - 2
        let a = vec![f.from_int(-2), f.from_int(5), f.from_int(-4), Elem::ONE];
        assert_eq!(count_roots_gcd(&f, &a), 2);
        assert_eq!(count_roots_scan(&f, &a), 2);
    }
}
