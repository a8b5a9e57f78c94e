//! Multivariate polynomial gcd over ℚ by recursive primitive remainder
//! sequences.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::atom::Atom;
use super::poly::Poly;
use super::Rational;

/// Monic (lex-leading coefficient one) greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 || b.len() == 1 {
        return monomial_gcd(a, b);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if large.div_exact(small).is_some() {
        return small.monic();
    }
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    let v = atoms_a
        .iter()
        .chain(atoms_b.iter())
        .max()
        .cloned()
        .expect("non-constant polynomials have atoms");
    let in_a = atoms_a.contains(&v);
    let in_b = atoms_b.contains(&v);
    if !in_b {
        return gcd(&content(a, &v), b);
    }
    if !in_a {
        return gcd(a, &content(b, &v));
    }
    if coprime_image(a, b, &v) {
        return gcd(&content(a, &v), &content(b, &v));
    }
    if let Some(g) = super::heu::heuristic_gcd(&a.content_normalized(), &b.content_normalized()) {
        return g.monic();
    }

    let ca = content(a, &v);
    let cb = content(b, &v);
    let cont = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");

    let mut r0 = pa.coeffs_in(&v);
    let mut r1 = pb.coeffs_in(&v);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    let g = loop {
        let r = pseudo_rem(&r0, &r1);
        if r.is_empty() {
            break Poly::from_coeffs(&v, &r1);
        }
        if r.len() == 1 {
            break Poly::one();
        }
        let r = primitive_coeffs(r);
        r0 = std::mem::replace(&mut r1, r);
    };
    let g = primitive(&g, &v);
    cont.mul(&g).monic()
}

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn rational_mod(c: &Rational) -> Option<u64> {
    let p = BigInt::from(P);
    let n = c.numer().mod_floor(&p).to_u64()?;
    let d = c.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mul_mod(n, inv_mod(d)))
}

/// Fixed evaluation value for an atom other than the main variable.
fn atom_value(a: &Atom) -> u64 {
    let mut h = DefaultHasher::new();
    a.hash(&mut h);
    h.finish() % (P - 2) + 2
}

/// Image of `p` in `F_P[v]` with every other atom evaluated; `None` when a
/// coefficient has a denominator divisible by `P`.
fn image(p: &Poly, v: &Atom) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut val = rational_mod(c)?;
        let mut e = 0;
        for (a, k) in m.factors() {
            if a == v {
                e = *k as usize;
            } else {
                val = mul_mod(val, pow_mod(atom_value(a), *k as u64));
            }
        }
        out[e] = (out[e] + val) % P;
    }
    Some(out)
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of the gcd of two polynomials over `F_P`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap());
        while a.len() >= b.len() {
            let q = mul_mod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + P - mul_mod(q, *bi)) % P;
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when an evaluation image certifies that `gcd(a, b)` is free of `v`.
///
/// Specialization can only raise the degree of the gcd as long as both
/// leading coefficients in `v` survive, so a constant image gcd is proof.
fn coprime_image(a: &Poly, b: &Poly, v: &Atom) -> bool {
    let (Some(ia), Some(ib)) = (image(a, v), image(b, v)) else {
        return false;
    };
    let lead_ok = |p: &Poly, img: &[u64]| img.len() == p.degree_in(v) as usize + 1 && img.last() != Some(&0);
    lead_ok(a, &ia) && lead_ok(b, &ib) && gcd_degree_mod(ia, ib) == 0
}

fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mono, other) = if a.len() == 1 { (a, b) } else { (b, a) };
    let (m, _) = mono.terms().next().unwrap();
    let mut g = m.clone();
    for (n, _) in other.terms() {
        g = g.gcd(n);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, num_traits::One::one())
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &Poly, v: &Atom) -> Poly {
    coeff_gcd(&p.coeffs_in(v))
}

fn coeff_gcd(coeffs: &[Poly]) -> Poly {
    let mut nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| c.len());
    let mut g = Poly::zero();
    for c in nonzero {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(p: &Poly, v: &Atom) -> Poly {
    let c = content(p, v);
    if c.is_zero() {
        return Poly::zero();
    }
    p.div_exact(&c).expect("content divides")
}

fn primitive_coeffs(coeffs: Vec<Poly>) -> Vec<Poly> {
    let c = coeff_gcd(&coeffs);
    if c.is_one() || c.is_zero() {
        return coeffs;
    }
    coeffs
        .into_iter()
        .map(|k| k.div_exact(&c).expect("content divides"))
        .collect()
}

/// Pseudo-remainder of dense univariate coefficient vectors (index = degree),
/// trailing zeros trimmed.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let lb = b.last().expect("divisor is nonzero").clone();
    let mut r: Vec<Poly> = a.to_vec();
    trim(&mut r);
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&lr.mul(bi));
        }
        trim(&mut r);
    }
    r
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Poly {
        Poly::atom(Atom::coord(n))
    }
    fn k(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(n.into()))
    }

    #[test]
    fn shared_linear_factor() {
        let (x, y, z) = (var("x"), var("y"), var("z"));
        let common = x.add(&y.mul(&z)).sub(&k(2));
        let a = common.mul(&x.sub(&z)).mul(&k(3));
        let b = common.mul(&y.add(&k(5))).mul(&common);
        assert_eq!(gcd(&a, &b), common.monic());
    }

    #[test]
    fn coprime_inputs() {
        let (x, y) = (var("x"), var("y"));
        let a = x.pow(2).add(&y.pow(2)).add(&k(1));
        let b = x.sub(&y);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn power_of_binomial() {
        let (b, l, y) = (var("beta"), var("lambda"), var("y"));
        let base = b.mul(&k(4)).sub(&l.mul(&y));
        let a = base.pow(5);
        let c = base.pow(3).mul(&y.add(&k(1)));
        assert_eq!(gcd(&a, &c), base.pow(3).monic());
    }

    #[test]
    fn monomial_case() {
        let (x, y) = (var("x"), var("y"));
        let a = x.pow(3).mul(&y);
        let b = x.pow(2).mul(&y.pow(2)).add(&x.pow(5));
        assert_eq!(gcd(&a, &b), x.pow(2));
    }

    #[test]
    fn image_certifies_coprime_and_not_shared() {
        let (b, l, y) = (var("beta"), var("lambda"), var("y"));
        let base = b.mul(&k(4)).sub(&l.mul(&y));
        let v = Atom::coord("y");
        assert!(coprime_image(&base.pow(3), &l.mul(&y).add(&k(1)), &v));
        assert!(!coprime_image(&base.pow(3), &base.mul(&y.add(&k(2))), &v));
        assert_eq!(gcd(&base.pow(3).mul(&l), &base.mul(&y.add(&k(2))).mul(&l)), base.mul(&l).monic());
    }

    #[test]
    fn divisor_shortcut() {
        let (x, y) = (var("x"), var("y"));
        let d = x.add(&y).add(&k(1));
        let a = d.mul(&x.sub(&y)).mul(&k(-6));
        assert_eq!(gcd(&a, &d.scale(&Rational::new(3.into(), 2.into()))), d.monic());
    }
}
