//! Heuristic polynomial gcd over ℤ (evaluation at large integers with
//! ξ-adic reconstruction), run on integer coefficients to avoid rational
//! normalization on very large numbers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::atom::Atom;
use super::poly::{Monomial, Poly};
use super::Rational;

/// Bit budget for evaluated coefficients before the heuristic gives up.
const MAX_BITS: u64 = 200_000;
const MAX_DEPTH: usize = 16;

#[derive(Clone, Debug, Default, PartialEq)]
struct IntPoly(BTreeMap<Monomial, BigInt>);

impl IntPoly {
    /// `None` unless every coefficient is an integer.
    fn from_poly(p: &Poly) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (m, c) in p.terms() {
            if !c.is_integer() {
                return None;
            }
            out.insert(m.clone(), c.numer().clone());
        }
        Some(IntPoly(out))
    }

    fn to_poly(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            out.add_term(m.clone(), Rational::from_integer(c.clone()));
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.0.keys().all(Monomial::is_one)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn content(&self) -> BigInt {
        self.0.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn norm(&self) -> BigInt {
        self.0.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    fn div_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly(self.0.iter().map(|(m, k)| (m.clone(), k / c)).collect())
    }

    fn atoms(&self) -> BTreeSet<Atom> {
        self.0.keys().flat_map(|m| m.factors().iter().map(|(a, _)| a.clone())).collect()
    }

    fn degree_in(&self, a: &Atom) -> u32 {
        self.0.keys().map(|m| m.degree_in(a)).max().unwrap_or(0)
    }

    fn eval_at(&self, v: &Atom, xi: &BigInt) -> IntPoly {
        let mut out = IntPoly::default();
        let mut powers: Vec<BigInt> = vec![BigInt::one()];
        for (m, c) in &self.0 {
            let (e, rest) = m.split(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * xi;
                powers.push(next);
            }
            out.add_term(rest, c * &powers[e as usize]);
        }
        out
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.0.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact quotient over ℤ, `None` when `d` does not divide `self`.
    fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = IntPoly::default();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&lm)?;
            let (q, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (dm, dc) in &d.0 {
                rem.add_term(dm.mul(&m), -(dc * &q));
            }
            if rem.0.contains_key(&rm) {
                return None;
            }
            quot.add_term(m, q);
        }
        Some(quot)
    }
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// ξ-adic reconstruction of a polynomial in `v` from its value at `ξ`.
fn xi_adic(gamma: &IntPoly, v: &Atom, xi: &BigInt, max_deg: u32) -> Option<IntPoly> {
    let mut e = gamma.clone();
    let mut out = IntPoly::default();
    for i in 0..=max_deg {
        if e.is_zero() {
            return Some(out);
        }
        let mut next = IntPoly::default();
        for (m, c) in &e.0 {
            let r = symmetric_mod(c, xi);
            next.add_term(m.clone(), (c - &r) / xi);
            out.add_term(m.mul(&Monomial::atom(v.clone(), i)), r);
        }
        e = next;
    }
    e.is_zero().then_some(out)
}

fn heu(a: &IntPoly, b: &IntPoly, depth: usize) -> Option<IntPoly> {
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        let mut out = IntPoly::default();
        out.add_term(Monomial::one(), c);
        return Some(out);
    }
    if depth > MAX_DEPTH {
        return None;
    }
    let a = a.div_scalar(&ca);
    let b = b.div_scalar(&cb);
    let atoms: BTreeSet<Atom> = a.atoms().union(&b.atoms()).cloned().collect();
    let v = atoms
        .iter()
        .max_by_key(|x| a.degree_in(x).max(b.degree_in(x)))
        .cloned()?;
    let max_deg = a.degree_in(&v).min(b.degree_in(&v));
    let top_deg = u64::from(a.degree_in(&v).max(b.degree_in(&v)).max(1));
    let mut xi: BigInt = a.norm().min(b.norm()) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() * top_deg > MAX_BITS {
            return None;
        }
        let ga = a.eval_at(&v, &xi);
        let gb = b.eval_at(&v, &xi);
        if !ga.is_zero() && !gb.is_zero() {
            if let Some(g) = heu(&ga, &gb, depth + 1).and_then(|gamma| xi_adic(&gamma, &v, &xi, max_deg)) {
                if !g.is_zero() {
                    let g = g.div_scalar(&g.content());
                    if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                        let mut out = IntPoly::default();
                        for (m, k) in g.0 {
                            out.add_term(m, k * &c);
                        }
                        return Some(out);
                    }
                }
            }
        }
        xi = (&xi * 73794u32) / 27011u32;
    }
    None
}

/// Gcd of two polynomials with integer coefficients, when the heuristic
/// succeeds. Every returned value divides both inputs, and with `ξ` above
/// twice the smaller norm that makes it the gcd.
pub(super) fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let a = IntPoly::from_poly(a)?;
    let b = IntPoly::from_poly(b)?;
    let g = heu(&a, &b, 0)?;
    Some(g.to_poly())
}


#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Poly {
        Poly::atom(Atom::coord(n))
    }

    #[test]
    fn recovers_shared_factor() {
        let (x, y, z) = (var("x"), var("y"), var("z"));
        let k = |n: i64| Poly::constant(Rational::from_integer(n.into()));
        let common = x.pow(2).add(&y.mul(&z).scale(&Rational::from_integer(3.into()))).sub(&k(7));
        let a = common.mul(&x.sub(&z)).pow(2);
        let b = common.mul(&y.add(&k(5)));
        let g = heuristic_gcd(&a.content_normalized(), &b.content_normalized()).unwrap();
        assert_eq!(g.monic(), common.monic());
    }

    #[test]
    fn int_division_rejects_non_divisor() {
        let (x, y) = (var("x"), var("y"));
        let a = IntPoly::from_poly(&x.mul(&y).add(&Poly::one())).unwrap();
        let d = IntPoly::from_poly(&x.add(&y)).unwrap();
        assert!(a.div_exact(&d).is_none());
        let p = IntPoly::from_poly(&x.add(&y).mul(&x.sub(&y))).unwrap();
        assert!(p.div_exact(&d).is_some());
    }
}
