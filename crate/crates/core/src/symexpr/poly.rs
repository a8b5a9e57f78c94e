//! Sparse multivariate polynomials over ℚ whose indeterminates are [`Atom`]s.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::atom::Atom;
use super::Rational;

/// A power product, stored as `(atom, exponent)` pairs sorted by atom with
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(a, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < other.0.len() {
                match a.cmp(&other.0[j].0) {
                    Ordering::Greater => return None,
                    Ordering::Equal => {
                        let d = other.0[j].1;
                        j += 1;
                        if d > *e {
                            return None;
                        }
                        if d < *e {
                            out.push((a.clone(), e - d));
                        }
                        continue;
                    }
                    Ordering::Less => {}
                }
            }
            out.push((a.clone(), *e));
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    /// Removes `a` entirely, returning its exponent and the rest.
    pub fn split(&self, a: &Atom) -> (u32, Monomial) {
        match self.0.binary_search_by(|(b, _)| b.cmp(a)) {
            Ok(k) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(k);
                (e, Monomial(rest))
            }
            Err(_) => (0, self.clone()),
        }
    }

    /// Lexicographic term order with the largest atom most significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Less => return Ordering::Less,
                    Ordering::Equal => match ex.cmp(ey) {
                        Ordering::Equal => {}
                        o => return o,
                    },
                },
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        Poly::term(Monomial::atom(a, 1), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The constant value, if the polynomial has no atoms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(a, _)| a.clone()))
            .collect()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(a)).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, k)| (n.mul(m), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to an atom.
    pub fn partial(&self, a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(a);
            if e == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::atom(a.clone(), e - 1));
            out.add_term(m2, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// The lex-leading term (largest atom most significant).
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Scales so the lex-leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Scales so the coefficients are coprime integers with a positive
    /// lex-leading coefficient.
    pub fn content_normalized(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            let k = (c * Rational::from_integer(den.clone())).to_integer();
            num = num.gcd(&k);
        }
        let mut scale = Rational::new(den, num);
        if self.leading_coeff().is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    /// Exact division, `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if other.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            let inv = c.recip();
            let mut terms = BTreeMap::new();
            for (n, k) in &self.terms {
                terms.insert(n.div(m)?, k * &inv);
            }
            return Some(Poly { terms });
        }
        let (lm, lc) = other.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            rem = rem.sub(&other.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Exact square root with positive lex-leading coefficient, when one
    /// exists with rational coefficients.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let root_m = sqrt_monomial(&lm)?;
        let root_c = sqrt_rational(&lc)?;
        let mut root = Poly::term(root_m.clone(), root_c.clone());
        let two_lead = Rational::from_integer(2.into()) * root_c;
        let mut rem = self.sub(&root.mul(&root));
        let max_steps = self.len() * 4 + 8;
        for _ in 0..max_steps {
            let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) else {
                return Some(root);
            };
            let m = rm.div(&root_m)?;
            if m.lex_cmp(&root_m) != Ordering::Less {
                return None;
            }
            let c = rc / &two_lead;
            let step = Poly::term(m, c);
            // (r + s)^2 = r^2 + 2rs + s^2
            let delta = root.mul(&step).scale(&Rational::from_integer(2.into()));
            rem = rem.sub(&delta).sub(&step.mul(&step));
            root = root.add(&step);
        }
        None
    }

    /// Coefficients as a polynomial in `a`: element `k` multiplies `a^k`.
    pub fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let deg = self.degree_in(a) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(a);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs(a: &Atom, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = Monomial::atom(a.clone(), k as u32);
            for (n, v) in &c.terms {
                out.add_term(n.mul(&m), v.clone());
            }
        }
        out
    }
}

fn sqrt_monomial(m: &Monomial) -> Option<Monomial> {
    let mut out = Vec::with_capacity(m.0.len());
    for (a, e) in &m.0 {
        if e % 2 != 0 {
            return None;
        }
        out.push((a.clone(), e / 2));
    }
    Some(Monomial(out))
}

fn sqrt_rational(c: &Rational) -> Option<Rational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::atom(Atom::coord("x"))
    }
    fn y() -> Poly {
        Poly::atom(Atom::coord("y"))
    }
    fn c(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(n.into()))
    }

    #[test]
    fn lex_order_is_multiplicative() {
        let a = Monomial::atom(Atom::coord("x"), 2);
        let b = Monomial::atom(Atom::coord("y"), 1);
        let m = Monomial::atom(Atom::coord("t"), 3);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(a.mul(&m).lex_cmp(&b.mul(&m)), Ordering::Less);
        assert_eq!(Monomial::one().lex_cmp(&a), Ordering::Less);
    }

    #[test]
    fn exact_division() {
        let p = x().add(&y()).mul(&x().sub(&c(3)));
        assert_eq!(p.div_exact(&x().add(&y())), Some(x().sub(&c(3))));
        assert_eq!(p.div_exact(&x().add(&c(1))), None);
    }

    #[test]
    fn square_roots() {
        let p = x().mul(&c(2)).add(&y()).sub(&c(1));
        let sq = p.mul(&p);
        let r = sq.sqrt_exact().unwrap();
        assert_eq!(r.mul(&r), sq);
        assert!(x().mul(&y()).sqrt_exact().is_none());
        assert!(x().pow(2).add(&c(1)).sqrt_exact().is_none());
    }

    #[test]
    fn content_normalization() {
        let p = x().scale(&Rational::new((-3).into(), 4.into())).add(&c(6));
        let n = p.content_normalized();
        assert_eq!(n, x().sub(&c(8)));
    }
}
