use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::atom::{Atom, AtomKind, FuncApp};
use super::gcd::gcd;
use super::poly::{Monomial, Poly};
use super::Rational;

/// A canonical rational expression: `num / den` with coprime numerator and
/// denominator and a monic (lex-leading coefficient one) denominator.
///
/// Two expressions in the decidable class are equal iff their canonical
/// forms are structurally equal, so `==` is semantic equality there.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Frac>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Expr {
    fn from_poly(num: Poly) -> Self {
        Expr(Arc::new(Frac {
            num,
            den: Poly::one(),
        }))
    }

    /// Builds `num / den` in canonical form. `den` must be nonzero.
    pub(crate) fn from_parts(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = den.as_constant() {
            return Expr::from_poly(num.scale(&c.recip()));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Expr::from_coprime(num, den)
    }

    /// Canonical form of `num / den` when the two are already coprime.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if let Some(c) = den.as_constant() {
            return Expr::from_poly(num.scale(&c.recip()));
        }
        if lc.is_one() {
            Expr(Arc::new(Frac { num, den }))
        } else {
            let inv = lc.recip();
            Expr(Arc::new(Frac {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }))
        }
    }

    pub fn zero() -> Self {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Expr::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::from_poly(Poly::constant(Rational::from_integer(n.into())))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::from_poly(Poly::constant(Rational::new(n.into(), d.into())))
    }

    pub fn from_rational(q: Rational) -> Self {
        Expr::from_poly(Poly::constant(q))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::from_poly(Poly::atom(a))
    }

    pub fn coord(name: &str) -> Self {
        Expr::atom(Atom::coord(name))
    }

    /// An opaque function symbol applied to its declared coordinates.
    pub fn func(name: &str, params: &[&str]) -> Self {
        Expr::func_app(FuncApp::new(name, params))
    }

    /// A constant symbol (a function symbol with no arguments).
    pub fn constant(name: &str) -> Self {
        Expr::func(name, &[])
    }

    pub fn func_app(app: FuncApp) -> Self {
        Expr::atom(Atom::new(AtomKind::Func(app)))
    }

    pub fn sin(arg: Expr) -> Self {
        if arg.is_zero() {
            return Expr::zero();
        }
        Expr::atom(Atom::new(AtomKind::Sin(arg)))
    }

    pub fn cos(arg: Expr) -> Self {
        if arg.is_zero() {
            return Expr::one();
        }
        Expr::atom(Atom::new(AtomKind::Cos(arg)))
    }

    pub fn exp(arg: Expr) -> Self {
        if arg.is_zero() {
            return Expr::one();
        }
        Expr::atom(Atom::new(AtomKind::Exp(arg)))
    }

    pub(crate) fn num(&self) -> &Poly {
        &self.0.num
    }

    pub(crate) fn den(&self) -> &Poly {
        &self.0.den
    }

    pub fn numerator(&self) -> Expr {
        Expr::from_poly(self.0.num.clone())
    }

    pub fn denominator(&self) -> Expr {
        Expr::from_poly(self.0.den.clone())
    }

    /// True iff the canonical form is the zero fraction.
    ///
    /// Sound and complete for rational expressions in coordinates and
    /// function-symbol atoms. Elementary-function atoms are treated as
    /// independent indeterminates, so identities such as
    /// `sin(x)^2 + cos(x)^2 - 1` are not recognised (false negatives only).
    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.den.is_one() && self.0.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.0.den.is_one() {
            self.0.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        self.as_rational().and_then(|q| q.to_f64())
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        if !self.0.den.is_one() || self.0.num.len() != 1 {
            return None;
        }
        let (m, c) = self.0.num.terms().next()?;
        match m.factors() {
            [(a, 1)] if c.is_one() => Some(a),
            _ => None,
        }
    }

    pub fn as_coord(&self) -> Option<&str> {
        match self.as_atom()?.kind() {
            AtomKind::Coord(name) => Some(name),
            _ => None,
        }
    }

    /// Every atom occurring at the top level of numerator or denominator.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.0.num.atoms();
        s.extend(self.0.den.atoms());
        s
    }

    /// Atoms at every nesting depth, including inside function arguments.
    pub fn all_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Atom> = self.atoms().into_iter().collect();
        while let Some(a) = stack.pop() {
            if !out.insert(a.clone()) {
                continue;
            }
            match a.kind() {
                AtomKind::Coord(_) => {}
                AtomKind::Func(app) => {
                    for arg in &app.args {
                        stack.extend(arg.atoms());
                    }
                }
                AtomKind::Sin(e) | AtomKind::Cos(e) | AtomKind::Exp(e) => {
                    stack.extend(e.atoms());
                }
            }
        }
        out
    }

    /// Coordinates the expression depends on, at any depth.
    pub fn coords(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.all_atoms() {
            match a.kind() {
                AtomKind::Coord(n) => {
                    out.insert(n.clone());
                }
                AtomKind::Func(app) if app.has_identity_args() => {
                    out.extend(app.params.iter().cloned());
                }
                _ => {}
            }
        }
        out
    }

    pub fn has_elementary(&self) -> bool {
        self.all_atoms().iter().any(Atom::is_elementary)
    }

    pub fn pow(&self, e: i32) -> Expr {
        let p = e.unsigned_abs();
        let num = self.0.num.pow(p);
        let den = self.0.den.pow(p);
        if e >= 0 {
            Expr::from_parts(num, den)
        } else {
            assert!(!num.is_zero(), "negative power of zero");
            Expr::from_parts(den, num)
        }
    }

    pub fn checked_div(&self, other: &Expr) -> Option<Expr> {
        if other.is_zero() {
            None
        } else {
            Some(self * &other.recip())
        }
    }

    pub fn recip(&self) -> Expr {
        assert!(!self.is_zero(), "reciprocal of zero");
        Expr::from_parts(self.0.den.clone(), self.0.num.clone())
    }

    pub fn scale(&self, q: &Rational) -> Expr {
        if q.is_zero() {
            return Expr::zero();
        }
        Expr(Arc::new(Frac {
            num: self.0.num.scale(q),
            den: self.0.den.clone(),
        }))
    }

    /// Numerator divided by its rational content with a positive leading
    /// coefficient; denominators are dropped. Two expressions that differ by
    /// a nonzero rational factor normalize to the same polynomial.
    pub fn content_normalized(&self) -> Expr {
        Expr::from_poly(self.0.num.content_normalized())
    }

    /// Exact square root when numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Expr> {
        let n = self.0.num.sqrt_exact()?;
        let d = self.0.den.sqrt_exact()?;
        Some(Expr::from_parts(n, d))
    }

    /// Rewrites `atom^k` as `value^(k/2) * atom^(k mod 2)` throughout the top
    /// level, imposing the relation `atom^2 = value`.
    pub fn reduce_square(&self, atom: &Atom, value: &Expr) -> Expr {
        let reduce = |p: &Poly| -> Expr {
            let mut acc = Expr::zero();
            for (k, c) in p.coeffs_in(atom).into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let base = Expr::from_poly(c).mul(&value.pow((k / 2) as i32));
                acc = if k % 2 == 1 {
                    &acc + &(&base * &Expr::atom(atom.clone()))
                } else {
                    &acc + &base
                };
            }
            acc
        };
        &reduce(&self.0.num) / &reduce(&self.0.den)
    }

    /// Formal partial derivative with respect to a coordinate.
    pub fn derive(&self, coord: &str) -> Expr {
        let mut cache = BTreeMap::new();
        let dn = derive_poly(&self.0.num, coord, &mut cache);
        if self.0.den.is_one() {
            return dn;
        }
        let dd = derive_poly(&self.0.den, coord, &mut cache);
        if dd.is_zero() {
            return &dn * &Expr::from_parts(Poly::one(), self.0.den.clone());
        }
        // With g = gcd(D, D'), (n'D - nD')/D^2 = (n'(D/g) - n(D'/g)) / (D (D/g)),
        // and any factor shared by the new numerator and denominator divides g.
        if !dd.0.den.is_one() {
            let n = Expr::from_poly(self.0.num.clone());
            let d = Expr::from_poly(self.0.den.clone());
            let top = &(&dn * &d) - &(&n * &dd);
            return &top / &(&d * &d);
        }
        let d = &self.0.den;
        let dd = &dd.0.num;
        let g = gcd(d, dd);
        let dg = d.div_exact(&g).expect("gcd divides");
        let ddg = dd.div_exact(&g).expect("gcd divides");
        let top = &(&dn * &Expr::from_poly(dg.clone())) - &Expr::from_poly(self.0.num.mul(&ddg));
        let den = d.mul(&dg);
        if top.0.den.is_one() {
            let h = gcd(&top.0.num, &g);
            if h.is_one() {
                return Expr::from_coprime(top.0.num.clone(), den);
            }
            let num = top.0.num.div_exact(&h).expect("gcd divides");
            return Expr::from_coprime(num, den.div_exact(&h).expect("gcd divides"));
        }
        &top / &Expr::from_poly(den)
    }

    pub fn derive_n(&self, coord: &str, n: u32) -> Expr {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.derive(coord);
        }
        e
    }

    /// Polynomial view with atom-level rewriting: rebuilds the expression
    /// with every atom mapped through `f`.
    pub(crate) fn map_atoms(&self, f: &mut dyn FnMut(&Atom) -> Expr) -> Expr {
        let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
        let mut eval_poly = |p: &Poly, cache: &mut BTreeMap<Atom, Expr>| -> Expr {
            let mut acc = Expr::zero();
            for (m, c) in p.terms() {
                let mut t = Expr::from_rational(c.clone());
                for (a, e) in m.factors() {
                    let v = cache.entry(a.clone()).or_insert_with(|| f(a)).clone();
                    t = &t * &v.pow(*e as i32);
                }
                acc = &acc + &t;
            }
            acc
        };
        let n = eval_poly(&self.0.num, &mut cache);
        if self.0.den.is_one() {
            return n;
        }
        let d = eval_poly(&self.0.den, &mut cache);
        n.checked_div(&d)
            .expect("atom rewrite sent the denominator to zero")
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.num.terms()
    }
}

fn derive_atom(a: &Atom, coord: &str) -> Expr {
    match a.kind() {
        AtomKind::Coord(name) => {
            if name == coord {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        AtomKind::Func(app) => {
            let mut acc = Expr::zero();
            for (k, arg) in app.args.iter().enumerate() {
                let da = arg.derive(coord);
                if da.is_zero() {
                    continue;
                }
                let mut dorder = app.dorder.clone();
                dorder[k] += 1;
                acc = &acc + &(&da * &Expr::func_app(app.with_dorder(dorder)));
            }
            acc
        }
        AtomKind::Sin(e) => &e.derive(coord) * &Expr::cos(e.clone()),
        AtomKind::Cos(e) => -&(&e.derive(coord) * &Expr::sin(e.clone())),
        AtomKind::Exp(e) => &e.derive(coord) * &Expr::exp(e.clone()),
    }
}

fn derive_poly(p: &Poly, coord: &str, cache: &mut BTreeMap<Atom, Expr>) -> Expr {
    let mut acc = Expr::zero();
    for a in p.atoms() {
        let da = cache
            .entry(a.clone())
            .or_insert_with(|| derive_atom(&a, coord))
            .clone();
        if da.is_zero() {
            continue;
        }
        let part = Expr::from_poly(p.partial(&a));
        acc = &acc + &(&part * &da);
    }
    acc
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.0.den == rhs.0.den {
            let num = self.0.num.add(&rhs.0.num);
            if self.0.den.is_one() {
                return Expr::from_poly(num);
            }
            return Expr::from_parts(num, self.0.den.clone());
        }
        // For reduced operands only factors of gcd(d1, d2) can cancel.
        let (d1, d2) = (&self.0.den, &rhs.0.den);
        let d = gcd(d1, d2);
        let e1 = d1.div_exact(&d).expect("gcd divides");
        let e2 = d2.div_exact(&d).expect("gcd divides");
        let num = self.0.num.mul(&e2).add(&rhs.0.num.mul(&e1));
        if num.is_zero() {
            return Expr::zero();
        }
        let g = gcd(&num, &d);
        if g.is_one() {
            return Expr::from_coprime(num, d1.mul(&e2));
        }
        let num = num.div_exact(&g).expect("gcd divides");
        let d = d.div_exact(&g).expect("gcd divides");
        Expr::from_coprime(num, d.mul(&e1).mul(&e2))
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.0.den.is_one() && rhs.0.den.is_one() {
            return Expr::from_poly(self.0.num.mul(&rhs.0.num));
        }
        // Both operands are reduced, so cancelling across suffices.
        let g1 = gcd(&self.0.num, &rhs.0.den);
        let g2 = gcd(&rhs.0.num, &self.0.den);
        let n1 = self.0.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.0.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.0.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.0.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        if let Some(c) = den.as_constant() {
            return Expr::from_poly(num.scale(&c.recip()));
        }
        let inv = lc.recip();
        Expr(Arc::new(Frac {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }))
    }
}

impl<'a> Div<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        self.checked_div(rhs).expect("division by the zero expression")
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Arc::new(Frac {
            num: self.0.num.neg(),
            den: self.0.den.clone(),
        }))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Expr> for &'a Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::from_rational(q)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.den.is_one() {
            write_poly(f, &self.0.num)
        } else {
            write!(f, "(")?;
            write_poly(f, &self.0.num)?;
            write!(f, ")/(")?;
            write_poly(f, &self.0.den)?;
            write!(f, ")")
        }
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
    terms.sort_by(|a, b| b.0.lex_cmp(a.0));
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if m.is_one() {
            write!(f, "{mag}")?;
            continue;
        }
        if !mag.is_one() {
            write!(f, "{mag}*")?;
        }
        for (j, (a, e)) in m.factors().iter().rev().enumerate() {
            if j > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
    }
    Ok(())
}
