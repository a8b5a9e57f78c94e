//! Row-echelon spans of polynomials over ℚ, used to compare condition
//! systems up to linear combination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::symexpr::{Expr, Monomial, Rational};

type Vector = BTreeMap<Monomial, Rational>;

#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: BTreeMap<Monomial, Vector>,
}

fn vector_of(e: &Expr) -> Vector {
    e.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_exprs<'a>(gens: impl IntoIterator<Item = &'a Expr>) -> Self {
        let mut b = SpanBasis::new();
        for g in gens {
            b.insert(g);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vector) -> Vector {
        loop {
            let Some((m, c)) = v.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
                return v;
            };
            let Some(row) = self.rows.get(&m) else {
                return v;
            };
            for (n, k) in row {
                let e = v.entry(n.clone()).or_insert_with(Rational::zero);
                *e -= &c * k;
                if e.is_zero() {
                    v.remove(n);
                }
            }
        }
    }

    /// Adds the numerator of `e`; returns whether the span grew.
    pub fn insert(&mut self, e: &Expr) -> bool {
        let v = self.reduce(vector_of(e));
        let Some((pivot, lead)) = v.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / lead;
        let row = v.into_iter().map(|(m, c)| (m, c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }

    /// Whether the numerator of `e` is a ℚ-linear combination of the rows.
    pub fn contains(&self, e: &Expr) -> bool {
        self.reduce(vector_of(e)).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let x = Expr::coord("x");
        let y = Expr::coord("y");
        let b = SpanBasis::from_exprs(&[&x + &y, &x - &y, x.pow(2)]);
        assert_eq!(b.dim(), 3);
        assert!(b.contains(&(Expr::int(3) * &x)));
        assert!(b.contains(&(x.pow(2) - Expr::rational(1, 2) * &y)));
        assert!(!b.contains(&(&x * &y)));
        assert!(b.contains(&Expr::zero()));
    }
}
