//! Exact symbolic expressions: canonical rational functions over ℚ in
//! coordinates, opaque function symbols (with derivative orders) and
//! elementary-function atoms.

mod atom;
mod eval;
mod expr;
mod gcd;
mod heu;
mod parse;
mod poly;
mod subst;

pub use atom::{Atom, AtomKind, FuncApp};
pub use eval::{bindings_as_substitution, eval_numeric, FuncBindings, FuncFn};
pub use expr::Expr;
pub use parse::{parse_expr, RESERVED};
pub use poly::{Monomial, Poly};
pub use subst::Substitution;

pub type Rational = num_rational::BigRational;

/// Partial derivative of `e` with respect to the coordinate `coord`.
pub fn derive(e: &Expr, coord: &str) -> Expr {
    e.derive(coord)
}

/// True iff `e` is identically zero in canonical form.
pub fn is_zero(e: &Expr) -> bool {
    e.is_zero()
}

/// Simultaneous substitution followed by renormalization.
pub fn substitute(e: &Expr, s: &Substitution) -> Expr {
    s.apply(e)
}
