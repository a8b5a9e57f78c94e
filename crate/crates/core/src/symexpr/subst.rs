use std::collections::BTreeMap;

use super::atom::{Atom, AtomKind};
use super::Expr;

/// A simultaneous substitution of coordinates and function symbols.
///
/// A function binding `a ← body` gives `body` as an expression in the
/// symbol's declared coordinates; derivative atoms of `a` become the matching
/// partial derivatives of `body`, evaluated at the (substituted) arguments.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    coords: BTreeMap<String, Expr>,
    funcs: BTreeMap<String, Expr>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn coord(mut self, name: &str, value: Expr) -> Self {
        self.coords.insert(name.to_string(), value);
        self
    }

    pub fn func(mut self, name: &str, body: Expr) -> Self {
        self.funcs.insert(name.to_string(), body);
        self
    }

    pub fn coord_bindings(&self) -> &BTreeMap<String, Expr> {
        &self.coords
    }

    pub fn func_bindings(&self) -> &BTreeMap<String, Expr> {
        &self.funcs
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty() && self.funcs.is_empty()
    }

    pub fn apply(&self, e: &Expr) -> Expr {
        if self.is_empty() {
            return e.clone();
        }
        e.map_atoms(&mut |a| self.apply_atom(a))
    }

    fn apply_atom(&self, a: &Atom) -> Expr {
        match a.kind() {
            AtomKind::Coord(name) => self
                .coords
                .get(name)
                .cloned()
                .unwrap_or_else(|| Expr::atom(a.clone())),
            AtomKind::Func(app) => {
                let args: Vec<Expr> = app.args.iter().map(|x| self.apply(x)).collect();
                match self.funcs.get(&app.name) {
                    Some(body) => {
                        let mut d = body.clone();
                        for (p, o) in app.params.iter().zip(&app.dorder) {
                            d = d.derive_n(p, *o);
                        }
                        let at_args = app
                            .params
                            .iter()
                            .zip(args)
                            .fold(Substitution::new(), |s, (p, x)| s.coord(p, x));
                        at_args.apply(&d)
                    }
                    None if args == app.args => Expr::atom(a.clone()),
                    None => Expr::func_app(app.with_args(args)),
                }
            }
            AtomKind::Sin(x) => Expr::sin(self.apply(x)),
            AtomKind::Cos(x) => Expr::cos(self.apply(x)),
            AtomKind::Exp(x) => Expr::exp(self.apply(x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_expands_cube() {
        let x = Expr::coord("x");
        let phi = Expr::func("phi", &["y"]);
        let s = Substitution::new().coord("x", &x + &phi);
        let got = s.apply(&x.pow(3));
        let want = &(&(&x.pow(3) + &(Expr::int(3) * &phi * x.pow(2))) + &(Expr::int(3) * phi.pow(2) * &x)) + &phi.pow(3);
        assert_eq!(got, want);
    }

    #[test]
    fn derivative_atoms_follow_the_body() {
        let a = Expr::func("a", &["y"]);
        let da = a.derive("y").derive("y");
        let y = Expr::coord("y");
        let s = Substitution::new().func("a", y.pow(3));
        assert_eq!(s.apply(&da), Expr::int(6) * y);
    }

    #[test]
    fn identity_is_noop() {
        let e = Expr::coord("x") * Expr::func("a", &["y"]) + Expr::sin(Expr::coord("t"));
        let s = Substitution::new()
            .coord("t", Expr::coord("t"))
            .coord("x", Expr::coord("x"));
        assert_eq!(s.apply(&e), e);
    }

    #[test]
    fn composite_arguments_use_the_chain_rule() {
        let b = Expr::func("b", &["y"]);
        let y = Expr::coord("y");
        let s = Substitution::new().coord("y", Expr::int(2) * &y + Expr::int(1));
        let composed = s.apply(&b);
        let d = composed.derive("y");
        let bound = Substitution::new().func("b", y.pow(2));
        // b(2y+1) = (2y+1)^2, derivative 4(2y+1)
        assert_eq!(bound.apply(&d), Expr::int(4) * (Expr::int(2) * &y + Expr::int(1)));
    }
}
