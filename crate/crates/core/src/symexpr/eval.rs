use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

use super::atom::{Atom, AtomKind};
use super::poly::Poly;
use super::{Expr, Substitution};
use crate::error::{Error, Result};

/// Numeric value of a function symbol: `(args, derivative orders) -> value`.
pub type FuncFn = Arc<dyn Fn(&[f64], &[u32]) -> Option<f64> + Send + Sync>;

/// Numeric bindings for function symbols, each able to supply the
/// derivative orders that appear in the expressions being evaluated.
#[derive(Clone, Default)]
pub struct FuncBindings {
    map: BTreeMap<String, FuncFn>,
}

impl fmt::Debug for FuncBindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.map.keys()).finish()
    }
}

impl FuncBindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind<F>(mut self, name: &str, f: F) -> Self
    where
        F: Fn(&[f64], &[u32]) -> Option<f64> + Send + Sync + 'static,
    {
        self.map.insert(name.to_string(), Arc::new(f));
        self
    }

    pub fn constant(self, name: &str, value: f64) -> Self {
        self.bind(name, move |_, order| {
            if order.iter().all(|o| *o == 0) {
                Some(value)
            } else {
                Some(0.0)
            }
        })
    }

    /// Binds `name` to an expression in its declared coordinates `params`;
    /// derivative orders are served by differentiating `body` symbolically
    /// once per order and caching the result.
    pub fn expr(self, name: &str, params: &[String], body: Expr) -> Self {
        let params: Vec<String> = params.to_vec();
        let cache: Mutex<BTreeMap<Vec<u32>, Expr>> = Mutex::new(BTreeMap::new());
        self.bind(name, move |args, order| {
            let d = {
                let mut c = cache.lock().ok()?;
                c.entry(order.to_vec())
                    .or_insert_with(|| {
                        let mut d = body.clone();
                        for (p, o) in params.iter().zip(order) {
                            d = d.derive_n(p, *o);
                        }
                        d
                    })
                    .clone()
            };
            let point: BTreeMap<String, f64> =
                params.iter().cloned().zip(args.iter().copied()).collect();
            d.eval(&point, &FuncBindings::new()).ok()
        })
    }

    pub fn get(&self, name: &str) -> Option<&FuncFn> {
        self.map.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn merge(mut self, other: &FuncBindings) -> Self {
        for (k, v) in &other.map {
            self.map.insert(k.clone(), v.clone());
        }
        self
    }
}

/// Builds the symbolic substitution equivalent of expression bindings.
pub fn bindings_as_substitution(bodies: &BTreeMap<String, Expr>) -> Substitution {
    bodies
        .iter()
        .fold(Substitution::new(), |s, (k, v)| s.func(k, v.clone()))
}

impl Expr {
    /// IEEE double evaluation at a coordinate point.
    pub fn eval(&self, point: &BTreeMap<String, f64>, funcs: &FuncBindings) -> Result<f64> {
        let mut cache: BTreeMap<Atom, f64> = BTreeMap::new();
        let n = eval_poly(self.num(), point, funcs, &mut cache)?;
        if self.den().is_one() {
            return Ok(n);
        }
        let d = eval_poly(self.den(), point, funcs, &mut cache)?;
        if d == 0.0 || !d.is_finite() {
            return Err(Error::NumericSingular(self.denominator().to_string()));
        }
        Ok(n / d)
    }
}

/// Free-function form of [`Expr::eval`].
pub fn eval_numeric(e: &Expr, point: &BTreeMap<String, f64>, funcs: &FuncBindings) -> Result<f64> {
    e.eval(point, funcs)
}

fn eval_poly(
    p: &Poly,
    point: &BTreeMap<String, f64>,
    funcs: &FuncBindings,
    cache: &mut BTreeMap<Atom, f64>,
) -> Result<f64> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut v = 1.0;
        for (a, e) in m.factors() {
            let x = match cache.get(a) {
                Some(x) => *x,
                None => {
                    let x = eval_atom(a, point, funcs)?;
                    cache.insert(a.clone(), x);
                    x
                }
            };
            v *= x.powi(*e as i32);
        }
        acc += v * c.to_f64().unwrap_or(f64::NAN);
    }
    Ok(acc)
}

fn eval_atom(a: &Atom, point: &BTreeMap<String, f64>, funcs: &FuncBindings) -> Result<f64> {
    match a.kind() {
        AtomKind::Coord(name) => point
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingBinding(name.clone())),
        AtomKind::Func(app) => {
            let f = funcs
                .get(&app.name)
                .ok_or_else(|| Error::MissingBinding(app.name.clone()))?;
            let args = app
                .args
                .iter()
                .map(|x| x.eval(point, funcs))
                .collect::<Result<Vec<f64>>>()?;
            f(&args, &app.dorder).ok_or_else(|| Error::MissingDerivative {
                name: app.name.clone(),
                order: app.dorder.clone(),
            })
        }
        AtomKind::Sin(x) => Ok(x.eval(point, funcs)?.sin()),
        AtomKind::Cos(x) => Ok(x.eval(point, funcs)?.cos()),
        AtomKind::Exp(x) => Ok(x.eval(point, funcs)?.exp()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: f64, x: f64, y: f64) -> BTreeMap<String, f64> {
        [("t", t), ("x", x), ("y", y)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }

    #[test]
    fn cubic_with_vanishing_symbol() {
        let x = Expr::coord("x");
        let e = x.pow(3) + Expr::func("a", &["y"]) * &x;
        let b = FuncBindings::new().constant("a", 0.0);
        assert_eq!(e.eval(&pt(0.0, 2.0, 0.0), &b).unwrap(), 8.0);
    }

    #[test]
    fn ricci_yy_value() {
        let e = Expr::int(-3) * Expr::coord("x");
        assert_eq!(e.eval(&pt(0.0, 1.0, 0.0), &FuncBindings::new()).unwrap(), -3.0);
    }

    #[test]
    fn derivative_binding() {
        let da = Expr::func("a", &["y"]).derive("y");
        let b = FuncBindings::new().expr("a", &["y".to_string()], Expr::coord("y").pow(2));
        assert_eq!(da.eval(&pt(0.0, 0.0, 1.0), &b).unwrap(), 2.0);
    }

    #[test]
    fn missing_binding_and_singular_denominator() {
        let a = Expr::func("a", &["y"]);
        assert!(matches!(
            a.eval(&pt(0.0, 0.0, 0.0), &FuncBindings::new()),
            Err(Error::MissingBinding(_))
        ));
        let e = Expr::one() / Expr::coord("x");
        assert!(matches!(
            e.eval(&pt(0.0, 0.0, 0.0), &FuncBindings::new()),
            Err(Error::NumericSingular(_))
        ));
    }
}
