use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symexpr::{parse_expr, AtomKind, Expr, Substitution, RESERVED};

/// Three ordered coordinate names plus the declared function symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    coords: [String; 3],
    funcs: BTreeMap<String, Vec<String>>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new(coords: [&str; 3]) -> Result<Self> {
        for (i, c) in coords.iter().enumerate() {
            if !valid_ident(c) || RESERVED.contains(c) {
                return Err(Error::InvalidChart(format!("bad coordinate name `{c}`")));
            }
            if coords[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
        }
        Ok(Chart {
            coords: coords.map(str::to_string),
            funcs: BTreeMap::new(),
        })
    }

    /// The `(t, x, y)` chart used by every Walker family.
    pub fn txy() -> Self {
        Chart::new(["t", "x", "y"]).expect("valid names")
    }

    pub fn coords(&self) -> &[String; 3] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn coord_expr(&self, i: usize) -> Expr {
        Expr::coord(&self.coords[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn func_params(&self, name: &str) -> Option<&[String]> {
        self.funcs.get(name).map(Vec::as_slice)
    }

    pub fn funcs(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.funcs.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Declares a function symbol over a subset of the coordinates; an empty
    /// parameter list declares a constant.
    pub fn declare(&mut self, name: &str, params: &[&str]) -> Result<()> {
        if !valid_ident(name) || RESERVED.contains(&name) || self.index_of(name).is_some() {
            return Err(Error::InvalidChart(format!("bad function name `{name}`")));
        }
        for (i, p) in params.iter().enumerate() {
            if self.index_of(p).is_none() {
                return Err(Error::InvalidChart(format!(
                    "`{name}` depends on `{p}`, which is not a coordinate"
                )));
            }
            if params[..i].contains(p) {
                return Err(Error::InvalidChart(format!("`{name}` repeats `{p}`")));
            }
        }
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        match self.funcs.get(name) {
            Some(existing) if *existing != params => Err(Error::InvalidChart(format!(
                "`{name}` redeclared with different arguments"
            ))),
            _ => {
                self.funcs.insert(name.to_string(), params);
                Ok(())
            }
        }
    }

    pub fn with_func(mut self, name: &str, params: &[&str]) -> Result<Self> {
        self.declare(name, params)?;
        Ok(self)
    }

    /// The function symbol `name` applied to its declared coordinates.
    pub fn func(&self, name: &str) -> Result<Expr> {
        let params = self
            .func_params(name)
            .ok_or_else(|| Error::Undeclared(name.to_string()))?;
        let p: Vec<&str> = params.iter().map(String::as_str).collect();
        Ok(Expr::func(name, &p))
    }

    pub fn parse(&self, src: &str) -> Result<Expr> {
        parse_expr(src, self)
    }

    /// Fails on the first coordinate or function symbol not declared here.
    pub fn check_declared(&self, e: &Expr) -> Result<()> {
        for a in e.all_atoms() {
            match a.kind() {
                AtomKind::Coord(n) if self.index_of(n).is_none() => {
                    return Err(Error::Undeclared(n.clone()))
                }
                AtomKind::Func(app) => match self.func_params(&app.name) {
                    Some(p) if *p == app.params[..] => {}
                    _ => return Err(Error::Undeclared(app.name.clone())),
                },
                _ => {}
            }
        }
        Ok(())
    }

    /// Substitution whose bindings and result must stay inside this chart.
    pub fn substitute(&self, e: &Expr, s: &Substitution) -> Result<Expr> {
        for (name, v) in s.coord_bindings() {
            if self.index_of(name).is_none() {
                return Err(Error::Undeclared(name.clone()));
            }
            self.check_declared(v)?;
        }
        for (name, v) in s.func_bindings() {
            if self.func_params(name).is_none() {
                return Err(Error::Undeclared(name.clone()));
            }
            self.check_declared(v)?;
        }
        let out = s.apply(e);
        self.check_declared(&out)?;
        Ok(out)
    }

    /// Merges the function declarations of `other` (same coordinates required).
    pub fn merged(&self, other: &Chart) -> Result<Chart> {
        if self.coords != other.coords {
            return Err(Error::InvalidChart("coordinate lists differ".into()));
        }
        let mut out = self.clone();
        for (name, params) in &other.funcs {
            let p: Vec<&str> = params.iter().map(String::as_str).collect();
            out.declare(name, &p)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_charts() {
        assert!(Chart::new(["t", "t", "y"]).is_err());
        assert!(Chart::new(["t", "sin", "y"]).is_err());
        let mut c = Chart::txy();
        assert!(c.declare("a", &["z"]).is_err());
        assert!(c.declare("x", &[]).is_err());
        c.declare("a", &["y"]).unwrap();
        assert!(c.declare("a", &["x"]).is_err());
    }

    #[test]
    fn substitution_must_stay_declared() {
        let c = Chart::txy().with_func("a", &["y"]).unwrap();
        let e = c.parse("a(y)*x").unwrap();
        let bad = Substitution::new().coord("x", Expr::func("b", &["y"]));
        assert!(matches!(c.substitute(&e, &bad), Err(Error::Undeclared(_))));
        let ok = Substitution::new().func("a", Expr::coord("y"));
        assert_eq!(c.substitute(&e, &ok).unwrap(), c.parse("x*y").unwrap());
    }
}
