use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::Expr;

/// An indeterminate of the polynomial ring: a coordinate, an applied
/// function symbol, or an elementary function of a sub-expression.
#[derive(Clone)]
pub struct Atom(Arc<AtomKind>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Coord(String),
    Func(FuncApp),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
}

/// An opaque function symbol applied to arguments, differentiated
/// `dorder[k]` times in its `k`-th slot.
///
/// `params` are the coordinate names the symbol was declared over; in the
/// ordinary case `args` is exactly those coordinates. Pullbacks and
/// substitutions can replace `args` with arbitrary expressions, in which case
/// derivatives are taken by the chain rule. A symbol with no parameters is a
/// constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncApp {
    pub name: String,
    pub params: Vec<String>,
    pub args: Vec<Expr>,
    pub dorder: Vec<u32>,
}

impl FuncApp {
    pub fn new(name: impl Into<String>, params: &[&str]) -> Self {
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        let args = params.iter().map(|p| Expr::coord(p)).collect();
        let dorder = vec![0; params.len()];
        FuncApp {
            name: name.into(),
            params,
            args,
            dorder,
        }
    }

    /// True when the arguments are the declared coordinates themselves.
    pub fn has_identity_args(&self) -> bool {
        self.params
            .iter()
            .zip(&self.args)
            .all(|(p, a)| a.as_coord() == Some(p.as_str()))
    }

    pub fn total_order(&self) -> u32 {
        self.dorder.iter().sum()
    }

    pub fn with_dorder(&self, dorder: Vec<u32>) -> Self {
        FuncApp {
            dorder,
            ..self.clone()
        }
    }

    pub fn with_args(&self, args: Vec<Expr>) -> Self {
        FuncApp {
            args,
            ..self.clone()
        }
    }
}

impl Atom {
    pub fn new(kind: AtomKind) -> Self {
        Atom(Arc::new(kind))
    }

    pub fn coord(name: &str) -> Self {
        Atom::new(AtomKind::Coord(name.to_string()))
    }

    pub fn kind(&self) -> &AtomKind {
        &self.0
    }

    pub fn is_elementary(&self) -> bool {
        matches!(*self.0, AtomKind::Sin(_) | AtomKind::Cos(_) | AtomKind::Exp(_))
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Atom {}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            AtomKind::Coord(name) => write!(f, "{name}"),
            AtomKind::Func(app) => write_func(f, app),
            AtomKind::Sin(e) => write!(f, "sin({e})"),
            AtomKind::Cos(e) => write!(f, "cos({e})"),
            AtomKind::Exp(e) => write!(f, "exp({e})"),
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Expr]) -> fmt::Result {
    write!(f, "(")?;
    for (k, a) in args.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

// Derivatives of a symbol at its own coordinates print as nested `diff`
// calls; derivatives at composite arguments use `D[orders](name)(args)`.
fn write_func(f: &mut fmt::Formatter<'_>, app: &FuncApp) -> fmt::Result {
    if app.params.is_empty() {
        return write!(f, "{}", app.name);
    }
    if app.total_order() > 0 && !app.has_identity_args() {
        write!(f, "D[")?;
        for (k, o) in app.dorder.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "]({})", app.name)?;
        return write_args(f, &app.args);
    }
    let nonzero: Vec<(usize, u32)> = app
        .dorder
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, o)| *o > 0)
        .collect();
    for _ in &nonzero {
        write!(f, "diff(")?;
    }
    write!(f, "{}", app.name)?;
    write_args(f, &app.args)?;
    for (k, o) in nonzero {
        if o == 1 {
            write!(f, ", {})", app.params[k])?;
        } else {
            write!(f, ", {}, {o})", app.params[k])?;
        }
    }
    Ok(())
}
