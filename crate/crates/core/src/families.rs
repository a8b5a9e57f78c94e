//! Metric families in Walker coordinates `(t, x, y)`, coordinate maps and
//! pullback-based isometry checks.

use crate::error::{Error, Result};
use crate::report::{tensor_residuals, Check};
use crate::symexpr::{Atom, AtomKind, Expr, Rational, Substitution};
use crate::tensor::{det3, Chart, MetricChart, Signature, TensorField};

/// The `(t, x, y)` chart with every function symbol of `exprs` declared.
pub fn chart_for<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> Result<Chart> {
    let mut c = Chart::txy();
    declare_all(&mut c, exprs)?;
    Ok(c)
}

fn declare_all<'a>(c: &mut Chart, exprs: impl IntoIterator<Item = &'a Expr>) -> Result<()> {
    for e in exprs {
        for a in e.all_atoms() {
            if let AtomKind::Func(app) = a.kind() {
                let p: Vec<&str> = app.params.iter().map(String::as_str).collect();
                c.declare(&app.name, &p)?;
            }
        }
    }
    Ok(())
}

/// `dt dy + dx² + f dy²`, i.e. `g_ty = 1`, `g_xx = 1`, `g_yy = f`.
pub fn walker(f: &Expr) -> Result<MetricChart> {
    let chart = chart_for([f])?;
    let g = [
        [Expr::zero(), Expr::zero(), Expr::one()],
        [Expr::zero(), Expr::one(), Expr::zero()],
        [Expr::one(), Expr::zero(), f.clone()],
    ];
    MetricChart::from_matrix(chart, g, Signature::LORENTZIAN)
}

fn require_free_of(e: &Expr, coords: &[&str], what: &str) -> Result<()> {
    for c in coords {
        if !e.derive(c).is_zero() {
            return Err(Error::InvalidParameter(format!("{what} depends on {c}")));
        }
    }
    Ok(())
}

/// Walker metric with `f` independent of `t`.
pub fn strict_walker(f: &Expr) -> Result<MetricChart> {
    require_free_of(f, &["t"], "f")?;
    walker(f)
}

/// `g_𝔞 = dt dy + dx² + (x³ + 𝔞(y) x) dy²`.
pub fn theorem_metric(a: &Expr) -> Result<MetricChart> {
    require_free_of(a, &["t", "x"], "𝔞")?;
    strict_walker(&theorem_profile(a))
}

pub fn theorem_profile(a: &Expr) -> Expr {
    let x = Expr::coord("x");
    &x.pow(3) + &(a * &x)
}

/// `f = κx³ + 𝒜x² + ℬx + 𝒞` with `κ ≠ 0`.
pub fn family6(kappa: &Rational, a: &Expr, b: &Expr, c: &Expr) -> Result<MetricChart> {
    if kappa == &Rational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("κ must be nonzero".into()));
    }
    for (e, n) in [(a, "𝒜"), (b, "ℬ"), (c, "𝒞")] {
        require_free_of(e, &["t", "x"], n)?;
    }
    strict_walker(&family6_profile(&Expr::from_rational(kappa.clone()), a, b, c))
}

pub fn family6_profile(kappa: &Expr, a: &Expr, b: &Expr, c: &Expr) -> Expr {
    let x = Expr::coord("x");
    &(&(&(kappa * &x.pow(3)) + &(a * &x.pow(2))) + &(b * &x)) + c
}

/// `g_{𝔟,κ}`: `f = κx³ + 𝔟(y)x`; `κ` may be symbolic.
pub fn cubic_metric(kappa: &Expr, b: &Expr) -> Result<MetricChart> {
    let z = Expr::zero();
    strict_walker(&family6_profile(kappa, &z, b, &z))
}

/// `±dt² + g_N` with the 2D block placed on `(x, y)`. `g_N` is taken as
/// Riemannian unless its determinant is a negative constant.
pub fn product_metric(sign: i8, gn: &[[Expr; 2]; 2]) -> Result<MetricChart> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParameter("sign must be ±1".into()));
    }
    if gn[0][1] != gn[1][0] {
        return Err(Error::Asymmetric { i: 1, j: 2 });
    }
    for e in gn.iter().flatten() {
        require_free_of(e, &["t"], "g_N")?;
    }
    let chart = chart_for(gn.iter().flatten())?;
    let detn = &(&gn[0][0] * &gn[1][1]) - &(&gn[0][1] * &gn[1][0]);
    let n_neg = match detn.as_f64() {
        Some(d) if d < 0.0 => 1,
        _ => 0,
    };
    let g = [
        [Expr::int(sign as i64), Expr::zero(), Expr::zero()],
        [Expr::zero(), gn[0][0].clone(), gn[0][1].clone()],
        [Expr::zero(), gn[1][0].clone(), gn[1][1].clone()],
    ];
    let negative = n_neg + u8::from(sign < 0);
    MetricChart::from_matrix(chart, g, Signature { negative })
}

/// A coordinate map `p ↦ (Φ^t, Φ^x, Φ^y)(p)` between two copies of the same
/// coordinate names. Relations `c² = v` on constant atoms are imposed after
/// every substitution.
#[derive(Clone, Debug)]
pub struct CoordMap {
    chart: Chart,
    comps: [Expr; 3],
    relations: Vec<(Atom, Expr)>,
    inverse: Option<Box<CoordMap>>,
}

impl CoordMap {
    pub fn new(chart: &Chart, comps: [Expr; 3]) -> Result<Self> {
        let mut chart = chart.clone();
        declare_all(&mut chart, comps.iter())?;
        Ok(CoordMap {
            chart,
            comps,
            relations: Vec::new(),
            inverse: None,
        })
    }

    pub fn identity(chart: &Chart) -> Self {
        CoordMap {
            chart: chart.clone(),
            comps: std::array::from_fn(|i| chart.coord_expr(i)),
            relations: Vec::new(),
            inverse: None,
        }
    }

    /// Imposes `atom² = value`.
    pub fn with_relation(mut self, atom: Atom, value: Expr) -> Self {
        self.relations.push((atom, value));
        let comps = self.comps.clone().map(|c| self.reduce_with(&c));
        self.comps = comps;
        self
    }

    /// Attaches an inverse, checking both compositions are the identity.
    pub fn with_inverse(mut self, inv: CoordMap) -> Result<Self> {
        let id = CoordMap::identity(&self.chart);
        let mut inv = inv;
        inv.relations.extend(self.relations.iter().cloned());
        if self.compose(&inv).comps != id.comps || inv.compose(&self).comps != id.comps {
            return Err(Error::InvalidParameter("inverse does not compose to the identity".into()));
        }
        self.inverse = Some(Box::new(inv));
        Ok(self)
    }

    pub fn comps(&self) -> &[Expr; 3] {
        &self.comps
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn inverse(&self) -> Option<&CoordMap> {
        self.inverse.as_deref()
    }

    fn reduce_with(&self, e: &Expr) -> Expr {
        self.relations
            .iter()
            .fold(e.clone(), |acc, (a, v)| acc.reduce_square(a, v))
    }

    fn substitution(&self) -> Substitution {
        (0..3).fold(Substitution::new(), |s, i| {
            s.coord(self.chart.coord(i), self.comps[i].clone())
        })
    }

    /// `e ∘ Φ`.
    pub fn apply(&self, e: &Expr) -> Expr {
        self.reduce_with(&self.substitution().apply(e))
    }

    /// `self ∘ inner`, i.e. `p ↦ self(inner(p))`.
    pub fn compose(&self, inner: &CoordMap) -> CoordMap {
        let mut relations = inner.relations.clone();
        relations.extend(self.relations.iter().cloned());
        let chart = inner.chart.merged(&self.chart).unwrap_or_else(|_| inner.chart.clone());
        let mut out = CoordMap {
            chart,
            comps: self.comps.clone(),
            relations,
            inverse: None,
        };
        out.comps = self.comps.clone().map(|c| inner.apply(&c));
        out.comps = out.comps.clone().map(|c| out.reduce_with(&c));
        out
    }

    /// `J[a][i] = ∂_i Φ^a`.
    pub fn jacobian(&self) -> [[Expr; 3]; 3] {
        std::array::from_fn(|a| {
            std::array::from_fn(|i| self.reduce_with(&self.comps[a].derive(self.chart.coord(i))))
        })
    }
}

/// `(Φ*g)_ij = ∂_iΦ^a ∂_jΦ^b (g_ab ∘ Φ)`.
pub fn pullback(m: &MetricChart, map: &CoordMap) -> Result<MetricChart> {
    if m.chart().coords() != map.chart().coords() {
        return Err(Error::InvalidChart("map and metric use different coordinates".into()));
    }
    let j = map.jacobian();
    if map.reduce_with(&det3(&j)).is_zero() {
        return Err(Error::SingularJacobian);
    }
    let gphi: [[Expr; 3]; 3] =
        std::array::from_fn(|a| std::array::from_fn(|b| map.apply(m.g(a, b))));
    let g: [[Expr; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut acc = Expr::zero();
            for a in 0..3 {
                if j[a][i].is_zero() {
                    continue;
                }
                for b in 0..3 {
                    if j[b][k].is_zero() || gphi[a][b].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&j[a][i] * &j[b][k]) * &gphi[a][b]);
                }
            }
            map.reduce_with(&acc)
        })
    });
    let chart = m.chart().merged(map.chart())?;
    let mut chart = chart;
    declare_all(&mut chart, g.iter().flatten())?;
    MetricChart::from_matrix(chart, g, m.signature())
}

/// Passes iff `map* target = source` componentwise.
pub fn verify_isometry(source: &MetricChart, target: &MetricChart, map: &CoordMap) -> Result<Check> {
    let pulled = pullback(target, map)?;
    let diff = TensorField::from_fn(vec![crate::tensor::Slot::Down; 2], |i| {
        map.reduce_with(&(pulled.g(i[0], i[1]) - source.g(i[0], i[1])))
    });
    let chart = pulled.chart().merged(source.chart()).unwrap_or_else(|_| pulled.chart().clone());
    let residuals = tensor_residuals(&diff, &chart);
    Ok(Check::expect(
        "isometry",
        residuals.is_empty(),
        "pullback of the target metric equals the source metric",
    )
    .with_residuals(residuals))
}

/// `T(t,x,y) = (t − φ'(y)x + ψ(y), x + φ(y), y)`.
pub fn t_map(phi: &Expr, psi: &Expr) -> Result<CoordMap> {
    let (t, x, y) = (Expr::coord("t"), Expr::coord("x"), Expr::coord("y"));
    let comps = [&(&t - &(&phi.derive("y") * &x)) + psi, &x + phi, y];
    CoordMap::new(&Chart::txy(), comps)
}

/// `f̃ = f(x+φ, y) − 2xφ'' + φ'² + 2ψ'`, the profile with `T* g_f = g_f̃`.
pub fn t_map_profile(f: &Expr, phi: &Expr, psi: &Expr) -> Expr {
    let x = Expr::coord("x");
    let shifted = Substitution::new().coord("x", &x + phi).apply(f);
    let p1 = phi.derive("y");
    let two = Expr::int(2);
    &(&(&shifted - &(&(&two * &x) * &phi.derive_n("y", 2))) + &p1.pow(2)) + &(&two * &psi.derive("y"))
}

/// `T̃(t,x,y) = (c t, εx, y/c)` with `c = √(εκ)` carried as the constant
/// atom `c`, and `ε = sign κ`.
pub fn t_tilde_map(kappa: &Rational) -> Result<(CoordMap, Atom)> {
    let zero = Rational::from_integer(0.into());
    if kappa == &zero {
        return Err(Error::InvalidParameter("κ must be nonzero".into()));
    }
    let eps = if kappa > &zero { 1 } else { -1 };
    let c = Expr::constant("c");
    let atom = c.as_atom().expect("atom").clone();
    let (t, x, y) = (Expr::coord("t"), Expr::coord("x"), Expr::coord("y"));
    let comps = [&c * &t, &Expr::int(eps) * &x, &y / &c];
    let value = Expr::from_rational(kappa * Rational::from_integer(eps.into()));
    let map = CoordMap::new(&Chart::txy(), comps)?.with_relation(atom.clone(), value);
    Ok((map, atom))
}

/// `Φ(t,x,y) = (ε₂t + β, x, ε₂y + α)`.
pub fn phi_map(eps2: i8, alpha: &Expr, beta: &Expr) -> Result<CoordMap> {
    if eps2 != 1 && eps2 != -1 {
        return Err(Error::InvalidParameter("ε₂ must be ±1".into()));
    }
    let e = Expr::int(eps2 as i64);
    let (t, x, y) = (Expr::coord("t"), Expr::coord("x"), Expr::coord("y"));
    let map = CoordMap::new(&Chart::txy(), [&(&e * &t) + beta, x.clone(), &(&e * &y) + alpha])?;
    let inv = CoordMap::new(
        &Chart::txy(),
        [&e * &(&t - beta), x, &e * &(&y - alpha)],
    )?;
    map.with_inverse(inv)
}

/// `𝔟(ε₂y + α)`.
pub fn reparametrized(b: &Expr, eps2: i8, alpha: &Expr) -> Expr {
    let y = Expr::coord("y");
    Substitution::new()
        .coord("y", &(&Expr::int(eps2 as i64) * &y) + alpha)
        .apply(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y_fn(name: &str) -> Expr {
        Expr::func(name, &["y"])
    }

    #[test]
    fn walker_form_for_builders() {
        let a = y_fn("a");
        for m in [
            theorem_metric(&a).unwrap(),
            family6(&Rational::from_integer(1.into()), &Expr::zero(), &Expr::zero(), &Expr::zero()).unwrap(),
        ] {
            assert!(crate::curvature::is_walker_form(&m));
        }
        let m = theorem_metric(&a).unwrap();
        assert_eq!(m.g(2, 2), &m.chart().parse("x^3 + a(y)*x").unwrap());
    }

    #[test]
    fn builder_errors() {
        let z = Expr::zero();
        assert!(family6(&Rational::from_integer(0.into()), &z, &z, &z).is_err());
        assert!(strict_walker(&Expr::coord("t")).is_err());
        assert!(theorem_metric(&Expr::coord("x")).is_err());
    }

    #[test]
    fn product_flat() {
        let m = product_metric(1, &[[Expr::one(), Expr::zero()], [Expr::zero(), Expr::one()]]).unwrap();
        assert!(crate::curvature::riemann(&m).is_zero());
        assert_eq!(m.signature(), Signature::RIEMANNIAN);
    }

    #[test]
    fn identity_pullback() {
        let m = theorem_metric(&y_fn("a")).unwrap();
        let id = CoordMap::identity(m.chart());
        let p = pullback(&m, &id).unwrap();
        assert_eq!(p.matrix(), m.matrix());
        assert!(verify_isometry(&m, &m, &id).unwrap().passed());
    }

    #[test]
    fn t_map_identity() {
        let (phi, psi, b, k) = (y_fn("phi"), y_fn("psi"), y_fn("b"), Expr::constant("k"));
        let target = cubic_metric(&k, &b).unwrap();
        let f = target.g(2, 2).clone();
        let source = strict_walker(&t_map_profile(&f, &phi, &psi)).unwrap();
        let map = t_map(&phi, &psi).unwrap();
        assert!(verify_isometry(&source, &target, &map).unwrap().passed());
    }

    #[test]
    fn singular_jacobian() {
        let c = Chart::txy();
        let m = theorem_metric(&Expr::zero()).unwrap();
        let map = CoordMap::new(&c, [Expr::coord("t"), Expr::coord("t"), Expr::coord("y")]).unwrap();
        assert_eq!(pullback(&m, &map).unwrap_err(), Error::SingularJacobian);
    }
}
