//! The curvature chain: Christoffel symbols, Riemann, Ricci, scalar,
//! Schouten, Cotton in (0,3), (0,2) and operator form, and `∇C̃`.
//!
//! Sign convention: `R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db −
//! Γ^a_de Γ^e_cb`, `R_abcd = g_ae R^e_bcd` and `ρ_bd = R^a_bad`.

mod span;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::symexpr::{Atom, Expr};
use crate::tensor::{
    covariant_derivative, hodge_dual_cotton, musical, Chart, Direction, MetricChart, Slot,
    TensorField,
};

pub use span::SpanBasis;

/// `Γ^k_ij`, stored as `[k][i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Christoffel {
    sym: [[[Expr; 3]; 3]; 3],
}

impl Christoffel {
    pub fn get(&self, k: usize, i: usize, j: usize) -> &Expr {
        &self.sym[k][i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.sym.iter().flatten().flatten().all(Expr::is_zero)
    }

    /// As a (1,2) field with slots `[k, i, j]`.
    pub fn tensor(&self) -> TensorField {
        TensorField::from_fn(vec![Slot::Up, Slot::Down, Slot::Down], |i| {
            self.sym[i[0]][i[1]][i[2]].clone()
        })
    }
}

/// `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`.
pub fn christoffel_symbols(chart: &Chart, g: &[[Expr; 3]; 3], ginv: &[[Expr; 3]; 3]) -> Christoffel {
    let dg: [[[Expr; 3]; 3]; 3] = std::array::from_fn(|l| {
        std::array::from_fn(|i| std::array::from_fn(|j| g[i][j].derive(chart.coord(l))))
    });
    let half = Expr::rational(1, 2);
    let first: [[[Expr; 3]; 3]; 3] = std::array::from_fn(|l| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| &(&(&dg[i][j][l] + &dg[j][i][l]) - &dg[l][i][j]) * &half)
        })
    });
    let sym = std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = Expr::zero();
                for (l, fl) in first.iter().enumerate() {
                    if !ginv[k][l].is_zero() && !fl[i][j].is_zero() {
                        acc = &acc + &(&ginv[k][l] * &fl[i][j]);
                    }
                }
                acc
            })
        })
    });
    Christoffel { sym }
}

pub fn christoffel(m: &MetricChart) -> &Christoffel {
    m.christoffel()
}

/// `R^a_bcd` as a (1,3) field.
pub fn riemann_up(m: &MetricChart) -> TensorField {
    let gamma = m.christoffel();
    let chart = m.chart();
    let mut r = TensorField::zeros(vec![Slot::Up, Slot::Down, Slot::Down, Slot::Down]);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in (c + 1)..3 {
                    let mut acc = &gamma.get(a, d, b).derive(chart.coord(c))
                        - &gamma.get(a, c, b).derive(chart.coord(d));
                    for e in 0..3 {
                        acc = &acc + &(gamma.get(a, c, e) * gamma.get(e, d, b));
                        acc = &acc - &(gamma.get(a, d, e) * gamma.get(e, c, b));
                    }
                    r.set(&[a, b, d, c], -acc.clone());
                    r.set(&[a, b, c, d], acc);
                }
            }
        }
    }
    r
}

fn lower_riemann(up: &TensorField, m: &MetricChart) -> TensorField {
    TensorField::covariant(4, |i| {
        (0..3)
            .filter(|e| !m.g(i[0], *e).is_zero())
            .map(|e| m.g(i[0], e) * up.get(&[e, i[1], i[2], i[3]]))
            .sum()
    })
}

fn contract_ricci(up: &TensorField) -> TensorField {
    TensorField::covariant(2, |i| (0..3).map(|a| up.get(&[a, i[0], a, i[1]]).clone()).sum())
}

fn trace_g(t: &TensorField, m: &MetricChart) -> Expr {
    let mut acc = Expr::zero();
    for i in 0..3 {
        for j in 0..3 {
            if !m.ginv(i, j).is_zero() {
                acc = &acc + &(m.ginv(i, j) * t.get(&[i, j]));
            }
        }
    }
    acc
}

/// `R_abcd`, the fully covariant Riemann tensor.
pub fn riemann(m: &MetricChart) -> TensorField {
    lower_riemann(&riemann_up(m), m)
}

pub fn ricci(m: &MetricChart) -> TensorField {
    contract_ricci(&riemann_up(m))
}

/// `τ = g^{ij} ρ_ij`.
pub fn scalar(m: &MetricChart) -> Expr {
    trace_g(&ricci(m), m)
}

fn schouten_from(rho: &TensorField, tau: &Expr, m: &MetricChart) -> TensorField {
    let q = tau * &Expr::rational(1, 4);
    TensorField::covariant(2, |i| rho.get(i) - &(&q * m.g(i[0], i[1])))
}

fn cotton3_from(s: &TensorField, m: &MetricChart) -> TensorField {
    let ds = covariant_derivative(s, m);
    TensorField::covariant(3, |i| ds.get(i) - ds.get(&[i[1], i[0], i[2]]))
}

/// `S = ρ − (τ/4) g`.
pub fn schouten(m: &MetricChart) -> TensorField {
    let rho = ricci(m);
    let tau = trace_g(&rho, m);
    schouten_from(&rho, &tau, m)
}

/// `C_ijk = (∇_i S)_jk − (∇_j S)_ik`.
pub fn cotton3(m: &MetricChart) -> TensorField {
    cotton3_from(&schouten(m), m)
}

/// The (0,2) Cotton tensor `C̃`; fails when `√|det g|` is not exact.
pub fn cotton2(m: &MetricChart) -> Result<TensorField> {
    hodge_dual_cotton(&cotton3(m), m)
}

/// `Ĉ` with `C̃(x, y) = g(Ĉx, y)`, as a (1,1) field.
pub fn cotton_operator(m: &MetricChart) -> Result<TensorField> {
    musical(&cotton2(m)?, 0, Direction::Raise, m)
}

/// `ρ̂` with `ρ(x, y) = g(ρ̂x, y)`.
pub fn ricci_operator(m: &MetricChart) -> TensorField {
    musical(&ricci(m), 0, Direction::Raise, m).expect("covariant slot")
}

/// `∇C̃`, derivative slot first.
pub fn grad_cotton2(m: &MetricChart) -> Result<TensorField> {
    Ok(covariant_derivative(&cotton2(m)?, m))
}

/// Everything in the chain, computed once.
#[derive(Clone, Debug)]
pub struct CurvaturePack {
    pub gamma: Christoffel,
    pub riemann_up: TensorField,
    pub riemann: TensorField,
    pub ricci: TensorField,
    pub scalar: Expr,
    pub schouten: TensorField,
    pub cotton3: TensorField,
    /// `None` when the volume factor is irrational.
    pub cotton2: Option<TensorField>,
    pub cotton_op: Option<TensorField>,
    pub grad_cotton2: Option<TensorField>,
}

impl CurvaturePack {
    pub fn compute(m: &MetricChart) -> Self {
        let up = riemann_up(m);
        let riemann = lower_riemann(&up, m);
        let ricci = contract_ricci(&up);
        let scalar = trace_g(&ricci, m);
        let schouten = schouten_from(&ricci, &scalar, m);
        let cotton3 = cotton3_from(&schouten, m);
        let cotton2 = hodge_dual_cotton(&cotton3, m).ok();
        let cotton_op = cotton2
            .as_ref()
            .map(|c| musical(c, 0, Direction::Raise, m).expect("covariant slot"));
        let grad_cotton2 = cotton2.as_ref().map(|c| covariant_derivative(c, m));
        CurvaturePack {
            gamma: m.christoffel().clone(),
            riemann_up: up,
            riemann,
            ricci,
            scalar,
            schouten,
            cotton3,
            cotton2,
            cotton_op,
            grad_cotton2,
        }
    }

    pub fn cotton2(&self) -> Result<&TensorField> {
        self.cotton2
            .as_ref()
            .ok_or_else(|| Error::IrrationalVolume("√|det g| is not exact".into()))
    }

    pub fn grad_cotton2(&self) -> Result<&TensorField> {
        self.grad_cotton2
            .as_ref()
            .ok_or_else(|| Error::IrrationalVolume("√|det g| is not exact".into()))
    }
}

/// Walker form in `(t, x, y)`: `g_tt = g_tx = g_xy = 0`, `g_ty = g_xx = 1`.
pub fn is_walker_form(m: &MetricChart) -> bool {
    let g = m.matrix();
    g[0][0].is_zero()
        && g[0][1].is_zero()
        && g[1][2].is_zero()
        && g[0][2].is_one()
        && g[1][1].is_one()
}

/// Distinct nonzero components of `∇C̃` for a Walker metric, content
/// normalized and deduplicated up to constant multiples, in row-major order
/// of first appearance.
pub fn parallel_cotton_system(m: &MetricChart) -> Result<Vec<Expr>> {
    if !is_walker_form(m) {
        return Err(Error::NotWalker(
            "expected g_tt = g_tx = g_xy = 0 and g_ty = g_xx = 1".into(),
        ));
    }
    let d = grad_cotton2(m)?;
    Ok(dedup_normalized(d.comps()))
}

/// Nonzero entries, content normalized, without repeats.
pub fn dedup_normalized<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Vec<Expr> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for e in items {
        if e.is_zero() {
            continue;
        }
        let n = e.content_normalized();
        if seen.insert(n.to_string()) {
            out.push(n);
        }
    }
    out
}

/// How a condition is obtained from another system.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// ℚ-linear combination of the other system.
    RationalConstant,
    /// Needs generators multiplied by a single atom, named here (or
    /// `several` when no single atom suffices).
    AtomMultiplier(String),
    Outside,
}

/// Two-sided membership between a computed and a reference system.
#[derive(Clone, Debug)]
pub struct SystemComparison {
    /// For each reference line, how it lies in the computed system.
    pub forward: Vec<Membership>,
    /// For each computed member, how it lies in the reference system.
    pub backward: Vec<Membership>,
}

impl SystemComparison {
    pub fn rational_equivalent(&self) -> bool {
        self.forward
            .iter()
            .chain(&self.backward)
            .all(|m| *m == Membership::RationalConstant)
    }

    pub fn equivalent_with_multipliers(&self) -> bool {
        self.forward
            .iter()
            .chain(&self.backward)
            .all(|m| *m != Membership::Outside)
    }
}

fn multiplier_atoms(sets: &[&[Expr]]) -> BTreeSet<Atom> {
    sets.iter()
        .flat_map(|s| s.iter())
        .flat_map(|e| e.atoms())
        .collect()
}

struct Tiers {
    plain: SpanBasis,
    per_atom: Vec<(Atom, SpanBasis)>,
    all: SpanBasis,
}

fn tiers(a: &[Expr], atoms: &BTreeSet<Atom>) -> Tiers {
    let plain = SpanBasis::from_exprs(a);
    let mut all = plain.clone();
    let mut per_atom = Vec::new();
    for at in atoms {
        let m = Expr::atom(at.clone());
        let mut one = plain.clone();
        for e in a {
            let p = &m * e;
            one.insert(&p);
            all.insert(&p);
        }
        per_atom.push((at.clone(), one));
    }
    Tiers { plain, per_atom, all }
}

fn classify(e: &Expr, t: &Tiers) -> Membership {
    if t.plain.contains(e) {
        return Membership::RationalConstant;
    }
    if !t.all.contains(e) {
        return Membership::Outside;
    }
    match t.per_atom.iter().find(|(_, b)| b.contains(e)) {
        Some((a, _)) => Membership::AtomMultiplier(a.to_string()),
        None => Membership::AtomMultiplier("several".into()),
    }
}

/// Compares two polynomial condition systems by linear span, first over ℚ and
/// then allowing each generator to be multiplied by a single atom.
pub fn compare_systems(computed: &[Expr], reference: &[Expr]) -> SystemComparison {
    let atoms = multiplier_atoms(&[computed, reference]);
    let c = tiers(computed, &atoms);
    let r = tiers(reference, &atoms);
    SystemComparison {
        forward: reference.iter().map(|e| classify(e, &c)).collect(),
        backward: computed.iter().map(|e| classify(e, &r)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::build_metric;

    fn walker(f: &str) -> MetricChart {
        let c = Chart::txy().with_func("f", &["t", "x", "y"]).unwrap();
        let f = c.parse(f).unwrap();
        build_metric(
            &c,
            &[(0, 2, Expr::one()), (1, 1, Expr::one()), (2, 2, f)],
            crate::tensor::Signature::LORENTZIAN,
        )
        .unwrap()
    }

    #[test]
    fn walker_christoffel_matches_display() {
        let m = walker("f(t,x,y)");
        let c = m.chart();
        let g = m.christoffel();
        let p = |s: &str| c.parse(s).unwrap();
        assert_eq!(g.get(0, 0, 2), &p("diff(f(t,x,y),t)/2"));
        assert_eq!(g.get(0, 1, 2), &p("diff(f(t,x,y),x)/2"));
        assert_eq!(g.get(0, 2, 2), &p("(diff(f(t,x,y),y) + f(t,x,y)*diff(f(t,x,y),t))/2"));
        assert_eq!(g.get(1, 2, 2), &p("-diff(f(t,x,y),x)/2"));
        assert_eq!(g.get(2, 2, 2), &p("-diff(f(t,x,y),t)/2"));
    }

    #[test]
    fn flat_is_flat() {
        let m = walker("0");
        let pack = CurvaturePack::compute(&m);
        assert!(pack.gamma.is_zero());
        assert!(pack.riemann.is_zero());
        assert!(pack.scalar.is_zero());
        assert!(pack.cotton2().unwrap().is_zero());
    }

    #[test]
    fn theorem_metric_cotton() {
        let m = walker("x^3");
        let c2 = cotton2(&m).unwrap();
        assert_eq!(c2.get(&[2, 2]), &Expr::int(-3));
        assert_eq!(c2.nonzero().len(), 1);
        assert!(grad_cotton2(&m).unwrap().is_zero());
    }

    #[test]
    fn quartic_breaks_parallelism() {
        let m = walker("x^4");
        let sys = parallel_cotton_system(&m).unwrap();
        assert!(!sys.is_empty());
        assert_eq!(grad_cotton2(&m).unwrap().get(&[1, 2, 2]), &Expr::int(-12));
    }

    #[test]
    fn rejects_non_walker() {
        let c = Chart::txy();
        let m = build_metric(
            &c,
            &[(0, 0, Expr::one()), (1, 1, Expr::one()), (2, 2, Expr::one())],
            crate::tensor::Signature::RIEMANNIAN,
        )
        .unwrap();
        assert!(matches!(parallel_cotton_system(&m), Err(Error::NotWalker(_))));
    }

    #[test]
    fn comparison_tiers() {
        let x = Expr::coord("x");
        let y = Expr::coord("y");
        let a = [x.clone(), y.clone()];
        let b = [&x + &y, &x * &y];
        let cmp = compare_systems(&a, &b);
        assert_eq!(
            cmp.forward,
            vec![Membership::RationalConstant, Membership::AtomMultiplier("x".into())]
        );
        assert!(!cmp.rational_equivalent());
    }
}
