use serde::Serialize;

use crate::curvature::{ricci, riemann, CurvaturePack};
use crate::error::{Error, Result};
use crate::report::{tensor_residuals, Check, Report};
use crate::symexpr::Expr;
use crate::tensor::{covariant_derivative, operator_product, MetricChart, Slot, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EcsClass {
    Ecs,
    ConformallyFlat,
    CottonNonparallel,
}

impl EcsClass {
    pub fn name(self) -> &'static str {
        match self {
            EcsClass::Ecs => "ecs",
            EcsClass::ConformallyFlat => "conformally-flat",
            EcsClass::CottonNonparallel => "cotton-nonparallel",
        }
    }
}

fn has_elementary(t: &TensorField) -> bool {
    t.comps().iter().any(|e| !e.is_zero() && e.has_elementary())
}

/// Essentially conformally symmetric: `∇C̃ = 0` and `C̃ ≠ 0`. When the
/// volume factor is not exact the (0,3) Cotton tensor stands in for `C̃`,
/// which has the same zero and parallelism loci.
pub fn ecs_predicate(m: &MetricChart) -> (EcsClass, Report) {
    let pack = CurvaturePack::compute(m);
    ecs_from_pack(m, &pack)
}

pub fn ecs_from_pack(m: &MetricChart, pack: &CurvaturePack) -> (EcsClass, Report) {
    let chart = m.chart();
    let (c, dc, name) = match (&pack.cotton2, &pack.grad_cotton2) {
        (Some(c), Some(d)) => (c.clone(), d.clone(), "C̃"),
        _ => (
            pack.cotton3.clone(),
            covariant_derivative(&pack.cotton3, m),
            "C (volume factor not exact)",
        ),
    };
    let mut report = Report::new();
    let nonzero = !c.is_zero();
    let mut cc = Check::expect(
        "cotton-nonzero",
        nonzero,
        format!("{name} has a nonzero component"),
    );
    cc.residuals = tensor_residuals(&c, chart);
    report.push(cc);
    let parallel = dc.is_zero();
    report.push(Check::vanishing(
        "cotton-parallel",
        format!("∇{name} vanishes"),
        &dc,
        chart,
    ));
    if (!nonzero && has_elementary(&c)) || (!parallel && has_elementary(&dc)) {
        report.push(Check::warn(
            "zero-test-incomplete",
            "elementary-function atoms present; a nonzero canonical form may still be identically zero",
        ));
    }
    let class = match (nonzero, parallel) {
        (false, _) => EcsClass::ConformallyFlat,
        (true, true) => EcsClass::Ecs,
        (true, false) => EcsClass::CottonNonparallel,
    };
    (class, report)
}

/// A one-form `ω` with `∇ρ = ω ⊗ ρ`, if one exists.
pub fn ricci_recurrence(m: &MetricChart) -> Result<Option<TensorField>> {
    let rho = ricci(m);
    let (pivot, pv) = rho
        .nonzero()
        .into_iter()
        .next()
        .map(|(i, e)| (i, e.clone()))
        .ok_or_else(|| Error::InvalidParameter("Ricci tensor vanishes".into()))?;
    let d = covariant_derivative(&rho, m);
    let omega = TensorField::covector(std::array::from_fn(|k| {
        d.get(&[k, pivot[0], pivot[1]]) / &pv
    }));
    for (idx, e) in d.entries() {
        let want = omega.get(&[idx[0]]) * rho.get(&idx[1..]);
        if !(e - &want).is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(omega))
}

/// Smallest `k ≥ 1` with `T^k = 0`, or `None`; in dimension three `k ≤ 3`.
pub fn nilpotency_index(t: &TensorField) -> Result<Option<u32>> {
    t.require_valence(&[Slot::Up, Slot::Down])?;
    let mut p = t.clone();
    for k in 1..=3 {
        if p.is_zero() {
            return Ok(Some(k));
        }
        p = operator_product(&p, t)?;
    }
    Ok(None)
}

/// `∇R` and `∇²R` of the (0,4) curvature tensor.
pub fn riemann_derivatives(m: &MetricChart) -> (TensorField, TensorField) {
    let r = riemann(m);
    let d1 = covariant_derivative(&r, m);
    let d2 = covariant_derivative(&d1, m);
    (d1, d2)
}

/// 2-symmetric means `∇²R = 0` with `∇R ≠ 0`.
pub fn two_symmetric_check(m: &MetricChart) -> Check {
    let (d1, d2) = riemann_derivatives(m);
    let two_sym = d2.is_zero() && !d1.is_zero();
    let mut c = Check::expect(
        "not-2-symmetric",
        !two_sym,
        "∇²R ≠ 0 or ∇R = 0",
    );
    if two_sym {
        c.detail = "∇²R vanishes with ∇R ≠ 0".into();
    }
    c
}

/// `g(V, V)` for a vector field.
pub fn norm_squared(v: &TensorField, m: &MetricChart) -> Result<Expr> {
    v.require_valence(&[Slot::Up])?;
    let mut acc = Expr::zero();
    for i in 0..3 {
        for j in 0..3 {
            if !m.g(i, j).is_zero() {
                acc = &acc + &(&(m.g(i, j) * v.get(&[i])) * v.get(&[j]));
            }
        }
    }
    Ok(acc)
}
