use serde::Serialize;

use crate::curvature::{cotton2, ricci};
use crate::error::{Error, Result};
use crate::report::{tensor_residuals, Check};
use crate::symexpr::Expr;
use crate::tensor::{gradient, hessian, lie_derivative_metric, MetricChart, Slot, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolitonKind {
    Killing,
    Homothetic,
    Cotton,
    Ricci,
    GradientCotton,
    GradientRicci,
}

impl SolitonKind {
    pub fn name(self) -> &'static str {
        match self {
            SolitonKind::Killing => "killing",
            SolitonKind::Homothetic => "homothetic",
            SolitonKind::Cotton => "cotton",
            SolitonKind::Ricci => "ricci",
            SolitonKind::GradientCotton => "gradient-cotton",
            SolitonKind::GradientRicci => "gradient-ricci",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            SolitonKind::Killing,
            SolitonKind::Homothetic,
            SolitonKind::Cotton,
            SolitonKind::Ricci,
            SolitonKind::GradientCotton,
            SolitonKind::GradientRicci,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    pub fn is_gradient(self) -> bool {
        matches!(self, SolitonKind::GradientCotton | SolitonKind::GradientRicci)
    }
}

#[derive(Clone, Debug)]
pub enum SolitonField {
    Vector(TensorField),
    Potential(Expr),
}

#[derive(Clone, Debug)]
pub struct SolitonSpec {
    kind: SolitonKind,
    field: SolitonField,
    lambda: Expr,
}

impl SolitonSpec {
    /// `λ` must be free of coordinates; Killing fields force `λ = 0`.
    pub fn new(kind: SolitonKind, field: SolitonField, lambda: Expr) -> Result<Self> {
        if !lambda.coords().is_empty() {
            return Err(Error::NonConstantLambda(lambda.to_string()));
        }
        if kind == SolitonKind::Killing && !lambda.is_zero() {
            return Err(Error::InvalidParameter("a Killing field has λ = 0".into()));
        }
        match (&field, kind.is_gradient()) {
            (SolitonField::Potential(_), true) => {}
            (SolitonField::Vector(v), false) => v.require_valence(&[Slot::Up])?,
            (SolitonField::Vector(_), true) => {
                return Err(Error::InvalidParameter("gradient kinds take a potential".into()))
            }
            (SolitonField::Potential(_), false) => {
                return Err(Error::InvalidParameter("this kind takes a vector field".into()))
            }
        }
        Ok(SolitonSpec { kind, field, lambda })
    }

    pub fn kind(&self) -> SolitonKind {
        self.kind
    }

    pub fn lambda(&self) -> &Expr {
        &self.lambda
    }

    pub fn field(&self) -> &SolitonField {
        &self.field
    }

    /// The vector field, or `∇φ` for gradient kinds.
    pub fn vector(&self, m: &MetricChart) -> TensorField {
        match &self.field {
            SolitonField::Vector(v) => v.clone(),
            SolitonField::Potential(p) => gradient(p, m),
        }
    }
}

/// `𝓛_X g [+ C̃ | + ρ] − λg`, with `𝓛_{∇φ} g = 2 Hess φ` for gradient kinds.
pub fn soliton_residual(m: &MetricChart, spec: &SolitonSpec) -> Result<(TensorField, Check)> {
    let lie = match &spec.field {
        SolitonField::Vector(v) => lie_derivative_metric(v, m)?,
        SolitonField::Potential(p) => hessian(p, m).scale(&Expr::int(2)),
    };
    let extra = match spec.kind {
        SolitonKind::Cotton | SolitonKind::GradientCotton => Some(cotton2(m)?),
        SolitonKind::Ricci | SolitonKind::GradientRicci => Some(ricci(m)),
        _ => None,
    };
    let g = m.tensor().scale(&spec.lambda);
    let mut r = &lie - &g;
    if let Some(e) = extra {
        r = &r + &e;
    }
    let residuals = tensor_residuals(&r, m.chart());
    let mut detail = format!("{} soliton equation with λ = {}", spec.kind.name(), spec.lambda);
    if spec.kind.is_gradient() {
        detail.push_str(" (potential supplied by the caller)");
    }
    let check = Check::expect(format!("soliton-{}", spec.kind.name()), residuals.is_empty(), detail)
        .with_residuals(residuals);
    Ok((r, check))
}

/// Parameters of the strict-Walker Ricci soliton ansatz
/// `X = (t(λ−β) − xω'(y) + μ(y), λx/2 + ω(y), βy + γ)`.
#[derive(Clone, Debug)]
pub struct RicciAnsatz {
    pub beta: Expr,
    pub gamma: Expr,
    pub omega: Expr,
    pub mu: Expr,
    pub lambda: Expr,
}

impl RicciAnsatz {
    pub fn field(&self) -> TensorField {
        let (t, x, y) = (Expr::coord("t"), Expr::coord("x"), Expr::coord("y"));
        let half = Expr::rational(1, 2);
        TensorField::vector([
            &(&(&t * &(&self.lambda - &self.beta)) - &(&x * &self.omega.derive("y"))) + &self.mu,
            &(&(&half * &self.lambda) * &x) + &self.omega,
            &(&self.beta * &y) + &self.gamma,
        ])
    }
}

/// `2βf − λf + 2μ' − 2xω'' + f_y(βy + γ) + f_x(λx/2 + ω) − ½f_xx`.
pub fn walker_ricci_soliton_pde(f: &Expr, p: &RicciAnsatz) -> Expr {
    let (x, y) = (Expr::coord("x"), Expr::coord("y"));
    let two = Expr::int(2);
    let half = Expr::rational(1, 2);
    let mut acc = &(&two * &p.beta) * f;
    acc = &acc - &(&p.lambda * f);
    acc = &acc + &(&two * &p.mu.derive("y"));
    acc = &acc - &(&(&two * &x) * &p.omega.derive_n("y", 2));
    acc = &acc + &(&f.derive("y") * &(&(&p.beta * &y) + &p.gamma));
    acc = &acc + &(&f.derive("x") * &(&(&(&half * &p.lambda) * &x) + &p.omega));
    &acc - &(&half * &f.derive_n("x", 2))
}
