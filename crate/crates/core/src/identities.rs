//! Tensor identities that must hold exactly for every metric.

use crate::curvature::CurvaturePack;
use crate::report::{tensor_residuals, Check, Report};
use crate::symexpr::Expr;
use crate::tensor::{
    covariant_derivative, hessian, identity3, lie_derivative_metric,
    lie_derivative_metric_via_connection, matmul3, operator_trace, MetricChart, TensorField,
};

fn half() -> Expr {
    Expr::rational(1, 2)
}

fn ginv_contract(t: impl Fn(usize, usize) -> Expr, m: &MetricChart) -> Expr {
    let mut acc = Expr::zero();
    for i in 0..3 {
        for j in 0..3 {
            if !m.ginv(i, j).is_zero() {
                acc = &acc + &(m.ginv(i, j) * &t(i, j));
            }
        }
    }
    acc
}

fn vanish(id: &str, detail: &str, t: TensorField, m: &MetricChart) -> Check {
    Check::vanishing(id, detail, &t, m.chart())
}

/// Kulkarni–Nomizu form of `R` in dimension three.
pub fn kulkarni_nomizu(m: &MetricChart, pack: &CurvaturePack) -> TensorField {
    let g = |i: usize, j: usize| m.g(i, j);
    let r = &pack.ricci;
    let tau2 = &pack.scalar * &half();
    TensorField::covariant(4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let mut acc = g(i, k) * r.get(&[j, l]);
        acc = &acc + &(g(j, l) * r.get(&[i, k]));
        acc = &acc - &(g(i, l) * r.get(&[j, k]));
        acc = &acc - &(g(j, k) * r.get(&[i, l]));
        let gg = &(g(i, k) * g(j, l)) - &(g(i, l) * g(j, k));
        &acc - &(&tau2 * &gg)
    })
}

/// The sample vector field used for the two-path Lie derivative check.
pub fn sample_vector_field() -> TensorField {
    let (t, x, y) = (Expr::coord("t"), Expr::coord("x"), Expr::coord("y"));
    TensorField::vector([&x * &y, &t.pow(2) + &y, &(&Expr::int(3) * &x) - &t])
}

/// Runs every identity on `m`; the chart is assumed to be `(t, x, y)` for
/// the Lie-derivative sample field.
pub fn identity_suite(m: &MetricChart, pack: &CurvaturePack) -> Report {
    let mut rep = Report::new();
    let chart = m.chart();

    let prod = matmul3(m.matrix(), m.inverse());
    let id = identity3();
    rep.push(vanish(
        "inverse",
        "g·g⁻¹ = 1",
        TensorField::covariant(2, |i| &prod[i[0]][i[1]] - &id[i[0]][i[1]]),
        m,
    ));
    rep.push(vanish("metricity", "∇g = 0", covariant_derivative(&m.tensor(), m), m));
    let gam = pack.gamma.tensor();
    rep.push(vanish(
        "christoffel-symmetry",
        "Γ^k_ij = Γ^k_ji",
        TensorField::from_fn(gam.slots().to_vec(), |i| gam.get(i) - gam.get(&[i[0], i[2], i[1]])),
        m,
    ));

    let r = &pack.riemann;
    let perm = |id: &str, detail: &str, f: &dyn Fn(&[usize]) -> Expr| {
        vanish(id, detail, TensorField::covariant(4, f), m)
    };
    rep.push(perm("riemann-antisymmetry-first", "R_ijkl = −R_jikl", &|x| {
        r.get(x) + r.get(&[x[1], x[0], x[2], x[3]])
    }));
    rep.push(perm("riemann-antisymmetry-last", "R_ijkl = −R_ijlk", &|x| {
        r.get(x) + r.get(&[x[0], x[1], x[3], x[2]])
    }));
    rep.push(perm("riemann-pair-symmetry", "R_ijkl = R_klij", &|x| {
        r.get(x) - r.get(&[x[2], x[3], x[0], x[1]])
    }));
    rep.push(perm("first-bianchi", "R_ijkl + R_iklj + R_iljk = 0", &|x| {
        &(r.get(x) + r.get(&[x[0], x[2], x[3], x[1]])) + r.get(&[x[0], x[3], x[1], x[2]])
    }));
    rep.push(vanish(
        "kulkarni-nomizu",
        "R equals its Kulkarni–Nomizu reconstruction from ρ and τ",
        r - &kulkarni_nomizu(m, pack),
        m,
    ));
    rep.push(vanish(
        "ricci-symmetric",
        "ρ_ij = ρ_ji",
        TensorField::covariant(2, |i| pack.ricci.get(i) - pack.ricci.get(&[i[1], i[0]])),
        m,
    ));
    let dr = covariant_derivative(&pack.ricci, m);
    rep.push(vanish(
        "contracted-bianchi",
        "g^{jk} ∇_j ρ_ki = ½ ∂_i τ",
        TensorField::covariant(1, |x| {
            let i = x[0];
            let lhs = ginv_contract(|j, k| dr.get(&[j, k, i]).clone(), m);
            &lhs - &(&pack.scalar.derive(chart.coord(i)) * &half())
        }),
        m,
    ));

    let c = &pack.cotton3;
    rep.push(vanish(
        "cotton-antisymmetry",
        "C_ijk = −C_jik",
        TensorField::covariant(3, |x| c.get(x) + c.get(&[x[1], x[0], x[2]])),
        m,
    ));
    rep.push(vanish(
        "cotton-cyclic",
        "C_ijk + C_jki + C_kij = 0",
        TensorField::covariant(3, |x| {
            &(c.get(x) + c.get(&[x[1], x[2], x[0]])) + c.get(&[x[2], x[0], x[1]])
        }),
        m,
    ));
    rep.push(vanish(
        "cotton-trace-last",
        "g^{jk} C_ijk = 0",
        TensorField::covariant(1, |x| ginv_contract(|j, k| c.get(&[x[0], j, k]).clone(), m)),
        m,
    ));
    rep.push(vanish(
        "cotton-trace-first",
        "g^{ij} C_ijk = 0",
        TensorField::covariant(1, |x| ginv_contract(|i, j| c.get(&[i, j, x[0]]).clone(), m)),
        m,
    ));
    match (&pack.cotton2, &pack.cotton_op) {
        (Some(c2), Some(op)) => {
            rep.push(vanish(
                "cotton2-symmetric",
                "C̃ symmetric",
                TensorField::covariant(2, |i| c2.get(i) - c2.get(&[i[1], i[0]])),
                m,
            ));
            let tr = operator_trace(op).expect("(1,1) operator");
            let mut chk = Check::expect("cotton2-trace-free", tr.is_zero(), "tr Ĉ = g^{ij} C̃_ij = 0");
            if !tr.is_zero() {
                chk.residuals = vec![crate::report::Residual {
                    component: "trace".into(),
                    expr: tr.to_string(),
                }];
            }
            rep.push(chk);
        }
        _ => rep.push(Check::warn(
            "cotton2-symmetric",
            "√|det g| is not exact; C̃ identities skipped",
        )),
    }

    let x = sample_vector_field();
    match (lie_derivative_metric(&x, m), lie_derivative_metric_via_connection(&x, m)) {
        (Ok(a), Ok(b)) => rep.push(vanish(
            "lie-two-paths",
            "coordinate and connection forms of 𝓛_X g agree",
            &a - &b,
            m,
        )),
        _ => rep.push(Check::fail("lie-two-paths", "vector field rejected")),
    }
    let phi = &(&Expr::coord("x") * &Expr::coord("y").pow(2)) + &Expr::coord("t");
    let h = hessian(&phi, m);
    let mut hc = Check::vanishing(
        "hessian-symmetric",
        "Hess φ symmetric",
        &TensorField::covariant(2, |i| h.get(i) - h.get(&[i[1], i[0]])),
        chart,
    );
    if !hessian(&Expr::int(7), m).is_zero() {
        hc = Check::fail("hessian-symmetric", "Hess of a constant is nonzero")
            .with_residuals(tensor_residuals(&hessian(&Expr::int(7), m), chart));
    }
    rep.push(hc);
    rep
}
