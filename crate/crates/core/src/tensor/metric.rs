use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::curvature::{christoffel_symbols, Christoffel};
use crate::error::{Error, Result};
use crate::symexpr::{Expr, Rational};

use super::{Chart, Slot, TensorField};

/// Number of negative directions; fixes the sign of `det g` when it is not a
/// constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub negative: u8,
}

impl Signature {
    pub const RIEMANNIAN: Signature = Signature { negative: 0 };
    pub const LORENTZIAN: Signature = Signature { negative: 1 };

    pub fn det_sign(self) -> i64 {
        if self.negative.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn name(self) -> &'static str {
        match self.negative {
            0 | 3 => "riemannian",
            _ => "lorentzian",
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A metric on a chart with exact inverse, determinant and Christoffel
/// symbols cached at construction.
#[derive(Clone)]
pub struct MetricChart {
    chart: Chart,
    g: [[Expr; 3]; 3],
    ginv: [[Expr; 3]; 3],
    detg: Expr,
    signature: Signature,
    gamma: Christoffel,
}

pub fn det3(m: &[[Expr; 3]; 3]) -> Expr {
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[a][c] * &m[b][d]) - &(&m[a][d] * &m[b][c]);
    let t0 = &m[0][0] * &minor(1, 2, 1, 2);
    let t1 = &m[0][1] * &minor(1, 2, 0, 2);
    let t2 = &m[0][2] * &minor(1, 2, 0, 1);
    &(&t0 - &t1) + &t2
}

/// Inverse by adjugate over the determinant.
pub fn inverse3(m: &[[Expr; 3]; 3], det: &Expr) -> [[Expr; 3]; 3] {
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|k| *k != i).collect();
        let c: Vec<usize> = (0..3).filter(|k| *k != j).collect();
        let v = &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]]);
        if (i + j).is_multiple_of(2) {
            v
        } else {
            -v
        }
    };
    let inv = det.recip();
    std::array::from_fn(|i| std::array::from_fn(|j| &cof(j, i) * &inv))
}

pub fn matmul3(a: &[[Expr; 3]; 3], b: &[[Expr; 3]; 3]) -> [[Expr; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum())
    })
}

pub fn identity3() -> [[Expr; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { Expr::one() } else { Expr::zero() })
    })
}

impl MetricChart {
    pub fn from_matrix(chart: Chart, g: [[Expr; 3]; 3], signature: Signature) -> Result<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if g[i][j] != g[j][i] {
                    return Err(Error::Asymmetric { i, j });
                }
            }
        }
        let detg = det3(&g);
        if detg.is_zero() {
            return Err(Error::SingularMetric);
        }
        let ginv = inverse3(&g, &detg);
        let gamma = christoffel_symbols(&chart, &g, &ginv);
        Ok(MetricChart {
            chart,
            g,
            ginv,
            detg,
            signature,
            gamma,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn g(&self, i: usize, j: usize) -> &Expr {
        &self.g[i][j]
    }

    pub fn ginv(&self, i: usize, j: usize) -> &Expr {
        &self.ginv[i][j]
    }

    pub fn matrix(&self) -> &[[Expr; 3]; 3] {
        &self.g
    }

    pub fn inverse(&self) -> &[[Expr; 3]; 3] {
        &self.ginv
    }

    pub fn det(&self) -> &Expr {
        &self.detg
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn christoffel(&self) -> &Christoffel {
        &self.gamma
    }

    /// The metric as a (0,2) tensor field.
    pub fn tensor(&self) -> TensorField {
        TensorField::from_matrix([Slot::Down, Slot::Down], &self.g)
    }

    pub fn inverse_tensor(&self) -> TensorField {
        TensorField::from_matrix([Slot::Up, Slot::Up], &self.ginv)
    }

    /// `|det g|`, with the sign taken from the constant value when there is
    /// one and from the signature otherwise.
    pub fn abs_det(&self) -> Expr {
        match self.detg.as_rational() {
            Some(q) => Expr::from_rational(q.abs()),
            None => self.detg.scale(&Rational::from_integer(self.signature.det_sign().into())),
        }
    }

    /// `√|det g|` when it is exact in the kernel.
    pub fn volume_factor(&self) -> Result<Expr> {
        let a = self.abs_det();
        a.sqrt_exact()
            .ok_or_else(|| Error::IrrationalVolume(a.to_string()))
    }

    /// Replaces the chart (e.g. to add function declarations) keeping the
    /// components.
    pub fn with_chart(&self, chart: Chart) -> Result<Self> {
        for c in &self.g {
            for e in c {
                chart.check_declared(e)?;
            }
        }
        Ok(MetricChart {
            chart,
            ..self.clone()
        })
    }
}

impl fmt::Debug for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricChart({}) ", self.signature)?;
        f.debug_list().entries(self.g.iter()).finish()
    }
}

/// Builds a metric from sparse entries; an entry given in one triangle is
/// mirrored, and entries given in both must agree.
pub fn build_metric(
    chart: &Chart,
    entries: &[(usize, usize, Expr)],
    signature: Signature,
) -> Result<MetricChart> {
    let mut g: [[Option<Expr>; 3]; 3] = Default::default();
    for (i, j, e) in entries {
        let (i, j) = (*i, *j);
        if i > 2 || j > 2 {
            return Err(Error::InvalidParameter(format!("metric index ({i},{j}) out of range")));
        }
        chart.check_declared(e)?;
        for (a, b) in [(i, j), (j, i)] {
            match &g[a][b] {
                Some(old) if old != e => return Err(Error::Asymmetric { i: i.min(j), j: i.max(j) }),
                _ => g[a][b] = Some(e.clone()),
            }
        }
    }
    let g = g.map(|row| row.map(|e| e.unwrap_or_else(Expr::zero)));
    MetricChart::from_matrix(chart.clone(), g, signature)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walker_inverse_and_determinant() {
        let c = Chart::txy().with_func("f", &["t", "x", "y"]).unwrap();
        let f = c.func("f").unwrap();
        let m = build_metric(
            &c,
            &[(0, 2, Expr::one()), (1, 1, Expr::one()), (2, 2, f.clone())],
            Signature::LORENTZIAN,
        )
        .unwrap();
        assert_eq!(m.det(), &Expr::int(-1));
        let want = [
            [-f.clone(), Expr::zero(), Expr::one()],
            [Expr::zero(), Expr::one(), Expr::zero()],
            [Expr::one(), Expr::zero(), Expr::zero()],
        ];
        assert_eq!(m.inverse(), &want);
        assert_eq!(matmul3(m.matrix(), m.inverse()), identity3());
        assert_eq!(m.volume_factor().unwrap(), Expr::one());
    }

    #[test]
    fn euclidean_identity() {
        let m = build_metric(
            &Chart::txy(),
            &[(0, 0, Expr::one()), (1, 1, Expr::one()), (2, 2, Expr::one())],
            Signature::RIEMANNIAN,
        )
        .unwrap();
        assert_eq!(m.inverse(), &identity3());
    }

    #[test]
    fn rejects_singular_and_asymmetric() {
        let c = Chart::txy();
        assert_eq!(
            build_metric(&c, &[(0, 0, Expr::one())], Signature::RIEMANNIAN).unwrap_err(),
            Error::SingularMetric
        );
        let err = build_metric(
            &c,
            &[(0, 1, Expr::one()), (1, 0, Expr::int(2)), (2, 2, Expr::one())],
            Signature::RIEMANNIAN,
        )
        .unwrap_err();
        assert_eq!(err, Error::Asymmetric { i: 0, j: 1 });
    }
}
