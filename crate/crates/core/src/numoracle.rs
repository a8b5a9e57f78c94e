//! Finite-difference curvature from numeric metric samples. Nothing here
//! differentiates an `Expr`; the symbolic side is only evaluated.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::CurvaturePack;
use crate::error::{Error, Result};
use crate::symexpr::{Expr, FuncBindings};
use crate::tensor::{levi_civita, MetricChart};

pub type Point = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];
pub type Gamma = [[[f64; 3]; 3]; 3];

type MetricFn = Arc<dyn Fn(&Point) -> Result<Mat3> + Send + Sync>;

/// Metric components as a function of a point.
#[derive(Clone)]
pub struct NumericMetric {
    g: MetricFn,
}

impl NumericMetric {
    pub fn new(g: impl Fn(&Point) -> Result<Mat3> + Send + Sync + 'static) -> Self {
        NumericMetric { g: Arc::new(g) }
    }

    /// Samples the components of `m` with the given function bindings.
    pub fn from_metric(m: &MetricChart, funcs: &FuncBindings) -> Self {
        let comps = m.matrix().clone();
        let names = m.chart().coords().clone();
        let funcs = funcs.clone();
        NumericMetric::new(move |p| {
            let point = point_map(&names, p);
            let mut out = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = comps[i][j].eval(&point, &funcs)?;
                }
            }
            Ok(out)
        })
    }

    pub fn at(&self, p: &Point) -> Result<Mat3> {
        (self.g)(p)
    }
}

pub fn point_map(names: &[String; 3], p: &Point) -> BTreeMap<String, f64> {
    names.iter().cloned().zip(p.iter().copied()).collect()
}

fn det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inverse(m: &Mat3) -> Result<Mat3> {
    let d = det(m);
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    if d.abs() < 1e-12 * scale.powi(3) {
        return Err(Error::NumericSingular(format!("det g = {d:e}")));
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
        }
    }
    Ok(inv)
}

fn check_step(p: &Point, h: f64) -> Result<()> {
    let mag = p.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if h.is_nan() || h <= 0.0 || h < 1e-12 * mag {
        return Err(Error::Oracle(format!("step {h:e} underflows at this point")));
    }
    Ok(())
}

fn shifted(p: &Point, l: usize, d: f64) -> Point {
    let mut q = *p;
    q[l] += d;
    q
}

/// Central difference of a vector-valued function along every axis.
fn central<const N: usize>(
    p: &Point,
    h: f64,
    f: impl Fn(&Point) -> Result<[f64; N]>,
) -> Result<[[f64; N]; 3]> {
    let mut out = [[0.0; N]; 3];
    for (l, row) in out.iter_mut().enumerate() {
        let a = f(&shifted(p, l, h))?;
        let b = f(&shifted(p, l, -h))?;
        for k in 0..N {
            row[k] = (a[k] - b[k]) / (2.0 * h);
        }
    }
    Ok(out)
}

fn flat9(m: &Mat3) -> [f64; 9] {
    std::array::from_fn(|k| m[k / 3][k % 3])
}

fn flat27(g: &Gamma) -> [f64; 27] {
    std::array::from_fn(|k| g[k / 9][(k / 3) % 3][k % 3])
}

/// `Γ^k_ij` from central differences of the metric.
pub fn fd_christoffel(nm: &NumericMetric, p: &Point, h: f64) -> Result<Gamma> {
    check_step(p, h)?;
    let g = nm.at(p)?;
    let gi = inverse(&g)?;
    let dg = central(p, h, |q| Ok(flat9(&nm.at(q)?)))?;
    let d = |l: usize, i: usize, j: usize| dg[l][3 * i + j];
    let mut out = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                out[k][i][j] = (0..3)
                    .map(|l| 0.5 * gi[k][l] * (d(i, j, l) + d(j, i, l) - d(l, i, j)))
                    .sum();
            }
        }
    }
    Ok(out)
}

/// `ρ_bd = ∂_a Γ^a_db − ∂_d Γ^a_ab + Γ^a_ae Γ^e_db − Γ^a_de Γ^e_ab`.
pub fn fd_ricci(nm: &NumericMetric, p: &Point, h: f64) -> Result<Mat3> {
    let gam = fd_christoffel(nm, p, h)?;
    let dgam = central(p, h, |q| Ok(flat27(&fd_christoffel(nm, q, h)?)))?;
    let dg = |l: usize, k: usize, i: usize, j: usize| dgam[l][9 * k + 3 * i + j];
    let mut out = [[0.0; 3]; 3];
    for b in 0..3 {
        for d in 0..3 {
            let mut acc = 0.0;
            for a in 0..3 {
                acc += dg(a, a, d, b) - dg(d, a, a, b);
                for e in 0..3 {
                    acc += gam[a][a][e] * gam[e][d][b] - gam[a][d][e] * gam[e][a][b];
                }
            }
            out[b][d] = acc;
        }
    }
    Ok(out)
}

fn trace(g_inv: &Mat3, t: &Mat3) -> f64 {
    (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| g_inv[i][j] * t[i][j]).sum()
}

pub fn fd_scalar(nm: &NumericMetric, p: &Point, h: f64) -> Result<f64> {
    let gi = inverse(&nm.at(p)?)?;
    Ok(trace(&gi, &fd_ricci(nm, p, h)?))
}

fn fd_schouten(nm: &NumericMetric, p: &Point, h: f64) -> Result<Mat3> {
    let g = nm.at(p)?;
    let rho = fd_ricci(nm, p, h)?;
    let tau = trace(&inverse(&g)?, &rho);
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| rho[i][j] - tau / 4.0 * g[i][j])))
}

/// `C̃_ij = (1/(2√|det g|)) C_nmi ε^{nml} g_lj` from nested differences.
pub fn fd_cotton2(nm: &NumericMetric, p: &Point, h: f64) -> Result<Mat3> {
    let g = nm.at(p)?;
    let gam = fd_christoffel(nm, p, h)?;
    let s = fd_schouten(nm, p, h)?;
    let ds = central(p, h, |q| Ok(flat9(&fd_schouten(nm, q, h)?)))?;
    // ∇_i S_jk
    let nabla = |i: usize, j: usize, k: usize| {
        let mut v = ds[i][3 * j + k];
        for l in 0..3 {
            v -= gam[l][i][j] * s[l][k] + gam[l][i][k] * s[j][l];
        }
        v
    };
    let c = |i: usize, j: usize, k: usize| nabla(i, j, k) - nabla(j, i, k);
    let vol = det(&g).abs().sqrt();
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for n in 0..3 {
                for m in 0..3 {
                    for l in 0..3 {
                        let e = levi_civita(n, m, l);
                        if e != 0 {
                            acc += e as f64 * c(n, m, i) * g[l][j];
                        }
                    }
                }
            }
            out[i][j] = acc / (2.0 * vol);
        }
    }
    Ok(out)
}

/// Uniform points in `[lo, hi]³`, skipping those with `|x| < avoid_x`.
pub fn sample_points(n: usize, seed: u64, lo: f64, hi: f64, avoid_x: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: Point = std::array::from_fn(|_| rng.random_range(lo..=hi));
        if p[1].abs() >= avoid_x {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompareOptions {
    pub h_first: f64,
    pub tol_first: f64,
    pub h_cotton: f64,
    pub tol_cotton: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            h_first: 1e-3,
            tol_first: 1e-5,
            h_cotton: 5e-3,
            tol_cotton: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantityError {
    pub quantity: String,
    pub max_rel_error: f64,
    pub h: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub quantities: Vec<QuantityError>,
    pub points: usize,
    pub pass: bool,
}

fn rel_error(sym: &[f64], num: &[f64]) -> f64 {
    let d = sym.iter().zip(num).fold(0.0f64, |a, (s, n)| a.max((s - n).abs()));
    let s = sym.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    d / s.max(1.0)
}

fn eval_all(es: &[&Expr], point: &BTreeMap<String, f64>, funcs: &FuncBindings) -> Result<Vec<f64>> {
    es.iter().map(|e| e.eval(point, funcs)).collect()
}

/// Compares symbolic `Γ, ρ, τ, C̃` with the finite-difference values.
pub fn compare(
    m: &MetricChart,
    funcs: &FuncBindings,
    nm: &NumericMetric,
    points: &[Point],
    opts: &CompareOptions,
) -> Result<CompareReport> {
    compare_with_pack(m, &CurvaturePack::compute(m), funcs, nm, points, opts)
}

/// As [`compare`], against a precomputed (possibly altered) pack.
pub fn compare_with_pack(
    m: &MetricChart,
    pack: &CurvaturePack,
    funcs: &FuncBindings,
    nm: &NumericMetric,
    points: &[Point],
    opts: &CompareOptions,
) -> Result<CompareReport> {
    for a in m.matrix().iter().flatten().flat_map(|e| e.all_atoms()) {
        if let crate::symexpr::AtomKind::Func(app) = a.kind() {
            if funcs.get(&app.name).is_none() {
                return Err(Error::MissingBinding(app.name.clone()));
            }
        }
    }
    let gamma: Vec<&Expr> = (0..27).map(|k| pack.gamma.get(k / 9, (k / 3) % 3, k % 3)).collect();
    let ricci: Vec<&Expr> = pack.ricci.comps().iter().collect();
    let cotton: Option<Vec<&Expr>> = pack.cotton2.as_ref().map(|c| c.comps().iter().collect());
    let mut err = [0.0f64; 4];
    for p in points {
        let pm = point_map(m.chart().coords(), p);
        let g = fd_christoffel(nm, p, opts.h_first)?;
        err[0] = err[0].max(rel_error(&eval_all(&gamma, &pm, funcs)?, &flat27(&g)));
        let r = fd_ricci(nm, p, opts.h_first)?;
        err[1] = err[1].max(rel_error(&eval_all(&ricci, &pm, funcs)?, &flat9(&r)));
        let tau = trace(&inverse(&nm.at(p)?)?, &r);
        err[2] = err[2].max(rel_error(&[pack.scalar.eval(&pm, funcs)?], &[tau]));
        if let Some(c) = &cotton {
            let cn = fd_cotton2(nm, p, opts.h_cotton)?;
            err[3] = err[3].max(rel_error(&eval_all(c, &pm, funcs)?, &flat9(&cn)));
        }
    }
    let q = |name: &str, e: f64, h: f64, tol: f64| QuantityError {
        quantity: name.into(),
        max_rel_error: e,
        h,
        tol,
        pass: e < tol,
    };
    let mut quantities = vec![
        q("christoffel", err[0], opts.h_first, opts.tol_first),
        q("ricci", err[1], opts.h_first, opts.tol_first),
        q("scalar", err[2], opts.h_first, opts.tol_first),
    ];
    if cotton.is_some() {
        quantities.push(q("cotton2", err[3], opts.h_cotton, opts.tol_cotton));
    }
    let pass = quantities.iter().all(|q| q.pass);
    Ok(CompareReport {
        quantities,
        points: points.len(),
        pass,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::theorem_metric;

    #[test]
    fn theorem_metric_values() {
        let m = theorem_metric(&Expr::zero()).unwrap();
        let nm = NumericMetric::from_metric(&m, &FuncBindings::new());
        let r = fd_ricci(&nm, &[0.0, 1.0, 0.0], 1e-3).unwrap();
        assert!((r[2][2] + 3.0).abs() < 1e-6, "{}", r[2][2]);
        let a = Expr::func("a", &["y"]);
        let m = theorem_metric(&a).unwrap();
        let b = FuncBindings::new().expr("a", &["y".into()], Expr::coord("y").pow(2));
        let nm = NumericMetric::from_metric(&m, &b);
        let c = fd_cotton2(&nm, &[0.0, 0.5, 1.0], 5e-3).unwrap();
        assert!((c[2][2] + 3.0).abs() < 1e-3, "{}", c[2][2]);
    }

    #[test]
    fn flat_walker_is_zero() {
        let m = theorem_metric(&Expr::zero()).unwrap();
        let flat = NumericMetric::new(|_| Ok([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]));
        let p = [0.3, -0.2, 0.7];
        assert!(fd_christoffel(&flat, &p, 1e-3).unwrap().iter().flatten().flatten().all(|v| v.abs() < 1e-10));
        assert!(fd_cotton2(&flat, &p, 5e-3).unwrap().iter().flatten().all(|v| v.abs() < 1e-10));
        assert!(compare(&m, &FuncBindings::new(), &NumericMetric::from_metric(&m, &FuncBindings::new()), &[p], &CompareOptions::default()).unwrap().pass);
    }

    #[test]
    fn bad_step() {
        let flat = NumericMetric::new(|_| Ok([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]));
        assert!(fd_christoffel(&flat, &[0.0; 3], 0.0).is_err());
    }
}
