//! Numeric Jordan-type classification of real 3×3 operators.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JordanTag {
    RealDiagonalizable,
    ComplexPair,
    Nilpotent2,
    Nilpotent3,
    /// Not diagonalizable and not nilpotent.
    JordanBlockNonzeroEigenvalue,
}

impl JordanTag {
    pub fn name(self) -> &'static str {
        match self {
            JordanTag::RealDiagonalizable => "real-diagonalizable",
            JordanTag::ComplexPair => "complex-pair",
            JordanTag::Nilpotent2 => "nilpotent-2",
            JordanTag::Nilpotent3 => "nilpotent-3",
            JordanTag::JordanBlockNonzeroEigenvalue => "jordan-block-nonzero-eigenvalue",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JordanType {
    pub tag: JordanTag,
    /// `(re, im)` pairs.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Jordan block sizes, largest first.
    pub blocks: Vec<usize>,
    pub tol: f64,
}

/// Entries of a (1,1) operator as a numeric matrix `A[i][j] = T^i_j`.
pub fn to_matrix(a: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| a[i][j])
}

fn norm_inf(a: &Matrix3<f64>) -> f64 {
    (0..3)
        .map(|i| (0..3).map(|j| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Below threshold, above it, or too close to call.
fn decide(value: f64, threshold: f64, what: &str, tol: f64) -> Result<bool> {
    if value < threshold {
        Ok(true)
    } else if value < 10.0 * threshold {
        Err(Error::Ambiguous {
            tol,
            detail: format!("{what}: {value:.3e} is within a decade of {threshold:.3e}"),
        })
    } else {
        Ok(false)
    }
}

fn rank(a: &Matrix3<f64>, threshold: f64, tol: f64) -> Result<usize> {
    let sv = a.svd(false, false).singular_values;
    let mut r = 0;
    for s in sv.iter() {
        if !decide(*s, threshold, "singular value", tol)? {
            r += 1;
        }
    }
    Ok(r)
}

/// Classifies `a` by nilpotency tests, eigenvalue clustering and rank
/// tests of `A − λI`, all thresholded relative to `max(1, ‖A‖∞)`.
pub fn jordan_type(a: &[[f64; 3]; 3], tol: f64) -> Result<JordanType> {
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("operator has non-finite entries".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let m = to_matrix(a);
    let n = norm_inf(&m);
    let scale = n.max(1.0);
    let out = |tag, eigenvalues, blocks| JordanType {
        tag,
        eigenvalues,
        blocks,
        tol,
    };
    let zero_eigs = vec![(0.0, 0.0); 3];

    if decide(n, tol * scale, "operator norm", tol)? {
        return Ok(out(JordanTag::RealDiagonalizable, zero_eigs, vec![1, 1, 1]));
    }
    let m2 = m * m;
    if decide(norm_inf(&m2), tol * n.powi(2).max(1.0), "‖A²‖", tol)? {
        return Ok(out(JordanTag::Nilpotent2, zero_eigs, vec![2, 1]));
    }
    if decide(norm_inf(&(m2 * m)), tol * n.powi(3).max(1.0), "‖A³‖", tol)? {
        return Ok(out(JordanTag::Nilpotent3, zero_eigs, vec![3]));
    }

    let eig = m.complex_eigenvalues();
    let eigenvalues: Vec<(f64, f64)> = eig.iter().map(|z| (z.re, z.im)).collect();
    let cluster = tol.cbrt() * scale;
    let max_im = eigenvalues.iter().map(|e| e.1.abs()).fold(0.0, f64::max);
    if !decide(max_im, cluster, "imaginary part", tol)? {
        return Ok(out(JordanTag::ComplexPair, eigenvalues, vec![1, 1, 1]));
    }

    let mut re: Vec<f64> = eigenvalues.iter().map(|e| e.0).collect();
    re.sort_by(|a, b| a.total_cmp(b));
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in re {
        match groups.last_mut() {
            Some(g) if (v - g[g.len() - 1]).abs() < cluster => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let mut blocks = Vec::new();
    let rank_thr = tol.sqrt() * scale;
    for g in &groups {
        let lambda = g.iter().sum::<f64>() / g.len() as f64;
        let shifted = m - Matrix3::identity() * lambda;
        let geometric = 3 - rank(&shifted, rank_thr, tol)?;
        let algebraic = g.len();
        let geometric = geometric.clamp(1, algebraic);
        // Block sizes for multiplicity ≤ 3 follow from the two counts.
        match (algebraic, geometric) {
            (a, gm) if a == gm => blocks.extend(std::iter::repeat_n(1, a)),
            (2, 1) => blocks.push(2),
            (3, 2) => blocks.extend([2, 1]),
            (3, 1) => blocks.push(3),
            _ => unreachable!(),
        }
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    let tag = if blocks.iter().all(|b| *b == 1) {
        JordanTag::RealDiagonalizable
    } else {
        JordanTag::JordanBlockNonzeroEigenvalue
    };
    Ok(out(tag, eigenvalues, blocks))
}
