//! Derivative and duality operations on tensor fields over a metric chart.

use crate::error::{Error, Result};
use crate::symexpr::Expr;

use super::{MetricChart, Slot, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Raise,
    Lower,
}

/// Levi-Civita permutation symbol with `ε^{012} = 1` in chart order.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `∇T`, with the new covariant slot first.
pub fn covariant_derivative(t: &TensorField, m: &MetricChart) -> TensorField {
    let gamma = m.christoffel();
    let chart = m.chart();
    let mut slots = vec![Slot::Down];
    slots.extend_from_slice(t.slots());
    TensorField::from_fn(slots, |idx| {
        let k = idx[0];
        let rest = &idx[1..];
        let mut acc = t.get(rest).derive(chart.coord(k));
        let mut j = rest.to_vec();
        for (s, slot) in t.slots().iter().enumerate() {
            let orig = rest[s];
            for l in 0..3 {
                j[s] = l;
                let comp = t.get(&j);
                if comp.is_zero() {
                    continue;
                }
                match slot {
                    Slot::Up => {
                        let g = gamma.get(orig, k, l);
                        if !g.is_zero() {
                            acc = &acc + &(g * comp);
                        }
                    }
                    Slot::Down => {
                        let g = gamma.get(l, k, orig);
                        if !g.is_zero() {
                            acc = &acc - &(g * comp);
                        }
                    }
                }
            }
            j[s] = orig;
        }
        acc
    })
}

fn require_vector(x: &TensorField) -> Result<()> {
    x.require_valence(&[Slot::Up])
}

/// `(L_X g)_ij = X^k ∂_k g_ij + g_kj ∂_i X^k + g_ik ∂_j X^k`.
pub fn lie_derivative_metric(x: &TensorField, m: &MetricChart) -> Result<TensorField> {
    require_vector(x)?;
    let chart = m.chart();
    let dx: [[Expr; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|k| x.get(&[k]).derive(chart.coord(i))));
    Ok(TensorField::covariant(2, |idx| {
        let (i, j) = (idx[0], idx[1]);
        let mut acc = Expr::zero();
        for k in 0..3 {
            let xk = x.get(&[k]);
            if !xk.is_zero() {
                acc = &acc + &(xk * &m.g(i, j).derive(chart.coord(k)));
            }
            acc = &acc + &(m.g(k, j) * &dx[i][k]);
            acc = &acc + &(m.g(i, k) * &dx[j][k]);
        }
        acc
    }))
}

/// `∇_i X♭_j + ∇_j X♭_i`, the connection form of `L_X g`.
pub fn lie_derivative_metric_via_connection(
    x: &TensorField,
    m: &MetricChart,
) -> Result<TensorField> {
    let flat = musical(x, 0, Direction::Lower, m)?;
    let d = covariant_derivative(&flat, m);
    Ok(TensorField::covariant(2, |i| {
        d.get(&[i[0], i[1]]) + d.get(&[i[1], i[0]])
    }))
}

/// `Hess φ_ij = ∂_i ∂_j φ − Γ^k_ij ∂_k φ`.
pub fn hessian(phi: &Expr, m: &MetricChart) -> TensorField {
    let chart = m.chart();
    let gamma = m.christoffel();
    let d: [Expr; 3] = std::array::from_fn(|k| phi.derive(chart.coord(k)));
    TensorField::covariant(2, |idx| {
        let (i, j) = (idx[0], idx[1]);
        let mut acc = d[j].derive(chart.coord(i));
        for (k, dk) in d.iter().enumerate() {
            let g = gamma.get(k, i, j);
            if !g.is_zero() && !dk.is_zero() {
                acc = &acc - &(g * dk);
            }
        }
        acc
    })
}

/// `∇φ` as a vector field, `g^{ij} ∂_j φ`.
pub fn gradient(phi: &Expr, m: &MetricChart) -> TensorField {
    let chart = m.chart();
    let d: [Expr; 3] = std::array::from_fn(|k| phi.derive(chart.coord(k)));
    TensorField::vector(std::array::from_fn(|i| {
        (0..3).map(|j| m.ginv(i, j) * &d[j]).sum()
    }))
}

/// Raises or lowers one slot by contraction with `g^{-1}` or `g`.
pub fn musical(t: &TensorField, slot: usize, dir: Direction, m: &MetricChart) -> Result<TensorField> {
    let rank = t.rank();
    let want = match dir {
        Direction::Raise => Slot::Down,
        Direction::Lower => Slot::Up,
    };
    if slot >= rank || t.slots()[slot] != want {
        return Err(Error::InvalidSlot { slot, rank });
    }
    let mut slots = t.slots().to_vec();
    slots[slot] = slots[slot].flipped();
    Ok(TensorField::from_fn(slots, |idx| {
        let a = idx[slot];
        let mut j = idx.to_vec();
        let mut acc = Expr::zero();
        for b in 0..3 {
            let metric = match dir {
                Direction::Raise => m.ginv(a, b),
                Direction::Lower => m.g(a, b),
            };
            if metric.is_zero() {
                continue;
            }
            j[slot] = b;
            acc = &acc + &(metric * t.get(&j));
        }
        acc
    }))
}

/// Contracts two covariant slots with the inverse metric.
pub fn metric_trace(t: &TensorField, a: usize, b: usize, m: &MetricChart) -> Result<TensorField> {
    let rank = t.rank();
    for s in [a, b] {
        if s >= rank || t.slots()[s] != Slot::Down {
            return Err(Error::InvalidSlot { slot: s, rank });
        }
    }
    if a == b {
        return Err(Error::InvalidSlot { slot: b, rank });
    }
    let keep: Vec<usize> = (0..rank).filter(|s| *s != a && *s != b).collect();
    let slots = keep.iter().map(|s| t.slots()[*s]).collect();
    Ok(TensorField::from_fn(slots, |idx| {
        let mut full = vec![0; rank];
        for (k, s) in keep.iter().enumerate() {
            full[*s] = idx[k];
        }
        let mut acc = Expr::zero();
        for i in 0..3 {
            for j in 0..3 {
                let gi = m.ginv(i, j);
                if gi.is_zero() {
                    continue;
                }
                full[a] = i;
                full[b] = j;
                acc = &acc + &(gi * t.get(&full));
            }
        }
        acc
    }))
}

/// The (0,2) dual `C̃_ij = (1/(2√|det g|)) C_nmi ε^{nml} g_lj` of a (0,3)
/// tensor antisymmetric in its first two slots.
pub fn hodge_dual_cotton(c: &TensorField, m: &MetricChart) -> Result<TensorField> {
    c.require_valence(&[Slot::Down, Slot::Down, Slot::Down])?;
    if !c.is_antisymmetric(0, 1) {
        return Err(Error::NotAntisymmetric);
    }
    let vol = m.volume_factor()?;
    let factor = (Expr::int(2) * vol).recip();
    // ★C_i^l = ½ C_nmi ε^{nml}
    let star: [[Expr; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|l| {
            let mut acc = Expr::zero();
            for n in 0..3 {
                for mm in 0..3 {
                    let e = levi_civita(n, mm, l);
                    if e != 0 {
                        acc = &acc + &c.get(&[n, mm, i]).scale(&crate::symexpr::Rational::from_integer(e.into()));
                    }
                }
            }
            acc
        })
    });
    Ok(TensorField::covariant(2, |idx| {
        let (i, j) = (idx[0], idx[1]);
        let s: Expr = (0..3).map(|l| &star[i][l] * m.g(l, j)).sum();
        &s * &factor
    }))
}

/// Composition of (1,1) operators as matrices `A^i_k B^k_j`.
pub fn operator_product(a: &TensorField, b: &TensorField) -> Result<TensorField> {
    a.require_valence(&[Slot::Up, Slot::Down])?;
    b.require_valence(&[Slot::Up, Slot::Down])?;
    Ok(TensorField::from_fn(vec![Slot::Up, Slot::Down], |idx| {
        (0..3).map(|k| a.get(&[idx[0], k]) * b.get(&[k, idx[1]])).sum()
    }))
}

pub fn operator_trace(a: &TensorField) -> Result<Expr> {
    a.require_valence(&[Slot::Up, Slot::Down])?;
    Ok((0..3).map(|i| a.get(&[i, i]).clone()).sum())
}
