use std::fmt;
use std::ops::{Add, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symexpr::Expr;

use super::Chart;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Slot {
    /// contravariant
    Up,
    /// covariant
    Down,
}

impl Slot {
    pub fn flipped(self) -> Slot {
        match self {
            Slot::Up => Slot::Down,
            Slot::Down => Slot::Up,
        }
    }
}

/// Components of a tensor field in a coordinate chart of dimension three,
/// stored row-major over its slots.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorField {
    slots: Vec<Slot>,
    comps: Vec<Expr>,
}

fn flat(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, i| acc * 3 + i)
}

/// All multi-indices of the given rank in row-major order.
pub fn multi_indices(rank: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..3usize.pow(rank as u32)).map(move |mut n| {
        let mut idx = vec![0; rank];
        for k in (0..rank).rev() {
            idx[k] = n % 3;
            n /= 3;
        }
        idx
    })
}

impl TensorField {
    pub fn zeros(slots: Vec<Slot>) -> Self {
        let n = 3usize.pow(slots.len() as u32);
        TensorField {
            slots,
            comps: vec![Expr::zero(); n],
        }
    }

    pub fn from_fn(slots: Vec<Slot>, mut f: impl FnMut(&[usize]) -> Expr) -> Self {
        let comps = multi_indices(slots.len()).map(|i| f(&i)).collect();
        TensorField { slots, comps }
    }

    pub fn covariant(rank: usize, f: impl FnMut(&[usize]) -> Expr) -> Self {
        TensorField::from_fn(vec![Slot::Down; rank], f)
    }

    pub fn vector(c: [Expr; 3]) -> Self {
        TensorField {
            slots: vec![Slot::Up],
            comps: c.to_vec(),
        }
    }

    pub fn covector(c: [Expr; 3]) -> Self {
        TensorField {
            slots: vec![Slot::Down],
            comps: c.to_vec(),
        }
    }

    pub fn from_matrix(slots: [Slot; 2], m: &[[Expr; 3]; 3]) -> Self {
        TensorField::from_fn(slots.to_vec(), |i| m[i[0]][i[1]].clone())
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// `(contravariant, covariant)` slot counts.
    pub fn valence(&self) -> (usize, usize) {
        let up = self.slots.iter().filter(|s| **s == Slot::Up).count();
        (up, self.slots.len() - up)
    }


    pub fn require_valence(&self, slots: &[Slot]) -> Result<()> {
        if self.slots == slots {
            Ok(())
        } else {
            Err(Error::Valence {
                expected: format!("{slots:?}"),
                got: format!("{:?}", self.slots),
            })
        }
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        debug_assert_eq!(idx.len(), self.rank());
        &self.comps[flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Expr) {
        let k = flat(idx);
        self.comps[k] = v;
    }

    pub fn comps(&self) -> &[Expr] {
        &self.comps
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Expr)> {
        multi_indices(self.rank()).zip(self.comps.iter())
    }

    pub fn nonzero(&self) -> Vec<(Vec<usize>, &Expr)> {
        self.entries().filter(|(_, e)| !e.is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        TensorField {
            slots: self.slots.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &Expr) -> Self {
        self.map(|e| e * s)
    }

    /// Symmetric in slots `a` and `b` in canonical form.
    pub fn is_symmetric(&self, a: usize, b: usize) -> bool {
        self.entries().all(|(idx, e)| {
            let mut j = idx.clone();
            j.swap(a, b);
            e == self.get(&j)
        })
    }

    pub fn is_antisymmetric(&self, a: usize, b: usize) -> bool {
        self.entries().all(|(idx, e)| {
            let mut j = idx.clone();
            j.swap(a, b);
            (e + self.get(&j)).is_zero()
        })
    }

    /// 3×3 matrix view of a rank-two tensor.
    pub fn matrix(&self) -> [[Expr; 3]; 3] {
        assert_eq!(self.rank(), 2, "matrix view needs rank two");
        std::array::from_fn(|i| std::array::from_fn(|j| self.get(&[i, j]).clone()))
    }

    /// A readable label like `[y,y]` for a component.
    pub fn label(idx: &[usize], chart: &Chart) -> String {
        let names: Vec<&str> = idx.iter().map(|i| chart.coord(*i)).collect();
        format!("[{}]", names.join(","))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Expr, &Expr) -> Expr) -> Self {
        assert_eq!(self.slots, other.slots, "slot mismatch");
        TensorField {
            slots: self.slots.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Tensor product, slots of `self` first.
    pub fn tensor(&self, other: &TensorField) -> TensorField {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let r = self.rank();
        TensorField::from_fn(slots, |i| self.get(&i[..r]) * other.get(&i[r..]))
    }
}

impl Add for &TensorField {
    type Output = TensorField;
    fn add(self, rhs: &TensorField) -> TensorField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TensorField {
    type Output = TensorField;
    fn sub(self, rhs: &TensorField) -> TensorField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorField{:?} {{", self.slots)?;
        for (idx, e) in self.nonzero() {
            write!(f, " {idx:?}: {e};")?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        let t = TensorField::covariant(3, |i| Expr::int((i[0] * 9 + i[1] * 3 + i[2]) as i64));
        assert_eq!(t.get(&[2, 1, 0]), &Expr::int(21));
        assert_eq!(t.entries().count(), 27);
        assert_eq!(t.valence(), (0, 3));
    }

    #[test]
    fn symmetry_checks() {
        let s = TensorField::covariant(2, |i| Expr::int((i[0] + i[1]) as i64));
        assert!(s.is_symmetric(0, 1));
        let a = TensorField::covariant(2, |i| Expr::int(i[0] as i64 - i[1] as i64));
        assert!(a.is_antisymmetric(0, 1));
        assert!(!a.is_symmetric(0, 1));
    }
}
