//! Multi-indices in ℕᵏ.

use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

/// A degree `n ∈ ℕᵏ`.
///
/// The ordering is the coordinatewise partial order, so `Degree` deliberately
/// does not implement `PartialOrd`: use [`Degree::leq`] for `m ≤ n` and
/// [`Degree::all_less`] for the strict `m < n` (every coordinate strictly less).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    /// The generator `e_i`, with `i` a 1-based color.
    pub fn unit(rank: usize, color: usize) -> Self {
        let mut d = Self::zero(rank);
        d.0[color - 1] = 1;
        d
    }

    /// `(c, c, …, c)`.
    pub fn diagonal(rank: usize, c: u32) -> Self {
        Degree(vec![c; rank])
    }

    pub fn from_slice(coords: &[u32]) -> Self {
        Degree(coords.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// 1-based coordinate access.
    pub fn get(&self, color: usize) -> u32 {
        self.0[color - 1]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn max_coord(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `self > 0` in the strict coordinatewise sense.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn leq(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn all_less(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    /// `self - other`, or `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    /// `self - e_i` when `self_i > 0`.
    pub fn minus_unit(&self, color: usize) -> Option<Degree> {
        let c = self.0[color - 1].checked_sub(1)?;
        let mut d = self.clone();
        d.0[color - 1] = c;
        Some(d)
    }

    pub fn plus_unit(&self, color: usize) -> Degree {
        let mut d = self.clone();
        d.0[color - 1] += 1;
        d
    }

    pub fn scale(&self, c: u32) -> Degree {
        Degree(self.0.iter().map(|&a| a * c).collect())
    }

    /// The color sequence of the normal-form word of this degree:
    /// `n_1` copies of 1, then `n_2` copies of 2, and so on.
    pub fn color_word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c as usize))
            .collect()
    }

    /// Every degree `m` with `0 ≤ m ≤ self`, in graded order (total
    /// degree first, then lexicographic).
    pub fn box_below(&self) -> Vec<Degree> {
        let mut out = vec![Vec::with_capacity(self.rank())];
        for &hi in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=hi).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<Degree> = out.into_iter().map(Degree).collect();
        out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

impl Add for &Degree {
    type Output = Degree;

    fn add(self, rhs: &Degree) -> Degree {
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        &self + &rhs
    }
}

impl Index<usize> for Degree {
    type Output = u32;

    fn index(&self, idx: usize) -> &u32 {
        &self.0[idx]
    }
}

impl From<Vec<u32>> for Degree {
    fn from(v: Vec<u32>) -> Self {
        Degree(v)
    }
}

impl<const N: usize> From<[u32; N]> for Degree {
    fn from(v: [u32; N]) -> Self {
        Degree(v.to_vec())
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_join() {
        let m = Degree::from([1, 3]);
        let n = Degree::from([2, 0]);
        assert!(!m.leq(&n) && !n.leq(&m));
        assert_eq!(m.join(&n), Degree::from([2, 3]));
        assert!(Degree::from([0, 1]).all_less(&Degree::from([1, 2])));
        assert!(!Degree::from([0, 2]).all_less(&Degree::from([1, 2])));
        assert_eq!(Degree::from([2, 3]).checked_sub(&m), Some(Degree::from([1, 0])));
        assert_eq!(n.checked_sub(&m), None);
    }

    #[test]
    fn box_is_graded() {
        let b = Degree::from([1, 2]).box_below();
        assert_eq!(b.len(), 6);
        assert_eq!(b[0], Degree::from([0, 0]));
        assert_eq!(b[1], Degree::from([0, 1]));
        assert_eq!(b[2], Degree::from([1, 0]));
        assert_eq!(b.last().unwrap(), &Degree::from([1, 2]));
    }

    #[test]
    fn color_word_is_sorted() {
        assert_eq!(Degree::from([2, 0, 1]).color_word(), vec![1, 1, 3]);
        assert_eq!(Degree::from([0, 0]).color_word(), Vec::<usize>::new());
    }
}
