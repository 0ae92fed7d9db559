//! Integer lattices in ℤʲ via Hermite normal form.

use num_integer::Integer;

/// A subgroup of ℤʲ, stored as a row-style Hermite normal form basis:
/// pivots strictly increase, pivot entries are positive, and entries above
/// each pivot are reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i128>>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| i128::from(i == j)).collect())
            .collect();
        Lattice { dim, rows }
    }

    pub fn from_generators<I, V>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[i64]>,
    {
        let mut l = Lattice::zero(dim);
        for g in gens {
            l.add(g.as_ref());
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.rows.iter().enumerate().all(|(i, r)| r[i] == 1)
    }

    pub fn basis(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }

    /// Add a generator and restore Hermite normal form.
    pub fn add(&mut self, v: &[i64]) {
        assert_eq!(v.len(), self.dim);
        let mut rows = std::mem::take(&mut self.rows);
        rows.push(v.iter().map(|&x| x as i128).collect());
        self.rows = hnf(self.dim, rows);
    }

    /// Canonical representative of the coset `v + L`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for r in &self.rows {
            let p = pivot(r).unwrap();
            let q = Integer::div_floor(&w[p], &r[p]);
            if q != 0 {
                for (a, b) in w.iter_mut().zip(r) {
                    *a -= q * b;
                }
            }
        }
        w.into_iter().map(|x| x as i64).collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Index `[ℤʲ : L]` when `L` has full rank.
    pub fn index(&self) -> Option<u128> {
        (self.rank() == self.dim).then(|| {
            self.rows.iter().enumerate().map(|(i, r)| r[i] as u128).product()
        })
    }

    /// The first unit vector `e_c` (0-based `c`) outside the lattice.
    pub fn missing_unit(&self) -> Option<usize> {
        (0..self.dim).find(|&c| {
            let mut e = vec![0; self.dim];
            e[c] = 1;
            !self.contains(&e)
        })
    }
}

fn pivot(r: &[i128]) -> Option<usize> {
    r.iter().position(|&x| x != 0)
}

fn hnf(dim: usize, mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let mut out: Vec<Vec<i128>> = Vec::new();
    for col in 0..dim {
        // Collect rows whose first nonzero entry is in this column and fold
        // them together with extended gcd steps.
        let (mut here, rest): (Vec<_>, Vec<_>) =
            rows.into_iter().filter(|r| pivot(r).is_some()).partition(|r| pivot(r) == Some(col));
        rows = rest;
        let Some(mut acc) = here.pop() else { continue };
        for r in here {
            // Unimodular step [[x, y], [b/g, -a/g]] clears the pivot of `r`.
            let (a, b) = (acc[col], r[col]);
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ua, ub) = (a / g, b / g);
            let new_acc: Vec<i128> = acc.iter().zip(&r).map(|(p, q)| x * p + y * q).collect();
            let r: Vec<i128> = acc.iter().zip(&r).map(|(p, q)| ub * p - ua * q).collect();
            acc = new_acc;
            if pivot(&r).is_some() {
                rows.push(r);
            }
        }
        if acc[col] < 0 {
            acc.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(acc);
    }
    // Reduce entries above each pivot.
    for i in 0..out.len() {
        let p = pivot(&out[i]).unwrap();
        for j in 0..i {
            let q = Integer::div_floor(&out[j][p], &out[i][p]);
            if q != 0 {
                let row_i = out[i].clone();
                for (a, b) in out[j].iter_mut().zip(&row_i) {
                    *a -= q * b;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_lattice() {
        let l = Lattice::from_generators(2, [[2, 0], [0, 1], [4, 3]]);
        assert_eq!(l.basis(), vec![vec![2, 0], vec![0, 1]]);
        assert!(l.contains(&[6, -5]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.index(), Some(2));
        assert_eq!(l.missing_unit(), Some(0));
        assert_eq!(l.reduce(&[3, 7]), vec![1, 0]);
    }

    #[test]
    fn gcd_folding() {
        let l = Lattice::from_generators(1, [[6], [10], [15]]);
        assert!(l.is_full());
        let l = Lattice::from_generators(2, [[1, 1], [1, -1]]);
        assert_eq!(l.index(), Some(2));
        assert!(l.contains(&[2, 0]) && !l.contains(&[1, 0]));
    }

    #[test]
    fn rank_deficient() {
        let l = Lattice::from_generators(3, [[1, 2, 3], [2, 4, 6]]);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&[-3, -6, -9]));
        assert!(!l.contains(&[0, 0, 1]));
        assert_eq!(l.index(), None);
    }
}
