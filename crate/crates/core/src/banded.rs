//! Banded LU factorization with partial pivoting.
//!
//! Storage keeps, for every row `i`, the columns `i - kl ..= i + kl + ku`;
//! the extra `kl` superdiagonals absorb fill-in from row interchanges.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    size: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(size: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            size,
            kl,
            ku,
            width,
            data: vec![0.0; size * width],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.size && j < self.size && j + self.kl >= i && j <= i + self.kl + self.ku
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(self.in_band(i, j), "({i}, {j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    /// Entry `(i, j)`; zero outside the stored band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Sets an entry inside the structural band `j in i-kl ..= i+ku`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku && i < self.size && j < self.size);
        let s = self.slot(i, j);
        self.data[s] = value;
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.size - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.size)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.size - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// LU factorization `P A = L U`. Fails when a pivot falls below
    /// `1e-14 * ||A||_inf`.
    pub fn factor(&self) -> Result<BandLu> {
        let mut a = self.clone();
        let n = self.size;
        let (kl, ku) = (self.kl, self.ku);
        let threshold = 1e-14 * self.norm_inf();
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut piv = k;
            let mut best = a.data[a.slot(k, k)].abs();
            for r in k + 1..=last_row {
                let v = a.data[a.slot(r, k)].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if !(best > threshold) {
                return Err(Error::Domain(format!("singular band matrix: pivot {best:e} at row {k}")));
            }
            pivots[k] = piv;
            if piv != k {
                for j in k..=last_col {
                    let (s1, s2) = (a.slot(k, j), a.slot(piv, j));
                    a.data.swap(s1, s2);
                }
            }
            let pivot = a.data[a.slot(k, k)];
            for r in k + 1..=last_row {
                let s = a.slot(r, k);
                let l = a.data[s] / pivot;
                a.data[s] = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let u = a.data[a.slot(k, j)];
                        let t = a.slot(r, j);
                        a.data[t] -= l * u;
                    }
                }
            }
        }
        Ok(BandLu { lu: a, pivots })
    }
}

/// Factorization produced by [`BandMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn size(&self) -> usize {
        self.lu.size
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let a = &self.lu;
        let n = a.size;
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let xk = x[k];
            for r in k + 1..=(k + a.kl).min(n - 1) {
                x[r] -= a.data[a.slot(r, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + a.kl + a.ku).min(n - 1) {
                s -= a.data[a.slot(k, j)] * x[j];
            }
            x[k] = s / a.data[a.slot(k, k)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_mul(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn solves_pentadiagonal_system() {
        let n = 12;
        let mut m = BandMatrix::zeros(n, 2, 2);
        for i in 0..n {
            m.set(i, i, 6.0);
            if i >= 1 {
                m.set(i, i - 1, -4.0);
                m.set(i - 1, i, -4.0);
            }
            if i >= 2 {
                m.set(i, i - 2, 1.0);
                m.set(i - 2, i, 1.0);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b = m.mul_vec(&x);
        let y = m.factor().unwrap().solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let mut m = BandMatrix::zeros(3, 1, 1);
        m.set(0, 0, 0.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 0.0);
        m.set(1, 2, 2.0);
        m.set(2, 1, 3.0);
        m.set(2, 2, 1.0);
        let x = [1.0, -2.0, 0.5];
        let b = m.mul_vec(&x);
        let y = m.factor().unwrap().solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = BandMatrix::zeros(4, 2, 2);
        assert!(m.factor().is_err());
    }

    proptest! {
        #[test]
        fn random_band_systems(entries in prop::collection::vec(-1.0f64..1.0, 5 * 20),
                               x in prop::collection::vec(-5.0f64..5.0, 20)) {
            let n = 20;
            let mut m = BandMatrix::zeros(n, 2, 2);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for (d, off) in (-2i64..=2).enumerate() {
                    let j = i as i64 + off;
                    if j < 0 || j >= n as i64 { continue; }
                    // keep it safely nonsingular through diagonal dominance
                    let v = if off == 0 { entries[i * 5 + d] + 5.0 } else { entries[i * 5 + d] };
                    m.set(i, j as usize, v);
                    dense[i][j as usize] = v;
                }
            }
            let b = dense_mul(&dense, &x);
            prop_assert_eq!(m.mul_vec(&x).len(), n);
            let y = m.factor().unwrap().solve(&b);
            for (u, v) in x.iter().zip(&y) {
                prop_assert!((u - v).abs() < 1e-9);
            }
        }
    }
}
