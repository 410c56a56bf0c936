//! Green's functions of `T[p,c]` under homogeneous simply supported
//! conditions, the boundary-influence functions `y^a`, `y^b`, and the sign
//! scan that reads strong inverse positivity/negativity off a kernel.
//!
//! Two independent constructions are provided: a modal sine series for
//! constant `c = m`, and the discrete inverse of the assembled operator for
//! general `c`. Both approximate kernel values `g(t_i, s_j)`.

use num_complex::Complex64;

use crate::fields::{Grid, ScalarField};
use crate::solver::{self, InteriorSign};
use crate::spectrum;
use crate::{Error, Execution, Result};

/// Kernel samples `g(t_i, s_j)` on a grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensMatrix {
    grid: Grid,
    values: Vec<f64>,
}

impl GreensMatrix {
    fn from_rows(grid: Grid, rows: Vec<Vec<f64>>) -> Self {
        let values = rows.into_iter().flatten().collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, j)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at the nodes nearest to `(t, s)`.
    pub fn at(&self, t: f64, s: f64) -> f64 {
        self.get(self.grid.nearest_index(t), self.grid.nearest_index(s))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |G - G^T|`.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// A matrix of zeros, mostly useful as a degenerate input.
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.len() * grid.len()],
        }
    }
}

/// Modal-series Green's matrix plus a bound on the truncated tail.
#[derive(Debug, Clone)]
pub struct SeriesGreens {
    pub matrix: GreensMatrix,
    /// Upper bound on `sup |g - g_terms|`.
    pub tail_bound: f64,
}

/// The four roots of `r^4 - p r^2 + m = 0`.
pub fn char_roots(p: f64, m: f64) -> [Complex64; 4] {
    let disc = Complex64::new(p * p - 4.0 * m, 0.0).sqrt();
    let s1 = (Complex64::new(p, 0.0) + disc) / 2.0;
    let s2 = (Complex64::new(p, 0.0) - disc) / 2.0;
    let (r1, r2) = (s1.sqrt(), s2.sqrt());
    [r1, -r1, r2, -r2]
}

fn check_modes(p: f64, m: f64, grid: &Grid) -> Result<()> {
    let interval = grid.interval();
    let mut k = 1;
    loop {
        let lk = spectrum::lambda_k(p, interval, k)?;
        if (lk + m).abs() < 1e-9 {
            return Err(Error::Resonance { k, eigenvalue: lk });
        }
        if lk > -m + 1.0 {
            return Ok(());
        }
        k += 1;
    }
}

/// `g(t,s) = sum_k (2/L) sin(k w (t-a)) sin(k w (s-a)) / (lambda_k + m)`
/// truncated after `terms` modes, `w = pi/L`.
pub fn greens_constant(p: f64, m: f64, grid: &Grid, terms: usize, exec: Execution) -> Result<SeriesGreens> {
    if terms < 50 {
        return Err(Error::Config(format!("series needs at least 50 terms, got {terms}")));
    }
    check_modes(p, m, grid)?;
    let interval = grid.interval();
    let (a, l, w) = (interval.a(), interval.length(), interval.wavenumber());
    let nodes = grid.nodes();
    let coef: Vec<f64> = (1..=terms)
        .map(|k| spectrum::lambda_k(p, interval, k).map(|lk| 2.0 / l / (lk + m)))
        .collect::<Result<_>>()?;
    // sines[k][i] = sin((k+1) w (t_i - a))
    let sines: Vec<Vec<f64>> = (1..=terms)
        .map(|k| nodes.iter().map(|&t| (k as f64 * w * (t - a)).sin()).collect())
        .collect();
    let dim = grid.len();
    let rows = exec.map(dim, |i| {
        (0..dim)
            .map(|j| {
                sines
                    .iter()
                    .zip(&coef)
                    .map(|(s, c)| c * s[i] * s[j])
                    .sum::<f64>()
            })
            .collect::<Vec<f64>>()
    });

    // sum_{k>N} 1/(lambda_k + m) <= sum_{k>N} 1/(k^4 w^4 (1 - |m^-|/((N+1)^4 w^4)))
    let w4 = w.powi(4);
    let first_tail = ((terms + 1) as f64).powi(4) * w4;
    let damping = 1.0 - (-m).max(0.0) / first_tail;
    let tail_bound = if damping > 0.0 {
        (2.0 / l) / (3.0 * (terms as f64).powi(3) * w4 * damping)
    } else {
        f64::INFINITY
    };
    Ok(SeriesGreens {
        matrix: GreensMatrix::from_rows(grid.clone(), rows),
        tail_bound,
    })
}

/// Discrete Green's matrix: column `j` solves the discrete problem with a
/// unit load of mass one concentrated at node `j`, so entries approximate
/// kernel values and the matrix is symmetric. Boundary rows and columns
/// vanish.
pub fn greens_discrete(p: f64, c: &ScalarField, exec: Execution) -> Result<GreensMatrix> {
    let grid = c.grid().clone();
    let op = solver::assemble(p, c);
    let f = op.factor()?;
    let dim = grid.len();
    let n = grid.n();
    let h = grid.spacing();
    let columns = exec.map(dim, |j| {
        if j == 0 || j == n {
            vec![0.0; dim]
        } else {
            f.solve_unit(j).into_iter().map(|v| v / h).collect()
        }
    });
    let rows = (0..dim).map(|i| columns.iter().map(|col| col[i]).collect()).collect();
    Ok(GreensMatrix::from_rows(grid, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Solution of `T[p,c] y = 0`, `y(a) = y(b) = 0` with unit moment on the
/// chosen side and zero moment on the other.
pub fn y_boundary(p: f64, c: &ScalarField, side: Side) -> Result<ScalarField> {
    let op = solver::assemble(p, c);
    let f = op.factor()?;
    let zero = vec![0.0; c.grid().len()];
    let (d1, d2) = match side {
        Side::A => (1.0, 0.0),
        Side::B => (0.0, 1.0),
    };
    ScalarField::new(c.grid().clone(), f.solve(&zero, d1, d2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensConclusion {
    StronglyInversePositive,
    StronglyInverseNegative,
    Inconclusive,
}

impl GreensConclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            GreensConclusion::StronglyInversePositive => "strongly_inverse_positive",
            GreensConclusion::StronglyInverseNegative => "strongly_inverse_negative",
            GreensConclusion::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensSignReport {
    pub interior_sign: InteriorSign,
    pub min_abs_interior: f64,
    /// Worst `d/dt g(t, s)` at `t = a` over interior `s`: the minimum for
    /// positive or mixed kernels, the maximum for negative ones.
    pub boundary_slope_a: f64,
    /// Worst `d/dt g(t, s)` at `t = b`, mirrored.
    pub boundary_slope_b: f64,
    pub conclusion: GreensConclusion,
}

/// Default scan tolerance: `1e-9 max |G|`.
pub fn default_scan_tol(g: &GreensMatrix) -> f64 {
    1e-9 * g.max_abs()
}

/// Classifies the interior of a kernel and the endpoint slopes of its
/// columns. Interior entries must exceed `tol` in magnitude with a common
/// sign to count as signed.
pub fn sign_scan(g: &GreensMatrix, tol: f64) -> GreensSignReport {
    let n = g.grid().n();
    let h = g.grid().spacing();
    let mut all_pos = true;
    let mut all_neg = true;
    let mut min_abs = f64::INFINITY;
    for i in 1..n {
        for &v in &g.row(i)[1..n] {
            all_pos &= v > tol;
            all_neg &= v < -tol;
            min_abs = min_abs.min(v.abs());
        }
    }
    let interior_sign = if all_pos {
        InteriorSign::Positive
    } else if all_neg {
        InteriorSign::Negative
    } else {
        InteriorSign::Mixed
    };
    let slopes_a: Vec<f64> = (1..n)
        .map(|j| (-3.0 * g.get(0, j) + 4.0 * g.get(1, j) - g.get(2, j)) / (2.0 * h))
        .collect();
    let slopes_b: Vec<f64> = (1..n)
        .map(|j| (3.0 * g.get(n, j) - 4.0 * g.get(n - 1, j) + g.get(n - 2, j)) / (2.0 * h))
        .collect();
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (boundary_slope_a, boundary_slope_b) = match interior_sign {
        InteriorSign::Negative => (max(&slopes_a), min(&slopes_b)),
        _ => (min(&slopes_a), max(&slopes_b)),
    };
    let conclusion = match interior_sign {
        InteriorSign::Positive if boundary_slope_a > 0.0 && boundary_slope_b < 0.0 => {
            GreensConclusion::StronglyInversePositive
        }
        InteriorSign::Negative if boundary_slope_a < 0.0 && boundary_slope_b > 0.0 => {
            GreensConclusion::StronglyInverseNegative
        }
        _ => GreensConclusion::Inconclusive,
    };
    GreensSignReport {
        interior_sign,
        min_abs_interior: min_abs,
        boundary_slope_a,
        boundary_slope_b,
        conclusion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Interval;

    fn grid(n: usize) -> Grid {
        Grid::new(Interval::unit(), n).unwrap()
    }

    fn closed_form(t: f64, s: f64) -> f64 {
        let (t, s) = if t <= s { (t, s) } else { (s, t) };
        t * (1.0 - s) * (2.0 * s - s * s - t * t) / 6.0
    }

    fn vieta(roots: &[Complex64; 4]) -> (Complex64, Complex64, Complex64) {
        let sum = roots.iter().sum();
        let mut pairs = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in i + 1..4 {
                pairs += roots[i] * roots[j];
            }
        }
        (sum, pairs, roots.iter().product())
    }

    #[test]
    fn char_roots_examples() {
        assert!(char_roots(0.0, 0.0).iter().all(|r| r.norm() == 0.0));
        let mut re: Vec<f64> = char_roots(5.0, 4.0).iter().map(|r| r.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in re.iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let roots = char_roots(0.0, -4.0);
        for r in roots {
            assert!((r.powi(4) - 4.0).norm() < 1e-12);
        }
        let (s, pr, prod) = vieta(&roots);
        assert!(s.norm() < 1e-12 && pr.norm() < 1e-12 && (prod + 4.0).norm() < 1e-12);
    }

    #[test]
    fn series_matches_closed_form() {
        let g = greens_constant(0.0, 0.0, &grid(20), 2000, Execution::Parallel).unwrap();
        assert!((g.matrix.at(0.5, 0.5) - 1.0 / 48.0).abs() < 1e-6);
        assert!((g.matrix.at(0.3, 0.7) - g.matrix.at(0.7, 0.3)).abs() < 1e-12);
        assert!((g.matrix.at(0.3, 0.7) - closed_form(0.3, 0.7)).abs() < 1e-6);
        assert!(g.matrix.row(0).iter().all(|v| v.abs() < 1e-12));
        assert!(g.tail_bound < 1e-10);
    }

    #[test]
    fn series_rejects_resonance_and_short_series() {
        let pi4 = std::f64::consts::PI.powi(4);
        assert!(matches!(
            greens_constant(0.0, -pi4, &grid(20), 100, Execution::Sequential),
            Err(Error::Resonance { k: 1, .. })
        ));
        assert!(greens_constant(0.0, 0.0, &grid(20), 10, Execution::Sequential).is_err());
    }

    #[test]
    fn discrete_matches_closed_form() {
        let g = grid(200);
        let m = greens_discrete(0.0, &ScalarField::zeros(&g), Execution::Parallel).unwrap();
        assert!((m.at(0.5, 0.5) - 1.0 / 48.0).abs() < 2e-4);
        assert!(m.symmetry_defect() <= 1e-8 * m.max_abs());
        assert!(m.row(0).iter().chain(m.row(200)).all(|&v| v == 0.0));
    }

    #[test]
    fn discrete_and_series_agree_at_second_order() {
        let gap = |n| {
            let g = grid(n);
            let c = ScalarField::constant(&g, 300.0).unwrap();
            let d = greens_discrete(1.5, &c, Execution::Parallel).unwrap();
            let s = greens_constant(1.5, 300.0, &g, 3000, Execution::Parallel).unwrap();
            d.values().iter().zip(s.matrix.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let ratio = gap(40) / gap(80);
        assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let g = grid(40);
        let c = ScalarField::from_fn(&g, |t| 50.0 * t).unwrap();
        let a = greens_discrete(2.0, &c, Execution::Parallel).unwrap();
        let b = greens_discrete(2.0, &c, Execution::Sequential).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn boundary_influence_functions() {
        let g = grid(200);
        let z = ScalarField::zeros(&g);
        let ya = y_boundary(0.0, &z, Side::A).unwrap();
        let yb = y_boundary(0.0, &z, Side::B).unwrap();
        assert!((ya.at(0.5) + 0.0625).abs() < 1e-6);
        assert!((yb.at(0.5) + 0.0625).abs() < 1e-6);
        for i in 0..=200 {
            assert!((ya.values()[i] - yb.values()[200 - i]).abs() < 1e-9);
        }
        let c = ScalarField::constant(&g, 500.0).unwrap();
        for side in [Side::A, Side::B] {
            let y = y_boundary(0.0, &c, side).unwrap();
            assert!(y.values()[1..200].iter().all(|&v| v < 0.0));
        }
    }

    #[test]
    fn sign_scan_examples() {
        let g = grid(100);
        let pos = greens_discrete(0.0, &ScalarField::zeros(&g), Execution::Parallel).unwrap();
        let r = sign_scan(&pos, default_scan_tol(&pos));
        assert_eq!(r.conclusion, GreensConclusion::StronglyInversePositive);
        let c = ScalarField::constant(&g, -200.0).unwrap();
        let neg = greens_discrete(0.0, &c, Execution::Parallel).unwrap();
        assert!(neg.row(50)[1..100].iter().all(|&v| v < 0.0));
        let r = sign_scan(&neg, default_scan_tol(&neg));
        assert_eq!(r.conclusion, GreensConclusion::StronglyInverseNegative);
        let z = GreensMatrix::zeros(&g);
        let r = sign_scan(&z, default_scan_tol(&z));
        assert_eq!(r.interior_sign, InteriorSign::Mixed);
        assert_eq!(r.conclusion, GreensConclusion::Inconclusive);
    }
}
