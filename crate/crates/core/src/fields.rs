//! Uniform grids, sampled scalar functions and the calculus primitives
//! (Simpson quadrature, finite differences, norms, sign decompositions)
//! used by every other module.
//!
//! Extrema are taken over grid samples, so `f_m` and `f^m` are exact only up
//! to grid resolution.

use crate::{Error, Result};

/// Smallest admissible number of grid subintervals.
pub const MIN_SUBINTERVALS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Config(format!("interval endpoints must be finite, got [{a}, {b}]")));
        }
        if a >= b {
            return Err(Error::Config(format!("interval requires a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    /// The unit interval `[0, 1]`.
    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// `pi / (b - a)`, the wavenumber of the first sine mode.
    pub fn wavenumber(&self) -> f64 {
        std::f64::consts::PI / self.length()
    }
}

/// Uniform grid with `n` subintervals (`n` even, `n >= 8`).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    interval: Interval,
    n: usize,
}

impl Grid {
    pub fn new(interval: Interval, n: usize) -> Result<Self> {
        if n < MIN_SUBINTERVALS {
            return Err(Error::Config(format!(
                "grid needs at least {MIN_SUBINTERVALS} subintervals, got {n}"
            )));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "Simpson quadrature needs an even number of subintervals, got {n}"
            )));
        }
        Ok(Self { interval, n })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.interval.length() / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        // pin the last node to b exactly
        if i == self.n {
            self.interval.b
        } else {
            self.interval.a + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    /// Composite Simpson weights.
    pub fn simpson_weights(&self) -> Vec<f64> {
        let h3 = self.spacing() / 3.0;
        (0..=self.n)
            .map(|i| {
                if i == 0 || i == self.n {
                    h3
                } else if i % 2 == 1 {
                    4.0 * h3
                } else {
                    2.0 * h3
                }
            })
            .collect()
    }

    /// Index of the node closest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let x = ((t - self.interval.a) / self.spacing()).round();
        x.clamp(0.0, self.n as f64) as usize
    }
}

/// A function sampled at the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "field has {} samples but the grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite sample {} at t = {}",
                values[i],
                grid.node(i)
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid.clone(), values)
    }

    pub fn constant(grid: &Grid, value: f64) -> Result<Self> {
        Self::new(grid.clone(), vec![value; grid.len()])
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at the node nearest to `t`.
    pub fn at(&self, t: f64) -> f64 {
        self.values[self.grid.nearest_index(t)]
    }

    /// Pointwise map; the result must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Config("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `(f_m, f^m)`: minimum and maximum over the samples.
    pub fn extrema(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn min(&self) -> f64 {
        self.extrema().0
    }

    pub fn max(&self) -> f64 {
        self.extrema().1
    }

    /// `f^+ = max{0, f}` and `f^- = max{0, -f}`.
    pub fn split_signs(&self) -> (ScalarField, ScalarField) {
        let plus = self.values.iter().map(|&v| if v > 0.0 { v } else { 0.0 }).collect();
        let minus = self.values.iter().map(|&v| if v < 0.0 { -v } else { 0.0 }).collect();
        (
            ScalarField { grid: self.grid.clone(), values: plus },
            ScalarField { grid: self.grid.clone(), values: minus },
        )
    }

    /// Composite Simpson approximation of the integral over `[a, b]`.
    pub fn integrate(&self) -> f64 {
        simpson(&self.grid, &self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        simpson(&self.grid, &sq).max(0.0).sqrt()
    }

    /// First or second derivative by second-order finite differences:
    /// central at interior nodes, one-sided at the endpoints.
    pub fn diff(&self, order: u8) -> Result<ScalarField> {
        let h = self.grid.spacing();
        let u = &self.values;
        let n = self.grid.n();
        let values = match order {
            1 => (0..=n)
                .map(|i| {
                    if i == 0 {
                        (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
                    } else if i == n {
                        (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h)
                    } else {
                        (u[i + 1] - u[i - 1]) / (2.0 * h)
                    }
                })
                .collect(),
            2 => {
                let h2 = h * h;
                (0..=n)
                    .map(|i| {
                        if i == 0 {
                            (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2
                        } else if i == n {
                            (2.0 * u[n] - 5.0 * u[n - 1] + 4.0 * u[n - 2] - u[n - 3]) / h2
                        } else {
                            (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2
                        }
                    })
                    .collect()
            }
            _ => return Err(Error::Domain(format!("derivative order must be 1 or 2, got {order}"))),
        };
        ScalarField::new(self.grid.clone(), values)
    }

    /// Norm induced by `(u,v) = ∫u''v'' + p∫u'v' + ∫r u v` on functions
    /// vanishing at both endpoints.
    pub fn energy_norm(&self, p: f64, r: &ScalarField) -> Result<f64> {
        self.same_grid(r)?;
        if let Some(i) = r.values.iter().position(|&v| v < 0.0) {
            return Err(Error::Domain(format!(
                "weight r must be nonnegative, r({}) = {}",
                self.grid.node(i),
                r.values[i]
            )));
        }
        let scale = self.sup_norm().max(1.0);
        let (ua, ub) = (self.values[0], self.values[self.grid.n()]);
        if ua.abs() > 1e-8 * scale || ub.abs() > 1e-8 * scale {
            return Err(Error::Domain(format!(
                "energy norm needs u(a) = u(b) = 0, got u(a) = {ua}, u(b) = {ub}"
            )));
        }
        let d1 = self.diff(1)?;
        let d2 = self.diff(2)?;
        let integrand: Vec<f64> = (0..self.grid.len())
            .map(|i| {
                d2.values[i].powi(2) + p * d1.values[i].powi(2) + r.values[i] * self.values[i].powi(2)
            })
            .collect();
        Ok(simpson(&self.grid, &integrand).max(0.0).sqrt())
    }
}

fn simpson(grid: &Grid, values: &[f64]) -> f64 {
    grid.simpson_weights()
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// Boundary-value problem `T[p,c] u = h` with `u(a) = u(b) = 0`,
/// `u''(a) = d1`, `u''(b) = d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    interval: Interval,
    p: f64,
    c: ScalarField,
    h: ScalarField,
    d1: f64,
    d2: f64,
}

impl ProblemSpec {
    pub fn new(p: f64, c: ScalarField, h: ScalarField, d1: f64, d2: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::Config(format!("p must be finite and nonnegative, got {p}")));
        }
        if !(d1.is_finite() && d1 <= 0.0 && d2.is_finite() && d2 <= 0.0) {
            return Err(Error::Config(format!(
                "boundary moments must be nonpositive, got d1 = {d1}, d2 = {d2}"
            )));
        }
        c.same_grid(&h)?;
        Ok(Self {
            interval: c.grid().interval(),
            p,
            c,
            h,
            d1,
            d2,
        })
    }

    /// Homogeneous conditions `u'' = 0` at both ends.
    pub fn homogeneous(p: f64, c: ScalarField, h: ScalarField) -> Result<Self> {
        Self::new(p, c, h, 0.0, 0.0)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn grid(&self) -> &Grid {
        self.c.grid()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c(&self) -> &ScalarField {
        &self.c
    }

    pub fn h(&self) -> &ScalarField {
        &self.h
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn d2(&self) -> f64 {
        self.d2
    }

    pub fn is_homogeneous(&self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0
    }

    pub fn with_c(&self, c: ScalarField) -> Result<Self> {
        Self::new(self.p, c, self.h.clone(), self.d1, self.d2)
    }

    pub fn with_h(&self, h: ScalarField) -> Result<Self> {
        Self::new(self.p, self.c.clone(), h, self.d1, self.d2)
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(p, self.c.clone(), self.h.clone(), self.d1, self.d2)
    }
}
