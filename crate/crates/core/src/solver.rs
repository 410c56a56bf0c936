//! Finite-difference discretization of `T[p,c] u = h` with simply supported
//! conditions, and the three solution routes: banded direct solve, Green's
//! superposition, and the frozen-coefficient fixed-point iteration.
//!
//! Interior rows use the five-point fourth difference and the three-point
//! second difference. The moment conditions `u''(a) = d1`, `u''(b) = d2`
//! eliminate the ghost values `u_{-1} = 2 u_0 - u_1 + h^2 d1` (mirrored at
//! `b`), so the interior matrix stays symmetric and pentadiagonal and the
//! moments only enter the right-hand side. Rows are stored multiplied by
//! `h^4` to keep entries of order one.

use crate::banded::{BandLu, BandMatrix};
use crate::fields::{Grid, Interval, ProblemSpec, ScalarField};
use crate::greens;
use crate::spectrum::{self, SpectralData};
use crate::{Error, Execution, Result};

/// Default increment tolerance of [`fixed_point_solve`].
pub const DEFAULT_FIXED_POINT_TOL: f64 = 1e-10;
/// Default iteration cap of [`fixed_point_solve`].
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Superposition,
    FixedPoint,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Superposition => "superposition",
            Method::FixedPoint => "fixed-point",
        }
    }
}

/// Discrete `T[p,c]` on the interior nodes `1..n-1` of a grid.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    grid: Grid,
    p: f64,
    c: ScalarField,
    band: BandMatrix,
}

/// Assembles the discrete operator for `T[p,c]`.
pub fn assemble(p: f64, c: &ScalarField) -> OperatorMatrix {
    let grid = c.grid().clone();
    let n = grid.n();
    let size = n - 1;
    let h = grid.spacing();
    let ph2 = p * h * h;
    let h4 = h.powi(4);
    let mut band = BandMatrix::zeros(size, 2, 2);
    for r in 0..size {
        let i = r + 1;
        let mut diag = 6.0 + 2.0 * ph2 + c.values()[i] * h4;
        // ghost elimination with u'' given: u_{-1} = -u_1 + (moment term)
        if r == 0 || r == size - 1 {
            diag -= 1.0;
        }
        band.set(r, r, diag);
        if r >= 1 {
            band.set(r, r - 1, -4.0 - ph2);
        }
        if r + 1 < size {
            band.set(r, r + 1, -4.0 - ph2);
        }
        if r >= 2 {
            band.set(r, r - 2, 1.0);
        }
        if r + 2 < size {
            band.set(r, r + 2, 1.0);
        }
    }
    OperatorMatrix { grid, p, c: c.clone(), band }
}

impl OperatorMatrix {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c(&self) -> &ScalarField {
        &self.c
    }

    /// The `h^4`-scaled interior matrix.
    pub fn band(&self) -> &BandMatrix {
        &self.band
    }

    /// Applies the discrete operator (unscaled) to samples `u`, eliminating
    /// ghost values with the moments `d1`, `d2`. Interior entries hold
    /// `T[p,c] u`; the two boundary entries hold `u(a)` and `u(b)`.
    pub fn apply(&self, u: &ScalarField, d1: f64, d2: f64) -> Result<ScalarField> {
        u.same_grid(&self.c)?;
        let n = self.grid.n();
        let h = self.grid.spacing();
        let (h2, h4) = (h * h, h.powi(4));
        let v = u.values();
        let ghost_a = 2.0 * v[0] - v[1] + h2 * d1;
        let ghost_b = 2.0 * v[n] - v[n - 1] + h2 * d2;
        let at = |i: i64| -> f64 {
            if i < 0 {
                ghost_a
            } else if i as usize > n {
                ghost_b
            } else {
                v[i as usize]
            }
        };
        let mut out = vec![0.0; n + 1];
        out[0] = v[0];
        out[n] = v[n];
        for (i, slot) in out.iter_mut().enumerate().take(n).skip(1) {
            let k = i as i64;
            let d4 = (at(k - 2) - 4.0 * at(k - 1) + 6.0 * at(k) - 4.0 * at(k + 1) + at(k + 2)) / h4;
            let d2 = (at(k - 1) - 2.0 * at(k) + at(k + 1)) / h2;
            *slot = d4 - self.p * d2 + self.c.values()[i] * at(k);
        }
        ScalarField::new(self.grid.clone(), out)
    }

    pub fn factor(&self) -> Result<FactoredOperator<'_>> {
        match self.band.factor() {
            Ok(lu) => Ok(FactoredOperator { op: self, lu }),
            Err(_) => Err(self.resonance_error()),
        }
    }

    fn resonance_error(&self) -> Error {
        let values = self.c.values();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        match spectrum::nearest_eigenvalue(self.p, self.grid.interval(), mean) {
            Ok((k, eigenvalue)) => Error::Resonance { k, eigenvalue },
            Err(e) => e,
        }
    }

    /// Eigenvalue of smallest magnitude of the discrete operator, by inverse
    /// power iteration with Rayleigh quotients.
    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        let lu = self.factor()?.lu;
        let size = self.band.size();
        let mut x: Vec<f64> = (0..size).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        normalize(&mut x);
        let mut mu = f64::NAN;
        for _ in 0..1000 {
            let mut y = lu.solve(&x);
            normalize(&mut y);
            let by = self.band.mul_vec(&y);
            let next: f64 = by.iter().zip(&y).map(|(a, b)| a * b).sum();
            x = y;
            if (next - mu).abs() <= 1e-15 * next.abs() {
                mu = next;
                break;
            }
            mu = next;
        }
        Ok(mu / self.grid.spacing().powi(4))
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

/// LU factors of an [`OperatorMatrix`], reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct FactoredOperator<'a> {
    op: &'a OperatorMatrix,
    lu: BandLu,
}

impl FactoredOperator<'_> {
    pub fn operator(&self) -> &OperatorMatrix {
        self.op
    }

    /// Solves `T[p,c] u = load` with `u''(a) = d1`, `u''(b) = d2`, with one
    /// step of iterative refinement. Returns all `n + 1` nodal values.
    pub fn solve(&self, load: &[f64], d1: f64, d2: f64) -> Vec<f64> {
        let grid = &self.op.grid;
        let n = grid.n();
        let h = grid.spacing();
        let (h2, h4) = (h * h, h.powi(4));
        let mut rhs: Vec<f64> = (1..n).map(|i| h4 * load[i]).collect();
        rhs[0] -= h2 * d1;
        rhs[n - 2] -= h2 * d2;
        let mut x = self.lu.solve(&rhs);
        let ax = self.op.band.mul_vec(&x);
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let dx = self.lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(v, d)| *v += d);
        let mut u = Vec::with_capacity(n + 1);
        u.push(0.0);
        u.extend(x);
        u.push(0.0);
        u
    }

    /// Solves with a unit load at a single interior node, i.e. column `j`
    /// of the inverse of the unscaled interior operator.
    pub(crate) fn solve_unit(&self, j: usize) -> Vec<f64> {
        let mut load = vec![0.0; self.op.grid.len()];
        load[j] = 1.0;
        self.solve(&load, 0.0, 0.0)
    }
}

/// A computed solution with its residual diagnostics.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub u: ScalarField,
    /// Sup norm of `T[p,c] u - h` over interior nodes.
    pub residual_norm: f64,
    /// Normwise backward error
    /// `residual / (||T||_inf ||u||_inf + ||h||_inf + (|d1| + |d2|)/spacing^2)`.
    pub backward_error: f64,
    pub method: Method,
    /// Solves performed by the fixed-point route; 0 for direct solves.
    pub iterations: usize,
}

impl SolutionField {
    fn new(problem: &ProblemSpec, op: &OperatorMatrix, u: Vec<f64>, method: Method, iterations: usize) -> Result<Self> {
        let u = ScalarField::new(problem.grid().clone(), u)?;
        let (residual_norm, backward_error) = residuals(problem, op, &u)?;
        Ok(Self {
            u,
            residual_norm,
            backward_error,
            method,
            iterations,
        })
    }

    /// Bound on [`SolutionField::backward_error`] every returned solve meets.
    pub fn backward_error_limit(problem: &ProblemSpec) -> f64 {
        1e-8 * (problem.h().sup_norm() + problem.d1().abs() + problem.d2().abs() + 1.0)
    }
}

fn residuals(problem: &ProblemSpec, op: &OperatorMatrix, u: &ScalarField) -> Result<(f64, f64)> {
    let tu = op.apply(u, problem.d1(), problem.d2())?;
    let n = u.grid().n();
    let h = u.grid().spacing();
    let raw = (1..n)
        .map(|i| (tu.values()[i] - problem.h().values()[i]).abs())
        .fold(0.0, f64::max);
    let scale = op.band.norm_inf() / h.powi(4) * u.sup_norm()
        + problem.h().sup_norm()
        + (problem.d1().abs() + problem.d2().abs()) / (h * h);
    let backward = if scale > 0.0 { raw / scale } else { raw };
    Ok((raw, backward))
}

/// Banded LU solve of the problem on its own grid.
pub fn direct_solve(problem: &ProblemSpec) -> Result<SolutionField> {
    let op = assemble(problem.p(), problem.c());
    let f = op.factor()?;
    let u = f.solve(problem.h().values(), problem.d1(), problem.d2());
    SolutionField::new(problem, &op, u, Method::Direct, 0)
}

/// `u(t) = ∫ g(t,s) h(s) ds + d1 y^a(t) + d2 y^b(t)`, with the integral
/// taken by Simpson quadrature against the discrete Green's matrix.
pub fn superposition_solve(problem: &ProblemSpec, exec: Execution) -> Result<SolutionField> {
    let g = greens::greens_discrete(problem.p(), problem.c(), exec)?;
    let weights = problem.grid().simpson_weights();
    let h = problem.h().values();
    let mut u: Vec<f64> = (0..problem.grid().len())
        .map(|i| g.row(i).iter().zip(&weights).zip(h).map(|((g, w), h)| g * w * h).sum())
        .collect();
    for (d, side) in [(problem.d1(), greens::Side::A), (problem.d2(), greens::Side::B)] {
        if d != 0.0 {
            let y = greens::y_boundary(problem.p(), problem.c(), side)?;
            u.iter_mut().zip(y.values()).for_each(|(u, y)| *u += d * y);
        }
    }
    let op = assemble(problem.p(), problem.c());
    SolutionField::new(problem, &op, u, Method::Superposition, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointMode {
    /// Freeze `d(t) = min{c(t), -lambda2}`; iterates stay positive.
    Positive,
    /// Freeze `e(t) = max{c(t), -lambda3}`; iterates stay negative.
    Negative,
}

/// Outcome of [`fixed_point_solve`].
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub solution: SolutionField,
    /// `u_1, u_2, ...` (the start `u_0 = 0` is omitted).
    pub iterates: Vec<ScalarField>,
    /// `||u_{n+1} - u_n||_C` for each step.
    pub increments: Vec<f64>,
    /// `sup_n ||u_{n+1} - u_n||_C / ||u_n - u_{n-1}||_C` over increments
    /// above rounding level; 0 when fewer than two such increments exist.
    pub contraction_ratio: f64,
    /// The frozen coefficient `d` or `e`.
    pub frozen: ScalarField,
}

/// Iterates `T[p,d] u_{n+1} = h - (c - d) u_n` from `u_0 = 0` (or the
/// mirrored recurrence with `e` in negative mode) until the sup-norm
/// increment drops below `tol`.
pub fn fixed_point_solve(
    problem: &ProblemSpec,
    mode: FixedPointMode,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointReport> {
    if !problem.is_homogeneous() {
        return Err(Error::Unsupported(
            "fixed-point iteration is only defined for homogeneous moment conditions (d1 = d2 = 0)".into(),
        ));
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::Config(format!("need tol > 0 and max_iter > 0, got {tol}, {max_iter}")));
    }
    let spectral = SpectralData::compute(problem.p(), problem.interval())?;
    let c = problem.c();
    let frozen = match mode {
        FixedPointMode::Positive => c.map(|v| v.min(-spectral.lambda2))?,
        FixedPointMode::Negative => c.map(|v| v.max(-spectral.lambda3))?,
    };
    let correction: Vec<f64> = c.values().iter().zip(frozen.values()).map(|(c, d)| c - d).collect();
    let op = assemble(problem.p(), &frozen);
    let f = op.factor()?;
    let h = problem.h().values();
    let full_op = assemble(problem.p(), c);

    let mut u = f.solve(h, 0.0, 0.0);
    let mut iterates = vec![ScalarField::new(problem.grid().clone(), u.clone())?];
    let mut increments = vec![sup(&u)];
    let mut ratio: f64 = 0.0;
    if correction.iter().all(|&v| v == 0.0) {
        let solution = SolutionField::new(problem, &full_op, u, Method::FixedPoint, 1)?;
        return Ok(FixedPointReport { solution, iterates, increments, contraction_ratio: 0.0, frozen });
    }
    for iteration in 2..=max_iter {
        let load: Vec<f64> = h.iter().zip(&correction).zip(&u).map(|((h, k), u)| h - k * u).collect();
        let next = f.solve(&load, 0.0, 0.0);
        let step = next.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if !step.is_finite() {
            return Err(Error::NonConvergence { iterations: iteration, last_ratio: f64::INFINITY });
        }
        let prev = *increments.last().unwrap();
        let noise = 1e-13 * sup(&next);
        if step > noise && prev > noise {
            ratio = ratio.max(step / prev);
        }
        increments.push(step);
        u = next;
        iterates.push(ScalarField::new(problem.grid().clone(), u.clone())?);
        if step < tol {
            let solution = SolutionField::new(problem, &full_op, u, Method::FixedPoint, iteration)?;
            return Ok(FixedPointReport { solution, iterates, increments, contraction_ratio: ratio, frozen });
        }
    }
    let n = increments.len();
    let last_ratio = if n >= 2 { increments[n - 1] / increments[n - 2] } else { f64::NAN };
    Err(Error::NonConvergence { iterations: max_iter, last_ratio })
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteriorSign {
    Positive,
    Negative,
    Mixed,
}

impl InteriorSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            InteriorSign::Positive => "positive",
            InteriorSign::Negative => "negative",
            InteriorSign::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateVerdict {
    StronglyPositive,
    StronglyNegative,
    Fails,
}

impl CertificateVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateVerdict::StronglyPositive => "strongly_positive",
            CertificateVerdict::StronglyNegative => "strongly_negative",
            CertificateVerdict::Fails => "fails",
        }
    }
}

/// Numerical evidence that a solution is strictly signed inside `(a, b)`
/// with strictly signed endpoint slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignCertificate {
    pub interior_sign: InteriorSign,
    pub min_abs_interior: f64,
    /// `u'(a)` from the one-sided stencil.
    pub slope_a: f64,
    /// `u'(b)` from the one-sided stencil.
    pub slope_b: f64,
    pub verdict: CertificateVerdict,
}

/// Tolerance used when none is supplied: `1e-9 ||u||_C`.
pub fn default_certificate_tol(u: &ScalarField) -> f64 {
    1e-9 * u.sup_norm()
}

pub fn sign_certificate(u: &ScalarField, tol: f64) -> Result<SignCertificate> {
    let n = u.grid().n();
    let interior = &u.values()[1..n];
    let interior_sign = if interior.iter().all(|&v| v > tol) {
        InteriorSign::Positive
    } else if interior.iter().all(|&v| v < -tol) {
        InteriorSign::Negative
    } else {
        InteriorSign::Mixed
    };
    let min_abs_interior = interior.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let du = u.diff(1)?;
    let (slope_a, slope_b) = (du.values()[0], du.values()[n]);
    let verdict = match interior_sign {
        InteriorSign::Positive if slope_a > tol && slope_b < -tol => CertificateVerdict::StronglyPositive,
        InteriorSign::Negative if slope_a < -tol && slope_b > tol => CertificateVerdict::StronglyNegative,
        _ => CertificateVerdict::Fails,
    };
    Ok(SignCertificate {
        interior_sign,
        min_abs_interior,
        slope_a,
        slope_b,
        verdict,
    })
}

/// `(1/delta1) ∫|f|`, the bound on the energy-norm operator `S_f`.
pub fn operator_norm_bound(f: &ScalarField, p: f64, interval: Interval) -> Result<f64> {
    let abs = f.map(f64::abs)?;
    Ok(abs.integrate() / spectrum::delta1(p, interval)?)
}

/// `sqrt((b-a)/(lambda1 + r_min)) ||h||_C`, the bound on the Riesz
/// representative of the load.
pub fn rhs_norm_bound(h: &ScalarField, p: f64, interval: Interval, r_min: f64) -> Result<f64> {
    let denom = spectrum::lambda_k(p, interval, 1)? + r_min;
    if !(denom > 0.0) {
        return Err(Error::Domain(format!("lambda1 + r_min must be positive, got {denom}")));
    }
    Ok((interval.length() / denom).sqrt() * h.sup_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(Interval::unit(), n).unwrap()
    }

    fn problem(n: usize, p: f64, c: impl Fn(f64) -> f64, h: impl Fn(f64) -> f64, d1: f64, d2: f64) -> ProblemSpec {
        let g = grid(n);
        ProblemSpec::new(
            p,
            ScalarField::from_fn(&g, c).unwrap(),
            ScalarField::from_fn(&g, h).unwrap(),
            d1,
            d2,
        )
        .unwrap()
    }

    fn beam(t: f64) -> f64 {
        (t.powi(4) - 2.0 * t.powi(3) + t) / 24.0
    }

    #[test]
    fn assemble_reproduces_sine_modes() {
        let g = grid(400);
        let op = assemble(0.0, &ScalarField::zeros(&g));
        let s = ScalarField::from_fn(&g, |t| (PI * t).sin()).unwrap();
        let ts = op.apply(&s, 0.0, 0.0).unwrap();
        let pi4 = PI.powi(4);
        for i in 1..400 {
            let expect = pi4 * s.values()[i];
            assert!((ts.values()[i] - expect).abs() <= 5e-3 * expect.abs() + 1e-9);
        }
        let op1 = assemble(1.0, &ScalarField::zeros(&g));
        let s2 = ScalarField::from_fn(&g, |t| (2.0 * PI * t).sin()).unwrap();
        let ts2 = op1.apply(&s2, 0.0, 0.0).unwrap();
        let lam = 16.0 * pi4 + 4.0 * PI * PI;
        for i in 1..400 {
            let expect = lam * s2.values()[i];
            assert!((ts2.values()[i] - expect).abs() <= 5e-3 * expect.abs() + 1e-3);
        }
        let z = op.apply(&ScalarField::zeros(&g), 0.0, 0.0).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn direct_solve_uniform_load() {
        let pr = problem(400, 0.0, |_| 0.0, |_| 1.0, 0.0, 0.0);
        let sol = direct_solve(&pr).unwrap();
        assert!((sol.u.at(0.5) - 5.0 / 384.0).abs() < 1e-7);
        assert!(sol.backward_error <= SolutionField::backward_error_limit(&pr));
        assert_eq!(sol.method, Method::Direct);
    }

    #[test]
    fn direct_solve_boundary_moment() {
        let pr = problem(400, 0.0, |_| 0.0, |_| 0.0, -1.0, 0.0);
        let sol = direct_solve(&pr).unwrap();
        assert!((sol.u.at(0.5) - 0.0625).abs() < 1e-6);
        let ya = |t: f64| t * t / 2.0 - t.powi(3) / 6.0 - t / 3.0;
        for (t, u) in pr.grid().nodes().into_iter().zip(sol.u.values()) {
            assert!((u + ya(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn direct_solve_trivial_problem() {
        let pr = problem(64, 3.0, |t| 10.0 * t, |_| 0.0, 0.0, 0.0);
        let sol = direct_solve(&pr).unwrap();
        assert_eq!(sol.u.sup_norm(), 0.0);
    }

    #[test]
    fn second_order_convergence() {
        let err = |n| {
            let pr = problem(n, 0.0, |_| 0.0, |_| 1.0, 0.0, 0.0);
            let u = direct_solve(&pr).unwrap().u;
            pr.grid()
                .nodes()
                .into_iter()
                .zip(u.values())
                .map(|(t, v)| (v - beam(t)).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(100) / err(200);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn superposition_matches_symbolic_and_direct() {
        let pr = problem(200, 0.0, |_| 0.0, |_| 1.0, -1.0, -1.0);
        let sup = superposition_solve(&pr, Execution::Parallel).unwrap();
        assert!((sup.u.at(0.5) - 0.138_020_833_333).abs() < 1e-5);
        let direct = direct_solve(&pr).unwrap();
        let gap = sup.u.zip_with(&direct.u, |a, b| a - b).unwrap().sup_norm();
        assert!(gap <= 5e-4, "{gap}");
    }

    #[test]
    fn fixed_point_without_correction_is_one_step() {
        let pr = problem(100, 0.0, |t| 100.0 * t, |_| 1.0, 0.0, 0.0);
        let rep = fixed_point_solve(&pr, FixedPointMode::Positive, 1e-10, 200).unwrap();
        assert_eq!(rep.solution.iterations, 1);
        let direct = direct_solve(&pr).unwrap();
        let gap = rep.solution.u.zip_with(&direct.u, |a, b| a - b).unwrap().sup_norm();
        assert!(gap < 1e-12);
    }

    #[test]
    fn fixed_point_positive_mode() {
        let pr = problem(200, 0.0, |t| 1000.0 * (PI * t).sin().powi(2), |_| 1.0, 0.0, 0.0);
        let rep = fixed_point_solve(&pr, FixedPointMode::Positive, 1e-10, 200).unwrap();
        for it in &rep.iterates {
            let cert = sign_certificate(it, default_certificate_tol(it)).unwrap();
            assert_eq!(cert.verdict, CertificateVerdict::StronglyPositive);
        }
        let direct = direct_solve(&pr).unwrap();
        let gap = rep.solution.u.zip_with(&direct.u, |a, b| a - b).unwrap().sup_norm();
        assert!(gap < 1e-6);
        assert!(rep.contraction_ratio > 0.0 && rep.contraction_ratio < 1.0);
    }

    #[test]
    fn fixed_point_negative_mode() {
        let pr = problem(200, 0.0, |_| -250.0, |_| 1.0, 0.0, 0.0);
        let rep = fixed_point_solve(&pr, FixedPointMode::Negative, 1e-10, 200).unwrap();
        let cert = sign_certificate(&rep.solution.u, default_certificate_tol(&rep.solution.u)).unwrap();
        assert_eq!(cert.verdict, CertificateVerdict::StronglyNegative);
        let direct = direct_solve(&pr).unwrap();
        let gap = rep.solution.u.zip_with(&direct.u, |a, b| a - b).unwrap().sup_norm();
        assert!(gap < 1e-9);
    }

    #[test]
    fn fixed_point_errors() {
        let pr = problem(64, 0.0, |_| 0.0, |_| 1.0, -1.0, 0.0);
        assert!(matches!(
            fixed_point_solve(&pr, FixedPointMode::Positive, 1e-10, 200),
            Err(Error::Unsupported(_))
        ));
        // far outside the contraction regime
        let pr = problem(64, 0.0, |_| 5000.0, |_| 1.0, 0.0, 0.0);
        assert!(matches!(
            fixed_point_solve(&pr, FixedPointMode::Positive, 1e-10, 30),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn certificate_examples() {
        let g = grid(400);
        let u = ScalarField::from_fn(&g, beam).unwrap();
        let cert = sign_certificate(&u, default_certificate_tol(&u)).unwrap();
        assert_eq!(cert.verdict, CertificateVerdict::StronglyPositive);
        assert!((cert.slope_a - 1.0 / 24.0).abs() < 1e-5);
        assert!((cert.slope_b + 1.0 / 24.0).abs() < 1e-5);
        let z = ScalarField::zeros(&g);
        assert_eq!(sign_certificate(&z, 0.0).unwrap().verdict, CertificateVerdict::Fails);
        let s = ScalarField::from_fn(&g, |t| -(PI * t).sin()).unwrap();
        let cert = sign_certificate(&s, default_certificate_tol(&s)).unwrap();
        assert_eq!(cert.verdict, CertificateVerdict::StronglyNegative);
        assert!((cert.slope_a + PI).abs() < 1e-3 && (cert.slope_b - PI).abs() < 1e-3);
    }

    #[test]
    fn norm_bound_examples() {
        let g = grid(200);
        let i = Interval::unit();
        assert_eq!(operator_norm_bound(&ScalarField::zeros(&g), 0.0, i).unwrap(), 0.0);
        let s = ScalarField::from_fn(&g, |t| (PI * t).sin()).unwrap();
        assert!((operator_norm_bound(&s, 0.0, i).unwrap() - 2.0 / PI / (4.0 * PI * PI)).abs() < 1e-6);
        let c39 = ScalarField::constant(&g, 39.0).unwrap();
        assert!((operator_norm_bound(&c39, 0.0, i).unwrap() - 0.98788).abs() < 1e-5);

        let one = ScalarField::constant(&g, 1.0).unwrap();
        assert!((rhs_norm_bound(&one, 0.0, i, 0.0).unwrap() - 0.101321).abs() < 1e-6);
        assert_eq!(rhs_norm_bound(&ScalarField::zeros(&g), 0.0, i, 0.0).unwrap(), 0.0);
        let two = ScalarField::constant(&g, 2.0).unwrap();
        assert!((rhs_norm_bound(&two, 0.0, i, PI.powi(4)).unwrap() - 0.143289).abs() < 1e-6);
        assert!(rhs_norm_bound(&one, 0.0, i, -200.0).is_err());
    }

    #[test]
    fn smallest_eigenvalue_converges_to_pi4() {
        let pi4 = PI.powi(4);
        let e200 = assemble(0.0, &ScalarField::zeros(&grid(200))).smallest_eigenvalue().unwrap();
        let e400 = assemble(0.0, &ScalarField::zeros(&grid(400))).smallest_eigenvalue().unwrap();
        assert!((e200 - pi4).abs() < 5e-3 * pi4);
        let ratio = (e200 - pi4).abs() / (e400 - pi4).abs();
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }
}
