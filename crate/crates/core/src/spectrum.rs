//! Spectral thresholds of `T[p,0]` and the constants of the contraction
//! arguments.
//!
//! * `lambda_k` are the eigenvalues under simply supported conditions;
//!   `lambda1` and `lambda1_prime` are the first two.
//! * `lambda2 < 0` and `lambda3 > 0` are defined by transcendental equations
//!   of the form `tan(x)/alpha = tanh(y)/beta`. Both are found by scanning
//!   the tangent argument `x` upward from zero in steps much smaller than
//!   the distance between poles, discarding brackets that straddle a pole
//!   of `tan`, and bisecting the first genuine sign change.
//! * `delta1` bounds `||u||_C <= ||u|| / sqrt(delta1)` in the energy norm,
//!   `delta2` is the distance from `-1` to the spectrum of the frozen
//!   operator in the anti-maximum window.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::fields::{Interval, ScalarField};
use crate::{Error, Result};

/// Thresholds for a given `(p, [a, b])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    pub p: f64,
    pub interval: Interval,
    /// Least eigenvalue of `T[p,0]` in the simply supported space.
    pub lambda1: f64,
    /// Second eigenvalue, `lambda_k` at `k = 2`.
    pub lambda1_prime: f64,
    /// Negative threshold; `c <= -lambda2` keeps inverse positivity.
    pub lambda2: f64,
    /// Positive threshold; `c >= -lambda3` keeps inverse negativity.
    pub lambda3: f64,
    pub delta1: f64,
}

impl SpectralData {
    pub fn compute(p: f64, interval: Interval) -> Result<Self> {
        check_p(p)?;
        Ok(Self {
            p,
            interval,
            lambda1: lambda_k(p, interval, 1)?,
            lambda1_prime: lambda_k(p, interval, 2)?,
            lambda2: lambda2(p, interval)?,
            lambda3: lambda3(p, interval)?,
            delta1: delta1(p, interval)?,
        })
    }

    /// `delta2` at this `(p, interval)`.
    pub fn delta2(&self, c_m: f64) -> Result<f64> {
        delta2(self.p, self.interval, c_m)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p must be finite and nonnegative, got {p}")))
    }
}

/// `lambda_k = k^4 (pi/(b-a))^4 + k^2 p (pi/(b-a))^2`.
pub fn lambda_k(p: f64, interval: Interval, k: usize) -> Result<f64> {
    check_p(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k must be at least 1".into()));
    }
    let w2 = interval.wavenumber().powi(2);
    let k2 = (k * k) as f64;
    Ok(k2 * k2 * w2 * w2 + k2 * p * w2)
}

/// Residual `tan(L/2 a)/a - tanh(L/2 b)/b` with `a = sqrt(2 sqrt(lambda) - p)`,
/// `b = sqrt(2 sqrt(lambda) + p)`. NaN outside `2 sqrt(lambda) > p`.
pub fn lambda2_residual(p: f64, interval: Interval, lambda: f64) -> f64 {
    let s = 2.0 * lambda.sqrt();
    if !(lambda > 0.0 && s > p) {
        return f64::NAN;
    }
    let half = interval.length() / 2.0;
    let alpha = (s - p).sqrt();
    let beta = (s + p).sqrt();
    (half * alpha).tan() / alpha - (half * beta).tanh() / beta
}

/// Residual `tan(L g/sqrt2)/g - tanh(L e/sqrt2)/e` with
/// `g = sqrt(sqrt(p^2 + 4 lambda) - p)`, `e = sqrt(sqrt(p^2 + 4 lambda) + p)`.
pub fn lambda3_residual(p: f64, interval: Interval, lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return f64::NAN;
    }
    let root = (p * p + 4.0 * lambda).sqrt();
    let scale = interval.length() / SQRT_2;
    let gamma = (root - p).sqrt();
    let eta = (root + p).sqrt();
    (scale * gamma).tan() / gamma - (scale * eta).tanh() / eta
}

/// Negative threshold: minus the least positive root of the
/// [`lambda2_residual`] equation.
pub fn lambda2(p: f64, interval: Interval) -> Result<f64> {
    check_p(p)?;
    // tan argument x = (L/2) alpha, alpha^2 = 2 sqrt(lambda) - p
    let alpha = first_tan_tanh_root(interval.length() / 2.0, p)?;
    let sqrt_lambda = (alpha * alpha + p) / 2.0;
    Ok(-sqrt_lambda * sqrt_lambda)
}

/// Positive threshold: least positive root of the [`lambda3_residual`]
/// equation.
pub fn lambda3(p: f64, interval: Interval) -> Result<f64> {
    check_p(p)?;
    // tan argument x = (L/sqrt2) gamma, gamma^2 = sqrt(p^2 + 4 lambda) - p
    let gamma = first_tan_tanh_root(interval.length() / SQRT_2, p)?;
    let g2 = gamma * gamma;
    Ok((g2 * g2 + 2.0 * p * g2) / 4.0)
}

/// Least `alpha > 0` solving `tan(k alpha)/alpha = tanh(k beta)/beta` with
/// `beta = sqrt(alpha^2 + 2p)`.
///
/// Both threshold equations reduce to this form after substituting the
/// tangent's inner square root.
fn first_tan_tanh_root(k: f64, p: f64) -> Result<f64> {
    const STEP: f64 = PI / 32.0;
    const CEILING: f64 = 64.0 * PI;

    let f = |x: f64| {
        let alpha = x / k;
        let beta = (alpha * alpha + 2.0 * p).sqrt();
        x.tan() / alpha - (k * beta).tanh() / beta
    };
    let branch = |x: f64| ((x - FRAC_PI_2) / PI).floor();

    let mut lo = STEP / 2.0;
    let mut f_lo = f(lo);
    while lo < CEILING {
        let hi = lo + STEP;
        let f_hi = f(hi);
        let pole_between = branch(lo) != branch(hi);
        if !pole_between && f_lo.is_finite() && f_hi.is_finite() && f_lo.signum() != f_hi.signum() {
            return Ok(bisect(f, lo, hi, f_lo) / k);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::SearchFailure(format!(
        "no sign change of the tan/tanh equation below tangent argument {CEILING} (k = {k}, p = {p})"
    )))
}

/// Bisection to full double precision on a bracket with a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `max{4p/(b-a), 4 pi^2/(b-a)^3}`.
///
/// The cubic exponent is the one forced by `||u||_C^2 <= (b-a)^3/(4 pi^2) ||u''||^2`;
/// see [`delta1_alternate`] for the `(b-a)^{3/2}` variant.
pub fn delta1(p: f64, interval: Interval) -> Result<f64> {
    check_p(p)?;
    let l = interval.length();
    Ok((4.0 * p / l).max(4.0 * PI * PI / l.powi(3)))
}

/// `max{4p/(b-a), 4 pi^2/(b-a)^{3/2}}`. Reported for comparison only; it
/// coincides with [`delta1`] when `b - a = 1`.
pub fn delta1_alternate(p: f64, interval: Interval) -> Result<f64> {
    check_p(p)?;
    let l = interval.length();
    Ok((4.0 * p / l).max(4.0 * PI * PI / l.powf(1.5)))
}

/// `min{-1 - c_m/lambda1, 1 + c_m/lambda1'}` for `-lambda1' < c_m < -lambda1`.
pub fn delta2(p: f64, interval: Interval, c_m: f64) -> Result<f64> {
    let l1 = lambda_k(p, interval, 1)?;
    let l1p = lambda_k(p, interval, 2)?;
    if !(-l1p < c_m && c_m < -l1) {
        return Err(Error::Domain(format!(
            "delta2 needs {} < c_m < {}, got c_m = {c_m}",
            -l1p, -l1
        )));
    }
    Ok((-1.0 - c_m / l1).min(1.0 + c_m / l1p))
}

/// True iff no `-lambda_k` lies in the closed range `[c_m, c^m]`, i.e. the
/// problem with homogeneous conditions is uniquely solvable.
pub fn resonance_check(c: &ScalarField, p: f64, interval: Interval) -> Result<bool> {
    let (c_m, c_max) = c.extrema();
    let mut k = 1;
    loop {
        let lk = lambda_k(p, interval, k)?;
        if c_m <= -lk && -lk <= c_max {
            return Ok(false);
        }
        if lk > -c_m + 1.0 {
            return Ok(true);
        }
        k += 1;
    }
}

/// Eigenvalue `lambda_k` of `T[p,0]` nearest to `-value`.
pub fn nearest_eigenvalue(p: f64, interval: Interval, value: f64) -> Result<(usize, f64)> {
    let target = -value;
    let mut best = (1, lambda_k(p, interval, 1)?);
    let mut k = 2;
    loop {
        let lk = lambda_k(p, interval, k)?;
        if (lk - target).abs() < (best.1 - target).abs() {
            best = (k, lk);
        }
        if lk > target {
            return Ok(best);
        }
        k += 1;
    }
}
