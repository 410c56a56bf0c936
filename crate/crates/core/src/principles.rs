//! Verdict engine: evaluates the sufficient conditions for strong inverse
//! positivity/negativity of `T[p,c]` and for constant-sign solutions under
//! strictly positive loads, and reports the rule that applies, the a-priori
//! bound `||u||_C <= R ||h||_C` and whether the conclusion carries over to
//! nonpositive boundary moments.
//!
//! Threshold comparisons are exact floating-point comparisons with no
//! tolerance band. Near a threshold the verdict is therefore
//! resolution-limited: extrema and integrals come from grid samples.
//!
//! Rule labels (`Cor2_1_pos`, `Thm5_2_unique`, ...) are the stable
//! identifiers used in reports and CSV output.

use std::f64::consts::PI;

use crate::fields::{Grid, Interval, ProblemSpec, ScalarField};
use crate::solver::{self, CertificateVerdict, SignCertificate, SolutionField};
use crate::spectrum::{self, SpectralData};
use crate::{Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `-lambda1 < c <= -lambda2`: strongly inverse positive.
    ThresholdPositive,
    /// `-lambda3 <= c < -lambda1`: strongly inverse negative.
    ThresholdNegative,
    /// `∫c^- < delta1`: unique solution.
    NegativePartUnique,
    /// `∫c^- < delta1` and `c <= -lambda2`: strongly inverse positive.
    NegativePartPositive,
    /// `c_m` in the anti-maximum window and `∫(c - c_m) < delta1 delta2`.
    WindowUnique,
    /// The window conditions plus `c_m >= -lambda3`: strongly inverse negative.
    WindowNegative,
    /// Positive solution for loads with `h_m > 0`.
    PositiveLoadPositive,
    /// Negative solution for loads with `h_m > 0`.
    PositiveLoadNegative,
    /// No eigenvalue `-lambda_k` inside `[c_m, c^m]`.
    NonResonantUnique,
    NoRule,
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::ThresholdPositive => "Cor2_1_pos",
            Rule::ThresholdNegative => "Cor2_1_neg",
            Rule::NegativePartUnique => "Thm5_1_unique",
            Rule::NegativePartPositive => "Thm5_1_pos",
            Rule::WindowUnique => "Thm5_2_unique",
            Rule::WindowNegative => "Thm5_2_neg",
            Rule::PositiveLoadPositive => "Thm6_1_pos_h",
            Rule::PositiveLoadNegative => "Thm6_2_neg_h",
            Rule::NonResonantUnique => "Prop4_2_unique",
            Rule::NoRule => "none",
        }
    }

    pub fn sign(&self) -> PredictedSign {
        match self {
            Rule::ThresholdPositive | Rule::NegativePartPositive | Rule::PositiveLoadPositive => {
                PredictedSign::Positive
            }
            Rule::ThresholdNegative | Rule::WindowNegative | Rule::PositiveLoadNegative => {
                PredictedSign::Negative
            }
            Rule::NegativePartUnique | Rule::WindowUnique | Rule::NonResonantUnique => PredictedSign::UniqueOnly,
            Rule::NoRule => PredictedSign::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictedSign {
    Positive,
    Negative,
    UniqueOnly,
    Unknown,
}

impl PredictedSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            PredictedSign::Positive => "positive",
            PredictedSign::Negative => "negative",
            PredictedSign::UniqueOnly => "unique_only",
            PredictedSign::Unknown => "unknown",
        }
    }

    pub fn is_sign(&self) -> bool {
        matches!(self, PredictedSign::Positive | PredictedSign::Negative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    LessEq,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::LessEq => "<=",
        }
    }
}

/// One evaluated inequality `lhs rel rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    /// Label of the result the inequality belongs to, e.g. `Thm5_2`.
    pub source: &'static str,
    pub description: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn new(source: &'static str, description: impl Into<String>, lhs: f64, relation: Relation, rhs: f64) -> Self {
        let holds = match relation {
            Relation::Less => lhs < rhs,
            Relation::LessEq => lhs <= rhs,
        };
        Self {
            source,
            description: description.into(),
            lhs,
            relation,
            rhs,
            holds,
        }
    }

    /// Relative slack `(rhs - lhs) / max(|lhs|, |rhs|)`; zero when both
    /// sides vanish.
    pub fn slack(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.rhs - self.lhs) / scale
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub rule: Rule,
    pub predicted_sign: PredictedSign,
    pub r_bound: Option<f64>,
    pub transfers_to_nonhomogeneous: bool,
    /// Smallest relative slack `(rhs - lhs) / max(|lhs|, |rhs|)` among the
    /// inequalities that establish `rule`; infinite when there are none.
    pub margin: f64,
    pub details: Vec<Inequality>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn of(rule: Rule, r_bound: Option<f64>, transfers: bool, decisive: &[Inequality]) -> Self {
        Self {
            rule,
            predicted_sign: rule.sign(),
            r_bound,
            transfers_to_nonhomogeneous: transfers,
            margin: decisive.iter().map(Inequality::slack).fold(f64::INFINITY, f64::min),
            details: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// Result of one sufficient-condition check: the inequalities evaluated and
/// the strongest verdict they support, if any.
#[derive(Debug, Clone, Default)]
pub struct Check {
    pub verdict: Option<Verdict>,
    /// Weaker verdict (uniqueness only) supported by the same check.
    pub unique: Option<Verdict>,
    pub details: Vec<Inequality>,
    pub notes: Vec<String>,
}

fn load_ratio(h: &ScalarField) -> Option<f64> {
    let (h_m, h_max) = h.extrema();
    (h_m > 0.0).then(|| h_m / h_max)
}

/// Threshold ranges for `c`: `-lambda1 < c <= -lambda2` (positive) and
/// `-lambda3 <= c < -lambda1` (negative).
pub fn check_corollary(c: &ScalarField, spec: &SpectralData) -> Check {
    let (c_m, c_max) = c.extrema();
    let src = "Cor2_1";
    let d = vec![
        Inequality::new(src, "-lambda1 < c_m", -spec.lambda1, Relation::Less, c_m),
        Inequality::new(src, "c^m <= -lambda2", c_max, Relation::LessEq, -spec.lambda2),
        Inequality::new(src, "-lambda3 <= c_m", -spec.lambda3, Relation::LessEq, c_m),
        Inequality::new(src, "c^m < -lambda1", c_max, Relation::Less, -spec.lambda1),
    ];
    let verdict = if d[0].holds && d[1].holds {
        Some(Verdict::of(Rule::ThresholdPositive, None, true, &d[0..2]))
    } else if d[2].holds && d[3].holds {
        Some(Verdict::of(Rule::ThresholdNegative, None, true, &d[2..4]))
    } else {
        None
    };
    Check { verdict, unique: None, details: d, notes: Vec::new() }
}

/// `∫c^- < delta1` gives uniqueness with
/// `R = sqrt(L) / ((delta1 - ∫c^-)/sqrt(delta1) sqrt(lambda1 + min c^+))`;
/// adding `c^m <= -lambda2` gives strong inverse positivity.
pub fn check_thm_positive(c: &ScalarField, p: f64, interval: Interval, spec: &SpectralData) -> Check {
    let _ = p;
    let (c_m, c_max) = c.extrema();
    let (_, c_minus) = c.split_signs();
    let neg_mass = c_minus.integrate();
    let src = "Thm5_1";
    let d = vec![
        Inequality::new(src, "∫c^- < delta1", neg_mass, Relation::Less, spec.delta1),
        Inequality::new(src, "c^m <= -lambda2", c_max, Relation::LessEq, -spec.lambda2),
    ];
    let mut check = Check { details: d, ..Default::default() };
    if check.details[0].holds {
        let min_c_plus = c_m.max(0.0);
        let r = interval.length().sqrt()
            / ((spec.delta1 - neg_mass) / spec.delta1.sqrt() * (spec.lambda1 + min_c_plus).sqrt());
        check.unique = Some(Verdict::of(Rule::NegativePartUnique, Some(r), true, &check.details[0..1]));
        if check.details[1].holds {
            check.verdict = Some(Verdict::of(Rule::NegativePartPositive, Some(r), true, &check.details[0..2]));
        }
    }
    check
}

/// Anti-maximum window `-lambda1' < c_m < -lambda1` with
/// `∫(c - c_m) < delta1 delta2` gives uniqueness with
/// `R = sqrt(delta1)/(delta1 delta2 - ∫(c - c_m)) sqrt(L/lambda1)`;
/// adding `c_m >= -lambda3` gives strong inverse negativity.
pub fn check_thm_negative(c: &ScalarField, p: f64, interval: Interval, spec: &SpectralData) -> Check {
    let (c_m, _) = c.extrema();
    let src = "Thm5_2";
    let mut check = Check::default();
    let lower = Inequality::new(src, "-lambda1' < c_m", -spec.lambda1_prime, Relation::Less, c_m);
    let upper = Inequality::new(src, "c_m < -lambda1", c_m, Relation::Less, -spec.lambda1);
    let in_window = lower.holds && upper.holds;
    check.details.push(lower);
    check.details.push(upper);
    if !in_window {
        return check;
    }
    let delta2 = match spectrum::delta2(p, interval, c_m) {
        Ok(v) => v,
        Err(e) => {
            check.notes.push(e.to_string());
            return check;
        }
    };
    let excess = c.map(|v| v - c_m).map(|f| f.integrate()).unwrap_or(f64::INFINITY);
    let budget = spec.delta1 * delta2;
    let mass = Inequality::new(src, "∫(c - c_m) < delta1 delta2", excess, Relation::Less, budget);
    let sign = Inequality::new(src, "-lambda3 <= c_m", -spec.lambda3, Relation::LessEq, c_m);
    let (mass_ok, sign_ok) = (mass.holds, sign.holds);
    check.details.push(mass);
    check.details.push(sign);
    if mass_ok {
        let r = spec.delta1.sqrt() / (budget - excess) * (interval.length() / spec.lambda1).sqrt();
        check.unique = Some(Verdict::of(Rule::WindowUnique, Some(r), true, &check.details[0..3]));
        if sign_ok {
            check.verdict = Some(Verdict::of(Rule::WindowNegative, Some(r), true, &check.details[0..4]));
        }
    }
    check
}

/// Positive solutions for `h_m > 0`. Hypothesis (1):
/// `-lambda1 < c_m <= 0` and `c^m <= -lambda2 + (h_m/h^m)(2/pi)(lambda1 + c_m)`,
/// which also carries over to nonpositive moments. Hypothesis (2):
/// `∫c^- < delta1` and
/// `c^m <= -lambda2 + (h_m/h^m)(delta1 - ∫c^-)/sqrt(delta1) sqrt(lambda1 + min_t min{c^+, -lambda2})`,
/// which does not.
pub fn check_amp_positive_h(c: &ScalarField, h: &ScalarField, p: f64, interval: Interval, spec: &SpectralData) -> Check {
    let _ = (p, interval);
    let mut check = Check::default();
    let Some(ratio) = load_ratio(h) else {
        check.notes.push("Thm6_1 needs a strictly positive load (h_m > 0)".into());
        return check;
    };
    let (c_m, c_max) = c.extrema();
    let l1 = spec.lambda1;
    let l2 = spec.lambda2;

    let src1 = "Thm6_1(1)";
    let h1 = [
        Inequality::new(src1, "-lambda1 < c_m", -l1, Relation::Less, c_m),
        Inequality::new(src1, "c_m <= 0", c_m, Relation::LessEq, 0.0),
        Inequality::new(
            src1,
            "c^m <= -lambda2 + (h_m/h^m)(2/pi)(lambda1 + c_m)",
            c_max,
            Relation::LessEq,
            -l2 + ratio * (2.0 / PI) * (l1 + c_m),
        ),
    ];
    let hyp1 = h1.iter().all(|i| i.holds);
    check.details.extend(h1);

    let src2 = "Thm6_1(2)";
    let (_, c_minus) = c.split_signs();
    let neg_mass = c_minus.integrate();
    let floor = c.values().iter().map(|&v| v.max(0.0).min(-l2)).fold(f64::INFINITY, f64::min);
    let h2 = [
        Inequality::new(src2, "∫c^- < delta1", neg_mass, Relation::Less, spec.delta1),
        Inequality::new(
            src2,
            "c^m <= -lambda2 + (h_m/h^m)(delta1 - ∫c^-)/sqrt(delta1) sqrt(lambda1 + min{c^+, -lambda2})",
            c_max,
            Relation::LessEq,
            -l2 + ratio * (spec.delta1 - neg_mass) / spec.delta1.sqrt() * (l1 + floor).sqrt(),
        ),
    ];
    let hyp2 = h2.iter().all(|i| i.holds);
    check.details.extend(h2);

    if hyp1 {
        check.verdict = Some(Verdict::of(Rule::PositiveLoadPositive, None, true, &check.details[0..3]));
    } else if hyp2 {
        check.verdict = Some(Verdict::of(Rule::PositiveLoadPositive, None, false, &check.details[3..5]));
    }
    check
}

/// Negative solutions for `h_m > 0`: `∫(c - c_m) < delta1 delta2` and
/// `-lambda3 - (h_m/h^m)(delta1 delta2 - ∫(c - c_m))/sqrt(delta1) sqrt(lambda1/L) <= c_m < -lambda1`.
/// Never carries over to nonpositive moments.
pub fn check_amp_negative_h(c: &ScalarField, h: &ScalarField, p: f64, interval: Interval, spec: &SpectralData) -> Check {
    let mut check = Check::default();
    let Some(ratio) = load_ratio(h) else {
        check.notes.push("Thm6_2 needs a strictly positive load (h_m > 0)".into());
        return check;
    };
    let (c_m, _) = c.extrema();
    let src = "Thm6_2";
    let window = Inequality::new(src, "-lambda1' < c_m", -spec.lambda1_prime, Relation::Less, c_m);
    let upper = Inequality::new(src, "c_m < -lambda1", c_m, Relation::Less, -spec.lambda1);
    let ok = window.holds && upper.holds;
    check.details.push(window);
    check.details.push(upper);
    if !ok {
        return check;
    }
    let delta2 = match spectrum::delta2(p, interval, c_m) {
        Ok(v) => v,
        Err(e) => {
            check.notes.push(e.to_string());
            return check;
        }
    };
    let excess = c.map(|v| v - c_m).map(|f| f.integrate()).unwrap_or(f64::INFINITY);
    let budget = spec.delta1 * delta2;
    let mass = Inequality::new(src, "∫(c - c_m) < delta1 delta2", excess, Relation::Less, budget);
    let lower_bound = -spec.lambda3
        - ratio * (budget - excess) / spec.delta1.sqrt() * (spec.lambda1 / interval.length()).sqrt();
    let lower = Inequality::new(
        src,
        "-lambda3 - (h_m/h^m)(delta1 delta2 - ∫(c - c_m))/sqrt(delta1) sqrt(lambda1/L) <= c_m",
        lower_bound,
        Relation::LessEq,
        c_m,
    );
    let applies = mass.holds && lower.holds;
    check.details.push(mass);
    check.details.push(lower);
    if applies {
        check.verdict = Some(Verdict::of(Rule::PositiveLoadNegative, None, false, &check.details[0..4]));
    }
    check
}

/// Unique solvability away from the eigenvalues, with
/// `R = pi / (2 (lambda1 + c_m))` when `-lambda1 < c_m < 0`.
pub fn check_nonresonant(c: &ScalarField, p: f64, interval: Interval, spec: &SpectralData) -> Result<Check> {
    let (c_m, _) = c.extrema();
    let mut check = Check::default();
    if spectrum::resonance_check(c, p, interval)? {
        let r = (-spec.lambda1 < c_m && c_m < 0.0).then(|| PI / (2.0 * (spec.lambda1 + c_m)));
        check.unique = Some(Verdict::of(Rule::NonResonantUnique, r, true, &[]));
    } else {
        check.notes.push("an eigenvalue -lambda_k lies inside [c_m, c^m]".into());
    }
    Ok(check)
}

/// Aggregates every check with the precedence
/// threshold ranges > `∫c^-` sign clause > window sign clause >
/// positive-load positive > positive-load negative > uniqueness only.
///
/// A sign rule is only reported when the data are nontrivial and
/// nonnegative (`h >= 0` and `h ≢ 0` or a nonzero moment), and, with
/// nonzero moments, only when it carries over to them; otherwise the verdict
/// falls back to the uniqueness rules with an explanatory note.
pub fn verdict(problem: &ProblemSpec) -> Result<Verdict> {
    let p = problem.p();
    let interval = problem.interval();
    let spec = SpectralData::compute(p, interval)?;
    let c = problem.c();
    let h = problem.h();

    let cor = check_corollary(c, &spec);
    let pos = check_thm_positive(c, p, interval, &spec);
    let neg = check_thm_negative(c, p, interval, &spec);
    let amp_pos = check_amp_positive_h(c, h, p, interval, &spec);
    let amp_neg = check_amp_negative_h(c, h, p, interval, &spec);
    let nonres = check_nonresonant(c, p, interval, &spec)?;

    let mut details = Vec::new();
    let mut notes = Vec::new();
    for chk in [&cor, &pos, &neg, &amp_pos, &amp_neg, &nonres] {
        details.extend(chk.details.iter().cloned());
        notes.extend(chk.notes.iter().cloned());
    }
    if p != 0.0 && (neg.unique.is_some() || amp_neg.verdict.is_some()) {
        notes.push("anti-maximum window right end taken as -lambda1 including the p term".into());
    }
    if p != 0.0 && amp_pos.verdict.as_ref().is_some_and(|v| v.transfers_to_nonhomogeneous) {
        notes.push("positive-load hypothesis (1) uses lambda1 + c_m including the p term".into());
    }

    let homogeneous = problem.is_homogeneous();
    let (h_min, _) = h.extrema();
    let nontrivial = h.sup_norm() > 0.0 || !homogeneous;
    let load_ok = h_min >= 0.0 && nontrivial;

    let sign_candidates = [&cor.verdict, &pos.verdict, &neg.verdict, &amp_pos.verdict, &amp_neg.verdict];
    let mut chosen: Option<Verdict> = None;
    for v in sign_candidates.into_iter().flatten() {
        if !load_ok {
            notes.push(format!(
                "{} applies but the data are not a nontrivial nonnegative load; no sign predicted",
                v.rule.label()
            ));
            break;
        }
        if !homogeneous && !v.transfers_to_nonhomogeneous {
            notes.push(format!(
                "{} holds for homogeneous moments but does not carry over to d1, d2 < 0; downgraded to unique_only",
                v.rule.label()
            ));
            continue;
        }
        chosen = Some(v.clone());
        break;
    }

    let unique_candidates = [&pos.unique, &neg.unique, &nonres.unique];
    let chosen = chosen.or_else(|| unique_candidates.into_iter().flatten().next().cloned());
    let mut out = chosen.unwrap_or_else(|| Verdict::of(Rule::NoRule, None, false, &[]));
    out.r_bound = if homogeneous {
        unique_candidates
            .into_iter()
            .flatten()
            .filter_map(|v| v.r_bound)
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))))
    } else {
        None
    };
    out.details = details;
    out.notes = notes;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Confirmed,
    Contradicted,
    /// The certificate disagrees, but the verdict holds by less than the
    /// grid can resolve (see [`threshold_resolution`]).
    ResolutionLimited,
    NoPrediction,
}

impl Consistency {
    pub fn as_str(&self) -> &'static str {
        match self {
            Consistency::Confirmed => "PASS",
            Consistency::Contradicted => "FAIL",
            Consistency::ResolutionLimited => "RESOLUTION_LIMITED",
            Consistency::NoPrediction => "N/A",
        }
    }
}

/// A verdict checked against the direct numerical solution.
#[derive(Debug, Clone)]
pub struct Verification {
    pub verdict: Verdict,
    pub solution: SolutionField,
    pub certificate: SignCertificate,
    pub consistency: Consistency,
    /// `(R ||h||_C, ||u||_C, within 1% slack)` when the verdict carries `R`.
    pub bound_check: Option<(f64, f64, bool)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.consistency != Consistency::Contradicted && self.bound_check.is_none_or(|(_, _, ok)| ok)
    }
}

/// Relative slack below which a verdict is not resolvable on `grid`: the
/// discrete thresholds sit `O((pi/n)^2)` away from the continuous ones, so a
/// margin under `(2 pi / n)^2` can be flipped by the discretization.
pub fn threshold_resolution(grid: &Grid) -> f64 {
    (2.0 * PI / grid.n() as f64).powi(2)
}

/// Solves the problem directly and compares the observed sign and size with
/// the verdict.
pub fn verify(problem: &ProblemSpec) -> Result<Verification> {
    let verdict = verdict(problem)?;
    let solution = solver::direct_solve(problem)?;
    let certificate = solver::sign_certificate(&solution.u, solver::default_certificate_tol(&solution.u))?;
    let consistency = match verdict.predicted_sign {
        PredictedSign::Positive if certificate.verdict == CertificateVerdict::StronglyPositive => Consistency::Confirmed,
        PredictedSign::Negative if certificate.verdict == CertificateVerdict::StronglyNegative => Consistency::Confirmed,
        PredictedSign::Positive | PredictedSign::Negative
            if verdict.margin < threshold_resolution(problem.grid()) =>
        {
            Consistency::ResolutionLimited
        }
        PredictedSign::Positive | PredictedSign::Negative => Consistency::Contradicted,
        _ => Consistency::NoPrediction,
    };
    let bound_check = verdict.r_bound.map(|r| {
        let bound = r * problem.h().sup_norm();
        let observed = solution.u.sup_norm();
        (bound, observed, observed <= bound * 1.01)
    });
    Ok(Verification {
        verdict,
        solution,
        certificate,
        consistency,
        bound_check,
    })
}

/// [`verify`] over many problems; output order matches input order.
pub fn verify_batch(problems: &[ProblemSpec], exec: Execution) -> Vec<Result<Verification>> {
    exec.map(problems.len(), |i| verify(&problems[i]))
}
