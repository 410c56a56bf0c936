use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use beamsign::greens::{default_scan_tol, greens_constant, greens_discrete, sign_scan};
use beamsign::principles::{self, Consistency, PredictedSign, Verdict};
use beamsign::solver::{self, FixedPointMode, Method, SolutionField};
use beamsign::spectrum::{self, SpectralData};
use beamsign::{Execution, Grid, GreensMatrix, Interval, ProblemSpec, ScalarField};

use crate::config::ProblemFile;
use crate::error::{CliError, CliResult};

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
}

pub fn spectrum(out: &mut dyn Write, p: f64, a: f64, b: f64) -> CliResult<()> {
    let interval = Interval::new(a, b)?;
    let sd = SpectralData::compute(p, interval)?;
    let alt = spectrum::delta1_alternate(p, interval)?;
    let mut rows = vec![
        ("lambda1", sd.lambda1),
        ("lambda1_prime", sd.lambda1_prime),
        ("lambda2", sd.lambda2),
        ("lambda3", sd.lambda3),
        ("delta1", sd.delta1),
    ];
    if alt != sd.delta1 {
        rows.push(("delta1_alt", alt));
    }
    writeln!(out, "{:<14} value", "quantity")?;
    for (k, v) in rows {
        writeln!(out, "{k:<14} {}", num(v))?;
    }
    if alt != sd.delta1 {
        writeln!(out, "# delta1 uses 4 pi^2 / L^3; delta1_alt uses 4 pi^2 / L^(3/2)")?;
    }
    Ok(())
}

fn render_verdict(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rule       {}", v.rule.label());
    let _ = writeln!(s, "predicted  {}", v.predicted_sign.as_str());
    let _ = writeln!(s, "r_bound    {}", v.r_bound.map_or("none".into(), num));
    let _ = writeln!(s, "transfers  {}", v.transfers_to_nonhomogeneous);
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<10} {:<6} {:<24} {:<3} {:<24} inequality", "source", "holds", "lhs", "rel", "rhs");
    for d in &v.details {
        let _ = writeln!(
            s,
            "{:<10} {:<6} {:<24} {:<3} {:<24} {}",
            d.source,
            if d.holds { "yes" } else { "no" },
            num(d.lhs),
            d.relation.symbol(),
            num(d.rhs),
            d.description
        );
    }
    for n in &v.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

pub fn check(out: &mut dyn Write, file: &ProblemFile) -> CliResult<()> {
    let spec = file.to_spec()?;
    let v = principles::verdict(&spec)?;
    out.write_all(render_verdict(&v).as_bytes())?;
    Ok(())
}

fn run_solver(file: &ProblemFile, spec: &ProblemSpec) -> CliResult<SolutionField> {
    Ok(match file.method {
        Method::Direct => solver::direct_solve(spec)?,
        Method::Superposition => solver::superposition_solve(spec, Execution::default())?,
        Method::FixedPoint => {
            let mode = match file.mode {
                Some(m) => m,
                None => match principles::verdict(spec)?.predicted_sign {
                    PredictedSign::Negative => FixedPointMode::Negative,
                    _ => FixedPointMode::Positive,
                },
            };
            solver::fixed_point_solve(spec, mode, file.tol, file.max_iter)?.solution
        }
    })
}

pub fn solve(out: &mut dyn Write, file: &ProblemFile, path: &Path) -> CliResult<()> {
    let spec = file.to_spec()?;
    let sol = run_solver(file, &spec)?;
    let du = sol.u.diff(1)?;
    let d2u = sol.u.diff(2)?;
    let mut csv = String::from("t,u,du,d2u\n");
    for (i, t) in spec.grid().nodes().into_iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            num(t),
            num(sol.u.values()[i]),
            num(du.values()[i]),
            num(d2u.values()[i])
        );
    }
    let limit = SolutionField::backward_error_limit(&spec);
    let _ = writeln!(
        csv,
        "# method={} iterations={} residual_norm={} backward_error={} backward_error_limit={}",
        sol.method.as_str(),
        sol.iterations,
        num(sol.residual_norm),
        num(sol.backward_error),
        num(limit)
    );
    write_file(path, &csv)?;
    writeln!(
        out,
        "solved method={} iterations={} max|u|={} backward_error={} -> {}",
        sol.method.as_str(),
        sol.iterations,
        num(sol.u.sup_norm()),
        num(sol.backward_error),
        path.display()
    )?;
    Ok(())
}

pub fn verify(out: &mut dyn Write, file: &ProblemFile) -> CliResult<()> {
    let spec = file.to_spec()?;
    let res = principles::verify(&spec)?;
    let cert = &res.certificate;
    writeln!(
        out,
        "rule {} predicted {}",
        res.verdict.rule.label(),
        res.verdict.predicted_sign.as_str()
    )?;
    writeln!(
        out,
        "observed {} min_interior {} slope_a {} slope_b {}",
        cert.verdict.as_str(),
        num(cert.min_abs_interior),
        num(cert.slope_a),
        num(cert.slope_b)
    )?;
    match res.bound_check {
        Some((bound, observed, ok)) => writeln!(
            out,
            "bound {} {} observed max {}",
            num(bound),
            if ok { ">=" } else { "<" },
            num(observed)
        )?,
        None => writeln!(out, "bound none observed max {}", num(res.solution.u.sup_norm()))?,
    }
    let status = if res.passed() { res.consistency.as_str() } else { "FAIL" };
    writeln!(
        out,
        "{status} rule={} predicted={} observed={}",
        res.verdict.rule.label(),
        res.verdict.predicted_sign.as_str(),
        cert.verdict.as_str()
    )?;
    if res.consistency == Consistency::ResolutionLimited {
        writeln!(
            out,
            "note: the verdict holds with relative margin {} below the grid resolution {}; refine grid.n",
            num(res.verdict.margin),
            num(principles::threshold_resolution(spec.grid()))
        )?;
    }
    if res.passed() {
        Ok(())
    } else {
        Err(CliError::numerical(
            "verification_failed",
            format!(
                "{} predicted {} but observed {}",
                res.verdict.rule.label(),
                res.verdict.predicted_sign.as_str(),
                cert.verdict.as_str()
            ),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GreensMethod {
    Series,
    Discrete,
}

pub struct GreensArgs {
    pub p: f64,
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub terms: usize,
    pub method: GreensMethod,
}

fn greens_csv(g: &GreensMatrix) -> String {
    let nodes = g.grid().nodes();
    let mut csv = String::with_capacity(nodes.len() * nodes.len() * 40);
    csv.push_str("t,s,g\n");
    for (i, t) in nodes.iter().enumerate() {
        for (j, s) in nodes.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{}", num(*t), num(*s), num(g.get(i, j)));
        }
    }
    csv
}

pub fn greens(out: &mut dyn Write, args: &GreensArgs, path: &Path) -> CliResult<()> {
    let grid = Grid::new(Interval::new(args.a, args.b)?, args.n)?;
    let (g, tail) = match args.method {
        GreensMethod::Series => {
            let s = greens_constant(args.p, args.m, &grid, args.terms, Execution::default())?;
            (s.matrix, Some(s.tail_bound))
        }
        GreensMethod::Discrete => {
            let c = ScalarField::constant(&grid, args.m)?;
            (greens_discrete(args.p, &c, Execution::default())?, None)
        }
    };
    write_file(path, &greens_csv(&g))?;
    let scan = sign_scan(&g, default_scan_tol(&g));
    writeln!(
        out,
        "greens n={} max|g|={} symmetry_defect={} tail_bound={} conclusion={} -> {}",
        args.n,
        num(g.max_abs()),
        num(g.symmetry_defect()),
        tail.map_or("none".into(), num),
        scan.conclusion.as_str(),
        path.display()
    )?;
    Ok(())
}

pub struct SweepArgs {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

pub fn sweep(out: &mut dyn Write, file: &ProblemFile, args: &SweepArgs, path: &Path) -> CliResult<()> {
    if args.param != "c" {
        return Err(CliError::input(
            "unsupported",
            format!("sweep parameter `{}` is not supported (only `c`)", args.param),
        ));
    }
    if args.steps == 0 || (args.steps == 1 && args.from != args.to) {
        return Err(CliError::input("value", "--steps must be at least 2 unless --from equals --to"));
    }
    let base = file.to_spec()?;
    let values: Vec<f64> = (0..args.steps)
        .map(|k| {
            if args.steps == 1 {
                args.from
            } else {
                args.from + (args.to - args.from) * k as f64 / (args.steps - 1) as f64
            }
        })
        .collect();
    let problems = values
        .iter()
        .map(|&c| base.with_c(ScalarField::constant(base.grid(), c)?))
        .collect::<beamsign::Result<Vec<_>>>()?;
    let results = principles::verify_batch(&problems, Execution::default());

    let mut csv = String::from("c_const,rule,predicted_sign,observed_sign\n");
    let mut limited = 0;
    let mut contradictions = 0;
    for ((c, res), problem) in values.iter().zip(results).zip(&problems) {
        let (rule, predicted, observed) = match res {
            Ok(r) => {
                if !r.passed() {
                    contradictions += 1;
                }
                if r.consistency == Consistency::ResolutionLimited {
                    limited += 1;
                }
                (
                    r.verdict.rule.label(),
                    r.verdict.predicted_sign.as_str(),
                    r.certificate.verdict.as_str().to_string(),
                )
            }
            Err(e) if e.is_numerical() => {
                let v = principles::verdict(problem);
                let (rule, predicted) = v.map_or(("none", "unknown"), |v| (v.rule.label(), v.predicted_sign.as_str()));
                let reason = match CliError::from(e) {
                    CliError::Numerical { reason, .. } | CliError::Input { reason, .. } => reason,
                };
                (rule, predicted, reason.to_string())
            }
            Err(e) => return Err(e.into()),
        };
        let _ = writeln!(csv, "{},{rule},{predicted},{observed}", num(*c));
    }
    write_file(path, &csv)?;
    writeln!(
        out,
        "sweep rows={} contradictions={contradictions} resolution_limited={limited} -> {}",
        values.len(),
        path.display()
    )?;
    if contradictions > 0 {
        return Err(CliError::numerical(
            "verification_failed",
            format!("{contradictions} sweep rows contradict their verdict"),
        ));
    }
    Ok(())
}

pub fn dump_config(out: &mut dyn Write, file: &ProblemFile) -> CliResult<()> {
    out.write_all(file.dump().as_bytes())?;
    Ok(())
}
