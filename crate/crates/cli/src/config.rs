//! Problem files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! interval.a = 0
//! interval.b = 1
//! p = 0
//! c.kind = expression        # constant | expression | samples
//! c.payload = 1000*sin(pi*t)^2
//! h.kind = constant
//! h.payload = 1
//! bc.d1 = 0                  # optional, default 0
//! bc.d2 = 0                  # optional, default 0
//! grid.n = 400               # optional, default 400
//! solver.method = direct     # direct | superposition | fixed-point
//! solver.tol = 1e-10
//! solver.max_iter = 200
//! solver.mode = positive     # fixed-point only: positive | negative
//! ```
//!
//! A `samples` payload names a two-column CSV `t,value` (relative paths are
//! resolved against the problem file) whose abscissae must be the grid nodes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use beamsign::solver::{FixedPointMode, Method, DEFAULT_FIXED_POINT_TOL, DEFAULT_MAX_ITER};
use beamsign::{Grid, Interval, ProblemSpec, ScalarField};

use crate::error::{CliError, CliResult};
use crate::expr::parse_expression;

pub const DEFAULT_GRID_N: usize = 400;

const KNOWN_KEYS: [&str; 14] = [
    "interval.a",
    "interval.b",
    "p",
    "c.kind",
    "c.payload",
    "h.kind",
    "h.payload",
    "bc.d1",
    "bc.d2",
    "grid.n",
    "solver.method",
    "solver.tol",
    "solver.max_iter",
    "solver.mode",
];

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    Constant(f64),
    Expression(String),
    Samples(PathBuf),
}

impl FieldSource {
    fn kind(&self) -> &'static str {
        match self {
            FieldSource::Constant(_) => "constant",
            FieldSource::Expression(_) => "expression",
            FieldSource::Samples(_) => "samples",
        }
    }

    fn payload(&self) -> String {
        match self {
            FieldSource::Constant(v) => format!("{v:?}"),
            FieldSource::Expression(src) => src.clone(),
            FieldSource::Samples(path) => path.display().to_string(),
        }
    }

    /// Samples the source on `grid`; `name` labels error messages.
    pub fn field(&self, grid: &Grid, name: &str) -> CliResult<ScalarField> {
        match self {
            FieldSource::Constant(v) => Ok(ScalarField::constant(grid, *v)?),
            FieldSource::Expression(src) => {
                let expr = parse_expression(src)
                    .map_err(|e| CliError::input("syntax", format!("{name}.payload: {e}")))?;
                let mut values = Vec::with_capacity(grid.len());
                for t in grid.nodes() {
                    let v = expr
                        .eval(t)
                        .map_err(|e| CliError::input("evaluation", format!("{name}(t) at t = {t:?}: {e}")))?;
                    values.push(v);
                }
                Ok(ScalarField::new(grid.clone(), values)?)
            }
            FieldSource::Samples(path) => read_samples(path, grid, name),
        }
    }
}

fn read_samples(path: &Path, grid: &Grid, name: &str) -> CliResult<ScalarField> {
    let bad = |detail: String| CliError::input("samples", format!("{name}: {}: {detail}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(format!("record {} has {} columns, expected 2", line + 1, record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(t), Ok(v)) => rows.push((t, v)),
            _ if line == 0 => continue,
            _ => return Err(bad(format!("record {} is not numeric", line + 1))),
        }
    }
    if rows.len() != grid.len() {
        return Err(bad(format!("{} samples for a grid of {} nodes", rows.len(), grid.len())));
    }
    let scale = grid.interval().a().abs().max(grid.interval().b().abs()).max(1.0);
    for (i, (t, _)) in rows.iter().enumerate() {
        let node = grid.node(i);
        if (t - node).abs() > 1e-12 * scale {
            return Err(bad(format!("sample {i} at t = {t:?} does not match grid node {node:?}")));
        }
    }
    Ok(ScalarField::new(grid.clone(), rows.into_iter().map(|(_, v)| v).collect())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub c: FieldSource,
    pub h: FieldSource,
    pub d1: f64,
    pub d2: f64,
    pub n: usize,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    pub mode: Option<FixedPointMode>,
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    v.parse::<f64>()
        .map_err(|_| CliError::input("value", format!("{key}: `{v}` is not a number")))
}

fn parse_method(v: &str) -> CliResult<Method> {
    match v {
        "direct" => Ok(Method::Direct),
        "superposition" => Ok(Method::Superposition),
        "fixed-point" => Ok(Method::FixedPoint),
        _ => Err(CliError::input(
            "value",
            format!("solver.method: `{v}` is not one of direct, superposition, fixed-point"),
        )),
    }
}

pub fn mode_str(mode: FixedPointMode) -> &'static str {
    match mode {
        FixedPointMode::Positive => "positive",
        FixedPointMode::Negative => "negative",
    }
}

fn field_source(entries: &BTreeMap<String, String>, name: &str, base: &Path) -> CliResult<FieldSource> {
    let kind = required(entries, &format!("{name}.kind"))?;
    let payload = required(entries, &format!("{name}.payload"))?;
    match kind {
        "constant" => Ok(FieldSource::Constant(parse_f64(&format!("{name}.payload"), payload)?)),
        "expression" => {
            parse_expression(payload).map_err(|e| CliError::input("syntax", format!("{name}.payload: {e}")))?;
            Ok(FieldSource::Expression(payload.to_string()))
        }
        "samples" => Ok(FieldSource::Samples(base.join(payload))),
        _ => Err(CliError::input(
            "value",
            format!("{name}.kind: `{kind}` is not one of constant, expression, samples"),
        )),
    }
}

fn required<'a>(entries: &'a BTreeMap<String, String>, key: &str) -> CliResult<&'a str> {
    entries
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::input("missing_key", format!("missing required key `{key}`")))
}

impl ProblemFile {
    /// Parses problem-file text; relative sample paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::input("syntax", format!("line {}: expected `key = value`", idx + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || !KNOWN_KEYS.contains(&key) {
                return Err(CliError::input("unknown_key", format!("line {}: unknown key `{key}`", idx + 1)));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::input("duplicate_key", format!("line {}: duplicate key `{key}`", idx + 1)));
            }
        }
        let num = |key: &str, default: Option<f64>| -> CliResult<f64> {
            match (entries.get(key), default) {
                (Some(v), _) => parse_f64(key, v),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(CliError::input("missing_key", format!("missing required key `{key}`"))),
            }
        };
        let count = |key: &str, default: usize| -> CliResult<usize> {
            entries.get(key).map_or(Ok(default), |v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::input("value", format!("{key}: `{v}` is not a nonnegative integer")))
            })
        };
        let mode = match entries.get("solver.mode").map(String::as_str) {
            None => None,
            Some("positive") => Some(FixedPointMode::Positive),
            Some("negative") => Some(FixedPointMode::Negative),
            Some(other) => {
                return Err(CliError::input(
                    "value",
                    format!("solver.mode: `{other}` is not one of positive, negative"),
                ))
            }
        };
        Ok(Self {
            a: num("interval.a", None)?,
            b: num("interval.b", None)?,
            p: num("p", None)?,
            c: field_source(&entries, "c", base)?,
            h: field_source(&entries, "h", base)?,
            d1: num("bc.d1", Some(0.0))?,
            d2: num("bc.d2", Some(0.0))?,
            n: count("grid.n", DEFAULT_GRID_N)?,
            method: entries.get("solver.method").map_or(Ok(Method::Direct), |v| parse_method(v))?,
            tol: num("solver.tol", Some(DEFAULT_FIXED_POINT_TOL))?,
            max_iter: count("solver.max_iter", DEFAULT_MAX_ITER)?,
            mode,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let base = fs::canonicalize(&base).unwrap_or(base);
        Self::parse(&text, &base)
    }

    pub fn grid(&self) -> CliResult<Grid> {
        Ok(Grid::new(Interval::new(self.a, self.b)?, self.n)?)
    }

    pub fn to_spec(&self) -> CliResult<ProblemSpec> {
        let grid = self.grid()?;
        let c = self.c.field(&grid, "c")?;
        let h = self.h.field(&grid, "h")?;
        Ok(ProblemSpec::new(self.p, c, h, self.d1, self.d2)?)
    }

    /// Canonical text form; parsing it yields an identical problem.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("interval.a", format!("{:?}", self.a));
        put("interval.b", format!("{:?}", self.b));
        put("p", format!("{:?}", self.p));
        put("c.kind", self.c.kind().into());
        put("c.payload", self.c.payload());
        put("h.kind", self.h.kind().into());
        put("h.payload", self.h.payload());
        put("bc.d1", format!("{:?}", self.d1));
        put("bc.d2", format!("{:?}", self.d2));
        put("grid.n", self.n.to_string());
        put("solver.method", self.method.as_str().into());
        put("solver.tol", format!("{:?}", self.tol));
        put("solver.max_iter", self.max_iter.to_string());
        if let Some(mode) = self.mode {
            put("solver.mode", mode_str(mode).into());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# anti-maximum example
interval.a = 0
interval.b = 1
p = 0
c.kind = expression
c.payload = 1000*sin(pi*t)^2   # peak 1000
h.kind = constant
h.payload = 1
grid.n = 64
";

    #[test]
    fn parses_with_defaults() {
        let f = ProblemFile::parse(SAMPLE, Path::new(".")).unwrap();
        assert_eq!(f.n, 64);
        assert_eq!((f.d1, f.d2), (0.0, 0.0));
        assert_eq!(f.method, Method::Direct);
        assert_eq!(f.c, FieldSource::Expression("1000*sin(pi*t)^2".into()));
        let spec = f.to_spec().unwrap();
        assert!((spec.c().at(0.5) - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn dump_round_trips() {
        let mut f = ProblemFile::parse(SAMPLE, Path::new(".")).unwrap();
        f.d1 = -0.25;
        f.mode = Some(FixedPointMode::Negative);
        f.method = Method::FixedPoint;
        let again = ProblemFile::parse(&f.dump(), Path::new("/elsewhere")).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.to_spec().unwrap(), f.to_spec().unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let unknown = format!("{SAMPLE}colour = red\n");
        let e = ProblemFile::parse(&unknown, Path::new(".")).unwrap_err();
        assert!(e.report_line().contains("reason=unknown_key"));
        let dup = format!("{SAMPLE}p = 1\n");
        assert!(ProblemFile::parse(&dup, Path::new(".")).is_err());
        let missing = SAMPLE.replace("p = 0\n", "");
        assert!(ProblemFile::parse(&missing, Path::new(".")).unwrap_err().to_string().contains("`p`"));
        let syntax = SAMPLE.replace("1000*sin(pi*t)^2", "2*(3+");
        let e = ProblemFile::parse(&syntax, Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("offset 5"), "{e}");
        let div = SAMPLE.replace("1000*sin(pi*t)^2", "1/t");
        let f = ProblemFile::parse(&div, Path::new(".")).unwrap();
        assert!(f.to_spec().unwrap_err().to_string().contains("division by zero"));
        let odd = SAMPLE.replace("grid.n = 64", "grid.n = 63");
        assert_eq!(ProblemFile::parse(&odd, Path::new(".")).unwrap().to_spec().unwrap_err().exit_code(), 1);
    }

    #[test]
    fn reads_samples() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new(Interval::unit(), 8).unwrap();
        let mut csv = String::from("t,value\n");
        for t in grid.nodes() {
            csv.push_str(&format!("{t:?},{:?}\n", 2.0 * t));
        }
        fs::write(dir.path().join("c.csv"), &csv).unwrap();
        let text = SAMPLE
            .replace("c.kind = expression", "c.kind = samples")
            .replace("1000*sin(pi*t)^2   # peak 1000", "c.csv")
            .replace("grid.n = 64", "grid.n = 8");
        fs::write(dir.path().join("problem.txt"), &text).unwrap();
        let f = ProblemFile::load(&dir.path().join("problem.txt")).unwrap();
        let spec = f.to_spec().unwrap();
        assert_eq!(spec.c().values()[4], 1.0);
        let again = ProblemFile::parse(&f.dump(), Path::new("/")).unwrap();
        assert_eq!(again.to_spec().unwrap(), spec);

        fs::write(dir.path().join("c.csv"), csv.replace("0.125,", "0.13,")).unwrap();
        assert!(f.to_spec().unwrap_err().to_string().contains("does not match grid node"));
    }
}
