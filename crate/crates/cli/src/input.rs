use std::fs;
use std::path::Path;

use arithdyn::algebraic::AlgebraicNumber;
use arithdyn::dynamics::RationalMap;
use arithdyn::green::EmpiricalMeasure;
use arithdyn::poly::IntPoly;
use arithdyn::proj::ProjPointQ;
use arithdyn::torus::TorusPoint;
use num_complex::Complex64;
use serde::Deserialize;

use crate::cli::MapArg;
use crate::error::{CliError, CliResult};

/// The argument itself, or the contents of the file when it starts with `@`.
fn inline_or_file(s: &str) -> CliResult<String> {
    match s.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => Ok(s.to_string()),
    }
}

pub fn parse_map(arg: &MapArg) -> CliResult<RationalMap> {
    match (&arg.map, arg.power) {
        (Some(json), None) => {
            let text = inline_or_file(json)?;
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad map JSON: {e}")))
        }
        (None, Some(d)) => Ok(RationalMap::power_map(d)?),
        _ => Err(CliError::Input("give exactly one of --map and --power".into())),
    }
}

pub fn parse_ints(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Input(format!("not an integer: {t:?}")))
        })
        .collect()
}

/// Comma-separated coefficients, constant term first.
pub fn parse_poly(s: &str) -> CliResult<IntPoly> {
    let p = IntPoly::new(
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("not an integer: {t:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?,
    );
    if p.is_zero() {
        return Err(CliError::Input("the zero polynomial".into()));
    }
    Ok(p)
}

pub fn parse_point(s: &str) -> CliResult<ProjPointQ> {
    Ok(s.parse()?)
}

/// `p/q` or `poly:c0,c1,...`.
pub fn parse_algebraic(s: &str) -> CliResult<AlgebraicNumber> {
    match s.strip_prefix("poly:") {
        Some(c) => Ok(AlgebraicNumber::new(parse_poly(c)?)?),
        None => {
            let x = parse_point(s)?;
            let q = x
                .to_rational()
                .ok_or_else(|| CliError::Input(format!("{s:?} is not a finite rational")))?;
            Ok(AlgebraicNumber::from_rational(&q))
        }
    }
}

pub fn parse_torus_point(s: &str) -> CliResult<TorusPoint> {
    let text = inline_or_file(s)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad torus point JSON: {e}")))
}

#[derive(Deserialize)]
struct CloudRow {
    re: f64,
    im: f64,
}

/// Complex points from a CSV with columns `re,im`.
pub fn read_cloud(path: &Path) -> CliResult<Vec<Complex64>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize::<CloudRow>()
        .map(|row| row.map(|c| Complex64::new(c.re, c.im)).map_err(CliError::from))
        .collect()
}

/// `rou:N` or `poly:c0,c1,...`.
pub fn parse_family(s: &str, tol: f64) -> CliResult<EmpiricalMeasure> {
    if let Some(n) = s.strip_prefix("rou:") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad order in {s:?}")))?;
        if n == 0 {
            return Err(CliError::Input("the order must be positive".into()));
        }
        return Ok(EmpiricalMeasure::primitive_roots_of_unity(n)?);
    }
    if let Some(c) = s.strip_prefix("poly:") {
        let xi = AlgebraicNumber::new(parse_poly(c)?)?;
        return Ok(EmpiricalMeasure::from_algebraic(&xi, tol)?);
    }
    Err(CliError::Input(format!("unknown family {s:?}; expected rou:N or poly:c0,c1,...")))
}
