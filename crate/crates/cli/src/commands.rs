use std::collections::BTreeMap;

use arithdyn::algebraic::{
    is_root_of_unity, local_height_breakdown_tol, mahler_measure, root_of_unity_by_power_sums, AlgebraicNumber,
};
use arithdyn::dynamics::{
    canonical_height_global, canonical_height_local, northcott_bound, preperiodic_points_rational, RationalMap,
};
use arithdyn::green::{
    baker_mean_pairing, bilu_moment_test, discrepancy, discrete_energy, height_discrepancy_check, transfinite_diameter,
    EmpiricalMeasure, EscapeRateField, GValue,
};
use arithdyn::poly::factor::primes_below;
use arithdyn::poly::vp_int;
use arithdyn::proj::enumerate_points;
use arithdyn::torus::{monomial_pushforward, subadditivity_check, torus_height, TorusCoord};
use arithdyn::DEFAULT_TOL;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cli::{Command, Method, PointsArg, TorusCommand};
use crate::error::{CliError, CliResult};
use crate::input::{
    parse_algebraic, parse_family, parse_ints, parse_map, parse_point, parse_poly, parse_torus_point, read_cloud,
};
use crate::manifest::Certified;
use crate::output::{fmt_f64, num, Table};

const EPS: f64 = f64::EPSILON;

pub enum Body {
    Json(Value),
    Csv(Table),
}

/// What a command produced, plus the numbers that go into the manifest.
pub struct Outcome {
    pub body: Body,
    pub tolerances: BTreeMap<String, f64>,
    pub outputs: BTreeMap<String, Certified>,
}

impl Outcome {
    fn json(body: Value) -> Self {
        Outcome {
            body: Body::Json(body),
            tolerances: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    fn csv(table: Table) -> Self {
        Outcome {
            body: Body::Csv(table),
            tolerances: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    fn tol(mut self, name: &str, tol: f64) -> Self {
        self.tolerances.insert(name.into(), tol);
        self
    }

    fn out(mut self, name: &str, value: f64, error: f64) -> Self {
        self.outputs.insert(name.into(), Certified { value, error });
        self
    }
}

/// Error of a logarithm or sum computed once in floating point.
fn rounding(v: f64) -> f64 {
    8.0 * EPS * (v.abs() + 1.0)
}

/// Integers as JSON numbers when they fit, as strings otherwise.
fn int_array(c: &[BigInt]) -> Value {
    Value::Array(
        c.iter()
            .map(|x| i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string())))
            .collect(),
    )
}

fn gvalue(g: GValue) -> Value {
    match g {
        GValue::Finite(v) => num(v),
        GValue::Infinity => Value::String("inf".into()),
    }
}

/// Error of a mean of pairings: each escape rate is off by at most the
/// field's tail bound.
fn pairing_error(field: &EscapeRateField, v: f64) -> f64 {
    2.0 * field.tail_bound() + 64.0 * EPS * (v.abs() + 1.0)
}

pub fn run(cmd: &Command, seed: u64) -> CliResult<Outcome> {
    match cmd {
        Command::Height { point } => {
            let x = parse_point(point)?;
            let h = x.height();
            let err = rounding(h);
            Ok(Outcome::json(json!({
                "point": x.to_string(),
                "exp_height": x.exp_height().to_string(),
                "height": h,
                "error_bound": err,
            }))
            .out("height", h, err))
        }
        Command::Enumerate { k, bound } => {
            let pts = enumerate_points(*k, *bound)?;
            let mut header: Vec<String> = (0..=*k).map(|i| format!("x{i}")).collect();
            header.push("height".into());
            let mut t = Table {
                header,
                rows: Vec::with_capacity(pts.len()),
            };
            for x in &pts {
                let mut row: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
                row.push(fmt_f64(x.height()));
                t.push(row);
            }
            Ok(Outcome::csv(t).out("count", pts.len() as f64, 0.0))
        }
        Command::Schanuel { k, bound } => {
            let r = arithdyn::proj::schanuel_ratio(*k, *bound)?;
            // The zeta value is accurate to 1e-12 relative.
            let err = r.ratio * 1e-12 + rounding(r.ratio);
            Ok(Outcome::json(serde_json::to_value(&r)?).out("ratio", r.ratio, err))
        }
        Command::Mahler { poly, tol } => {
            let p = parse_poly(poly)?;
            let m = mahler_measure(&p, *tol)?;
            let measure_err = m.measure * m.error_bound.exp_m1();
            let mut v = serde_json::to_value(&m)?;
            v["polynomial"] = int_array(p.coeffs());
            Ok(Outcome::json(v)
                .tol("tol", *tol)
                .out("log_measure", m.log_measure, m.error_bound)
                .out("measure", m.measure, measure_err))
        }
        Command::Algheight { poly, tol } => {
            let xi = AlgebraicNumber::new(parse_poly(poly)?)?;
            let lh = local_height_breakdown_tol(&xi, *tol)?;
            let m = mahler_measure(xi.minpoly(), *tol)?;
            let exact: BTreeMap<String, String> = lh
                .finite
                .iter()
                .map(|(p, q)| (p.to_string(), q.to_string()))
                .collect();
            Ok(Outcome::json(json!({
                "minpoly": int_array(xi.minpoly().coeffs()),
                "height": lh.total,
                "mahler": m.measure,
                "places": lh.places(),
                "places_log_p_multiple": exact,
                "error_bound": lh.error_bound,
            }))
            .tol("tol", *tol)
            .out("height", lh.total, lh.error_bound)
            .out("mahler", m.measure, m.measure * m.error_bound.exp_m1()))
        }
        Command::Rou { poly } => {
            let xi = AlgebraicNumber::new(parse_poly(poly)?)?;
            let verdict = is_root_of_unity(&xi)?;
            let (prime, equal) = root_of_unity_by_power_sums(&xi)?;
            let power_sums = if prime == 0 {
                json!({"applicable": false})
            } else {
                json!({"applicable": true, "prime": prime, "root_of_unity_or_zero": equal})
            };
            Ok(Outcome::json(json!({
                "minpoly": int_array(xi.minpoly().coeffs()),
                "verdict": verdict,
                "power_sums": power_sums,
            })))
        }
        Command::Canheight { map, point, tol, method } => {
            let f = parse_map(map)?;
            let x = parse_point(point)?;
            canheight(&f, &x, *tol, *method)
        }
        Command::Preperiodic { map } => {
            let f = parse_map(map)?;
            let nb = northcott_bound(&f);
            let pts = preperiodic_points_rational(&f)?;
            let shown: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
            Ok(Outcome::json(json!({
                "map": f,
                "northcott_bound": nb,
                "count": pts.len(),
                "points": shown,
            }))
            .out("count", pts.len() as f64, 0.0))
        }
        Command::Goodred { map, primes_up_to } => {
            let f = parse_map(map)?;
            let mut primes: Vec<BigUint> = primes_below(primes_up_to.saturating_add(1))
                .into_iter()
                .map(BigUint::from)
                .collect();
            primes.extend(f.bad_primes().iter().cloned());
            primes.sort();
            primes.dedup();
            let mut t = Table::new(&["prime", "valuation_of_resultant", "good_reduction"]);
            for p in &primes {
                let v = vp_int(f.resultant(), p).unwrap_or(0);
                t.push(vec![p.to_string(), v.to_string(), f.good_reduction_at(p).to_string()]);
            }
            Ok(Outcome::csv(t).out("bad_primes", f.bad_primes().len() as f64, 0.0))
        }
        Command::JuliaSample { map, grid, extent, tol } => {
            if *grid < 2 {
                return Err(CliError::Input("the grid needs at least 2 points per side".into()));
            }
            if !(*extent > 0.0) {
                return Err(CliError::Input("the extent must be positive".into()));
            }
            let f = parse_map(map)?;
            let field = EscapeRateField::new(&f, *tol)?;
            let mut t = Table::new(&["re", "im", "lambda", "membership"]);
            let step = 2.0 * extent / (*grid - 1) as f64;
            let one = Complex64::new(1.0, 0.0);
            for i in 0..*grid {
                let im = extent - step * i as f64;
                for j in 0..*grid {
                    let re = -extent + step * j as f64;
                    let z = Complex64::new(re, im);
                    let lam = field.escape_rate(z, one)?;
                    let m = field.filled_julia_membership(z, one)?;
                    let m = serde_json::to_value(m)?;
                    t.push(vec![fmt_f64(re), fmt_f64(im), fmt_f64(lam), m.as_str().unwrap_or_default().to_string()]);
                }
            }
            Ok(Outcome::csv(t)
                .tol("tol", *tol)
                .out("tail_bound", field.tail_bound(), 0.0))
        }
        Command::Tdiam { map, n, restarts, tol } => {
            let f = parse_map(map)?;
            let field = EscapeRateField::new(&f, *tol)?;
            let r = transfinite_diameter(&field, *n, *restarts, seed)?;
            let mut v = serde_json::to_value(&r)?;
            v["certified"] = Value::Bool(false);
            v["gap"] = num((r.delta_n - r.formula_value).abs());
            // The optimum found is a local one; there is no certified bound
            // on its distance to the supremum.
            Ok(Outcome::json(v)
                .tol("tol", *tol)
                .out("delta_n", r.delta_n, f64::INFINITY)
                .out("formula_value", r.formula_value, rounding(r.formula_value)))
        }
        Command::Discrepancy { map, poly, tol } => {
            let f = parse_map(map)?;
            let xi = AlgebraicNumber::new(parse_poly(poly)?)?;
            let field = EscapeRateField::new(&f, *tol)?;
            let d = discrepancy(&field, &xi)?;
            let identity = if f.is_power_map() {
                Some(height_discrepancy_check(&f, &xi, *tol)?)
            } else {
                None
            };
            let mut o = Outcome::json(json!({
                "d_infinity": gvalue(d),
                "identity": identity,
            }))
            .tol("tol", *tol);
            if let Some(v) = d.finite() {
                o = o.out("d_infinity", v, pairing_error(&field, v));
            }
            if let Some(id) = &identity {
                o = o.out("identity_gap", id.gap, 4.0 * tol);
            }
            Ok(o)
        }
        Command::Baker { map, points, tol } => {
            let f = parse_map(map)?;
            let field = EscapeRateField::new(&f, *tol)?;
            let nu = points_measure(points)?;
            let r = baker_mean_pairing(&field, nu.points())?;
            let mut o = Outcome::json(serde_json::to_value(&r)?).tol("tol", *tol);
            if let Some(v) = r.mean.finite() {
                o = o.out("mean", v, pairing_error(&field, v));
            }
            Ok(o)
        }
        Command::Bilu { family, exponents } => {
            let nu = parse_family(family, DEFAULT_TOL)?;
            let exps = parse_ints(exponents)?;
            let m = bilu_moment_test(&nu, &exps)?;
            let mut t = Table::new(&["exponent", "magnitude", "used", "excluded"]);
            let mut max = 0.0f64;
            for x in &m.moments {
                max = max.max(x.magnitude);
                t.push(vec![
                    x.exponent.to_string(),
                    fmt_f64(x.magnitude),
                    x.used.to_string(),
                    (nu.len() - x.used).to_string(),
                ]);
            }
            // Conjugates are certified to DEFAULT_TOL; |z^a| moves by at most
            // |a| times that on the unit circle.
            let amax = exps.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0) as f64;
            Ok(Outcome::csv(t)
                .tol("tol", DEFAULT_TOL)
                .out("max_magnitude", max, amax * DEFAULT_TOL + rounding(max)))
        }
        Command::Energy { map, cloud, tol } => {
            let f = parse_map(map)?;
            let field = EscapeRateField::new(&f, *tol)?;
            let nu = EmpiricalMeasure::from_affine(&read_cloud(cloud)?)?;
            let e = discrete_energy(&field, &nu)?;
            let mut o = Outcome::json(json!({"n": nu.len(), "energy": gvalue(e)})).tol("tol", *tol);
            if let Some(v) = e.finite() {
                o = o.out("energy", v, pairing_error(&field, v));
            }
            Ok(o)
        }
        Command::Torus(t) => torus(t),
    }
}

fn points_measure(p: &PointsArg) -> CliResult<EmpiricalMeasure> {
    match (&p.points_file, p.roots_of_unity) {
        (Some(path), None) => Ok(EmpiricalMeasure::from_affine(&read_cloud(path)?)?),
        (None, Some(n)) => Ok(EmpiricalMeasure::roots_of_unity(n)?),
        _ => Err(CliError::Input("give exactly one of --points-file and --roots-of-unity".into())),
    }
}

fn canheight(f: &RationalMap, x: &arithdyn::proj::ProjPointQ, tol: f64, method: Method) -> CliResult<Outcome> {
    if x.dim() != 1 {
        return Err(CliError::Input(format!("{x} is not a point of P^1")));
    }
    let global = matches!(method, Method::Global | Method::Both)
        .then(|| canonical_height_global(f, x, tol))
        .transpose()?;
    let local = matches!(method, Method::Local | Method::Both)
        .then(|| canonical_height_local(f, x, tol))
        .transpose()?;
    let mut body = json!({"map": f, "point": x.to_string()});
    let mut o = Outcome::json(Value::Null).tol("tol", tol);
    if let Some(g) = &global {
        body["global"] = serde_json::to_value(g)?;
        o = o.out("global", g.value, g.error);
    }
    if let Some(l) = &local {
        body["local"] = serde_json::to_value(l)?;
        o = o.out("local", l.total, l.total_error);
    }
    if let (Some(g), Some(l)) = (&global, &local) {
        let gap = (g.value - l.total).abs();
        body["gap"] = num(gap);
        body["agree"] = Value::Bool(gap <= g.error + l.total_error);
        o = o.out("gap", gap, rounding(gap));
    }
    o.body = Body::Json(body);
    Ok(o)
}

fn torus(cmd: &TorusCommand) -> CliResult<Outcome> {
    match cmd {
        TorusCommand::Height { point } => {
            let x = parse_torus_point(point)?;
            let parts = x.coords().iter().map(TorusCoord::height).collect::<Result<Vec<f64>, _>>()?;
            let h = torus_height(&x)?;
            let err = x.dim() as f64 * DEFAULT_TOL + rounding(h);
            Ok(Outcome::json(json!({
                "dim": x.dim(),
                "coordinate_heights": parts,
                "height": h,
                "error_bound": err,
            }))
            .out("height", h, err))
        }
        TorusCommand::Pushforward { point, exponents } => {
            let x = parse_torus_point(point)?;
            let a = parse_ints(exponents)?;
            let r = monomial_pushforward(&x, &a)?;
            let mut o = Outcome::json(serde_json::to_value(&r)?);
            let err = if x.is_rational() { rounding(r.bound) } else { DEFAULT_TOL };
            if let Some(h) = r.height {
                o = o.out("height", h, err);
            }
            Ok(o.out("bound", r.bound, x.dim() as f64 * DEFAULT_TOL + rounding(r.bound)))
        }
        TorusCommand::Subadditivity { alpha, beta } => {
            let a = parse_algebraic(alpha)?;
            let b = parse_algebraic(beta)?;
            let r = subadditivity_check(&a, &b)?;
            let mut o = Outcome::json(serde_json::to_value(&r)?);
            if let Some(l) = r.lhs {
                o = o.out("lhs", l, DEFAULT_TOL + rounding(l));
            }
            Ok(o.out("rhs", r.rhs, 2.0 * DEFAULT_TOL + rounding(r.rhs)))
        }
    }
}
