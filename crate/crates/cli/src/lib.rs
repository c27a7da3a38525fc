//! Command implementations behind the `amgm` binary.
//!
//! Each command returns structured output (JSON values or sweep rows) so the
//! binary only has to print and pick an exit code: 0 success, 1 verification
//! failure, 2 usage or validation error, 3 internal consistency violation.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use thiserror::Error;

use amgm_core::bounds::{check_bounds, lower_bound, upper_bound};
use amgm_core::extremal::{psi, spec_to_distribution, two_point_hi, two_point_lo};
use amgm_core::par::Execution;
use amgm_core::stats::{make_distribution, sqrt_moments, uniform_from_values, Atom};
use amgm_core::verify::{
    falsify_sandwich, verify_attainment, verify_lemma_var, verify_prop2, verify_prop3,
    CampaignConfig, Side,
};
use amgm_core::{DiscreteDistribution, Error as CoreError, ExtReal};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SandwichViolation { .. } => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads the `eval` input: inline JSON when it starts with `[` or `{`,
/// standard input for `-`, a file path otherwise.
pub fn read_input(input: &str) -> CliResult<String> {
    let t = input.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(input.to_string());
    }
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(input).map_err(|e| CliError::Usage(format!("cannot read {input}: {e}")))
}

/// Parses distribution JSON `{"atoms": [{"x", "p"}, ...]}` or a bare array of
/// values, which is read as the uniform law on those values.
pub fn parse_distribution(text: &str) -> CliResult<DiscreteDistribution> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed JSON: {e}")))?;
    match value {
        Value::Array(items) => {
            let mut values = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let x = item.as_f64().ok_or_else(|| {
                    CliError::Usage(format!("value {i} is not a number: {item}"))
                })?;
                values.push(x);
            }
            Ok(uniform_from_values(&values)?)
        }
        Value::Object(mut obj) => {
            let atoms = obj
                .remove("atoms")
                .ok_or_else(|| CliError::Usage("expected an \"atoms\" array".into()))?;
            let atoms: Vec<Atom> = serde_json::from_value(atoms).map_err(|e| {
                CliError::Usage(format!("atoms must be objects {{\"x\": n, \"p\": n}}: {e}"))
            })?;
            Ok(make_distribution(atoms.iter().map(|a| (a.x, a.p)))?)
        }
        other => Err(CliError::Usage(format!(
            "expected a distribution object or an array of values, got {other}"
        ))),
    }
}

fn merge_into(map: &mut Map<String, Value>, value: Value) {
    if let Value::Object(obj) = value {
        map.extend(obj);
    }
}

/// Statistics and bounds of one distribution as a flat JSON object.
pub fn eval_distribution(d: &DiscreteDistribution) -> CliResult<Value> {
    let bounds = check_bounds(d)?;
    let summary = sqrt_moments(d);
    let mut out = Map::new();
    out.insert("atoms".into(), json!(d.atoms()));
    merge_into(&mut out, serde_json::to_value(summary).expect("summary serializes"));
    merge_into(&mut out, serde_json::to_value(bounds).expect("bounds serialize"));
    Ok(Value::Object(out))
}

/// `eval`: input path or inline JSON to moments plus bounds.
pub fn cmd_eval(input: &str) -> CliResult<Value> {
    let text = read_input(input)?;
    eval_distribution(&parse_distribution(&text)?)
}

/// `extremal`: the attaining two-point law for `(V, E)` or `(V, F)`, shifted by `c`.
pub fn cmd_extremal(side: Side, v: f64, e_or_f: ExtReal, u: f64, c: f64) -> CliResult<Value> {
    let (spec, bound) = match side {
        Side::Hi => {
            let e = e_or_f.finite().ok_or_else(|| {
                CliError::Usage("inadmissible pair: E must be finite (require E = V = 0 or E > V > 0)".into())
            })?;
            let spec = two_point_hi(v, e, u)?;
            (spec, upper_bound(v, e)?)
        }
        Side::Lo => {
            let spec = two_point_lo(v, e_or_f, u)?;
            (spec, lower_bound(v, e_or_f)?)
        }
    };
    let d = spec_to_distribution(&spec, c)?;
    Ok(json!({
        "side": side,
        "spec": spec,
        "c": c,
        "distribution": d,
        "summary": sqrt_moments(&d),
        "psi": psi(&spec, c)?,
        "bound": bound,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Sandwich,
    Prop2,
    Prop3,
    LemVar,
    Attain,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "sandwich" => Suite::Sandwich,
            "prop2" => Suite::Prop2,
            "prop3" => Suite::Prop3,
            "lemvar" => Suite::LemVar,
            "attain" => Suite::Attain,
            "all" => Suite::All,
            other => return Err(format!("unknown suite {other:?}")),
        })
    }
}

/// Parameters of the `verify` subcommand beyond the campaign config.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub campaign: CampaignConfig,
    pub v: f64,
    pub e: f64,
    pub f: ExtReal,
    pub side: Side,
    pub grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            campaign: CampaignConfig::default(),
            v: 1.0,
            e: 4.0,
            f: ExtReal::Finite(2.0),
            side: Side::Hi,
            grid: 1000,
        }
    }
}

/// Result of `verify`: one JSON object per suite run.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub passed: bool,
    pub suites: Vec<Value>,
}

impl VerifyOutcome {
    pub fn to_json(&self) -> Value {
        json!({ "passed": self.passed, "suites": self.suites })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn tagged(suite: &str, value: Value) -> Value {
    let mut out = Map::new();
    out.insert("suite".into(), json!(suite));
    merge_into(&mut out, value);
    Value::Object(out)
}

/// `verify`: runs one or all suites.
pub fn cmd_verify(suite: Suite, opts: &VerifyOptions) -> CliResult<VerifyOutcome> {
    let cfg = &opts.campaign;
    cfg.validate()?;
    let run_all = suite == Suite::All;
    let mut suites = Vec::new();
    let mut passed = true;

    if run_all || suite == Suite::Sandwich {
        let r = falsify_sandwich(cfg)?;
        passed &= r.passed();
        suites.push(tagged("sandwich", serde_json::to_value(&r).expect("report")));
    }
    if run_all || suite == Suite::Prop2 {
        let r = verify_prop2(opts.v, opts.f, cfg)?;
        passed &= r.report.passed();
        suites.push(tagged("prop2", serde_json::to_value(&r).expect("report")));
    }
    if run_all || suite == Suite::Prop3 {
        let r = verify_prop3(cfg)?;
        passed &= r.passed();
        suites.push(tagged("prop3", serde_json::to_value(&r).expect("report")));
    }
    if run_all || suite == Suite::LemVar {
        let r = verify_lemma_var(cfg)?;
        passed &= r.passed();
        suites.push(tagged("lemvar", serde_json::to_value(&r).expect("report")));
    }
    if run_all || suite == Suite::Attain {
        let param = match opts.side {
            Side::Hi => opts.e,
            Side::Lo => opts.f.finite().ok_or_else(|| {
                CliError::Usage("attain --side lo needs a finite --f: the infimum is not attained at F = inf".into())
            })?,
        };
        let r = verify_attainment(opts.v, param, opts.side, opts.grid, cfg.execution)?;
        passed &= r.report.passed();
        suites.push(tagged("attain", serde_json::to_value(&r).expect("report")));
    }
    Ok(VerifyOutcome { passed, suites })
}

/// A grid of `(V, E)` or `(V, F)` pairs to tabulate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub v_values: Vec<f64>,
    pub params: Vec<ExtReal>,
    pub side: Side,
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub v: f64,
    pub param: ExtReal,
    /// `None` for inadmissible pairs.
    pub bound: Option<f64>,
}

/// The bound for every `(V, param)` pair, in row-major order over `V`.
pub fn sweep_rows(spec: &SweepSpec) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(spec.v_values.len() * spec.params.len());
    for &v in &spec.v_values {
        for &param in &spec.params {
            let bound = match (spec.side, param) {
                (Side::Hi, ExtReal::Finite(e)) => upper_bound(v, e).ok(),
                (Side::Hi, ExtReal::Infinity) => None,
                (Side::Lo, f) => lower_bound(v, f).ok(),
            };
            rows.push(SweepRow { v, param, bound });
        }
    }
    rows
}

/// Checks the monotonicity of the bounds across the sweep: both are
/// nondecreasing in `V`; the upper bound is nondecreasing in `E` and the
/// lower bound nonincreasing in `F`.
pub fn check_sweep_monotone(side: Side, rows: &[SweepRow]) -> CliResult<()> {
    let admissible: Vec<&SweepRow> = rows.iter().filter(|r| r.bound.is_some()).collect();
    let mut by_v: Vec<&SweepRow> = admissible.clone();
    by_v.sort_by(|a, b| {
        a.v.total_cmp(&b.v)
            .then(a.param.partial_cmp(&b.param).unwrap_or(std::cmp::Ordering::Equal))
    });
    for pair in by_v.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a.v != b.v || a.param == b.param {
            continue;
        }
        let (ba, bb) = (a.bound.unwrap(), b.bound.unwrap());
        let ok = match side {
            Side::Hi => bb >= ba,
            Side::Lo => bb <= ba,
        };
        if !ok {
            return Err(CliError::Internal(format!(
                "bound not monotone in the second parameter at V = {}: {} -> {}, {} -> {}",
                a.v, a.param, ba, b.param, bb
            )));
        }
    }
    let mut by_param = admissible;
    by_param.sort_by(|a, b| {
        a.param
            .partial_cmp(&b.param)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.v.total_cmp(&b.v))
    });
    for pair in by_param.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a.param != b.param || a.v == b.v {
            continue;
        }
        if b.bound.unwrap() < a.bound.unwrap() {
            return Err(CliError::Internal(format!(
                "bound decreases in V at parameter {}: V = {} -> {}",
                a.param, a.v, b.v
            )));
        }
    }
    Ok(())
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `v,param,bound,skipped` rows to `path`.
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    let io = |e: csv::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    w.write_record(["v", "param", "bound", "skipped"]).map_err(io)?;
    for r in rows {
        let param = match r.param {
            ExtReal::Finite(x) => fmt17(x),
            ExtReal::Infinity => "inf".into(),
        };
        let bound = r.bound.map(fmt17).unwrap_or_default();
        let skipped = if r.bound.is_some() { "false" } else { "true" };
        w.write_record([fmt17(r.v), param, bound, skipped.into()]).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// `sweep`: tabulates the bounds, checks monotonicity, writes the CSV.
pub fn cmd_sweep(spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    let rows = sweep_rows(spec);
    check_sweep_monotone(spec.side, &rows)?;
    write_sweep_csv(&spec.output, &rows)?;
    Ok(rows)
}

/// Execution mode for campaigns launched from the command line.
pub fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_array_and_explicit_uniform_agree() {
        let a = cmd_eval("[1, 9, 4]").unwrap();
        let third = 1.0 / 3.0;
        let b = cmd_eval(&format!(
            r#"{{"atoms":[{{"x":1,"p":{third}}},{{"x":9,"p":{third}}},{{"x":4,"p":{third}}}]}}"#
        ))
        .unwrap();
        for key in ["gap", "upper", "lower", "V", "E", "F", "mean"] {
            let (x, y) = (a[key].as_f64().unwrap(), b[key].as_f64().unwrap());
            assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0), "{key}: {x} vs {y}");
        }
    }

    #[test]
    fn eval_errors_name_the_atom() {
        let e = cmd_eval(r#"{"atoms":[{"x":1,"p":0.5},{"x":-3,"p":0.5}]}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("atom 1"), "{e}");
        let e = cmd_eval("[1, \"a\"]").unwrap_err();
        assert!(e.to_string().contains("value 1"), "{e}");
        let e = cmd_eval("[1, 2").unwrap_err();
        assert!(e.to_string().contains("malformed JSON"), "{e}");
        let e = cmd_eval("/nonexistent/file.json").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = cmd_eval(r#"{"atoms":[{"x":1,"p":0.3},{"x":9,"p":0.8}]}"#).unwrap_err();
        assert!(e.to_string().contains("sum"), "{e}");
    }

    #[test]
    fn sweep_monotonicity_violation_is_internal() {
        let rows = [
            SweepRow { v: 1.0, param: ExtReal::Finite(2.0), bound: Some(3.0) },
            SweepRow { v: 1.0, param: ExtReal::Finite(3.0), bound: Some(2.0) },
        ];
        assert_eq!(check_sweep_monotone(Side::Hi, &rows).unwrap_err().exit_code(), 3);
        assert!(check_sweep_monotone(Side::Lo, &rows).is_ok());
    }

    #[test]
    fn suite_names() {
        assert_eq!("LEMVAR".parse::<Suite>(), Ok(Suite::LemVar));
        assert!("nope".parse::<Suite>().is_err());
    }
}
