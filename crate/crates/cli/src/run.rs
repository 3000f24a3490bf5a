//! Executes a validated configuration into in-memory output files.

use std::collections::BTreeMap;

use lsiib_core::analysis::{build_grid, sweep, SweepRow};
use lsiib_core::hamiltonians::CollectiveSixBasis;
use lsiib_core::reduction::{blockade_shift_numeric, light_shifts_first_order, resonance_detuning};
use lsiib_core::{BlockadeReport, DriveParams, Error, LadderKind, Scenario, ScenarioRun, Trajectory};
use serde_json::{json, Map, Value};

use crate::config::{ConfigError, Format, RunConfig, ScenarioName};
use crate::output::{fmt_float, Artifact};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numeric(String),
    Other(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric(_) => 3,
            RunError::Other(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunError::Config(m) | RunError::Numeric(m) | RunError::Other(m) => m,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.0)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        if e.is_numeric_regime() {
            return RunError::Numeric(msg);
        }
        match e {
            Error::InvalidParams(_)
            | Error::InvalidConfig(_)
            | Error::TooManyAtoms { .. }
            | Error::IncompatibleLabel { .. }
            | Error::EmptyGrid => RunError::Config(msg),
            _ => RunError::Other(msg),
        }
    }
}

/// Parameters of a single run, with Δ moved to resonance if requested.
pub fn resolved_params(cfg: &RunConfig) -> Result<DriveParams, RunError> {
    match cfg.resonant {
        Some(ladder) => Ok(cfg.params.with_big_delta(resonance_detuning(&cfg.params, ladder)?)?),
        None => Ok(cfg.params),
    }
}

pub fn execute(cfg: &RunConfig, threads: Option<usize>) -> Result<Vec<Artifact>, RunError> {
    let mut files = match cfg.name {
        ScenarioName::Sweep => run_sweep(cfg, threads)?,
        ScenarioName::OracleCompare => run_compare(cfg)?,
        _ => run_single(cfg)?,
    };
    let names: Vec<&str> = files.iter().map(|a| a.name.as_str()).collect();
    let manifest = json!({
        "tool": "lsiib",
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": cfg.name.as_str(),
        "format": match cfg.format { Format::Csv => "csv", Format::Json => "json" },
        "files": names,
    });
    files.push(Artifact::json("manifest.json", &manifest));
    Ok(files)
}

fn trajectory_file(stem: &str, traj: &Trajectory, format: Format) -> Artifact {
    match format {
        Format::Csv => {
            let mut out = String::from("t");
            for label in traj.labels() {
                out.push_str(",p_");
                out.push_str(label);
            }
            out.push('\n');
            for (t, row) in traj.times().iter().zip(traj.populations()) {
                out.push_str(&fmt_float(*t));
                for p in row {
                    out.push(',');
                    out.push_str(&fmt_float(*p));
                }
                out.push('\n');
            }
            Artifact::new(format!("{stem}.csv"), out)
        }
        Format::Json => Artifact::json(
            &format!("{stem}.json"),
            &json!({
                "labels": traj.labels(),
                "times": traj.times(),
                "populations": traj.populations(),
            }),
        ),
    }
}

fn param_entries(p: &DriveParams, map: &mut Map<String, Value>) {
    map.insert("omega1".into(), json!(p.omega1()));
    map.insert("omega2".into(), json!(p.omega2()));
    map.insert("delta".into(), json!(p.delta()));
    map.insert("big_delta".into(), json!(p.big_delta()));
    map.insert("delta1".into(), json!(p.delta1()));
    map.insert("delta2".into(), json!(p.delta2()));
    map.insert("n_atoms".into(), json!(p.n_atoms()));
}

fn report_entries(r: &BlockadeReport, map: &mut Map<String, Value>) {
    map.insert("max_leak_excited".into(), json!(r.max_leak_excited));
    map.insert("max_leak_blocked".into(), json!(r.max_leak_blocked));
    map.insert("rabi_frequency_fit".into(), json!(r.rabi_frequency_fit));
    map.insert("transfer_fidelity".into(), json!(r.transfer_fidelity));
    if let Some(f) = &r.regime_flags {
        map.insert("regime_adiabatic".into(), json!(f.adiabatic));
        map.insert("regime_blockade".into(), json!(f.blockade));
        map.insert("regime_adiabatic_ratio".into(), json!(f.adiabatic_ratio));
        map.insert("regime_blockade_ratio".into(), json!(f.blockade_ratio));
    }
}

/// Flat report: parameters, derived light-shift quantities and metrics.
fn report_json(cfg: &RunConfig, p: &DriveParams, run: &ScenarioRun) -> Result<Value, RunError> {
    let mut map = Map::new();
    map.insert("scenario".into(), json!(cfg.name.as_str()));
    param_entries(p, &mut map);

    let ls = light_shifts_first_order(p)?;
    for (k, v) in [
        ("eps1", ls.eps1),
        ("eps2", ls.eps2),
        ("eps_a", ls.eps_a),
        ("eps_c1", ls.eps_c1),
        ("eps_c2", ls.eps_c2),
        ("omega_r", ls.omega_r),
        ("omega_ro", ls.omega_ro),
        ("delta_b", ls.delta_b),
    ] {
        map.insert(k.into(), json!(v));
    }
    map.insert(
        "resonance_big_delta_single".into(),
        json!(resonance_detuning(p, LadderKind::SingleAtom)?),
    );
    map.insert(
        "resonance_big_delta_collective".into(),
        json!(resonance_detuning(p, LadderKind::Collective)?),
    );
    if p.n_atoms() >= 3 {
        map.insert("delta_b_numeric".into(), json!(blockade_shift_numeric(p)?));
    }

    map.insert("raman_frequency".into(), json!(run.raman_frequency));
    map.insert("t_max".into(), json!(run.trajectory.t_max()));
    map.insert("n_steps".into(), json!(run.trajectory.len() - 1));
    if let Some(a) = run.asymmetric_population {
        map.insert("asymmetric_population".into(), json!(a));
    }
    report_entries(&run.report, &mut map);
    Ok(Value::Object(map))
}

fn run_single(cfg: &RunConfig) -> Result<Vec<Artifact>, RunError> {
    let p = resolved_params(cfg)?;
    let run = cfg.scenario.run(&p, &cfg.settings)?;
    Ok(vec![
        trajectory_file("trajectory", &run.trajectory, cfg.format),
        Artifact::json("report.json", &report_json(cfg, &p, &run)?),
    ])
}

fn run_compare(cfg: &RunConfig) -> Result<Vec<Artifact>, RunError> {
    let p = resolved_params(cfg)?;
    let full = Scenario::FullEnsemble.run(&p, &cfg.settings)?;
    let truncated = Scenario::CollectiveSixLevel.run(&p, &cfg.settings)?;

    let mut cmp = Map::new();
    cmp.insert("n_atoms".into(), json!(p.n_atoms()));
    for label in CollectiveSixBasis::ORDER {
        let (i, j) = (
            full.trajectory.index_of(label.as_str()).expect("projected label"),
            truncated.trajectory.index_of(label.as_str()).expect("six-level label"),
        );
        let worst = full
            .trajectory
            .populations()
            .iter()
            .zip(truncated.trajectory.populations())
            .map(|(a, b)| (a[i] - b[j]).abs())
            .fold(0.0, f64::max);
        cmp.insert(format!("max_abs_diff_{label}"), json!(worst));
    }
    let outside = full.trajectory.index_of("outside").expect("residual column");
    let max_outside = full.trajectory.series(outside).into_iter().fold(0.0, f64::max);
    cmp.insert("max_outside_population".into(), json!(max_outside));
    cmp.insert("asymmetric_population".into(), json!(full.asymmetric_population));

    Ok(vec![
        trajectory_file("trajectory_full", &full.trajectory, cfg.format),
        trajectory_file("trajectory_truncated", &truncated.trajectory, cfg.format),
        Artifact::json("report.json", &report_json(cfg, &p, &full)?),
        Artifact::json("comparison.json", &Value::Object(cmp)),
    ])
}

const SWEEP_COLUMNS: [&str; 15] = [
    "index",
    "omega1",
    "omega2",
    "delta",
    "big_delta",
    "n_atoms",
    "delta_b",
    "delta_b_numeric",
    "max_leak_excited",
    "max_leak_blocked",
    "rabi_frequency_fit",
    "transfer_fidelity",
    "regime_adiabatic",
    "regime_blockade",
    "error",
];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Analytic and dressed-state blockade shifts, where defined.
fn blockade_shifts(p: &DriveParams) -> (Option<f64>, Option<f64>) {
    let analytic = light_shifts_first_order(p).ok().map(|ls| ls.delta_b);
    let numeric = (p.n_atoms() >= 3).then(|| blockade_shift_numeric(p).ok()).flatten();
    (analytic, numeric)
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        let p = &row.params;
        let mut fields = vec![
            row.index.to_string(),
            fmt_float(p.omega1()),
            fmt_float(p.omega2()),
            fmt_float(p.delta()),
            fmt_float(p.big_delta()),
            p.n_atoms().to_string(),
        ];
        let (analytic, numeric) = blockade_shifts(p);
        fields.push(analytic.map(fmt_float).unwrap_or_default());
        fields.push(numeric.map(fmt_float).unwrap_or_default());
        match &row.outcome {
            Ok(r) => {
                let flags = r.regime_flags.expect("scenario runs set regime flags");
                fields.extend([
                    fmt_float(r.max_leak_excited),
                    fmt_float(r.max_leak_blocked),
                    r.rabi_frequency_fit.map(fmt_float).unwrap_or_default(),
                    fmt_float(r.transfer_fidelity),
                    flags.adiabatic.to_string(),
                    flags.blockade.to_string(),
                    String::new(),
                ]);
            }
            Err(e) => {
                fields.extend(std::iter::repeat(String::new()).take(6));
                fields.push(csv_field(&e.to_string()));
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn sweep_json(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                let mut map = Map::new();
                map.insert("index".into(), json!(row.index));
                param_entries(&row.params, &mut map);
                let (analytic, numeric) = blockade_shifts(&row.params);
                map.insert("delta_b".into(), json!(analytic));
                map.insert("delta_b_numeric".into(), json!(numeric));
                match &row.outcome {
                    Ok(r) => report_entries(r, &mut map),
                    Err(e) => {
                        map.insert("error".into(), json!(e.to_string()));
                    }
                }
                Value::Object(map)
            })
            .collect(),
    )
}

fn run_sweep(cfg: &RunConfig, threads: Option<usize>) -> Result<Vec<Artifact>, RunError> {
    let grid = build_grid(cfg.params, &cfg.axes, cfg.resonant)?;
    let rows = sweep(&grid, cfg.scenario, &cfg.settings, threads)?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        log::warn!("{failed} of {} sweep points failed; see the error column", rows.len());
    }
    Ok(vec![match cfg.format {
        Format::Csv => Artifact::new("sweep.csv".into(), sweep_csv(&rows)),
        Format::Json => Artifact::json("sweep.json", &sweep_json(&rows)),
    }])
}

/// LightShiftSet of the configured parameters, pretty-printed.
pub fn derive(cfg: &RunConfig) -> Result<String, RunError> {
    let p = resolved_params(cfg)?;
    let ls = light_shifts_first_order(&p)?;
    let value = serde_json::to_value(ls).map_err(|e| RunError::Other(e.to_string()))?;
    // Value maps are key-sorted
    let sorted: BTreeMap<String, Value> = serde_json::from_value(value).map_err(|e| RunError::Other(e.to_string()))?;
    serde_json::to_string_pretty(&sorted).map_err(|e| RunError::Other(e.to_string()))
}
