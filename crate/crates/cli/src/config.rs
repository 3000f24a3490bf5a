//! TOML run configuration and its validation into core types.

use std::path::{Path, PathBuf};

use lsiib_core::analysis::SweepAxis;
use lsiib_core::dynamics::{PropagationMethod, DEFAULT_PERIODS, DEFAULT_STEPS};
use lsiib_core::reduction::{CollectiveCoupling, ThreeLevelForm};
use lsiib_core::{DriveParams, LadderKind, RunSettings, Scenario, DEFAULT_MAX_ATOMS};
use serde::Deserialize;

/// Problems with the configuration itself; the CLI exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum ScenarioName {
    #[serde(rename = "single-atom-5lvl")]
    SingleAtom,
    #[serde(rename = "collective-6lvl")]
    CollectiveSix,
    #[serde(rename = "effective-3lvl")]
    EffectiveThree,
    #[serde(rename = "full-ensemble-oracle")]
    FullEnsembleOracle,
    #[serde(rename = "oracle-compare")]
    OracleCompare,
    #[serde(rename = "sweep")]
    Sweep,
}

impl ScenarioName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::SingleAtom => "single-atom-5lvl",
            ScenarioName::CollectiveSix => "collective-6lvl",
            ScenarioName::EffectiveThree => "effective-3lvl",
            ScenarioName::FullEnsembleOracle => "full-ensemble-oracle",
            ScenarioName::OracleCompare => "oracle-compare",
            ScenarioName::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    #[default]
    Eigendecomposition,
    ScaledExpm,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Ladder {
    #[default]
    Single,
    Collective,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Form {
    #[default]
    Shifted,
    Unshifted,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Coupling {
    #[default]
    LargeN,
    FiniteN,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: ScenarioName,
    params: RawParams,
    #[serde(default)]
    propagation: RawPropagation,
    effective: Option<RawEffective>,
    sweep: Option<RawSweep>,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    omega1: f64,
    omega2: f64,
    delta: Option<f64>,
    big_delta: Option<f64>,
    delta1: Option<f64>,
    delta2: Option<f64>,
    n_atoms: Option<usize>,
    #[serde(default)]
    resonant: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPropagation {
    periods: Option<f64>,
    t_max: Option<f64>,
    n_steps: Option<usize>,
    #[serde(default)]
    method: Method,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEffective {
    #[serde(default)]
    ladder: Ladder,
    form: Option<Form>,
    coupling: Option<Coupling>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    scenario: ScenarioName,
    axes: Vec<RawAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    name: String,
    values: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    #[serde(default)]
    format: Format,
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub name: ScenarioName,
    /// Model evolved by single runs and by each sweep point.
    pub scenario: Scenario,
    pub params: DriveParams,
    /// Set when Δ is moved to the first-order resonance.
    pub resonant: Option<LadderKind>,
    pub settings: RunSettings,
    pub axes: Vec<(SweepAxis, Vec<f64>)>,
    pub out_dir: PathBuf,
    pub format: Format,
}

const DEFAULT_OUT_DIR: &str = "lsiib-out";

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| format!(" (line {})", text[..s.start].lines().count().max(1)))
                .unwrap_or_default();
            ConfigError(format!("invalid config{line}: {}", e.message().trim()))
        })?;
        raw.validate()
    }
}

fn scenario_for(name: ScenarioName, effective: Option<&RawEffective>) -> Result<Scenario, ConfigError> {
    Ok(match name {
        ScenarioName::SingleAtom => Scenario::SingleAtomFiveLevel,
        ScenarioName::CollectiveSix => Scenario::CollectiveSixLevel,
        ScenarioName::FullEnsembleOracle | ScenarioName::OracleCompare => Scenario::FullEnsemble,
        ScenarioName::EffectiveThree => {
            let eff = effective.copied().unwrap_or_default();
            match eff.ladder {
                Ladder::Single => {
                    if eff.coupling.is_some() {
                        return bad("effective.coupling only applies to ladder = \"collective\"");
                    }
                    Scenario::EffectiveThreeSingle(match eff.form.unwrap_or_default() {
                        Form::Shifted => ThreeLevelForm::Shifted,
                        Form::Unshifted => ThreeLevelForm::Unshifted,
                    })
                }
                Ladder::Collective => {
                    if eff.form.is_some() {
                        return bad("effective.form only applies to ladder = \"single\"");
                    }
                    Scenario::EffectiveThreeCollective(match eff.coupling.unwrap_or_default() {
                        Coupling::LargeN => CollectiveCoupling::LargeN,
                        Coupling::FiniteN => CollectiveCoupling::FiniteN,
                    })
                }
            }
        }
        ScenarioName::Sweep => return bad("sweep.scenario cannot itself be \"sweep\""),
    })
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig, ConfigError> {
        let inner_name = match (self.scenario, &self.sweep) {
            (ScenarioName::Sweep, Some(s)) => {
                if s.scenario == ScenarioName::OracleCompare {
                    return bad("sweep.scenario cannot be \"oracle-compare\"");
                }
                s.scenario
            }
            (ScenarioName::Sweep, None) => return bad("scenario \"sweep\" needs a [sweep] section"),
            (_, Some(_)) => return bad("[sweep] is only allowed with scenario = \"sweep\""),
            (name, None) => name,
        };
        if self.effective.is_some() && inner_name != ScenarioName::EffectiveThree {
            return bad("[effective] is only allowed with the effective-3lvl scenario");
        }
        let scenario = scenario_for(inner_name, self.effective.as_ref())?;

        let p = &self.params;
        let collective = scenario.ladder() == LadderKind::Collective;
        let n_atoms = match (p.n_atoms, collective) {
            (Some(n), true) => n,
            (None, true) => return bad(format!("params.n_atoms is required for scenario {}", inner_name.as_str())),
            (Some(n), false) if n != 1 => {
                return bad(format!("params.n_atoms must be 1 for scenario {}", inner_name.as_str()))
            }
            _ => 1,
        };
        if collective && n_atoms < 3 {
            return bad(format!("params.n_atoms must be at least 3 for collective scenarios, got {n_atoms}"));
        }
        if scenario == Scenario::FullEnsemble && n_atoms > DEFAULT_MAX_ATOMS {
            return bad(format!(
                "params.n_atoms = {n_atoms} exceeds the brute-force limit of {DEFAULT_MAX_ATOMS}"
            ));
        }

        let resonant = p.resonant.then(|| scenario.ladder());
        let (delta, big_delta) = match (p.delta, p.big_delta, p.delta1, p.delta2) {
            (None, None, Some(d1), Some(d2)) => {
                if resonant.is_some() {
                    return bad("params.resonant cannot be combined with delta1/delta2");
                }
                (0.5 * (d1 + d2), d1 - d2)
            }
            (_, _, Some(_), None) | (_, _, None, Some(_)) => return bad("params.delta1 and params.delta2 go together"),
            (Some(_), _, Some(_), Some(_)) | (_, Some(_), Some(_), Some(_)) => {
                return bad("give either delta/big_delta or delta1/delta2, not both")
            }
            (Some(_), Some(_), None, None) if resonant.is_some() => {
                return bad("params.big_delta cannot be set together with params.resonant")
            }
            (Some(d), Some(bd), None, None) => (d, bd),
            (Some(d), None, None, None) if resonant.is_some() => (d, 0.0),
            (Some(_), None, None, None) => return bad("missing field `big_delta` in params (or set resonant = true)"),
            (None, _, None, None) => return bad("missing field `delta` in params"),
        };
        let params = DriveParams::new(p.omega1, p.omega2, delta, big_delta, n_atoms)
            .map_err(|e| ConfigError(format!("invalid params: {e}")))?;

        let prop = &self.propagation;
        if prop.periods.is_some() && prop.t_max.is_some() {
            return bad("give either propagation.periods or propagation.t_max, not both");
        }
        let settings = RunSettings {
            periods: prop.periods.unwrap_or(DEFAULT_PERIODS),
            t_max: prop.t_max,
            n_steps: prop.n_steps.unwrap_or(DEFAULT_STEPS),
            method: match prop.method {
                Method::Eigendecomposition => PropagationMethod::Eigendecomposition,
                Method::ScaledExpm => PropagationMethod::ScaledExpm,
            },
        };
        if !(settings.periods.is_finite() && settings.periods > 0.0) {
            return bad("propagation.periods must be positive");
        }
        if settings.t_max.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
            return bad("propagation.t_max must be positive");
        }
        if settings.n_steps < 2 {
            return bad("propagation.n_steps must be at least 2");
        }

        let mut axes = Vec::new();
        if let Some(sweep) = &self.sweep {
            if sweep.axes.is_empty() {
                return bad("sweep.axes must list at least one axis");
            }
            for axis in &sweep.axes {
                let parsed: SweepAxis = axis.name.parse().map_err(|e| ConfigError(format!("{e}")))?;
                if axis.values.is_empty() {
                    return bad(format!("sweep axis {} has no values", axis.name));
                }
                if parsed == SweepAxis::BigDelta && resonant.is_some() {
                    return bad("cannot sweep big_delta with params.resonant set");
                }
                if axes.iter().any(|(a, _): &(SweepAxis, Vec<f64>)| *a == parsed) {
                    return bad(format!("sweep axis {} listed twice", axis.name));
                }
                axes.push((parsed, axis.values.clone()));
            }
        }

        Ok(RunConfig {
            name: self.scenario,
            scenario,
            params,
            resonant,
            settings,
            axes,
            out_dir: self.output.dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
            format: self.output.format,
        })
    }
}
