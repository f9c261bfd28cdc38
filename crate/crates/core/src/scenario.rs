//! Scenario files: a flat TOML table, one key per parameter.
//!
//! Every key and default is listed in the README. Unknown keys are
//! rejected, `format_version` and `seed` are mandatory.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{QstError, Result};
use crate::fidelity::Amplitudes;
use crate::model::{BathSpec, ChainSpec, CouplingModel, EnergyReference, SystemModel};
use crate::wick::C64;

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 271828;
pub const PRESETS: [&str; 6] = ["fig1a", "fig1b", "fig2", "fig3", "fig2-n10", "fig3-n10"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Exact,
    Weisskopf,
    ClosedForm,
    Compare,
}

impl FromStr for SolverKind {
    type Err = QstError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "weisskopf" => Ok(SolverKind::Weisskopf),
            "closed_form" => Ok(SolverKind::ClosedForm),
            "compare" => Ok(SolverKind::Compare),
            other => Err(QstError::config(
                "solver",
                format!("unknown solver `{other}` (exact, weisskopf, closed_form, compare)"),
            )),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Exact => "exact",
            SolverKind::Weisskopf => "weisskopf",
            SolverKind::ClosedForm => "closed_form",
            SolverKind::Compare => "compare",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingProfile {
    #[default]
    Gaussian,
    Uniform,
    Explicit,
}

/// Time values given directly, or in multiples of the transfer time `π/θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    #[default]
    Absolute,
    Transfer,
}

/// The file as written on disk. Every field but the version and the seed
/// is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: Option<u32>,
    pub seed: Option<u64>,

    pub n_sites: Option<usize>,
    pub theta: Option<f64>,

    pub m_sites: Option<usize>,
    pub bath_mean: Option<f64>,
    pub bath_std: Option<f64>,
    pub bath_energies: Option<Vec<f64>>,

    pub coupling: Option<CouplingProfile>,
    pub coupling_width: Option<f64>,
    pub coupling_strength: Option<f64>,
    pub coupling_matrix: Option<Vec<Vec<f64>>>,
    pub bath_offset: Option<i64>,

    pub energy_reference: Option<EnergyReference>,
    pub broadening: Option<f64>,
    pub solver: Option<SolverKind>,
    pub closed_form_rate: Option<f64>,

    pub amp0_re: Option<f64>,
    pub amp0_im: Option<f64>,
    pub amp1_re: Option<f64>,
    pub amp1_im: Option<f64>,
    pub phase_compensation: Option<bool>,

    pub time_unit: Option<TimeUnit>,
    pub t_start: Option<f64>,
    pub t_stop: Option<f64>,
    pub t_steps: Option<usize>,

    pub temperatures: Option<Vec<f64>>,
    pub temperature_start: Option<f64>,
    pub temperature_stop: Option<f64>,
    pub temperature_steps: Option<usize>,

    pub output: Option<PathBuf>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| QstError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| QstError::Parse(e.to_string()))
    }
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub chain: ChainSpec,
    pub bath: BathSpec,
    pub coupling: CouplingModel,
    pub bath_offset: i64,
    pub energy_reference: EnergyReference,
    pub broadening: f64,
    pub solver: SolverKind,
    pub closed_form_rate: Option<f64>,
    pub amplitudes: Amplitudes,
    pub phase_compensation: bool,
    pub times: Vec<f64>,
    pub temperatures: Vec<f64>,
    pub output: Option<PathBuf>,
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(QstError::config(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QstError::config(field, format!("must be finite, got {v}")))
    }
}

/// `steps` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    let span = stop - start;
    let last = (steps - 1) as f64;
    (0..steps).map(|k| start + span * k as f64 / last).collect()
}

impl Scenario {
    pub fn from_file(file: &ScenarioFile) -> Result<Self> {
        match file.format_version {
            Some(FORMAT_VERSION) => {}
            Some(v) => {
                return Err(QstError::config(
                    "format_version",
                    format!("unsupported version {v}, expected {FORMAT_VERSION}"),
                ))
            }
            None => return Err(QstError::config("format_version", "required")),
        }
        let seed = file
            .seed
            .ok_or_else(|| QstError::config("seed", "required; there is no default seed"))?;
        let n = file
            .n_sites
            .ok_or_else(|| QstError::config("n_sites", "required"))?;
        if n < 2 {
            return Err(QstError::config(
                "n_sites",
                format!("need at least 2 sites, got {n}"),
            ));
        }
        let theta = positive("theta", file.theta.unwrap_or(1.0))?;
        let chain = ChainSpec::new(n, theta)?;

        let m = file.m_sites.unwrap_or(10 * n);
        if m == 0 {
            return Err(QstError::config("m_sites", "need at least one bath site"));
        }
        let energy_std = file.bath_std.unwrap_or(theta);
        if !(energy_std >= 0.0 && energy_std.is_finite()) {
            return Err(QstError::config(
                "bath_std",
                format!("must be finite and nonnegative, got {energy_std}"),
            ));
        }
        if let Some(e) = &file.bath_energies {
            if e.len() != m {
                return Err(QstError::config(
                    "bath_energies",
                    format!("{} values for {m} bath sites", e.len()),
                ));
            }
            for w in e {
                finite("bath_energies", *w)?;
            }
        }
        let bath = BathSpec {
            m_sites: m,
            energy_mean: finite(
                "bath_mean",
                file.bath_mean.unwrap_or(theta * (n as f64 + 1.0) / 2.0),
            )?,
            energy_std,
            seed,
            energies: file.bath_energies.clone(),
        };

        let profile = file.coupling.unwrap_or_default();
        let coupling = match profile {
            CouplingProfile::Gaussian => CouplingModel::Gaussian {
                width: positive("coupling_width", file.coupling_width.unwrap_or(0.1))?,
            },
            CouplingProfile::Uniform => CouplingModel::Uniform {
                g0: finite(
                    "coupling_strength",
                    file.coupling_strength.ok_or_else(|| {
                        QstError::config("coupling_strength", "required for uniform coupling")
                    })?,
                )?,
            },
            CouplingProfile::Explicit => {
                let rows = file.coupling_matrix.as_ref().ok_or_else(|| {
                    QstError::config("coupling_matrix", "required for explicit coupling")
                })?;
                if rows.len() != n || rows.iter().any(|r| r.len() != m) {
                    return Err(QstError::config(
                        "coupling_matrix",
                        format!("expected {n} rows of {m} values"),
                    ));
                }
                let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                for v in &flat {
                    finite("coupling_matrix", *v)?;
                }
                CouplingModel::Explicit(DMatrix::from_row_slice(n, m, &flat))
            }
        };

        let amplitudes = Amplitudes::new(
            C64::new(file.amp0_re.unwrap_or(0.0), file.amp0_im.unwrap_or(0.0)),
            C64::new(file.amp1_re.unwrap_or(1.0), file.amp1_im.unwrap_or(0.0)),
        )?;

        let scale = match file.time_unit.unwrap_or_default() {
            TimeUnit::Absolute => 1.0,
            TimeUnit::Transfer => PI / theta,
        };
        let t_start = finite("t_start", file.t_start.unwrap_or(0.0))? * scale;
        let t_stop = match file.t_stop {
            Some(v) => finite("t_stop", v)? * scale,
            None => 6.0 * PI / theta,
        };
        let t_steps = file.t_steps.unwrap_or(121);
        if t_steps < 2 {
            return Err(QstError::config(
                "t_steps",
                format!("need at least 2 steps, got {t_steps}"),
            ));
        }
        if t_start < 0.0 || t_stop <= t_start {
            return Err(QstError::config(
                "t_stop",
                format!("need 0 ≤ t_start < t_stop, got [{t_start}, {t_stop}]"),
            ));
        }

        let range_given = file.temperature_start.is_some()
            || file.temperature_stop.is_some()
            || file.temperature_steps.is_some();
        let temperatures = match (&file.temperatures, range_given) {
            (Some(_), true) => {
                return Err(QstError::config(
                    "temperatures",
                    "give either a list or temperature_start/stop/steps, not both",
                ))
            }
            (Some(list), false) if list.is_empty() => vec![0.0],
            (Some(list), false) => list.clone(),
            (None, true) => {
                let (Some(a), Some(b), Some(k)) = (
                    file.temperature_start,
                    file.temperature_stop,
                    file.temperature_steps,
                ) else {
                    return Err(QstError::config(
                        "temperature_steps",
                        "temperature_start, temperature_stop and temperature_steps go together",
                    ));
                };
                if k < 2 {
                    return Err(QstError::config(
                        "temperature_steps",
                        format!("need at least 2 steps, got {k}"),
                    ));
                }
                if b <= a {
                    return Err(QstError::config(
                        "temperature_stop",
                        "must exceed temperature_start",
                    ));
                }
                linspace(a, b, k)
            }
            (None, false) => vec![0.0],
        };
        for temperature in &temperatures {
            if !(*temperature >= 0.0 && temperature.is_finite()) {
                return Err(QstError::config(
                    "temperatures",
                    format!("must be finite and nonnegative, got {temperature}"),
                ));
            }
        }

        let broadening = positive("broadening", file.broadening.unwrap_or(0.25 * theta))?;
        let closed_form_rate = match file.closed_form_rate {
            Some(g) if !(g >= 0.0 && g.is_finite()) => {
                return Err(QstError::config(
                    "closed_form_rate",
                    format!("must be nonnegative, got {g}"),
                ))
            }
            other => other,
        };

        Ok(Scenario {
            chain,
            bath,
            coupling,
            bath_offset: file.bath_offset.unwrap_or(0),
            energy_reference: file.energy_reference.unwrap_or_default(),
            broadening,
            solver: file.solver.unwrap_or(SolverKind::Exact),
            closed_form_rate,
            amplitudes,
            phase_compensation: file.phase_compensation.unwrap_or(false),
            times: linspace(t_start, t_stop, t_steps),
            temperatures,
            output: file.output.clone(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.bath.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.bath.seed = seed;
        self
    }

    pub fn model(&self) -> Result<SystemModel> {
        SystemModel::new(
            self.chain,
            self.bath.clone(),
            &self.coupling,
            self.energy_reference,
            self.bath_offset,
        )
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    Scenario::from_file(&ScenarioFile::parse(text)?)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

fn caption_base(n: usize, bath_mean: f64, bath_std: f64) -> ScenarioFile {
    ScenarioFile {
        format_version: Some(FORMAT_VERSION),
        seed: Some(DEFAULT_SEED),
        n_sites: Some(n),
        theta: Some(1.0),
        m_sites: Some(10 * n),
        bath_mean: Some(bath_mean),
        bath_std: Some(bath_std),
        coupling: Some(CouplingProfile::Gaussian),
        coupling_width: Some(0.1),
        bath_offset: Some(0),
        energy_reference: Some(EnergyReference::ModeGrid),
        broadening: Some(0.25),
        phase_compensation: Some(false),
        time_unit: Some(TimeUnit::Transfer),
        t_start: Some(0.0),
        t_stop: Some(6.0),
        ..ScenarioFile::default()
    }
}

fn with_amplitudes(mut file: ScenarioFile, amp0: f64, amp1: f64) -> ScenarioFile {
    file.amp0_re = Some(amp0);
    file.amp0_im = Some(0.0);
    file.amp1_re = Some(amp1);
    file.amp1_im = Some(0.0);
    file
}

fn transfer_curve(mut file: ScenarioFile) -> ScenarioFile {
    file = with_amplitudes(file, 0.0, 1.0);
    file.solver = Some(SolverKind::Compare);
    file.t_steps = Some(1201);
    file.temperatures = Some(vec![0.0]);
    file
}

fn temperature_scan(file: ScenarioFile, amp0: f64, amp1: f64) -> ScenarioFile {
    let mut file = with_amplitudes(file, amp0, amp1);
    file.solver = Some(SolverKind::Compare);
    file.t_steps = Some(121);
    file.temperature_start = Some(0.0);
    file.temperature_stop = Some(10.0);
    file.temperature_steps = Some(50);
    file
}

/// Shipped scenarios. N = 4 uses bath mean 2.5θ and std θ, N = 10 mean 5θ
/// and std 2.5θ, both with M = 10N and coupling width 0.1.
pub fn preset(name: &str) -> Result<ScenarioFile> {
    let small = || caption_base(4, 2.5, 1.0);
    let large = || caption_base(10, 5.0, 2.5);
    let half3 = 3f64.sqrt() / 2.0;
    Ok(match name {
        "fig1a" => transfer_curve(small()),
        "fig1b" => transfer_curve(large()),
        "fig2" => temperature_scan(small(), half3, 0.5),
        "fig3" => temperature_scan(small(), 0.5, half3),
        "fig2-n10" => temperature_scan(large(), half3, 0.5),
        "fig3-n10" => temperature_scan(large(), 0.5, half3),
        other => {
            return Err(QstError::config(
                "name",
                format!("unknown preset `{other}` ({})", PRESETS.join(", ")),
            ))
        }
    })
}
