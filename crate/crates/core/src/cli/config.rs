//! TOML run configuration with `--section.key=value` overrides.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::evolution::{SimParams, TimeStep};
use crate::spectral::{Grid, DEFAULT_DEALIAS};
use crate::state::{gen_crest_smoothed, gen_wave, mollify_state, CrestSpec, SurfaceState};

use super::checkpoint;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub initial_data: InitialData,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub study: StudyConfig,
    #[serde(default)]
    pub validate: ValidateConfig,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L", default = "two_pi")]
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 256,
            length: two_pi(),
        }
    }
}

fn two_pi() -> f64 {
    2.0 * PI
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum DtSetting {
    Value(f64),
    Word(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub sigma: f64,
    pub gravity: u8,
    pub delta: f64,
    pub eps_visc: f64,
    pub dt: DtSetting,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dealias: f64,
    pub cfl: f64,
    pub output_every: usize,
    pub blowup_ceiling: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        let p = SimParams::default();
        Self {
            sigma: p.sigma,
            gravity: 1,
            delta: p.delta,
            eps_visc: p.eps_visc,
            dt: DtSetting::Word("auto".into()),
            t_final: p.t_final,
            dealias: DEFAULT_DEALIAS,
            cfl: p.cfl,
            output_every: p.output_every,
            blowup_ceiling: p.blowup_ceiling,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Flat,
    Wave,
    Crest,
    Checkpoint,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Flat => "flat",
            Kind::Wave => "wave",
            Kind::Crest => "crest",
            Kind::Checkpoint => "checkpoint",
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default)]
    pub kind: Kind,
    #[serde(rename = "A")]
    pub amplitude: Option<f64>,
    pub k: Option<u32>,
    pub nu: Option<f64>,
    pub eta: Option<f64>,
    pub alpha0: Option<f64>,
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub mollify_eps: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub dir: PathBuf,
    pub energy_csv: bool,
    pub checkpoints: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            energy_csv: true,
            checkpoints: true,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    /// Poisson smoothing depths for `crest_scaling`.
    pub eps: Vec<f64>,
    /// Step sizes for `convergence`.
    pub dt: Vec<f64>,
    /// Mollifier widths for `mollifier_delta`; each is paired with half itself.
    pub delta: Vec<f64>,
    /// Integer factors for `scale_symmetry`.
    pub lambda: Vec<u32>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            eps: vec![0.04, 0.02, 0.01, 0.005],
            dt: vec![0.02, 0.01, 0.005],
            delta: vec![0.08, 0.04, 0.02],
            lambda: vec![2],
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    /// Swap in a deliberately perturbed operator, to check that the suite fails.
    pub corrupt: Option<String>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Applies `--section.key=value` (or `section.key=value`) to a parsed table.
fn apply_override(table: &mut toml::Table, raw: &str) -> Result<()> {
    let body = raw.trim_start_matches('-');
    let (path, value) = body
        .split_once('=')
        .ok_or_else(|| config_err(format!("override `{raw}` must look like --section.key=value")))?;
    let (section, key) = path
        .split_once('.')
        .ok_or_else(|| config_err(format!("override `{raw}` must name section.key")))?;
    let value = match format!("v = {value}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(value.to_string()),
    };
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(inner) = entry else {
        return Err(config_err(format!("`{section}` is not a section")));
    };
    inner.insert(key.to_string(), value);
    Ok(())
}

impl Config {
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            config_err(e.message().to_string())
        })?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let config: Config = table
            .try_into()
            .map_err(|e: toml::de::Error| config_err(e.message().to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, overrides)
    }

    fn check(&self) -> Result<()> {
        self.make_grid()?;
        self.sim_params(true)?.validate()?;
        if self.params.gravity > 1 {
            return Err(config_err(format!(
                "params.gravity must be 0 or 1, got {}",
                self.params.gravity
            )));
        }
        self.check_initial_data()
    }

    fn check_initial_data(&self) -> Result<()> {
        let d = &self.initial_data;
        let present: [(&str, bool); 6] = [
            ("A", d.amplitude.is_some()),
            ("k", d.k.is_some()),
            ("nu", d.nu.is_some()),
            ("eta", d.eta.is_some()),
            ("alpha0", d.alpha0.is_some()),
            ("path", d.path.is_some()),
        ];
        let (required, allowed): (&[&str], &[&str]) = match d.kind {
            Kind::Flat => (&[], &[]),
            Kind::Wave => (&["A", "k"], &["A", "k"]),
            Kind::Crest => (&["nu"], &["nu", "eta", "alpha0"]),
            Kind::Checkpoint => (&["path"], &["path"]),
        };
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                return Err(config_err(format!(
                    "initial_data: field `{name}` does not apply to kind `{}`",
                    d.kind.name()
                )));
            }
            if !is_set && required.contains(&name) {
                return Err(config_err(format!(
                    "initial_data: missing field `{name}` for kind `{}`",
                    d.kind.name()
                )));
            }
        }
        if !(d.mollify_eps >= 0.0 && d.mollify_eps.is_finite()) {
            return Err(config_err("initial_data.mollify_eps must be >= 0"));
        }
        Ok(())
    }

    pub fn gravity(&self) -> bool {
        self.params.gravity == 1
    }

    pub fn make_grid(&self) -> Result<Arc<Grid>> {
        Grid::with_dealias(self.grid.n, self.grid.length, self.params.dealias)
    }

    pub fn sim_params(&self, reports: bool) -> Result<SimParams> {
        let p = &self.params;
        let dt = match &p.dt {
            DtSetting::Value(x) => TimeStep::Fixed(*x),
            DtSetting::Word(w) if w == "auto" => TimeStep::Auto,
            DtSetting::Word(w) => {
                return Err(config_err(format!("params.dt must be \"auto\" or a number, got `{w}`")))
            }
        };
        Ok(SimParams {
            sigma: p.sigma,
            gravity: p.gravity == 1,
            delta: p.delta,
            eps_visc: p.eps_visc,
            dt,
            t_final: p.t_final,
            cfl: p.cfl,
            output_every: p.output_every,
            blowup_ceiling: p.blowup_ceiling,
            reports,
        })
    }

    pub fn crest_spec(&self) -> Result<CrestSpec> {
        let d = &self.initial_data;
        if d.kind != Kind::Crest {
            return Err(config_err("initial_data.kind must be `crest`"));
        }
        Ok(CrestSpec {
            nu: d.nu.ok_or_else(|| config_err("initial_data: missing field `nu`"))?,
            eta: d.eta.unwrap_or(0.0),
            alpha0: d.alpha0.unwrap_or(0.0),
        })
    }

    /// Builds the configured initial state, smoothing included.
    pub fn initial_state(&self) -> Result<SurfaceState> {
        let grid = self.make_grid()?;
        let d = &self.initial_data;
        let eps = d.mollify_eps;
        match d.kind {
            Kind::Flat => Ok(SurfaceState::flat(&grid)),
            Kind::Wave => {
                let s = gen_wave(d.amplitude.unwrap_or(0.0), d.k.unwrap_or(1), &grid)?;
                mollify_state(&s, eps)
            }
            // The crest family is closed under smoothing, which also admits eta = 0.
            Kind::Crest => gen_crest_smoothed(&self.crest_spec()?, eps, &grid),
            Kind::Checkpoint => {
                let path = d.path.as_ref().expect("checked");
                let cp = checkpoint::read(path, self.params.dealias)?;
                if !cp.state.grid().same_as(&grid) {
                    return Err(config_err(format!(
                        "checkpoint grid (N={}, L={}) differs from [grid] (N={}, L={})",
                        cp.state.grid().len(),
                        cp.state.grid().length(),
                        grid.len(),
                        grid.length()
                    )));
                }
                mollify_state(&cp.state, eps)
            }
        }
    }
}
