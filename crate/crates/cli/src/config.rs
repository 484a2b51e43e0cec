//! Experiment configuration: INI-style `key = value` files with sections,
//! overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;
use swe_core::experiments::{InitialCondition, MeshSpec, VortexShape};
use swe_core::ElementFamily;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Balance,
    Conservation,
    Vortex,
    Custom,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Balance => "balance",
            Self::Conservation => "conservation",
            Self::Vortex => "vortex",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "balance" => Ok(Self::Balance),
            "conservation" => Ok(Self::Conservation),
            "vortex" => Ok(Self::Vortex),
            "custom" | "run" => Ok(Self::Custom),
            other => Err(CliError::config(format!("unknown experiment {other:?}"))),
        }
    }
}

/// Fully resolved settings of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub family: ElementFamily,
    pub meshes: Vec<MeshSpec>,
    pub initial: InitialCondition,
    pub f: f64,
    pub g: f64,
    /// Step sizes; only the conservation study uses more than one.
    pub dts: Vec<f64>,
    pub t_end: f64,
    pub apvm: bool,
    pub tau: Option<f64>,
    pub sample_every: usize,
    pub snapshots: Vec<f64>,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            family: ElementFamily::Bdm1,
            meshes: vec![MeshSpec::Structured(16)],
            initial: InitialCondition::Conservation,
            f: 5.0,
            g: 5.0,
            dts: vec![1e-3],
            t_end: 0.1,
            apvm: false,
            tau: None,
            sample_every: 10,
            snapshots: Vec::new(),
            out: PathBuf::from(format!("out/{experiment}")),
        };
        match experiment {
            Experiment::Balance => Self {
                family: ElementFamily::Rt0,
                meshes: [8, 16, 32].map(MeshSpec::Structured).to_vec(),
                initial: InitialCondition::Balance,
                f: 10.0,
                g: 10.0,
                dts: vec![5e-4],
                t_end: 1.0,
                sample_every: 100,
                ..base
            },
            Experiment::Conservation => Self {
                family: ElementFamily::Rt0,
                dts: vec![2e-3, 1e-3, 5e-4, 2.5e-4],
                t_end: 1.001,
                sample_every: 100,
                ..base
            },
            Experiment::Vortex => Self {
                initial: InitialCondition::Vortex(VortexShape::default()),
                dts: vec![5e-3],
                t_end: 8.0,
                sample_every: 20,
                snapshots: vec![0.0, 8.0, 16.0, 24.0, 32.0, 40.0, 48.0, 56.0],
                ..base
            },
            Experiment::Custom => base,
        }
    }

    /// Defaults, then the file (if any), then the flags.
    pub fn resolve(
        experiment: Experiment,
        file: Option<&Path>,
        flags: &Overrides,
    ) -> CliResult<Self> {
        let mut cfg = Self::defaults(experiment);
        if let Some(path) = file {
            let ini = Ini::load_from_file(path).map_err(|e| CliError::Config {
                message: format!("{}: {e}", path.display()),
            })?;
            cfg.apply_ini(&ini)?;
        }
        cfg.apply_overrides(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dt(&self) -> f64 {
        self.dts[0]
    }

    fn apply_ini(&mut self, ini: &Ini) -> CliResult<()> {
        for (section, props) in ini.iter() {
            if section == Some(MANIFEST_SECTION) {
                continue;
            }
            for (key, value) in props.iter() {
                let expected = section_of(key)
                    .ok_or_else(|| CliError::config(format!("unknown key {key:?}")))?;
                if let Some(s) = section {
                    if s != expected {
                        return Err(CliError::config(format!(
                            "key {key:?} belongs in section [{expected}], found in [{s}]"
                        )));
                    }
                }
                self.set(key, value)?;
            }
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "experiment" => {
                let e: Experiment = value.parse()?;
                if e != self.experiment {
                    return Err(CliError::config(format!(
                        "file configures experiment {e}, but {} was requested",
                        self.experiment
                    )));
                }
            }
            "element" => self.family = value.parse()?,
            "initial" => self.initial = value.parse()?,
            "mesh" => self.meshes = parse_list(key, value)?,
            "f" => self.f = parse_num(key, value)?,
            "g" => self.g = parse_num(key, value)?,
            "apvm" => self.apvm = parse_bool(key, value)?,
            "tau" => {
                self.tau = match value.trim() {
                    "" | "auto" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            "dt" => self.dts = parse_list(key, value)?,
            "t_end" => self.t_end = parse_num(key, value)?,
            "sample_every" => self.sample_every = parse_num(key, value)?,
            "snapshots" => self.snapshots = parse_list(key, value)?,
            "dir" => self.out = PathBuf::from(value.trim()),
            _ => return Err(CliError::config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    fn apply_overrides(&mut self, o: &Overrides) -> CliResult<()> {
        if let Some(v) = &o.element {
            self.family = v.parse()?;
        }
        if !o.meshes.is_empty() {
            self.meshes = o
                .meshes
                .iter()
                .map(|m| m.parse().map_err(CliError::from))
                .collect::<CliResult<_>>()?;
        }
        if let Some(v) = &o.initial {
            self.initial = v.parse()?;
        }
        if let Some(v) = &o.dt {
            self.dts = parse_list("dt", v)?;
        }
        if let Some(v) = o.t_end {
            self.t_end = v;
        }
        if o.apvm {
            self.apvm = true;
        }
        if let Some(v) = o.tau {
            self.tau = Some(v);
        }
        if let Some(v) = o.f {
            self.f = v;
        }
        if let Some(v) = o.g {
            self.g = v;
        }
        if let Some(v) = o.sample_every {
            self.sample_every = v;
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        let finite = [("f", self.f), ("g", self.g), ("t_end", self.t_end)];
        for (k, v) in finite {
            if !v.is_finite() {
                return Err(CliError::config(format!("{k} must be finite, got {v}")));
            }
        }
        if !(self.g > 0.0) {
            return Err(CliError::config(format!(
                "g must be positive, got {}",
                self.g
            )));
        }
        if self.t_end < 0.0 {
            return Err(CliError::config(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.dts.is_empty() || self.dts.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(CliError::config(format!(
                "dt must be a list of positive numbers, got {:?}",
                self.dts
            )));
        }
        if let Some(t) = self.tau {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::config(format!("tau must be >= 0, got {t}")));
            }
        }
        if self.sample_every == 0 {
            return Err(CliError::config("sample_every must be >= 1"));
        }
        if self.meshes.is_empty() {
            return Err(CliError::config("no mesh given"));
        }
        for m in &self.meshes {
            if let MeshSpec::Msh(p) = m {
                if !p.is_file() {
                    return Err(CliError::config(format!(
                        "mesh file {} does not exist",
                        p.display()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The configuration as an INI document that [`ExperimentConfig::resolve`]
    /// reads back to the same value.
    pub fn to_ini(&self) -> Ini {
        let mut ini = Ini::new();
        let join = |v: &[String]| v.join(", ");
        ini.with_section(Some("experiment"))
            .set("experiment", self.experiment.name())
            .set("element", self.family.name())
            .set("initial", self.initial.name());
        ini.with_section(Some("mesh")).set(
            "mesh",
            join(
                &self
                    .meshes
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>(),
            ),
        );
        ini.with_section(Some("physics"))
            .set("f", fmt_f64(self.f))
            .set("g", fmt_f64(self.g))
            .set("apvm", self.apvm.to_string())
            .set(
                "tau",
                self.tau.map(fmt_f64).unwrap_or_else(|| "auto".into()),
            );
        ini.with_section(Some("time"))
            .set(
                "dt",
                join(&self.dts.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>()),
            )
            .set("t_end", fmt_f64(self.t_end))
            .set("sample_every", self.sample_every.to_string())
            .set(
                "snapshots",
                join(
                    &self
                        .snapshots
                        .iter()
                        .map(|&v| fmt_f64(v))
                        .collect::<Vec<_>>(),
                ),
            );
        ini.with_section(Some("output"))
            .set("dir", self.out.display().to_string());
        ini
    }
}

/// Section header of the informational block written into manifests.
pub const MANIFEST_SECTION: &str = "manifest";

fn section_of(key: &str) -> Option<&'static str> {
    Some(match key {
        "experiment" | "element" | "initial" => "experiment",
        "mesh" => "mesh",
        "f" | "g" | "apvm" | "tau" => "physics",
        "dt" | "t_end" | "sample_every" | "snapshots" => "time",
        "dir" => "output",
        _ => return None,
    })
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.trim()
        .parse()
        .map_err(|_| CliError::config(format!("{key}: cannot parse {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(CliError::config(format!(
            "{key}: expected a boolean, got {v:?}"
        ))),
    }
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> CliResult<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

/// Values given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub element: Option<String>,
    pub meshes: Vec<String>,
    pub initial: Option<String>,
    /// Comma-separated list.
    pub dt: Option<String>,
    pub t_end: Option<f64>,
    pub apvm: bool,
    pub tau: Option<f64>,
    pub f: Option<f64>,
    pub g: Option<f64>,
    pub sample_every: Option<usize>,
    pub out: Option<PathBuf>,
}
