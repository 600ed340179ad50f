//! Command-line and config-file settings, merged into a validated [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::gaussian::NegativityConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    SingleFree,
    SingleHarmonic,
    BipartiteFree,
    BipartiteHarmonic,
}

impl Scenario {
    pub fn is_single(&self) -> bool {
        matches!(self, Self::SingleFree | Self::SingleHarmonic)
    }

    pub fn is_harmonic(&self) -> bool {
        matches!(self, Self::SingleHarmonic | Self::BipartiteHarmonic)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::SingleFree => "single-free",
            Self::SingleHarmonic => "single-harmonic",
            Self::BipartiteFree => "bipartite-free",
            Self::BipartiteHarmonic => "bipartite-harmonic",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, false).map_err(|_| format!("unknown scenario '{s}'"))
    }
}

/// A configuration problem; the binary exits with code 2.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Every key accepted in a config file; each mirrors a long flag.
pub const CONFIG_KEYS: &[&str] = &[
    "scenario",
    "s",
    "d",
    "gamma1",
    "gamma2",
    "temp1",
    "temp2",
    "mass",
    "hbar",
    "kb",
    "omega0",
    "tmax",
    "points",
    "convention",
    "out",
    "vary",
    "values",
    "tol",
];

/// Parameters that `--vary` may sweep.
pub const SWEEPABLE: &[&str] = &[
    "s", "d", "gamma1", "gamma2", "temp1", "temp2", "mass", "hbar", "kb", "omega0",
];

/// Unresolved settings: `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub scenario: Option<Scenario>,
    pub s: Option<f64>,
    pub d: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub temp1: Option<f64>,
    pub temp2: Option<f64>,
    pub mass: Option<f64>,
    pub hbar: Option<f64>,
    pub kb: Option<f64>,
    pub omega0: Option<f64>,
    pub tmax: Option<f64>,
    pub points: Option<usize>,
    pub convention: Option<NegativityConvention>,
    pub out: Option<PathBuf>,
    pub vary: Option<String>,
    pub values: Option<Vec<f64>>,
    pub tol: Option<f64>,
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| bad(format!("cannot parse value '{v}' for '{key}'")))
}

pub fn parse_values(v: &str) -> Result<Vec<f64>, ConfigError> {
    let vals = v
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_num::<f64>("values", x))
        .collect::<Result<Vec<_>, _>>()?;
    if vals.is_empty() {
        return Err(bad("values list is empty"));
    }
    Ok(vals)
}

impl Settings {
    /// Flat `key = value` lines; `#` starts a comment. Unknown and repeated keys are errors.
    pub fn parse_file_contents(text: &str) -> Result<Self, ConfigError> {
        let mut seen = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected 'key = value'", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !CONFIG_KEYS.contains(&k) {
                return Err(bad(format!("line {}: unknown key '{k}'", no + 1)));
            }
            if seen.insert(k.to_string(), v.to_string()).is_some() {
                return Err(bad(format!("line {}: key '{k}' given twice", no + 1)));
            }
        }
        let mut out = Settings::default();
        for (k, v) in &seen {
            out.set(k, v)?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        match key {
            "scenario" => self.scenario = Some(v.parse().map_err(bad)?),
            "s" => self.s = Some(parse_num(key, v)?),
            "d" => self.d = Some(parse_num(key, v)?),
            "gamma1" => self.gamma1 = Some(parse_num(key, v)?),
            "gamma2" => self.gamma2 = Some(parse_num(key, v)?),
            "temp1" => self.temp1 = Some(parse_num(key, v)?),
            "temp2" => self.temp2 = Some(parse_num(key, v)?),
            "mass" => self.mass = Some(parse_num(key, v)?),
            "hbar" => self.hbar = Some(parse_num(key, v)?),
            "kb" => self.kb = Some(parse_num(key, v)?),
            "omega0" => self.omega0 = Some(parse_num(key, v)?),
            "tmax" => self.tmax = Some(parse_num(key, v)?),
            "points" => self.points = Some(parse_num(key, v)?),
            "convention" => self.convention = Some(v.parse().map_err(|_| bad(format!("unknown convention '{v}'")))?),
            "out" => self.out = Some(PathBuf::from(v)),
            "vary" => self.vary = Some(v.to_string()),
            "values" => self.values = Some(parse_values(v)?),
            "tol" => self.tol = Some(parse_num(key, v)?),
            _ => return Err(bad(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// `self` wins wherever it is set.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            scenario: self.scenario.or(base.scenario),
            s: self.s.or(base.s),
            d: self.d.or(base.d),
            gamma1: self.gamma1.or(base.gamma1),
            gamma2: self.gamma2.or(base.gamma2),
            temp1: self.temp1.or(base.temp1),
            temp2: self.temp2.or(base.temp2),
            mass: self.mass.or(base.mass),
            hbar: self.hbar.or(base.hbar),
            kb: self.kb.or(base.kb),
            omega0: self.omega0.or(base.omega0),
            tmax: self.tmax.or(base.tmax),
            points: self.points.or(base.points),
            convention: self.convention.or(base.convention),
            out: self.out.or(base.out),
            vary: self.vary.or(base.vary),
            values: self.values.or(base.values),
            tol: self.tol.or(base.tol),
        }
    }

    /// Overrides one sweepable parameter.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Settings, ConfigError> {
        if !SWEEPABLE.contains(&name) {
            return Err(bad(format!(
                "cannot vary '{name}'; choose one of {}",
                SWEEPABLE.join(", ")
            )));
        }
        let mut out = self.clone();
        out.set(name, &format!("{value:e}"))?;
        Ok(out)
    }

    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let scenario = self.scenario.unwrap_or(Scenario::BipartiteFree);
        let gamma1 = self.gamma1.unwrap_or(defaults::GAMMA);
        let temp1 = self.temp1.unwrap_or(defaults::TEMPERATURE);
        let cfg = RunConfig {
            scenario,
            s: self.s.unwrap_or(defaults::S),
            d: self.d.unwrap_or(defaults::D),
            gamma1,
            gamma2: self.gamma2.unwrap_or(gamma1),
            temp1,
            temp2: self.temp2.unwrap_or(temp1),
            mass: self.mass.unwrap_or(1.0),
            hbar: self.hbar.unwrap_or(1.0),
            k: self.kb.unwrap_or(1.0),
            omega0: self.omega0.unwrap_or(0.0),
            t_max: self.tmax.unwrap_or(defaults::T_MAX),
            n_points: self.points.unwrap_or(defaults::POINTS),
            convention: self.convention.unwrap_or(NegativityConvention::Standard),
            out: self.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Defaults when neither a flag nor the config file sets a value.
pub mod defaults {
    pub const S: f64 = 1.0;
    pub const D: f64 = 2.0;
    pub const GAMMA: f64 = 1.0;
    pub const TEMPERATURE: f64 = 10.0;
    pub const T_MAX: f64 = 1.0;
    pub const POINTS: usize = 400;
    pub const TOL: f64 = 1e-6;
}

/// Fully resolved parameters for one run. `omega0` is the pair coupling frequency,
/// or the oscillator constant of `V = omega x^2 / 2` for `single-harmonic`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub s: f64,
    pub d: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub temp1: f64,
    pub temp2: f64,
    pub mass: f64,
    pub hbar: f64,
    pub k: f64,
    pub omega0: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub convention: NegativityConvention,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Settings::default().resolve().expect("defaults are valid")
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("s", self.s),
            ("d", self.d),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("temp1", self.temp1),
            ("temp2", self.temp2),
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("kb", self.k),
            ("tmax", self.t_max),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.omega0.is_finite() && self.omega0 >= 0.0) {
            return Err(bad(format!("omega0 must be >= 0, got {}", self.omega0)));
        }
        if self.n_points < 2 {
            return Err(bad(format!("points must be at least 2, got {}", self.n_points)));
        }
        if self.scenario.is_harmonic() && self.omega0 == 0.0 {
            return Err(bad(format!("{} needs omega0 > 0", self.scenario)));
        }
        if !self.scenario.is_harmonic() && self.omega0 != 0.0 {
            return Err(bad(format!("{} has no potential; omega0 must be 0", self.scenario)));
        }
        if self.scenario == Scenario::BipartiteHarmonic && (self.gamma1 != self.gamma2 || self.temp1 != self.temp2) {
            return Err(bad(
                "bipartite-harmonic needs identical baths: gamma1 = gamma2 and temp1 = temp2",
            ));
        }
        Ok(())
    }

    /// `n_points` equally spaced times on `[0, t_max]`.
    pub fn times(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n).map(|i| self.t_max * i as f64 / (n - 1) as f64).collect()
    }
}
