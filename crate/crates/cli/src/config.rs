//! Line-oriented `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! geometry.height = 0.5
//! geometry.nx = 64
//! method.name = tikhonov
//! truth.intervals = 0.2:0.4, 0.6:0.8
//! init.intervals = 0.1:0.9
//! output.snapshot_iters = 0, 100, 1000
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cauchy_ls_core::hj::HjParams;
use cauchy_ls_core::levelset::DEFAULT_ETA;
use cauchy_ls_core::operator::MAX_DENSE_CELLS;
use cauchy_ls_core::tikhonov::TikhonovParams;
use cauchy_ls_core::Grid;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }
    fn new(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Tikhonov,
    Hj,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Tikhonov => "tikhonov",
            Method::Hj => "hj",
        }
    }
}

pub type Intervals = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    pub data_refinement_ratio: usize,
    pub method: Method,
    pub alpha: f64,
    pub beta: f64,
    pub eps_cells: f64,
    pub eta: f64,
    pub tau: f64,
    pub dt: f64,
    pub max_iters: usize,
    pub target_error: Option<f64>,
    pub eps_clamp: f64,
    pub cfl_max: f64,
    pub truth: Intervals,
    pub init: Intervals,
    pub g1: f64,
    pub f: f64,
    pub noise_level: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub snapshot_iters: Vec<usize>,
}

const KEYS: &[&str] = &[
    "geometry.width",
    "geometry.height",
    "geometry.nx",
    "geometry.ny",
    "geometry.data_refinement_ratio",
    "method.name",
    "method.alpha",
    "method.beta",
    "method.eps_cells",
    "method.eta",
    "method.tau",
    "method.dt",
    "method.max_iters",
    "method.target_error",
    "method.eps_clamp",
    "method.cfl_max",
    "truth.intervals",
    "init.intervals",
    "data.g1",
    "data.f",
    "data.noise_level",
    "data.seed",
    "output.dir",
    "output.snapshot_iters",
];

impl Default for RunConfig {
    fn default() -> Self {
        let hj = HjParams::default();
        RunConfig {
            width: 1.0,
            height: 0.5,
            nx: 64,
            ny: 32,
            data_refinement_ratio: 2,
            method: Method::Tikhonov,
            alpha: 1e2,
            beta: 1e-3,
            eps_cells: 2.0,
            eta: DEFAULT_ETA,
            tau: 1.5,
            dt: hj.dt,
            max_iters: 5000,
            target_error: None,
            eps_clamp: hj.eps_clamp,
            cfl_max: hj.cfl_max,
            truth: Vec::new(),
            init: Vec::new(),
            g1: 0.0,
            f: 0.0,
            noise_level: 0.0,
            seed: 0,
            output_dir: PathBuf::from("out"),
            snapshot_iters: Vec::new(),
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn parse_number<T: FromStr>(key: &str, e: &Entry) -> Result<T, ConfigError> {
    e.value
        .parse()
        .map_err(|_| ConfigError::at(e.line, format!("`{key}` expects a number, got `{}`", e.value)))
}

fn parse_intervals(key: &str, e: &Entry) -> Result<Intervals, ConfigError> {
    let mut out = Vec::new();
    for item in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once(':')
            .ok_or_else(|| ConfigError::at(e.line, format!("`{key}`: interval `{item}` is not of the form a:b")))?;
        let a: f64 = a
            .trim()
            .parse()
            .map_err(|_| ConfigError::at(e.line, format!("`{key}`: bad endpoint in `{item}`")))?;
        let b: f64 = b
            .trim()
            .parse()
            .map_err(|_| ConfigError::at(e.line, format!("`{key}`: bad endpoint in `{item}`")))?;
        out.push((a, b));
    }
    Ok(out)
}

fn parse_list(key: &str, e: &Entry) -> Result<Vec<usize>, ConfigError> {
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| ConfigError::at(e.line, format!("`{key}`: `{s}` is not a nonnegative integer")))
        })
        .collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn tikhonov_params(&self, grid: &Grid) -> TikhonovParams {
        TikhonovParams {
            alpha: self.alpha,
            beta: self.beta,
            eps: self.eps_cells * grid.hx(),
            eta: self.eta,
            tau: self.tau,
            max_iters: self.max_iters,
            target_error: self.target_error,
            snapshot_iters: self.snapshot_iters.clone(),
        }
    }

    pub fn hj_params(&self) -> HjParams {
        HjParams {
            dt: self.dt,
            eps_clamp: self.eps_clamp,
            tau: self.tau,
            max_iters: self.max_iters,
            cfl_max: self.cfl_max,
            target_error: self.target_error,
            snapshot_iters: self.snapshot_iters.clone(),
        }
    }

    /// Checks the ranges the geometry and the spectral diagnostics need.
    pub fn validate_geometry(&self) -> Result<(), ConfigError> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(ConfigError::new("geometry.width must be positive"));
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            return Err(ConfigError::new("geometry.height must be positive"));
        }
        if self.nx < 4 || self.ny < 4 {
            return Err(ConfigError::new("geometry.nx and geometry.ny must be at least 4"));
        }
        if self.data_refinement_ratio < 1 {
            return Err(ConfigError::new("geometry.data_refinement_ratio must be at least 1"));
        }
        Ok(())
    }

    pub fn validate_svd(&self) -> Result<(), ConfigError> {
        self.validate_geometry()?;
        if self.nx > MAX_DENSE_CELLS {
            return Err(ConfigError::new(format!(
                "geometry.nx = {} exceeds {MAX_DENSE_CELLS}, the limit for dense operator assembly",
                self.nx
            )));
        }
        Ok(())
    }

    /// Full validation for a reconstruction run.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_geometry()?;
        let positive = |v: f64, key: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(format!("{key} must be positive")))
            }
        };
        positive(self.alpha, "method.alpha")?;
        positive(self.eps_cells, "method.eps_cells")?;
        positive(self.eta, "method.eta")?;
        positive(self.dt, "method.dt")?;
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(ConfigError::new("method.beta must be nonnegative"));
        }
        if self.max_iters < 1 {
            return Err(ConfigError::new("method.max_iters must be at least 1"));
        }
        if let Some(t) = self.target_error {
            positive(t, "method.target_error")?;
        }
        if !(self.eps_clamp > 0.0 && self.eps_clamp <= 1.0) {
            return Err(ConfigError::new("method.eps_clamp must lie in (0, 1]"));
        }
        if !(self.cfl_max > 0.0 && self.cfl_max <= 0.9) {
            return Err(ConfigError::new("method.cfl_max must lie in (0, 0.9]"));
        }
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(ConfigError::new("data.noise_level must be nonnegative"));
        }
        if self.noise_level > 0.0 && !(self.tau > 1.0) {
            return Err(ConfigError::new(format!(
                "method.tau = {} but the discrepancy principle requires tau > 1 when data.noise_level > 0",
                self.tau
            )));
        }
        if !self.g1.is_finite() || !self.f.is_finite() {
            return Err(ConfigError::new("data.g1 and data.f must be finite"));
        }
        self.check_intervals("truth.intervals", &self.truth)?;
        self.check_intervals("init.intervals", &self.init)
    }

    fn check_intervals(&self, key: &str, ivs: &Intervals) -> Result<(), ConfigError> {
        let mut last = f64::NEG_INFINITY;
        for &(a, b) in ivs {
            if !(a >= 0.0 && a < b && b <= self.width) {
                return Err(ConfigError::new(format!(
                    "{key}: interval {a}:{b} must satisfy 0 <= a < b <= width"
                )));
            }
            if a <= last {
                return Err(ConfigError::new(format!("{key}: intervals must be sorted and disjoint")));
            }
            last = b;
        }
        Ok(())
    }
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<&str, Entry> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim();
            let known = KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| ConfigError::at(line, format!("unknown key `{key}`")))?;
            let entry = Entry {
                line,
                value: value.trim().to_string(),
            };
            if entries.insert(known, entry).is_some() {
                return Err(ConfigError::at(line, format!("duplicate key `{key}`")));
            }
        }

        let mut cfg = RunConfig::default();
        let mut ny = None;
        for (&key, e) in &entries {
            match key {
                "geometry.width" => cfg.width = parse_number(key, e)?,
                "geometry.height" => cfg.height = parse_number(key, e)?,
                "geometry.nx" => cfg.nx = parse_number(key, e)?,
                "geometry.ny" => ny = Some(parse_number(key, e)?),
                "geometry.data_refinement_ratio" => cfg.data_refinement_ratio = parse_number(key, e)?,
                "method.name" => {
                    cfg.method = match e.value.as_str() {
                        "tikhonov" => Method::Tikhonov,
                        "hj" => Method::Hj,
                        other => {
                            return Err(ConfigError::at(
                                e.line,
                                format!("method.name must be `tikhonov` or `hj`, got `{other}`"),
                            ))
                        }
                    }
                }
                "method.alpha" => cfg.alpha = parse_number(key, e)?,
                "method.beta" => cfg.beta = parse_number(key, e)?,
                "method.eps_cells" => cfg.eps_cells = parse_number(key, e)?,
                "method.eta" => cfg.eta = parse_number(key, e)?,
                "method.tau" => cfg.tau = parse_number(key, e)?,
                "method.dt" => cfg.dt = parse_number(key, e)?,
                "method.max_iters" => cfg.max_iters = parse_number(key, e)?,
                "method.target_error" => cfg.target_error = Some(parse_number(key, e)?),
                "method.eps_clamp" => cfg.eps_clamp = parse_number(key, e)?,
                "method.cfl_max" => cfg.cfl_max = parse_number(key, e)?,
                "truth.intervals" => cfg.truth = parse_intervals(key, e)?,
                "init.intervals" => cfg.init = parse_intervals(key, e)?,
                "data.g1" => cfg.g1 = parse_number(key, e)?,
                "data.f" => cfg.f = parse_number(key, e)?,
                "data.noise_level" => cfg.noise_level = parse_number(key, e)?,
                "data.seed" => cfg.seed = parse_number(key, e)?,
                "output.dir" => cfg.output_dir = PathBuf::from(&e.value),
                "output.snapshot_iters" => cfg.snapshot_iters = parse_list(key, e)?,
                _ => unreachable!("key list and match arms agree"),
            }
        }
        cfg.ny = ny.unwrap_or_else(|| (cfg.nx as f64 * cfg.height / cfg.width).round() as usize);
        Ok(cfg)
    }
}

impl fmt::Display for RunConfig {
    /// Writes the resolved configuration in the same format it is read from.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ivs = |v: &Intervals| v.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(", ");
        writeln!(f, "geometry.width = {}", self.width)?;
        writeln!(f, "geometry.height = {}", self.height)?;
        writeln!(f, "geometry.nx = {}", self.nx)?;
        writeln!(f, "geometry.ny = {}", self.ny)?;
        writeln!(f, "geometry.data_refinement_ratio = {}", self.data_refinement_ratio)?;
        writeln!(f, "method.name = {}", self.method.as_str())?;
        writeln!(f, "method.alpha = {}", self.alpha)?;
        writeln!(f, "method.beta = {}", self.beta)?;
        writeln!(f, "method.eps_cells = {}", self.eps_cells)?;
        writeln!(f, "method.eta = {}", self.eta)?;
        writeln!(f, "method.tau = {}", self.tau)?;
        writeln!(f, "method.dt = {}", self.dt)?;
        writeln!(f, "method.max_iters = {}", self.max_iters)?;
        if let Some(t) = self.target_error {
            writeln!(f, "method.target_error = {t}")?;
        }
        writeln!(f, "method.eps_clamp = {}", self.eps_clamp)?;
        writeln!(f, "method.cfl_max = {}", self.cfl_max)?;
        writeln!(f, "truth.intervals = {}", ivs(&self.truth))?;
        writeln!(f, "init.intervals = {}", ivs(&self.init))?;
        writeln!(f, "data.g1 = {}", self.g1)?;
        writeln!(f, "data.f = {}", self.f)?;
        writeln!(f, "data.noise_level = {}", self.noise_level)?;
        writeln!(f, "data.seed = {}", self.seed)?;
        writeln!(f, "output.dir = {}", self.output_dir.display())?;
        let snaps: Vec<String> = self.snapshot_iters.iter().map(|k| k.to_string()).collect();
        writeln!(f, "output.snapshot_iters = {}", snaps.join(", "))
    }
}
