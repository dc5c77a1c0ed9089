//! Declarative run configuration (TOML).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hybrid_core::assembly::{FloatChoice, SystemConfig, TurbineChoice};
use hybrid_core::metrics::{CostModel, SharingRules, DEFAULT_SYNERGY_TOLERANCE};
use hybrid_core::resource::ColumnMap;
use hybrid_core::waves::{SpectrumGrid, WaveKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub site: Option<SiteConfig>,
    /// Catalogue names.
    #[serde(default)]
    pub systems: Vec<String>,
    /// Fully specified systems, addressable by name like catalogue entries.
    #[serde(default)]
    pub custom_systems: Vec<SystemConfig>,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub economics: EconomicsConfig,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub buoy_file: PathBuf,
    #[serde(default = "ColumnMap::ndbc")]
    pub columns: ColumnMap,
    #[serde(default = "half")]
    pub h_width: f64,
    #[serde(default = "unit")]
    pub t_width: f64,
    #[serde(default = "unit")]
    pub record_hours: f64,
    #[serde(default = "default_sectors")]
    pub wind_sectors: usize,
    #[serde(default = "default_speed_edges")]
    pub wind_speed_edges: Vec<f64>,
    /// Merge factors (height, period) applied to the JPD before the matrix stage.
    #[serde(default = "default_merge")]
    pub matrix_merge: [usize; 2],
}

fn half() -> f64 {
    0.5
}
fn unit() -> f64 {
    1.0
}
fn default_sectors() -> usize {
    16
}
fn default_speed_edges() -> Vec<f64> {
    vec![0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 20.0, 25.0]
}
fn default_merge() -> [usize; 2] {
    [1, 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunCase {
    pub name: String,
    pub height: f64,
    pub period: f64,
    /// Hub-height mean wind; the turbine's rated speed when absent.
    #[serde(default)]
    pub wind: Option<f64>,
    #[serde(default)]
    pub kind: Option<WaveKind>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_cutoff")]
    pub transient_cutoff: f64,
    #[serde(default = "default_record")]
    pub record_interval: f64,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Wave kind for runs that do not set one, and for matrix cells.
    #[serde(default = "default_kind")]
    pub wave_kind: WaveKind,
    #[serde(default = "unit")]
    pub gamma: f64,
    #[serde(default)]
    pub turbulence_intensity: f64,
    #[serde(default)]
    pub spectrum: SpectrumGrid,
    #[serde(default = "default_runs")]
    pub runs: Vec<RunCase>,
}

fn default_duration() -> f64 {
    600.0
}
fn default_dt() -> f64 {
    0.01
}
fn default_cutoff() -> f64 {
    200.0
}
fn default_record() -> f64 {
    0.1
}
fn default_seeds() -> Vec<u64> {
    vec![1]
}
fn default_kind() -> WaveKind {
    WaveKind::Irregular
}

/// The three Humboldt conditions: most frequent, largest annualized, extreme.
pub fn default_runs() -> Vec<RunCase> {
    [("run1", 1.75, 6.5), ("run2", 3.75, 10.5), ("run3", 6.75, 14.5)]
        .into_iter()
        .map(|(name, height, period)| RunCase { name: name.into(), height, period, wind: None, kind: None })
        .collect()
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            duration: default_duration(),
            dt: default_dt(),
            transient_cutoff: default_cutoff(),
            record_interval: default_record(),
            seeds: default_seeds(),
            wave_kind: default_kind(),
            gamma: 1.0,
            turbulence_intensity: 0.0,
            spectrum: SpectrumGrid::default(),
            runs: default_runs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostEntry {
    /// USD
    pub capex: f64,
    /// USD/yr
    pub opex: f64,
}

/// A hybrid and the standalone systems its two devices are compared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridPair {
    pub system: String,
    pub wec: String,
    pub fwt: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharingChoice {
    Default,
    None,
    Custom(SharingRules),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomicsConfig {
    #[serde(default = "default_fcr")]
    pub fcr: f64,
    #[serde(default = "default_sharing")]
    pub sharing: SharingChoice,
    /// Standalone cost overrides by system name; presets fill the rest.
    #[serde(default)]
    pub costs: BTreeMap<String, CostEntry>,
    /// Defaults to the catalogue pairing for every hybrid in `systems`.
    #[serde(default)]
    pub hybrids: Vec<HybridPair>,
    #[serde(default = "default_tolerance")]
    pub synergy_tolerance: f64,
}

fn default_fcr() -> f64 {
    CostModel::DEFAULT_FCR
}
fn default_sharing() -> SharingChoice {
    SharingChoice::Default
}
fn default_tolerance() -> f64 {
    DEFAULT_SYNERGY_TOLERANCE
}

impl Default for EconomicsConfig {
    fn default() -> Self {
        Self {
            fcr: default_fcr(),
            sharing: default_sharing(),
            costs: BTreeMap::new(),
            hybrids: Vec::new(),
            synergy_tolerance: default_tolerance(),
        }
    }
}

impl EconomicsConfig {
    pub fn sharing_rules(&self) -> SharingRules {
        match &self.sharing {
            SharingChoice::Default => SharingRules::default(),
            SharingChoice::None => SharingRules::none(),
            SharingChoice::Custom(r) => r.clone(),
        }
    }

    /// Cost model of a standalone system: override, else preset.
    pub fn cost_of(&self, system: &SystemConfig) -> CliResult<CostModel> {
        let is_wec = system.turbine == TurbineChoice::None;
        let mut cost = match (self.costs.get(&system.name), CostModel::preset(&system.name)) {
            (Some(c), _) if is_wec => CostModel::wec(c.capex, c.opex),
            (Some(c), _) => CostModel::fwt(c.capex, c.opex),
            (None, Some(p)) => p,
            (None, None) => {
                return Err(CliError::Config(format!("no cost entry or preset for `{}`", system.name)))
            }
        };
        cost.fcr = self.fcr;
        cost.validate()?;
        Ok(cost)
    }
}

/// Standalone counterparts used for a catalogue hybrid.
pub fn default_pair(hybrid: &SystemConfig) -> Option<HybridPair> {
    if !is_hybrid(hybrid) {
        return None;
    }
    let size = match hybrid.turbine {
        TurbineChoice::FiveMw => "5mw",
        TurbineChoice::FifteenMw => "15mw",
        TurbineChoice::None => return None,
    };
    let platform = match hybrid.platform {
        hybrid_core::assembly::PlatformType::Spar => "spar",
        hybrid_core::assembly::PlatformType::SemiSub => "semi",
        hybrid_core::assembly::PlatformType::Rm3Spar => return None,
    };
    Some(HybridPair { system: hybrid.name.clone(), wec: "rm3_standalone".into(), fwt: format!("fwt_{size}_{platform}") })
}

pub fn is_hybrid(s: &SystemConfig) -> bool {
    s.float != FloatChoice::None && s.turbine != TurbineChoice::None
}

pub fn is_wec_only(s: &SystemConfig) -> bool {
    s.float != FloatChoice::None && s.turbine == TurbineChoice::None
}

pub fn is_fwt_only(s: &SystemConfig) -> bool {
    s.float == FloatChoice::None && s.turbine != TurbineChoice::None
}

/// Devices a system carries, in report order.
pub fn devices(s: &SystemConfig) -> Vec<&'static str> {
    let mut d = Vec::new();
    if s.float != FloatChoice::None {
        d.push("wec");
    }
    if s.turbine != TurbineChoice::None {
        d.push("fwt");
    }
    d
}

/// Command-line overrides of config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub duration: Option<f64>,
    pub seeds: Option<Vec<u64>>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Load, resolve relative paths against the file's directory, apply
    /// overrides and validate.
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        if let Some(site) = &mut self.site {
            fix(&mut site.buoy_file);
        }
        for s in &mut self.custom_systems {
            if let Some(p) = &mut s.platform_coefficients {
                fix(p);
            }
            if let Some(p) = &mut s.float_coefficients {
                fix(p);
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(d) = &o.output_dir {
            self.output_dir = d.clone();
        }
        if let Some(d) = o.duration {
            self.simulation.duration = d;
        }
        if let Some(s) = &o.seeds {
            self.simulation.seeds = s.clone();
        }
    }

    pub fn system(&self, name: &str) -> CliResult<SystemConfig> {
        self.custom_systems
            .iter()
            .find(|s| s.name == name)
            .cloned()
            .or_else(|| SystemConfig::by_name(name))
            .ok_or_else(|| CliError::Config(format!("unknown system `{name}`")))
    }

    /// Every system named in `systems`, resolved, in config order.
    pub fn selected_systems(&self) -> CliResult<Vec<SystemConfig>> {
        self.systems.iter().map(|n| self.system(n)).collect()
    }

    /// Hybrid pairings: explicit ones, else catalogue defaults for each hybrid listed.
    pub fn hybrid_pairs(&self) -> CliResult<Vec<HybridPair>> {
        if !self.economics.hybrids.is_empty() {
            return Ok(self.economics.hybrids.clone());
        }
        let mut out = Vec::new();
        for s in self.selected_systems()? {
            if is_hybrid(&s) {
                out.push(default_pair(&s).ok_or_else(|| {
                    CliError::Config(format!("hybrid `{}` needs an explicit [[economics.hybrids]] pairing", s.name))
                })?);
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> CliResult<()> {
        if let Some(site) = &self.site {
            if !site.buoy_file.is_file() {
                return Err(CliError::Config(format!("buoy file {} does not exist", site.buoy_file.display())));
            }
            if !(site.h_width > 0.0 && site.t_width > 0.0 && site.record_hours > 0.0) {
                return Err(CliError::Config("site bin widths and record_hours must be positive".into()));
            }
            if site.matrix_merge.contains(&0) {
                return Err(CliError::Config("matrix_merge factors must be ≥ 1".into()));
            }
        }
        for s in &self.custom_systems {
            if SystemConfig::by_name(&s.name).is_some() {
                return Err(CliError::Config(format!("custom system `{}` shadows a catalogue name", s.name)));
            }
            for p in [&s.platform_coefficients, &s.float_coefficients].into_iter().flatten() {
                if !p.is_file() {
                    return Err(CliError::Config(format!("coefficient file {} does not exist", p.display())));
                }
            }
        }
        for s in self.selected_systems()? {
            s.validate()?;
        }
        let sim = &self.simulation;
        if sim.seeds.is_empty() {
            return Err(CliError::Config("simulation.seeds must not be empty".into()));
        }
        let mut names: Vec<&str> = sim.runs.iter().map(|r| r.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("run names must be unique".into()));
        }
        self.settings().validate()?;
        if !(self.economics.fcr > 0.0) {
            return Err(CliError::Config("economics.fcr must be positive".into()));
        }
        self.economics.sharing_rules().validate()?;
        for pair in self.hybrid_pairs()? {
            let h = self.system(&pair.system)?;
            let w = self.system(&pair.wec)?;
            let f = self.system(&pair.fwt)?;
            if !is_hybrid(&h) {
                return Err(CliError::Config(format!("`{}` is not a hybrid (needs a float and a turbine)", h.name)));
            }
            if !is_wec_only(&w) {
                return Err(CliError::Config(format!("`{}` is not a standalone WEC", w.name)));
            }
            if !is_fwt_only(&f) {
                return Err(CliError::Config(format!("`{}` is not a standalone turbine", f.name)));
            }
            if h.turbine != f.turbine {
                return Err(CliError::Config(format!("`{}` and `{}` carry different turbines", h.name, f.name)));
            }
        }
        Ok(())
    }

    pub fn settings(&self) -> hybrid_core::assembly::SimSettings {
        let s = &self.simulation;
        hybrid_core::assembly::SimSettings {
            dt: s.dt,
            transient_cutoff: s.transient_cutoff,
            record_interval: s.record_interval,
            spectrum: s.spectrum,
            ..hybrid_core::assembly::SimSettings::new(s.duration)
        }
    }
}
