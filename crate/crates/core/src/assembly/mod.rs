//! Configuration and assembly of the coupled platform / float / turbine /
//! mooring model, plus the fixed-step integrator that drives it.

mod results;
mod system;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::aero::{ControllerGains, RotorTables, TurbineSpec, WindSpec};
use crate::error::{Error, Result};
use crate::hydro::{load_coefficients, DragModel, HydroCoefficients, Mat6};
use crate::mooring::{LineProps, MooringEnv, MooringLayout, MooringModel, MooringSystem};
use crate::synthetic::{FloatKind, PlatformKind};
use crate::waves::{SeaState, SpectrumGrid};

pub use results::{rms, rms_mean_removed, ChannelStats, TimeSeriesResult, WindowSums};
pub use system::{HybridSystem, StepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlatformType {
    Spar,
    SemiSub,
    Rm3Spar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurbineChoice {
    None,
    FiveMw,
    FifteenMw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloatChoice {
    None,
    Float1,
    Float2,
}

fn default_pto() -> f64 {
    1.2e6
}

fn default_rho() -> f64 {
    1025.0
}

fn default_g() -> f64 {
    9.81
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub name: String,
    pub platform: PlatformType,
    #[serde(default)]
    pub reaction_plate: bool,
    pub turbine: TurbineChoice,
    pub float: FloatChoice,
    /// N/(m/s)
    #[serde(default = "default_pto")]
    pub pto_damping: f64,
    pub water_depth: f64,
    /// Required for moored systems; no defaults are guessed for radii.
    #[serde(default)]
    pub mooring: Option<MooringLayout>,
    #[serde(default)]
    pub mooring_model: MooringModel,
    #[serde(default)]
    pub mooring_dt: Option<f64>,
    /// Coefficient files; the built-in generator is used when absent.
    #[serde(default)]
    pub platform_coefficients: Option<PathBuf>,
    #[serde(default)]
    pub float_coefficients: Option<PathBuf>,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_g")]
    pub g: f64,
}

impl SystemConfig {
    fn base(name: &str, platform: PlatformType, plate: bool, turbine: TurbineChoice, float: FloatChoice) -> Self {
        let kind = platform_kind(platform, turbine, float);
        let water_depth = match platform {
            PlatformType::Spar => 320.0,
            PlatformType::SemiSub => 200.0,
            PlatformType::Rm3Spar => 70.0,
        };
        Self {
            name: name.into(),
            platform,
            reaction_plate: plate,
            turbine,
            float,
            pto_damping: default_pto(),
            water_depth,
            mooring: Some(default_layout(kind)),
            mooring_model: MooringModel::LumpedMass,
            mooring_dt: None,
            platform_coefficients: None,
            float_coefficients: None,
            rho: default_rho(),
            g: default_g(),
        }
    }

    /// The eleven systems: standalone WEC, four standalone turbines and the
    /// six hybrids, in that order.
    pub fn catalogue() -> Vec<Self> {
        use FloatChoice as F;
        use PlatformType as P;
        use TurbineChoice as T;
        vec![
            Self::base("rm3_standalone", P::Rm3Spar, true, T::None, F::Float1),
            Self::base("fwt_5mw_spar", P::Spar, false, T::FiveMw, F::None),
            Self::base("fwt_5mw_semi", P::SemiSub, false, T::FiveMw, F::None),
            Self::base("fwt_15mw_spar", P::Spar, false, T::FifteenMw, F::None),
            Self::base("fwt_15mw_semi", P::SemiSub, false, T::FifteenMw, F::None),
            Self::base("hybrid_5mw_spar", P::Spar, false, T::FiveMw, F::Float1),
            Self::base("hybrid_5mw_spar_rp", P::Spar, true, T::FiveMw, F::Float1),
            Self::base("hybrid_5mw_semi", P::SemiSub, false, T::FiveMw, F::Float1),
            Self::base("hybrid_15mw_spar", P::Spar, false, T::FifteenMw, F::Float2),
            Self::base("hybrid_15mw_spar_rp", P::Spar, true, T::FifteenMw, F::Float2),
            Self::base("hybrid_15mw_semi", P::SemiSub, false, T::FifteenMw, F::Float2),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::catalogue().into_iter().find(|c| c.name == name)
    }

    /// Hybrid catalogue entry by 1-based row.
    pub fn hybrid(row: usize) -> Option<Self> {
        Self::catalogue().into_iter().filter(|c| c.float != FloatChoice::None && c.turbine != TurbineChoice::None).nth(row.checked_sub(1)?)
    }

    pub fn platform_kind(&self) -> PlatformKind {
        platform_kind(self.platform, self.turbine, self.float)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pto_damping >= 0.0) {
            return Err(Error::Config("pto_damping must be ≥ 0".into()));
        }
        if !(self.water_depth > 0.0 && self.rho > 0.0 && self.g > 0.0) {
            return Err(Error::Config("water_depth, rho and g must be positive".into()));
        }
        if self.reaction_plate && self.platform == PlatformType::SemiSub {
            return Err(Error::Config("reaction plates are only defined for spar platforms".into()));
        }
        if let Some(m) = &self.mooring {
            m.validate().map_err(|e| Error::Config(e.to_string()))?;
            if (m.anchor_depth - self.water_depth).abs() > 1e-6 {
                return Err(Error::Config(format!(
                    "anchor depth {} differs from water depth {}",
                    m.anchor_depth, self.water_depth
                )));
            }
        }
        if let Some(kind) = float_kind(self.float) {
            let col = self.platform_kind().center_column_diameter();
            if (kind.spec().inner_diameter - col).abs() > 1e-9 {
                log::warn!("{kind:?} inner diameter differs from the {col} m column it slides on");
            }
        }
        Ok(())
    }
}

fn platform_kind(platform: PlatformType, turbine: TurbineChoice, float: FloatChoice) -> PlatformKind {
    let large = turbine == TurbineChoice::FifteenMw || (turbine == TurbineChoice::None && float == FloatChoice::Float2);
    match (platform, large) {
        (PlatformType::Spar, false) => PlatformKind::Spar5,
        (PlatformType::Spar, true) => PlatformKind::Spar15,
        (PlatformType::SemiSub, false) => PlatformKind::Semi5,
        (PlatformType::SemiSub, true) => PlatformKind::Semi15,
        (PlatformType::Rm3Spar, _) => PlatformKind::Rm3Spar,
    }
}

fn float_kind(f: FloatChoice) -> Option<FloatKind> {
    match f {
        FloatChoice::None => None,
        FloatChoice::Float1 => Some(FloatKind::Float1),
        FloatChoice::Float2 => Some(FloatKind::Float2),
    }
}

/// Shipped mooring layouts. The larger platforms keep the line geometry of
/// the reference designs and move anchors out with the fairleads.
pub fn default_layout(kind: PlatformKind) -> MooringLayout {
    match kind {
        PlatformKind::Spar5 => MooringLayout::uniform(3, 180.0, 320.0, 70.0, 853.87, 5.2, LineProps::spar()),
        PlatformKind::Spar15 => MooringLayout::uniform(3, 180.0, 320.0, 70.0, 853.87 - 5.2 + 9.0, 9.0, LineProps::spar()),
        PlatformKind::Semi5 => MooringLayout::uniform(3, 180.0, 200.0, 14.0, 837.6, 40.868, LineProps::semi()),
        PlatformKind::Semi15 => {
            let fair = 40.868 * (87.0 / 50.0);
            MooringLayout::uniform(3, 180.0, 200.0, 14.0, 837.6 - 40.868 + fair, fair, LineProps::semi())
        }
        PlatformKind::Rm3Spar => {
            let line = LineProps { n_segments: 20, ..LineProps::rm3() };
            MooringLayout::uniform(3, 180.0, 70.0, 11.5, 265.0, 3.25, line)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RadiationMode {
    /// Memory convolution with the impulse response of B(ω).
    Convolution,
    /// Frequency-independent damping, F = −B·v.
    ConstantDamping(Mat6),
}

/// A resolved rigid body: coefficients, mass matrix about its reference
/// point on the still-water line, and viscous drag.
#[derive(Debug, Clone)]
pub struct BodyModel {
    pub coeffs: HydroCoefficients,
    pub mass_matrix: Mat6,
    pub total_mass: f64,
    pub cog_z: f64,
    pub drag: DragModel,
    pub radiation: RadiationMode,
}

#[derive(Debug, Clone, Copy)]
pub struct MassPart {
    pub mass: f64,
    pub z: f64,
    /// (Ixx, Iyy, Izz) about the part's own centre of mass.
    pub inertia: [f64; 3],
}

/// Rigid-body mass matrix about the origin for parts stacked on the z axis.
pub fn rigid_mass_matrix(parts: &[MassPart]) -> Mat6 {
    let mut m = [[0.0; 6]; 6];
    for p in parts {
        for k in 0..3 {
            m[k][k] += p.mass;
        }
        m[0][4] += p.mass * p.z;
        m[4][0] += p.mass * p.z;
        m[1][3] -= p.mass * p.z;
        m[3][1] -= p.mass * p.z;
        m[3][3] += p.inertia[0] + p.mass * p.z * p.z;
        m[4][4] += p.inertia[1] + p.mass * p.z * p.z;
        m[5][5] += p.inertia[2];
    }
    m
}

impl BodyModel {
    pub fn new(coeffs: HydroCoefficients, parts: &[MassPart], drag: DragModel) -> Self {
        let total_mass: f64 = parts.iter().map(|p| p.mass).sum();
        let cog_z = parts.iter().map(|p| p.mass * p.z).sum::<f64>() / total_mass;
        Self {
            mass_matrix: rigid_mass_matrix(parts),
            total_mass,
            cog_z,
            coeffs,
            drag,
            radiation: RadiationMode::Convolution,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TurbineModel {
    pub spec: TurbineSpec,
    pub tables: RotorTables,
    pub gains: ControllerGains,
}

impl TurbineModel {
    pub fn new(spec: TurbineSpec) -> Result<Self> {
        spec.validate()?;
        let tables = RotorTables::generic(&spec);
        let gains = ControllerGains::design_floating(&spec, &tables);
        Ok(Self { spec, tables, gains })
    }
}

#[derive(Debug, Clone)]
pub struct MooringSetup {
    pub layout: MooringLayout,
    pub env: MooringEnv,
    pub model: MooringModel,
    pub dt: Option<f64>,
}

/// Everything needed to integrate one system.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub name: String,
    pub platform: BodyModel,
    pub float: Option<BodyModel>,
    pub pto_damping: f64,
    pub turbine: Option<TurbineModel>,
    pub mooring: Option<MooringSetup>,
    /// Platform DOFs that move; locked DOFs stay at equilibrium.
    pub dof_mask: [bool; 6],
    pub rho: f64,
    pub g: f64,
}

fn turbine_spec(t: TurbineChoice) -> Option<TurbineSpec> {
    match t {
        TurbineChoice::None => None,
        TurbineChoice::FiveMw => Some(TurbineSpec::nrel_5mw()),
        TurbineChoice::FifteenMw => Some(TurbineSpec::iea_15mw()),
    }
}

fn turbine_parts(spec: &TurbineSpec) -> Vec<MassPart> {
    let tower_len = spec.hub_height - 10.0;
    let it = spec.tower_mass * tower_len * tower_len / 12.0;
    vec![
        MassPart { mass: spec.tower_mass, z: spec.tower_cg, inertia: [it, it, 0.0] },
        MassPart { mass: spec.rotor_nacelle_mass, z: spec.hub_height, inertia: [0.0; 3] },
    ]
}

/// Resolve a configuration into concrete body, turbine and mooring models.
/// Platform ballast is set so that buoyancy balances weight plus the static
/// mooring pull at the design draft.
pub fn resolve(config: &SystemConfig) -> Result<SystemModel> {
    config.validate()?;
    let kind = config.platform_kind();
    let geom = kind.geometry(config.reaction_plate || kind == PlatformKind::Rm3Spar);
    let p_coeffs = match &config.platform_coefficients {
        Some(path) => load_coefficients(path)?,
        None => kind.coefficients(config.reaction_plate)?,
    };
    let turbine = turbine_spec(config.turbine).map(TurbineModel::new).transpose()?;

    let mooring = config.mooring.as_ref().map(|layout| MooringSetup {
        layout: layout.clone(),
        env: MooringEnv { rho: config.rho, g: config.g, depth: config.water_depth },
        model: config.mooring_model,
        dt: config.mooring_dt,
    });
    let moor_down = match &mooring {
        Some(m) => {
            let sys = MooringSystem::new(m.layout.clone(), m.env, MooringModel::QuasiStatic, 0.01, None, &[0.0; 6])?;
            -sys.static_load(&[0.0; 6])?[2]
        }
        None => 0.0,
    };

    let mut parts = Vec::new();
    if let Some(t) = &turbine {
        parts.extend(turbine_parts(&t.spec));
    }
    let others: f64 = parts.iter().map(|p| p.mass).sum();
    let platform_mass = config.rho * p_coeffs.volume - others - moor_down / config.g;
    if platform_mass <= 0.0 {
        return Err(Error::Config(format!("{}: platform buoyancy cannot carry the topside and mooring", config.name)));
    }
    let (k2, kz2) = kind.gyration_sq();
    parts.push(MassPart {
        mass: platform_mass,
        z: p_coeffs.cog[2],
        inertia: [platform_mass * k2, platform_mass * k2, platform_mass * kz2],
    });
    let platform = BodyModel::new(p_coeffs, &parts, geom.drag_model(config.rho));

    let float = match float_kind(config.float) {
        None => None,
        Some(fk) => {
            let coeffs = match &config.float_coefficients {
                Some(path) => load_coefficients(path)?,
                None => fk.coefficients()?,
            };
            let mass = config.rho * coeffs.volume;
            let part = MassPart { mass, z: coeffs.cog[2], inertia: fk.inertia(config.rho) };
            Some(BodyModel::new(coeffs, &[part], fk.geometry().drag_model(config.rho)))
        }
    };

    Ok(SystemModel {
        name: config.name.clone(),
        platform,
        float,
        pto_damping: config.pto_damping,
        turbine,
        mooring,
        dof_mask: [true; 6],
        rho: config.rho,
        g: config.g,
    })
}

fn default_dt() -> f64 {
    0.01
}
fn default_irf_dt() -> f64 {
    0.05
}
fn default_irf_t_max() -> f64 {
    60.0
}
fn default_cutoff() -> f64 {
    200.0
}
fn default_record() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_irf_dt")]
    pub irf_dt: f64,
    #[serde(default = "default_irf_t_max")]
    pub irf_t_max: f64,
    #[serde(default = "default_cutoff")]
    pub transient_cutoff: f64,
    #[serde(default = "default_record")]
    pub record_interval: f64,
    #[serde(default)]
    pub spectrum: SpectrumGrid,
}

impl SimSettings {
    pub fn new(duration: f64) -> Self {
        Self {
            duration,
            dt: default_dt(),
            irf_dt: default_irf_dt(),
            irf_t_max: default_irf_t_max(),
            transient_cutoff: default_cutoff(),
            record_interval: default_record(),
            spectrum: SpectrumGrid::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.duration > 0.0) {
            return Err(Error::Config("dt and duration must be positive".into()));
        }
        if self.duration <= self.transient_cutoff {
            return Err(Error::Config(format!(
                "duration {} s does not exceed the transient cutoff {} s",
                self.duration, self.transient_cutoff
            )));
        }
        let ratio = self.irf_dt / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 {
            return Err(Error::Config("irf_dt must be an integer multiple of dt".into()));
        }
        let rec = self.record_interval / self.dt;
        if (rec - rec.round()).abs() > 1e-9 || rec < 1.0 {
            return Err(Error::Config("record_interval must be an integer multiple of dt".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub sea: SeaState,
    /// Hub-height wind; `None` means still air.
    #[serde(default)]
    pub wind: Option<WindSpec>,
}

impl Environment {
    pub fn calm() -> Self {
        Self { sea: SeaState::regular(0.0, 10.0), wind: None }
    }
}

/// Build, equilibrate and run one case.
pub fn simulate(config: &SystemConfig, env: &Environment, settings: &SimSettings) -> Result<TimeSeriesResult> {
    let model = resolve(config)?;
    let mut sys = HybridSystem::new(model, settings)?;
    sys.prepare(env)?;
    sys.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_has_eleven_systems_and_six_hybrids() {
        let all = SystemConfig::catalogue();
        assert_eq!(all.len(), 11);
        for row in 1..=6 {
            assert!(SystemConfig::hybrid(row).is_some());
        }
        assert!(SystemConfig::hybrid(7).is_none());
        assert_eq!(SystemConfig::hybrid(2).unwrap().name, "hybrid_5mw_spar_rp");
    }

    #[test]
    fn mass_matrix_about_waterline() {
        let m = rigid_mass_matrix(&[MassPart { mass: 2.0, z: -3.0, inertia: [5.0, 6.0, 7.0] }]);
        assert_eq!(m[0][4], -6.0);
        assert_eq!(m[1][3], 6.0);
        assert_eq!(m[3][3], 5.0 + 18.0);
        assert_eq!(m[4][4], 6.0 + 18.0);
    }

    #[test]
    fn spar_ballast_matches_reference_mass() {
        let cfg = SystemConfig::by_name("fwt_5mw_spar").unwrap();
        let model = resolve(&cfg).unwrap();
        let platform = model.platform.total_mass - 249_718.0 - 350_000.0;
        assert!((platform - 7.466e6).abs() / 7.466e6 < 0.01, "{platform}");
    }

    #[test]
    fn bad_configs_rejected() {
        let mut c = SystemConfig::by_name("hybrid_5mw_semi").unwrap();
        c.reaction_plate = true;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = SystemConfig::by_name("hybrid_5mw_spar").unwrap();
        c.pto_damping = -1.0;
        assert!(c.validate().is_err());
        let s = SimSettings { transient_cutoff: 500.0, ..SimSettings::new(100.0) };
        assert!(s.validate().is_err());
    }
}
