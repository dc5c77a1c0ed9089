//! Rotor aerodynamics, generator control and single-point turbulent wind.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RHO_AIR: f64 = 1.225;

fn rpm_to_rad(rpm: f64) -> f64 {
    rpm * 2.0 * PI / 60.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurbineSpec {
    pub name: String,
    /// W
    pub rating: f64,
    pub rotor_diameter: f64,
    pub hub_height: f64,
    pub cut_in: f64,
    pub rated_wind: f64,
    pub cut_out: f64,
    pub cut_in_rpm: f64,
    pub rated_rpm: f64,
    pub rated_tip_speed: f64,
    /// Rotor plus generator inertia referred to the low-speed shaft, kg·m².
    pub drivetrain_inertia: f64,
    pub rotor_nacelle_mass: f64,
    pub tower_mass: f64,
    /// Tower centre of mass above the still-water line, m.
    pub tower_cg: f64,
    pub parked_ct: f64,
    /// Maximum blade pitch, rad.
    pub max_pitch: f64,
    /// Blade pitch rate limit, rad/s.
    pub max_pitch_rate: f64,
}

impl TurbineSpec {
    pub fn nrel_5mw() -> Self {
        Self {
            name: "NREL 5 MW".into(),
            rating: 5.0e6,
            rotor_diameter: 126.0,
            hub_height: 90.0,
            cut_in: 3.0,
            rated_wind: 11.4,
            cut_out: 25.0,
            cut_in_rpm: 6.9,
            rated_rpm: 12.1,
            rated_tip_speed: 80.0,
            drivetrain_inertia: 4.34e7,
            rotor_nacelle_mass: 350_000.0,
            tower_mass: 249_718.0,
            tower_cg: 43.4,
            parked_ct: 0.05,
            max_pitch: 45f64.to_radians(),
            max_pitch_rate: 8f64.to_radians(),
        }
    }

    pub fn iea_15mw() -> Self {
        Self {
            name: "IEA 15 MW".into(),
            rating: 15.0e6,
            rotor_diameter: 240.0,
            hub_height: 150.0,
            cut_in: 3.0,
            rated_wind: 10.6,
            cut_out: 25.0,
            cut_in_rpm: 5.0,
            rated_rpm: 7.56,
            rated_tip_speed: 95.0,
            drivetrain_inertia: 3.1e8,
            rotor_nacelle_mass: 1_017_000.0,
            tower_mass: 1_263_000.0,
            tower_cg: 56.0,
            parked_ct: 0.05,
            max_pitch: 45f64.to_radians(),
            max_pitch_rate: 2f64.to_radians(),
        }
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.rotor_diameter
    }

    pub fn swept_area(&self) -> f64 {
        PI * self.radius().powi(2)
    }

    pub fn rated_omega(&self) -> f64 {
        rpm_to_rad(self.rated_rpm)
    }

    /// Design tip-speed ratio, rated tip speed over rated wind.
    pub fn design_tsr(&self) -> f64 {
        self.rated_tip_speed / self.rated_wind
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cut_in < self.rated_wind && self.rated_wind < self.cut_out) {
            return Err(Error::validation("turbine", "need cut_in < rated_wind < cut_out"));
        }
        if !(self.rating > 0.0 && self.rotor_diameter > 0.0 && self.drivetrain_inertia > 0.0) {
            return Err(Error::validation("turbine", "rating, diameter and inertia must be positive"));
        }
        let tip = self.rated_omega() * self.radius();
        if (tip - self.rated_tip_speed).abs() > 0.02 * self.rated_tip_speed {
            return Err(Error::validation(
                "turbine",
                format!("rated rpm gives tip speed {tip:.2} m/s, expected {}", self.rated_tip_speed),
            ));
        }
        Ok(())
    }
}

/// Cp and Ct on a rectangular (λ, β) grid; β stored in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotorTables {
    pub tsr: Vec<f64>,
    pub pitch: Vec<f64>,
    /// cp[i][j] at tsr[i], pitch[j]
    pub cp: Vec<Vec<f64>>,
    pub ct: Vec<Vec<f64>>,
}

static CLAMP_WARNED: AtomicBool = AtomicBool::new(false);

fn heier_cp(tsr: f64, pitch_deg: f64) -> f64 {
    let inv = 1.0 / (tsr + 0.08 * pitch_deg) - 0.035 / (pitch_deg.powi(3) + 1.0);
    0.5176 * (116.0 * inv - 0.4 * pitch_deg - 5.0) * (-21.0 * inv).exp() + 0.0068 * tsr
}

/// Axial-momentum thrust coefficient matching a power coefficient.
fn momentum_ct(cp: f64) -> f64 {
    if cp <= 0.0 {
        return 0.0;
    }
    let cp = cp.min(16.0 / 27.0);
    let (mut lo, mut hi) = (0.0f64, 1.0 / 3.0);
    for _ in 0..60 {
        let a = 0.5 * (lo + hi);
        if 4.0 * a * (1.0 - a).powi(2) < cp {
            lo = a;
        } else {
            hi = a;
        }
    }
    let a = 0.5 * (lo + hi);
    4.0 * a * (1.0 - a)
}

fn bracket(grid: &[f64], x: f64) -> (usize, f64) {
    let n = grid.len();
    let k = grid.partition_point(|&g| g <= x).clamp(1, n - 1) - 1;
    let t = ((x - grid[k]) / (grid[k + 1] - grid[k])).clamp(0.0, 1.0);
    (k, t)
}

impl RotorTables {
    /// Generic parametric curves: peak placed at the design tip-speed ratio and
    /// scaled so that rated wind at zero pitch yields exactly the rated power.
    pub fn generic(spec: &TurbineSpec) -> Self {
        // location of the unscaled curve's peak
        let (mut a, mut b) = (4.0, 12.0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if heier_cp(c, 0.0) > heier_cp(d, 0.0) {
                b = d;
            } else {
                a = c;
            }
        }
        let stretch = 0.5 * (a + b) / spec.design_tsr();
        let tsr: Vec<f64> = (0..=500).map(|k| k as f64 * 0.05).collect();
        let pitch: Vec<f64> = (0..=180).map(|k| (k as f64 * 0.25).to_radians()).collect();
        let raw = |l: f64, p: f64| heier_cp(l * stretch, p.to_degrees()).max(0.0);
        let mut cp: Vec<Vec<f64>> = tsr.iter().map(|&l| pitch.iter().map(|&p| raw(l, p)).collect()).collect();
        let mut t = Self { tsr, pitch, ct: Vec::new(), cp: Vec::new() };
        t.cp = cp.clone();
        let target = spec.rating / (0.5 * RHO_AIR * spec.swept_area() * spec.rated_wind.powi(3));
        let scale = target / t.cp_at(spec.design_tsr(), 0.0);
        for row in cp.iter_mut() {
            for v in row.iter_mut() {
                *v *= scale;
            }
        }
        t.ct = cp.iter().map(|r| r.iter().map(|&c| momentum_ct(c)).collect()).collect();
        t.cp = cp;
        t
    }

    pub fn validate(&self) -> Result<()> {
        let (nl, np) = (self.tsr.len(), self.pitch.len());
        if nl < 2 || np < 2 {
            return Err(Error::validation("rotor tables", "grid needs at least 2×2 points"));
        }
        if self.tsr.windows(2).any(|w| w[1] <= w[0]) || self.pitch.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("rotor tables", "grid axes must be strictly increasing"));
        }
        for (name, tab) in [("cp", &self.cp), ("ct", &self.ct)] {
            if tab.len() != nl || tab.iter().any(|r| r.len() != np) {
                return Err(Error::validation("rotor tables", format!("{name} table shape mismatch")));
            }
        }
        if self.cp.iter().flatten().any(|&c| !(0.0..16.0 / 27.0).contains(&c)) {
            return Err(Error::validation("rotor tables", "Cp outside [0, Betz)"));
        }
        if self.ct.iter().flatten().any(|&c| !(c >= 0.0)) {
            return Err(Error::validation("rotor tables", "negative Ct"));
        }
        Ok(())
    }

    fn lookup(&self, tab: &[Vec<f64>], tsr: f64, pitch: f64) -> f64 {
        let lo_l = self.tsr[0];
        let hi_l = self.tsr[self.tsr.len() - 1];
        let lo_p = self.pitch[0];
        let hi_p = self.pitch[self.pitch.len() - 1];
        if (tsr < lo_l || tsr > hi_l || pitch < lo_p || pitch > hi_p) && !CLAMP_WARNED.swap(true, Ordering::Relaxed) {
            log::warn!("rotor table lookup clamped at λ = {tsr:.3}, β = {pitch:.4} rad");
        }
        let (i, u) = bracket(&self.tsr, tsr.clamp(lo_l, hi_l));
        let (j, v) = bracket(&self.pitch, pitch.clamp(lo_p, hi_p));
        (1.0 - u) * ((1.0 - v) * tab[i][j] + v * tab[i][j + 1]) + u * ((1.0 - v) * tab[i + 1][j] + v * tab[i + 1][j + 1])
    }

    pub fn cp_at(&self, tsr: f64, pitch: f64) -> f64 {
        self.lookup(&self.cp, tsr, pitch)
    }

    pub fn ct_at(&self, tsr: f64, pitch: f64) -> f64 {
        self.lookup(&self.ct, tsr, pitch)
    }

    /// Read Cp and Ct grids from CSV files: header `lambda,<β deg>...`, one row per λ.
    pub fn from_csv(cp_path: impl AsRef<Path>, ct_path: impl AsRef<Path>) -> Result<Self> {
        let (tsr, pitch, cp) = read_grid(cp_path.as_ref())?;
        let (tsr2, pitch2, ct) = read_grid(ct_path.as_ref())?;
        if tsr != tsr2 || pitch != pitch2 {
            return Err(Error::validation("rotor tables", "Cp and Ct grids differ"));
        }
        let t = Self { tsr, pitch, cp, ct };
        t.validate()?;
        Ok(t)
    }

    pub fn grid_csv(&self, which: &str) -> String {
        let tab = if which == "ct" { &self.ct } else { &self.cp };
        let mut s = String::from("lambda");
        for p in &self.pitch {
            s.push_str(&format!(",{}", p.to_degrees()));
        }
        s.push('\n');
        for (l, row) in self.tsr.iter().zip(tab) {
            s.push_str(&l.to_string());
            for v in row {
                s.push_str(&format!(",{v}"));
            }
            s.push('\n');
        }
        s
    }
}

fn read_grid(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |m: &str| Error::validation("rotor tables", format!("{}: {m}", path.display()));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let pitch = header
        .split(',')
        .skip(1)
        .map(|c| c.trim().parse::<f64>().map(f64::to_radians))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| bad("unparseable pitch header"))?;
    let mut tsr = Vec::new();
    let mut tab = Vec::new();
    for line in lines {
        let vals = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("unparseable row"))?;
        if vals.len() != pitch.len() + 1 {
            return Err(bad("row length does not match header"));
        }
        tsr.push(vals[0]);
        tab.push(vals[1..].to_vec());
    }
    Ok((tsr, pitch, tab))
}

/// Rotor thrust and aerodynamic torque at relative wind `wind`.
pub fn rotor_loads(
    wind: f64,
    rotor_speed: f64,
    pitch: f64,
    spec: &TurbineSpec,
    tables: &RotorTables,
    rho_air: f64,
) -> (f64, f64) {
    if wind <= 0.0 {
        return (0.0, 0.0);
    }
    let q = 0.5 * rho_air * spec.swept_area() * wind * wind;
    if rotor_speed <= 0.0 {
        return (q * spec.parked_ct, 0.0);
    }
    let tsr = rotor_speed * spec.radius() / wind;
    let thrust = q * tables.ct_at(tsr, pitch);
    let torque = q * wind * tables.cp_at(tsr, pitch) / rotor_speed;
    (thrust, torque)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub rotor_speed: f64,
    pub pitch: f64,
    pub power: f64,
    pub thrust: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Idle,
    BelowRated,
    AboveRated,
    Shutdown,
}

pub fn region_for(spec: &TurbineSpec, mean_wind: f64) -> Region {
    if mean_wind > spec.cut_out {
        Region::Shutdown
    } else if mean_wind < spec.cut_in {
        Region::Idle
    } else if mean_wind >= spec.rated_wind {
        Region::AboveRated
    } else {
        Region::BelowRated
    }
}

fn parked_thrust(spec: &TurbineSpec, wind: f64) -> f64 {
    0.5 * RHO_AIR * spec.swept_area() * wind.max(0.0).powi(2) * spec.parked_ct
}

/// Pitch angle giving exactly rated power at rated rotor speed.
fn rated_pitch(spec: &TurbineSpec, tables: &RotorTables, wind: f64) -> f64 {
    let tsr = spec.rated_omega() * spec.radius() / wind;
    let need = spec.rating / (0.5 * RHO_AIR * spec.swept_area() * wind.powi(3));
    let (mut lo, mut hi) = (0.0, spec.max_pitch);
    if tables.cp_at(tsr, lo) <= need {
        return 0.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if tables.cp_at(tsr, mid) > need {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Steady operating point of the controlled turbine at a constant wind.
pub fn steady_state(spec: &TurbineSpec, tables: &RotorTables, wind: f64) -> SteadyState {
    match region_for(spec, wind) {
        Region::Idle | Region::Shutdown => SteadyState {
            rotor_speed: 0.0,
            pitch: if wind > spec.cut_out { spec.max_pitch } else { 0.0 },
            power: 0.0,
            thrust: parked_thrust(spec, wind),
        },
        Region::BelowRated => {
            let tsr = spec.design_tsr();
            let omega = tsr * wind / spec.radius();
            let (thrust, torque) = rotor_loads(wind, omega, 0.0, spec, tables, RHO_AIR);
            SteadyState { rotor_speed: omega, pitch: 0.0, power: (torque * omega).min(spec.rating), thrust }
        }
        Region::AboveRated => {
            let omega = spec.rated_omega();
            let pitch = rated_pitch(spec, tables, wind);
            let (thrust, _) = rotor_loads(wind, omega, pitch, spec, tables, RHO_AIR);
            SteadyState { rotor_speed: omega, pitch, power: spec.rating, thrust }
        }
    }
}

/// Controller gains and the torque-law constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerGains {
    pub k_torque: f64,
    pub kp: f64,
    pub ki: f64,
}

impl ControllerGains {
    /// Quadratic torque law tracking the design tip-speed ratio and a PI pitch
    /// loop placed at ω_n = 0.6 rad/s, ζ = 0.7 using the pitch sensitivity at
    /// 1.3× rated wind.
    pub fn design(spec: &TurbineSpec, tables: &RotorTables) -> Self {
        Self::design_with(spec, tables, 0.6, 0.7)
    }

    /// Gains for a floating support: the pitch loop is slowed below the
    /// platform pitch frequency so it does not feed the platform mode.
    pub fn design_floating(spec: &TurbineSpec, tables: &RotorTables) -> Self {
        Self::design_with(spec, tables, 0.1, 0.7)
    }

    /// Torque gain for optimal λ below rated; PI pitch gains placing the
    /// speed loop at (ωn, ζ) at 1.3× rated wind.
    pub fn design_with(spec: &TurbineSpec, tables: &RotorTables, wn: f64, zeta: f64) -> Self {
        let r = spec.radius();
        let tsr = spec.design_tsr();
        let cp = tables.cp_at(tsr, 0.0);
        let k_torque = 0.5 * RHO_AIR * spec.swept_area() * r.powi(3) * cp / tsr.powi(3);
        let v = 1.3 * spec.rated_wind;
        let omega = spec.rated_omega();
        let beta = rated_pitch(spec, tables, v);
        let db = 0.5f64.to_radians();
        let q = |b: f64| rotor_loads(v, omega, b, spec, tables, RHO_AIR).1;
        let dq_db = (q(beta + db) - q((beta - db).max(0.0))) / (beta + db - (beta - db).max(0.0));
        let sens = (-dq_db).max(1.0);
        Self {
            k_torque,
            kp: 2.0 * spec.drivetrain_inertia * zeta * wn / sens,
            ki: spec.drivetrain_inertia * wn * wn / sens,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorState {
    pub rotor_speed: f64,
    pub pitch: f64,
    pub speed_error_integral: f64,
    pub region: Region,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorOutput {
    pub gen_torque: f64,
    pub gen_power: f64,
    pub aero_torque: f64,
    pub thrust: f64,
}

impl GeneratorState {
    /// Start from the steady operating point at `mean_wind`.
    pub fn initial(spec: &TurbineSpec, tables: &RotorTables, gains: &ControllerGains, mean_wind: f64) -> Self {
        let ss = steady_state(spec, tables, mean_wind);
        let region = region_for(spec, mean_wind);
        Self {
            rotor_speed: ss.rotor_speed,
            pitch: ss.pitch,
            speed_error_integral: if gains.ki > 0.0 { ss.pitch / gains.ki } else { 0.0 },
            region,
        }
    }

    fn gen_torque(&self, spec: &TurbineSpec, gains: &ControllerGains, omega: f64) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        let cap = spec.rating / omega;
        if self.pitch > 0.0 || omega >= spec.rated_omega() {
            cap
        } else {
            (gains.k_torque * omega * omega).min(cap)
        }
    }

    /// Generator torque and power for the current state, plus rotor loads at
    /// the given relative wind.
    pub fn output(&self, spec: &TurbineSpec, tables: &RotorTables, gains: &ControllerGains, wind: f64) -> GeneratorOutput {
        match self.region {
            Region::Idle | Region::Shutdown => GeneratorOutput {
                gen_torque: 0.0,
                gen_power: 0.0,
                aero_torque: 0.0,
                thrust: parked_thrust(spec, wind),
            },
            _ => {
                let (thrust, aero_torque) = rotor_loads(wind, self.rotor_speed, self.pitch, spec, tables, RHO_AIR);
                let gen_torque = self.gen_torque(spec, gains, self.rotor_speed);
                GeneratorOutput {
                    gen_torque,
                    gen_power: (gen_torque * self.rotor_speed).min(spec.rating),
                    aero_torque,
                    thrust,
                }
            }
        }
    }

    /// Advance the one-mass drivetrain and pitch loop by `dt` with the wind held.
    pub fn step(&mut self, spec: &TurbineSpec, tables: &RotorTables, gains: &ControllerGains, wind: f64, dt: f64) -> GeneratorOutput {
        let out = self.output(spec, tables, gains, wind);
        if matches!(self.region, Region::Idle | Region::Shutdown) {
            return out;
        }
        let accel = |s: &Self, w: f64| {
            let q_aero = rotor_loads(wind, w, s.pitch, spec, tables, RHO_AIR).1;
            (q_aero - s.gen_torque(spec, gains, w)) / spec.drivetrain_inertia
        };
        let w0 = self.rotor_speed;
        let k1 = accel(self, w0);
        let k2 = accel(self, w0 + 0.5 * dt * k1);
        let k3 = accel(self, w0 + 0.5 * dt * k2);
        let k4 = accel(self, w0 + dt * k3);
        self.rotor_speed = (w0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).max(0.0);

        let err = self.rotor_speed - spec.rated_omega();
        self.speed_error_integral += err * dt;
        if gains.ki > 0.0 {
            self.speed_error_integral = self.speed_error_integral.clamp(0.0, spec.max_pitch / gains.ki);
        }
        let target = (gains.kp * err + gains.ki * self.speed_error_integral).clamp(0.0, spec.max_pitch);
        let max_step = spec.max_pitch_rate * dt;
        self.pitch += (target - self.pitch).clamp(-max_step, max_step);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindSpec {
    pub mean_speed: f64,
    #[serde(default = "default_ti")]
    pub turbulence_intensity: f64,
    #[serde(default = "default_shear")]
    pub shear_exponent: f64,
    /// Height at which `mean_speed` applies; `None` means hub height.
    #[serde(default)]
    pub reference_height: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_ti() -> f64 {
    0.14
}

fn default_shear() -> f64 {
    0.14
}

impl WindSpec {
    pub fn steady(mean_speed: f64) -> Self {
        Self {
            mean_speed,
            turbulence_intensity: 0.0,
            shear_exponent: default_shear(),
            reference_height: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mean_speed >= 0.0 && self.turbulence_intensity >= 0.0) {
            return Err(Error::validation("wind", "mean speed and turbulence intensity must be ≥ 0"));
        }
        Ok(())
    }

    pub fn hub_mean(&self, hub_height: f64) -> f64 {
        match self.reference_height {
            Some(z) if z > 0.0 => hub_height_speed(self.mean_speed, z, hub_height, self.shear_exponent),
            _ => self.mean_speed,
        }
    }
}

/// Power-law shear extrapolation.
pub fn hub_height_speed(speed: f64, ref_height: f64, hub_height: f64, alpha: f64) -> f64 {
    speed * (hub_height / ref_height).powf(alpha)
}

/// Longitudinal Kaimal spectrum, one-sided in Hz.
pub fn kaimal_psd(f: f64, sigma: f64, mean: f64, length_scale: f64) -> f64 {
    let lv = length_scale / mean;
    4.0 * sigma * sigma * lv / (1.0 + 6.0 * f * lv).powf(5.0 / 3.0)
}

/// Hub-height wind speed series with a Kaimal spectrum. The fluctuation is
/// rescaled so the sample standard deviation equals TI × mean exactly.
pub fn synthesize_wind(spec: &WindSpec, hub_height: f64, duration: f64, dt: f64) -> Result<Vec<f64>> {
    spec.validate()?;
    if !(duration > 0.0 && dt > 0.0) {
        return Err(Error::InvalidInput("wind synthesis needs duration, dt > 0".into()));
    }
    let mean = spec.hub_mean(hub_height);
    let n_out = (duration / dt).round() as usize + 1;
    let sigma = spec.turbulence_intensity * mean;
    if sigma == 0.0 || mean == 0.0 {
        return Ok(vec![mean; n_out]);
    }
    let n = n_out.next_power_of_two().max(16);
    let length_scale = 8.1 * 0.7 * hub_height.min(60.0);
    let df = 1.0 / (n as f64 * dt);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut spec_c = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n / 2 {
        let f = k as f64 * df;
        let amp = (kaimal_psd(f, sigma, mean, length_scale) * df / 2.0).sqrt();
        let phase = rng.gen::<f64>() * 2.0 * PI;
        let c = Complex64::from_polar(amp, phase);
        spec_c[k] = c;
        spec_c[n - k] = c.conj();
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spec_c);
    let fluct: Vec<f64> = spec_c[..n_out].iter().map(|c| c.re).collect();
    let m = fluct.iter().sum::<f64>() / n_out as f64;
    let sd = (fluct.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n_out as f64).sqrt();
    Ok(fluct.iter().map(|x| mean + (x - m) * sigma / sd).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_consistent() {
        TurbineSpec::nrel_5mw().validate().unwrap();
        TurbineSpec::iea_15mw().validate().unwrap();
        for s in [TurbineSpec::nrel_5mw(), TurbineSpec::iea_15mw()] {
            RotorTables::generic(&s).validate().unwrap();
        }
    }

    #[test]
    fn rated_power_is_exact() {
        let s5 = TurbineSpec::nrel_5mw();
        let t5 = RotorTables::generic(&s5);
        assert_eq!(steady_state(&s5, &t5, 11.4).power, 5.0e6);
        let s15 = TurbineSpec::iea_15mw();
        let t15 = RotorTables::generic(&s15);
        assert_eq!(steady_state(&s15, &t15, 10.6).power, 15.0e6);
        assert_eq!(steady_state(&s5, &t5, 26.0).power, 0.0);
        assert_eq!(steady_state(&s5, &t5, 2.5).power, 0.0);
    }

    #[test]
    fn rated_boundary_is_continuous() {
        let s = TurbineSpec::nrel_5mw();
        let t = RotorTables::generic(&s);
        let below = steady_state(&s, &t, 11.4 - 1e-9);
        let at = steady_state(&s, &t, 11.4);
        assert!((below.power - at.power).abs() / at.power < 1e-6);
        assert!((below.thrust - at.thrust).abs() / at.thrust < 1e-3);
    }

    #[test]
    fn thrust_definition() {
        let s = TurbineSpec::nrel_5mw();
        let t = RotorTables::generic(&s);
        let omega = 1.0;
        let tsr = omega * 63.0 / 11.4;
        let (thrust, torque) = rotor_loads(11.4, omega, 0.0, &s, &t, 1.225);
        let q = 0.5 * 1.225 * PI * 63.0f64.powi(2) * 11.4f64.powi(2);
        assert!((0.8 * q - 7.95e5).abs() / 7.95e5 < 0.002);
        assert!((thrust - q * t.ct_at(tsr, 0.0)).abs() < 1e-6 * thrust);
        assert!((torque - q * 11.4 * t.cp_at(tsr, 0.0) / omega).abs() < 1e-6 * torque);
        assert_eq!(rotor_loads(0.0, 1.0, 0.0, &s, &t, 1.225), (0.0, 0.0));
        let (parked, tq) = rotor_loads(10.0, 0.0, 0.0, &s, &t, 1.225);
        assert!(parked > 0.0 && tq == 0.0);
    }

    #[test]
    fn momentum_ct_round_trip() {
        let a: f64 = 0.25;
        let cp = 4.0 * a * (1.0 - a).powi(2);
        assert!((momentum_ct(cp) - 4.0 * a * (1.0 - a)).abs() < 1e-12);
        assert_eq!(momentum_ct(-0.1), 0.0);
    }

    #[test]
    fn calm_turbulence_is_constant() {
        let w = synthesize_wind(&WindSpec::steady(8.0), 90.0, 60.0, 0.1).unwrap();
        assert!(w.iter().all(|&v| v == 8.0));
    }

    #[test]
    fn turbulence_statistics() {
        let spec = WindSpec { turbulence_intensity: 0.14, seed: 5, ..WindSpec::steady(11.4) };
        let w = synthesize_wind(&spec, 90.0, 3600.0, 0.1).unwrap();
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let sd = (w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        assert!((mean - 11.4).abs() / 11.4 < 0.01);
        assert!((sd / mean - 0.14).abs() / 0.14 < 0.05);
        let again = synthesize_wind(&spec, 90.0, 3600.0, 0.1).unwrap();
        assert_eq!(w, again);
        let other = synthesize_wind(&WindSpec { seed: 6, ..spec }, 90.0, 3600.0, 0.1).unwrap();
        assert_ne!(w, other);
    }

    #[test]
    fn shear_extrapolation() {
        let v = hub_height_speed(6.5, 4.0, 90.0, 0.14);
        assert!((v - 6.5 * 22.5f64.powf(0.14)).abs() < 1e-12);
    }

    #[test]
    fn generator_never_exceeds_rating() {
        let s = TurbineSpec::nrel_5mw();
        let t = RotorTables::generic(&s);
        let g = ControllerGains::design(&s, &t);
        let spec = WindSpec { turbulence_intensity: 0.14, seed: 2, ..WindSpec::steady(13.0) };
        let wind = synthesize_wind(&spec, 90.0, 600.0, 0.05).unwrap();
        let mut st = GeneratorState::initial(&s, &t, &g, 13.0);
        let mut sum = 0.0;
        for &v in &wind {
            let out = st.step(&s, &t, &g, v, 0.05);
            assert!(out.gen_power <= s.rating);
            assert!(st.rotor_speed < 2.0 * s.rated_omega());
            sum += out.gen_power;
        }
        assert!(sum / wind.len() as f64 > 0.8 * s.rating);
    }

    #[test]
    fn region_two_holds_steady_point() {
        let s = TurbineSpec::nrel_5mw();
        let t = RotorTables::generic(&s);
        let g = ControllerGains::design(&s, &t);
        let mut st = GeneratorState::initial(&s, &t, &g, 8.0);
        let p0 = steady_state(&s, &t, 8.0).power;
        let mut out = st.output(&s, &t, &g, 8.0);
        for _ in 0..2000 {
            out = st.step(&s, &t, &g, 8.0, 0.05);
        }
        assert!((out.gen_power - p0).abs() / p0 < 0.01, "{} vs {p0}", out.gen_power);
    }
}
