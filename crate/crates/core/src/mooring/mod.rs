//! Mooring lines and their aggregate load on the platform.

pub mod catenary;
pub mod lumped;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{point_position, point_velocity, wrench_about};
pub use lumped::{LineState, LumpedLine};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineProps {
    pub unstretched_length: f64,
    pub diameter: f64,
    pub mass_per_length: f64,
    pub wet_mass_per_length: f64,
    pub ea: f64,
    #[serde(default = "default_segments")]
    pub n_segments: usize,
    #[serde(default = "default_cdn")]
    pub cdn: f64,
    #[serde(default = "default_cdt")]
    pub cdt: f64,
    #[serde(default = "default_can")]
    pub can: f64,
    #[serde(default)]
    pub cat: f64,
    /// N/m per metre of line per metre of penetration.
    #[serde(default = "default_seabed")]
    pub seabed_stiffness: f64,
    /// Fraction of critical damping of a single segment's axial mode.
    #[serde(default = "default_internal_damping")]
    pub internal_damping: f64,
}

fn default_segments() -> usize {
    40
}
fn default_cdn() -> f64 {
    1.2
}
fn default_cdt() -> f64 {
    0.008
}
fn default_can() -> f64 {
    1.0
}
fn default_seabed() -> f64 {
    3.0e6
}
fn default_internal_damping() -> f64 {
    0.01
}

impl LineProps {
    fn with(length: f64, diameter: f64, mass: f64, wet: f64, ea: f64) -> Self {
        Self {
            unstretched_length: length,
            diameter,
            mass_per_length: mass,
            wet_mass_per_length: wet,
            ea,
            n_segments: default_segments(),
            cdn: default_cdn(),
            cdt: default_cdt(),
            can: default_can(),
            cat: 0.0,
            seabed_stiffness: default_seabed(),
            internal_damping: default_internal_damping(),
        }
    }

    pub fn spar() -> Self {
        Self::with(902.2, 0.09, 77.71, 71.16, 384.2e6)
    }

    pub fn semi() -> Self {
        Self::with(835.5, 0.0766, 113.35, 108.63, 753.6e6)
    }

    pub fn rm3() -> Self {
        Self::with(280.0, 0.144, 126.0, 115.0, 583.4e6)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.unstretched_length,
            self.diameter,
            self.mass_per_length,
            self.wet_mass_per_length,
            self.ea,
            self.seabed_stiffness,
        ];
        if positive.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::validation("line", "lengths, masses, stiffness must be positive"));
        }
        if self.wet_mass_per_length > self.mass_per_length {
            return Err(Error::validation("line", "wet mass exceeds dry mass per length"));
        }
        if self.n_segments < 2 {
            return Err(Error::validation("line", "need at least 2 segments"));
        }
        if [self.cdn, self.cdt, self.can, self.cat, self.internal_damping].iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::validation("line", "hydrodynamic and damping coefficients must be ≥ 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MooringEnv {
    pub rho: f64,
    pub g: f64,
    /// Seabed depth below the still-water line.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MooringLayout {
    /// Line headings, degrees from +x.
    pub azimuths: Vec<f64>,
    pub anchor_depth: f64,
    pub fairlead_depth: f64,
    pub anchor_radius: f64,
    pub fairlead_radius: f64,
    pub line: LineProps,
}

impl MooringLayout {
    pub fn uniform(n: usize, first_azimuth: f64, anchor_depth: f64, fairlead_depth: f64, anchor_radius: f64, fairlead_radius: f64, line: LineProps) -> Self {
        Self {
            azimuths: (0..n).map(|k| (first_azimuth + 360.0 * k as f64 / n as f64).rem_euclid(360.0)).collect(),
            anchor_depth,
            fairlead_depth,
            anchor_radius,
            fairlead_radius,
            line,
        }
    }

    pub fn n_lines(&self) -> usize {
        self.azimuths.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.line.validate()?;
        if self.azimuths.is_empty() {
            return Err(Error::validation("mooring", "no lines"));
        }
        if !(self.anchor_radius > 0.0 && self.fairlead_radius >= 0.0 && self.anchor_depth > self.fairlead_depth) {
            return Err(Error::validation("mooring", "radii must be positive and anchors below fairleads"));
        }
        let n = self.azimuths.len();
        if n >= 2 {
            let mut a: Vec<f64> = self.azimuths.iter().map(|x| x.rem_euclid(360.0)).collect();
            a.sort_by(f64::total_cmp);
            let spacing = 360.0 / n as f64;
            for k in 0..n {
                let gap = if k + 1 < n { a[k + 1] - a[k] } else { a[0] + 360.0 - a[k] };
                if (gap - spacing).abs() > 1e-6 {
                    return Err(Error::validation("mooring", format!("azimuth spacing must be uniform ({spacing}°)")));
                }
            }
        }
        Ok(())
    }

    pub fn fairlead_local(&self, k: usize) -> [f64; 3] {
        let a = self.azimuths[k].to_radians();
        [self.fairlead_radius * a.cos(), self.fairlead_radius * a.sin(), -self.fairlead_depth]
    }

    pub fn anchor(&self, k: usize) -> Vector3<f64> {
        let a = self.azimuths[k].to_radians();
        Vector3::new(self.anchor_radius * a.cos(), self.anchor_radius * a.sin(), -self.anchor_depth)
    }
}

/// Net force and moment on the platform from fairlead forces, about the
/// displaced platform origin.
pub fn system_mooring_load(pose: &[f64; 6], fairleads: &[Vector3<f64>], forces: &[Vector3<f64>]) -> [f64; 6] {
    wrench_about(&Vector3::new(pose[0], pose[1], pose[2]), fairleads, forces)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MooringModel {
    #[default]
    LumpedMass,
    QuasiStatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairleadTension {
    pub magnitude: f64,
    pub force: [f64; 3],
}

/// All lines of one platform with their coupling to the platform pose.
#[derive(Debug, Clone)]
pub struct MooringSystem {
    pub layout: MooringLayout,
    pub model: MooringModel,
    pub lines: Vec<LumpedLine>,
    n_sub: usize,
}

impl MooringSystem {
    /// `mooring_dt` overrides the automatic sub-step; it must satisfy the
    /// axial-wave and seabed-contact stability bounds.
    pub fn new(layout: MooringLayout, env: MooringEnv, model: MooringModel, platform_dt: f64, mooring_dt: Option<f64>, pose: &[f64; 6]) -> Result<Self> {
        layout.validate()?;
        let lines = (0..layout.n_lines())
            .map(|k| {
                let fair = point_position(pose, &layout.fairlead_local(k));
                LumpedLine::new(layout.line.clone(), env, layout.anchor(k), fair)
            })
            .collect::<Result<Vec<_>>>()?;
        let crit = lines[0].critical_dt();
        let sub = match mooring_dt {
            Some(dt) if dt > crit => {
                return Err(Error::Config(format!(
                    "mooring_dt {dt} s exceeds the line stability bound {crit:.5} s (segment length / wave speed)"
                )))
            }
            Some(dt) if dt > 0.0 => dt,
            Some(_) => return Err(Error::Config("mooring_dt must be positive".into())),
            None => 0.9 * crit,
        };
        let n_sub = (platform_dt / sub).ceil().max(1.0) as usize;
        Ok(Self { layout, model, lines, n_sub })
    }

    pub fn substeps(&self) -> usize {
        self.n_sub
    }

    pub fn fairleads(&self, pose: &[f64; 6]) -> Vec<Vector3<f64>> {
        (0..self.layout.n_lines()).map(|k| point_position(pose, &self.layout.fairlead_local(k))).collect()
    }

    /// Put every line in static equilibrium for the given pose.
    pub fn settle(&mut self, pose: &[f64; 6]) -> Result<()> {
        let fairs = self.fairleads(pose);
        for (line, f) in self.lines.iter_mut().zip(&fairs) {
            match self.model {
                MooringModel::LumpedMass => line.solve_static(f)?,
                MooringModel::QuasiStatic => {
                    let n = line.n_segments();
                    line.state.pos[n] = *f;
                }
            }
        }
        Ok(())
    }

    /// Static load at `pose` without disturbing the stored dynamic state.
    pub fn static_load(&self, pose: &[f64; 6]) -> Result<[f64; 6]> {
        let fairs = self.fairleads(pose);
        let mut forces = Vec::with_capacity(fairs.len());
        for (line, f) in self.lines.iter().zip(&fairs) {
            forces.push(match self.model {
                MooringModel::LumpedMass => {
                    let mut l = line.clone();
                    l.solve_static(f)?;
                    l.fairlead_static_force()
                }
                MooringModel::QuasiStatic => line.catenary_fairlead_force(f)?,
            });
        }
        Ok(system_mooring_load(pose, &fairs, &forces))
    }

    pub fn fairlead_forces(&self) -> Result<Vec<Vector3<f64>>> {
        self.lines
            .iter()
            .map(|l| match self.model {
                MooringModel::LumpedMass => Ok(l.fairlead_force()),
                MooringModel::QuasiStatic => l.catenary_fairlead_force(&l.fairlead()),
            })
            .collect()
    }

    /// Load from the current line states at the stored fairlead positions.
    pub fn load(&self, pose: &[f64; 6]) -> Result<[f64; 6]> {
        let fairs: Vec<_> = self.lines.iter().map(|l| l.fairlead()).collect();
        Ok(system_mooring_load(pose, &fairs, &self.fairlead_forces()?))
    }

    pub fn tensions(&self) -> Result<Vec<FairleadTension>> {
        Ok(self
            .fairlead_forces()?
            .iter()
            .map(|f| FairleadTension { magnitude: f.norm(), force: [f.x, f.y, f.z] })
            .collect())
    }

    /// Advance the lines over one platform step; the fairleads follow the
    /// platform from its current pose to (`pose`, `vel`).
    pub fn advance(&mut self, pose: &[f64; 6], vel: &[f64; 6], dt: f64) {
        let n_sub = self.n_sub;
        for (k, line) in self.lines.iter_mut().enumerate() {
            let local = self.layout.fairlead_local(k);
            let p1 = point_position(pose, &local);
            let v1 = point_velocity(pose, vel, &local);
            match self.model {
                MooringModel::LumpedMass => {
                    let n = line.n_segments();
                    let p0 = line.state.pos[n];
                    let v0 = line.state.vel[n];
                    let h = dt / n_sub as f64;
                    for s in 1..=n_sub {
                        let tau = s as f64 / n_sub as f64;
                        line.step(&(p0 + (p1 - p0) * tau), &(v0 + (v1 - v0) * tau), h);
                    }
                }
                MooringModel::QuasiStatic => {
                    let n = line.n_segments();
                    line.state.pos[n] = p1;
                    line.state.vel[n] = v1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ENV: MooringEnv = MooringEnv { rho: 1025.0, g: 9.81, depth: 320.0 };

    fn spar_layout() -> MooringLayout {
        MooringLayout::uniform(3, 180.0, 320.0, 70.0, 853.87, 5.2, LineProps::spar())
    }

    fn system(model: MooringModel) -> MooringSystem {
        let mut s = MooringSystem::new(spar_layout(), ENV, model, 0.01, None, &[0.0; 6]).unwrap();
        s.settle(&[0.0; 6]).unwrap();
        s
    }

    #[test]
    fn symmetric_layout_has_no_lateral_load() {
        for model in [MooringModel::LumpedMass, MooringModel::QuasiStatic] {
            let s = system(model);
            let load = s.static_load(&[0.0; 6]).unwrap();
            let single = s.tensions().unwrap()[0].magnitude;
            for k in [0, 1, 5] {
                assert!(load[k].abs() < 1e-6 * single, "dof {k}: {}", load[k]);
            }
            assert!(load[2] < 0.0);
        }
    }

    #[test]
    fn surge_offset_restores() {
        let s = system(MooringModel::LumpedMass);
        let load = s.static_load(&[10.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(load[0] < 0.0);
        let back = s.static_load(&[-10.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(back[0] > 0.0);
    }

    #[test]
    fn removing_a_line_subtracts_its_load() {
        let pose = [5.0, 2.0, 0.0, 0.0, 0.0, 0.0];
        let all = system(MooringModel::QuasiStatic);
        let total = all.static_load(&pose).unwrap();
        let fairs = all.fairleads(&pose);
        let f0 = all.lines[0].catenary_fairlead_force(&fairs[0]).unwrap();
        let one = system_mooring_load(&pose, &fairs[..1], &[f0]);
        let rest_forces: Vec<_> = (1..3).map(|k| all.lines[k].catenary_fairlead_force(&fairs[k]).unwrap()).collect();
        let rest = system_mooring_load(&pose, &fairs[1..], &rest_forces);
        for k in 0..6 {
            assert!((total[k] - one[k] - rest[k]).abs() < 1e-6 * total[2].abs());
        }
    }

    #[test]
    fn lumped_statics_match_catenary() {
        let mut line = LumpedLine::new(LineProps::spar(), ENV, spar_layout().anchor(0), Vector3::zeros()).unwrap();
        let fair = point_position(&[0.0; 6], &spar_layout().fairlead_local(0));
        line.solve_static(&fair).unwrap();
        let (cat, _) = line.catenary_nodes(&fair).unwrap();
        for (a, b) in line.state.pos.iter().zip(&cat) {
            assert!((a - b).norm() < 0.01 * 320.0);
        }
    }

    #[test]
    fn equilibrium_is_held() {
        let mut s = system(MooringModel::LumpedMass);
        let start = s.lines[0].state.pos.clone();
        for _ in 0..2000 {
            s.advance(&[0.0; 6], &[0.0; 6], 0.01);
        }
        let drift = s.lines[0].state.pos.iter().zip(&start).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(drift < 1e-3 * 902.2, "drift {drift}");
    }

    #[test]
    fn weightless_straight_line_stays_unloaded() {
        let props = LineProps { wet_mass_per_length: 1e-12, ..LineProps::rm3() };
        let env = MooringEnv { rho: 1025.0, g: 0.0, depth: 1000.0 };
        let a = Vector3::new(0.0, 0.0, -500.0);
        let f = Vector3::new(280.0, 0.0, -500.0);
        let mut line = LumpedLine::new(props, env, a, f).unwrap();
        for _ in 0..500 {
            line.step(&f, &Vector3::zeros(), 0.002);
        }
        line.refresh_tensions();
        assert!(line.state.tensions.iter().all(|&t| t.abs() < 1e-6));
    }

    #[test]
    fn energy_decays_without_excitation() {
        let mut s = system(MooringModel::LumpedMass);
        for v in s.lines[0].state.vel.iter_mut().skip(5).take(10) {
            v.y = 0.5;
        }
        let mut last = s.lines[0].energy();
        for _ in 0..300 {
            s.advance(&[0.0; 6], &[0.0; 6], 0.01);
            let e = s.lines[0].energy();
            assert!(e <= last + 1e-6 * last.abs(), "{e} > {last}");
            last = e;
        }
    }

    #[test]
    fn unstable_substep_is_a_config_error() {
        let err = MooringSystem::new(spar_layout(), ENV, MooringModel::LumpedMass, 0.01, Some(0.02), &[0.0; 6]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn nonuniform_azimuths_rejected() {
        let mut l = spar_layout();
        l.azimuths[1] += 5.0;
        assert!(l.validate().is_err());
    }
}
