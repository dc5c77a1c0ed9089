use nalgebra::{DMatrix, DVector, Matrix6, Vector6};

use super::results::TimeSeriesResult;
use super::{BodyModel, Environment, RadiationMode, SimSettings, SystemModel};
use crate::aero::{synthesize_wind, GeneratorState};
use crate::error::{Error, Result};
use crate::kinematics::{point_position, rotation};
use crate::hydro::{radiation_irf, to_matrix6, viscous_drag, RadiationMemory};
use crate::mooring::MooringSystem;
use crate::waves::{ExcitationSeries, PhasorClock, WaveField};

const N_GEN: usize = 7;
const S: usize = 6;

type Gen = [f64; N_GEN];

/// Precomputed per-body terms.
#[derive(Debug, Clone)]
struct BodyTerms {
    stiffness: Matrix6<f64>,
    static_force: [f64; 6],
    memory: Option<RadiationMemory>,
    constant_damping: Option<Matrix6<f64>>,
    exc: Option<ExcitationSeries>,
    rad_prev: [f64; 6],
    rad_cur: [f64; 6],
}

impl BodyTerms {
    fn new(body: &BodyModel, g: f64, settings: &SimSettings) -> Result<Self> {
        let c = &body.coeffs;
        let mut stiffness = to_matrix6(&c.hydrostatic);
        let gravity = -body.total_mass * g * body.cog_z;
        stiffness[(3, 3)] += gravity;
        stiffness[(4, 4)] += gravity;
        let mut static_force = [0.0; 6];
        static_force[2] = c.rho * g * c.volume - body.total_mass * g;
        let (memory, constant_damping) = match &body.radiation {
            RadiationMode::Convolution => {
                let irf = radiation_irf(c, settings.irf_dt, settings.irf_t_max)?;
                let mem = RadiationMemory::new(irf);
                (if mem.is_zero() { None } else { Some(mem) }, None)
            }
            RadiationMode::ConstantDamping(b) => (None, Some(to_matrix6(b))),
        };
        Ok(Self {
            stiffness,
            static_force,
            memory,
            constant_damping,
            exc: None,
            rad_prev: [0.0; 6],
            rad_cur: [0.0; 6],
        })
    }

    fn reset_radiation(&mut self, v: [f64; 6]) {
        self.rad_prev = [0.0; 6];
        self.rad_cur = [0.0; 6];
        if let Some(m) = &mut self.memory {
            m.reset();
            m.push(v);
            self.rad_cur = m.force();
            self.rad_prev = self.rad_cur;
        }
    }
}

/// Inputs that vary with stage time but not with state.
#[derive(Debug, Clone, Copy, Default)]
struct StageInputs {
    exc_p: [f64; 6],
    exc_f: [f64; 6],
    /// Fraction of a radiation grid interval past the latest grid point.
    rad_tau: f64,
    wind: f64,
}

/// Loads on the float and platform from the PTO at the last recorded state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub time: f64,
    pub pto_on_float: f64,
    pub pto_on_platform: f64,
}

/// Coupled platform (6 DOF) plus optional float relative heave, integrated
/// with fixed-step RK4.
#[derive(Debug, Clone)]
pub struct HybridSystem {
    model: SystemModel,
    settings: SimSettings,
    active: Vec<usize>,
    m_inv: DMatrix<f64>,
    platform: BodyTerms,
    float: Option<BodyTerms>,
    mooring: Option<MooringSystem>,
    moor_force: [f64; 6],
    generator: Option<GeneratorState>,
    mean_wind: f64,
    wind: Vec<f64>,
    field: Option<WaveField>,
    clock: Option<PhasorClock>,
    exc_now: ([f64; 6], [f64; 6]),
    rad_stride: usize,
    q: Gen,
    qd: Gen,
    q_eq: Gen,
    t: f64,
    step_index: usize,
    prepared: bool,
}

fn add(a: &Gen, b: &Gen, h: f64) -> Gen {
    let mut out = *a;
    for i in 0..N_GEN {
        out[i] += h * b[i];
    }
    out
}

fn split(q: &Gen) -> [f64; 6] {
    [q[0], q[1], q[2], q[3], q[4], q[5]]
}

fn float_motion(q: &Gen) -> [f64; 6] {
    let mut u = split(q);
    u[2] += q[S];
    u
}

fn mat_vec(m: &Matrix6<f64>, v: &[f64; 6]) -> [f64; 6] {
    let r = m * Vector6::from_row_slice(v);
    [r[0], r[1], r[2], r[3], r[4], r[5]]
}

impl HybridSystem {
    pub fn new(model: SystemModel, settings: &SimSettings) -> Result<Self> {
        settings.validate()?;
        let mut active: Vec<usize> = (0..6).filter(|&i| model.dof_mask[i]).collect();
        if model.float.is_some() {
            active.push(S);
        }
        if active.is_empty() {
            return Err(Error::Config("no active degrees of freedom".into()));
        }

        let mut m_gen = DMatrix::<f64>::zeros(N_GEN, N_GEN);
        let mp = to_matrix6(&model.platform.mass_matrix) + to_matrix6(&model.platform.coeffs.a_inf);
        m_gen.view_mut((0, 0), (6, 6)).copy_from(&mp);
        if let Some(f) = &model.float {
            let mf = to_matrix6(&f.mass_matrix) + to_matrix6(&f.coeffs.a_inf);
            let mut j = DMatrix::<f64>::zeros(6, N_GEN);
            for i in 0..6 {
                j[(i, i)] = 1.0;
            }
            j[(2, S)] = 1.0;
            let mf = DMatrix::from_fn(6, 6, |r, c| mf[(r, c)]);
            m_gen += j.transpose() * mf * &j;
        }
        let m_aa = DMatrix::from_fn(active.len(), active.len(), |r, c| m_gen[(active[r], active[c])]);
        let m_inv = m_aa
            .cholesky()
            .ok_or_else(|| Error::Config(format!("{}: generalized mass matrix is not positive definite", model.name)))?
            .inverse();

        let platform = BodyTerms::new(&model.platform, model.g, settings)?;
        let float = model.float.as_ref().map(|f| BodyTerms::new(f, model.g, settings)).transpose()?;
        let rad_stride = (settings.irf_dt / settings.dt).round() as usize;

        Ok(Self {
            model,
            settings: settings.clone(),
            active,
            m_inv,
            platform,
            float,
            mooring: None,
            moor_force: [0.0; 6],
            generator: None,
            mean_wind: 0.0,
            wind: Vec::new(),
            field: None,
            clock: None,
            exc_now: ([0.0; 6], [0.0; 6]),
            rad_stride,
            q: [0.0; N_GEN],
            qd: [0.0; N_GEN],
            q_eq: [0.0; N_GEN],
            t: 0.0,
            step_index: 0,
            prepared: false,
        })
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn n_dof(&self) -> usize {
        self.active.len()
    }

    pub fn active_dofs(&self) -> &[usize] {
        &self.active
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Generalized displacement: platform 6 DOF then float relative heave.
    pub fn position(&self) -> &[f64; N_GEN] {
        &self.q
    }

    pub fn velocity(&self) -> &[f64; N_GEN] {
        &self.qd
    }

    pub fn equilibrium(&self) -> &[f64; N_GEN] {
        &self.q_eq
    }

    /// Absolute float pose: the platform pose composed with a translation
    /// `s` along the body-fixed tower axis.
    pub fn float_position(&self) -> [f64; 6] {
        let p = split(&self.q);
        let c = point_position(&p, &[0.0, 0.0, self.q[S]]);
        [c.x, c.y, c.z, p[3], p[4], p[5]]
    }

    /// Unit tower axis in the global frame.
    pub fn tower_axis(&self) -> [f64; 3] {
        let r = rotation(&split(&self.q));
        [r[(0, 2)], r[(1, 2)], r[(2, 2)]]
    }

    pub fn set_velocity(&mut self, dof: usize, v: f64) -> Result<()> {
        if dof >= N_GEN || !self.active.contains(&dof) {
            return Err(Error::InvalidInput(format!("DOF {dof} is not active")));
        }
        self.qd[dof] = v;
        Ok(())
    }

    pub fn mooring_load(&self) -> [f64; 6] {
        self.moor_force
    }

    fn thrust_at(&self, wind: f64, qd: &Gen) -> f64 {
        match (&self.model.turbine, &self.generator) {
            (Some(t), Some(g)) => {
                let rel = wind - (qd[0] + qd[4] * t.spec.hub_height);
                g.output(&t.spec, &t.tables, &t.gains, rel).thrust
            }
            _ => 0.0,
        }
    }

    fn hub_height(&self) -> f64 {
        self.model.turbine.as_ref().map_or(0.0, |t| t.spec.hub_height)
    }

    /// Generalized force for the given state. `moor` is the platform
    /// mooring wrench, held over the step.
    fn generalized_force(&self, q: &Gen, qd: &Gen, inp: &StageInputs, moor: &[f64; 6], dynamic: bool) -> Gen {
        let up = split(q);
        let vp = split(qd);
        let mut fp = self.platform.static_force;
        let kp = mat_vec(&self.platform.stiffness, &up);
        let thrust = if dynamic { self.thrust_at(inp.wind, qd) } else { self.thrust_at(inp.wind, &[0.0; N_GEN]) };
        let drag_p = viscous_drag(&vp, &[0.0; 6], &self.model.platform.drag);
        let rad_p = self.radiation(&self.platform, &vp, inp.rad_tau, dynamic);
        for i in 0..6 {
            fp[i] += -kp[i] + moor[i] + drag_p[i] + rad_p[i];
            if dynamic {
                fp[i] += inp.exc_p[i];
            }
        }
        fp[0] += thrust;
        fp[4] += thrust * self.hub_height();

        let mut out = [0.0; N_GEN];
        out[..6].copy_from_slice(&fp);
        if let (Some(fb), Some(fm)) = (&self.float, &self.model.float) {
            let uf = float_motion(q);
            let vf = float_motion(qd);
            let kf = mat_vec(&fb.stiffness, &uf);
            let drag_f = viscous_drag(&vf, &[0.0; 6], &fm.drag);
            let rad_f = self.radiation(fb, &vf, inp.rad_tau, dynamic);
            let mut ff = fb.static_force;
            for i in 0..6 {
                ff[i] += -kf[i] + drag_f[i] + rad_f[i];
                if dynamic {
                    ff[i] += inp.exc_f[i];
                }
                out[i] += ff[i];
            }
            out[S] = ff[2] - self.model.pto_damping * qd[S];
        }
        out
    }

    fn radiation(&self, body: &BodyTerms, v: &[f64; 6], tau: f64, dynamic: bool) -> [f64; 6] {
        if let Some(b) = &body.constant_damping {
            let f = mat_vec(b, v);
            return f.map(|x| -x);
        }
        if !dynamic || body.memory.is_none() {
            return [0.0; 6];
        }
        let mut f = [0.0; 6];
        for i in 0..6 {
            f[i] = body.rad_cur[i] + (body.rad_cur[i] - body.rad_prev[i]) * tau;
        }
        f
    }

    fn accel(&self, q: &Gen, qd: &Gen, inp: &StageInputs, moor: &[f64; 6]) -> Gen {
        let force = self.generalized_force(q, qd, inp, moor, true);
        let qa = DVector::from_iterator(self.active.len(), self.active.iter().map(|&i| force[i]));
        let acc = &self.m_inv * qa;
        let mut a = [0.0; N_GEN];
        for (k, &i) in self.active.iter().enumerate() {
            a[i] = acc[k];
        }
        a
    }

    fn static_residual(&self, q: &Gen, thrust_wind: f64) -> Result<Vec<f64>> {
        let moor = match &self.mooring {
            Some(m) => m.static_load(&split(q))?,
            None => [0.0; 6],
        };
        let inp = StageInputs { wind: thrust_wind, ..Default::default() };
        let f = self.generalized_force(q, &[0.0; N_GEN], &inp, &moor, false);
        Ok(self.active.iter().map(|&i| f[i]).collect())
    }

    /// Damped Newton for the static pose under buoyancy, gravity, mooring
    /// and the mean rotor thrust.
    fn solve_equilibrium(&mut self, wind: f64) -> Result<()> {
        let n = self.active.len();
        let scale = self.model.rho * self.model.g * self.model.platform.coeffs.volume.max(1.0);
        let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut q = [0.0; N_GEN];
        let mut r = self.static_residual(&q, wind)?;
        for _ in 0..60 {
            if norm(&r) < 1e-13 * scale {
                break;
            }
            let mut jac = DMatrix::<f64>::zeros(n, n);
            for (c, &i) in self.active.iter().enumerate() {
                let h = if (3..6).contains(&i) { 1e-6 } else { 1e-4 };
                let mut qp = q;
                qp[i] += h;
                let rp = self.static_residual(&qp, wind)?;
                for row in 0..n {
                    jac[(row, c)] = (rp[row] - r[row]) / h;
                }
            }
            let eps = 1e-9 * jac.amax();
            let step = jac
                .svd(true, true)
                .solve(&DVector::from_column_slice(&r), eps)
                .map_err(|e| Error::Convergence { message: format!("equilibrium Jacobian: {e}"), residual: norm(&r) })?;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let mut trial = q;
                for (k, &i) in self.active.iter().enumerate() {
                    trial[i] -= lambda * step[k];
                }
                if let Ok(rt) = self.static_residual(&trial, wind) {
                    if norm(&rt) < norm(&r) {
                        q = trial;
                        r = rt;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let res = norm(&r);
        if !(res < 1e-6 * scale) {
            return Err(Error::Convergence {
                message: format!("{}: no static equilibrium found", self.model.name),
                residual: res,
            });
        }
        self.q_eq = q;
        Ok(())
    }

    /// Bind the environment, find the loaded equilibrium and reset the
    /// state there with all memories cleared.
    pub fn prepare(&mut self, env: &Environment) -> Result<()> {
        env.sea.validate()?;
        let dt = self.settings.dt;
        let n_steps = (self.settings.duration / dt).round() as usize;

        self.mean_wind = 0.0;
        self.wind = vec![0.0; n_steps + 2];
        self.generator = None;
        if let Some(t) = &self.model.turbine {
            let spec = env.wind.clone().unwrap_or_else(|| crate::aero::WindSpec::steady(0.0));
            let mut series = synthesize_wind(&spec, t.spec.hub_height, (n_steps + 1) as f64 * dt, dt)?;
            series.resize(n_steps + 2, *series.last().unwrap_or(&0.0));
            self.mean_wind = spec.hub_mean(t.spec.hub_height);
            self.wind = series;
            self.generator = Some(GeneratorState::initial(&t.spec, &t.tables, &t.gains, self.mean_wind));
        }

        self.mooring = match &self.model.mooring {
            Some(m) => Some(MooringSystem::new(m.layout.clone(), m.env, m.model, dt, m.dt, &[0.0; 6])?),
            None => None,
        };
        self.solve_equilibrium(self.mean_wind)?;
        self.q = self.q_eq;
        self.qd = [0.0; N_GEN];
        self.t = 0.0;
        self.step_index = 0;
        self.settle_mooring()?;

        let field = WaveField::from_sea_state(&env.sea, &self.settings.spectrum)?;
        self.platform.exc = None;
        if let Some(f) = &mut self.float {
            f.exc = None;
        }
        self.clock = None;
        if !field.is_calm() {
            self.platform.exc = Some(ExcitationSeries::new(&field, &self.model.platform.coeffs)?);
            if let (Some(fb), Some(fm)) = (&mut self.float, &self.model.float) {
                fb.exc = Some(ExcitationSeries::new(&field, &fm.coeffs)?);
            }
            let omegas: Vec<f64> = field.components.iter().map(|c| c.omega).collect();
            self.clock = Some(PhasorClock::new(&omegas, 0.0, 0.5 * dt));
        }
        self.field = Some(field);
        self.exc_now = self.excitation_now();

        self.reset_radiation();
        self.prepared = true;
        Ok(())
    }

    fn reset_radiation(&mut self) {
        self.platform.reset_radiation(split(&self.qd));
        let vf = float_motion(&self.qd);
        if let Some(f) = &mut self.float {
            f.reset_radiation(vf);
        }
    }

    fn settle_mooring(&mut self) -> Result<()> {
        let pose = split(&self.q);
        if let Some(m) = &mut self.mooring {
            m.settle(&pose)?;
            self.moor_force = m.load(&pose)?;
        } else {
            self.moor_force = [0.0; 6];
        }
        Ok(())
    }

    /// Offset the state from equilibrium (for decay tests). Mooring lines are
    /// re-settled at the displaced pose.
    pub fn displace(&mut self, dof: usize, amount: f64) -> Result<()> {
        if dof >= N_GEN || !self.active.contains(&dof) {
            return Err(Error::InvalidInput(format!("DOF {dof} is not active")));
        }
        self.q[dof] += amount;
        self.settle_mooring()
    }

    fn excitation_now(&self) -> ([f64; 6], [f64; 6]) {
        match &self.clock {
            Some(c) => {
                let ph = c.phasors();
                let p = self.platform.exc.as_ref().map_or([0.0; 6], |e| e.force_from_phasors(ph));
                let f = self.float.as_ref().and_then(|f| f.exc.as_ref()).map_or([0.0; 6], |e| e.force_from_phasors(ph));
                (p, f)
            }
            None => ([0.0; 6], [0.0; 6]),
        }
    }

    /// PTO loads at the current state; equal and opposite along the axis.
    pub fn report(&self) -> StepReport {
        let pto = -self.model.pto_damping * self.qd[S];
        StepReport {
            time: self.t,
            pto_on_float: if self.float.is_some() { pto } else { 0.0 },
            pto_on_platform: if self.float.is_some() { -pto } else { 0.0 },
        }
    }

    /// Advance one step of `dt`.
    pub fn step(&mut self) -> Result<()> {
        if !self.prepared {
            return Err(Error::Config("prepare() must be called before stepping".into()));
        }
        let dt = self.settings.dt;
        let k = self.step_index;
        let w0 = self.wind[k];
        let w1 = self.wind[k + 1];
        let stride = self.rad_stride as f64;
        let phase = (k % self.rad_stride) as f64;

        let e0 = self.exc_now;
        if let Some(c) = &mut self.clock {
            c.advance();
        }
        let e_half = self.excitation_now();
        if let Some(c) = &mut self.clock {
            c.advance();
        }
        let e1 = self.excitation_now();

        let mk = |e: ([f64; 6], [f64; 6]), tau: f64, wind: f64| StageInputs { exc_p: e.0, exc_f: e.1, rad_tau: tau / stride, wind };
        let s0 = mk(e0, phase, w0);
        let sh = mk(e_half, phase + 0.5, 0.5 * (w0 + w1));
        let s1 = mk(e1, phase + 1.0, w1);

        let moor = self.moor_force;
        let (q, v) = (self.q, self.qd);
        let a1 = self.accel(&q, &v, &s0, &moor);
        let (q2, v2) = (add(&q, &v, 0.5 * dt), add(&v, &a1, 0.5 * dt));
        let a2 = self.accel(&q2, &v2, &sh, &moor);
        let (q3, v3) = (add(&q, &v2, 0.5 * dt), add(&v, &a2, 0.5 * dt));
        let a3 = self.accel(&q3, &v3, &sh, &moor);
        let (q4, v4) = (add(&q, &v3, dt), add(&v, &a3, dt));
        let a4 = self.accel(&q4, &v4, &s1, &moor);

        let mut qn = q;
        let mut vn = v;
        for i in 0..N_GEN {
            qn[i] += dt / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            vn[i] += dt / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }

        if let (Some(t), Some(g)) = (&self.model.turbine, &mut self.generator) {
            let rel = w0 - (v[0] + v[4] * t.spec.hub_height);
            g.step(&t.spec, &t.tables, &t.gains, rel, dt);
        }

        self.q = qn;
        self.qd = vn;
        self.t = (k + 1) as f64 * dt;
        self.step_index = k + 1;
        self.exc_now = e1;
        self.check_divergence()?;

        let pose = split(&self.q);
        if let Some(m) = &mut self.mooring {
            m.advance(&pose, &split(&self.qd), dt);
            self.moor_force = m.load(&pose)?;
        }

        if self.step_index % self.rad_stride == 0 {
            let vp = split(&self.qd);
            let vf = float_motion(&self.qd);
            push_radiation(&mut self.platform, vp);
            if let Some(f) = &mut self.float {
                push_radiation(f, vf);
            }
        }
        Ok(())
    }

    fn check_divergence(&self) -> Result<()> {
        const NAMES: [&str; N_GEN] = ["surge", "sway", "heave", "roll", "pitch", "yaw", "float_rel_heave"];
        for i in 0..N_GEN {
            let limit = if (3..6).contains(&i) { std::f64::consts::PI } else { 1e3 };
            if !self.q[i].is_finite() || !self.qd[i].is_finite() || self.q[i].abs() > limit {
                let state: Vec<String> = (0..N_GEN).map(|j| format!("{}={:.4e}", NAMES[j], self.q[j])).collect();
                return Err(Error::Divergence {
                    time: self.t,
                    diagnostics: format!("{} = {:.4e} out of bounds; state: {}", NAMES[i], self.q[i], state.join(", ")),
                });
            }
        }
        Ok(())
    }

    fn record_row(&self) -> Result<Vec<f64>> {
        let q = &self.q;
        let v = &self.qd;
        let wind = self.wind[self.step_index];
        let eta = self.field.as_ref().map_or(0.0, |f| f.elevation_at(self.t));
        let (thrust, power, rpm, pitch) = match (&self.model.turbine, &self.generator) {
            (Some(t), Some(g)) => {
                let rel = wind - (v[0] + v[4] * t.spec.hub_height);
                let o = g.output(&t.spec, &t.tables, &t.gains, rel);
                (o.thrust, o.gen_power, g.rotor_speed * 30.0 / std::f64::consts::PI, g.pitch.to_degrees())
            }
            _ => (0.0, 0.0, 0.0, 0.0),
        };
        let pto = -self.model.pto_damping * v[S];
        let fp = self.float_position();
        let mut row = vec![self.t, eta, wind, q[0], q[1], q[2], q[3], q[4], q[5], q[S], v[S]];
        row.extend([fp[0], fp[2], fp[4]]);
        row.extend([pto, -pto * v[S], rpm, pitch, thrust, power]);
        row.extend([self.moor_force[0], self.moor_force[2], self.moor_force[4]]);
        if let Some(m) = &self.mooring {
            row.extend(m.tensions()?.iter().map(|t| t.magnitude));
        }
        Ok(row)
    }

    pub fn channel_names(&self) -> Vec<String> {
        let mut names: Vec<String> = [
            "time",
            "wave_elevation",
            "wind_speed",
            "platform_surge",
            "platform_sway",
            "platform_heave",
            "platform_roll",
            "platform_pitch",
            "platform_yaw",
            "float_rel_heave",
            "float_rel_velocity",
            "float_surge",
            "float_heave",
            "float_pitch",
            "pto_force",
            "pto_power",
            "rotor_speed_rpm",
            "blade_pitch_deg",
            "rotor_thrust",
            "generator_power",
            "mooring_fx",
            "mooring_fz",
            "mooring_my",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        if let Some(m) = &self.mooring {
            names.extend((1..=m.layout.n_lines()).map(|k| format!("fairlead_tension_{k}")));
        }
        names
    }

    /// Integrate for the configured duration and collect recorded channels.
    pub fn run(&mut self) -> Result<TimeSeriesResult> {
        if !self.prepared {
            return Err(Error::Config("prepare() must be called before run()".into()));
        }
        let dt = self.settings.dt;
        let n_steps = (self.settings.duration / dt).round() as usize;
        let every = (self.settings.record_interval / dt).round() as usize;
        let mut result = TimeSeriesResult::new(
            self.model.name.clone(),
            self.settings.record_interval,
            self.settings.transient_cutoff,
            self.channel_names(),
        );
        result.push(self.record_row()?);
        while self.step_index < n_steps {
            self.step()?;
            if self.step_index % every == 0 {
                result.push(self.record_row()?);
            }
        }
        Ok(result)
    }
}

fn push_radiation(body: &mut BodyTerms, v: [f64; 6]) {
    if let Some(m) = &mut body.memory {
        m.push(v);
        body.rad_prev = body.rad_cur;
        body.rad_cur = m.force();
    }
}
