//! Lumped-mass line: nodes 0 (anchor) … N (fairlead), axial springs between
//! nodes, wet weight, Morison drag and added mass, penalty seabed contact.

use nalgebra::{DMatrix, DVector, Vector3};

use super::catenary::{self, CatenaryInput};
use super::{LineProps, MooringEnv};
use crate::error::{Error, Result};

type V3 = Vector3<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct LineState {
    pub pos: Vec<V3>,
    pub vel: Vec<V3>,
    pub tensions: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LumpedLine {
    pub props: LineProps,
    pub env: MooringEnv,
    pub anchor: V3,
    pub state: LineState,
    seg_len: f64,
    node_mass: f64,
    node_volume: f64,
    node_weight: f64,
    seg_damping: f64,
}

/// Scratch output of one force evaluation.
struct Forces {
    node: Vec<V3>,
    tensions: Vec<f64>,
}

impl LumpedLine {
    pub fn new(props: LineProps, env: MooringEnv, anchor: V3, fairlead: V3) -> Result<Self> {
        props.validate()?;
        let n = props.n_segments;
        let seg_len = props.unstretched_length / n as f64;
        let mut pos = Vec::with_capacity(n + 1);
        for k in 0..=n {
            pos.push(anchor + (fairlead - anchor) * (k as f64 / n as f64));
        }
        let node_mass = props.mass_per_length * seg_len;
        Ok(Self {
            anchor,
            state: LineState { vel: vec![V3::zeros(); n + 1], tensions: vec![0.0; n], pos },
            seg_len,
            node_mass,
            node_volume: 0.25 * std::f64::consts::PI * props.diameter.powi(2) * seg_len,
            node_weight: props.wet_mass_per_length * seg_len * env.g,
            seg_damping: props.internal_damping * 2.0 * (props.ea * props.mass_per_length).sqrt(),
            props,
            env,
        })
    }

    pub fn n_segments(&self) -> usize {
        self.props.n_segments
    }

    pub fn segment_length(&self) -> f64 {
        self.seg_len
    }

    /// Axial wave speed √(EA/m).
    pub fn wave_speed(&self) -> f64 {
        (self.props.ea / self.props.mass_per_length).sqrt()
    }

    /// Largest stable explicit step for this discretization.
    pub fn critical_dt(&self) -> f64 {
        let axial = self.seg_len / self.wave_speed();
        let contact = (self.node_mass / (self.props.seabed_stiffness * self.seg_len)).sqrt();
        axial.min(contact)
    }

    fn tangent(pos: &[V3], i: usize) -> V3 {
        let n = pos.len() - 1;
        let d = if i == 0 {
            pos[1] - pos[0]
        } else if i == n {
            pos[n] - pos[n - 1]
        } else {
            pos[i + 1] - pos[i - 1]
        };
        let m = d.norm();
        if m > 0.0 {
            d / m
        } else {
            V3::z()
        }
    }

    fn forces(&self, pos: &[V3], vel: &[V3], dynamic: bool) -> Forces {
        let n = pos.len() - 1;
        let p = &self.props;
        let mut node = vec![V3::zeros(); n + 1];
        let mut tensions = vec![0.0; n];
        for s in 0..n {
            let d = pos[s + 1] - pos[s];
            let len = d.norm();
            if len == 0.0 {
                continue;
            }
            let u = d / len;
            let strain = (len - self.seg_len) / self.seg_len;
            // statics keep the spring two-sided so slack starting guesses stay solvable
            let mut t = if strain > 0.0 || !dynamic { p.ea * strain } else { 0.0 };
            if dynamic && strain > 0.0 {
                let rate = (vel[s + 1] - vel[s]).dot(&u);
                t = (t + self.seg_damping * rate).max(0.0);
            }
            tensions[s] = t;
            node[s] += u * t;
            node[s + 1] -= u * t;
        }
        let seabed = -self.env.depth;
        let k_contact = p.seabed_stiffness * self.seg_len;
        let c_contact = 2.0 * (k_contact * self.node_mass).sqrt();
        for i in 0..=n {
            let share = if i == 0 || i == n { 0.5 } else { 1.0 };
            node[i].z -= share * self.node_weight;
            let pen = seabed - pos[i].z;
            if pen > 0.0 {
                let mut fz = share * k_contact * pen;
                if dynamic {
                    fz -= share * c_contact * vel[i].z;
                }
                node[i].z += fz.max(0.0);
            }
            if dynamic {
                let q = Self::tangent(pos, i);
                let v = vel[i];
                let vt = q * v.dot(&q);
                let vn = v - vt;
                let l = share * self.seg_len;
                let rho = self.env.rho;
                node[i] -= vn * (0.5 * rho * p.cdn * p.diameter * l * vn.norm());
                node[i] -= vt * (0.5 * rho * p.cdt * std::f64::consts::PI * p.diameter * l * vt.norm());
            }
        }
        Forces { node, tensions }
    }

    /// Solve M a = F for an internal node with the anisotropic added mass.
    fn accel(&self, pos: &[V3], i: usize, f: &V3) -> V3 {
        let q = Self::tangent(pos, i);
        let ra = self.env.rho * self.node_volume;
        let a = self.node_mass + ra * self.props.can;
        let b = ra * (self.props.cat - self.props.can);
        let fq = q.dot(f);
        (f - q * (fq * b / (a + b))) / a
    }

    /// Force the line applies to the body at the fairlead (includes the
    /// fairlead node's share of weight and drag).
    pub fn fairlead_force(&self) -> V3 {
        let f = self.forces(&self.state.pos, &self.state.vel, true);
        f.node[self.n_segments()]
    }

    pub fn fairlead_static_force(&self) -> V3 {
        let f = self.forces(&self.state.pos, &self.state.vel, false);
        f.node[self.n_segments()]
    }

    pub fn anchor_force(&self) -> V3 {
        let f = self.forces(&self.state.pos, &self.state.vel, true);
        -f.node[0]
    }

    pub fn fairlead(&self) -> V3 {
        self.state.pos[self.n_segments()]
    }

    pub fn refresh_tensions(&mut self) {
        let f = self.forces(&self.state.pos, &self.state.vel, true);
        self.state.tensions = f.tensions;
    }

    fn catenary_input(&self, fairlead: &V3) -> (CatenaryInput, V3) {
        let d = fairlead - self.anchor;
        let horiz = V3::new(d.x, d.y, 0.0);
        let xf = horiz.norm();
        let dir = if xf > 0.0 { horiz / xf } else { V3::x() };
        let inp = CatenaryInput {
            xf,
            zf: d.z,
            length: self.props.unstretched_length,
            w: self.props.wet_mass_per_length * self.env.g,
            ea: self.props.ea,
            seabed: (self.anchor.z + self.env.depth).abs() < 1e-6 * self.env.depth.max(1.0),
        };
        (inp, dir)
    }

    /// Elastic-catenary node positions for the given fairlead position.
    pub fn catenary_nodes(&self, fairlead: &V3) -> Result<(Vec<V3>, catenary::CatenarySolution)> {
        let (inp, dir) = self.catenary_input(fairlead);
        let sol = catenary::solve(&inp)?;
        let n = self.n_segments();
        let nodes = (0..=n)
            .map(|k| {
                let (x, z) = sol.point(&inp, k as f64 * self.seg_len);
                self.anchor + dir * x + V3::z() * z
            })
            .collect();
        Ok((nodes, sol))
    }

    /// Force on the body from the quasi-static catenary at `fairlead`.
    pub fn catenary_fairlead_force(&self, fairlead: &V3) -> Result<V3> {
        let (inp, dir) = self.catenary_input(fairlead);
        let sol = catenary::solve(&inp)?;
        Ok(-dir * sol.h - V3::z() * sol.v)
    }

    /// Static equilibrium of the internal nodes with the fairlead held at
    /// `fairlead`, by Newton iteration from the catenary shape.
    pub fn solve_static(&mut self, fairlead: &V3) -> Result<()> {
        let n = self.n_segments();
        let mut pos = match self.catenary_nodes(fairlead) {
            Ok((nodes, _)) => nodes,
            Err(_) => self.state.pos.clone(),
        };
        pos[0] = self.anchor;
        pos[n] = *fairlead;
        let m = 3 * (n - 1);
        let zero_vel = vec![V3::zeros(); n + 1];
        let residual = |pos: &[V3]| -> DVector<f64> {
            let f = self.forces(pos, &zero_vel, false);
            DVector::from_iterator(m, f.node[1..n].iter().flat_map(|v| [v.x, v.y, v.z]))
        };
        let scale = self.props.wet_mass_per_length * self.env.g * self.props.unstretched_length;
        let tol = 1e-9 * scale;
        let mut r = residual(&pos);
        for _ in 0..100 {
            if r.amax() < tol {
                break;
            }
            let mut jac = DMatrix::zeros(m, m);
            // the stiffness is block tridiagonal; perturb every third node together
            for comp in 0..3 {
                for start in 0..3 {
                    let h = 1e-6 * self.seg_len;
                    let mut plus = pos.clone();
                    let mut minus = pos.clone();
                    let mut k = 1 + start;
                    while k < n {
                        plus[k][comp] += h;
                        minus[k][comp] -= h;
                        k += 3;
                    }
                    let rp = residual(&plus);
                    let rm = residual(&minus);
                    let mut k = 1 + start;
                    while k < n {
                        let col = 3 * (k - 1) + comp;
                        for row_node in k.saturating_sub(1).max(1)..=(k + 1).min(n - 1) {
                            for rc in 0..3 {
                                let row = 3 * (row_node - 1) + rc;
                                jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
                            }
                        }
                        k += 3;
                    }
                }
            }
            let step = jac.lu().solve(&(-&r)).ok_or_else(|| Error::Convergence {
                message: "singular mooring stiffness matrix".into(),
                residual: r.amax() / scale,
            })?;
            let mut t = 1.0;
            loop {
                let mut trial = pos.clone();
                for k in 1..n {
                    for c in 0..3 {
                        trial[k][c] += t * step[3 * (k - 1) + c];
                    }
                }
                let rt = residual(&trial);
                if rt.norm() < r.norm() || t < 1e-4 {
                    pos = trial;
                    r = rt;
                    break;
                }
                t *= 0.5;
            }
        }
        if r.amax() >= tol {
            return Err(Error::Convergence {
                message: "lumped-mass static solve did not converge".into(),
                residual: r.amax() / scale,
            });
        }
        self.state.pos = pos;
        self.state.vel = vec![V3::zeros(); n + 1];
        self.refresh_tensions();
        Ok(())
    }

    /// Advance by `dt` with RK4 while the fairlead moves linearly from its
    /// current state to (`fair_pos`, `fair_vel`).
    pub fn step(&mut self, fair_pos: &V3, fair_vel: &V3, dt: f64) {
        let n = self.n_segments();
        let p0 = self.state.pos[n];
        let v0 = self.state.vel[n];
        let fair_at = |tau: f64| (p0 + (fair_pos - p0) * tau, v0 + (fair_vel - v0) * tau);

        let deriv = |pos: &[V3], vel: &[V3]| -> (Vec<V3>, Vec<V3>) {
            let f = self.forces(pos, vel, true);
            let mut dx = vec![V3::zeros(); n + 1];
            let mut dv = vec![V3::zeros(); n + 1];
            for i in 1..n {
                dx[i] = vel[i];
                dv[i] = self.accel(pos, i, &f.node[i]);
            }
            (dx, dv)
        };
        let stage = |base_p: &[V3], base_v: &[V3], kx: &[V3], kv: &[V3], h: f64, tau: f64| {
            let mut p: Vec<V3> = base_p.iter().zip(kx).map(|(a, b)| a + b * h).collect();
            let mut v: Vec<V3> = base_v.iter().zip(kv).map(|(a, b)| a + b * h).collect();
            let (fp, fv) = fair_at(tau);
            p[0] = self.anchor;
            v[0] = V3::zeros();
            p[n] = fp;
            v[n] = fv;
            (p, v)
        };

        let x0 = self.state.pos.clone();
        let u0 = self.state.vel.clone();
        let (k1x, k1v) = deriv(&x0, &u0);
        let (x1, u1) = stage(&x0, &u0, &k1x, &k1v, 0.5 * dt, 0.5);
        let (k2x, k2v) = deriv(&x1, &u1);
        let (x2, u2) = stage(&x0, &u0, &k2x, &k2v, 0.5 * dt, 0.5);
        let (k3x, k3v) = deriv(&x2, &u2);
        let (x3, u3) = stage(&x0, &u0, &k3x, &k3v, dt, 1.0);
        let (k4x, k4v) = deriv(&x3, &u3);
        for i in 1..n {
            self.state.pos[i] = x0[i] + (k1x[i] + k2x[i] * 2.0 + k3x[i] * 2.0 + k4x[i]) * (dt / 6.0);
            self.state.vel[i] = u0[i] + (k1v[i] + k2v[i] * 2.0 + k3v[i] * 2.0 + k4v[i]) * (dt / 6.0);
        }
        self.state.pos[n] = *fair_pos;
        self.state.vel[n] = *fair_vel;
        self.state.pos[0] = self.anchor;
        self.state.vel[0] = V3::zeros();
    }

    /// Kinetic plus elastic plus gravitational energy of the line.
    pub fn energy(&self) -> f64 {
        let n = self.n_segments();
        let mut e = 0.0;
        for i in 1..n {
            e += 0.5 * self.node_mass * self.state.vel[i].norm_squared();
            e += self.node_weight * self.state.pos[i].z;
            let pen = -self.env.depth - self.state.pos[i].z;
            if pen > 0.0 {
                e += 0.5 * self.props.seabed_stiffness * self.seg_len * pen * pen;
            }
        }
        for s in 0..n {
            let len = (self.state.pos[s + 1] - self.state.pos[s]).norm();
            let ext = len - self.seg_len;
            if ext > 0.0 {
                e += 0.5 * self.props.ea / self.seg_len * ext * ext;
            }
        }
        e
    }
}
