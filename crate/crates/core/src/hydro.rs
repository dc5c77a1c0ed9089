//! Linear potential-flow body data and the hydrodynamic force terms of the
//! Cummins equation: hydrostatic restoring, radiation memory via an impulse
//! response function, and quadratic viscous drag.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{Matrix6, Vector6};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DOF_NAMES: [&str; 6] = ["surge", "sway", "heave", "roll", "pitch", "yaw"];

pub type Mat6 = [[f64; 6]; 6];

pub fn to_matrix6(m: &Mat6) -> Matrix6<f64> {
    Matrix6::from_fn(|i, j| m[i][j])
}

pub fn from_matrix6(m: &Matrix6<f64>) -> Mat6 {
    let mut out = [[0.0; 6]; 6];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitationPoint {
    pub w: f64,
    /// Force (or moment) per metre of wave amplitude.
    pub mag: f64,
    /// rad
    pub phase: f64,
}

/// Frequency-domain coefficients of one rigid body, SI units throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HydroCoefficients {
    pub rho: f64,
    pub g: f64,
    pub freqs: Vec<f64>,
    pub added_mass: Vec<Mat6>,
    pub damping: Vec<Mat6>,
    pub a_inf: Mat6,
    pub hydrostatic: Mat6,
    /// Keyed by DOF name (`surge` … `yaw`); absent DOFs have no excitation.
    #[serde(default)]
    pub excitation: BTreeMap<String, Vec<ExcitationPoint>>,
    pub cog: [f64; 3],
    pub volume: f64,
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

fn is_symmetric(m: &Mat6, rel: f64) -> bool {
    let scale = m.iter().flatten().fold(0.0f64, |a, &v| a.max(v.abs())).max(1e-300);
    (0..6).all(|i| (0..6).all(|j| (m[i][j] - m[j][i]).abs() <= rel * scale))
}

impl HydroCoefficients {
    /// A body with no radiation or excitation, only hydrostatics.
    pub fn hydrostatic_only(rho: f64, g: f64, hydrostatic: Mat6, volume: f64) -> Self {
        Self {
            rho,
            g,
            freqs: vec![0.0, 1.0],
            added_mass: vec![[[0.0; 6]; 6]; 2],
            damping: vec![[[0.0; 6]; 6]; 2],
            a_inf: [[0.0; 6]; 6],
            hydrostatic,
            excitation: BTreeMap::new(),
            cog: [0.0; 3],
            volume,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.g > 0.0) {
            return Err(Error::validation("rho/g", "must be positive"));
        }
        if self.freqs.len() < 2 {
            return Err(Error::validation("freqs", "need at least two frequencies"));
        }
        if self.freqs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::validation("freqs", "frequencies must be strictly increasing"));
        }
        if self.added_mass.len() != self.freqs.len() {
            return Err(Error::validation(
                "added_mass",
                format!("{} matrices for {} frequencies", self.added_mass.len(), self.freqs.len()),
            ));
        }
        if self.damping.len() != self.freqs.len() {
            return Err(Error::validation(
                "damping",
                format!("{} matrices for {} frequencies", self.damping.len(), self.freqs.len()),
            ));
        }
        for (k, b) in self.damping.iter().enumerate() {
            if !is_symmetric(b, 1e-6) {
                return Err(Error::validation("damping", format!("matrix {k} is not symmetric")));
            }
            let m = to_matrix6(b);
            let scale = m.abs().max().max(1e-300);
            let min_eig = m.symmetric_eigen().eigenvalues.min();
            if min_eig < -1e-8 * scale {
                return Err(Error::validation(
                    "damping",
                    format!("matrix {k} is not positive semidefinite (eigenvalue {min_eig:.3e})"),
                ));
            }
        }
        if !is_symmetric(&self.hydrostatic, 1e-9) {
            return Err(Error::validation("hydrostatic", "matrix is not symmetric"));
        }
        let last = self.added_mass.last().expect("checked length");
        for i in 0..6 {
            let ai = self.a_inf[i][i];
            let al = last[i][i];
            if ai < 0.0 || (ai - al).abs() > 0.5 * ai.abs().max(al.abs()) + 1e-9 * (1.0 + al.abs()) {
                return Err(Error::validation(
                    "a_inf",
                    format!(
                        "diagonal {i} ({ai:.4e}) inconsistent with added mass at the highest frequency ({al:.4e})"
                    ),
                ));
            }
        }
        for (key, pts) in &self.excitation {
            if !DOF_NAMES.contains(&key.as_str()) {
                return Err(Error::validation("excitation", format!("unknown DOF `{key}`")));
            }
            if pts.is_empty() || pts.windows(2).any(|w| !(w[1].w > w[0].w)) {
                return Err(Error::validation(
                    "excitation",
                    format!("`{key}` frequencies must be non-empty and strictly increasing"),
                ));
            }
        }
        if self.volume < 0.0 {
            return Err(Error::validation("volume", "must be non-negative"));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let s = serde_json::to_string_pretty(self)?;
        std::fs::write(path.as_ref(), s).map_err(|e| Error::io(path, e))
    }

    /// Complex excitation coefficient per unit wave amplitude, interpolated
    /// linearly in magnitude and (locally unwrapped) phase.
    pub fn excitation_at(&self, dof: usize, omega: f64) -> Result<Complex64> {
        let Some(pts) = self.excitation.get(DOF_NAMES[dof]) else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let (lo, hi) = (pts[0].w, pts[pts.len() - 1].w);
        if omega < lo || omega > hi {
            return Err(Error::Extrapolation { freq: omega, lo, hi });
        }
        if pts.len() == 1 {
            return Ok(Complex64::from_polar(pts[0].mag, pts[0].phase));
        }
        let k = pts.partition_point(|p| p.w <= omega).clamp(1, pts.len() - 1) - 1;
        let (a, b) = (pts[k], pts[k + 1]);
        let f = (omega - a.w) / (b.w - a.w);
        let mag = a.mag + f * (b.mag - a.mag);
        let phase = a.phase + f * wrap_pi(b.phase - a.phase);
        Ok(Complex64::from_polar(mag, phase))
    }

    /// Radiation damping B(ω) interpolated linearly, zero outside the table.
    pub fn damping_at(&self, omega: f64) -> Matrix6<f64> {
        let f = &self.freqs;
        if omega < f[0] || omega > f[f.len() - 1] {
            return Matrix6::zeros();
        }
        let k = f.partition_point(|&w| w <= omega).clamp(1, f.len() - 1) - 1;
        let t = (omega - f[k]) / (f[k + 1] - f[k]);
        to_matrix6(&self.damping[k]) * (1.0 - t) + to_matrix6(&self.damping[k + 1]) * t
    }

    pub fn added_mass_at(&self, omega: f64) -> Matrix6<f64> {
        let f = &self.freqs;
        let w = omega.clamp(f[0], f[f.len() - 1]);
        let k = f.partition_point(|&x| x <= w).clamp(1, f.len() - 1) - 1;
        let t = (w - f[k]) / (f[k + 1] - f[k]);
        to_matrix6(&self.added_mass[k]) * (1.0 - t) + to_matrix6(&self.added_mass[k + 1]) * t
    }
}

/// Load and validate a coefficient file (JSON schema documented in the README).
pub fn load_coefficients(path: impl AsRef<Path>) -> Result<HydroCoefficients> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&path, e))?;
    HydroCoefficients::from_json_str(&text)
}

/// Radiation impulse-response kernel K(t) sampled at `dt` on [0, t_max].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiationIrf {
    pub dt: f64,
    pub t_max: f64,
    pub kernel: Vec<Mat6>,
}

/// ∫ B(ω) cos(ωt) dω for B piecewise linear on `freqs`, zero outside.
fn cosine_transform(freqs: &[f64], values: &[f64], t: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..freqs.len() - 1 {
        let (a, b) = (freqs[k], freqs[k + 1]);
        let (fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 && fb == 0.0 {
            continue;
        }
        let h = b - a;
        if t * h < 0.05 {
            // 3-point Gauss-Legendre on the segment
            let nodes = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
            let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
            for (x, wq) in nodes.iter().zip(weights) {
                let u = 0.5 * (x + 1.0);
                let w = a + u * h;
                sum += 0.5 * h * wq * (fa + u * (fb - fa)) * (w * t).cos();
            }
        } else {
            let s = (fb - fa) / h;
            sum += (fb * (b * t).sin() - fa * (a * t).sin()) / t
                + s * ((b * t).cos() - (a * t).cos()) / (t * t);
        }
    }
    sum
}

fn kernel_entries(freqs: &[f64], damping: &[Mat6], dt: f64, n: usize) -> Vec<Mat6> {
    let mut kernel = vec![[[0.0; 6]; 6]; n];
    for i in 0..6 {
        for j in i..6 {
            let vals: Vec<f64> = damping.iter().map(|m| 0.5 * (m[i][j] + m[j][i])).collect();
            if vals.iter().all(|&v| v == 0.0) {
                continue;
            }
            for (k, kt) in kernel.iter_mut().enumerate() {
                let v = 2.0 / PI * cosine_transform(freqs, &vals, k as f64 * dt);
                kt[i][j] = v;
                kt[j][i] = v;
            }
        }
    }
    kernel
}

fn kernel_peak(kernel: &[Mat6]) -> f64 {
    kernel.iter().flatten().flatten().fold(0.0f64, |a, &v| a.max(v.abs()))
}

/// K(t) = (2/π)∫B(ω)cos(ωt)dω with B linear between table points and zero
/// beyond the table. Fails if halving the table resolution moves K by more
/// than 1 % of its peak, or if K has not decayed below 1 % of its peak by t_max.
pub fn radiation_irf(coeffs: &HydroCoefficients, dt: f64, t_max: f64) -> Result<RadiationIrf> {
    if !(dt > 0.0 && t_max > dt) {
        return Err(Error::InvalidInput("radiation IRF needs 0 < dt < t_max".into()));
    }
    let n = (t_max / dt).round() as usize + 1;
    let kernel = kernel_entries(&coeffs.freqs, &coeffs.damping, dt, n);
    let peak = kernel_peak(&kernel);
    if peak == 0.0 {
        return Ok(RadiationIrf { dt, t_max, kernel });
    }

    if coeffs.freqs.len() >= 5 {
        let keep: Vec<usize> = (0..coeffs.freqs.len())
            .filter(|&k| k % 2 == 0 || k == coeffs.freqs.len() - 1)
            .collect();
        let f2: Vec<f64> = keep.iter().map(|&k| coeffs.freqs[k]).collect();
        let b2: Vec<Mat6> = keep.iter().map(|&k| coeffs.damping[k]).collect();
        let coarse = kernel_entries(&f2, &b2, dt, n);
        let diff = kernel
            .iter()
            .zip(&coarse)
            .flat_map(|(a, b)| a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()))
            .fold(0.0f64, f64::max);
        if diff > 0.01 * peak {
            return Err(Error::validation(
                "damping",
                format!(
                    "frequency table too coarse: halving resolution changes K by {:.2}% of peak",
                    100.0 * diff / peak
                ),
            ));
        }
    }

    let tail_len = (n / 20).max(1);
    let tail = kernel_peak(&kernel[n - tail_len..]);
    if tail > 0.01 * peak {
        return Err(Error::Window(format!(
            "kernel tail is {:.2}% of peak at t_max = {t_max} s; increase t_max",
            100.0 * tail / peak
        )));
    }
    Ok(RadiationIrf { dt, t_max, kernel })
}

impl RadiationIrf {
    pub fn len(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernel.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        kernel_peak(&self.kernel) == 0.0
    }

    /// (row, column) entries that are non-zero anywhere in time.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                if self.kernel.iter().any(|k| k[i][j] != 0.0) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn weight(&self, j: usize) -> f64 {
        let n = self.kernel.len();
        if n == 1 {
            self.dt
        } else if j == 0 || j == n - 1 {
            0.5 * self.dt
        } else {
            self.dt
        }
    }
}

/// Velocity samples at a fixed spacing; `samples.last()` is the current time.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityHistory {
    pub dt: f64,
    pub samples: Vec<[f64; 6]>,
}

/// F = −∫₀^{t_max} K(τ)·v(t−τ)dτ by trapezoidal discrete convolution; history
/// before the first sample is zero.
pub fn radiation_force(history: &VelocityHistory, irf: &RadiationIrf) -> Result<[f64; 6]> {
    if ((history.dt - irf.dt) / irf.dt).abs() > 1e-9 {
        return Err(Error::Sampling(format!(
            "velocity history dt {} differs from kernel dt {}",
            history.dt, irf.dt
        )));
    }
    let mut f = [0.0; 6];
    let n = history.samples.len();
    for (lag, k) in irf.kernel.iter().enumerate().take(n) {
        let v = &history.samples[n - 1 - lag];
        let w = irf.weight(lag);
        for i in 0..6 {
            for j in 0..6 {
                f[i] -= w * k[i][j] * v[j];
            }
        }
    }
    Ok(f)
}

/// Ring buffer convolution used inside the time integrator.
#[derive(Debug, Clone)]
pub struct RadiationMemory {
    irf: RadiationIrf,
    pairs: Vec<(usize, usize)>,
    buf: Vec<[f64; 6]>,
    head: usize,
    filled: usize,
}

impl RadiationMemory {
    pub fn new(irf: RadiationIrf) -> Self {
        let pairs = irf.nonzero_pairs();
        let n = irf.len();
        Self {
            irf,
            pairs,
            buf: vec![[0.0; 6]; n],
            head: 0,
            filled: 0,
        }
    }

    pub fn dt(&self) -> f64 {
        self.irf.dt
    }

    /// Forget the velocity history.
    pub fn reset(&mut self) {
        self.buf.iter_mut().for_each(|v| *v = [0.0; 6]);
        self.head = 0;
        self.filled = 0;
    }

    pub fn is_zero(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, v: [f64; 6]) {
        if self.buf.is_empty() {
            return;
        }
        self.head = (self.head + 1) % self.buf.len();
        self.buf[self.head] = v;
        self.filled = (self.filled + 1).min(self.buf.len());
    }

    /// Convolution with the most recent sample at lag zero.
    pub fn force(&self) -> [f64; 6] {
        let mut f = [0.0; 6];
        if self.pairs.is_empty() {
            return f;
        }
        let n = self.buf.len();
        for lag in 0..self.filled {
            let v = &self.buf[(self.head + n - lag) % n];
            let k = &self.irf.kernel[lag];
            let w = self.irf.weight(lag);
            for &(i, j) in &self.pairs {
                f[i] -= w * k[i][j] * v[j];
            }
        }
        f
    }
}

pub fn hydrostatic_force(displacement: &[f64; 6], coeffs: &HydroCoefficients) -> [f64; 6] {
    let x = Vector6::from_row_slice(displacement);
    let f = -(to_matrix6(&coeffs.hydrostatic) * x);
    [f[0], f[1], f[2], f[3], f[4], f[5]]
}

/// Per-DOF quadratic drag coefficients (½ρC_dA lumped), N/(m/s)² family.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DragModel {
    pub coeffs: [f64; 6],
}

impl DragModel {
    pub fn validate(&self) -> Result<()> {
        if self.coeffs.iter().any(|&c| !(c >= 0.0)) {
            return Err(Error::validation("drag", "coefficients must be non-negative"));
        }
        Ok(())
    }

    pub fn combined(&self, other: &DragModel) -> DragModel {
        let mut coeffs = self.coeffs;
        for (c, o) in coeffs.iter_mut().zip(other.coeffs) {
            *c += o;
        }
        DragModel { coeffs }
    }
}

/// F = −c_d |v_rel| v_rel per DOF, v_rel = body velocity − fluid velocity.
pub fn viscous_drag(velocity: &[f64; 6], fluid_velocity: &[f64; 6], drag: &DragModel) -> [f64; 6] {
    let mut f = [0.0; 6];
    for i in 0..6 {
        let vr = velocity[i] - fluid_velocity[i];
        f[i] = -drag.coeffs[i] * vr.abs() * vr;
    }
    f
}
