//! Sea states, wave spectra and free-surface / excitation synthesis.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{num_complex::Complex64, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydro::HydroCoefficients;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Regular,
    Irregular,
}

/// A wave condition. For regular waves `height`/`period` are H and T; for
/// irregular waves they are Hm0 and the energy period Te.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeaState {
    pub kind: WaveKind,
    pub height: f64,
    pub period: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub heading: f64,
}

fn default_gamma() -> f64 {
    1.0
}

impl SeaState {
    pub fn regular(height: f64, period: f64) -> Self {
        Self {
            kind: WaveKind::Regular,
            height,
            period,
            gamma: 1.0,
            seed: 0,
            heading: 0.0,
        }
    }

    pub fn irregular(hm0: f64, te: f64, seed: u64) -> Self {
        Self {
            kind: WaveKind::Irregular,
            height: hm0,
            period: te,
            gamma: 1.0,
            seed,
            heading: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.height >= 0.0) || !(self.period > 0.0) || !(self.gamma >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "sea state needs height >= 0, period > 0, gamma >= 1 (got {}, {}, {})",
                self.height, self.period, self.gamma
            )));
        }
        Ok(())
    }
}

/// Frequency discretization used for irregular synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub n_components: usize,
    /// Lower bound as a multiple of the peak frequency.
    pub lo_factor: f64,
    /// Upper bound as a multiple of the peak frequency.
    pub hi_factor: f64,
}

impl Default for SpectrumGrid {
    fn default() -> Self {
        Self {
            n_components: 500,
            lo_factor: 0.2,
            hi_factor: 5.0,
        }
    }
}

/// One-sided wave spectrum sampled on an equally spaced grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Bin-center frequencies, rad/s.
    pub freqs: Vec<f64>,
    /// Spectral density, m²·s/rad.
    pub density: Vec<f64>,
    pub d_omega: f64,
}

impl Spectrum {
    /// Zeroth moment by midpoint quadrature over the grid.
    pub fn m0(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.d_omega
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,density\n");
        for (w, d) in self.freqs.iter().zip(&self.density) {
            s.push_str(&format!("{w},{d}\n"));
        }
        s
    }
}

/// Unnormalized JONSWAP shape in terms of x = ω/ωp.
fn jonswap_shape(x: f64, gamma: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let sigma = if x <= 1.0 { 0.07 } else { 0.09 };
    let r = (-(x - 1.0).powi(2) / (2.0 * sigma * sigma)).exp();
    x.powi(-5) * (-1.25 * x.powi(-4)).exp() * gamma.powf(r)
}

/// Simpson quadrature of x^n · shape over x ∈ (0, ∞), n < 4.
fn shape_moment(n: i32, gamma: f64) -> f64 {
    let (a, b, m) = (0.05, 30.0, 60_000usize);
    let h = (b - a) / m as f64;
    let f = |x: f64| x.powi(n) * jonswap_shape(x, gamma);
    let mut s = f(a) + f(b);
    for k in 1..m {
        let x = a + k as f64 * h;
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    // tail beyond b where the shape is x^-5 to within 1.25·b^-4
    let tail = b.powi(n - 4) / f64::from(4 - n);
    s * h / 3.0 + tail
}

/// Ratio Te/Tp of the JONSWAP shape for a given peak enhancement.
pub fn te_over_tp(gamma: f64) -> f64 {
    shape_moment(-1, gamma) / shape_moment(0, gamma)
}

/// JONSWAP spectrum (Pierson-Moskowitz for γ = 1) normalized so that
/// 4·√m0 = Hm0 over the full frequency axis.
pub fn make_spectrum(sea_state: &SeaState, grid: &SpectrumGrid) -> Result<Spectrum> {
    sea_state.validate()?;
    if sea_state.kind != WaveKind::Irregular {
        return Err(Error::InvalidInput("spectra are defined for irregular sea states".into()));
    }
    if sea_state.height <= 0.0 {
        return Err(Error::DegenerateSpectrum(
            "irregular sea state with non-positive Hm0".into(),
        ));
    }
    if grid.n_components == 0 || !(grid.hi_factor > grid.lo_factor && grid.lo_factor > 0.0) {
        return Err(Error::InvalidInput("bad spectrum grid".into()));
    }
    let gamma = sea_state.gamma;
    let tp = sea_state.period / te_over_tp(gamma);
    let wp = 2.0 * PI / tp;
    // ∫S dω = scale · wp · ∫shape dx must equal Hm0²/16.
    let scale = sea_state.height.powi(2) / 16.0 / (wp * shape_moment(0, gamma));
    let lo = grid.lo_factor * wp;
    let d_omega = (grid.hi_factor - grid.lo_factor) * wp / grid.n_components as f64;
    let freqs: Vec<f64> = (0..grid.n_components)
        .map(|i| lo + (i as f64 + 0.5) * d_omega)
        .collect();
    let density = freqs.iter().map(|&w| scale * jonswap_shape(w / wp, gamma)).collect();
    Ok(Spectrum {
        freqs,
        density,
        d_omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveComponent {
    pub amplitude: f64,
    /// rad/s
    pub omega: f64,
    pub phase: f64,
}

/// Component table describing a sea surface, without any sampled series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveField {
    pub components: Vec<WaveComponent>,
}

impl WaveField {
    pub fn from_sea_state(sea_state: &SeaState, grid: &SpectrumGrid) -> Result<Self> {
        sea_state.validate()?;
        let components = match sea_state.kind {
            WaveKind::Regular => vec![WaveComponent {
                amplitude: 0.5 * sea_state.height,
                omega: 2.0 * PI / sea_state.period,
                phase: 0.0,
            }],
            WaveKind::Irregular => {
                let spec = make_spectrum(sea_state, grid)?;
                let mut rng = ChaCha8Rng::seed_from_u64(sea_state.seed);
                spec.freqs
                    .iter()
                    .zip(&spec.density)
                    .map(|(&omega, &s)| WaveComponent {
                        amplitude: (2.0 * s * spec.d_omega).sqrt(),
                        omega,
                        phase: rng.gen::<f64>() * 2.0 * PI,
                    })
                    .collect()
            }
        };
        Ok(Self { components })
    }

    pub fn elevation_at(&self, t: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.amplitude * (c.omega * t + c.phase).cos())
            .sum()
    }

    pub fn max_omega(&self) -> f64 {
        self.components.iter().map(|c| c.omega).fold(0.0, f64::max)
    }

    pub fn is_calm(&self) -> bool {
        self.components.iter().all(|c| c.amplitude == 0.0)
    }
}

/// A sampled free-surface record together with its component table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveRealization {
    pub dt: f64,
    pub elevation: Vec<f64>,
    pub components: Vec<WaveComponent>,
}

impl WaveRealization {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.elevation.len()).map(move |k| k as f64 * self.dt)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,eta\n");
        for (t, e) in self.times().zip(&self.elevation) {
            s.push_str(&format!("{t},{e}\n"));
        }
        s
    }
}

fn check_sampling(max_omega: f64, dt: f64) -> Result<()> {
    if max_omega > 0.0 && dt > 2.0 * PI / max_omega / 8.0 {
        return Err(Error::Sampling(format!(
            "dt = {dt} s gives fewer than 8 samples per shortest component period ({:.3} s)",
            2.0 * PI / max_omega
        )));
    }
    Ok(())
}

/// Sample η(t) = Σ aᵢ cos(ωᵢ t + φᵢ) on [0, duration).
pub fn synthesize(
    sea_state: &SeaState,
    duration: f64,
    dt: f64,
    grid: &SpectrumGrid,
) -> Result<WaveRealization> {
    if !(duration > 0.0 && dt > 0.0) {
        return Err(Error::InvalidInput("duration and dt must be positive".into()));
    }
    let field = WaveField::from_sea_state(sea_state, grid)?;
    check_sampling(field.max_omega(), dt)?;
    let n = (duration / dt).round() as usize;
    let elevation = (0..n).map(|k| field.elevation_at(k as f64 * dt)).collect();
    Ok(WaveRealization {
        dt,
        elevation,
        components: field.components,
    })
}

/// Realized (Hm0, Te) of a record from its periodogram, mean removed.
pub fn realized_hm0_te(elevation: &[f64], dt: f64) -> (f64, f64) {
    let n = elevation.len();
    let mean = elevation.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = elevation.iter().map(|&e| Complex64::new(e - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let duration = n as f64 * dt;
    let (mut m0, mut m_1) = (0.0, 0.0);
    for (k, c) in buf.iter().enumerate().take(n.div_ceil(2)).skip(1) {
        // one-sided variance contribution of bin k
        let p = 2.0 * c.norm_sqr() / (n as f64 * n as f64);
        let f = k as f64 / duration;
        m0 += p;
        m_1 += p / f;
    }
    (4.0 * m0.sqrt(), m_1 / m0)
}

/// Per-DOF excitation coefficients bound to a wave field:
/// F_d(t) = Re Σᵢ cᵢ,d · e^{iωᵢt}.
#[derive(Debug, Clone)]
pub struct ExcitationSeries {
    omegas: Vec<f64>,
    /// coeffs[d][i]
    coeffs: Vec<Vec<Complex64>>,
    active: [bool; 6],
}

impl ExcitationSeries {
    pub fn new(field: &WaveField, hydro: &HydroCoefficients) -> Result<Self> {
        let omegas: Vec<f64> = field.components.iter().map(|c| c.omega).collect();
        let mut coeffs = Vec::with_capacity(6);
        for dof in 0..6 {
            let row = field
                .components
                .iter()
                .map(|c| {
                    if c.amplitude == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let x = hydro.excitation_at(dof, c.omega)?;
                    Ok(x * Complex64::from_polar(c.amplitude, c.phase))
                })
                .collect::<Result<Vec<_>>>()?;
            coeffs.push(row);
        }
        let mut active = [false; 6];
        for (a, row) in active.iter_mut().zip(&coeffs) {
            *a = row.iter().any(|c| c.norm_sqr() > 0.0);
        }
        Ok(Self { omegas, coeffs, active })
    }

    pub fn n_components(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Force for every DOF given the unit phasors e^{iωᵢt}.
    pub fn force_from_phasors(&self, phasors: &[Complex64]) -> [f64; 6] {
        let mut out = [0.0; 6];
        for (d, row) in self.coeffs.iter().enumerate() {
            if !self.active[d] {
                continue;
            }
            out[d] = row
                .iter()
                .zip(phasors)
                .map(|(c, z)| c.re * z.re - c.im * z.im)
                .sum();
        }
        out
    }

    pub fn force_at(&self, t: f64) -> [f64; 6] {
        let ph: Vec<Complex64> = self.omegas.iter().map(|&w| Complex64::from_polar(1.0, w * t)).collect();
        self.force_from_phasors(&ph)
    }
}

/// Excitation force history for one DOF at the realization's sample times.
pub fn excitation_force(
    realization: &WaveRealization,
    coeffs: &HydroCoefficients,
    dof: usize,
) -> Result<Vec<f64>> {
    if dof >= 6 {
        return Err(Error::InvalidInput(format!("dof index {dof} out of range")));
    }
    let field = WaveField {
        components: realization.components.clone(),
    };
    let series = ExcitationSeries::new(&field, coeffs)?;
    Ok(realization.times().map(|t| series.force_at(t)[dof]).collect())
}

/// Unit phasors e^{iωt} advanced on a uniform grid by complex rotation, with
/// periodic exact resynchronization to bound roundoff growth.
#[derive(Debug, Clone)]
pub struct PhasorClock {
    omegas: Vec<f64>,
    step: f64,
    rot: Vec<Complex64>,
    current: Vec<Complex64>,
    index: u64,
    t0: f64,
}

impl PhasorClock {
    const RESYNC: u64 = 2048;

    pub fn new(omegas: &[f64], t0: f64, step: f64) -> Self {
        Self {
            omegas: omegas.to_vec(),
            step,
            rot: omegas.iter().map(|&w| Complex64::from_polar(1.0, w * step)).collect(),
            current: omegas.iter().map(|&w| Complex64::from_polar(1.0, w * t0)).collect(),
            index: 0,
            t0,
        }
    }

    pub fn phasors(&self) -> &[Complex64] {
        &self.current
    }

    pub fn advance(&mut self) {
        self.index += 1;
        if self.index % Self::RESYNC == 0 {
            let t = self.t0 + self.index as f64 * self.step;
            for (z, &w) in self.current.iter_mut().zip(&self.omegas) {
                *z = Complex64::from_polar(1.0, w * t);
            }
        } else {
            for (z, r) in self.current.iter_mut().zip(&self.rot) {
                *z *= r;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pm_ratio_matches_closed_form() {
        // Te/Tp for Pierson-Moskowitz is 1.25^(-1/4)·Γ(5/4).
        let exact = 1.25f64.powf(-0.25) * 0.906_402_477_055_477;
        assert!((te_over_tp(1.0) - exact).abs() < 1e-6);
    }

    #[test]
    fn spectrum_hm0_by_quadrature() {
        let ss = SeaState::irregular(1.75, 6.5, 1);
        let spec = make_spectrum(&ss, &SpectrumGrid::default()).unwrap();
        let hm0 = 4.0 * spec.m0().sqrt();
        assert!((hm0 - 1.75).abs() / 1.75 < 0.01, "hm0 {hm0}");
    }

    #[test]
    fn doubling_height_quadruples_m0() {
        let g = SpectrumGrid::default();
        let a = make_spectrum(&SeaState::irregular(1.0, 8.0, 0), &g).unwrap().m0();
        let b = make_spectrum(&SeaState::irregular(2.0, 8.0, 0), &g).unwrap().m0();
        assert!((b / a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_height_irregular_is_rejected() {
        let err = make_spectrum(&SeaState::irregular(0.0, 8.0, 0), &SpectrumGrid::default());
        assert!(matches!(err, Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn jonswap_normalization_holds_for_peaked_sea() {
        let mut ss = SeaState::irregular(3.0, 9.0, 0);
        ss.gamma = 3.3;
        let spec = make_spectrum(&ss, &SpectrumGrid::default()).unwrap();
        assert!((4.0 * spec.m0().sqrt() - 3.0).abs() / 3.0 < 0.01);
    }

    #[test]
    fn regular_wave_is_cosine() {
        let r = synthesize(&SeaState::regular(1.75, 6.5), 13.0, 0.05, &SpectrumGrid::default()).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].amplitude, 0.875);
        assert_eq!(r.elevation[0], 0.875);
        let k = (6.5 / 0.05) as usize;
        assert!((r.elevation[k] - 0.875).abs() < 1e-12);
        assert!((r.elevation[k / 2] + 0.875).abs() < 1e-12);
    }

    #[test]
    fn calm_regular_wave_is_zero() {
        let r = synthesize(&SeaState::regular(0.0, 6.5), 60.0, 0.1, &SpectrumGrid::default()).unwrap();
        assert!(r.elevation.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn coarse_dt_is_sampling_error() {
        let err = synthesize(&SeaState::regular(1.0, 4.0), 60.0, 1.0, &SpectrumGrid::default());
        assert!(matches!(err, Err(Error::Sampling(_))));
    }

    #[test]
    fn realization_is_deterministic_per_seed() {
        let g = SpectrumGrid::default();
        let a = synthesize(&SeaState::irregular(2.0, 8.0, 7), 300.0, 0.1, &g).unwrap();
        let b = synthesize(&SeaState::irregular(2.0, 8.0, 7), 300.0, 0.1, &g).unwrap();
        let c = synthesize(&SeaState::irregular(2.0, 8.0, 8), 300.0, 0.1, &g).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.elevation, c.elevation);
    }

    #[test]
    fn phasor_clock_tracks_exact_phase() {
        let om = [0.3, 1.7, 4.1];
        let mut clock = PhasorClock::new(&om, 2.0, 0.005);
        for _ in 0..10_000 {
            clock.advance();
        }
        let t = 2.0 + 10_000.0 * 0.005;
        for (z, w) in clock.phasors().iter().zip(om) {
            assert!((z - Complex64::from_polar(1.0, w * t)).norm() < 1e-9);
        }
    }
}
