//! Approximate frequency-domain coefficients for bodies built from vertical
//! circular columns, for use when no boundary-element output is available.
//!
//! Excitation is Froude-Krylov on horizontal faces (heave) plus Morison
//! strip inertia with Ca = 1 (surge, pitch), both tapered by a diffraction
//! factor exp(-(ka)²/2). Radiation damping follows from the deep-water
//! Haskind relations and A(ω) from the kernel of that damping.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hydro::{radiation_irf, DragModel, ExcitationPoint, HydroCoefficients, Mat6, DOF_NAMES};

/// Frustum slice of a column; `d_inner` > 0 makes it an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub z_top: f64,
    pub z_bot: f64,
    pub d_top: f64,
    pub d_bot: f64,
    #[serde(default)]
    pub d_inner: f64,
}

impl Section {
    pub fn cylinder(z_top: f64, z_bot: f64, d: f64) -> Self {
        Self { z_top, z_bot, d_top: d, d_bot: d, d_inner: 0.0 }
    }

    fn diameter_at(&self, z: f64) -> f64 {
        let t = (self.z_top - z) / (self.z_top - self.z_bot);
        self.d_top + t * (self.d_bot - self.d_top)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub x: f64,
    pub y: f64,
    /// Contiguous, ordered top to bottom.
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plate {
    pub z: f64,
    pub radius: f64,
    pub thickness: f64,
    pub cd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyGeometry {
    pub columns: Vec<Column>,
    pub plate: Option<Plate>,
    pub cd_lateral: f64,
    pub cd_heave: f64,
}

/// Thin horizontal slab of a column below the waterline.
struct Slice {
    x: f64,
    z: f64,
    dz: f64,
    d_out: f64,
    d_in: f64,
}

impl Slice {
    fn area_disp(&self) -> f64 {
        0.25 * PI * (self.d_out.powi(2) - self.d_in.powi(2))
    }
    fn area_out(&self) -> f64 {
        0.25 * PI * self.d_out.powi(2)
    }
}

/// Horizontal face where the displaced cross-section changes; `area` > 0
/// faces downward (pressure pushes up).
struct Face {
    x: f64,
    y: f64,
    z: f64,
    area: f64,
    d_big: f64,
    d_small: f64,
}

const SLICE: f64 = 0.25;

impl BodyGeometry {
    fn slices(&self) -> Vec<Slice> {
        let mut out = Vec::new();
        for c in &self.columns {
            for s in &c.sections {
                let top = s.z_top.min(0.0);
                if s.z_bot >= top {
                    continue;
                }
                let n = ((top - s.z_bot) / SLICE).ceil().max(1.0) as usize;
                let dz = (top - s.z_bot) / n as f64;
                for k in 0..n {
                    let z = top - (k as f64 + 0.5) * dz;
                    out.push(Slice { x: c.x, z, dz, d_out: s.diameter_at(z), d_in: s.d_inner });
                }
            }
        }
        out
    }

    fn faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        let area = |d_out: f64, d_in: f64| 0.25 * PI * (d_out.powi(2) - d_in.powi(2));
        for c in &self.columns {
            // walk submerged slices top to bottom and record every area change
            let mut prev: Option<(f64, f64)> = None;
            let mut push = |z: f64, above: (f64, f64), below: (f64, f64)| {
                let a = area(above.0, above.1) - area(below.0, below.1);
                if a.abs() > 1e-9 {
                    out.push(Face {
                        x: c.x,
                        y: c.y,
                        z,
                        area: a,
                        d_big: above.0.max(below.0),
                        d_small: above.0.min(below.0),
                    });
                }
            };
            for s in &c.sections {
                let top = s.z_top.min(0.0);
                if s.z_bot >= top {
                    continue;
                }
                let n = ((top - s.z_bot) / SLICE).ceil().max(1.0) as usize;
                let dz = (top - s.z_bot) / n as f64;
                for k in 0..n {
                    let z = top - k as f64 * dz;
                    let here = (s.diameter_at(z - 0.5 * dz), s.d_inner);
                    if let Some(p) = prev {
                        push(z, p, here);
                    }
                    prev = Some(here);
                }
            }
            if let Some(p) = prev {
                let bottom = c.sections.last().map(|s| s.z_bot).unwrap_or(0.0);
                push(bottom, p, (0.0, 0.0));
            }
        }
        out
    }

    pub fn submerged_volume(&self) -> f64 {
        let v: f64 = self.slices().iter().map(|s| s.area_disp() * s.dz).sum();
        v + self.plate.map_or(0.0, |p| PI * p.radius.powi(2) * p.thickness)
    }

    pub fn center_of_buoyancy(&self) -> f64 {
        let mut m = 0.0;
        for s in self.slices() {
            m += s.area_disp() * s.dz * s.z;
        }
        if let Some(p) = self.plate {
            m += PI * p.radius.powi(2) * p.thickness * p.z;
        }
        m / self.submerged_volume()
    }

    /// Waterplane area and second moments (about x for roll, about y for pitch).
    pub fn waterplane(&self) -> (f64, f64, f64, f64, f64) {
        let (mut a, mut ix, mut iy, mut ax, mut ay) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for c in &self.columns {
            if let Some(s) = c.sections.iter().find(|s| s.z_top >= 0.0 && s.z_bot < 0.0) {
                let d = s.diameter_at(0.0);
                let ac = 0.25 * PI * (d * d - s.d_inner * s.d_inner);
                let own = PI / 64.0 * (d.powi(4) - s.d_inner.powi(4));
                a += ac;
                ix += own + ac * c.y * c.y;
                iy += own + ac * c.x * c.x;
                ax += ac * c.x;
                ay += ac * c.y;
            }
        }
        (a, ix, iy, ax, ay)
    }

    /// Buoyancy-only hydrostatic stiffness about the waterline origin.
    pub fn hydrostatic_matrix(&self, rho: f64, g: f64) -> Mat6 {
        let (a, ix, iy, ax, ay) = self.waterplane();
        let v = self.submerged_volume();
        let zb = self.center_of_buoyancy();
        let mut c = [[0.0; 6]; 6];
        c[2][2] = rho * g * a;
        c[3][3] = rho * g * (ix + v * zb);
        c[4][4] = rho * g * (iy + v * zb);
        c[2][3] = rho * g * ay;
        c[3][2] = c[2][3];
        c[2][4] = -rho * g * ax;
        c[4][2] = c[2][4];
        c
    }

    fn added_mass_inf(&self, rho: f64) -> Mat6 {
        let mut a = [[0.0; 6]; 6];
        for s in self.slices() {
            let da = rho * s.area_out() * s.dz;
            a[0][0] += da;
            a[0][4] += da * s.z;
            a[4][4] += da * s.z * s.z;
            a[1][1] += da;
            a[1][3] -= da * s.z;
            a[3][3] += da * s.z * s.z;
        }
        for f in self.faces() {
            let a33 = rho * (f.d_big.powi(3) - f.d_small.powi(3)) / 6.0;
            let own = 8.0 / 45.0 * rho * ((0.5 * f.d_big).powi(5) - (0.5 * f.d_small).powi(5));
            a[2][2] += a33;
            a[4][4] += a33 * f.x * f.x + own;
            a[3][3] += a33 * f.y * f.y + own;
            a[2][4] -= a33 * f.x;
            a[2][3] += a33 * f.y;
        }
        if let Some(p) = self.plate {
            let surge = rho * PI * p.radius.powi(2) * p.thickness;
            a[0][0] += surge;
            a[1][1] += surge;
            a[0][4] += surge * p.z;
            a[1][3] -= surge * p.z;
            a[2][2] += 8.0 / 3.0 * rho * p.radius.powi(3);
            let pitch = 16.0 / 45.0 * rho * p.radius.powi(5) + surge * p.z * p.z;
            a[3][3] += pitch;
            a[4][4] += pitch;
        }
        for i in 0..6 {
            for j in 0..i {
                a[i][j] = a[j][i];
            }
        }
        a
    }

    /// Complex excitation per unit amplitude for a wave travelling along +x.
    fn excitation(&self, rho: f64, g: f64, omega: f64) -> [Complex64; 6] {
        let k = omega * omega / g;
        let mut x = [Complex64::new(0.0, 0.0); 6];
        let i = Complex64::new(0.0, 1.0);
        for s in self.slices() {
            let cut = (-(k * 0.5 * s.d_out).powi(2) / 2.0).exp();
            let shift = Complex64::from_polar(1.0, -k * s.x);
            let f1 = i * omega * omega * (k * s.z).exp() * rho * (s.area_disp() + s.area_out()) * s.dz * cut * shift;
            x[0] += f1;
            x[4] += f1 * s.z;
        }
        for f in self.faces() {
            let cut = (-(k * 0.5 * f.d_big).powi(2) / 2.0).exp();
            let shift = Complex64::from_polar(1.0, -k * f.x);
            let f3 = rho * g * f.area * (k * f.z).exp() * cut * shift;
            x[2] += f3;
            x[4] -= f3 * f.x;
            x[3] += f3 * f.y;
        }
        if let Some(p) = self.plate {
            let area = PI * p.radius.powi(2);
            let a33 = 8.0 / 3.0 * rho * p.radius.powi(3);
            let fk = rho * g * area * ((k * (p.z - 0.5 * p.thickness)).exp() - (k * (p.z + 0.5 * p.thickness)).exp());
            x[2] += Complex64::new(fk - omega * omega * a33 * (k * p.z).exp(), 0.0);
            let surge = rho * 2.0 * area * p.thickness;
            let f1 = i * omega * omega * (k * p.z).exp() * surge * (-(k * p.radius).powi(2) / 2.0).exp();
            x[0] += f1;
            x[4] += f1 * p.z;
        }
        x
    }

    /// Quadratic drag per DOF from lateral column drag, heave drag on
    /// horizontal faces and the plate.
    pub fn drag_model(&self, rho: f64) -> DragModel {
        let mut c = [0.0; 6];
        for s in self.slices() {
            let lateral = 0.5 * rho * self.cd_lateral * s.d_out * s.dz;
            c[0] += lateral;
            c[1] += lateral;
            c[3] += lateral * s.z.abs().powi(3);
            c[4] += lateral * s.z.abs().powi(3);
        }
        for f in self.faces() {
            let h = 0.5 * rho * self.cd_heave * f.area.abs();
            c[2] += h;
            c[4] += h * f.x.abs().powi(3);
            c[3] += h * f.y.abs().powi(3);
        }
        if let Some(p) = self.plate {
            let h = 0.5 * rho * p.cd;
            c[2] += h * PI * p.radius.powi(2);
            c[3] += h * 8.0 * p.radius.powi(5) / 15.0;
            c[4] += h * 8.0 * p.radius.powi(5) / 15.0;
        }
        DragModel { coeffs: c }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorOptions {
    pub rho: f64,
    pub g: f64,
    pub freqs: Vec<f64>,
    /// Replaces the face-based heave A∞ (used to tune float natural periods).
    pub heave_added_mass: Option<f64>,
    pub cog: [f64; 3],
}

impl GeneratorOptions {
    pub fn new(cog_z: f64) -> Self {
        Self {
            rho: 1025.0,
            g: 9.81,
            freqs: (1..=500).map(|k| 0.02 * k as f64).collect(),
            heave_added_mass: None,
            cog: [0.0, 0.0, cog_z],
        }
    }
}

pub fn generate(geom: &BodyGeometry, opts: &GeneratorOptions) -> Result<HydroCoefficients> {
    let (rho, g) = (opts.rho, opts.g);
    let mut a_inf = geom.added_mass_inf(rho);
    if let Some(a33) = opts.heave_added_mass {
        a_inf[2][2] = a33;
    }
    let mut excitation: BTreeMap<String, Vec<ExcitationPoint>> = BTreeMap::new();
    let mut damping = Vec::with_capacity(opts.freqs.len());
    for &w in &opts.freqs {
        let x = geom.excitation(rho, g, w);
        for (d, xd) in x.iter().enumerate() {
            excitation.entry(DOF_NAMES[d].to_string()).or_default().push(ExcitationPoint {
                w,
                mag: xd.norm(),
                phase: xd.arg(),
            });
        }
        let s = w.powi(3) / (4.0 * rho * g.powi(3));
        let mut b = [[0.0; 6]; 6];
        b[0][0] = s * x[0].norm_sqr();
        b[4][4] = s * x[4].norm_sqr();
        b[0][4] = s * (x[0] * x[4].conj()).re;
        b[4][0] = b[0][4];
        b[1][1] = b[0][0];
        b[3][3] = b[4][4];
        b[1][3] = -b[0][4];
        b[3][1] = b[1][3];
        b[2][2] = 2.0 * s * x[2].norm_sqr();
        damping.push(b);
    }
    excitation.retain(|_, pts| pts.iter().any(|p| p.mag > 0.0));

    let mut coeffs = HydroCoefficients {
        rho,
        g,
        freqs: opts.freqs.clone(),
        added_mass: vec![a_inf; opts.freqs.len()],
        damping,
        a_inf,
        hydrostatic: geom.hydrostatic_matrix(rho, g),
        excitation,
        cog: opts.cog,
        volume: geom.submerged_volume(),
    };

    // A(ω) = A∞ − (1/ω)∫K(t) sin(ωt) dt
    let dt = 0.02;
    let irf = radiation_irf(&coeffs, dt, 60.0)?;
    let pairs = irf.nonzero_pairs();
    for (fi, &w) in opts.freqs.iter().enumerate() {
        let mut a = a_inf;
        for &(i, j) in &pairs {
            let n = irf.kernel.len();
            let mut integral = 0.0;
            for (k, kt) in irf.kernel.iter().enumerate() {
                let wt = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                integral += wt * kt[i][j] * (w * k as f64 * dt).sin();
            }
            a[i][j] = a_inf[i][j] - integral * dt / w;
        }
        coeffs.added_mass[fi] = a;
    }
    coeffs.validate()?;
    Ok(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlatformKind {
    Spar5,
    Spar15,
    Semi5,
    Semi15,
    Rm3Spar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloatKind {
    Float1,
    Float2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloatSpec {
    pub inner_diameter: f64,
    pub outer_diameter: f64,
    pub height: f64,
    pub draft: f64,
    /// Centre of mass below the still-water line (negative down).
    pub cog_z: f64,
    pub natural_period: f64,
}

impl FloatKind {
    pub fn spec(self) -> FloatSpec {
        match self {
            FloatKind::Float1 => FloatSpec {
                inner_diameter: 6.5,
                outer_diameter: 22.0,
                height: 5.0,
                draft: 3.0,
                cog_z: -0.72,
                natural_period: 6.23,
            },
            FloatKind::Float2 => FloatSpec {
                inner_diameter: 10.0,
                outer_diameter: 30.0,
                height: 8.0,
                draft: 5.0,
                cog_z: -1.35,
                natural_period: 6.12,
            },
        }
    }

    pub fn geometry(self) -> BodyGeometry {
        let s = self.spec();
        BodyGeometry {
            columns: vec![Column {
                x: 0.0,
                y: 0.0,
                sections: vec![Section {
                    z_top: s.height - s.draft,
                    z_bot: -s.draft,
                    d_top: s.outer_diameter,
                    d_bot: s.outer_diameter,
                    d_inner: s.inner_diameter,
                }],
            }],
            plate: None,
            cd_lateral: 0.0,
            cd_heave: 1.0,
        }
    }

    /// Mass equal to the displaced water, so the float floats at its draft.
    pub fn mass(self, rho: f64) -> f64 {
        rho * self.geometry().submerged_volume()
    }

    /// Heave A∞ that places the natural period at the specified value.
    pub fn heave_added_mass(self, rho: f64, g: f64) -> f64 {
        let s = self.spec();
        let c33 = self.geometry().hydrostatic_matrix(rho, g)[2][2];
        c33 * (s.natural_period / (2.0 * PI)).powi(2) - self.mass(rho)
    }

    /// (Ixx, Iyy, Izz) about the centre of mass, thick ring.
    pub fn inertia(self, rho: f64) -> [f64; 3] {
        let s = self.spec();
        let m = self.mass(rho);
        let r2 = 0.25 * (s.outer_diameter.powi(2) + s.inner_diameter.powi(2));
        let ixx = m * (3.0 * r2 + s.height * s.height) / 12.0;
        [ixx, ixx, 0.5 * m * r2]
    }

    pub fn coefficients(self) -> Result<HydroCoefficients> {
        let mut opts = GeneratorOptions::new(self.spec().cog_z);
        opts.heave_added_mass = Some(self.heave_added_mass(opts.rho, opts.g));
        generate(&self.geometry(), &opts)
    }
}

fn spar(d_upper: f64, d_lower: f64, taper_top: f64, taper_bot: f64, draft: f64) -> Vec<Section> {
    vec![
        Section::cylinder(10.0, -taper_top, d_upper),
        Section { z_top: -taper_top, z_bot: -taper_bot, d_top: d_upper, d_bot: d_lower, d_inner: 0.0 },
        Section::cylinder(-taper_bot, -draft, d_lower),
    ]
}

fn semi(main: f64, offset: f64, base: f64, spacing: f64, draft: f64, base_top: f64) -> Vec<Column> {
    let r = spacing / 3f64.sqrt();
    let mut cols = vec![Column { x: 0.0, y: 0.0, sections: vec![Section::cylinder(10.0, -draft, main)] }];
    for az in [180.0f64, 300.0, 60.0] {
        let a = az.to_radians();
        cols.push(Column {
            x: r * a.cos(),
            y: r * a.sin(),
            sections: vec![Section::cylinder(12.0, -base_top, offset), Section::cylinder(-base_top, -draft, base)],
        });
    }
    cols
}

impl PlatformKind {
    pub fn geometry(self, reaction_plate: bool) -> BodyGeometry {
        let (columns, cd_heave) = match self {
            PlatformKind::Spar5 => (vec![Column { x: 0.0, y: 0.0, sections: spar(6.5, 9.4, 4.0, 12.0, 120.0) }], 1.0),
            PlatformKind::Spar15 => (vec![Column { x: 0.0, y: 0.0, sections: spar(10.0, 18.0, 8.0, 18.0, 120.0) }], 1.0),
            PlatformKind::Semi5 => (semi(6.5, 12.0, 24.0, 50.0, 20.0, 14.0), 4.8),
            PlatformKind::Semi15 => (semi(10.0, 20.0, 40.0, 87.0, 20.0, 14.0), 4.8),
            PlatformKind::Rm3Spar => (vec![Column { x: 0.0, y: 0.0, sections: vec![Section::cylinder(10.0, -35.0, 6.5)] }], 1.0),
        };
        let plate = match (self, reaction_plate) {
            (PlatformKind::Rm3Spar, _) => Some(Plate { z: -35.25, radius: 15.0, thickness: 0.5, cd: 2.0 }),
            (PlatformKind::Spar5, true) => Some(Plate { z: -120.25, radius: 25.0, thickness: 0.5, cd: 2.0 }),
            (PlatformKind::Spar15, true) => Some(Plate { z: -120.25, radius: 30.0, thickness: 0.5, cd: 2.0 }),
            _ => None,
        };
        BodyGeometry { columns, plate, cd_lateral: 0.6, cd_heave }
    }

    /// Platform-only centre of mass height.
    pub fn cog_z(self) -> f64 {
        match self {
            PlatformKind::Spar5 => -89.92,
            PlatformKind::Spar15 => -100.0,
            PlatformKind::Semi5 => -13.46,
            PlatformKind::Semi15 => -14.0,
            PlatformKind::Rm3Spar => -28.0,
        }
    }

    /// Squared radii of gyration (roll/pitch, yaw) about the platform CoM.
    pub fn gyration_sq(self) -> (f64, f64) {
        match self {
            PlatformKind::Spar5 => (4.229e9 / 7.46633e6, 1.642e8 / 7.46633e6),
            PlatformKind::Spar15 => (4.229e9 / 7.46633e6, 1.642e8 / 7.46633e6 * (18.0f64 / 9.4).powi(2)),
            PlatformKind::Semi5 => (6.827e9 / 1.3473e7, 1.226e10 / 1.3473e7),
            PlatformKind::Semi15 => {
                let s = (87.0f64 / 50.0).powi(2);
                (6.827e9 / 1.3473e7 * s, 1.226e10 / 1.3473e7 * s)
            }
            PlatformKind::Rm3Spar => (100.0, 10.0),
        }
    }

    pub fn coefficients(self, reaction_plate: bool) -> Result<HydroCoefficients> {
        let geom = self.geometry(reaction_plate);
        generate(&geom, &GeneratorOptions::new(self.cog_z()))
    }

    /// Radius of the column the float slides on.
    pub fn center_column_diameter(self) -> f64 {
        match self {
            PlatformKind::Spar5 | PlatformKind::Semi5 | PlatformKind::Rm3Spar => 6.5,
            PlatformKind::Spar15 | PlatformKind::Semi15 => 10.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spar_displacements() {
        let v5 = PlatformKind::Spar5.geometry(false).submerged_volume();
        assert!((v5 - 8029.0).abs() / 8029.0 < 0.001, "{v5}");
        let v15 = PlatformKind::Spar15.geometry(false).submerged_volume();
        assert!((v15 - 28_165.0).abs() / 28_165.0 < 0.001, "{v15}");
        let s15 = PlatformKind::Semi15.geometry(false).submerged_volume();
        assert!((s15 - 37_385.0).abs() / 37_385.0 < 0.001, "{s15}");
    }

    #[test]
    fn float_hydrostatics_and_period() {
        let f = FloatKind::Float1;
        let c = f.coefficients().unwrap();
        assert!((c.hydrostatic[2][2] - 3.49e6).abs() / 3.49e6 < 0.005);
        let m = f.mass(1025.0) + c.a_inf[2][2];
        let t = 2.0 * PI * (m / c.hydrostatic[2][2]).sqrt();
        assert!((t - 6.23).abs() < 1e-9);
    }

    #[test]
    fn long_wave_heave_excitation_is_hydrostatic() {
        let c = FloatKind::Float2.coefficients().unwrap();
        let x = c.excitation_at(2, 0.02).unwrap();
        assert!((x.norm() - c.hydrostatic[2][2]).abs() / c.hydrostatic[2][2] < 0.001);
    }

    #[test]
    fn semi_is_symmetric_in_sway_and_roll() {
        let c = PlatformKind::Semi5.coefficients(false).unwrap();
        let x = c.excitation_at(1, 0.8).unwrap();
        assert!(x.norm() < 1e-6 * c.excitation_at(0, 0.8).unwrap().norm());
        let r = c.excitation_at(3, 0.8).unwrap();
        assert!(r.norm() < 1e-6 * c.excitation_at(4, 0.8).unwrap().norm());
    }

    #[test]
    fn plate_adds_heave_inertia_and_drag() {
        let no = PlatformKind::Spar5.geometry(false);
        let yes = PlatformKind::Spar5.geometry(true);
        let a_no = no.added_mass_inf(1025.0)[2][2];
        let a_yes = yes.added_mass_inf(1025.0)[2][2];
        assert!((a_yes - a_no - 8.0 / 3.0 * 1025.0 * 25.0f64.powi(3)).abs() < 1.0);
        assert!(yes.drag_model(1025.0).coeffs[2] > 10.0 * no.drag_model(1025.0).coeffs[2]);
    }
}
