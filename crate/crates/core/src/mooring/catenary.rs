//! Elastic catenary in a vertical plane, with an optional frictionless
//! seabed-resting portion.

use crate::error::{Error, Result};

/// Input for one line in its own vertical plane, anchor at the origin.
#[derive(Debug, Clone, Copy)]
pub struct CatenaryInput {
    /// Horizontal span anchor→fairlead, m.
    pub xf: f64,
    /// Fairlead height above the anchor, m.
    pub zf: f64,
    /// Unstretched length, m.
    pub length: f64,
    /// Submerged weight per unit length, N/m.
    pub w: f64,
    pub ea: f64,
    /// True when the anchor sits on the seabed so the line may rest on it.
    pub seabed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatenarySolution {
    /// Horizontal tension, N.
    pub h: f64,
    /// Vertical fairlead tension, N.
    pub v: f64,
    /// Unstretched length resting on the seabed, m.
    pub touchdown: f64,
    pub residual: f64,
}

fn span_suspended(inp: &CatenaryInput, h: f64, v: f64) -> (f64, f64) {
    let (w, l, ea) = (inp.w, inp.length, inp.ea);
    let va = v - w * l;
    let x = h / w * ((v / h).asinh() - (va / h).asinh()) + h * l / ea;
    let z = h / w * ((1.0 + (v / h).powi(2)).sqrt() - (1.0 + (va / h).powi(2)).sqrt()) + (v * l - 0.5 * w * l * l) / ea;
    (x, z)
}

fn span_grounded(inp: &CatenaryInput, h: f64, v: f64) -> (f64, f64) {
    let (w, l, ea) = (inp.w, inp.length, inp.ea);
    let x = l - v / w + h / w * (v / h).asinh() + h * l / ea;
    let z = h / w * ((1.0 + (v / h).powi(2)).sqrt() - 1.0) + v * v / (2.0 * ea * w);
    (x, z)
}

fn span(inp: &CatenaryInput, h: f64, v: f64) -> (f64, f64) {
    if inp.seabed && v < inp.w * inp.length {
        span_grounded(inp, h, v)
    } else {
        span_suspended(inp, h, v)
    }
}

/// Vertical line: no horizontal tension; the excess length lies on the seabed.
fn solve_vertical(inp: &CatenaryInput) -> CatenarySolution {
    let (w, l, ea, zf) = (inp.w, inp.length, inp.ea, inp.zf);
    let hang = l + 0.5 * w * l * l / ea;
    if zf >= hang || !inp.seabed {
        // taut: zf = L + (V L − w L²/2)/EA
        let v = (zf - l) * ea / l + 0.5 * w * l;
        return CatenarySolution { h: 0.0, v: v.max(0.0), touchdown: 0.0, residual: 0.0 };
    }
    // suspended part s satisfies s + w s²/(2EA) = zf
    let s = (-1.0 + (1.0 + 2.0 * w * zf / ea).sqrt()) * ea / w;
    CatenarySolution { h: 0.0, v: w * s, touchdown: l - s, residual: 0.0 }
}

/// Solve for fairlead (H, V) by Newton iteration from the standard initial
/// guess. Converges to a span residual below 1e-8 of the line length.
pub fn solve(inp: &CatenaryInput) -> Result<CatenarySolution> {
    if !(inp.length > 0.0 && inp.w > 0.0 && inp.ea > 0.0 && inp.xf >= 0.0) {
        return Err(Error::InvalidInput("catenary needs positive length, weight, EA and xf ≥ 0".into()));
    }
    let (xf, zf, l) = (inp.xf, inp.zf, inp.length);
    if xf < 1e-6 * l {
        return Ok(solve_vertical(inp));
    }
    let stretch_budget = l * (1.0 + 0.2);
    if (xf * xf + zf * zf).sqrt() > stretch_budget {
        return Err(Error::InvalidInput(format!(
            "span {:.2} m exceeds the stretched length budget of a {l} m line",
            (xf * xf + zf * zf).sqrt()
        )));
    }
    let lambda0 = if l * l <= xf * xf + zf * zf {
        0.2
    } else {
        (3.0 * ((l * l - zf * zf) / (xf * xf) - 1.0)).sqrt()
    };
    let mut h = (inp.w * xf / (2.0 * lambda0)).abs().max(1e-3 * inp.w * l);
    let mut v = 0.5 * inp.w * (zf / lambda0.tanh() + l);

    let tol = 1e-8 * l;
    let resid = |h: f64, v: f64| {
        let (x, z) = span(inp, h, v);
        (x - xf, z - zf)
    };
    let (mut rx, mut rz) = resid(h, v);
    for _ in 0..200 {
        let norm = rx.hypot(rz);
        if norm < tol {
            let va = v - inp.w * l;
            let touchdown = if inp.seabed && va < 0.0 { l - v / inp.w } else { 0.0 };
            return Ok(CatenarySolution { h, v, touchdown, residual: norm / l });
        }
        let dh = 1e-7 * h.abs().max(1.0);
        let dv = 1e-7 * v.abs().max(1.0);
        let (a1, b1) = resid(h + dh, v);
        let (a0, b0) = resid(h - dh, v);
        let (c1, d1) = resid(h, v + dv);
        let (c0, d0) = resid(h, v - dv);
        let (j11, j21) = ((a1 - a0) / (2.0 * dh), (b1 - b0) / (2.0 * dh));
        let (j12, j22) = ((c1 - c0) / (2.0 * dv), (d1 - d0) / (2.0 * dv));
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step_h = -(j22 * rx - j12 * rz) / det;
        let step_v = -(-j21 * rx + j11 * rz) / det;
        // backtrack until H stays positive and the residual decreases
        let mut t = 1.0;
        loop {
            let nh = h + t * step_h;
            let nv = v + t * step_v;
            if nh > 0.0 {
                let (nx, nz) = resid(nh, nv);
                if nx.is_finite() && nz.is_finite() && (nx.hypot(nz) < norm || t < 1e-6) {
                    h = nh;
                    v = nv;
                    rx = nx;
                    rz = nz;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-9 {
                return Err(Error::Convergence {
                    message: "catenary line search stalled".into(),
                    residual: norm / l,
                });
            }
        }
    }
    Err(Error::Convergence {
        message: "catenary Newton iteration did not converge".into(),
        residual: rx.hypot(rz) / l,
    })
}

impl CatenarySolution {
    /// Position (horizontal, vertical above anchor) of the point at unstretched
    /// arc length `s` from the anchor.
    pub fn point(&self, inp: &CatenaryInput, s: f64) -> (f64, f64) {
        let (w, ea) = (inp.w, inp.ea);
        let h = self.h;
        if h == 0.0 {
            let lb = self.touchdown;
            if s <= lb {
                return (0.0, 0.0);
            }
            let va = self.v - w * (inp.length - lb);
            let u = s - lb;
            return (0.0, u + (va * u + 0.5 * w * u * u) / ea);
        }
        if self.touchdown > 0.0 {
            let lb = self.touchdown;
            if s <= lb {
                return (s + h * s / ea, 0.0);
            }
            let u = s - lb;
            let x = lb + h / w * (w * u / h).asinh() + h * s / ea;
            let z = h / w * ((1.0 + (w * u / h).powi(2)).sqrt() - 1.0) + w * u * u / (2.0 * ea);
            return (x, z);
        }
        let va = self.v - w * inp.length;
        let x = h / w * (((va + w * s) / h).asinh() - (va / h).asinh()) + h * s / ea;
        let z = h / w * ((1.0 + ((va + w * s) / h).powi(2)).sqrt() - (1.0 + (va / h).powi(2)).sqrt())
            + (va * s + 0.5 * w * s * s) / ea;
        (x, z)
    }

    /// Effective tension at arc length `s`.
    pub fn tension(&self, inp: &CatenaryInput, s: f64) -> f64 {
        if self.touchdown > 0.0 && s <= self.touchdown {
            return self.h;
        }
        let va = self.v - inp.w * inp.length;
        self.h.hypot(va + inp.w * s)
    }

    pub fn fairlead_tension(&self) -> f64 {
        self.h.hypot(self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spar_line(xf: f64) -> CatenaryInput {
        CatenaryInput {
            xf,
            zf: 250.0,
            length: 902.2,
            w: 71.16 * 9.81,
            ea: 384.243e6,
            seabed: true,
        }
    }

    #[test]
    fn vertical_taut_line_carries_its_weight() {
        let inp = CatenaryInput { xf: 0.0, zf: 101.0, length: 100.0, w: 500.0, ea: 1e8, seabed: false };
        let s = solve(&inp).unwrap();
        assert_eq!(s.h, 0.0);
        let top = s.tension(&inp, 100.0);
        let bottom = s.tension(&inp, 0.0);
        assert!((top - bottom - 500.0 * 100.0).abs() < 1e-6);
    }

    #[test]
    fn slack_span_limit() {
        let small = solve(&spar_line(660.0)).unwrap();
        let smaller = solve(&spar_line(655.0)).unwrap();
        assert!(smaller.h < small.h);
        let vertical = solve(&spar_line(0.0)).unwrap();
        assert_eq!(vertical.h, 0.0);
    }

    #[test]
    fn solution_reproduces_span_and_profile_ends() {
        let inp = spar_line(848.67);
        let s = solve(&inp).unwrap();
        assert!(s.residual < 1e-8);
        assert!(s.touchdown > 0.0);
        let (x, z) = s.point(&inp, inp.length);
        assert!((x - inp.xf).abs() < 1e-5 && (z - inp.zf).abs() < 1e-5);
        assert_eq!(s.point(&inp, 0.0), (0.0, 0.0));
    }

    #[test]
    fn suspended_branch() {
        let inp = CatenaryInput { xf: 80.0, zf: 60.0, length: 110.0, w: 1000.0, ea: 1e9, seabed: false };
        let s = solve(&inp).unwrap();
        assert_eq!(s.touchdown, 0.0);
        let (x, z) = s.point(&inp, inp.length);
        assert!((x - 80.0).abs() < 1e-6 && (z - 60.0).abs() < 1e-6);
    }

    #[test]
    fn overlong_span_rejected() {
        assert!(solve(&spar_line(1200.0)).is_err());
    }
}
