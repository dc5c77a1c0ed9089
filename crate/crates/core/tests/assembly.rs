use hybrid_core::aero::WindSpec;
use hybrid_core::assembly::*;
use hybrid_core::hydro::{DragModel, HydroCoefficients};
use hybrid_core::waves::SeaState;

fn heave_oscillator(m: f64, a0: f64, b0: f64, k: f64) -> SystemModel {
    let rho = 1025.0;
    let g = 9.81;
    let mut c = [[0.0; 6]; 6];
    c[2][2] = k;
    let mut coeffs = HydroCoefficients::hydrostatic_only(rho, g, c, m / rho);
    coeffs.a_inf[2][2] = a0;
    let mut damping = [[0.0; 6]; 6];
    damping[2][2] = b0;
    let mut body = BodyModel::new(coeffs, &[MassPart { mass: m, z: 0.0, inertia: [1.0, 1.0, 1.0] }], DragModel::default());
    body.radiation = RadiationMode::ConstantDamping(damping);
    SystemModel {
        name: "oscillator".into(),
        platform: body,
        float: None,
        pto_damping: 0.0,
        turbine: None,
        mooring: None,
        dof_mask: [false, false, true, false, false, false],
        rho,
        g,
    }
}

fn decay_error(dt: f64) -> f64 {
    let (m, a0, b0, k) = (1.0e6, 5.0e5, 1.5e5, 1.5e6);
    let settings = SimSettings {
        dt,
        irf_dt: dt,
        record_interval: dt,
        transient_cutoff: 0.0,
        ..SimSettings::new(40.0)
    };
    let mut sys = HybridSystem::new(heave_oscillator(m, a0, b0, k), &settings).unwrap();
    sys.prepare(&Environment::calm()).unwrap();
    let z0 = 0.5;
    sys.displace(2, z0).unwrap();
    let res = sys.run().unwrap();

    let mt = m + a0;
    let wn = (k / mt).sqrt();
    let zeta = b0 / (2.0 * (k * mt).sqrt());
    let wd = wn * (1.0 - zeta * zeta).sqrt();
    let t = res.channel("time").unwrap();
    let z = res.channel("platform_heave").unwrap();
    let (mut err, mut norm) = (0.0, 0.0);
    for (&ti, &zi) in t.iter().zip(z) {
        let exact = z0 * (-zeta * wn * ti).exp() * ((wd * ti).cos() + zeta * wn / wd * (wd * ti).sin());
        err += (zi - exact).powi(2);
        norm += exact * exact;
    }
    (err / norm).sqrt()
}

#[test]
fn free_decay_matches_damped_oscillator() {
    let e = decay_error(0.01);
    assert!(e < 1e-4, "relative RMS error {e}");
}

#[test]
fn rk4_error_drops_sixteenfold_when_dt_halves() {
    let ratio = decay_error(0.2) / decay_error(0.1);
    assert!((11.0..22.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn generalized_dof_counts() {
    let s = SimSettings::new(300.0);
    let row2 = resolve(&SystemConfig::hybrid(2).unwrap()).unwrap();
    assert_eq!(HybridSystem::new(row2, &s).unwrap().n_dof(), 7);
    let rm3 = resolve(&SystemConfig::by_name("rm3_standalone").unwrap()).unwrap();
    assert_eq!(HybridSystem::new(rm3, &s).unwrap().n_dof(), 7);
    let mut plain = SystemConfig::by_name("fwt_5mw_spar").unwrap();
    plain.turbine = TurbineChoice::None;
    let m = resolve(&plain).unwrap();
    assert_eq!(HybridSystem::new(m, &s).unwrap().n_dof(), 6);
}

#[test]
fn pto_force_opposes_relative_velocity() {
    let model = resolve(&SystemConfig::hybrid(1).unwrap()).unwrap();
    let mut sys = HybridSystem::new(model, &SimSettings::new(300.0)).unwrap();
    sys.prepare(&Environment::calm()).unwrap();
    sys.set_velocity(6, 0.5).unwrap();
    let r = sys.report();
    assert!((r.pto_on_float + 0.6e6).abs() < 1e-6);
    assert_eq!(r.pto_on_platform, -r.pto_on_float);
}

#[test]
fn equilibrium_is_held_in_still_conditions() {
    let model = resolve(&SystemConfig::hybrid(2).unwrap()).unwrap();
    let settings = SimSettings { transient_cutoff: 0.0, record_interval: 1.0, ..SimSettings::new(600.0) };
    let mut sys = HybridSystem::new(model, &settings).unwrap();
    sys.prepare(&Environment::calm()).unwrap();
    let eq = *sys.equilibrium();
    let res = sys.run().unwrap();
    for (k, ch) in ["platform_surge", "platform_sway", "platform_heave", "float_rel_heave"].iter().enumerate() {
        let base = [eq[0], eq[1], eq[2], eq[6]][k];
        let dev = res.channel(ch).unwrap().iter().map(|x| (x - base).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-6, "{ch} drifted by {dev}");
    }
    let pitch = res.channel("platform_pitch").unwrap().iter().map(|x| (x - eq[4]).abs()).fold(0.0, f64::max);
    assert!(pitch < 1e-8, "pitch drift {pitch}");
}

fn run1_env() -> Environment {
    Environment { sea: SeaState::regular(1.75, 6.5), wind: Some(WindSpec::steady(11.4)) }
}

#[test]
fn run1_constraint_third_law_and_power() {
    let model = resolve(&SystemConfig::hybrid(1).unwrap()).unwrap();
    let settings = SimSettings { transient_cutoff: 100.0, ..SimSettings::new(150.0) };
    let mut sys = HybridSystem::new(model, &settings).unwrap();
    sys.prepare(&run1_env()).unwrap();
    for _ in 0..5000 {
        sys.step().unwrap();
        let fp = sys.float_position();
        let q = sys.position();
        let d = [fp[0] - q[0], fp[1] - q[1], fp[2] - q[2]];
        let a = sys.tower_axis();
        let along = d[0] * a[0] + d[1] * a[1] + d[2] * a[2];
        let off = ((d[0] - along * a[0]).powi(2) + (d[1] - along * a[1]).powi(2) + (d[2] - along * a[2]).powi(2)).sqrt();
        assert!(off < 1e-10, "off-axis {off}");
        let r = sys.report();
        assert_eq!(r.pto_on_float, -r.pto_on_platform);
        assert!(r.pto_on_float * sys.velocity()[6] <= 0.0);
    }
    let res = sys.run().unwrap();
    assert!(res.channel("pto_power").unwrap().iter().all(|&p| p >= 0.0));
    for ch in ["platform_surge", "platform_heave", "platform_pitch", "float_heave", "fairlead_tension_1", "rotor_thrust", "generator_power"] {
        assert!(res.rms(ch).unwrap().is_finite());
    }
    let n = res.len();
    assert!(res.data.iter().all(|c| c.len() == n));
}

#[test]
fn reaction_plate_reduces_platform_heave() {
    let settings = SimSettings::new(400.0);
    let plain = simulate(&SystemConfig::hybrid(1).unwrap(), &run1_env(), &settings).unwrap();
    let plate = simulate(&SystemConfig::hybrid(2).unwrap(), &run1_env(), &settings).unwrap();
    let a = plain.rms_mean_removed("platform_heave").unwrap();
    let b = plate.rms_mean_removed("platform_heave").unwrap();
    assert!(b < a, "plate {b} vs plain {a}");
}

#[test]
fn flat_sea_and_still_air_stay_flat() {
    let cfg = SystemConfig::by_name("rm3_standalone").unwrap();
    let settings = SimSettings { transient_cutoff: 10.0, ..SimSettings::new(60.0) };
    let res = simulate(&cfg, &Environment::calm(), &settings).unwrap();
    for ch in ["platform_heave", "platform_pitch", "float_rel_heave"] {
        assert!(res.rms_mean_removed(ch).unwrap() < 1e-9, "{ch}");
    }
    assert!(res.rms("pto_force").unwrap() < 1e-3);
}

#[test]
fn rms_is_seed_robust_over_an_hour() {
    let cfg = SystemConfig::hybrid(1).unwrap();
    let settings = SimSettings::new(3600.0);
    let run = |seed| {
        let env = Environment { sea: SeaState::irregular(2.0, 8.0, seed), wind: Some(WindSpec::steady(11.4)) };
        simulate(&cfg, &env, &settings).unwrap()
    };
    let (a, b) = (run(1), run(2));
    for ch in ["float_rel_heave", "platform_heave"] {
        let (x, y) = (a.rms_mean_removed(ch).unwrap(), b.rms_mean_removed(ch).unwrap());
        assert!((x - y).abs() / x.max(y) < 0.10, "{ch}: {x} vs {y}");
    }
}

#[test]
fn same_seed_is_bitwise_deterministic() {
    let cfg = SystemConfig::hybrid(3).unwrap();
    let env = Environment { sea: SeaState::irregular(1.5, 7.0, 9), wind: Some(WindSpec::steady(9.0)) };
    let settings = SimSettings { transient_cutoff: 20.0, ..SimSettings::new(60.0) };
    let a = simulate(&cfg, &env, &settings).unwrap();
    let b = simulate(&cfg, &env, &settings).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}
