pub mod matrix;
pub mod report;
pub mod resource;
pub mod simulate;

use hybrid_core::aero::{TurbineSpec, WindSpec};
use hybrid_core::assembly::{Environment, SimSettings, SystemConfig, TurbineChoice};
use hybrid_core::waves::{te_over_tp, SeaState, WaveKind};

use crate::config::SimulationConfig;
use crate::error::{CliError, CliResult};

/// Highest wave frequency the built-in excitation tables cover, rad/s, with margin.
const MAX_COMPONENT_OMEGA: f64 = 9.5;

pub fn turbine_spec(choice: TurbineChoice) -> Option<TurbineSpec> {
    match choice {
        TurbineChoice::None => None,
        TurbineChoice::FiveMw => Some(TurbineSpec::nrel_5mw()),
        TurbineChoice::FifteenMw => Some(TurbineSpec::iea_15mw()),
    }
}

/// Sea and wind for one case. A missing wind speed means rated wind.
pub fn environment(sim: &SimulationConfig, system: &SystemConfig, kind: WaveKind, height: f64, period: f64, wind: Option<f64>, seed: u64) -> Environment {
    let mut sea = match kind {
        WaveKind::Regular => SeaState::regular(height, period),
        WaveKind::Irregular => SeaState::irregular(height, period, seed),
    };
    sea.gamma = sim.gamma;
    let wind = turbine_spec(system.turbine).map(|spec| WindSpec {
        turbulence_intensity: sim.turbulence_intensity,
        seed,
        ..WindSpec::steady(wind.unwrap_or(spec.rated_wind))
    });
    Environment { sea, wind }
}

/// Trim the synthesis band so no component exceeds the coefficient tables.
pub fn settings_for(base: &SimSettings, sea: &SeaState) -> SimSettings {
    let mut s = base.clone();
    if sea.kind == WaveKind::Irregular && sea.period > 0.0 {
        let wp = 2.0 * std::f64::consts::PI * te_over_tp(sea.gamma) / sea.period;
        s.spectrum.hi_factor = s.spectrum.hi_factor.min(MAX_COMPONENT_OMEGA / wp);
    }
    s
}

pub fn thread_pool(workers: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Config("worker count must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// `*` matches any run of characters; everything else is literal.
pub fn glob_match(pattern: &str, name: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let n: Vec<char> = name.chars().collect();
    let (mut pi, mut ni) = (0, 0);
    let (mut star, mut mark) = (None, 0);
    while ni < n.len() {
        if pi < p.len() && p[pi] != '*' && p[pi] == n[ni] {
            pi += 1;
            ni += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some(pi);
            mark = ni;
            pi += 1;
        } else if let Some(s) = star {
            pi = s + 1;
            mark += 1;
            ni = mark;
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glob() {
        assert!(glob_match("*", "anything"));
        assert!(glob_match("hybrid_5mw_*", "hybrid_5mw_spar_rp"));
        assert!(!glob_match("hybrid_5mw_*", "hybrid_15mw_spar"));
        assert!(glob_match("run1", "run1"));
        assert!(!glob_match("run1", "run10"));
        assert!(glob_match("*_rp", "hybrid_15mw_spar_rp"));
    }

    #[test]
    fn short_periods_trim_the_band() {
        let base = SimSettings::new(600.0);
        let s = settings_for(&base, &SeaState::irregular(0.5, 2.5, 1));
        assert!(s.spectrum.hi_factor < base.spectrum.hi_factor);
        let s = settings_for(&base, &SeaState::irregular(2.0, 10.0, 1));
        assert_eq!(s.spectrum.hi_factor, base.spectrum.hi_factor);
    }
}
