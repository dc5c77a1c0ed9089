use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hybrid_core::assembly::{simulate, ChannelStats, SystemConfig, TimeSeriesResult};
use hybrid_core::metrics::{electrical_power, DeviceRating};
use hybrid_core::waves::WaveKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{environment, glob_match, settings_for};
use crate::artifacts::{read_json, write_json, write_text};
use crate::config::{RunCase, RunConfig};
use crate::error::{CliError, CliResult};
use crate::svg;

/// One (system, sea state, seed) simulation.
#[derive(Debug, Clone)]
pub struct Case {
    pub system: SystemConfig,
    pub run: RunCase,
    pub kind: WaveKind,
    pub seed: u64,
}

impl Case {
    pub fn id(&self) -> String {
        match self.kind {
            WaveKind::Regular => format!("{}/{}", self.system.name, self.run.name),
            WaveKind::Irregular => format!("{}/{}_s{}", self.system.name, self.run.name, self.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub system: String,
    pub run: String,
    pub wave_kind: WaveKind,
    pub height: f64,
    pub period: f64,
    pub wind: Option<f64>,
    pub seed: u64,
    /// Electrical means after the transient cutoff, W.
    pub wec_mean_electrical: Option<f64>,
    pub fwt_mean_electrical: Option<f64>,
    pub stats: BTreeMap<String, ChannelStats>,
}

/// Mean of the per-sample electrical power after the cutoff.
pub fn mean_electrical(res: &TimeSeriesResult, channel: &str, rating: &DeviceRating) -> CliResult<f64> {
    let x = res.channel(channel)?;
    let start = (res.transient_cutoff / res.record_dt - 1e-9).ceil() as usize;
    let tail = &x[start.min(x.len())..];
    if tail.is_empty() {
        return Err(CliError::Config("transient cutoff leaves no samples".into()));
    }
    Ok(tail.iter().map(|&p| electrical_power(p, rating)).sum::<f64>() / tail.len() as f64)
}

pub fn fwt_rating(system: &SystemConfig) -> Option<DeviceRating> {
    super::turbine_spec(system.turbine).map(|s| DeviceRating::new(s.rating))
}

/// Selector "RUNS x SYSTEMS", each side a comma-separated list of `*` globs.
pub fn parse_selector(sel: &str) -> CliResult<(Vec<String>, Vec<String>)> {
    let norm = sel.replace('×', " x ");
    let parts: Vec<&str> = norm.split(" x ").map(str::trim).collect();
    let split = |s: &str| s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect::<Vec<_>>();
    match parts.as_slice() {
        [r, s] => Ok((split(r), split(s))),
        [s] => Ok((vec!["*".into()], split(s))),
        _ => Err(CliError::Config(format!("selector `{sel}` should look like `run1 x hybrid_5mw_spar_rp`"))),
    }
}

pub fn select_cases(cfg: &RunConfig, selector: &str) -> CliResult<Vec<Case>> {
    let (run_pats, sys_pats) = parse_selector(selector)?;
    let systems = if cfg.systems.is_empty() { SystemConfig::catalogue() } else { cfg.selected_systems()? };
    let mut out = Vec::new();
    for system in systems.iter().filter(|s| sys_pats.iter().any(|p| glob_match(p, &s.name))) {
        for run in cfg.simulation.runs.iter().filter(|r| run_pats.iter().any(|p| glob_match(p, &r.name))) {
            let kind = run.kind.unwrap_or(cfg.simulation.wave_kind);
            let seeds: &[u64] = if kind == WaveKind::Regular { &cfg.simulation.seeds[..1] } else { &cfg.simulation.seeds };
            for &seed in seeds {
                out.push(Case { system: system.clone(), run: run.clone(), kind, seed });
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::EmptySelection(selector.to_string()));
    }
    Ok(out)
}

pub fn case_dir(cfg: &RunConfig, case: &Case) -> PathBuf {
    cfg.output_dir.join("simulate").join(case.id())
}

const STRIP_CHANNELS: [&str; 7] = [
    "wave_elevation",
    "platform_surge",
    "platform_heave",
    "platform_pitch",
    "float_rel_heave",
    "pto_power",
    "generator_power",
];

pub fn run_case(cfg: &RunConfig, case: &Case) -> CliResult<(CaseSummary, TimeSeriesResult)> {
    let env = environment(&cfg.simulation, &case.system, case.kind, case.run.height, case.run.period, case.run.wind, case.seed);
    let settings = settings_for(&cfg.settings(), &env.sea);
    let res = simulate(&case.system, &env, &settings).map_err(|e| CliError::case(case.id(), e))?;
    let mut stats = BTreeMap::new();
    for c in res.channels.iter().filter(|c| *c != "time") {
        stats.insert(c.clone(), res.stats(c).map_err(|e| CliError::case(case.id(), e))?);
    }
    let has_float = case.system.float != hybrid_core::assembly::FloatChoice::None;
    let wec = if has_float { Some(mean_electrical(&res, "pto_power", &DeviceRating::wec())?) } else { None };
    let fwt = match fwt_rating(&case.system) {
        Some(r) => Some(mean_electrical(&res, "generator_power", &r)?),
        None => None,
    };
    let summary = CaseSummary {
        system: case.system.name.clone(),
        run: case.run.name.clone(),
        wave_kind: case.kind,
        height: case.run.height,
        period: case.run.period,
        wind: env.wind.as_ref().map(|w| w.mean_speed),
        seed: case.seed,
        wec_mean_electrical: wec,
        fwt_mean_electrical: fwt,
        stats,
    };
    Ok((summary, res))
}

fn write_case(dir: &Path, summary: &CaseSummary, res: &TimeSeriesResult) -> CliResult<()> {
    write_text(&dir.join("timeseries.csv"), &res.to_csv())?;
    let time = res.channel("time")?;
    let chans: Vec<(&str, &[f64])> = STRIP_CHANNELS
        .iter()
        .filter_map(|c| res.channel(c).ok().map(|d| (*c, d)))
        .filter(|(_, d)| d.iter().any(|v| *v != 0.0))
        .collect();
    write_text(&dir.join("strips.svg"), &svg::strips(&format!("{} / {}", summary.system, summary.run), time, &chans))?;
    // the summary is written last and marks the case complete
    write_json(&dir.join("summary.json"), "case_summary", summary)
}

/// Run every selected case in parallel; cases with an existing summary are
/// reused unless `force` is set.
pub fn cmd_simulate(cfg: &RunConfig, selector: &str, force: bool, pool: &rayon::ThreadPool) -> CliResult<Vec<CaseSummary>> {
    let cases = select_cases(cfg, selector)?;
    log::info!("{} case(s) selected", cases.len());
    let results: Vec<CliResult<CaseSummary>> = pool.install(|| {
        cases
            .par_iter()
            .map(|case| {
                let dir = case_dir(cfg, case);
                let done = dir.join("summary.json");
                if !force && done.is_file() {
                    log::info!("{}: reusing", case.id());
                    return read_json(&done, "case_summary", "");
                }
                log::info!("{}: running", case.id());
                let (summary, res) = run_case(cfg, case)?;
                write_case(&dir, &summary, &res)?;
                Ok(summary)
            })
            .collect()
    });
    let summaries = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    let index: Vec<String> = cases.iter().map(Case::id).collect();
    write_json(&cfg.output_dir.join("simulate").join("index.json"), "case_index", &index)?;
    Ok(summaries)
}
