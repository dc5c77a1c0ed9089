use std::path::{Path, PathBuf};

use hybrid_core::assembly::{simulate, FloatChoice};
use hybrid_core::metrics::{DeviceRating, PowerMatrix};
use hybrid_core::resource::{CombinedResource, Jpd};
use hybrid_core::waves::WaveKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::resource::resource_dir;
use super::simulate::{fwt_rating, mean_electrical};
use super::{environment, settings_for};
use crate::artifacts::{read_json, write_json, write_text};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::svg;

/// Merge a combined resource into coarser bins. Cell wind means combine
/// weighted by record count.
pub fn merge_combined(c: &CombinedResource, h_factor: usize, t_factor: usize) -> CombinedResource {
    if h_factor == 1 && t_factor == 1 {
        return c.clone();
    }
    let jpd = c.jpd.merged(h_factor, t_factor);
    let mut sums = vec![vec![(0.0, 0u64); jpd.n_t()]; jpd.n_h()];
    for (i, row) in c.mean_wind.iter().enumerate() {
        for (j, m) in row.iter().enumerate() {
            if let Some(m) = m {
                let n = c.jpd.counts[i][j];
                let cell = &mut sums[i / h_factor][j / t_factor];
                cell.0 += m * n as f64;
                cell.1 += n;
            }
        }
    }
    let mean_wind = sums
        .into_iter()
        .map(|r| r.into_iter().map(|(s, n)| (n > 0).then(|| s / n as f64)).collect())
        .collect();
    CombinedResource { jpd, mean_wind, site_mean_wind: c.site_mean_wind }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub i: usize,
    pub j: usize,
    pub hm0: f64,
    pub te: f64,
    pub wind: f64,
    pub seed: u64,
    pub wec: Option<f64>,
    pub fwt: Option<f64>,
}

pub fn matrix_dir(cfg: &RunConfig, system: &str) -> PathBuf {
    cfg.output_dir.join("matrix").join(system)
}

pub fn load_resource(cfg: &RunConfig) -> CliResult<CombinedResource> {
    let path = resource_dir(cfg).join("combined.json");
    let c: CombinedResource = read_json(&path, "combined_resource", "run `hybridsim resource` first")?;
    let [hf, tf] = cfg.site.as_ref().map_or([1, 1], |s| s.matrix_merge);
    Ok(merge_combined(&c, hf, tf))
}

fn labels(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| format!("{x}")).collect()
}

pub fn write_matrix(dir: &Path, system: &str, jpd: &Jpd, m: &PowerMatrix) -> CliResult<()> {
    write_json(&dir.join(format!("power_{}.json", m.device)), "power_matrix", m)?;
    write_text(&dir.join(format!("power_{}.csv", m.device)), &m.to_csv())?;
    let kw: Vec<Vec<Option<f64>>> = m.power.iter().map(|r| r.iter().map(|p| p.map(|v| v / 1e3)).collect()).collect();
    let heat = svg::heatmap(
        &format!("{system}: {} mean electrical power [kW]", m.device),
        &kw,
        &labels(&jpd.h_centers()),
        &labels(&jpd.t_centers()),
        "Te [s]",
        "Hm0 [m]",
    );
    write_text(&dir.join(format!("power_{}.svg", m.device)), &heat)
}

/// One irregular-sea simulation per occupied cell and seed, at that cell's
/// mean wind. Finished cells are kept on disk and skipped on rerun.
pub fn cmd_matrix(cfg: &RunConfig, system_name: &str, force: bool, pool: &rayon::ThreadPool) -> CliResult<Vec<PowerMatrix>> {
    let system = cfg.system(system_name)?;
    system.validate()?;
    let resource = load_resource(cfg)?;
    let jpd = &resource.jpd;
    let dir = matrix_dir(cfg, system_name);
    let mut jobs = Vec::new();
    for (i, j) in jpd.occupied_cells() {
        let wind = resource.mean_wind[i][j].ok_or_else(|| CliError::Config(format!("cell ({i}, {j}) has hours but no wind")))?;
        for &seed in &cfg.simulation.seeds {
            jobs.push((i, j, wind, seed));
        }
    }
    log::info!("{system_name}: {} cell simulation(s)", jobs.len());
    let wec_rating = DeviceRating::wec();
    let fwt = fwt_rating(&system);
    let has_float = system.float != FloatChoice::None;
    let (hc, tc) = (jpd.h_centers(), jpd.t_centers());
    let results: Vec<CliResult<CellResult>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, j, wind, seed)| {
                let path = dir.join("cells").join(format!("h{i:02}_t{j:02}_s{seed}.json"));
                if !force && path.is_file() {
                    return read_json(&path, "cell_result", "");
                }
                let case = format!("{system_name}/cell({}, {})/seed {seed}", hc[i], tc[j]);
                let env = environment(&cfg.simulation, &system, WaveKind::Irregular, hc[i], tc[j], Some(wind), seed);
                let settings = settings_for(&cfg.settings(), &env.sea);
                let res = simulate(&system, &env, &settings).map_err(|e| CliError::case(&case, e))?;
                let cell = CellResult {
                    i,
                    j,
                    hm0: hc[i],
                    te: tc[j],
                    wind,
                    seed,
                    wec: if has_float { Some(mean_electrical(&res, "pto_power", &wec_rating)?) } else { None },
                    fwt: match &fwt {
                        Some(r) => Some(mean_electrical(&res, "generator_power", r)?),
                        None => None,
                    },
                };
                write_json(&path, "cell_result", &cell)?;
                Ok(cell)
            })
            .collect()
    });
    let cells = results.into_iter().collect::<CliResult<Vec<_>>>()?;

    let mut out = Vec::new();
    let devices: Vec<(&str, Box<dyn Fn(&CellResult) -> Option<f64>>)> = vec![
        ("wec", Box::new(|c: &CellResult| c.wec)),
        ("fwt", Box::new(|c: &CellResult| c.fwt)),
    ];
    for (device, get) in devices {
        if cells.iter().all(|c| get(c).is_none()) {
            continue;
        }
        let mut m = PowerMatrix::empty(device, jpd);
        let mut n = vec![vec![0usize; jpd.n_t()]; jpd.n_h()];
        for c in &cells {
            if let Some(p) = get(c) {
                *m.power[c.i][c.j].get_or_insert(0.0) += p;
                n[c.i][c.j] += 1;
            }
        }
        for (row, nrow) in m.power.iter_mut().zip(&n) {
            for (p, k) in row.iter_mut().zip(nrow) {
                if let Some(v) = p {
                    *v /= *k as f64;
                }
            }
        }
        write_matrix(&dir, system_name, jpd, &m)?;
        out.push(m);
    }
    write_json(&dir.join("resource.json"), "jpd", jpd)?;
    Ok(out)
}
