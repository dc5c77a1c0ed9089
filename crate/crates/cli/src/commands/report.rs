use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hybrid_core::metrics::{
    aep_from_jpd, capacity_factor, classify_synergy, gross_from_net, hybrid_cost_allocation, lcoe, p_cv_matrix, CostModel,
    DeviceRating, PowerMatrix, SynergyVerdict,
};
use hybrid_core::resource::Jpd;
use serde::{Deserialize, Serialize};

use super::matrix::matrix_dir;
use super::simulate::fwt_rating;
use crate::artifacts::{read_json, write_json, write_text};
use crate::config::{devices, is_fwt_only, is_wec_only, HybridPair, RunConfig};
use crate::error::{CliError, CliResult};

/// Per-device metrics. Every field is optional so bypass input can supply
/// any subset; missing values are derived where possible.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceMetrics {
    #[serde(default)]
    pub gross_aep_mwh: Option<f64>,
    #[serde(default)]
    pub net_aep_mwh: Option<f64>,
    #[serde(default)]
    pub capacity_factor: Option<f64>,
    #[serde(default)]
    pub p_cv: Option<f64>,
    #[serde(default)]
    pub lcoe: Option<f64>,
    #[serde(default)]
    pub capex: Option<f64>,
    #[serde(default)]
    pub opex: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TotalMetrics {
    pub net_aep_mwh: Option<f64>,
    pub capex: Option<f64>,
    pub opex: Option<f64>,
    pub lcoe: Option<f64>,
    pub p_cv: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemMetrics {
    pub name: String,
    pub devices: BTreeMap<String, DeviceMetrics>,
    #[serde(default)]
    pub total: Option<TotalMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridVerdicts {
    pub system: String,
    pub wec_reference: String,
    pub fwt_reference: String,
    pub verdicts: Vec<SynergyVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub fcr: f64,
    pub synergy_tolerance: f64,
    pub systems: Vec<SystemMetrics>,
    pub synergy: Vec<HybridVerdicts>,
}

impl MetricsReport {
    pub fn system(&self, name: &str) -> Option<&SystemMetrics> {
        self.systems.iter().find(|s| s.name == name)
    }

    pub fn device(&self, system: &str, device: &str) -> Option<&DeviceMetrics> {
        self.system(system)?.devices.get(device)
    }
}

/// Bypass input: metric values or matrix directories supplied directly.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BypassInput {
    #[serde(default)]
    pub systems: Vec<BypassSystem>,
    /// Overrides the config's hybrid pairing when present.
    #[serde(default)]
    pub hybrids: Vec<HybridPair>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BypassSystem {
    pub name: String,
    /// Directory laid out like the matrix stage output.
    #[serde(default)]
    pub matrix_dir: Option<PathBuf>,
    #[serde(default)]
    pub wec: Option<DeviceMetrics>,
    #[serde(default)]
    pub fwt: Option<DeviceMetrics>,
}

impl BypassInput {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut b: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
        };
        let base = path.parent().unwrap_or(Path::new("."));
        for s in &mut b.systems {
            if let Some(d) = &mut s.matrix_dir {
                if d.is_relative() {
                    *d = base.join(&*d);
                }
            }
        }
        Ok(b)
    }
}

fn rating_for(cfg: &RunConfig, system: &str, device: &str) -> CliResult<DeviceRating> {
    match device {
        "wec" => Ok(DeviceRating::wec()),
        _ => fwt_rating(&cfg.system(system)?).ok_or_else(|| CliError::Config(format!("`{system}` has no turbine"))),
    }
}

struct Matrices {
    jpd: Jpd,
    by_device: BTreeMap<String, PowerMatrix>,
}

fn load_matrices(dir: &Path, device_names: &[&str]) -> CliResult<Matrices> {
    let hint = "run `hybridsim matrix` for this system first";
    let jpd: Jpd = read_json(&dir.join("resource.json"), "jpd", hint)?;
    let mut by_device = BTreeMap::new();
    for d in device_names {
        let m: PowerMatrix = read_json(&dir.join(format!("power_{d}.json")), "power_matrix", hint)?;
        by_device.insert(d.to_string(), m);
    }
    Ok(Matrices { jpd, by_device })
}

fn from_matrix(m: &PowerMatrix, jpd: &Jpd, rating: &DeviceRating) -> CliResult<DeviceMetrics> {
    m.validate(rating)?;
    let a = aep_from_jpd(m, jpd, rating)?;
    Ok(DeviceMetrics {
        gross_aep_mwh: Some(a.gross),
        net_aep_mwh: Some(a.net),
        capacity_factor: Some(capacity_factor(a.gross, rating.rated_electrical)?),
        p_cv: p_cv_matrix(m, &jpd.annual_scaled_grid()).ok(),
        ..Default::default()
    })
}

/// Cell-wise sum of two electrical matrices on the same grid.
fn summed(a: &PowerMatrix, b: &PowerMatrix) -> CliResult<PowerMatrix> {
    if a.shape() != b.shape() {
        return Err(hybrid_core::Error::Dimension("device matrices differ in shape".into()).into());
    }
    let power = a
        .power
        .iter()
        .zip(&b.power)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.zip(*y).map(|(x, y)| x + y)).collect())
        .collect();
    Ok(PowerMatrix { device: "combined".into(), power, ..a.clone() })
}

/// Fill gaps: gross/net from each other, CF from gross, LCOE from cost and net.
fn complete(m: &mut DeviceMetrics, rating: &DeviceRating, cost: Option<&CostModel>) -> CliResult<()> {
    if m.gross_aep_mwh.is_none() {
        m.gross_aep_mwh = m.net_aep_mwh.map(|n| gross_from_net(n, rating));
    }
    if m.net_aep_mwh.is_none() {
        m.net_aep_mwh = m.gross_aep_mwh.map(|g| g * rating.loss_factor());
    }
    if m.capacity_factor.is_none() {
        if let Some(g) = m.gross_aep_mwh {
            m.capacity_factor = Some(capacity_factor(g, rating.rated_electrical)?);
        }
    }
    if let Some(c) = cost {
        m.capex.get_or_insert(c.capex);
        m.opex.get_or_insert(c.opex);
        if m.lcoe.is_none() {
            if let Some(n) = m.net_aep_mwh {
                m.lcoe = lcoe(c, n).ok();
            }
        }
    }
    Ok(())
}

/// Build the metrics report from matrix artifacts, or from bypass input.
pub fn build_report(cfg: &RunConfig, bypass: Option<&BypassInput>) -> CliResult<MetricsReport> {
    let econ = &cfg.economics;
    let pairs = match bypass {
        Some(b) if !b.hybrids.is_empty() => b.hybrids.clone(),
        _ => cfg.hybrid_pairs()?,
    };
    let mut names: Vec<String> = Vec::new();
    let mut push = |n: &str| {
        if !names.iter().any(|x| x == n) {
            names.push(n.to_string());
        }
    };
    match bypass {
        Some(b) => b.systems.iter().for_each(|s| push(&s.name)),
        None => cfg.systems.iter().for_each(|s| push(s)),
    }
    for p in &pairs {
        push(&p.wec);
        push(&p.fwt);
        push(&p.system);
    }

    // hybrid name → (wec part, fwt part) cost models
    let rules = econ.sharing_rules();
    let mut hybrid_costs: BTreeMap<String, (CostModel, CostModel)> = BTreeMap::new();
    for p in &pairs {
        let w = econ.cost_of(&cfg.system(&p.wec)?)?;
        let f = econ.cost_of(&cfg.system(&p.fwt)?)?;
        hybrid_costs.insert(p.system.clone(), hybrid_cost_allocation(&w, &f, &rules)?);
    }

    let mut systems = Vec::new();
    for name in &names {
        let sys = cfg.system(name)?;
        let devs = devices(&sys);
        let supplied = bypass.and_then(|b| b.systems.iter().find(|s| &s.name == name));
        let mut per: BTreeMap<String, DeviceMetrics> = BTreeMap::new();
        let mut combined_pcv = None;
        let dir = match supplied {
            Some(s) => s.matrix_dir.clone(),
            None if bypass.is_none() => Some(matrix_dir(cfg, name)),
            None => None,
        };
        if let Some(dir) = dir {
            let mats = load_matrices(&dir, &devs)?;
            for d in &devs {
                per.insert(d.to_string(), from_matrix(&mats.by_device[*d], &mats.jpd, &rating_for(cfg, name, d)?)?);
            }
            if let (Some(w), Some(f)) = (mats.by_device.get("wec"), mats.by_device.get("fwt")) {
                combined_pcv = p_cv_matrix(&summed(w, f)?, &mats.jpd.annual_scaled_grid()).ok();
            }
        }
        if let Some(s) = supplied {
            for (d, m) in [("wec", &s.wec), ("fwt", &s.fwt)] {
                if let Some(m) = m {
                    if !devs.contains(&d) {
                        return Err(CliError::Config(format!("`{name}` has no {d} device")));
                    }
                    per.insert(d.to_string(), m.clone());
                }
            }
        }
        for d in &devs {
            let rating = rating_for(cfg, name, d)?;
            let cost = if let Some((w, f)) = hybrid_costs.get(name) {
                Some(if *d == "wec" { w.clone() } else { f.clone() })
            } else if is_wec_only(&sys) || is_fwt_only(&sys) {
                econ.cost_of(&sys).ok()
            } else {
                None
            };
            if let Some(m) = per.get_mut(*d) {
                complete(m, &rating, cost.as_ref())?;
            }
        }
        let total = if devs.len() == 2 {
            let (w, f) = (per.get("wec").cloned().unwrap_or_default(), per.get("fwt").cloned().unwrap_or_default());
            let net = w.net_aep_mwh.zip(f.net_aep_mwh).map(|(a, b)| a + b);
            let capex = w.capex.zip(f.capex).map(|(a, b)| a + b);
            let opex = w.opex.zip(f.opex).map(|(a, b)| a + b);
            let lcoe = match (net, capex, opex) {
                (Some(n), Some(c), Some(o)) if n > 0.0 => Some((c * econ.fcr + o) / n),
                _ => None,
            };
            Some(TotalMetrics { net_aep_mwh: net, capex, opex, lcoe, p_cv: combined_pcv })
        } else {
            None
        };
        systems.push(SystemMetrics { name: name.clone(), devices: per, total });
    }

    let report_so_far = MetricsReport { fcr: econ.fcr, synergy_tolerance: econ.synergy_tolerance, systems, synergy: Vec::new() };
    let mut synergy = Vec::new();
    for p in &pairs {
        let mut verdicts = Vec::new();
        for metric in ["lcoe", "p_cv"] {
            let get = |sys: &str, dev: &str| -> Option<f64> {
                let m = report_so_far.device(sys, dev)?;
                if metric == "lcoe" { m.lcoe } else { m.p_cv }
            };
            if let (Some(sa), Some(ha), Some(sb), Some(hb)) =
                (get(&p.wec, "wec"), get(&p.system, "wec"), get(&p.fwt, "fwt"), get(&p.system, "fwt"))
            {
                verdicts.push(classify_synergy(metric, sa, ha, sb, hb, econ.synergy_tolerance)?);
            }
        }
        synergy.push(HybridVerdicts { system: p.system.clone(), wec_reference: p.wec.clone(), fwt_reference: p.fwt.clone(), verdicts });
    }
    Ok(MetricsReport { synergy, ..report_so_far })
}

fn opt(v: Option<f64>, scale: f64, digits: usize) -> String {
    v.map_or(String::new(), |x| format!("{:.*}", digits, x * scale))
}

/// Table-shaped CSVs: standalone performance, capacity factors, hybrid
/// economics, per-device hybrid LCOE and P_CV.
pub fn tables(r: &MetricsReport) -> BTreeMap<&'static str, String> {
    let mut t = BTreeMap::new();
    let mut perf = String::from("system,device,gross_aep_mwh,net_aep_gwh,capacity_factor,p_cv,lcoe_usd_per_mwh\n");
    let mut cf = String::from("system,device,net_aep_gwh,capacity_factor\n");
    for s in r.systems.iter().filter(|s| s.total.is_none()) {
        for (d, m) in &s.devices {
            let _ = writeln!(
                perf,
                "{},{d},{},{},{},{},{}",
                s.name,
                opt(m.gross_aep_mwh, 1.0, 3),
                opt(m.net_aep_mwh, 1e-3, 4),
                opt(m.capacity_factor, 1.0, 4),
                opt(m.p_cv, 1.0, 4),
                opt(m.lcoe, 1.0, 2)
            );
            let _ = writeln!(cf, "{},{d},{},{}", s.name, opt(m.net_aep_mwh, 1e-3, 4), opt(m.capacity_factor, 1.0, 4));
        }
    }
    let mut econ = String::from("system,total_net_aep_gwh,capex_busd,opex_musd_per_yr,lcoe_usd_per_mwh\n");
    let mut pcv = String::from("system,wec_p_cv,fwt_p_cv,combined_p_cv\n");
    for s in r.systems.iter().filter(|s| s.total.is_some()) {
        let tot = s.total.as_ref().expect("filtered");
        let _ = writeln!(
            econ,
            "{},{},{},{},{}",
            s.name,
            opt(tot.net_aep_mwh, 1e-3, 3),
            opt(tot.capex, 1e-9, 3),
            opt(tot.opex, 1e-6, 2),
            opt(tot.lcoe, 1.0, 2)
        );
        let dev = |d: &str| s.devices.get(d).and_then(|m| m.p_cv);
        let _ = writeln!(pcv, "{},{},{},{}", s.name, opt(dev("wec"), 1.0, 4), opt(dev("fwt"), 1.0, 4), opt(tot.p_cv, 1.0, 4));
    }
    let mut hl = String::from("system,wec_lcoe,fwt_lcoe,standalone_wec_lcoe,standalone_fwt_lcoe,lcoe_verdict,p_cv_verdict\n");
    for h in &r.synergy {
        let l = |s: &str, d: &str| r.device(s, d).and_then(|m| m.lcoe);
        let verdict = |metric: &str| {
            h.verdicts
                .iter()
                .find(|v| v.metric == metric)
                .map_or(String::new(), |v| serde_json::to_value(v.classification).map(|x| x.as_str().unwrap_or("").to_string()).unwrap_or_default())
        };
        let _ = writeln!(
            hl,
            "{},{},{},{},{},{},{}",
            h.system,
            opt(l(&h.system, "wec"), 1.0, 2),
            opt(l(&h.system, "fwt"), 1.0, 2),
            opt(l(&h.wec_reference, "wec"), 1.0, 2),
            opt(l(&h.fwt_reference, "fwt"), 1.0, 2),
            verdict("lcoe"),
            verdict("p_cv")
        );
    }
    t.insert("standalone_performance.csv", perf);
    t.insert("capacity_factor.csv", cf);
    t.insert("hybrid_economics.csv", econ);
    t.insert("hybrid_lcoe.csv", hl);
    t.insert("p_cv.csv", pcv);
    t
}

pub fn cmd_report(cfg: &RunConfig, bypass: Option<&Path>) -> CliResult<MetricsReport> {
    let input = bypass.map(BypassInput::load).transpose()?;
    let report = build_report(cfg, input.as_ref())?;
    let dir = cfg.output_dir.join("report");
    for (name, text) in tables(&report) {
        write_text(&dir.join(name), &text)?;
    }
    write_json(&dir.join("verdicts.json"), "synergy_verdicts", &report.synergy)?;
    write_json(&dir.join("report.json"), "metrics_report", &report)?;
    Ok(report)
}
