use std::path::{Path, PathBuf};

use hybrid_core::resource::{build_combined, build_jpd, build_wind_rose, ingest_buoy_records, CombinedResource, Jpd, WindRose};
use serde::{Deserialize, Serialize};

use crate::artifacts::{write_json, write_text};
use crate::config::{RunConfig, SiteConfig};
use crate::error::{CliError, CliResult};
use crate::svg;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceSummary {
    pub records: usize,
    pub dropped: usize,
    pub total_hours: f64,
    pub modal_hm0: f64,
    pub modal_te: f64,
    pub modal_hours: f64,
    /// Modal-cell hours rescaled to a full year.
    pub modal_annual_hours: f64,
    pub site_mean_wind: f64,
    pub dominant_speed_band: (f64, f64),
}

pub struct ResourceProducts {
    pub jpd: Jpd,
    pub rose: WindRose,
    pub combined: CombinedResource,
    pub summary: ResourceSummary,
}

pub fn resource_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.join("resource")
}

pub fn build(site: &SiteConfig) -> CliResult<ResourceProducts> {
    let text = std::fs::read_to_string(&site.buoy_file).map_err(|e| CliError::io(&site.buoy_file, e))?;
    let ing = ingest_buoy_records(&text, &site.columns)?;
    log::info!("{} records kept, {} dropped", ing.records.len(), ing.dropped);
    let jpd = build_jpd(&ing.records, site.h_width, site.t_width, site.record_hours)?;
    let rose = build_wind_rose(&ing.records, site.wind_sectors, &site.wind_speed_edges, site.record_hours)?;
    let combined = build_combined(&ing.records, &jpd)?;
    let (i, j, modal_hours) = jpd.modal_cell();
    let summary = ResourceSummary {
        records: ing.records.len(),
        dropped: ing.dropped,
        total_hours: jpd.total_hours(),
        modal_hm0: jpd.h_centers()[i],
        modal_te: jpd.t_centers()[j],
        modal_hours,
        modal_annual_hours: jpd.annual_scaled_grid()[i][j],
        site_mean_wind: combined.site_mean_wind,
        dominant_speed_band: rose.dominant_speed_band(),
    };
    Ok(ResourceProducts { jpd, rose, combined, summary })
}

fn labels(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| format!("{x}")).collect()
}

fn annual_csv(jpd: &Jpd) -> String {
    let grid = jpd.annual_scaled_grid();
    let mut s = String::from("hm0\\te");
    for t in jpd.t_centers() {
        s.push_str(&format!(",{t}"));
    }
    s.push('\n');
    for (h, row) in jpd.h_centers().iter().zip(&grid) {
        s.push_str(&format!("{h}"));
        for v in row {
            s.push_str(&format!(",{v:.6}"));
        }
        s.push('\n');
    }
    s
}

pub fn write(dir: &Path, p: &ResourceProducts) -> CliResult<()> {
    write_json(&dir.join("jpd.json"), "jpd", &p.jpd)?;
    write_text(&dir.join("jpd.csv"), &p.jpd.to_csv())?;
    write_text(&dir.join("jpd_annual.csv"), &annual_csv(&p.jpd))?;
    write_json(&dir.join("wind_rose.json"), "wind_rose", &p.rose)?;
    write_text(&dir.join("wind_rose.csv"), &p.rose.to_csv())?;
    write_json(&dir.join("combined.json"), "combined_resource", &p.combined)?;
    write_text(&dir.join("combined.csv"), &p.combined.to_csv())?;
    write_json(&dir.join("summary.json"), "resource_summary", &p.summary)?;
    let hours: Vec<Vec<Option<f64>>> = p
        .jpd
        .hours_grid()
        .into_iter()
        .map(|r| r.into_iter().map(|h| (h > 0.0).then_some(h)).collect())
        .collect();
    let heat = svg::heatmap(
        "Sea-state occurrence [h]",
        &hours,
        &labels(&p.jpd.h_centers()),
        &labels(&p.jpd.t_centers()),
        "Te [s]",
        "Hm0 [m]",
    );
    write_text(&dir.join("jpd.svg"), &heat)?;
    let winds: Vec<Vec<Option<f64>>> = p.combined.mean_wind.clone();
    let wind_map = svg::heatmap(
        "Mean wind speed per sea state [m/s]",
        &winds,
        &labels(&p.jpd.h_centers()),
        &labels(&p.jpd.t_centers()),
        "Te [s]",
        "Hm0 [m]",
    );
    write_text(&dir.join("combined.svg"), &wind_map)
}

pub fn cmd_resource(cfg: &RunConfig) -> CliResult<ResourceSummary> {
    let site = cfg.site.as_ref().ok_or_else(|| CliError::Config("resource needs a [site] block".into()))?;
    let products = build(site)?;
    write(&resource_dir(cfg), &products)?;
    Ok(products.summary)
}
