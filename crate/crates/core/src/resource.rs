//! Buoy-record ingestion and the three site resource products: the sea-state
//! joint probability distribution (JPD), the wind rose and the combined
//! wind-wave matrix.
//!
//! Everything here is a pure function over an immutable record list.

use std::collections::HashMap;

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One hourly (or other fixed-cadence) buoy observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuoyRecord {
    pub timestamp: DateTime<Utc>,
    /// Significant wave height, m.
    pub hm0: f64,
    /// Energy period, s.
    pub te: f64,
    /// Wind speed at measurement height, m/s.
    pub wind_speed: f64,
    /// Wind direction, degrees clockwise from North, in [0, 360).
    pub wind_dir: f64,
}

/// How the timestamp is spread over the input columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimestampColumns {
    /// Separate year / month / day / hour / minute columns (NDBC standard meteorological layout).
    Parts {
        year: String,
        month: String,
        day: String,
        hour: String,
        #[serde(default)]
        minute: Option<String>,
    },
    /// A single RFC 3339 column.
    Rfc3339 { column: String },
}

/// Maps record fields onto header names of a delimited buoy file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub hm0: String,
    pub period: String,
    /// Multiplier applied to the period column to obtain the energy period.
    #[serde(default = "one")]
    pub period_factor: f64,
    pub wind_speed: String,
    pub wind_dir: String,
    pub timestamp: TimestampColumns,
    /// Values treated as "missing" in any mapped column.
    #[serde(default = "default_sentinels")]
    pub sentinels: Vec<f64>,
}

fn one() -> f64 {
    1.0
}

fn default_sentinels() -> Vec<f64> {
    vec![99.0, 999.0, 9999.0]
}

impl ColumnMap {
    /// NDBC standard meteorological layout, energy period taken from `APD`.
    pub fn ndbc() -> Self {
        Self {
            hm0: "WVHT".into(),
            period: "APD".into(),
            period_factor: 1.0,
            wind_speed: "WSPD".into(),
            wind_dir: "WDIR".into(),
            timestamp: TimestampColumns::Parts {
                year: "YY".into(),
                month: "MM".into(),
                day: "DD".into(),
                hour: "hh".into(),
                minute: Some("mm".into()),
            },
            sentinels: default_sentinels(),
        }
    }
}

/// Result of [`ingest_buoy_records`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub records: Vec<BuoyRecord>,
    /// Rows discarded because a mapped column held a missing-value sentinel.
    pub dropped: usize,
}

fn split_fields(line: &str, comma: bool) -> Vec<&str> {
    if comma {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Parse a delimited buoy file with a header row.
///
/// Lines starting with `#` after the header are treated as comments (NDBC
/// ships a units line there). Rows where any mapped column holds a sentinel,
/// `MM` or a non-finite value are dropped and counted.
pub fn ingest_buoy_records(raw_text: &str, column_map: &ColumnMap) -> Result<Ingested> {
    let mut lines = raw_text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header_line) = lines
        .next()
        .ok_or_else(|| Error::EmptyDataset("buoy file has no header".into()))?;
    let header_line = header_line.trim().trim_start_matches('#');
    let comma = header_line.contains(',');
    let header: Vec<String> = split_fields(header_line, comma)
        .into_iter()
        .map(|s| s.to_string())
        .collect();
    let index: HashMap<&str, usize> = header
        .iter()
        .enumerate()
        .map(|(i, h)| (h.as_str(), i))
        .collect();
    let col = |name: &str| -> Result<usize> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Schema(format!("required column `{name}` not found in header")))
    };

    let hm0_c = col(&column_map.hm0)?;
    let per_c = col(&column_map.period)?;
    let ws_c = col(&column_map.wind_speed)?;
    let wd_c = col(&column_map.wind_dir)?;
    enum Ts {
        Parts([usize; 4], Option<usize>),
        Rfc(usize),
    }
    let ts = match &column_map.timestamp {
        TimestampColumns::Parts {
            year,
            month,
            day,
            hour,
            minute,
        } => Ts::Parts(
            [col(year)?, col(month)?, col(day)?, col(hour)?],
            minute.as_deref().map(col).transpose()?,
        ),
        TimestampColumns::Rfc3339 { column } => Ts::Rfc(col(column)?),
    };

    let is_missing = |s: &str| -> Option<f64> {
        if s.eq_ignore_ascii_case("MM") || s.is_empty() {
            return None;
        }
        let v: f64 = s.parse().ok()?;
        if !v.is_finite() || column_map.sentinels.iter().any(|m| (v - m).abs() < 1e-9) {
            None
        } else {
            Some(v)
        }
    };

    let mut records = Vec::new();
    let mut dropped = 0usize;
    for (lineno, line) in lines {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let fields = split_fields(line.trim(), comma);
        let get = |i: usize| -> Result<&str> {
            fields.get(i).copied().ok_or_else(|| {
                Error::Schema(format!("line {}: expected at least {} fields", lineno + 1, i + 1))
            })
        };
        let timestamp = match &ts {
            Ts::Parts(parts, minute) => {
                let num = |i: usize| -> Result<u32> {
                    get(i)?.parse::<u32>().map_err(|_| {
                        Error::Schema(format!("line {}: bad timestamp field", lineno + 1))
                    })
                };
                let mut year = num(parts[0])? as i32;
                if year < 100 {
                    year += if year < 50 { 2000 } else { 1900 };
                }
                let min = match minute {
                    Some(m) => num(*m)?,
                    None => 0,
                };
                NaiveDate::from_ymd_opt(year, num(parts[1])?, num(parts[2])?)
                    .and_then(|d| d.and_hms_opt(num(parts[3]).ok()?, min, 0))
                    .map(|n| Utc.from_utc_datetime(&n))
                    .ok_or_else(|| Error::Schema(format!("line {}: invalid date", lineno + 1)))?
            }
            Ts::Rfc(c) => DateTime::parse_from_rfc3339(get(*c)?)
                .map_err(|e| Error::Schema(format!("line {}: {e}", lineno + 1)))?
                .with_timezone(&Utc),
        };
        let vals = [hm0_c, per_c, ws_c, wd_c]
            .iter()
            .map(|&c| get(c).map(is_missing))
            .collect::<Result<Vec<_>>>()?;
        match vals.as_slice() {
            [Some(h), Some(p), Some(ws), Some(wd)]
                if *h >= 0.0 && *p * column_map.period_factor > 0.0 && *ws >= 0.0 =>
            {
                records.push(BuoyRecord {
                    timestamp,
                    hm0: *h,
                    te: p * column_map.period_factor,
                    wind_speed: *ws,
                    wind_dir: wd.rem_euclid(360.0),
                });
            }
            _ => dropped += 1,
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset(format!(
            "no usable rows ({dropped} dropped)"
        )));
    }
    records.sort_by_key(|r| r.timestamp);
    Ok(Ingested { records, dropped })
}

/// Half-open bin index on a grid anchored at zero. A relative snap of 1e-9
/// keeps values such as 0.3/0.1 on the upper side of their edge.
fn bin_index(value: f64, width: f64) -> usize {
    ((value / width) + 1e-9).floor().max(0.0) as usize
}

/// Sea-state occurrence table: hours per (Hm0, Te) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jpd {
    pub h_bin_edges: Vec<f64>,
    pub t_bin_edges: Vec<f64>,
    /// Record counts, rows = height bins, columns = period bins.
    pub counts: Vec<Vec<u64>>,
    /// Duration represented by one record, hours.
    pub record_hours: f64,
}

impl Jpd {
    pub fn n_h(&self) -> usize {
        self.h_bin_edges.len() - 1
    }

    pub fn n_t(&self) -> usize {
        self.t_bin_edges.len() - 1
    }

    pub fn h_centers(&self) -> Vec<f64> {
        self.h_bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn t_centers(&self) -> Vec<f64> {
        self.t_bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn hours(&self, i: usize, j: usize) -> f64 {
        self.counts[i][j] as f64 * self.record_hours
    }

    pub fn hours_grid(&self) -> Vec<Vec<f64>> {
        (0..self.n_h())
            .map(|i| (0..self.n_t()).map(|j| self.hours(i, j)).collect())
            .collect()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn total_hours(&self) -> f64 {
        self.total_count() as f64 * self.record_hours
    }

    /// Hours rescaled so the table sums to one year (8760 h).
    pub fn annual_scaled_grid(&self) -> Vec<Vec<f64>> {
        let scale = 8760.0 / self.total_hours();
        self.hours_grid()
            .into_iter()
            .map(|row| row.into_iter().map(|h| h * scale).collect())
            .collect()
    }

    pub fn cell_of(&self, hm0: f64, te: f64) -> Option<(usize, usize)> {
        let hw = self.h_bin_edges[1] - self.h_bin_edges[0];
        let tw = self.t_bin_edges[1] - self.t_bin_edges[0];
        let i = bin_index(hm0 - self.h_bin_edges[0], hw);
        let j = bin_index(te - self.t_bin_edges[0], tw);
        (hm0 >= self.h_bin_edges[0] && te >= self.t_bin_edges[0] && i < self.n_h() && j < self.n_t())
            .then_some((i, j))
    }

    /// The most frequently occurring cell: (row, column, hours).
    pub fn modal_cell(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, 0u64);
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > best.2 {
                    best = (i, j, c);
                }
            }
        }
        (best.0, best.1, best.2 as f64 * self.record_hours)
    }

    pub fn occupied_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Coarsen by integer factors, summing fine cells into merged cells.
    pub fn merged(&self, h_factor: usize, t_factor: usize) -> Jpd {
        let nh = self.n_h().div_ceil(h_factor);
        let nt = self.n_t().div_ceil(t_factor);
        let hw = (self.h_bin_edges[1] - self.h_bin_edges[0]) * h_factor as f64;
        let tw = (self.t_bin_edges[1] - self.t_bin_edges[0]) * t_factor as f64;
        let mut counts = vec![vec![0u64; nt]; nh];
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                counts[i / h_factor][j / t_factor] += c;
            }
        }
        Jpd {
            h_bin_edges: (0..=nh).map(|k| self.h_bin_edges[0] + k as f64 * hw).collect(),
            t_bin_edges: (0..=nt).map(|k| self.t_bin_edges[0] + k as f64 * tw).collect(),
            counts,
            record_hours: self.record_hours,
        }
    }

    /// CSV grid: first column height-bin centers, header row period-bin centers.
    pub fn to_csv(&self) -> String {
        grid_csv(
            "hm0\\te",
            &self.h_centers(),
            &self.t_centers(),
            |i, j| Some(self.hours(i, j)),
        )
    }
}

pub(crate) fn grid_csv(
    corner: &str,
    rows: &[f64],
    cols: &[f64],
    value: impl Fn(usize, usize) -> Option<f64>,
) -> String {
    let mut s = String::from(corner);
    for c in cols {
        s.push_str(&format!(",{c}"));
    }
    s.push('\n');
    for (i, r) in rows.iter().enumerate() {
        s.push_str(&format!("{r}"));
        for j in 0..cols.len() {
            match value(i, j) {
                Some(v) => s.push_str(&format!(",{v}")),
                None => s.push(','),
            }
        }
        s.push('\n');
    }
    s
}

/// Bin records into an (Hm0, Te) occurrence table with edges anchored at zero.
pub fn build_jpd(records: &[BuoyRecord], h_width: f64, t_width: f64, record_hours: f64) -> Result<Jpd> {
    if !(h_width > 0.0 && t_width > 0.0 && record_hours > 0.0) {
        return Err(Error::InvalidInput(
            "bin widths and record duration must be positive".into(),
        ));
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset("no records to bin".into()));
    }
    let nh = records.iter().map(|r| bin_index(r.hm0, h_width)).max().unwrap_or(0) + 1;
    let nt = records.iter().map(|r| bin_index(r.te, t_width)).max().unwrap_or(0) + 1;
    let mut counts = vec![vec![0u64; nt]; nh];
    for r in records {
        counts[bin_index(r.hm0, h_width)][bin_index(r.te, t_width)] += 1;
    }
    Ok(Jpd {
        h_bin_edges: (0..=nh).map(|k| k as f64 * h_width).collect(),
        t_bin_edges: (0..=nt).map(|k| k as f64 * t_width).collect(),
        counts,
        record_hours,
    })
}

/// Wind direction/speed occurrence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindRose {
    /// n+1 edges; sector k spans [edges[k], edges[k+1]) modulo 360, centered on k·360/n.
    pub sector_edges: Vec<f64>,
    /// Lower edges of the speed bins; the final bin is open-ended.
    pub speed_bin_edges: Vec<f64>,
    pub counts: Vec<Vec<u64>>,
    pub record_hours: f64,
    pub mean_speed: f64,
}

impl WindRose {
    pub fn n_sectors(&self) -> usize {
        self.sector_edges.len() - 1
    }

    pub fn hours(&self, sector: usize, speed_bin: usize) -> f64 {
        self.counts[sector][speed_bin] as f64 * self.record_hours
    }

    pub fn total_hours(&self) -> f64 {
        self.counts.iter().flatten().sum::<u64>() as f64 * self.record_hours
    }

    /// Hours per speed bin summed over all sectors.
    pub fn speed_histogram(&self) -> Vec<f64> {
        (0..self.speed_bin_edges.len())
            .map(|b| (0..self.n_sectors()).map(|s| self.hours(s, b)).sum())
            .collect()
    }

    /// (lower, upper) edges of the most populated speed bin; upper is infinite for the last bin.
    pub fn dominant_speed_band(&self) -> (f64, f64) {
        let hist = self.speed_histogram();
        let b = hist
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &h)| if h > acc.1 { (i, h) } else { acc })
            .0;
        let hi = self.speed_bin_edges.get(b + 1).copied().unwrap_or(f64::INFINITY);
        (self.speed_bin_edges[b], hi)
    }

    pub fn to_csv(&self) -> String {
        let centers: Vec<f64> = (0..self.n_sectors())
            .map(|k| k as f64 * 360.0 / self.n_sectors() as f64)
            .collect();
        grid_csv("sector\\speed", &centers, &self.speed_bin_edges, |i, j| {
            Some(self.hours(i, j))
        })
    }
}

pub fn build_wind_rose(
    records: &[BuoyRecord],
    n_sectors: usize,
    speed_bin_edges: &[f64],
    record_hours: f64,
) -> Result<WindRose> {
    if n_sectors < 4 {
        return Err(Error::InvalidInput("wind rose needs at least 4 sectors".into()));
    }
    if speed_bin_edges.is_empty() || speed_bin_edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "speed bin edges must be non-empty and strictly increasing".into(),
        ));
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset("no records for wind rose".into()));
    }
    let width = 360.0 / n_sectors as f64;
    let mut counts = vec![vec![0u64; speed_bin_edges.len()]; n_sectors];
    for r in records {
        let sector = (((r.wind_dir + 0.5 * width) / width).floor() as usize) % n_sectors;
        let bin = speed_bin_edges
            .iter()
            .rposition(|&e| r.wind_speed >= e)
            .unwrap_or(0);
        counts[sector][bin] += 1;
    }
    let mean_speed = records.iter().map(|r| r.wind_speed).sum::<f64>() / records.len() as f64;
    Ok(WindRose {
        sector_edges: (0..=n_sectors).map(|k| k as f64 * width - 0.5 * width).collect(),
        speed_bin_edges: speed_bin_edges.to_vec(),
        counts,
        record_hours,
        mean_speed,
    })
}

/// JPD plus the mean wind speed of the records falling in each cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedResource {
    pub jpd: Jpd,
    /// Mean wind per cell; `None` exactly on empty cells.
    pub mean_wind: Vec<Vec<Option<f64>>>,
    pub site_mean_wind: f64,
}

impl CombinedResource {
    pub fn to_csv(&self) -> String {
        grid_csv(
            "hm0\\te",
            &self.jpd.h_centers(),
            &self.jpd.t_centers(),
            |i, j| self.mean_wind[i][j],
        )
    }
}

pub fn build_combined(records: &[BuoyRecord], jpd: &Jpd) -> Result<CombinedResource> {
    let mut sums = vec![vec![0.0f64; jpd.n_t()]; jpd.n_h()];
    let mut counts = vec![vec![0u64; jpd.n_t()]; jpd.n_h()];
    for r in records {
        let (i, j) = jpd.cell_of(r.hm0, r.te).ok_or_else(|| {
            Error::Binning(format!(
                "record (hm0 {}, te {}) at {} lies outside the JPD bins",
                r.hm0, r.te, r.timestamp
            ))
        })?;
        sums[i][j] += r.wind_speed;
        counts[i][j] += 1;
    }
    if counts != jpd.counts {
        return Err(Error::Binning(
            "record set does not reproduce the JPD cell counts".into(),
        ));
    }
    let mean_wind = sums
        .iter()
        .zip(&counts)
        .map(|(srow, crow)| {
            srow.iter()
                .zip(crow)
                .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
                .collect()
        })
        .collect();
    let total: u64 = counts.iter().flatten().sum();
    let site_mean_wind = sums.iter().flatten().sum::<f64>() / total as f64;
    Ok(CombinedResource {
        jpd: jpd.clone(),
        mean_wind,
        site_mean_wind,
    })
}
