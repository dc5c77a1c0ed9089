use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Running sums over a window of samples. Two adjacent windows merge
/// exactly, so statistics of a concatenated record equal those of its parts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct WindowSums {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl WindowSums {
    pub fn from_slice(x: &[f64]) -> Self {
        Self { n: x.len(), sum: x.iter().sum(), sum_sq: x.iter().map(|v| v * v).sum() }
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self { n: self.n + other.n, sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn rms(&self) -> f64 {
        (self.sum_sq / self.n as f64).sqrt()
    }

    /// Population standard deviation.
    pub fn rms_mean_removed(&self) -> f64 {
        let m = self.mean();
        (self.sum_sq / self.n as f64 - m * m).max(0.0).sqrt()
    }
}

fn after_cutoff(series: &[f64], dt: f64, cutoff: f64) -> Result<&[f64]> {
    if !(dt > 0.0) || cutoff < 0.0 {
        return Err(Error::InvalidInput("dt must be positive and cutoff non-negative".into()));
    }
    let start = (cutoff / dt - 1e-9).ceil().max(0.0) as usize;
    if start >= series.len() {
        return Err(Error::InvalidInput(format!(
            "cutoff {cutoff} s leaves no samples in a {:.1} s record",
            series.len().saturating_sub(1) as f64 * dt
        )));
    }
    Ok(&series[start..])
}

/// RMS of samples at t ≥ cutoff, sample k being at k·dt.
pub fn rms(series: &[f64], dt: f64, cutoff: f64) -> Result<f64> {
    Ok(WindowSums::from_slice(after_cutoff(series, dt, cutoff)?).rms())
}

/// Standard deviation of samples at t ≥ cutoff.
pub fn rms_mean_removed(series: &[f64], dt: f64, cutoff: f64) -> Result<f64> {
    Ok(WindowSums::from_slice(after_cutoff(series, dt, cutoff)?).rms_mean_removed())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub mean: f64,
    pub rms: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Recorded channels of one run, stored column-wise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesResult {
    pub name: String,
    pub record_dt: f64,
    pub transient_cutoff: f64,
    pub channels: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl TimeSeriesResult {
    pub fn new(name: String, record_dt: f64, transient_cutoff: f64, channels: Vec<String>) -> Self {
        let data = vec![Vec::new(); channels.len()];
        Self { name, record_dt, transient_cutoff, channels, data }
    }

    pub(crate) fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.channels.len());
        for (col, v) in self.data.iter_mut().zip(row) {
            col.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        self.channels
            .iter()
            .position(|c| c == name)
            .map(|i| self.data[i].as_slice())
            .ok_or_else(|| Error::InvalidInput(format!("no channel named `{name}`")))
    }

    pub fn stats(&self, name: &str) -> Result<ChannelStats> {
        let x = after_cutoff(self.channel(name)?, self.record_dt, self.transient_cutoff)?;
        let w = WindowSums::from_slice(x);
        Ok(ChannelStats {
            mean: w.mean(),
            rms: w.rms(),
            std: w.rms_mean_removed(),
            min: x.iter().copied().fold(f64::INFINITY, f64::min),
            max: x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn rms(&self, name: &str) -> Result<f64> {
        rms(self.channel(name)?, self.record_dt, self.transient_cutoff)
    }

    pub fn rms_mean_removed(&self, name: &str) -> Result<f64> {
        rms_mean_removed(self.channel(name)?, self.record_dt, self.transient_cutoff)
    }

    pub fn mean(&self, name: &str) -> Result<f64> {
        Ok(self.stats(name)?.mean)
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.channels.join(",");
        s.push('\n');
        for r in 0..self.len() {
            for (c, col) in self.data.iter().enumerate() {
                if c > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{:.9e}", col[r]);
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.to_csv()).map_err(|e| Error::io(path, e))
    }

    pub fn stats_json(&self) -> Result<serde_json::Value> {
        let mut map = serde_json::Map::new();
        for c in self.channels.iter().filter(|c| *c != "time") {
            map.insert(c.clone(), serde_json::to_value(self.stats(c)?)?);
        }
        Ok(serde_json::Value::Object(map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sine_rms() {
        let dt = 0.01;
        let x: Vec<f64> = (0..100_000).map(|k| 2.0 + (k as f64 * dt).sin()).collect();
        let raw = rms(&x, dt, 200.0).unwrap();
        let sd = rms_mean_removed(&x, dt, 200.0).unwrap();
        assert!((sd - 0.5f64.sqrt()).abs() < 2e-3, "{sd}");
        assert!((raw - (4.0f64 + 0.5).sqrt()).abs() < 2e-3, "{raw}");
    }

    #[test]
    fn cutoff_beyond_record_fails() {
        assert!(rms(&[1.0; 10], 1.0, 20.0).is_err());
    }

    proptest! {
        #[test]
        fn window_sums_concatenate(a in prop::collection::vec(-10.0f64..10.0, 1..50), b in prop::collection::vec(-10.0f64..10.0, 1..50)) {
            let mut ab = a.clone();
            ab.extend(&b);
            let whole = WindowSums::from_slice(&ab);
            let merged = WindowSums::from_slice(&a).merge(&WindowSums::from_slice(&b));
            prop_assert!((whole.rms() - merged.rms()).abs() < 1e-9);
            prop_assert!((whole.rms_mean_removed() - merged.rms_mean_removed()).abs() < 1e-9);
        }

        #[test]
        fn rms_bounds(x in prop::collection::vec(-10.0f64..10.0, 2..80)) {
            let w = WindowSums::from_slice(&x);
            prop_assert!(w.rms_mean_removed() <= w.rms() + 1e-12);
            prop_assert!(w.rms() <= x.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1e-12);
        }
    }
}
