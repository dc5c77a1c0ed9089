//! Power conversion, energy yield, variability, cost of energy and synergy
//! classification.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resource::Jpd;

pub const HOURS_PER_YEAR: f64 = 8760.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceRating {
    /// W
    pub rated_electrical: f64,
    #[serde(default = "default_eff")]
    pub efficiency: f64,
    #[serde(default = "default_avail")]
    pub availability: f64,
    #[serde(default = "default_trans")]
    pub transmission: f64,
}

fn default_eff() -> f64 {
    0.8
}
fn default_avail() -> f64 {
    0.95
}
fn default_trans() -> f64 {
    0.98
}

impl DeviceRating {
    pub fn new(rated_electrical: f64) -> Self {
        Self {
            rated_electrical,
            efficiency: default_eff(),
            availability: default_avail(),
            transmission: default_trans(),
        }
    }

    pub fn wec() -> Self {
        Self::new(286e3)
    }

    pub fn fwt_5mw() -> Self {
        Self::new(5e6)
    }

    pub fn fwt_15mw() -> Self {
        Self::new(15e6)
    }

    /// Combined availability × transmission factor.
    pub fn loss_factor(&self) -> f64 {
        self.availability * self.transmission
    }

    pub fn validate(&self) -> Result<()> {
        let frac = |x: f64| x > 0.0 && x <= 1.0;
        if !(self.rated_electrical > 0.0) {
            return Err(Error::validation("rating", "rated power must be positive"));
        }
        if !(frac(self.efficiency) && frac(self.availability) && frac(self.transmission)) {
            return Err(Error::validation("rating", "efficiency, availability and transmission must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// min(η·P_mech, P_rated). Negative input is treated as zero.
pub fn electrical_power(mechanical: f64, rating: &DeviceRating) -> f64 {
    (rating.efficiency * mechanical.max(0.0)).min(rating.rated_electrical)
}

/// Mean electrical power per device for each sea-state cell. `None` marks
/// cells that were not simulated (no occurrence).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerMatrix {
    pub device: String,
    pub h_bin_edges: Vec<f64>,
    pub t_bin_edges: Vec<f64>,
    pub power: Vec<Vec<Option<f64>>>,
}

impl PowerMatrix {
    pub fn empty(device: impl Into<String>, jpd: &Jpd) -> Self {
        Self {
            device: device.into(),
            h_bin_edges: jpd.h_bin_edges.clone(),
            t_bin_edges: jpd.t_bin_edges.clone(),
            power: vec![vec![None; jpd.n_t()]; jpd.n_h()],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.power.len(), self.power.first().map_or(0, Vec::len))
    }

    pub fn n_simulated(&self) -> usize {
        self.power.iter().flatten().filter(|p| p.is_some()).count()
    }

    pub fn validate(&self, rating: &DeviceRating) -> Result<()> {
        for p in self.power.iter().flatten().flatten() {
            if !(*p >= 0.0 && *p <= rating.rated_electrical * (1.0 + 1e-12)) {
                return Err(Error::validation("power_matrix", format!("{} cell power {p} outside [0, rated]", self.device)));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("hm0_lo,hm0_hi");
        for w in self.t_bin_edges.windows(2) {
            let _ = write!(s, ",te_{}_{}", w[0], w[1]);
        }
        s.push('\n');
        for (row, w) in self.power.iter().zip(self.h_bin_edges.windows(2)) {
            let _ = write!(s, "{},{}", w[0], w[1]);
            for p in row {
                match p {
                    Some(v) => {
                        let _ = write!(s, ",{v:.3}");
                    }
                    None => s.push(','),
                }
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aep {
    /// MWh/yr
    pub gross: f64,
    /// MWh/yr after availability and transmission losses
    pub net: f64,
}

fn check_shape(matrix: &PowerMatrix, hours: &[Vec<f64>]) -> Result<()> {
    let (nh, nt) = matrix.shape();
    if hours.len() != nh || hours.iter().any(|r| r.len() != nt) {
        return Err(Error::Dimension(format!(
            "power matrix is {nh}×{nt} but the hours grid is {}×{}",
            hours.len(),
            hours.first().map_or(0, Vec::len)
        )));
    }
    Ok(())
}

/// Σ power × annual hours. Empty cells contribute nothing.
pub fn aep(matrix: &PowerMatrix, annual_hours: &[Vec<f64>], rating: &DeviceRating) -> Result<Aep> {
    check_shape(matrix, annual_hours)?;
    let mut wh = 0.0;
    for (prow, hrow) in matrix.power.iter().zip(annual_hours) {
        for (p, h) in prow.iter().zip(hrow) {
            if let Some(p) = p {
                wh += p * h;
            }
        }
    }
    let gross = wh / 1e6;
    Ok(Aep { gross, net: gross * rating.loss_factor() })
}

/// AEP with the JPD occurrence rescaled to one year.
pub fn aep_from_jpd(matrix: &PowerMatrix, jpd: &Jpd, rating: &DeviceRating) -> Result<Aep> {
    aep(matrix, &jpd.annual_scaled_grid(), rating)
}

/// Gross AEP over rated output for a full year.
pub fn capacity_factor(gross_aep_mwh: f64, rated_w: f64) -> Result<f64> {
    if !(rated_w > 0.0) {
        return Err(Error::InvalidInput("rated power must be positive".into()));
    }
    Ok(gross_aep_mwh * 1e6 / (rated_w * HOURS_PER_YEAR))
}

/// Net AEP back to gross.
pub fn gross_from_net(net_aep: f64, rating: &DeviceRating) -> f64 {
    net_aep / rating.loss_factor()
}

/// σ/μ of a weighted population.
pub fn p_cv_weighted(powers: &[f64], weights: &[f64]) -> Result<f64> {
    if powers.len() != weights.len() {
        return Err(Error::Dimension("powers and weights differ in length".into()));
    }
    let w: f64 = weights.iter().sum();
    if !(w > 0.0) {
        return Err(Error::UndefinedMetric("P_CV needs positive total weight".into()));
    }
    let mean = powers.iter().zip(weights).map(|(p, w)| p * w).sum::<f64>() / w;
    if !(mean.abs() > 0.0) {
        return Err(Error::UndefinedMetric("P_CV is undefined for zero mean power".into()));
    }
    let var = powers.iter().zip(weights).map(|(p, w)| w * (p - mean).powi(2)).sum::<f64>() / w;
    Ok(var.sqrt() / mean)
}

/// Occurrence-weighted P_CV across the cells of a power matrix.
pub fn p_cv_matrix(matrix: &PowerMatrix, annual_hours: &[Vec<f64>]) -> Result<f64> {
    check_shape(matrix, annual_hours)?;
    let (mut p, mut w) = (Vec::new(), Vec::new());
    for (prow, hrow) in matrix.power.iter().zip(annual_hours) {
        for (pc, h) in prow.iter().zip(hrow) {
            if let Some(v) = pc {
                p.push(*v);
                w.push(*h);
            }
        }
    }
    p_cv_weighted(&p, &w)
}

/// P_CV of a single power time series (equal weights).
pub fn p_cv_series(samples: &[f64]) -> Result<f64> {
    p_cv_weighted(samples, &vec![1.0; samples.len()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapexItem {
    Mooring,
    ElectricalCable,
    DeviceStructure,
    Pto,
    Installation,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpexItem {
    OperationsMaintenance,
    Insurance,
    Port,
    Transmission,
}

/// Farm-level cost model in USD of `year`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub capex: f64,
    /// USD/yr
    pub opex: f64,
    pub fcr: f64,
    pub capex_shares: BTreeMap<CapexItem, f64>,
    pub opex_shares: BTreeMap<OpexItem, f64>,
    #[serde(default = "default_year")]
    pub year: u16,
}

fn default_year() -> u16 {
    2025
}

fn shares<K: Ord + Copy>(pairs: &[(K, f64)]) -> BTreeMap<K, f64> {
    pairs.iter().copied().collect()
}

fn wec_capex_shares() -> BTreeMap<CapexItem, f64> {
    use CapexItem::*;
    shares(&[(DeviceStructure, 0.40), (Pto, 0.17), (Mooring, 0.12), (ElectricalCable, 0.10), (Installation, 0.15), (Other, 0.06)])
}

fn fwt_capex_shares() -> BTreeMap<CapexItem, f64> {
    use CapexItem::*;
    shares(&[(DeviceStructure, 0.62), (Pto, 0.0), (Mooring, 0.08), (ElectricalCable, 0.10), (Installation, 0.12), (Other, 0.08)])
}

fn default_opex_shares() -> BTreeMap<OpexItem, f64> {
    use OpexItem::*;
    shares(&[(OperationsMaintenance, 0.60), (Insurance, 0.15), (Port, 0.10), (Transmission, 0.15)])
}

impl CostModel {
    pub const DEFAULT_FCR: f64 = 0.11;

    pub fn wec(capex: f64, opex: f64) -> Self {
        Self { capex, opex, fcr: Self::DEFAULT_FCR, capex_shares: wec_capex_shares(), opex_shares: default_opex_shares(), year: 2025 }
    }

    pub fn fwt(capex: f64, opex: f64) -> Self {
        Self { capex, opex, fcr: Self::DEFAULT_FCR, capex_shares: fwt_capex_shares(), opex_shares: default_opex_shares(), year: 2025 }
    }

    /// Published 100-unit farm costs for the standalone systems, by
    /// catalogue name. CapEx is quoted in billions of USD per farm.
    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "rm3_standalone" => Self::wec(0.53e9, 12.6e6),
            "fwt_5mw_spar" => Self::fwt(2.29e9, 91.5e6),
            "fwt_5mw_semi" => Self::fwt(2.78e9, 91.5e6),
            "fwt_15mw_spar" => Self::fwt(6.51e9, 275e6),
            "fwt_15mw_semi" => Self::fwt(7.54e9, 275e6),
            _ => return None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fcr > 0.0) {
            return Err(Error::validation("cost", "fcr must be positive"));
        }
        if !(self.capex >= 0.0 && self.opex >= 0.0) {
            return Err(Error::validation("cost", "capex and opex must be non-negative"));
        }
        let c: f64 = self.capex_shares.values().sum();
        let o: f64 = self.opex_shares.values().sum();
        if (c - 1.0).abs() > 1e-6 || (o - 1.0).abs() > 1e-6 {
            return Err(Error::validation("cost", format!("cost shares sum to {c} (capex) and {o} (opex), expected 1")));
        }
        if self.capex_shares.values().chain(self.opex_shares.values()).any(|s| *s < 0.0) {
            return Err(Error::validation("cost", "negative cost share"));
        }
        Ok(())
    }

    /// Annualized cost, USD/yr.
    pub fn annual_cost(&self) -> f64 {
        self.capex * self.fcr + self.opex
    }

    /// Express in another year's dollars.
    pub fn adjusted(&self, table: &InflationTable, to_year: u16) -> Result<Self> {
        let f = table.factor(self.year, to_year)?;
        Ok(Self { capex: self.capex * f, opex: self.opex * f, year: to_year, ..self.clone() })
    }
}

/// Annual price index by year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationTable {
    pub index: BTreeMap<u16, f64>,
}

impl Default for InflationTable {
    /// US CPI-U annual averages; the last entry is a provisional estimate.
    fn default() -> Self {
        let index = [
            (2012, 229.594),
            (2013, 232.957),
            (2014, 236.736),
            (2015, 237.017),
            (2016, 240.007),
            (2017, 245.120),
            (2018, 251.107),
            (2019, 255.657),
            (2020, 258.811),
            (2021, 270.970),
            (2022, 292.655),
            (2023, 304.702),
            (2024, 313.689),
            (2025, 322.0),
        ]
        .into_iter()
        .collect();
        Self { index }
    }
}

impl InflationTable {
    pub fn factor(&self, from: u16, to: u16) -> Result<f64> {
        let get = |y: u16| self.index.get(&y).copied().ok_or_else(|| Error::InvalidInput(format!("no price index for {y}")));
        Ok(get(to)? / get(from)?)
    }
}

/// (CapEx·FCR + OpEx) / AEP in USD/MWh.
pub fn lcoe(cost: &CostModel, net_aep_mwh: f64) -> Result<f64> {
    if !(net_aep_mwh > 0.0) {
        return Err(Error::UndefinedMetric("LCOE needs a positive AEP".into()));
    }
    Ok(cost.annual_cost() / net_aep_mwh)
}

/// Which WEC cost items disappear or shrink when it rides on a wind
/// platform. FWT costs are scaled by the `fwt_*` factors (1 by default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharingRules {
    pub wec_capex_factor: BTreeMap<CapexItem, f64>,
    pub wec_opex_factor: BTreeMap<OpexItem, f64>,
    #[serde(default)]
    pub fwt_capex_factor: BTreeMap<CapexItem, f64>,
    #[serde(default)]
    pub fwt_opex_factor: BTreeMap<OpexItem, f64>,
}

impl Default for SharingRules {
    fn default() -> Self {
        use CapexItem::*;
        Self {
            wec_capex_factor: shares(&[(Mooring, 0.0), (ElectricalCable, 0.0), (Installation, 0.5)]),
            wec_opex_factor: shares(&[(OpexItem::Transmission, 0.0)]),
            fwt_capex_factor: BTreeMap::new(),
            fwt_opex_factor: BTreeMap::new(),
        }
    }
}

impl SharingRules {
    /// No sharing: hybrid costs equal standalone costs.
    pub fn none() -> Self {
        Self {
            wec_capex_factor: BTreeMap::new(),
            wec_opex_factor: BTreeMap::new(),
            fwt_capex_factor: BTreeMap::new(),
            fwt_opex_factor: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = self
            .wec_capex_factor
            .values()
            .chain(self.wec_opex_factor.values())
            .chain(self.fwt_capex_factor.values())
            .chain(self.fwt_opex_factor.values());
        for f in all {
            if !(0.0..=1.0).contains(f) {
                return Err(Error::validation("sharing_rules", format!("factor {f} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

fn scale_items<K: Ord + Copy>(total: f64, shares: &BTreeMap<K, f64>, factor: &BTreeMap<K, f64>) -> (f64, BTreeMap<K, f64>) {
    let amounts: BTreeMap<K, f64> = shares.iter().map(|(k, s)| (*k, total * s * factor.get(k).copied().unwrap_or(1.0))).collect();
    let new_total: f64 = amounts.values().sum();
    let new_shares = if new_total > 0.0 {
        amounts.iter().map(|(k, a)| (*k, a / new_total)).collect()
    } else {
        shares.clone()
    };
    (new_total, new_shares)
}

fn apply(cost: &CostModel, capex_f: &BTreeMap<CapexItem, f64>, opex_f: &BTreeMap<OpexItem, f64>) -> CostModel {
    let (capex, capex_shares) = scale_items(cost.capex, &cost.capex_shares, capex_f);
    let (opex, opex_shares) = scale_items(cost.opex, &cost.opex_shares, opex_f);
    CostModel { capex, opex, capex_shares, opex_shares, ..cost.clone() }
}

/// Per-device cost models inside a hybrid farm.
pub fn hybrid_cost_allocation(wec: &CostModel, fwt: &CostModel, rules: &SharingRules) -> Result<(CostModel, CostModel)> {
    wec.validate()?;
    fwt.validate()?;
    rules.validate()?;
    Ok((
        apply(wec, &rules.wec_capex_factor, &rules.wec_opex_factor),
        apply(fwt, &rules.fwt_capex_factor, &rules.fwt_opex_factor),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Synergy {
    Mutualism,
    Commensalism,
    Parasitism,
    NoSynergy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynergyVerdict {
    pub metric: String,
    pub delta_a: f64,
    pub delta_b: f64,
    pub classification: Synergy,
    pub tolerance: f64,
}

/// Relative "unchanged" band used when none is given.
pub const DEFAULT_SYNERGY_TOLERANCE: f64 = 5e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Down,
    Same,
    Up,
}

fn movement(delta: f64, tol: f64) -> Move {
    if delta.abs() <= tol {
        Move::Same
    } else if delta < 0.0 {
        Move::Down
    } else {
        Move::Up
    }
}

/// Verdict from two signed relative deltas for a lower-is-better metric.
pub fn classify_deltas(delta_a: f64, delta_b: f64, tol: f64) -> Synergy {
    use Move::*;
    match (movement(delta_a, tol), movement(delta_b, tol)) {
        (Down, Down) => Synergy::Mutualism,
        (Down, Same) | (Same, Down) => Synergy::Commensalism,
        (Down, Up) | (Up, Down) => Synergy::Parasitism,
        _ => Synergy::NoSynergy,
    }
}

pub fn classify_synergy(
    metric: &str,
    standalone_a: f64,
    hybrid_a: f64,
    standalone_b: f64,
    hybrid_b: f64,
    rel_tolerance: f64,
) -> Result<SynergyVerdict> {
    if [standalone_a, hybrid_a, standalone_b, hybrid_b].iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput(format!("{metric}: synergy inputs must be positive")));
    }
    let delta_a = (hybrid_a - standalone_a) / standalone_a;
    let delta_b = (hybrid_b - standalone_b) / standalone_b;
    Ok(SynergyVerdict {
        metric: metric.to_string(),
        delta_a,
        delta_b,
        classification: classify_deltas(delta_a, delta_b, rel_tolerance),
        tolerance: rel_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_cell(p: f64) -> PowerMatrix {
        PowerMatrix { device: "d".into(), h_bin_edges: vec![1.5, 2.0], t_bin_edges: vec![6.0, 7.0], power: vec![vec![Some(p)]] }
    }

    #[test]
    fn electrical_cap_and_efficiency() {
        let w = DeviceRating::wec();
        assert_eq!(electrical_power(0.0, &w), 0.0);
        assert_eq!(electrical_power(400e3, &w), 286e3);
        assert!((electrical_power(300e3, &w) - 240e3).abs() < 1e-9);
    }

    #[test]
    fn single_cell_aep() {
        let a = aep(&one_cell(200e3), &[vec![768.0]], &DeviceRating::wec()).unwrap();
        assert!((a.gross - 153.6).abs() < 1e-9);
        assert!((a.net - 153.6 * 0.95 * 0.98).abs() < 1e-9);
        let z = aep(&one_cell(0.0), &[vec![768.0]], &DeviceRating::wec()).unwrap();
        assert_eq!(z.gross, 0.0);
        assert!(matches!(aep(&one_cell(1.0), &[vec![1.0, 2.0]], &DeviceRating::wec()), Err(Error::Dimension(_))));
    }

    #[test]
    fn full_rated_year_is_unit_cf() {
        assert!((capacity_factor(5.0 * 8760.0, 5e6).unwrap() - 1.0).abs() < 1e-12);
        assert!(capacity_factor(1.0, 0.0).is_err());
    }

    #[test]
    fn pcv_examples() {
        assert_eq!(p_cv_series(&[3.0; 5]).unwrap(), 0.0);
        assert!((p_cv_weighted(&[0.0, 2.0], &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(p_cv_series(&[0.0, 0.0]), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn lcoe_examples() {
        let spar = CostModel::preset("fwt_5mw_spar").unwrap();
        assert!((lcoe(&spar, 842_000.0).unwrap() - 407.8).abs() < 0.1);
        let free = CostModel { capex: 0.0, opex: 0.0, ..spar.clone() };
        assert_eq!(lcoe(&free, 1.0).unwrap(), 0.0);
        assert!(lcoe(&spar, 0.0).is_err());
    }

    #[test]
    fn sharing_cuts_only_the_wec() {
        let wec = CostModel::preset("rm3_standalone").unwrap();
        let fwt = CostModel::preset("fwt_5mw_spar").unwrap();
        let (w, f) = hybrid_cost_allocation(&wec, &fwt, &SharingRules::default()).unwrap();
        assert!(w.annual_cost() < wec.annual_cost());
        assert_eq!(f.annual_cost(), fwt.annual_cost());
        w.validate().unwrap();
        let (w0, f0) = hybrid_cost_allocation(&wec, &fwt, &SharingRules::none()).unwrap();
        assert_eq!(w0.annual_cost(), wec.annual_cost());
        assert_eq!(f0, fwt);
        let mut bad = wec.clone();
        bad.capex_shares.insert(CapexItem::Other, 0.5);
        assert!(hybrid_cost_allocation(&bad, &fwt, &SharingRules::default()).is_err());
    }

    #[test]
    fn inflation_identity_and_direction() {
        let t = InflationTable::default();
        assert_eq!(t.factor(2020, 2020).unwrap(), 1.0);
        assert!(t.factor(2014, 2025).unwrap() > 1.0);
        assert!(t.factor(1990, 2025).is_err());
    }

    #[test]
    fn synergy_grid_truth_table() {
        let tol = 1e-3;
        let vals = [-0.1, -tol / 2.0, 0.0, tol / 2.0, 0.1];
        // rows: delta_a, cols: delta_b; D = down, S = same, U = up
        let class = |d: f64| if d < -tol { 'D' } else if d > tol { 'U' } else { 'S' };
        for &a in &vals {
            for &b in &vals {
                let expect = match (class(a), class(b)) {
                    ('D', 'D') => Synergy::Mutualism,
                    ('D', 'S') | ('S', 'D') => Synergy::Commensalism,
                    ('D', 'U') | ('U', 'D') => Synergy::Parasitism,
                    _ => Synergy::NoSynergy,
                };
                assert_eq!(classify_deltas(a, b, tol), expect, "({a}, {b})");
            }
        }
    }

    proptest! {
        #[test]
        fn aep_is_linear(p in 0.0f64..286e3, h in 0.0f64..8760.0, c in 0.1f64..10.0) {
            let r = DeviceRating::wec();
            let a = aep(&one_cell(p), &[vec![h]], &r).unwrap().gross;
            let b = aep(&one_cell(p), &[vec![c * h]], &r).unwrap().gross;
            let d = aep(&one_cell(c * p), &[vec![h]], &r).unwrap().gross;
            prop_assert!((b - c * a).abs() <= 1e-9 * b.abs().max(1.0));
            prop_assert!((d - c * a).abs() <= 1e-9 * d.abs().max(1.0));
        }

        #[test]
        fn pcv_scale_invariant(p in prop::collection::vec(0.1f64..100.0, 2..30), c in 0.01f64..100.0) {
            let w = vec![1.0; p.len()];
            let scaled: Vec<f64> = p.iter().map(|x| x * c).collect();
            let a = p_cv_weighted(&p, &w).unwrap();
            let b = p_cv_weighted(&scaled, &w).unwrap();
            prop_assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }

        #[test]
        fn lcoe_homogeneous(capex in 1e6f64..1e10, opex in 0.0f64..1e8, aep_v in 1.0f64..1e7, c in 0.01f64..100.0) {
            let m = CostModel::fwt(capex, opex);
            let s = CostModel::fwt(capex * c, opex * c);
            let a = lcoe(&m, aep_v).unwrap();
            let b = lcoe(&s, aep_v * c).unwrap();
            prop_assert!((a - b).abs() < 1e-9 * a);
        }

        #[test]
        fn synergy_ignores_units(a0 in 1.0f64..1e4, a1 in 1.0f64..1e4, b0 in 1.0f64..1e4, b1 in 1.0f64..1e4, ka in 1e-3f64..1e3, kb in 1e-3f64..1e3) {
            let v = classify_synergy("x", a0, a1, b0, b1, 1e-3).unwrap();
            let w = classify_synergy("x", a0 * ka, a1 * ka, b0 * kb, b1 * kb, 1e-3).unwrap();
            let near_edge = |d: f64| (d.abs() - 1e-3).abs() < 1e-9;
            prop_assume!(!near_edge(v.delta_a) && !near_edge(v.delta_b));
            prop_assert_eq!(v.classification, w.classification);
        }

        #[test]
        fn cf_bounded_under_cap(cells in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..20)) {
            let r = DeviceRating::fwt_5mw();
            let total: f64 = cells.iter().map(|c| c.1).sum::<f64>().max(1e-9);
            let m = PowerMatrix {
                device: "d".into(),
                h_bin_edges: (0..=cells.len()).map(|i| i as f64).collect(),
                t_bin_edges: vec![0.0, 1.0],
                power: cells.iter().map(|c| vec![Some(c.0 * r.rated_electrical)]).collect(),
            };
            let hours: Vec<Vec<f64>> = cells.iter().map(|c| vec![c.1 / total * 8760.0]).collect();
            let cf = capacity_factor(aep(&m, &hours, &r).unwrap().gross, r.rated_electrical).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&cf));
        }
    }
}
