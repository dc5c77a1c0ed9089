use chrono::{TimeZone, Utc};
use hybrid_core::resource::*;
use proptest::prelude::*;

fn record(k: i64, hm0: f64, te: f64, ws: f64, wd: f64) -> BuoyRecord {
    BuoyRecord {
        timestamp: Utc.timestamp_opt(1_483_228_800 + 3600 * k, 0).unwrap(),
        hm0,
        te,
        wind_speed: ws,
        wind_dir: wd,
    }
}

fn records() -> impl Strategy<Value = Vec<BuoyRecord>> {
    prop::collection::vec((0.1f64..8.0, 3.0f64..18.0, 0.0f64..25.0, 0.0f64..359.9), 1..120).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(k, (h, t, ws, wd))| record(k as i64, h, t, ws, wd))
            .collect()
    })
}

proptest! {
    #[test]
    fn jpd_hours_are_conserved(recs in records()) {
        let jpd = build_jpd(&recs, 0.5, 1.0, 1.0).unwrap();
        prop_assert_eq!(jpd.total_count(), recs.len() as u64);
        prop_assert_eq!(jpd.total_hours(), recs.len() as f64);
    }

    #[test]
    fn outputs_ignore_record_order(recs in records(), seed in any::<u64>()) {
        let mut shuffled = recs.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = build_jpd(&recs, 0.5, 1.0, 1.0).unwrap();
        let b = build_jpd(&shuffled, 0.5, 1.0, 1.0).unwrap();
        prop_assert_eq!(&a, &b);
        let ca = build_combined(&recs, &a).unwrap();
        let cb = build_combined(&shuffled, &b).unwrap();
        for (ra, rb) in ca.mean_wind.iter().zip(&cb.mean_wind) {
            for (x, y) in ra.iter().zip(rb) {
                match (x, y) {
                    (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0)),
                    (None, None) => {}
                    _ => prop_assert!(false, "occupancy differs"),
                }
            }
        }
        let edges = [0.0, 5.0, 10.0, 15.0, 20.0];
        let wa = build_wind_rose(&recs, 8, &edges, 1.0).unwrap();
        let wb = build_wind_rose(&shuffled, 8, &edges, 1.0).unwrap();
        prop_assert_eq!(&wa.counts, &wb.counts);
    }

    #[test]
    fn site_mean_wind_is_record_mean(recs in records()) {
        let jpd = build_jpd(&recs, 0.5, 1.0, 1.0).unwrap();
        let c = build_combined(&recs, &jpd).unwrap();
        let plain = recs.iter().map(|r| r.wind_speed).sum::<f64>() / recs.len() as f64;
        prop_assert!((c.site_mean_wind - plain).abs() < 1e-9 * plain.max(1.0));
        for (i, row) in c.mean_wind.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                prop_assert_eq!(m.is_some(), jpd.counts[i][j] > 0);
            }
        }
    }

    #[test]
    fn merged_bins_sum_fine_cells(recs in records()) {
        let fine = build_jpd(&recs, 0.5, 1.0, 1.0).unwrap();
        let coarse = fine.merged(2, 2);
        for (i, row) in coarse.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let mut sum = 0;
                for fi in 2 * i..(2 * i + 2).min(fine.n_h()) {
                    for fj in 2 * j..(2 * j + 2).min(fine.n_t()) {
                        sum += fine.counts[fi][fj];
                    }
                }
                prop_assert_eq!(c, sum);
            }
        }
    }

    #[test]
    fn wind_rose_sectors_tile_the_record(recs in records()) {
        let rose = build_wind_rose(&recs, 16, &[0.0, 5.0, 10.0], 1.0).unwrap();
        prop_assert_eq!(rose.total_hours(), recs.len() as f64);
    }
}

#[test]
fn ndbc_text_round_trip() {
    let text = "\
#YY  MM DD hh mm WDIR WSPD GST  WVHT   DPD   APD MWD   PRES  ATMP  WTMP  DEWP  VIS  TIDE
#yr  mo dy hr mn degT m/s  m/s     m   sec   sec degT   hPa  degC  degC  degC  nmi    ft
2017 01 01 00 50 290  5.2  6.5  1.60  9.09  6.30 290 1020.1  10.2  11.1   7.2 99.0 99.00
2017 01 01 01 50 300  6.0  7.0 99.00  9.09  6.80 290 1020.1  10.2  11.1   7.2 99.0 99.00
2017 01 01 02 50 310  7.1  8.0  1.90 10.00  6.80 290 1020.1  10.2  11.1   7.2 99.0 99.00
";
    let ing = ingest_buoy_records(text, &ColumnMap::ndbc()).unwrap();
    assert_eq!(ing.records.len(), 2);
    assert_eq!(ing.dropped, 1);
    let jpd = build_jpd(&ing.records, 0.5, 1.0, 1.0).unwrap();
    let (i, j, hours) = jpd.modal_cell();
    assert_eq!(hours, 2.0);
    assert!((jpd.h_centers()[i] - 1.75).abs() < 1e-12);
    assert!((jpd.t_centers()[j] - 6.5).abs() < 1e-12);
}
