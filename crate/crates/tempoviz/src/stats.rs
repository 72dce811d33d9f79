//! Summary statistics and per-section duration aggregates.

use crate::error::{Error, Result};
use crate::model::{SectionMap, SummaryStats, TempoSeries};

/// Per-section playing time of one recording, in [`SectionMap`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionDurations {
    pub recording_id: String,
    /// (section name, summed duration in seconds) pairs.
    pub entries: Vec<(String, f64)>,
}

impl SectionDurations {
    pub fn total_s(&self) -> f64 {
        self.entries.iter().map(|(_, d)| d).sum()
    }
}

/// Mean and population standard deviation of bar-level BPM over `range`
/// (inclusive bar indices), or over the whole series when `range` is `None`.
///
/// The mean gives each bar one vote regardless of its length; it is not the
/// total-beats-over-total-time tempo.
pub fn summary_stats(series: &TempoSeries, range: Option<(u32, u32)>) -> Result<SummaryStats> {
    let (lo, hi) = range.unwrap_or((series.first_bar(), series.last_bar()));
    if lo > hi {
        return Err(Error::invalid(format!("empty bar range {lo}..={hi}")));
    }
    if lo < series.first_bar() || hi > series.last_bar() {
        return Err(Error::invalid(format!(
            "bar range {lo}..={hi} outside recording '{}' (bars {}..={})",
            series.recording_id,
            series.first_bar(),
            series.last_bar()
        )));
    }
    let selected: Vec<_> = series
        .bars
        .iter()
        .filter(|b| lo <= b.bar_index && b.bar_index <= hi)
        .collect();
    if selected.is_empty() {
        return Err(Error::invalid(format!(
            "no bars selected by range {lo}..={hi}"
        )));
    }
    let n = selected.len() as f64;
    let mean_bpm = selected.iter().map(|b| b.bpm).sum::<f64>() / n;
    let var = selected
        .iter()
        .map(|b| (b.bpm - mean_bpm).powi(2))
        .sum::<f64>()
        / n;
    Ok(SummaryStats {
        mean_bpm,
        std_bpm: var.sqrt(),
        n_bars: selected.len(),
        total_duration_s: selected.iter().map(|b| b.duration_s).sum(),
    })
}

/// Sum bar durations per section. The map must cover exactly the series'
/// bar range.
pub fn section_durations(series: &TempoSeries, map: &SectionMap) -> Result<SectionDurations> {
    if map.first_bar() != series.first_bar() || map.last_bar() != series.last_bar() {
        return Err(Error::invalid(format!(
            "section map covers bars {}..={} but recording '{}' has bars {}..={}",
            map.first_bar(),
            map.last_bar(),
            series.recording_id,
            series.first_bar(),
            series.last_bar()
        )));
    }
    let entries = map
        .sections()
        .iter()
        .map(|section| {
            let total: f64 = series
                .bars
                .iter()
                .filter(|b| section.start_bar <= b.bar_index && b.bar_index <= section.end_bar)
                .map(|b| b.duration_s)
                .sum();
            (section.name.clone(), total)
        })
        .collect();
    Ok(SectionDurations {
        recording_id: series.recording_id.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BarRecord, Section};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn constant_series(n: u32, bpm: f64) -> TempoSeries {
        let bars = (1..=n)
            .map(|i| BarRecord::from_bpm(i, 4, bpm).unwrap())
            .collect();
        TempoSeries::new("rec", bars)
    }

    fn series_from_bpms(bpms: &[f64]) -> TempoSeries {
        let bars = bpms
            .iter()
            .enumerate()
            .map(|(i, &bpm)| BarRecord::from_bpm(i as u32 + 1, 4, bpm).unwrap())
            .collect();
        TempoSeries::new("rec", bars)
    }

    #[test]
    fn constant_series_has_zero_std() {
        let stats = summary_stats(&constant_series(50, 120.0), None).unwrap();
        assert_relative_eq!(stats.mean_bpm, 120.0);
        assert_relative_eq!(stats.std_bpm, 0.0);
        assert_eq!(stats.n_bars, 50);
        // 4 beats at 120 BPM is 2 s per bar.
        assert_relative_eq!(stats.total_duration_s, 100.0);

        let sub = summary_stats(&constant_series(50, 120.0), Some((10, 19))).unwrap();
        assert_relative_eq!(sub.mean_bpm, 120.0);
        assert_eq!(sub.n_bars, 10);
    }

    #[test]
    fn two_point_population_std() {
        let stats = summary_stats(&series_from_bpms(&[100.0, 140.0]), None).unwrap();
        assert_relative_eq!(stats.mean_bpm, 120.0);
        assert_relative_eq!(stats.std_bpm, 20.0);
    }

    #[test]
    fn population_std_against_direct_formula() {
        // Oracle: sum 600, mean 120; squared deviations 400, 0, 100, 400,
        // 100, sum 1000, /5 = 200.
        let stats = summary_stats(&series_from_bpms(&[100.0, 120.0, 130.0, 140.0, 110.0]), None)
            .unwrap();
        assert_relative_eq!(stats.mean_bpm, 120.0);
        assert_relative_eq!(stats.std_bpm, 200.0f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn bad_ranges_are_rejected() {
        let series = constant_series(10, 120.0);
        assert!(summary_stats(&series, Some((5, 4))).is_err());
        assert!(summary_stats(&series, Some((0, 5))).is_err());
        assert!(summary_stats(&series, Some((1, 11))).is_err());
        assert!(summary_stats(&series, Some((10, 10))).is_ok());
    }

    #[test]
    fn single_section_duration_is_total() {
        let series = constant_series(10, 120.0);
        let map = SectionMap::single("All", 10).unwrap();
        let durations = section_durations(&series, &map).unwrap();
        assert_eq!(durations.entries.len(), 1);
        assert_relative_eq!(durations.entries[0].1, 20.0);
    }

    #[test]
    fn two_section_split_preserves_total() {
        let series = constant_series(10, 120.0);
        let map = SectionMap::new(vec![
            Section { name: "A".into(), start_bar: 1, end_bar: 4 },
            Section { name: "B".into(), start_bar: 5, end_bar: 10 },
        ])
        .unwrap();
        let durations = section_durations(&series, &map).unwrap();
        assert_relative_eq!(durations.entries[0].1, 8.0);
        assert_relative_eq!(durations.entries[1].1, 12.0);
        assert!((durations.total_s() - series.total_duration_s()).abs() < 1e-6);
    }

    #[test]
    fn range_mismatch_is_rejected() {
        let series = constant_series(10, 120.0);
        let map = SectionMap::single("All", 12).unwrap();
        let err = section_durations(&series, &map).unwrap_err();
        assert!(err.to_string().contains("1..=12"), "{err}");
    }

    proptest! {
        #[test]
        fn partition_additivity(
            bpms in prop::collection::vec(40.0f64..240.0, 6..60),
            cut_fraction in 0.1f64..0.9,
        ) {
            let series = series_from_bpms(&bpms);
            let last = series.last_bar();
            let cut = ((last as f64 * cut_fraction) as u32).clamp(1, last - 1);
            let map = SectionMap::new(vec![
                Section { name: "A".into(), start_bar: 1, end_bar: cut },
                Section { name: "B".into(), start_bar: cut + 1, end_bar: last },
            ]).unwrap();
            let durations = section_durations(&series, &map).unwrap();
            prop_assert!((durations.total_s() - series.total_duration_s()).abs() < 1e-6);
        }

        #[test]
        fn refinement_leaves_other_sections_unchanged(
            bpms in prop::collection::vec(40.0f64..240.0, 9..60),
        ) {
            let series = series_from_bpms(&bpms);
            let last = series.last_bar();
            let third = last / 3;
            let coarse = SectionMap::new(vec![
                Section { name: "A".into(), start_bar: 1, end_bar: third },
                Section { name: "B".into(), start_bar: third + 1, end_bar: last },
            ]).unwrap();
            // Split B at an interior bar.
            let mid = (third + 1 + last) / 2;
            let fine = SectionMap::new(vec![
                Section { name: "A".into(), start_bar: 1, end_bar: third },
                Section { name: "B1".into(), start_bar: third + 1, end_bar: mid },
                Section { name: "B2".into(), start_bar: mid + 1, end_bar: last },
            ]).unwrap();
            let coarse_d = section_durations(&series, &coarse).unwrap();
            let fine_d = section_durations(&series, &fine).unwrap();
            prop_assert!((coarse_d.entries[0].1 - fine_d.entries[0].1).abs() < 1e-12);
            let b_sum = fine_d.entries[1].1 + fine_d.entries[2].1;
            prop_assert!((coarse_d.entries[1].1 - b_sum).abs() < 1e-9);
            prop_assert!((coarse_d.total_s() - fine_d.total_s()).abs() < 1e-6);
        }

        #[test]
        fn whole_series_stats_use_unweighted_mean(
            bpms in prop::collection::vec(40.0f64..240.0, 2..40),
        ) {
            let series = series_from_bpms(&bpms);
            let stats = summary_stats(&series, None).unwrap();
            let unweighted = bpms.iter().sum::<f64>() / bpms.len() as f64;
            prop_assert!((stats.mean_bpm - unweighted).abs() < 1e-9);
        }
    }
}
