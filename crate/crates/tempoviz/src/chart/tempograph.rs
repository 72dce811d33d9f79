//! Bar-by-bar tempo curves, overlaid or as a small-multiple grid.

use crate::chart::{
    color_for, label_for, legend_elements, padded_range, LegendEntry, LegendSwatch,
    SECTION_BAND_OPACITY, SECTION_PALETTE, TEMPO_LINE_WIDTH, TEXT_DARK,
};
use crate::error::{Error, Result};
use crate::model::{RecordingMeta, SectionMap, TempoSeries};
use crate::scene::{
    nice_tick_marks, ChartScene, Element, LineStyle, PlotFrame, PolylineElement, TextElement,
};

/// Beyond this many overlaid curves a tempograph stops being legible; use
/// [`small_multiples`] instead.
pub const MAX_OVERLAID_SERIES: usize = 5;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;

/// Overlaid bar-by-bar tempo curves (x = bar number, y = BPM), optionally
/// shaded by formal section, with a legend built from the metadata labels.
pub fn tempograph(
    series_list: &[TempoSeries],
    map: Option<&SectionMap>,
    meta: &[RecordingMeta],
) -> Result<ChartScene> {
    if series_list.is_empty() {
        return Err(Error::invalid("tempograph needs at least one recording"));
    }
    if series_list.len() > MAX_OVERLAID_SERIES {
        return Err(Error::invalid(format!(
            "tempograph overlays at most {MAX_OVERLAID_SERIES} recordings (got {}); \
             use the small-multiples grid for larger sets",
            series_list.len()
        )));
    }

    let mut scene = ChartScene::new(WIDTH, HEIGHT);
    let frame = tempo_frame(
        series_list,
        58.0,
        18.0,
        WIDTH - 16.0,
        HEIGHT - 52.0,
    );

    if let Some(map) = map {
        push_section_bands(&mut scene, &frame, map);
    }
    push_axes(&mut scene, &frame, 8, 7);

    let mut legend = Vec::new();
    for (i, series) in series_list.iter().enumerate() {
        let color = color_for(meta, &series.recording_id, i);
        for piece in frame.clip_polyline(&series_points(series, &frame)) {
            scene.push(Element::Polyline(PolylineElement::solid(
                piece,
                color,
                TEMPO_LINE_WIDTH,
            )));
        }
        legend.push(LegendEntry {
            label: label_for(meta, &series.recording_id),
            swatch: LegendSwatch::Line {
                color,
                width: 2.0,
                style: LineStyle::Solid,
            },
        });
    }
    for element in legend_elements(&legend, frame.right - 8.0, frame.top + 8.0) {
        scene.push(element);
    }
    Ok(scene)
}

/// Per-recording mini-tempograph grid in near-square layout, all panels
/// sharing both axis ranges. A single recording degenerates to the full
/// [`tempograph`].
pub fn small_multiples(series_list: &[TempoSeries], meta: &[RecordingMeta]) -> Result<ChartScene> {
    if series_list.is_empty() {
        return Err(Error::invalid("small multiples need at least one recording"));
    }
    if series_list.len() == 1 {
        return tempograph(series_list, None, meta);
    }

    let n = series_list.len();
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let panel_w = 300.0;
    let panel_h = 215.0;
    let outer = 10.0;
    let mut scene = ChartScene::new(
        outer * 2.0 + panel_w * cols as f64,
        outer * 2.0 + panel_h * rows as f64,
    );

    // Shared ranges across every panel.
    let shared = tempo_frame(series_list, 0.0, 0.0, 1.0, 1.0);
    for (i, series) in series_list.iter().enumerate() {
        let (row, col) = (i / cols, i % cols);
        let x0 = outer + panel_w * col as f64;
        let y0 = outer + panel_h * row as f64;
        let frame = PlotFrame {
            left: x0 + 40.0,
            top: y0 + 24.0,
            right: x0 + panel_w - 10.0,
            bottom: y0 + panel_h - 30.0,
            x_range: shared.x_range,
            y_range: shared.y_range,
        };
        scene.push(Element::Text(
            TextElement::new(
                (frame.left + frame.right) / 2.0,
                y0 + 16.0,
                label_for(meta, &series.recording_id),
                9.0,
            )
            .anchored(crate::scene::TextAnchor::Middle)
            .colored(TEXT_DARK),
        ));
        push_axes(&mut scene, &frame, 4, 4);
        let color = color_for(meta, &series.recording_id, i);
        for piece in frame.clip_polyline(&series_points(series, &frame)) {
            scene.push(Element::Polyline(PolylineElement::solid(
                piece,
                color,
                TEMPO_LINE_WIDTH,
            )));
        }
    }
    Ok(scene)
}

/// Frame whose data ranges cover every series: x over the union of bar
/// ranges, y over all BPM values with a little padding.
fn tempo_frame(series_list: &[TempoSeries], left: f64, top: f64, right: f64, bottom: f64) -> PlotFrame {
    let x_lo = series_list.iter().map(|s| s.first_bar()).min().unwrap_or(1) as f64;
    let x_hi = series_list.iter().map(|s| s.last_bar()).max().unwrap_or(1) as f64;
    let bpm_lo = series_list
        .iter()
        .flat_map(|s| s.bars.iter().map(|b| b.bpm))
        .fold(f64::INFINITY, f64::min);
    let bpm_hi = series_list
        .iter()
        .flat_map(|s| s.bars.iter().map(|b| b.bpm))
        .fold(f64::NEG_INFINITY, f64::max);
    PlotFrame {
        left,
        top,
        right,
        bottom,
        x_range: (x_lo, (x_hi).max(x_lo + 1.0)),
        y_range: padded_range(bpm_lo, bpm_hi, 0.05),
    }
}

fn series_points(series: &TempoSeries, frame: &PlotFrame) -> Vec<(f64, f64)> {
    series
        .bars
        .iter()
        .map(|b| (frame.map_x(b.bar_index as f64), frame.map_y(b.bpm)))
        .collect()
}

fn push_axes(scene: &mut ChartScene, frame: &PlotFrame, x_ticks: usize, y_ticks: usize) {
    let mini = x_ticks <= 4;
    let mut x_axis = frame.x_axis(
        nice_tick_marks(frame.x_range.0, frame.x_range.1, x_ticks),
        Some("Bar number".to_string()),
    );
    let mut y_axis = frame.y_axis(
        nice_tick_marks(frame.y_range.0, frame.y_range.1, y_ticks),
        Some("Tempo (BPM)".to_string()),
    );
    if mini {
        x_axis.tick_font = 7.0;
        y_axis.tick_font = 7.0;
        x_axis.label = None;
        y_axis.label = None;
    }
    scene.push(Element::Axis(x_axis));
    scene.push(Element::Axis(y_axis));
}

fn push_section_bands(scene: &mut ChartScene, frame: &PlotFrame, map: &SectionMap) {
    for (i, section) in map.sections().iter().enumerate() {
        let x0 = frame.map_x(section.start_bar as f64);
        let x1 = frame.map_x(section.end_bar as f64);
        scene.push(Element::Band(crate::scene::BandElement {
            x0,
            y0: frame.top,
            x1,
            y1: frame.bottom,
            color: SECTION_PALETTE[i % SECTION_PALETTE.len()],
            opacity: SECTION_BAND_OPACITY,
        }));
        scene.push(Element::Text(
            TextElement::new((x0 + x1) / 2.0, frame.top + 12.0, &section.name, 9.0)
                .anchored(crate::scene::TextAnchor::Middle)
                .colored(TEXT_DARK),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BarRecord, Section};

    fn series(id: &str, n: u32, base: f64) -> TempoSeries {
        let bars = (1..=n)
            .map(|i| BarRecord::from_bpm(i, 4, base + (i % 7) as f64).unwrap())
            .collect();
        TempoSeries::new(id, bars)
    }

    fn polylines(scene: &ChartScene) -> Vec<&PolylineElement> {
        scene
            .elements
            .iter()
            .filter_map(|e| match e {
                Element::Polyline(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    fn bands(scene: &ChartScene) -> Vec<&crate::scene::BandElement> {
        scene
            .elements
            .iter()
            .filter_map(|e| match e {
                Element::Band(b) => Some(b),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn two_series_give_two_curves() {
        let list = [series("a", 400, 130.0), series("b", 400, 140.0)];
        let scene = tempograph(&list, None, &[]).unwrap();
        let curves: Vec<_> = polylines(&scene)
            .into_iter()
            .filter(|p| p.points.len() > 2)
            .collect();
        assert_eq!(curves.len(), 2);
        assert!(curves.iter().all(|p| p.points.len() == 400));
        assert!(curves.iter().all(|p| p.width == TEMPO_LINE_WIDTH));
    }

    #[test]
    fn five_section_map_gives_five_bands() {
        let list = [series("a", 100, 120.0)];
        let map = SectionMap::new(vec![
            Section { name: "S1".into(), start_bar: 1, end_bar: 20 },
            Section { name: "S2".into(), start_bar: 21, end_bar: 40 },
            Section { name: "S3".into(), start_bar: 41, end_bar: 60 },
            Section { name: "S4".into(), start_bar: 61, end_bar: 80 },
            Section { name: "S5".into(), start_bar: 81, end_bar: 100 },
        ])
        .unwrap();
        let scene = tempograph(&list, Some(&map), &[]).unwrap();
        let shading = bands(&scene);
        assert_eq!(shading.len(), 5);
        assert!(shading.iter().all(|b| b.opacity == SECTION_BAND_OPACITY));
        // Band edges follow the map: band k starts where the axis maps its
        // start bar.
        let x_axis = scene
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Axis(a) if a.orientation == crate::scene::Orientation::Horizontal => {
                    Some(a)
                }
                _ => None,
            })
            .unwrap();
        for (band, section) in shading.iter().zip(map.sections()) {
            assert!((band.x0 - x_axis.map(section.start_bar as f64)).abs() < 1e-9);
        }
    }

    #[test]
    fn no_map_means_no_bands() {
        let list = [series("a", 50, 120.0)];
        let scene = tempograph(&list, None, &[]).unwrap();
        assert!(bands(&scene).is_empty());
    }

    #[test]
    fn more_than_five_series_point_to_small_multiples() {
        let list: Vec<_> = (0..6).map(|i| series(&format!("r{i}"), 20, 120.0)).collect();
        let err = tempograph(&list, None, &[]).unwrap_err();
        assert!(err.to_string().contains("small-multiples"), "{err}");
        assert!(tempograph(&list[..5], None, &[]).is_ok());
    }

    #[test]
    fn polyline_positions_recompute_from_axes() {
        let list = [series("a", 40, 100.0)];
        let scene = tempograph(&list, None, &[]).unwrap();
        let (mut x_axis, mut y_axis) = (None, None);
        for e in &scene.elements {
            if let Element::Axis(a) = e {
                match a.orientation {
                    crate::scene::Orientation::Horizontal => x_axis = Some(a),
                    crate::scene::Orientation::Vertical => y_axis = Some(a),
                }
            }
        }
        let (x_axis, y_axis) = (x_axis.unwrap(), y_axis.unwrap());
        let curve = polylines(&scene)
            .into_iter()
            .find(|p| p.points.len() == 40)
            .unwrap();
        for (bar, &(sx, sy)) in list[0].bars.iter().zip(&curve.points) {
            assert!((sx - x_axis.map(bar.bar_index as f64)).abs() < 1e-9);
            assert!((sy - y_axis.map(bar.bpm)).abs() < 1e-9);
        }
    }

    #[test]
    fn multiples_grid_is_near_square_and_shares_ranges() {
        let list: Vec<_> = (0..22)
            .map(|i| series(&format!("r{i:02}"), 60, 100.0 + i as f64))
            .collect();
        let scene = small_multiples(&list, &[]).unwrap();
        let axes: Vec<_> = scene
            .elements
            .iter()
            .filter_map(|e| match e {
                Element::Axis(a) => Some(a),
                _ => None,
            })
            .collect();
        // 22 panels → ceil(sqrt) = 5 columns, 5 rows; 2 axes per panel.
        assert_eq!(axes.len(), 44);
        let y_ranges: Vec<_> = axes
            .iter()
            .filter(|a| a.orientation == crate::scene::Orientation::Vertical)
            .map(|a| a.data_range)
            .collect();
        assert_eq!(y_ranges.len(), 22);
        assert!(y_ranges.windows(2).all(|w| w[0] == w[1]));
        // The shared y-range covers the global BPM extremes.
        let lo = 100.0;
        let hi = 121.0 + 6.0;
        assert!(y_ranges[0].0 <= lo && y_ranges[0].1 >= hi);
    }

    #[test]
    fn single_recording_multiples_equals_tempograph() {
        let list = [series("only", 30, 125.0)];
        let grid = small_multiples(&list, &[]).unwrap();
        let single = tempograph(&list, None, &[]).unwrap();
        assert_eq!(grid, single);
    }
}
