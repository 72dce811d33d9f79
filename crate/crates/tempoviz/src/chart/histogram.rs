//! Single-recording tempo histogram with the spline-smoothed PDF on top.

use crate::chart::{padded_range, MARKER_LINE_WIDTH, PDF_LINE_WIDTH, TEXT_DARK, TITLE_FONT};
use crate::density::{HistogramResult, SplinePdf};
use crate::error::Result;
use crate::model::{RecordingMeta, SummaryStats};
use crate::scene::{
    nice_tick_marks, ChartScene, Element, LineStyle, PlotFrame, PolylineElement, RectElement,
    Stroke, TextAnchor, TextElement,
};

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;

/// Opacity of the histogram bars under the bold PDF curve.
const BAR_OPACITY: f64 = 0.35;

/// Histogram bars (density-normalized so they share the PDF's per-BPM
/// unit), the spline PDF in bold, and a dashed vertical line at the mean.
pub fn histogram_chart(
    hist: &HistogramResult,
    pdf: &SplinePdf,
    stats: &SummaryStats,
    meta: &RecordingMeta,
) -> Result<ChartScene> {
    let mut scene = ChartScene::new(WIDTH, HEIGHT);
    let color = meta.color.unwrap_or(crate::chart::SERIES_CYCLE[0]);

    let n = hist.total_count() as f64;
    let bar_height = |count: u64| count as f64 / (n * hist.bin_width());
    let peak = hist
        .counts
        .iter()
        .map(|&c| bar_height(c))
        .chain(pdf.density.iter().copied())
        .fold(0.0f64, f64::max);

    let frame = PlotFrame {
        left: 58.0,
        top: 30.0,
        right: WIDTH - 16.0,
        bottom: HEIGHT - 52.0,
        x_range: padded_range(hist.edges[0], hist.edges[hist.n_bins()], 0.03),
        y_range: (0.0, (peak * 1.08).max(1e-9)),
    };

    scene.push(Element::Text(
        TextElement::new((frame.left + frame.right) / 2.0, 18.0, &meta.label, TITLE_FONT)
            .anchored(TextAnchor::Middle)
            .colored(TEXT_DARK),
    ));
    scene.push(Element::Axis(frame.x_axis(
        nice_tick_marks(frame.x_range.0, frame.x_range.1, 6),
        Some("Tempo (BPM)".to_string()),
    )));
    scene.push(Element::Axis(frame.y_axis(
        nice_tick_marks(0.0, frame.y_range.1, 5),
        Some("Density (per BPM)".to_string()),
    )));

    for (i, &count) in hist.counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let x0 = frame.map_x(hist.edges[i]);
        let x1 = frame.map_x(hist.edges[i + 1]);
        let y_top = frame.map_y(bar_height(count));
        scene.push(Element::Rect(RectElement {
            x: x0,
            y: y_top,
            width: x1 - x0,
            height: frame.bottom - y_top,
            fill: Some(color),
            fill_opacity: BAR_OPACITY,
            stroke: Some(Stroke::solid(color, 0.5)),
        }));
    }

    let curve: Vec<(f64, f64)> = pdf
        .grid
        .iter()
        .zip(&pdf.density)
        .map(|(&x, &d)| (frame.map_x(x), frame.map_y(d)))
        .collect();
    scene.push(Element::Polyline(PolylineElement::solid(
        curve,
        color,
        PDF_LINE_WIDTH,
    )));

    let mean_x = frame.map_x(stats.mean_bpm);
    scene.push(Element::Polyline(PolylineElement {
        points: vec![(mean_x, frame.bottom), (mean_x, frame.top)],
        color,
        width: MARKER_LINE_WIDTH,
        style: LineStyle::Dashed,
        opacity: 1.0,
    }));
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{spline_pdf, SplinePdfParams};
    use crate::model::{Color, YearRange};
    use crate::stats::summary_stats;
    use crate::model::{BarRecord, TempoSeries};

    fn meta() -> RecordingMeta {
        RecordingMeta {
            recording_id: "rec".into(),
            label: "Rec (2000)".into(),
            year: YearRange::single(2000),
            color: Some(Color::rgb(0x21, 0x66, 0xac)),
        }
    }

    fn rects(scene: &ChartScene) -> Vec<&RectElement> {
        scene
            .elements
            .iter()
            .filter_map(|e| match e {
                Element::Rect(r) => Some(r),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn degenerate_single_bin_histogram_gives_one_bar() {
        let hist = HistogramResult {
            edges: vec![119.5, 120.5],
            counts: vec![8],
            centres: vec![120.0],
        };
        let pdf = SplinePdf {
            grid: vec![119.5, 120.0, 120.5],
            density: vec![0.0, 1.2, 0.0],
        };
        let stats = SummaryStats {
            mean_bpm: 120.0,
            std_bpm: 0.0,
            n_bars: 8,
            total_duration_s: 16.0,
        };
        let scene = histogram_chart(&hist, &pdf, &stats, &meta()).unwrap();
        assert_eq!(rects(&scene).len(), 1);
    }

    #[test]
    fn mean_line_sits_at_mean_bpm() {
        let bars: Vec<_> = (1..=80)
            .map(|i| BarRecord::from_bpm(i, 4, 100.0 + (i % 40) as f64).unwrap())
            .collect();
        let series = TempoSeries::new("rec", bars);
        let data = series.bpm_values();
        let (hist, pdf) = spline_pdf(&data, &SplinePdfParams::default()).unwrap();
        let stats = summary_stats(&series, None).unwrap();
        let scene = histogram_chart(&hist, &pdf, &stats, &meta()).unwrap();

        let x_axis = scene
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Axis(a)
                    if a.orientation == crate::scene::Orientation::Horizontal =>
                {
                    Some(a)
                }
                _ => None,
            })
            .unwrap();
        // The dashed 2-point vertical polyline is the mean marker.
        let mean_line = scene
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Polyline(p) if p.style == LineStyle::Dashed => Some(p),
                _ => None,
            })
            .unwrap();
        assert_eq!(mean_line.points.len(), 2);
        assert!((mean_line.points[0].0 - x_axis.map(stats.mean_bpm)).abs() < 1e-9);
        assert_eq!(mean_line.points[0].0, mean_line.points[1].0);
    }

    #[test]
    fn bars_are_density_normalized() {
        let bars: Vec<_> = (1..=60)
            .map(|i| BarRecord::from_bpm(i, 4, 110.0 + (i % 25) as f64).unwrap())
            .collect();
        let series = TempoSeries::new("rec", bars);
        let data = series.bpm_values();
        let (hist, pdf) = spline_pdf(&data, &SplinePdfParams::default()).unwrap();
        let stats = summary_stats(&series, None).unwrap();
        let scene = histogram_chart(&hist, &pdf, &stats, &meta()).unwrap();

        let y_axis = scene
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Axis(a) if a.orientation == crate::scene::Orientation::Vertical => {
                    Some(a)
                }
                _ => None,
            })
            .unwrap();
        let n = hist.total_count() as f64;
        let drawn = rects(&scene);
        let mut checked = 0;
        for (i, &count) in hist.counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let expected_top = y_axis.map(count as f64 / (n * hist.bin_width()));
            let rect = drawn[checked];
            assert!(
                (rect.y - expected_top).abs() < 1e-9,
                "bar {i} top {} vs {}",
                rect.y,
                expected_top
            );
            checked += 1;
        }
        assert_eq!(checked, drawn.len());
    }
}
