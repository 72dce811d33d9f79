//! Dual-axis combination chart: mean-BPM bars, a variability line on a
//! secondary axis, and historical reference tempi.

use crate::chart::{legend_elements, LegendEntry, LegendSwatch, MARKER_LINE_WIDTH};
use crate::error::{Error, Result};
use crate::model::Color;
use crate::scene::{
    nice_tick_marks, ChartScene, Element, LineStyle, PlotFrame, PolygonElement, PolylineElement,
    RectElement, Stroke, Tick,
};

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 440.0;
const BAR_WIDTH: f64 = 0.6;

/// Color of the standard-deviation connector line and markers.
const STD_COLOR: Color = Color::rgb(0x55, 0x55, 0x55);
const STD_LINE_WIDTH: f64 = 1.5;
/// Marker size (diamond height) in scene units.
const STD_MARKER_SIZE: f64 = 7.0;

/// One recording's summary entry in the combination chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ComboRecording {
    pub label: String,
    pub mean_bpm: f64,
    pub std_bpm: f64,
    pub bar_color: Color,
    pub edge_color: Color,
}

/// A horizontal reference tempo with its legend label and dash style.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceLine {
    pub bpm: f64,
    pub label: String,
    pub color: Color,
    pub style: LineStyle,
}

/// Inputs to [`combination_chart`].
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationInputs {
    pub recordings: Vec<ComboRecording>,
    pub reference_lines: Vec<ReferenceLine>,
}

/// The three historical metronome recommendations drawn by default:
/// Czerny and Moscheles both at 160 BPM (distinguished by dash style) and
/// Kolisch at 126 BPM.
pub fn default_reference_lines() -> Vec<ReferenceLine> {
    vec![
        ReferenceLine {
            bpm: 160.0,
            label: "Czerny (160)".to_string(),
            color: Color::rgb(0xe4, 0x1a, 0x1c),
            style: LineStyle::Dashed,
        },
        ReferenceLine {
            bpm: 160.0,
            label: "Moscheles (160)".to_string(),
            color: Color::rgb(0xff, 0x7f, 0x00),
            style: LineStyle::Dotted,
        },
        ReferenceLine {
            bpm: 126.0,
            label: "Kolisch (126)".to_string(),
            color: Color::rgb(0x4d, 0xaf, 0x4a),
            style: LineStyle::DashDot,
        },
    ]
}

/// Mean-BPM bars on the left axis, a dotted line with diamond markers for
/// the standard deviation on the right axis, and horizontal reference
/// lines (left axis). Both axes autoscale with at least 5% headroom above
/// everything they carry.
pub fn combination_chart(inputs: &CombinationInputs) -> Result<ChartScene> {
    if inputs.recordings.is_empty() {
        return Err(Error::invalid(
            "combination chart needs at least one recording",
        ));
    }
    if let Some(bad) = inputs.reference_lines.iter().find(|r| !r.bpm.is_finite() || r.bpm <= 0.0) {
        return Err(Error::invalid(format!(
            "reference tempo must be positive (got {} for '{}')",
            bad.bpm, bad.label
        )));
    }

    let n = inputs.recordings.len();
    let mean_top = inputs
        .recordings
        .iter()
        .map(|r| r.mean_bpm)
        .chain(inputs.reference_lines.iter().map(|r| r.bpm))
        .fold(0.0f64, f64::max);
    let std_top = inputs
        .recordings
        .iter()
        .map(|r| r.std_bpm)
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let left_range = (0.0, mean_top * 1.06);
    let right_range = (0.0, std_top * 1.25);

    let mut scene = ChartScene::new(WIDTH, HEIGHT);
    let frame = PlotFrame {
        left: 58.0,
        top: 18.0,
        right: WIDTH - 58.0,
        bottom: HEIGHT - 52.0,
        x_range: (-0.7, n as f64 - 0.3),
        y_range: left_range,
    };

    let x_ticks = inputs
        .recordings
        .iter()
        .enumerate()
        .map(|(i, r)| Tick {
            value: i as f64,
            label: r.label.clone(),
        })
        .collect();
    scene.push(Element::Axis(frame.x_axis(x_ticks, None)));
    scene.push(Element::Axis(frame.y_axis(
        nice_tick_marks(0.0, left_range.1, 6),
        Some("Mean tempo (BPM)".to_string()),
    )));
    scene.push(Element::Axis(frame.y_axis_right(
        right_range,
        nice_tick_marks(0.0, right_range.1, 5),
        Some("Std dev (BPM)".to_string()),
    )));

    for (i, r) in inputs.recordings.iter().enumerate() {
        let x0 = frame.map_x(i as f64 - BAR_WIDTH / 2.0);
        let x1 = frame.map_x(i as f64 + BAR_WIDTH / 2.0);
        let y_top = frame.map_y(r.mean_bpm);
        scene.push(Element::Rect(RectElement {
            x: x0,
            y: y_top,
            width: x1 - x0,
            height: frame.bottom - y_top,
            fill: Some(r.bar_color),
            fill_opacity: 1.0,
            stroke: Some(Stroke::solid(r.edge_color, 1.2)),
        }));
    }

    for line in &inputs.reference_lines {
        let y = frame.map_y(line.bpm);
        scene.push(Element::Polyline(PolylineElement {
            points: vec![(frame.left, y), (frame.right, y)],
            color: line.color,
            width: MARKER_LINE_WIDTH,
            style: line.style,
            opacity: 1.0,
        }));
    }

    // Variability series on the secondary axis: dotted connector plus a
    // diamond marker per recording.
    let std_points: Vec<(f64, f64)> = inputs
        .recordings
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                frame.map_x(i as f64),
                frame.map_y_in(right_range, r.std_bpm),
            )
        })
        .collect();
    if std_points.len() > 1 {
        scene.push(Element::Polyline(PolylineElement {
            points: std_points.clone(),
            color: STD_COLOR,
            width: STD_LINE_WIDTH,
            style: LineStyle::Dotted,
            opacity: 1.0,
        }));
    }
    for &(x, y) in &std_points {
        let r = STD_MARKER_SIZE / 2.0;
        scene.push(Element::Polygon(PolygonElement {
            points: vec![(x, y - r), (x + r, y), (x, y + r), (x - r, y)],
            fill: STD_COLOR,
            fill_opacity: 1.0,
            stroke: None,
        }));
    }

    let mut legend: Vec<LegendEntry> = inputs
        .reference_lines
        .iter()
        .map(|line| LegendEntry {
            label: line.label.clone(),
            swatch: LegendSwatch::Line {
                color: line.color,
                width: MARKER_LINE_WIDTH,
                style: line.style,
            },
        })
        .collect();
    legend.push(LegendEntry {
        label: "Std dev (right)".to_string(),
        swatch: LegendSwatch::Line {
            color: STD_COLOR,
            width: STD_LINE_WIDTH,
            style: LineStyle::Dotted,
        },
    });
    for element in legend_elements(&legend, frame.right - 8.0, frame.top + 8.0) {
        scene.push(element);
    }
    Ok(scene)
}
