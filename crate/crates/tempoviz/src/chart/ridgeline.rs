//! Stacked kernel-density ridges on a shared BPM axis.

use crate::chart::{MARKER_LINE_WIDTH, SERIES_CYCLE, TEXT_DARK};
use crate::density::KdeCurve;
use crate::error::{Error, Result};
use crate::model::RecordingMeta;
use crate::scene::{
    nice_tick_marks, ChartScene, Element, LineStyle, PlotFrame, PolygonElement, PolylineElement,
    TextAnchor, TextElement,
};

/// Fill opacity of each ridge.
pub const RIDGE_FILL_OPACITY: f64 = 0.55;

/// Width of the outline traced along each ridge's top.
pub const RIDGE_OUTLINE_WIDTH: f64 = 2.0;

/// Opacity of the dotted per-ridge mean line.
const MEAN_LINE_OPACITY: f64 = 0.85;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 300.0;

/// Density ridges drawn top-to-bottom in the order given (chronological by
/// convention), each lifted to `density x scale + offset`. A dotted line
/// marks each recording's mean, clipped to its own ridge. The vertical
/// axis carries no ticks; only relative ridge height is meaningful.
pub fn ridgeline(
    kdes: &[KdeCurve],
    offsets: &[f64],
    scale: f64,
    meta: &[RecordingMeta],
    means: &[f64],
) -> Result<ChartScene> {
    if kdes.is_empty() {
        return Err(Error::invalid("ridgeline needs at least one recording"));
    }
    if offsets.len() != kdes.len() || means.len() != kdes.len() {
        return Err(Error::invalid(format!(
            "ridgeline got {} curves but {} offsets and {} means",
            kdes.len(),
            offsets.len(),
            means.len()
        )));
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::invalid(format!("scale must be positive (got {scale})")));
    }
    for pair in offsets.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::invalid(format!(
                "offsets must strictly decrease top-to-bottom ({} then {})",
                pair[0], pair[1]
            )));
        }
    }

    let x_lo = kdes
        .iter()
        .map(|k| k.grid[0])
        .fold(f64::INFINITY, f64::min);
    let x_hi = kdes
        .iter()
        .map(|k| *k.grid.last().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let top_of = |i: usize| -> f64 {
        offsets[i] + peak(&kdes[i]) * scale
    };
    let y_lo = offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_hi = (0..kdes.len()).map(top_of).fold(f64::NEG_INFINITY, f64::max);
    let span = (y_hi - y_lo).max(1e-9);

    let mut scene = ChartScene::new(WIDTH, HEIGHT);
    let frame = PlotFrame {
        left: 30.0,
        top: 16.0,
        right: WIDTH - 16.0,
        bottom: HEIGHT - 48.0,
        x_range: (x_lo, x_hi),
        y_range: (y_lo - 0.02 * span, y_hi + 0.05 * span),
    };

    scene.push(Element::Axis(frame.x_axis(
        nice_tick_marks(x_lo, x_hi, 7),
        Some("Tempo (BPM)".to_string()),
    )));
    let mut y_axis = frame.y_axis(vec![], None);
    y_axis.show_ticks = false;
    scene.push(Element::Axis(y_axis));

    // Draw top ridge first so lower ridges paint over it where they
    // overlap, the usual ridgeline convention.
    for (i, kde) in kdes.iter().enumerate() {
        let color = meta
            .get(i)
            .and_then(|m| m.color)
            .unwrap_or(SERIES_CYCLE[i % SERIES_CYCLE.len()]);
        let offset = offsets[i];
        let lift = |d: f64| offset + d * scale;

        let base_y = frame.map_y(offset);
        let mut polygon: Vec<(f64, f64)> = Vec::with_capacity(kde.grid.len() + 2);
        polygon.push((frame.map_x(kde.grid[0]), base_y));
        let mut outline = Vec::with_capacity(kde.grid.len());
        for (&x, &d) in kde.grid.iter().zip(&kde.density) {
            let p = (frame.map_x(x), frame.map_y(lift(d)));
            polygon.push(p);
            outline.push(p);
        }
        polygon.push((frame.map_x(*kde.grid.last().unwrap()), base_y));
        scene.push(Element::Polygon(PolygonElement {
            points: polygon,
            fill: color,
            fill_opacity: RIDGE_FILL_OPACITY,
            stroke: None,
        }));
        scene.push(Element::Polyline(PolylineElement::solid(
            outline,
            color,
            RIDGE_OUTLINE_WIDTH,
        )));

        // Mean marker, from the ridge's baseline up to the curve at the
        // mean.
        let mean = means[i];
        let mean_x = frame.map_x(mean);
        scene.push(Element::Polyline(PolylineElement {
            points: vec![
                (mean_x, base_y),
                (mean_x, frame.map_y(lift(density_at(kde, mean)))),
            ],
            color,
            width: MARKER_LINE_WIDTH,
            style: LineStyle::Dotted,
            opacity: MEAN_LINE_OPACITY,
        }));

        if let Some(m) = meta.get(i) {
            scene.push(Element::Text(
                TextElement::new(frame.left + 6.0, base_y - 4.0, &m.label, 10.0)
                    .anchored(TextAnchor::Start)
                    .colored(TEXT_DARK),
            ));
        }
    }
    Ok(scene)
}

/// Uniform top-to-bottom offsets for `n` ridges: spacing of 70% of the
/// tallest scaled peak, so an adjacent ridge can poke at most 30% of its
/// height above the strip boundary. The bottom ridge sits at offset 0.
pub fn auto_offsets(kdes: &[KdeCurve], scale: f64) -> Vec<f64> {
    let tallest = kdes.iter().map(peak).fold(0.0f64, f64::max);
    let spacing = (0.7 * tallest * scale).max(1e-9);
    let n = kdes.len();
    (0..n).map(|i| (n - 1 - i) as f64 * spacing).collect()
}

fn peak(kde: &KdeCurve) -> f64 {
    kde.density.iter().cloned().fold(0.0, f64::max)
}

/// Linear interpolation of the KDE curve at `x`, clamped to the grid ends.
fn density_at(kde: &KdeCurve, x: f64) -> f64 {
    let grid = &kde.grid;
    if x <= grid[0] {
        return kde.density[0];
    }
    if x >= *grid.last().unwrap() {
        return *kde.density.last().unwrap();
    }
    let i = grid.partition_point(|&g| g <= x) - 1;
    let t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    kde.density[i] * (1.0 - t) + kde.density[i + 1] * t
}
