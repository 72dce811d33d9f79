//! Chart builders: each produces a renderer-independent [`ChartScene`].
//!
//! Shared styling defaults live here. Colors follow a fixed house palette:
//! a blue/red pair for two-recording comparisons, a five-color pastel
//! palette for section shading, and a distinct triple for the historical
//! reference lines of the combination chart. Recording metadata overrides
//! the defaults.

mod combo;
mod histogram;
mod panel;
mod ridgeline;
mod stacked;
mod tempograph;

pub use combo::{
    combination_chart, default_reference_lines, CombinationInputs, ComboRecording, ReferenceLine,
};
pub use histogram::histogram_chart;
pub use panel::{five_panel, FivePanelInputs};
pub use ridgeline::{auto_offsets, ridgeline, RIDGE_FILL_OPACITY, RIDGE_OUTLINE_WIDTH};
pub use stacked::stacked_bars;
pub use tempograph::{small_multiples, tempograph, MAX_OVERLAID_SERIES};

use crate::model::{Color, RecordingMeta};
use crate::scene::{
    text_width, Element, LineStyle, PolylineElement, RectElement, Stroke, TextElement,
};

/// Default per-series colors, cycled when metadata does not assign one.
/// The first two are the canonical historic-blue / modern-red pair.
pub const SERIES_CYCLE: [Color; 6] = [
    Color::rgb(0x21, 0x66, 0xac),
    Color::rgb(0xd6, 0x60, 0x4d),
    Color::rgb(0x4d, 0xaf, 0x4a),
    Color::rgb(0x98, 0x4e, 0xa3),
    Color::rgb(0xff, 0x7f, 0x00),
    Color::rgb(0x66, 0x66, 0x66),
];

/// Pastel backgrounds for section bands and stacked-bar segments, cycled
/// in section order.
pub const SECTION_PALETTE: [Color; 5] = [
    Color::rgb(0xd1, 0xe5, 0xf0),
    Color::rgb(0xfd, 0xdb, 0xc7),
    Color::rgb(0xe0, 0xf3, 0xdb),
    Color::rgb(0xfe, 0xe0, 0x90),
    Color::rgb(0xf5, 0xf5, 0xf5),
];

/// Opacity of section shading bands behind tempograph curves.
pub const SECTION_BAND_OPACITY: f64 = 0.15;

/// Line width of tempograph BPM curves.
pub const TEMPO_LINE_WIDTH: f64 = 0.9;

/// Line width of the bold spline-PDF curve over a histogram.
pub const PDF_LINE_WIDTH: f64 = 2.0;

/// Width of mean/reference marker lines.
pub const MARKER_LINE_WIDTH: f64 = 1.3;

pub(crate) const TEXT_DARK: Color = Color::rgb(0x33, 0x33, 0x33);
pub(crate) const TICK_FONT: f64 = 10.0;
pub(crate) const LEGEND_FONT: f64 = 10.0;
pub(crate) const TITLE_FONT: f64 = 12.0;

/// Metadata lookup by recording id.
pub(crate) fn meta_for<'a>(meta: &'a [RecordingMeta], id: &str) -> Option<&'a RecordingMeta> {
    meta.iter().find(|m| m.recording_id == id)
}

/// Display label for a recording: its metadata label, else the id.
pub(crate) fn label_for(meta: &[RecordingMeta], id: &str) -> String {
    meta_for(meta, id)
        .map(|m| m.label.clone())
        .unwrap_or_else(|| id.to_string())
}

/// Series color: metadata color when assigned, else the cycle at `index`.
pub(crate) fn color_for(meta: &[RecordingMeta], id: &str, index: usize) -> Color {
    meta_for(meta, id)
        .and_then(|m| m.color)
        .unwrap_or(SERIES_CYCLE[index % SERIES_CYCLE.len()])
}

/// Pad a data range by `fraction` of its span on both sides; degenerate
/// ranges get an absolute ±1 pad.
pub(crate) fn padded_range(lo: f64, hi: f64, fraction: f64) -> (f64, f64) {
    if hi > lo {
        let pad = (hi - lo) * fraction;
        (lo - pad, hi + pad)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

pub(crate) struct LegendEntry {
    pub label: String,
    pub swatch: LegendSwatch,
}

pub(crate) enum LegendSwatch {
    Line {
        color: Color,
        width: f64,
        style: LineStyle,
    },
    Box {
        fill: Color,
        fill_opacity: f64,
        stroke: Option<Stroke>,
    },
}

/// Build a legend box whose top-right corner sits at (`right`, `top`).
/// Returns the background rect followed by swatches and labels.
pub(crate) fn legend_elements(entries: &[LegendEntry], right: f64, top: f64) -> Vec<Element> {
    if entries.is_empty() {
        return Vec::new();
    }
    let font = LEGEND_FONT;
    let pad = 6.0;
    let swatch_w = 20.0;
    let row_h = font * 1.7;
    let text_w = entries
        .iter()
        .map(|e| text_width(&e.label, font))
        .fold(0.0, f64::max);
    let width = pad + swatch_w + pad + text_w + pad;
    let height = 2.0 * pad + row_h * entries.len() as f64;
    let x0 = right - width;

    let mut elements = vec![Element::Rect(RectElement {
        x: x0,
        y: top,
        width,
        height,
        fill: Some(Color::rgb(255, 255, 255)),
        fill_opacity: 0.9,
        stroke: Some(Stroke::solid(Color::rgb(0x99, 0x99, 0x99), 0.7)),
    })];
    for (i, entry) in entries.iter().enumerate() {
        let yc = top + pad + row_h * i as f64 + row_h / 2.0;
        let sx = x0 + pad;
        match &entry.swatch {
            LegendSwatch::Line {
                color,
                width,
                style,
            } => elements.push(Element::Polyline(PolylineElement {
                points: vec![(sx, yc), (sx + swatch_w, yc)],
                color: *color,
                width: *width,
                style: *style,
                opacity: 1.0,
            })),
            LegendSwatch::Box {
                fill,
                fill_opacity,
                stroke,
            } => elements.push(Element::Rect(RectElement {
                x: sx,
                y: yc - font * 0.45,
                width: swatch_w,
                height: font * 0.9,
                fill: Some(*fill),
                fill_opacity: *fill_opacity,
                stroke: stroke.clone(),
            })),
        }
        elements.push(Element::Text(
            TextElement::new(sx + swatch_w + pad, yc + font * 0.35, &entry.label, font)
                .colored(TEXT_DARK),
        ));
    }
    elements
}
