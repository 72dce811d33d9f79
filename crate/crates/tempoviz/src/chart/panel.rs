//! The five-panel composite figure: tempograph, histogram pair, ridgeline,
//! stacked bars, and combination chart in one scene.

use crate::chart::{
    combination_chart, histogram_chart, ridgeline, stacked_bars, tempograph, CombinationInputs,
    SECTION_PALETTE, TEXT_DARK,
};
use crate::density::{HistogramResult, KdeCurve, SplinePdf};
use crate::error::{Error, Result};
use crate::model::{RecordingMeta, SectionMap, SummaryStats, TempoSeries, YearRange};
use crate::scene::{ChartScene, Element, GroupElement, TextElement};
use crate::stats::{section_durations, SectionDurations};

const WIDTH: f64 = 1240.0;
const MARGIN: f64 = 20.0;
const GAP: f64 = 24.0;
/// Vertical space reserved above each row for its panel letter.
const LETTER_BAND: f64 = 26.0;
const LETTER_FONT: f64 = 15.0;

/// Everything the composite needs: the raw series plus the analysis
/// products each sub-chart consumes, all in the same recording order.
#[derive(Debug, Clone, PartialEq)]
pub struct FivePanelInputs {
    pub series: Vec<TempoSeries>,
    pub map: Option<SectionMap>,
    pub meta: Vec<RecordingMeta>,
    /// One (histogram, spline PDF, summary) triple per recording.
    pub histograms: Vec<(HistogramResult, SplinePdf, SummaryStats)>,
    pub kdes: Vec<KdeCurve>,
    pub offsets: Vec<f64>,
    pub kde_scale: f64,
    pub means: Vec<f64>,
    /// Per-recording sectional durations; empty → synthesized as a single
    /// whole-movement section.
    pub durations: Vec<SectionDurations>,
    pub combo: CombinationInputs,
}

/// Compose the five charts into one scene, panels lettered (a)–(e):
/// full-width tempograph, a row of per-recording histograms, then
/// ridgeline / stacked bars / combination chart side by side.
///
/// Each sub-chart's elements are embedded unchanged inside a translated
/// and scaled group, so panel content is identical to the standalone
/// chart built from the same inputs.
pub fn five_panel(inputs: &FivePanelInputs) -> Result<ChartScene> {
    if inputs.series.is_empty() {
        return Err(Error::invalid("composite figure needs at least one recording"));
    }
    if inputs.histograms.len() != inputs.series.len() {
        return Err(Error::invalid(format!(
            "{} recordings but {} histogram panels",
            inputs.series.len(),
            inputs.histograms.len()
        )));
    }

    let panel_a = tempograph(&inputs.series, inputs.map.as_ref(), &inputs.meta)?;
    let panel_b: Vec<ChartScene> = inputs
        .series
        .iter()
        .zip(&inputs.histograms)
        .map(|(series, (hist, pdf, stats))| {
            let meta = meta_or_default(&inputs.meta, &series.recording_id);
            histogram_chart(hist, pdf, stats, &meta)
        })
        .collect::<Result<_>>()?;
    let panel_c = ridgeline(
        &inputs.kdes,
        &inputs.offsets,
        inputs.kde_scale,
        &inputs.meta,
        &inputs.means,
    )?;
    let durations = if inputs.durations.is_empty() {
        whole_movement_durations(&inputs.series)?
    } else {
        inputs.durations.clone()
    };
    let panel_d = stacked_bars(&durations, &SECTION_PALETTE, false, &inputs.meta)?;
    let panel_e = combination_chart(&inputs.combo)?;

    let mut scene = ChartScene::new(WIDTH, 0.0);
    let inner = WIDTH - 2.0 * MARGIN;
    let mut y = MARGIN;

    // (a) full width.
    y += LETTER_BAND;
    let sa = inner / panel_a.width;
    push_letter(&mut scene, "(a)", MARGIN, y);
    push_panel(&mut scene, panel_a.clone(), MARGIN, y, sa);
    y += panel_a.height * sa + GAP;

    // (b) one histogram per recording, side by side.
    y += LETTER_BAND;
    push_letter(&mut scene, "(b)", MARGIN, y);
    let k = panel_b.len() as f64;
    let slot = (inner - (k - 1.0) * GAP) / k;
    let mut row_h = 0.0f64;
    for (i, panel) in panel_b.into_iter().enumerate() {
        let s = slot / panel.width;
        let x = MARGIN + i as f64 * (slot + GAP);
        row_h = row_h.max(panel.height * s);
        push_panel(&mut scene, panel, x, y, s);
    }
    y += row_h + GAP;

    // (c), (d), (e) in a row.
    y += LETTER_BAND;
    let slot = (inner - 2.0 * GAP) / 3.0;
    let mut row_h = 0.0f64;
    for (i, (letter, panel)) in [("(c)", panel_c), ("(d)", panel_d), ("(e)", panel_e)]
        .into_iter()
        .enumerate()
    {
        let s = slot / panel.width;
        let x = MARGIN + i as f64 * (slot + GAP);
        push_letter(&mut scene, letter, x, y);
        row_h = row_h.max(panel.height * s);
        push_panel(&mut scene, panel, x, y, s);
    }
    y += row_h + MARGIN;

    scene.height = y;
    Ok(scene)
}

fn push_letter(scene: &mut ChartScene, letter: &str, x: f64, panel_top: f64) {
    scene.push(Element::Text(
        TextElement::new(x, panel_top - 8.0, letter, LETTER_FONT).colored(TEXT_DARK),
    ));
}

fn push_panel(scene: &mut ChartScene, panel: ChartScene, dx: f64, dy: f64, scale: f64) {
    scene.push(Element::Group(GroupElement {
        dx,
        dy,
        scale,
        children: panel.elements,
    }));
}

fn meta_or_default(meta: &[RecordingMeta], id: &str) -> RecordingMeta {
    meta.iter()
        .find(|m| m.recording_id == id)
        .cloned()
        .unwrap_or_else(|| RecordingMeta {
            recording_id: id.to_string(),
            label: id.to_string(),
            year: YearRange::single(0),
            color: None,
        })
}

fn whole_movement_durations(series: &[TempoSeries]) -> Result<Vec<SectionDurations>> {
    series
        .iter()
        .map(|s| {
            let map = SectionMap::single("All", s.last_bar())?;
            section_durations(s, &map)
        })
        .collect()
}
