//! Per-recording stacked bars of sectional playing time.

use crate::chart::{label_for, legend_elements, LegendEntry, LegendSwatch, TEXT_DARK, TICK_FONT};
use crate::error::{Error, Result};
use crate::model::{Color, RecordingMeta};
use crate::scene::{
    nice_tick_marks, ChartScene, Element, PlotFrame, RectElement, Stroke, TextAnchor, TextElement,
    Tick,
};
use crate::stats::SectionDurations;

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 420.0;

/// Width of each stacked bar in recording-position units.
const BAR_WIDTH: f64 = 0.8;

/// One stacked bar per recording, segments in section order with white
/// edges. In seconds mode bar heights are total durations; with `percent`
/// set, each bar is normalized to 100.
pub fn stacked_bars(
    durations: &[SectionDurations],
    section_colors: &[Color],
    percent: bool,
    meta: &[RecordingMeta],
) -> Result<ChartScene> {
    if durations.is_empty() {
        return Err(Error::invalid("stacked bars need at least one recording"));
    }
    let section_names: Vec<&str> = durations[0]
        .entries
        .iter()
        .map(|(name, _)| name.as_str())
        .collect();
    for d in &durations[1..] {
        let names: Vec<&str> = d.entries.iter().map(|(name, _)| name.as_str()).collect();
        if names != section_names {
            return Err(Error::invalid(format!(
                "recording '{}' has sections [{}], expected [{}]",
                d.recording_id,
                names.join(", "),
                section_names.join(", ")
            )));
        }
    }
    let colors: Vec<Color> = (0..section_names.len())
        .map(|i| {
            section_colors
                .get(i % section_colors.len().max(1))
                .copied()
                .unwrap_or(crate::chart::SECTION_PALETTE[i % crate::chart::SECTION_PALETTE.len()])
        })
        .collect();

    let n = durations.len();
    let y_top = if percent {
        100.0
    } else {
        durations.iter().map(|d| d.total_s()).fold(0.0, f64::max)
    };
    let mut scene = ChartScene::new(WIDTH, HEIGHT);
    let frame = PlotFrame {
        left: 58.0,
        top: 18.0,
        right: WIDTH - 150.0,
        bottom: HEIGHT - 52.0,
        x_range: (-0.6, n as f64 - 0.4),
        y_range: (0.0, y_top * 1.06),
    };

    let x_ticks = durations
        .iter()
        .enumerate()
        .map(|(i, d)| Tick {
            value: i as f64,
            label: label_for(meta, &d.recording_id),
        })
        .collect();
    scene.push(Element::Axis(frame.x_axis(x_ticks, None)));
    let y_label = if percent {
        "Share of movement (%)"
    } else {
        "Duration (s)"
    };
    scene.push(Element::Axis(frame.y_axis(
        nice_tick_marks(0.0, frame.y_range.1, 6),
        Some(y_label.to_string()),
    )));

    for (i, d) in durations.iter().enumerate() {
        let total = d.total_s();
        let to_value = |seconds: f64| {
            if percent {
                seconds / total * 100.0
            } else {
                seconds
            }
        };
        let x0 = frame.map_x(i as f64 - BAR_WIDTH / 2.0);
        let x1 = frame.map_x(i as f64 + BAR_WIDTH / 2.0);
        let mut bottom = 0.0;
        for (k, (_, seconds)) in d.entries.iter().enumerate() {
            let value = to_value(*seconds);
            let y0 = frame.map_y(bottom);
            let y1 = frame.map_y(bottom + value);
            scene.push(Element::Rect(RectElement {
                x: x0,
                y: y1,
                width: x1 - x0,
                height: y0 - y1,
                fill: Some(colors[k]),
                fill_opacity: 1.0,
                stroke: Some(Stroke::solid(Color::rgb(255, 255, 255), 1.0)),
            }));
            bottom += value;
        }
        // Total label above each bar (seconds mode only).
        if !percent {
            scene.push(Element::Text(
                TextElement::new(
                    (x0 + x1) / 2.0,
                    frame.map_y(bottom) - 5.0,
                    format!("{:.0} s", total),
                    TICK_FONT,
                )
                .anchored(TextAnchor::Middle)
                .colored(TEXT_DARK),
            ));
        }
    }

    let legend: Vec<LegendEntry> = section_names
        .iter()
        .enumerate()
        .map(|(k, name)| LegendEntry {
            label: name.to_string(),
            swatch: LegendSwatch::Box {
                fill: colors[k],
                fill_opacity: 1.0,
                stroke: Some(Stroke::solid(Color::rgb(255, 255, 255), 1.0)),
            },
        })
        .collect();
    for element in legend_elements(&legend, WIDTH - 10.0, frame.top) {
        scene.push(element);
    }
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn durations(id: &str, seconds: &[(&str, f64)]) -> SectionDurations {
        SectionDurations {
            recording_id: id.into(),
            entries: seconds
                .iter()
                .map(|(n, s)| (n.to_string(), *s))
                .collect(),
        }
    }

    fn segment_rects(scene: &ChartScene) -> Vec<&RectElement> {
        scene
            .elements
            .iter()
            .filter_map(|e| match e {
                // Bar segments are wide and fully opaque; the legend
                // background is translucent and its swatches are small.
                Element::Rect(r) if r.width > 40.0 && r.fill_opacity == 1.0 => Some(r),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn bar_heights_are_totals_in_seconds_mode() {
        let a = durations("a", &[("Intro", 100.0), ("Allegro", 805.0)]);
        let b = durations("b", &[("Intro", 100.0), ("Allegro", 751.0)]);
        let scene = stacked_bars(&[a, b], &crate::chart::SECTION_PALETTE, false, &[]).unwrap();
        let y_axis = scene
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Axis(ax)
                    if ax.orientation == crate::scene::Orientation::Vertical =>
                {
                    Some(ax)
                }
                _ => None,
            })
            .unwrap();
        let rects = segment_rects(&scene);
        assert_eq!(rects.len(), 4);
        // Each recording's stack reaches its total.
        let top_a = rects[1].y;
        let top_b = rects[3].y;
        assert!((top_a - y_axis.map(905.0)).abs() < 1e-9);
        assert!((top_b - y_axis.map(851.0)).abs() < 1e-9);
    }

    #[test]
    fn percent_mode_normalizes_every_bar_to_100() {
        let a = durations("a", &[("X", 300.0), ("Y", 600.0)]);
        let b = durations("b", &[("X", 100.0), ("Y", 100.0)]);
        let scene = stacked_bars(&[a, b], &crate::chart::SECTION_PALETTE, true, &[]).unwrap();
        let y_axis = scene
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Axis(ax)
                    if ax.orientation == crate::scene::Orientation::Vertical =>
                {
                    Some(ax)
                }
                _ => None,
            })
            .unwrap();
        let rects = segment_rects(&scene);
        let hundred = y_axis.map(100.0);
        assert!((rects[1].y - hundred).abs() < 1e-9);
        assert!((rects[3].y - hundred).abs() < 1e-9);
        // First segment of recording a is a third of the bar.
        let a_first_top = y_axis.map(300.0 / 900.0 * 100.0);
        assert!((rects[0].y - a_first_top).abs() < 1e-9);
    }

    #[test]
    fn single_section_gives_one_segment_per_bar() {
        let a = durations("a", &[("All", 20.0)]);
        let scene = stacked_bars(&[a], &[], false, &[]).unwrap();
        assert_eq!(segment_rects(&scene).len(), 1);
    }

    #[test]
    fn mismatched_section_sets_are_rejected() {
        let a = durations("a", &[("X", 1.0), ("Y", 2.0)]);
        let b = durations("b", &[("X", 1.0), ("Z", 2.0)]);
        let err = stacked_bars(&[a, b], &[], false, &[]).unwrap_err();
        assert!(err.to_string().contains("expected"), "{err}");
        assert!(stacked_bars(&[], &[], false, &[]).is_err());
    }

    #[test]
    fn segments_have_white_edges() {
        let a = durations("a", &[("X", 1.0), ("Y", 2.0)]);
        let scene = stacked_bars(&[a], &[], false, &[]).unwrap();
        for rect in segment_rects(&scene) {
            let stroke = rect.stroke.as_ref().unwrap();
            assert_eq!(stroke.color, Color::rgb(255, 255, 255));
        }
    }
}
