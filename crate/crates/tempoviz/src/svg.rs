//! Deterministic SVG serialization of chart scenes.
//!
//! Output is a standalone SVG 1.1 document using only `rect`, `polyline`,
//! `polygon`, `line`, `text`, and `g`, with presentation attributes (no
//! CSS, no ids, no timestamps). All numeric attributes are written with
//! exactly three decimals, rounding halves away from zero, so identical
//! scenes always serialize to identical bytes.

use std::fmt::Write as _;

use crate::model::Color;
use crate::scene::{
    AxisElement, AxisSide, ChartScene, Element, GroupElement, LineStyle, Orientation,
    TextAnchor, TextElement,
};

/// A rendered SVG document.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub text: String,
    pub width_px: u32,
    pub height_px: u32,
}

const AXIS_COLOR: Color = Color::rgb(0x33, 0x33, 0x33);
const TICK_LENGTH: f64 = 4.0;

/// Serialize `scene` at the given pixel size. The scene's own units become
/// the viewBox; the browser scales them to `width_px` x `height_px`.
pub fn render(scene: &ChartScene, width_px: u32, height_px: u32) -> SvgDocument {
    let width_px = width_px.max(1);
    let height_px = height_px.max(1);
    let mut out = String::with_capacity(16 * 1024);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width_px}\" height=\"{height_px}\" viewBox=\"0 0 {} {}\">",
        fmt3(scene.width),
        fmt3(scene.height)
    );
    if let Some(bg) = scene.background {
        let _ = writeln!(
            out,
            "<rect x=\"0.000\" y=\"0.000\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            fmt3(scene.width),
            fmt3(scene.height),
            bg.hex()
        );
    }
    for element in &scene.elements {
        write_element(&mut out, element);
    }
    out.push_str("</svg>\n");
    SvgDocument {
        text: out,
        width_px,
        height_px,
    }
}

fn write_element(out: &mut String, element: &Element) {
    match element {
        Element::Axis(axis) => write_axis(out, axis),
        Element::Polyline(p) => {
            let _ = write!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"",
                points_attr(&p.points),
                p.color.hex(),
                fmt3(p.width)
            );
            if let Some(dashes) = dash_array(p.style) {
                let _ = write!(out, " stroke-dasharray=\"{dashes}\"");
            }
            if p.opacity < 1.0 {
                let _ = write!(out, " stroke-opacity=\"{}\"", fmt3(p.opacity));
            }
            out.push_str("/>\n");
        }
        Element::Polygon(p) => {
            let _ = write!(
                out,
                "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"{}\"",
                points_attr(&p.points),
                p.fill.hex(),
                fmt3(p.fill_opacity)
            );
            match &p.stroke {
                Some(s) => {
                    let _ = write!(
                        out,
                        " stroke=\"{}\" stroke-width=\"{}\"",
                        s.color.hex(),
                        fmt3(s.width)
                    );
                    if let Some(dashes) = dash_array(s.style) {
                        let _ = write!(out, " stroke-dasharray=\"{dashes}\"");
                    }
                }
                None => out.push_str(" stroke=\"none\""),
            }
            out.push_str("/>\n");
        }
        Element::Rect(r) => {
            let fill = match r.fill {
                Some(c) => c.hex(),
                None => "none".to_string(),
            };
            let _ = write!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"{}\"",
                fmt3(r.x),
                fmt3(r.y),
                fmt3(r.width),
                fmt3(r.height),
                fill,
                fmt3(r.fill_opacity)
            );
            if let Some(s) = &r.stroke {
                let _ = write!(
                    out,
                    " stroke=\"{}\" stroke-width=\"{}\"",
                    s.color.hex(),
                    fmt3(s.width)
                );
            }
            out.push_str("/>\n");
        }
        Element::Band(b) => {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"{}\"/>",
                fmt3(b.x0.min(b.x1)),
                fmt3(b.y0.min(b.y1)),
                fmt3((b.x1 - b.x0).abs()),
                fmt3((b.y1 - b.y0).abs()),
                b.color.hex(),
                fmt3(b.opacity)
            );
        }
        Element::Text(t) => write_text(out, t),
        Element::Group(g) => write_group(out, g),
    }
}

fn write_group(out: &mut String, group: &GroupElement) {
    let _ = writeln!(
        out,
        "<g transform=\"translate({} {}) scale({})\">",
        fmt3(group.dx),
        fmt3(group.dy),
        fmt3(group.scale)
    );
    for child in &group.children {
        write_element(out, child);
    }
    out.push_str("</g>\n");
}

fn write_text(out: &mut String, t: &TextElement) {
    let anchor = match t.anchor {
        TextAnchor::Start => "start",
        TextAnchor::Middle => "middle",
        TextAnchor::End => "end",
    };
    let _ = write!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" fill=\"{}\" text-anchor=\"{anchor}\"",
        fmt3(t.x),
        fmt3(t.y),
        fmt3(t.size),
        t.color.hex()
    );
    if t.rotate_deg != 0.0 {
        let _ = write!(
            out,
            " transform=\"rotate({} {} {})\"",
            fmt3(t.rotate_deg),
            fmt3(t.x),
            fmt3(t.y)
        );
    }
    let _ = writeln!(out, ">{}</text>", escape(&t.content));
}

fn write_axis(out: &mut String, axis: &AxisElement) {
    let (s0, s1) = axis.scene_range;
    match axis.orientation {
        Orientation::Horizontal => write_line(out, s0, axis.position, s1, axis.position),
        Orientation::Vertical => write_line(out, axis.position, s0, axis.position, s1),
    }
    let font = axis.tick_font;
    if axis.show_ticks {
        for tick in &axis.ticks {
            let p = axis.map(tick.value);
            match axis.side {
                AxisSide::Bottom => {
                    write_line(out, p, axis.position, p, axis.position + TICK_LENGTH);
                    let label = TextElement::new(p, axis.position + TICK_LENGTH + font, &tick.label, font)
                        .anchored(TextAnchor::Middle)
                        .colored(AXIS_COLOR);
                    write_text(out, &label);
                }
                AxisSide::Left => {
                    write_line(out, axis.position - TICK_LENGTH, p, axis.position, p);
                    let label = TextElement::new(
                        axis.position - TICK_LENGTH - 2.0,
                        p + font * 0.35,
                        &tick.label,
                        font,
                    )
                    .anchored(TextAnchor::End)
                    .colored(AXIS_COLOR);
                    write_text(out, &label);
                }
                AxisSide::Right => {
                    write_line(out, axis.position, p, axis.position + TICK_LENGTH, p);
                    let label = TextElement::new(
                        axis.position + TICK_LENGTH + 2.0,
                        p + font * 0.35,
                        &tick.label,
                        font,
                    )
                    .anchored(TextAnchor::Start)
                    .colored(AXIS_COLOR);
                    write_text(out, &label);
                }
            }
        }
    }
    if let Some(label) = &axis.label {
        let label_font = font * 1.2;
        let mid = (s0 + s1) / 2.0;
        let offset = 3.6 * font;
        let text = match axis.side {
            AxisSide::Bottom => {
                TextElement::new(mid, axis.position + offset, label, label_font)
                    .anchored(TextAnchor::Middle)
                    .colored(AXIS_COLOR)
            }
            AxisSide::Left => TextElement::new(axis.position - offset, mid, label, label_font)
                .anchored(TextAnchor::Middle)
                .colored(AXIS_COLOR)
                .rotated(-90.0),
            AxisSide::Right => TextElement::new(axis.position + offset, mid, label, label_font)
                .anchored(TextAnchor::Middle)
                .colored(AXIS_COLOR)
                .rotated(90.0),
        };
        write_text(out, &text);
    }
}

fn write_line(out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64) {
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1.000\"/>",
        fmt3(x1),
        fmt3(y1),
        fmt3(x2),
        fmt3(y2),
        AXIS_COLOR.hex()
    );
}

fn points_attr(points: &[(f64, f64)]) -> String {
    let mut s = String::with_capacity(points.len() * 16);
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", fmt3(*x), fmt3(*y));
    }
    s
}

/// The fixed dash patterns for the non-solid line styles, in scene units.
fn dash_array(style: LineStyle) -> Option<&'static str> {
    match style {
        LineStyle::Solid => None,
        LineStyle::Dashed => Some("6 4"),
        LineStyle::Dotted => Some("1.5 3"),
        LineStyle::DashDot => Some("7 3 1.5 3"),
    }
}

/// Exactly three decimals, halves rounded away from zero.
fn fmt3(v: f64) -> String {
    let scaled = (v * 1000.0).round();
    let int = scaled as i64;
    let sign = if int < 0 { "-" } else { "" };
    let abs = int.unsigned_abs();
    format!("{sign}{}.{:03}", abs / 1000, abs % 1000)
}

fn escape(text: &str) -> String {
    let mut s = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => s.push_str("&amp;"),
            '<' => s.push_str("&lt;"),
            '>' => s.push_str("&gt;"),
            '"' => s.push_str("&quot;"),
            '\'' => s.push_str("&apos;"),
            _ => s.push(c),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::PolylineElement;

    #[test]
    fn fmt3_rounds_half_away_from_zero() {
        assert_eq!(fmt3(0.0), "0.000");
        assert_eq!(fmt3(1.0), "1.000");
        assert_eq!(fmt3(1.2345), "1.235");
        assert_eq!(fmt3(1.2344), "1.234");
        assert_eq!(fmt3(2.0005), "2.001");
        assert_eq!(fmt3(-2.0005), "-2.001");
        assert_eq!(fmt3(-1.2345), "-1.235");
        assert_eq!(fmt3(-0.0001), "0.000");
        assert_eq!(fmt3(123.4), "123.400");
    }

    #[test]
    fn empty_scene_has_root_and_background_only() {
        let scene = ChartScene::new(100.0, 50.0);
        let doc = render(&scene, 200, 100);
        assert_eq!(doc.width_px, 200);
        assert!(doc.text.starts_with("<?xml"));
        assert!(doc.text.contains("viewBox=\"0 0 100.000 50.000\""));
        assert_eq!(doc.text.matches("<rect").count(), 1);
        assert!(doc.text.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn polyline_renders_its_points() {
        let mut scene = ChartScene::new(10.0, 10.0);
        scene.push(Element::Polyline(PolylineElement::solid(
            vec![(0.0, 0.0), (1.0, 2.0), (3.5, 4.25)],
            Color::rgb(0x21, 0x66, 0xac),
            0.9,
        )));
        let doc = render(&scene, 10, 10);
        assert!(doc
            .text
            .contains("points=\"0.000,0.000 1.000,2.000 3.500,4.250\""));
        assert!(doc.text.contains("stroke=\"#2166ac\""));
        assert!(doc.text.contains("stroke-width=\"0.900\""));
    }

    #[test]
    fn rendering_is_deterministic() {
        let mut scene = ChartScene::new(10.0, 10.0);
        scene.push(Element::Text(TextElement::new(1.0, 2.0, "A & B <C>", 10.0)));
        let a = render(&scene, 100, 100);
        let b = render(&scene, 100, 100);
        assert_eq!(a, b);
        assert!(a.text.contains("A &amp; B &lt;C&gt;"));
    }

    #[test]
    fn dash_styles_are_distinct() {
        let styles = [LineStyle::Dashed, LineStyle::Dotted, LineStyle::DashDot];
        let arrays: Vec<_> = styles.iter().map(|&s| dash_array(s).unwrap()).collect();
        assert_eq!(arrays.len(), 3);
        assert!(arrays[0] != arrays[1] && arrays[1] != arrays[2] && arrays[0] != arrays[2]);
        assert!(dash_array(LineStyle::Solid).is_none());
    }
}
