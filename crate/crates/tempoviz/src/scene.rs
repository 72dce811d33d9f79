//! Renderer-independent chart scenes.
//!
//! A [`ChartScene`] is an ordered list of drawing primitives in abstract
//! scene units, origin top-left, y growing downward. Chart builders map
//! data coordinates into a scene's plot region through a [`PlotFrame`];
//! axis elements carry both the data range and the scene segment it maps
//! onto, so a point's scene position can be recomputed (and asserted)
//! from the axis alone. Element order is paint order: later elements draw
//! over earlier ones.

use crate::model::Color;

/// A complete chart description, ready for rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartScene {
    pub width: f64,
    pub height: f64,
    /// Background fill behind all elements, if any.
    pub background: Option<Color>,
    pub elements: Vec<Element>,
}

impl ChartScene {
    pub fn new(width: f64, height: f64) -> Self {
        ChartScene {
            width,
            height,
            background: Some(Color::rgb(255, 255, 255)),
            elements: Vec::new(),
        }
    }

    pub fn push(&mut self, element: Element) {
        self.elements.push(element);
    }
}

/// One drawing primitive, in scene coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Axis(AxisElement),
    Polyline(PolylineElement),
    Polygon(PolygonElement),
    Rect(RectElement),
    Band(BandElement),
    Text(TextElement),
    Group(GroupElement),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Which side of the plot region an axis sits on (where its tick labels
/// go).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisSide {
    Left,
    Right,
    Bottom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tick {
    /// Position in data coordinates.
    pub value: f64,
    pub label: String,
}

/// An axis: a line segment in scene space plus the affine map from data
/// coordinates onto it.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisElement {
    pub orientation: Orientation,
    pub side: AxisSide,
    /// Data values mapped to the two ends of `scene_range`.
    pub data_range: (f64, f64),
    /// Scene coordinates of the two ends of the axis line. For a vertical
    /// axis the first entry is the bottom (low data value), which is the
    /// numerically larger scene y.
    pub scene_range: (f64, f64),
    /// Cross-axis scene coordinate of the axis line.
    pub position: f64,
    pub ticks: Vec<Tick>,
    pub label: Option<String>,
    /// When false, tick marks and tick labels are suppressed (the axis
    /// line and label still draw).
    pub show_ticks: bool,
    /// Font size of tick labels; the axis label is drawn slightly larger.
    pub tick_font: f64,
}

impl AxisElement {
    /// Map a data value onto the axis' scene segment.
    pub fn map(&self, v: f64) -> f64 {
        let (d0, d1) = self.data_range;
        let (s0, s1) = self.scene_range;
        s0 + (v - d0) / (d1 - d0) * (s1 - s0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    Dashed,
    Dotted,
    DashDot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolylineElement {
    pub points: Vec<(f64, f64)>,
    pub color: Color,
    pub width: f64,
    pub style: LineStyle,
    pub opacity: f64,
}

impl PolylineElement {
    pub fn solid(points: Vec<(f64, f64)>, color: Color, width: f64) -> Self {
        PolylineElement {
            points,
            color,
            width,
            style: LineStyle::Solid,
            opacity: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stroke {
    pub color: Color,
    pub width: f64,
    pub style: LineStyle,
}

impl Stroke {
    pub fn solid(color: Color, width: f64) -> Self {
        Stroke {
            color,
            width,
            style: LineStyle::Solid,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonElement {
    pub points: Vec<(f64, f64)>,
    pub fill: Color,
    pub fill_opacity: f64,
    pub stroke: Option<Stroke>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectElement {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    pub fill: Option<Color>,
    pub fill_opacity: f64,
    pub stroke: Option<Stroke>,
}

/// Axis-aligned span shading (e.g. section bands behind a tempograph).
#[derive(Debug, Clone, PartialEq)]
pub struct BandElement {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub color: Color,
    pub opacity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextAnchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextElement {
    pub x: f64,
    pub y: f64,
    pub content: String,
    /// Font size in scene units.
    pub size: f64,
    pub color: Color,
    pub anchor: TextAnchor,
    /// Rotation around (x, y) in degrees, clockwise; 0 for horizontal.
    pub rotate_deg: f64,
}

impl TextElement {
    pub fn new(x: f64, y: f64, content: impl Into<String>, size: f64) -> Self {
        TextElement {
            x,
            y,
            content: content.into(),
            size,
            color: Color::rgb(0, 0, 0),
            anchor: TextAnchor::Start,
            rotate_deg: 0.0,
        }
    }

    pub fn anchored(mut self, anchor: TextAnchor) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn colored(mut self, color: Color) -> Self {
        self.color = color;
        self
    }

    pub fn rotated(mut self, deg: f64) -> Self {
        self.rotate_deg = deg;
        self
    }
}

/// A translated (and optionally uniformly scaled) sub-scene. Composite
/// charts embed their sub-charts' element lists unchanged inside groups,
/// so composition is testable by equality on the children.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub dx: f64,
    pub dy: f64,
    pub scale: f64,
    pub children: Vec<Element>,
}

/// A rectangular plot region and the data ranges mapped onto it.
///
/// Scene y grows downward, so `map_y` sends the low end of `y_range` to
/// the region's bottom edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFrame {
    /// Left, top, right, bottom edges in scene coordinates.
    pub left: f64,
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl PlotFrame {
    pub fn map_x(&self, v: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.left + (v - lo) / (hi - lo) * (self.right - self.left)
    }

    pub fn map_y(&self, v: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.bottom + (v - lo) / (hi - lo) * (self.top - self.bottom)
    }

    /// Bottom x-axis with ticks at the given data values.
    pub fn x_axis(&self, ticks: Vec<Tick>, label: Option<String>) -> AxisElement {
        AxisElement {
            orientation: Orientation::Horizontal,
            side: AxisSide::Bottom,
            data_range: self.x_range,
            scene_range: (self.left, self.right),
            position: self.bottom,
            ticks,
            label,
            show_ticks: true,
            tick_font: 10.0,
        }
    }

    /// Left y-axis with ticks at the given data values.
    pub fn y_axis(&self, ticks: Vec<Tick>, label: Option<String>) -> AxisElement {
        AxisElement {
            orientation: Orientation::Vertical,
            side: AxisSide::Left,
            data_range: self.y_range,
            scene_range: (self.bottom, self.top),
            position: self.left,
            ticks,
            label,
            show_ticks: true,
            tick_font: 10.0,
        }
    }

    /// Right-hand secondary y-axis with its own data range.
    pub fn y_axis_right(
        &self,
        range: (f64, f64),
        ticks: Vec<Tick>,
        label: Option<String>,
    ) -> AxisElement {
        AxisElement {
            orientation: Orientation::Vertical,
            side: AxisSide::Right,
            data_range: range,
            scene_range: (self.bottom, self.top),
            position: self.right,
            ticks,
            label,
            show_ticks: true,
            tick_font: 10.0,
        }
    }

    /// Map a secondary-range value onto the vertical scene segment.
    pub fn map_y_in(&self, range: (f64, f64), v: f64) -> f64 {
        self.bottom + (v - range.0) / (range.1 - range.0) * (self.top - self.bottom)
    }

    /// Clip a polyline to the frame's scene rectangle, splitting it where
    /// it leaves the region. Returns the visible pieces in order.
    pub fn clip_polyline(&self, points: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
        clip_polyline_to_rect(points, self.left, self.top, self.right, self.bottom)
    }
}

/// Liang-Barsky clip of one segment to a rectangle. Returns the clipped
/// endpoints, or `None` when the segment lies entirely outside.
fn clip_segment(
    (x0, y0): (f64, f64),
    (x1, y1): (f64, f64),
    left: f64,
    top: f64,
    right: f64,
    bottom: f64,
) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, x0 - left),
        (dx, right - x0),
        (-dy, y0 - top),
        (dy, bottom - y0),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return None;
            }
        }
    }
    Some((
        (x0 + t0 * dx, y0 + t0 * dy),
        (x0 + t1 * dx, y0 + t1 * dy),
    ))
}

/// Clip a polyline to a rectangle, splitting into pieces where it exits.
pub fn clip_polyline_to_rect(
    points: &[(f64, f64)],
    left: f64,
    top: f64,
    right: f64,
    bottom: f64,
) -> Vec<Vec<(f64, f64)>> {
    let mut pieces: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for pair in points.windows(2) {
        match clip_segment(pair[0], pair[1], left, top, right, bottom) {
            Some((a, b)) => {
                if current.last() != Some(&a) {
                    if current.len() > 1 {
                        pieces.push(std::mem::take(&mut current));
                    } else {
                        current.clear();
                    }
                    current.push(a);
                }
                current.push(b);
            }
            None => {
                if current.len() > 1 {
                    pieces.push(std::mem::take(&mut current));
                } else {
                    current.clear();
                }
            }
        }
    }
    if current.len() > 1 {
        pieces.push(current);
    }
    pieces
}

/// Evenly spaced "nice" tick values inside [lo, hi] (Heckbert's
/// nice-numbers scheme): steps of 1, 2, or 5 times a power of ten.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    if lo.is_nan() || hi.is_nan() || hi <= lo || target < 2 {
        return vec![lo];
    }
    let step = nice_num((hi - lo) / (target - 1) as f64, true);
    let first = (lo / step).ceil();
    let last = (hi / step).floor();
    let mut ticks = Vec::new();
    let mut k = first;
    while k <= last + 0.5 {
        ticks.push(k * step);
        k += 1.0;
    }
    ticks
}

/// Ticks with labels formatted to just enough decimals for their spacing.
pub fn nice_tick_marks(lo: f64, hi: f64, target: usize) -> Vec<Tick> {
    let values = nice_ticks(lo, hi, target);
    let step = if values.len() >= 2 {
        values[1] - values[0]
    } else {
        1.0
    };
    let decimals = decimals_for_step(step);
    values
        .into_iter()
        .map(|value| Tick {
            label: format!("{:.*}", decimals, value),
            value,
        })
        .collect()
}

fn decimals_for_step(step: f64) -> usize {
    if step <= 0.0 {
        return 0;
    }
    let exp = step.log10().floor();
    if exp >= 0.0 {
        0
    } else {
        (-exp) as usize
    }
}

fn nice_num(x: f64, round: bool) -> f64 {
    let exp = x.log10().floor();
    let base = 10f64.powf(exp);
    let frac = x / base;
    let nice = if round {
        if frac < 1.5 {
            1.0
        } else if frac < 3.0 {
            2.0
        } else if frac < 7.0 {
            5.0
        } else {
            10.0
        }
    } else if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * base
}

/// Estimated rendered width of `text` at `size`, using a fixed
/// per-character table (fractions of the font size) so layout does not
/// depend on installed fonts.
pub fn text_width(text: &str, size: f64) -> f64 {
    text.chars().map(|c| char_width(c) * size).sum()
}

fn char_width(c: char) -> f64 {
    match c {
        'i' | 'j' | 'l' | '.' | ',' | ':' | ';' | '\'' | '|' | '!' => 0.28,
        'f' | 't' | 'r' | 'I' | '(' | ')' | '[' | ']' | '-' | ' ' | '/' => 0.35,
        'm' | 'w' => 0.85,
        'M' | 'W' => 0.95,
        'A'..='Z' | '0'..='9' | '%' | '#' => 0.66,
        _ => 0.54,
    }
}
