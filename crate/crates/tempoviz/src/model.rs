//! Shared domain types for bar-level tempo data.
//!
//! All types here are plain immutable values: no I/O, no rendering. A bar is
//! the unit of measurement throughout; bar indices are 1-based, matching
//! score convention.

use crate::error::{Error, Result};

/// Relative tolerance for the `bpm * duration == beats * 60` consistency check.
pub const BPM_CONSISTENCY_REL_TOL: f64 = 1e-9;

/// One measured bar: beat count, duration, and the tempo implied by them.
#[derive(Debug, Clone, PartialEq)]
pub struct BarRecord {
    /// 1-based position in the score.
    pub bar_index: u32,
    /// Beats notated in this bar.
    pub n_beats: u32,
    /// Measured duration in seconds.
    pub duration_s: f64,
    /// Tempo in beats per minute.
    pub bpm: f64,
}

impl BarRecord {
    /// Build a record from a measured duration, deriving the BPM.
    pub fn from_duration(bar_index: u32, n_beats: u32, duration_s: f64) -> Result<Self> {
        if bar_index == 0 {
            return Err(Error::invalid("bar_index must be >= 1"));
        }
        if n_beats == 0 {
            return Err(Error::invalid(format!("bar {bar_index}: n_beats must be >= 1")));
        }
        if !duration_s.is_finite() || duration_s <= 0.0 {
            return Err(Error::invalid(format!(
                "bar {bar_index}: duration must be positive and finite (got {duration_s})"
            )));
        }
        Ok(BarRecord {
            bar_index,
            n_beats,
            duration_s,
            bpm: n_beats as f64 * 60.0 / duration_s,
        })
    }

    /// Build a record from a known BPM, deriving the duration.
    pub fn from_bpm(bar_index: u32, n_beats: u32, bpm: f64) -> Result<Self> {
        if bar_index == 0 {
            return Err(Error::invalid("bar_index must be >= 1"));
        }
        if n_beats == 0 {
            return Err(Error::invalid(format!("bar {bar_index}: n_beats must be >= 1")));
        }
        if !bpm.is_finite() || bpm <= 0.0 {
            return Err(Error::invalid(format!(
                "bar {bar_index}: bpm must be positive and finite (got {bpm})"
            )));
        }
        Ok(BarRecord {
            bar_index,
            n_beats,
            duration_s: 60.0 * n_beats as f64 / bpm,
            bpm,
        })
    }

    /// Whether the stored bpm agrees with (n_beats, duration_s).
    pub fn is_consistent(&self) -> bool {
        let expected = self.n_beats as f64 * 60.0;
        let actual = self.bpm * self.duration_s;
        (actual - expected).abs() <= BPM_CONSISTENCY_REL_TOL * expected.abs()
    }
}

/// The ordered bar records of one recording.
#[derive(Debug, Clone, PartialEq)]
pub struct TempoSeries {
    pub recording_id: String,
    pub bars: Vec<BarRecord>,
}

impl TempoSeries {
    pub fn new(recording_id: impl Into<String>, bars: Vec<BarRecord>) -> Self {
        TempoSeries {
            recording_id: recording_id.into(),
            bars,
        }
    }

    /// Check every series and bar invariant, returning one description per
    /// violation. An empty list means the series is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if self.bars.is_empty() {
            violations.push(format!("recording '{}': series is empty", self.recording_id));
            return violations;
        }
        if self.bars[0].bar_index != 1 {
            violations.push(format!(
                "recording '{}': first bar_index is {}, expected 1",
                self.recording_id, self.bars[0].bar_index
            ));
        }
        for pair in self.bars.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if b.bar_index != a.bar_index + 1 {
                violations.push(format!(
                    "recording '{}': bar indices not contiguous: {} follows {}",
                    self.recording_id, b.bar_index, a.bar_index
                ));
            }
        }
        for bar in &self.bars {
            if bar.n_beats == 0 {
                violations.push(format!(
                    "recording '{}': bar {}: n_beats must be >= 1",
                    self.recording_id, bar.bar_index
                ));
            }
            if !bar.duration_s.is_finite() || bar.duration_s <= 0.0 {
                violations.push(format!(
                    "recording '{}': bar {}: duration must be positive and finite (got {})",
                    self.recording_id, bar.bar_index, bar.duration_s
                ));
            }
            if !bar.is_consistent() {
                violations.push(format!(
                    "recording '{}': bar {}: bpm {} inconsistent with {} beats over {} s",
                    self.recording_id, bar.bar_index, bar.bpm, bar.n_beats, bar.duration_s
                ));
            }
        }
        violations
    }

    pub fn first_bar(&self) -> u32 {
        self.bars.first().map(|b| b.bar_index).unwrap_or(0)
    }

    pub fn last_bar(&self) -> u32 {
        self.bars.last().map(|b| b.bar_index).unwrap_or(0)
    }

    /// The bar-level BPM values in score order.
    pub fn bpm_values(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.bpm).collect()
    }

    pub fn total_duration_s(&self) -> f64 {
        self.bars.iter().map(|b| b.duration_s).sum()
    }
}

/// Recording year, possibly a range such as 1930-39.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct YearRange {
    pub start: i32,
    pub end: Option<i32>,
}

impl YearRange {
    pub fn single(year: i32) -> Self {
        YearRange { start: year, end: None }
    }
}

impl std::fmt::Display for YearRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.end {
            Some(end) => write!(f, "{}-{}", self.start, end),
            None => write!(f, "{}", self.start),
        }
    }
}

/// Display metadata for one recording.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordingMeta {
    pub recording_id: String,
    pub label: String,
    pub year: YearRange,
    pub color: Option<Color>,
}

/// An sRGB color, parsed from and serialized to `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Color {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Color {
    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Color { r, g, b }
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let hex = s.strip_prefix('#').ok_or_else(|| {
            Error::invalid(format!("color '{s}' must be of the form #RRGGBB"))
        })?;
        if hex.len() != 6 || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::invalid(format!("color '{s}' must be of the form #RRGGBB")));
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).unwrap();
        Ok(Color::rgb(byte(0), byte(2), byte(4)))
    }

    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.hex())
    }
}

/// One named formal division of the score, by inclusive bar range.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub start_bar: u32,
    pub end_bar: u32,
}

/// Ordered, contiguous formal divisions starting at bar 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionMap {
    sections: Vec<Section>,
}

impl SectionMap {
    /// Validate ordering and contiguity. The first section must start at
    /// bar 1 and each section must start where the previous one ended.
    pub fn new(sections: Vec<Section>) -> Result<Self> {
        if sections.is_empty() {
            return Err(Error::invalid("section map must contain at least one section"));
        }
        if sections[0].start_bar != 1 {
            return Err(Error::invalid(format!(
                "section '{}' starts at bar {}, expected 1",
                sections[0].name, sections[0].start_bar
            )));
        }
        for section in &sections {
            if section.end_bar < section.start_bar {
                return Err(Error::invalid(format!(
                    "section '{}' ends at bar {} before it starts at bar {}",
                    section.name, section.end_bar, section.start_bar
                )));
            }
        }
        for pair in sections.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let expected = a.end_bar + 1;
            if b.start_bar != expected {
                let kind = if b.start_bar > expected { "gap" } else { "overlap" };
                return Err(Error::invalid(format!(
                    "{kind} between section '{}' (ends bar {}) and section '{}' (starts bar {})",
                    a.name, a.end_bar, b.name, b.start_bar
                )));
            }
        }
        Ok(SectionMap { sections })
    }

    /// Degenerate single-section map covering bars 1..=last_bar.
    pub fn single(name: impl Into<String>, last_bar: u32) -> Result<Self> {
        SectionMap::new(vec![Section {
            name: name.into(),
            start_bar: 1,
            end_bar: last_bar,
        }])
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn first_bar(&self) -> u32 {
        self.sections[0].start_bar
    }

    pub fn last_bar(&self) -> u32 {
        self.sections.last().unwrap().end_bar
    }

    pub fn find(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// The section containing `bar`, if the map covers it.
    pub fn section_for_bar(&self, bar: u32) -> Option<&Section> {
        self.sections
            .iter()
            .find(|s| s.start_bar <= bar && bar <= s.end_bar)
    }
}

/// Mean/spread summary of bar-level BPM over some selection of bars.
///
/// The mean is the unweighted mean over bars (each bar one vote, not
/// time-weighted) and the standard deviation is the population form
/// (divide by N). Both conventions are fixed for reproducibility.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub mean_bpm: f64,
    pub std_bpm: f64,
    pub n_bars: usize,
    pub total_duration_s: f64,
}
