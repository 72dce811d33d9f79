//! CSV ingestion: timing data, section boundaries, and recording metadata.
//!
//! Timing files come in two schemas, detected from the header and never
//! guessed from values:
//!
//! * schema A `recording_id,bar_index,n_beats,timestamp_ms`: cumulative
//!   lap-timer readings in milliseconds taken at the END of each bar. An
//!   optional anchor row with `bar_index` 0 gives the timer reading at the
//!   start of bar 1 (defaults to 0). `n_beats` is ignored on the anchor row.
//! * schema B `recording_id,bar_index,n_beats,bpm`: bar tempi directly.
//!
//! Rows may appear in any order; the parser sorts by (recording_id,
//! bar_index) before validating. Validation itself is strict: any series
//! invariant violation is a parse error.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{BarRecord, Color, RecordingMeta, Section, SectionMap, TempoSeries, YearRange};

const TIMING_HEADER_A: [&str; 4] = ["recording_id", "bar_index", "n_beats", "timestamp_ms"];
const TIMING_HEADER_B: [&str; 4] = ["recording_id", "bar_index", "n_beats", "bpm"];
const SECTION_HEADER: [&str; 3] = ["name", "start_bar", "end_bar"];
const META_HEADER: [&str; 4] = ["recording_id", "label", "year", "color"];

/// Bar tempo from beat count and measured duration: beats x 60 / seconds.
pub fn bpm_from_bar(n_beats: u32, duration_s: f64) -> Result<f64> {
    if !duration_s.is_finite() || duration_s <= 0.0 {
        return Err(Error::invalid(format!(
            "duration must be positive and finite (got {duration_s})"
        )));
    }
    Ok(n_beats as f64 * 60.0 / duration_s)
}

/// Bar duration from beat count and tempo: 60 x beats / bpm. Inverse of
/// [`bpm_from_bar`].
pub fn duration_from_bpm(n_beats: u32, bpm: f64) -> Result<f64> {
    if !bpm.is_finite() || bpm <= 0.0 {
        return Err(Error::invalid(format!("bpm must be positive and finite (got {bpm})")));
    }
    Ok(60.0 * n_beats as f64 / bpm)
}

/// Convert cumulative end-of-bar timestamps to per-bar durations in seconds.
///
/// `start_ms` is the timer reading at the start of the first bar. Reported
/// row numbers are 1-based positions within `timestamps_ms`.
pub fn cumulative_to_durations(timestamps_ms: &[u64], start_ms: u64) -> Result<Vec<f64>> {
    let mut prev = start_ms;
    let mut durations = Vec::with_capacity(timestamps_ms.len());
    for (i, &t) in timestamps_ms.iter().enumerate() {
        if t <= prev {
            return Err(Error::parse(
                i + 1,
                format!("timestamp {t} ms does not increase past {prev} ms"),
            ));
        }
        durations.push((t - prev) as f64 / 1000.0);
        prev = t;
    }
    Ok(durations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TimingSchema {
    Timestamps,
    Bpm,
}

/// One parsed timing row before series assembly. `value` is the fourth
/// column: timestamp_ms in schema A, bpm in schema B.
struct RawTimingRow {
    line: usize,
    bar_index: u32,
    n_beats: u32,
    value: f64,
}

/// Parse a timing CSV into one [`TempoSeries`] per recording, sorted by
/// recording id.
pub fn parse_timing_csv(content: &str) -> Result<Vec<TempoSeries>> {
    let mut reader = csv_reader(content);
    let header = read_header(&mut reader)?;
    let schema = if header == TIMING_HEADER_A {
        TimingSchema::Timestamps
    } else if header == TIMING_HEADER_B {
        TimingSchema::Bpm
    } else {
        return Err(Error::parse(
            1,
            format!(
                "unknown timing header '{}'; expected '{}' or '{}'",
                header.join(","),
                TIMING_HEADER_A.join(","),
                TIMING_HEADER_B.join(",")
            ),
        ));
    };

    let mut groups: BTreeMap<String, Vec<RawTimingRow>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record_line(&record);
        expect_fields(&record, 4, line)?;
        let id = record[0].trim();
        if id.is_empty() {
            return Err(Error::parse(line, "empty recording_id"));
        }
        let bar_index: u32 = parse_field(&record[1], "bar_index", line)?;
        let n_beats: u32 = parse_field(&record[2], "n_beats", line)?;
        let value: f64 = match schema {
            TimingSchema::Timestamps => parse_field::<u64>(&record[3], "timestamp_ms", line)? as f64,
            TimingSchema::Bpm => parse_field(&record[3], "bpm", line)?,
        };
        if bar_index == 0 && schema == TimingSchema::Bpm {
            return Err(Error::parse(line, "bar_index must be >= 1"));
        }
        groups.entry(id.to_string()).or_default().push(RawTimingRow {
            line,
            bar_index,
            n_beats,
            value,
        });
    }
    if groups.is_empty() {
        return Err(Error::parse(1, "timing file contains no data rows"));
    }

    let mut out = Vec::with_capacity(groups.len());
    for (id, mut rows) in groups {
        rows.sort_by_key(|r| r.bar_index);
        for pair in rows.windows(2) {
            if pair[0].bar_index == pair[1].bar_index {
                return Err(Error::parse(
                    pair[1].line,
                    format!("recording '{id}': duplicate bar_index {}", pair[1].bar_index),
                ));
            }
        }
        let series = match schema {
            TimingSchema::Timestamps => assemble_from_timestamps(&id, &rows)?,
            TimingSchema::Bpm => assemble_from_bpm(&id, &rows)?,
        };
        let violations = series.validate();
        if !violations.is_empty() {
            return Err(Error::parse(rows[0].line, violations.join("; ")));
        }
        out.push(series);
    }
    Ok(out)
}

fn assemble_from_timestamps(id: &str, rows: &[RawTimingRow]) -> Result<TempoSeries> {
    // An optional bar-0 row anchors the timer at the start of bar 1.
    let (start_ms, bars) = match rows.first() {
        Some(first) if first.bar_index == 0 => (first.value as u64, &rows[1..]),
        _ => (0, rows),
    };
    if bars.is_empty() {
        return Err(Error::parse(
            rows[0].line,
            format!("recording '{id}': only a start_ms anchor row, no bars"),
        ));
    }
    let timestamps: Vec<u64> = bars.iter().map(|r| r.value as u64).collect();
    let durations = cumulative_to_durations(&timestamps, start_ms).map_err(|e| match e {
        // Re-key the positional row number to the source file line.
        Error::Parse { row, message } => Error::parse(
            bars[row - 1].line,
            format!("recording '{id}': {message}"),
        ),
        other => other,
    })?;
    let records = bars
        .iter()
        .zip(durations)
        .map(|(row, duration_s)| {
            BarRecord::from_duration(row.bar_index, row.n_beats, duration_s)
                .map_err(|e| Error::parse(row.line, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TempoSeries::new(id, records))
}

fn assemble_from_bpm(id: &str, rows: &[RawTimingRow]) -> Result<TempoSeries> {
    let records = rows
        .iter()
        .map(|row| {
            BarRecord::from_bpm(row.bar_index, row.n_beats, row.value)
                .map_err(|e| Error::parse(row.line, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TempoSeries::new(id, records))
}

/// Serialize series back to a schema B timing CSV, one row per bar, with
/// BPM at 9 significant digits.
pub fn write_timing_csv(series: &[TempoSeries]) -> String {
    let mut out = String::from("recording_id,bar_index,n_beats,bpm\n");
    for s in series {
        for bar in &s.bars {
            out.push_str(&format!(
                "{},{},{},{}\n",
                s.recording_id,
                bar.bar_index,
                bar.n_beats,
                format_sig(bar.bpm, 9)
            ));
        }
    }
    out
}

/// Format with `digits` significant digits, plain decimal notation.
fn format_sig(v: f64, digits: i32) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parse a section CSV (`name,start_bar,end_bar`) into a validated map.
pub fn parse_section_csv(content: &str) -> Result<SectionMap> {
    let mut reader = csv_reader(content);
    let header = read_header(&mut reader)?;
    if header != SECTION_HEADER {
        return Err(Error::parse(
            1,
            format!(
                "unknown section header '{}'; expected '{}'",
                header.join(","),
                SECTION_HEADER.join(",")
            ),
        ));
    }
    let mut sections = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record_line(&record);
        expect_fields(&record, 3, line)?;
        let name = record[0].trim().to_string();
        if name.is_empty() {
            return Err(Error::parse(line, "empty section name"));
        }
        let start_bar: u32 = parse_field(&record[1], "start_bar", line)?;
        let end_bar: u32 = parse_field(&record[2], "end_bar", line)?;
        sections.push(Section { name, start_bar, end_bar });
    }
    SectionMap::new(sections).map_err(|e| Error::parse(1, e.to_string()))
}

/// Parse a metadata CSV (`recording_id,label,year,color`; the color column
/// may be absent or empty). Recording ids must be unique.
pub fn parse_metadata_csv(content: &str) -> Result<Vec<RecordingMeta>> {
    let mut reader = csv_reader(content);
    let header = read_header(&mut reader)?;
    let has_color = if header == META_HEADER {
        true
    } else if header == META_HEADER[..3] {
        false
    } else {
        return Err(Error::parse(
            1,
            format!(
                "unknown metadata header '{}'; expected '{}'",
                header.join(","),
                META_HEADER.join(",")
            ),
        ));
    };
    let mut out: Vec<RecordingMeta> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record_line(&record);
        expect_fields(&record, if has_color { 4 } else { 3 }, line)?;
        let id = record[0].trim().to_string();
        if id.is_empty() {
            return Err(Error::parse(line, "empty recording_id"));
        }
        if out.iter().any(|m| m.recording_id == id) {
            return Err(Error::parse(line, format!("duplicate recording_id '{id}'")));
        }
        let label = record[1].trim().to_string();
        let year = parse_year(record[2].trim())
            .ok_or_else(|| Error::parse(line, format!("bad year '{}'", &record[2])))?;
        let color = if has_color && !record[3].trim().is_empty() {
            Some(Color::from_hex(record[3].trim()).map_err(|e| Error::parse(line, e.to_string()))?)
        } else {
            None
        };
        out.push(RecordingMeta {
            recording_id: id,
            label,
            year,
            color,
        });
    }
    Ok(out)
}

/// Accepts `1993`, `1930-1939`, or the short form `1930-39`.
fn parse_year(s: &str) -> Option<YearRange> {
    match s.split_once('-') {
        None => s.parse().ok().map(YearRange::single),
        Some((a, b)) => {
            let start: i32 = a.trim().parse().ok()?;
            let b = b.trim();
            let end: i32 = if b.len() < a.trim().len() {
                // Short suffix borrows the century from the start year.
                let scale = 10_i32.pow(b.len() as u32);
                (start / scale) * scale + b.parse::<i32>().ok()?
            } else {
                b.parse().ok()?
            };
            (end >= start).then_some(YearRange { start, end: Some(end) })
        }
    }
}

fn csv_reader(content: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(content.as_bytes())
}

fn read_header(reader: &mut csv::Reader<&[u8]>) -> Result<Vec<String>> {
    let header = reader.headers().map_err(csv_error)?;
    Ok(header.iter().map(|f| f.trim().to_string()).collect())
}

fn record_line(record: &csv::StringRecord) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(0)
}

fn expect_fields(record: &csv::StringRecord, n: usize, line: usize) -> Result<()> {
    if record.len() != n {
        return Err(Error::parse(
            line,
            format!("expected {n} fields, found {}", record.len()),
        ));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(raw: &str, name: &str, line: usize) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {name} '{raw}'")))
}

fn csv_error(e: csv::Error) -> Error {
    let row = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or_default();
    Error::parse(row, e.to_string())
}
