//! Command-line front end: one subcommand per chart type, plus `stats`
//! for numeric summaries on standard output.
//!
//! Exit codes: 0 success, 1 invalid input or arguments, 2 I/O failure.
//! All diagnostics go to standard error; SVG output files are written
//! atomically (temp file in the target directory, then rename).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use tempoviz::chart::{
    auto_offsets, combination_chart, default_reference_lines, five_panel, histogram_chart,
    ridgeline, small_multiples, stacked_bars, tempograph, CombinationInputs, ComboRecording,
    FivePanelInputs, MAX_OVERLAID_SERIES, SECTION_PALETTE, SERIES_CYCLE,
};
use tempoviz::density::{gaussian_kde, spline_pdf, SplinePdfParams};
use tempoviz::ingest::{parse_metadata_csv, parse_section_csv, parse_timing_csv};
use tempoviz::model::{Color, RecordingMeta, SectionMap, TempoSeries, YearRange};
use tempoviz::scene::ChartScene;
use tempoviz::stats::{section_durations, summary_stats, SectionDurations};
use tempoviz::svg::render;

/// KDE evaluation grid in BPM, wide enough for slow introductions and
/// fast codas alike.
const KDE_GRID_MIN: f64 = 0.0;
const KDE_GRID_MAX: f64 = 265.0;
/// Vertical exaggeration of ridgeline densities.
const RIDGE_SCALE: f64 = 4.5;

const CHART_GUIDE: &str = "\
Choosing a chart:
  tempograph  tempo trajectory bar by bar; compare up to five recordings
  multiples   one mini tempo curve per recording, when overlays would crowd
  histogram   tempo distribution of a single recording with a smooth density
  ridgeline   stacked density curves across recordings, in date order
  stackedbar  how total duration divides across formal sections
  combo       per-recording mean/std against historical metronome marks
  panel       the five charts above combined into one figure
  stats       numeric summaries as CSV on standard output";

#[derive(Parser)]
#[command(
    name = "tempoviz",
    version,
    about = "Charts bar-level tempo measurements from recorded performances",
    after_help = CHART_GUIDE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Overlaid tempo curves, one per recording (at most five).
    Tempograph {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grid of small per-recording tempo curves sharing both axes.
    Multiples {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tempo histogram of one recording with its smoothed density curve.
    Histogram {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        spline: SplineArgs,
    },
    /// Vertically offset density curves, oldest recording on top.
    Ridgeline {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        kde: KdeArgs,
        /// Number of KDE evaluation points.
        #[arg(long, default_value_t = 800)]
        grid_points: usize,
    },
    /// Section durations per recording, stacked into one bar each.
    Stackedbar {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Normalize each bar to 100% instead of seconds.
        #[arg(long)]
        percent: bool,
    },
    /// Mean-tempo bars and std-dev markers against metronome reference lines.
    Combo {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Restrict the statistics to one named section (e.g. Allegro).
        #[arg(long)]
        section: Option<String>,
    },
    /// All five charts composed into a single lettered figure.
    Panel {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        spline: SplineArgs,
        #[command(flatten)]
        kde: KdeArgs,
        /// Number of KDE evaluation points.
        #[arg(long, default_value_t = 800)]
        kde_grid_points: usize,
        /// Restrict the combination-chart statistics to one named section.
        #[arg(long)]
        section: Option<String>,
    },
    /// Print per-recording (and per-section) summaries as CSV.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Only report the named section.
        #[arg(long)]
        section: Option<String>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Bar timing CSV (cumulative-timestamp or per-bar BPM schema).
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Formal section boundaries CSV (name,start_bar,end_bar).
    #[arg(long, value_name = "PATH")]
    sections: Option<PathBuf>,
    /// Recording metadata CSV (labels, years, colors).
    #[arg(long, value_name = "PATH")]
    meta: Option<PathBuf>,
    /// Comma-separated recording ids to include (default: all).
    #[arg(long, value_delimiter = ',', value_name = "ID,..")]
    ids: Option<Vec<String>>,
    /// Seed for the jitter applied before density binning; charts without
    /// a jitter step ignore it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutArgs {
    /// Output SVG path, written atomically.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct SplineArgs {
    /// Histogram bin count feeding the spline-smoothed density.
    #[arg(long, default_value_t = 28)]
    bins: usize,
    /// Number of density evaluation points.
    #[arg(long, default_value_t = 400)]
    grid_points: usize,
    /// Offset of the CDF boundary knots beyond the data range, in BPM.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Half-width of the uniform jitter applied before binning, in BPM.
    #[arg(long, default_value_t = 0.5)]
    jitter: f64,
}

#[derive(Args)]
struct KdeArgs {
    /// KDE bandwidth as a fraction of the sample standard deviation.
    #[arg(long, default_value_t = 0.07)]
    bandwidth: f64,
}

enum CliError {
    /// Bad arguments or bad data: exit code 1.
    Validation(String),
    /// Failed reads or writes: exit code 2.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<tempoviz::Error> for CliError {
    fn from(e: tempoviz::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Parse `argv` (including the program name) and run the selected
/// subcommand, returning the process exit code.
pub fn run(argv: &[String]) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::from_default_env().try_init();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Tempograph { input, out } => {
            let loaded = load(&input)?;
            if loaded.series.len() > MAX_OVERLAID_SERIES {
                return Err(CliError::Validation(format!(
                    "tempograph overlays at most {MAX_OVERLAID_SERIES} recordings (got {}); \
                     use the `multiples` subcommand for a small-multiples grid",
                    loaded.series.len()
                )));
            }
            let scene = tempograph(&loaded.series, loaded.map.as_ref(), &loaded.meta)?;
            write_svg(&out.out, &scene)
        }
        Command::Multiples { input, out } => {
            let loaded = load(&input)?;
            let scene = small_multiples(&loaded.series, &loaded.meta)?;
            write_svg(&out.out, &scene)
        }
        Command::Histogram { input, out, spline } => {
            let loaded = load(&input)?;
            let series = single_recording(&loaded)?;
            let (hist, pdf) = spline_pdf(&bpms(series), &spline_params(&spline, input.seed))?;
            let stats = summary_stats(series, None)?;
            let meta = &loaded.meta[0];
            let scene = histogram_chart(&hist, &pdf, &stats, meta)?;
            write_svg(&out.out, &scene)
        }
        Command::Ridgeline {
            input,
            out,
            kde,
            grid_points,
        } => {
            let loaded = load(&input)?;
            let mut kdes = Vec::with_capacity(loaded.series.len());
            let mut means = Vec::with_capacity(loaded.series.len());
            for series in &loaded.series {
                kdes.push(gaussian_kde(
                    &bpms(series),
                    kde.bandwidth,
                    KDE_GRID_MIN,
                    KDE_GRID_MAX,
                    grid_points,
                )?);
                means.push(summary_stats(series, None)?.mean_bpm);
            }
            let offsets = auto_offsets(&kdes, RIDGE_SCALE);
            let scene = ridgeline(&kdes, &offsets, RIDGE_SCALE, &loaded.meta, &means)?;
            write_svg(&out.out, &scene)
        }
        Command::Stackedbar {
            input,
            out,
            percent,
        } => {
            let loaded = load(&input)?;
            let durations = durations_for(&loaded)?;
            let scene = stacked_bars(&durations, &SECTION_PALETTE, percent, &loaded.meta)?;
            write_svg(&out.out, &scene)
        }
        Command::Combo {
            input,
            out,
            section,
        } => {
            let loaded = load(&input)?;
            let combo = combo_inputs(&loaded, section.as_deref())?;
            let scene = combination_chart(&combo)?;
            write_svg(&out.out, &scene)
        }
        Command::Panel {
            input,
            out,
            spline,
            kde,
            kde_grid_points,
            section,
        } => {
            let loaded = load(&input)?;
            let params = spline_params(&spline, input.seed);
            let mut histograms = Vec::with_capacity(loaded.series.len());
            let mut kdes = Vec::with_capacity(loaded.series.len());
            let mut means = Vec::with_capacity(loaded.series.len());
            for series in &loaded.series {
                let values = bpms(series);
                let (hist, pdf) = spline_pdf(&values, &params)?;
                let stats = summary_stats(series, None)?;
                means.push(stats.mean_bpm);
                histograms.push((hist, pdf, stats));
                kdes.push(gaussian_kde(
                    &values,
                    kde.bandwidth,
                    KDE_GRID_MIN,
                    KDE_GRID_MAX,
                    kde_grid_points,
                )?);
            }
            let offsets = auto_offsets(&kdes, RIDGE_SCALE);
            let durations = if loaded.map.is_some() {
                durations_for(&loaded)?
            } else {
                Vec::new()
            };
            let combo = combo_inputs(&loaded, section.as_deref())?;
            let scene = five_panel(&FivePanelInputs {
                series: loaded.series.clone(),
                map: loaded.map.clone(),
                meta: loaded.meta.clone(),
                histograms,
                kdes,
                offsets,
                kde_scale: RIDGE_SCALE,
                means,
                durations,
                combo,
            })?;
            write_svg(&out.out, &scene)
        }
        Command::Stats { input, section } => {
            let loaded = load(&input)?;
            let csv = stats_csv(&loaded, section.as_deref())?;
            print!("{csv}");
            Ok(())
        }
    }
}

/// Parsed and filtered inputs, recordings in chronological order
/// (metadata year ascending, ties by recording id), with one synthesized
/// metadata entry per recording that lacks one.
struct Loaded {
    series: Vec<TempoSeries>,
    map: Option<SectionMap>,
    meta: Vec<RecordingMeta>,
}

fn load(input: &InputArgs) -> Result<Loaded, CliError> {
    let timing = read_file(&input.input)?;
    let mut series = parse_timing_csv(&timing)?;

    if let Some(ids) = &input.ids {
        let known: Vec<&str> = series.iter().map(|s| s.recording_id.as_str()).collect();
        for id in ids {
            if !known.contains(&id.as_str()) {
                return Err(CliError::Validation(format!(
                    "unknown recording id '{id}' (available: {})",
                    known.join(", ")
                )));
            }
        }
        series.retain(|s| ids.iter().any(|id| id == &s.recording_id));
    }
    if series.is_empty() {
        return Err(CliError::Validation(
            "no recordings left after filtering".to_string(),
        ));
    }

    let map = match &input.sections {
        Some(path) => Some(parse_section_csv(&read_file(path)?)?),
        None => None,
    };
    let parsed_meta = match &input.meta {
        Some(path) => parse_metadata_csv(&read_file(path)?)?,
        None => Vec::new(),
    };

    let mut meta: Vec<RecordingMeta> = series
        .iter()
        .map(|s| {
            parsed_meta
                .iter()
                .find(|m| m.recording_id == s.recording_id)
                .cloned()
                .unwrap_or_else(|| RecordingMeta {
                    recording_id: s.recording_id.clone(),
                    label: s.recording_id.clone(),
                    year: YearRange::single(0),
                    color: None,
                })
        })
        .collect();

    let mut order: Vec<usize> = (0..series.len()).collect();
    order.sort_by(|&a, &b| {
        (meta[a].year.start, &series[a].recording_id)
            .cmp(&(meta[b].year.start, &series[b].recording_id))
    });
    let series = order.iter().map(|&i| series[i].clone()).collect();
    meta = order.iter().map(|&i| meta[i].clone()).collect();

    Ok(Loaded { series, map, meta })
}

fn bpms(series: &TempoSeries) -> Vec<f64> {
    series.bars.iter().map(|b| b.bpm).collect()
}

fn spline_params(spline: &SplineArgs, seed: u64) -> SplinePdfParams {
    SplinePdfParams {
        n_bins: spline.bins,
        grid_points: spline.grid_points,
        epsilon: spline.epsilon,
        jitter_amplitude: spline.jitter,
        seed,
    }
}

fn single_recording(loaded: &Loaded) -> Result<&TempoSeries, CliError> {
    if loaded.series.len() != 1 {
        let ids: Vec<&str> = loaded
            .series
            .iter()
            .map(|s| s.recording_id.as_str())
            .collect();
        return Err(CliError::Validation(format!(
            "histogram charts one recording at a time ({} loaded); \
             pick one with --ids (available: {})",
            loaded.series.len(),
            ids.join(", ")
        )));
    }
    Ok(&loaded.series[0])
}

/// Per-recording section durations; without a section file each recording
/// becomes a single whole-movement segment.
fn durations_for(loaded: &Loaded) -> Result<Vec<SectionDurations>, CliError> {
    loaded
        .series
        .iter()
        .map(|s| {
            let owned;
            let map = match &loaded.map {
                Some(m) => m,
                None => {
                    owned = SectionMap::single("All", s.last_bar())?;
                    &owned
                }
            };
            Ok(section_durations(s, map)?)
        })
        .collect()
}

fn section_range(loaded: &Loaded, name: &str) -> Result<(u32, u32), CliError> {
    let map = loaded.map.as_ref().ok_or_else(|| {
        CliError::Validation("--section requires a section file (--sections)".to_string())
    })?;
    match map.find(name) {
        Some(section) => Ok((section.start_bar, section.end_bar)),
        None => {
            let names: Vec<&str> = map.sections().iter().map(|s| s.name.as_str()).collect();
            Err(CliError::Validation(format!(
                "no section named '{name}' (available: {})",
                names.join(", ")
            )))
        }
    }
}

fn combo_inputs(loaded: &Loaded, section: Option<&str>) -> Result<CombinationInputs, CliError> {
    let range = match section {
        Some(name) => Some(section_range(loaded, name)?),
        None => None,
    };
    let recordings = loaded
        .series
        .iter()
        .zip(&loaded.meta)
        .enumerate()
        .map(|(i, (series, meta))| {
            let stats = summary_stats(series, range)?;
            let bar_color = meta
                .color
                .unwrap_or(SERIES_CYCLE[i % SERIES_CYCLE.len()]);
            Ok(ComboRecording {
                label: meta.label.clone(),
                mean_bpm: stats.mean_bpm,
                std_bpm: stats.std_bpm,
                bar_color,
                edge_color: darken(bar_color),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(CombinationInputs {
        recordings,
        reference_lines: default_reference_lines(),
    })
}

fn darken(c: Color) -> Color {
    Color::rgb(
        (f64::from(c.r) * 0.6) as u8,
        (f64::from(c.g) * 0.6) as u8,
        (f64::from(c.b) * 0.6) as u8,
    )
}

/// One row per recording and section: full-movement rows use section
/// name "all"; `filter` keeps only the named section.
fn stats_csv(loaded: &Loaded, filter: Option<&str>) -> Result<String, CliError> {
    if let Some(name) = filter {
        section_range(loaded, name)?;
    }
    let mut out = String::new();
    out.push_str("recording_id,label,section,n_bars,mean_bpm,std_bpm,duration_s\n");
    for (series, meta) in loaded.series.iter().zip(&loaded.meta) {
        if filter.is_none() {
            let stats = summary_stats(series, None)?;
            push_stats_row(&mut out, series, meta, "all", &stats);
        }
        if let Some(map) = &loaded.map {
            for section in map.sections() {
                if let Some(name) = filter {
                    if section.name != name {
                        continue;
                    }
                }
                let stats = summary_stats(series, Some((section.start_bar, section.end_bar)))?;
                push_stats_row(&mut out, series, meta, &section.name, &stats);
            }
        }
    }
    Ok(out)
}

fn push_stats_row(
    out: &mut String,
    series: &TempoSeries,
    meta: &RecordingMeta,
    section: &str,
    stats: &tempoviz::model::SummaryStats,
) {
    let _ = writeln!(
        out,
        "{},{},{},{},{:.4},{:.4},{:.3}",
        csv_field(&series.recording_id),
        csv_field(&meta.label),
        csv_field(section),
        stats.n_bars,
        stats.mean_bpm,
        stats.std_bpm,
        stats.total_duration_s
    );
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_svg(path: &Path, scene: &ChartScene) -> Result<(), CliError> {
    let doc = render(
        scene,
        scene.width.round() as u32,
        scene.height.round() as u32,
    );
    write_atomic(path, doc.text.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(&e))?;
    tmp.write_all(bytes).map_err(|e| io_err(&e))?;
    tmp.persist(path).map_err(|e| io_err(&e))?;
    Ok(())
}
