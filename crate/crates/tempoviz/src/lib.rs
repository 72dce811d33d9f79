//! Bar-level tempo analysis and chart construction for recorded music
//! performances.
//!
//! The crate is layered: [`model`] holds the domain types, [`ingest`] reads
//! and writes them as CSV, [`density`] estimates tempo distributions,
//! [`stats`] summarizes sections, [`chart`] composes renderer-independent
//! scenes, and [`svg`] turns scenes into SVG documents.

pub mod chart;
pub mod density;
pub mod error;
pub mod ingest;
pub mod model;
pub mod scene;
pub mod stats;
pub mod svg;

pub use error::{Error, Result};
pub use model::{
    BarRecord, Color, RecordingMeta, Section, SectionMap, SummaryStats, TempoSeries, YearRange,
};
