//! Experiment configuration, parameter sweeps and serialization.

mod config;
mod emit;
mod pipeline;

pub use config::{
    AnalysisConfig, DetectorOverride, DetectorsConfig, ExperimentConfig, FieldConfig, FilterConfig, Format,
    OutputConfig, SweepConfig, WindowConfig, WindowKind,
};
pub use emit::{emit, render, to_csv, to_json, write_text};
pub use pipeline::{amplitude_columns, column_names, run_pipeline, Record};
