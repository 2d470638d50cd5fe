//! Waveforms, per-ping time-series synthesis and pulse compression.

mod delay;
mod matched;
mod record;
mod synthesize;
mod waveform;

pub use matched::matched_filter;
pub use record::{PingRecord, Series};
pub use synthesize::{
    field_seed, ping_seed, record_window, simulate_survey, simulate_survey_with, survey_field,
    synthesize_ping, Arrival, Components, RecordWindow, Synthesizer,
};
pub use waveform::{make_waveform, Waveform, WaveformConfig};
