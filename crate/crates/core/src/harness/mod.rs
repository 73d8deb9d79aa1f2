//! Scenario files, Monte Carlo engines and result output.

mod engine;
mod scenario;
mod suite;

pub use engine::{
    resolve_configs, run, run_psd, run_ser, scenario_channel, ser_csv, PsdOutcome, Resolved, ResultSet, SerLink,
    SerRow,
};
pub use scenario::{
    ChannelModel, Experiment, PsdSpan, Scenario, SeMode, DEFAULT_SEED, DESK_PSD_FRAMES, FULL_PSD_FRAMES, KEYS,
};
pub use suite::{builtin_families, builtin_manifest, check_unique, load_manifest, run_suite, SuiteOutcome};
