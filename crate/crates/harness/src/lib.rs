//! Graph generators, the karate-club dataset, Monte-Carlo experiments and the
//! `graphseed` command line.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod generators;
pub mod io;
pub mod signals;

pub use config::{ExperimentConfig, ExperimentKind, FilterChoice, GraphSpec, MnmtLayout, NoiseKind, NoiseSpec};
pub use experiment::{
    lowpass_filter, perturb, run_experiment, run_insufficient_seeding, run_recovery_comparison, write_outputs,
    CurvePoint, ExperimentSummary, SchemeSummary, TrialRecord,
};
pub use generators::{gen_cycle, gen_er, is_connected, karate};
pub use signals::{random_bandlimited, SpectrumLaw};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `stream` of the master seed; trial `i` always sees the same draws
/// regardless of scheduling.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
