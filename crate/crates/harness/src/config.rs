//! Experiment configuration.
//!
//! ```json
//! {
//!   "experiment": "recovery_comparison",
//!   "graph": { "generator": "er", "n": 10, "p_range": [0.2, 0.4] },
//!   "k": 4,
//!   "trials": 1000,
//!   "seed": 7,
//!   "noise": { "model": "ConstantSnr", "sigma": 0.001 }
//! }
//! ```
//!
//! `trials` counts graphs for `recovery_comparison` and signal draws for
//! `insufficient_seeding`. `budget` is the seeding budget `P` of the recovery comparison
//! (default `K`); `budgets` lists the `P` values of the insufficient-seeding curves
//! (default `1..=K`).

use std::path::PathBuf;

use graphseed_core::{Scheme, ShiftChoice, Tolerances};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    RecoveryComparison,
    InsufficientSeeding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    /// Fixed `p`, or `p` uniform in `p_range` per graph.
    Er {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p_range: Option<[f64; 2]>,
        /// Redraw graphs that are not connected.
        #[serde(default)]
        connected: bool,
    },
    Cycle {
        n: usize,
    },
    Karate,
    File {
        path: PathBuf,
        #[serde(default)]
        directed: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub model: NoiseKind,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Every value gets variance `σ²‖s‖²`.
    ConstantSnr,
    /// Every value gets variance `σ²`.
    FixedPower,
    /// Value `s_i` gets variance `σ²|s_i|²`.
    PerValueSnr,
}

/// MN-MT layout of the recovery comparison: `nodes` seeding nodes, each injecting
/// `values` times at the last `values` instants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MnmtLayout {
    pub nodes: usize,
    pub values: usize,
}

impl Default for MnmtLayout {
    fn default() -> Self {
        Self { nodes: 2, values: 2 }
    }
}

fn default_schemes() -> Vec<Scheme> {
    Scheme::ALL.to_vec()
}

fn default_shift() -> ShiftChoice {
    ShiftChoice::Adjacency
}

fn default_threshold() -> f64 {
    1e-6
}

fn default_name() -> String {
    "experiment".into()
}

/// Which annihilating low-pass filter the reconstruction uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterChoice {
    /// Kernel design, falling back to the root product when the kernel is not one-dimensional.
    #[default]
    Auto,
    /// Minimal-length kernel of the stopband rows of `Ψ`.
    Kernel,
    /// `∏(z − λ)` over the distinct stopband eigenvalues.
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub experiment: ExperimentKind,
    pub graph: GraphSpec,
    #[serde(default = "default_shift")]
    pub shift: ShiftChoice,
    pub k: usize,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<usize>>,
    #[serde(default)]
    pub mnmt: MnmtLayout,
    #[serde(default)]
    pub filter: FilterChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Relative error below which a noiseless reconstruction counts as perfect.
    #[serde(default = "default_threshold")]
    pub recovery_threshold: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(self.trials >= 1, "trials must be at least 1");
        anyhow::ensure!(self.k >= 1, "k must be at least 1");
        anyhow::ensure!(!self.schemes.is_empty(), "no schemes selected");
        if let GraphSpec::Er { p, p_range, .. } = &self.graph {
            anyhow::ensure!(p.is_some() != p_range.is_some(), "er graphs take exactly one of p and p_range");
            if let Some([lo, hi]) = p_range {
                anyhow::ensure!(0.0 <= *lo && lo <= hi && *hi <= 1.0, "p_range must satisfy 0 <= lo <= hi <= 1");
            }
        }
        if let Some(n) = &self.noise {
            anyhow::ensure!(n.sigma > 0.0, "noise sigma must be positive");
        }
        anyhow::ensure!(self.mnmt.nodes >= 1 && self.mnmt.values >= 1, "empty MN-MT layout");
        Ok(())
    }
}
