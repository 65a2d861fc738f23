use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the designers. All values are relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Eigenvalues closer than `distinct · max|λ|` are treated as equal.
    pub distinct: f64,
    /// Entries below `zero · ‖v‖` count as zero in census checks.
    pub zero: f64,
    /// Singular values below `rank · σ_max` are dropped.
    pub rank: f64,
    /// Allowed stopband leakage relative to the largest response.
    pub annihilate: f64,
    /// Relative error that counts as perfect recovery.
    pub recovery: f64,
    /// Largest solver condition number accepted as reliable.
    pub cond_max: f64,
    /// Magnitudes closer than `tie · max|λ|` are ordered by argument.
    pub tie: f64,
    /// Bound on `‖S − VΛV⁻¹‖_F / ‖S‖_F`.
    pub reconstruction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            distinct: 1e-8,
            zero: 1e-8,
            rank: 1e-9,
            annihilate: 1e-8,
            recovery: 1e-6,
            cond_max: 1e8,
            tie: 1e-10,
            reconstruction: 1e-8,
        }
    }
}
