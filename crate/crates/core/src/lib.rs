//! Reconstruction of bandlimited graph signals by seeding sparse injections that
//! percolate through the graph, followed by an annihilating graph filter.
//!
//! Every numerical type is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); arithmetic is complex throughout. The `*64` aliases at the crate
//! root fix the scalar to `f64`, which is what the experiments use.
//!
//! ```
//! use graphseed_core::*;
//!
//! let g = Graph::new(8, (0..8).map(|i| (i, (i + 1) % 8, 1.0)).collect(), true).unwrap();
//! let shift: Shift64 = build_shift(&g, ShiftChoice::Adjacency, None).unwrap();
//! let basis = decompose(&shift, &Tolerances::default()).unwrap();
//! let y_hat = vec![Complex64::new(1.0, 0.0); 4];
//! let pattern = SelectionPattern::mnst(&[0, 2, 4, 6]);
//! let plan = exact_plan(&basis, 4, Scheme::MnSt, &pattern, &y_hat).unwrap();
//! let y = igft(&basis, &FrequencySignal { coeffs: [y_hat, vec![Complex64::new(0.0, 0.0); 4]].concat(), bandwidth: Some(4) }).unwrap();
//! let report = reconstruct(&shift, &basis, &plan, &y).unwrap();
//! assert!(report.relative_error < 1e-10);
//! ```

pub mod error;
pub mod filters;
pub mod imperfect;
pub mod linalg;
pub mod scalar;
pub mod seeding;
pub mod spectral;
pub mod tolerances;

pub use num_complex::{Complex32, Complex64};

pub use error::{Error, Result};
pub use filters::{
    apply_diffusion_rate_filter, apply_filter_polynomial, apply_product_stages, design_annihilating_product,
    design_from_response, design_lowpass_kernel, diffusion_rates_from_roots, expand_roots, kernel_basis, DesignMode,
    FilterDesign,
};
pub use imperfect::{
    binomial, constant_snr_objective, error_covariance, for_each_subset, joint_seed_filter, ls_seed_values,
    min_norm_seed_values, select_constant_snr, select_fixed_noise, sparse_location_design, JointSolution, LsSolution,
    NoiseModel, ReconstructionOperator, SelectionMethod, SelectionResult, SparseDesign, EXHAUSTIVE_LIMIT,
};
pub use linalg::Mat;
pub use scalar::{Real, C};
pub use seeding::{
    adjust_for_initial_state, degree_reduced_design, exact_plan, feasibility, full_seeding_operator,
    identity_seeding_check, mnmt_design, mnst_design, plan_with_filter, reconstruct, reconstruct_from, seeding_column,
    seeding_operator, simulate_seeding, simulate_seeding_trace, snmt_design, Feasibility, IdentitySeedingCheck,
    ReconstructionPlan, ReconstructionReport, Scheme, SeedingDesign, SeedingSchedule, SelectionPattern,
};
pub use spectral::{
    build_shift, decompose, decompose_matrix, distinct_groups, frequency_order, gft, igft, laplacian_lambda_max,
    spectrum_census, vandermonde, FrequencySignal, Graph, GraphSignal, NodeCensus, ShiftChoice, ShiftKind,
    ShiftOperator, SpectralBasis, SpectrumCensus,
};
pub use tolerances::Tolerances;

pub type Mat64 = Mat<f64>;
pub type Shift64 = ShiftOperator<f64>;
pub type Basis64 = SpectralBasis<f64>;
pub type Signal64 = GraphSignal<f64>;
pub type Filter64 = FilterDesign<f64>;
pub type Schedule64 = SeedingSchedule<f64>;
pub type Plan64 = ReconstructionPlan<f64>;
pub type Report64 = ReconstructionReport<f64>;
pub type Operator64 = ReconstructionOperator<f64>;

pub type Mat32 = Mat<f32>;
pub type Shift32 = ShiftOperator<f32>;
pub type Basis32 = SpectralBasis<f32>;
pub type Signal32 = GraphSignal<f32>;
