//! The hydrodynamic limit `N/L → α`: limiting moments, the characteristic
//! flow `Φ_t(w) = w e^{tA₀(w)}` and its inverse, reconstruction of the
//! density from boundary values, and the step and single-mode examples.

mod density;
mod flow;
mod moments;
mod profile;
pub mod series;
mod single;
mod step;

pub use density::{
    density_at, density_reconstruct, flux, hilbert_transform, pde_residual, spectral_derivative,
    transported_coefficients, velocity, write_density_csv, DensityGrid, PointDensity, DEFAULT_GRID, RADIAL_DEPTH,
};
pub use flow::{flow_invert, radial_orientation, winding_count, InvertPath, Inversion, WINDING_NODES};
pub use moments::{
    coefficient_a_n, h_power_jet, lagrange_moments, limit_moment, limit_moment_partitions, limit_moments,
    ContourOptions, MAX_MOMENT_ORDER, MAX_PARTITION_ORDER,
};
pub use profile::{CharFlow, InitialProfile};
pub use single::{single_mode_profile, SingleMode};
pub use step::{
    step_critical_points, step_fronts, step_profile, step_quartic, step_report, step_s_values, StepProfileData,
    StepReport,
};

/// Default length of moment sequences.
pub const DEFAULT_N_MAX: usize = 64;
