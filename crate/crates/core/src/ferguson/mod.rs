//! Dirichlet-Ferguson measures `D_{βσ}` on `[0, 1]`.

mod functional;
mod measure;
mod sampling;

pub use functional::{
    cf_series, limiting_posterior_action, phi_extension, raise_lower_on_cells, raise_lower_region,
    raise_lower_region_check, raise_region, raise_region_check, raise_region_on_cells,
    PosteriorLevel, PosteriorLimit, RegionCheck,
};
pub use measure::{
    BasePartition, DiscreteMeasure, ReferenceMeasure, Region, TestFunction, PROBABILITY_TOL,
    QUAD_ORDER, QUAD_PANELS,
};
pub use sampling::{
    cf_monte_carlo, cf_monte_carlo_grid, first_weight_mean, marginal_moments, marginalize,
    sample_ferguson, CfEstimate, FergusonSampler, MomentComparison, DEFAULT_EPS, MAX_ATOMS,
};
