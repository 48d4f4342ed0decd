//! Metric geometry on a single coordinate chart.

mod chart;
mod connection;
mod field;
mod frame;
mod geodesic;

pub use chart::{parse_locus, ChartManifold, Domain, Interval, EXCLUSION_MARGIN};
pub(crate) use connection::{covector_derivative, tensor11_derivative};
pub use connection::{
    christoffel, covariant_derivative_covector, covariant_derivative_tensor11, covariant_derivative_vector,
    lie_bracket, Christoffel, ConnectionAt,
};
pub use field::{CovectorField, TensorField11, VectorFieldSpec};
pub use frame::{gram, orthogonal_complement, orthonormalize, principal_angles, project, DEPENDENCE_THRESHOLD};
pub use geodesic::{integrate_geodesic, GeodesicSample, GeodesicTrace, MAX_SPEED_DRIFT};
