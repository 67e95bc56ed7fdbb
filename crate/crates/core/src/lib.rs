//! Curvature estimation on digital contours from maximal digital circular arcs.
//!
//! Pipeline: [`grid::gauss_discretize`] → [`boundary::trace_boundary`] →
//! [`mdca::compute_mdcas`] → [`estimator::mdca_estimate`] /
//! [`estimator::lambda_mdca_estimate`]. [`harness`] compares the result
//! against [`groundtruth`] over a sweep of pixel sizes.

pub mod boundary;
pub mod estimator;
pub mod geom;
pub mod grid;
pub mod groundtruth;
pub mod harness;
pub mod mdca;
pub mod separability;

pub use boundary::{trace_boundary, BoundaryError, DigitalCurve, GridEdge, GridVertex};
pub use estimator::{lambda_mdca_estimate, mdca_estimate, CurvatureProfile, EstimatorError, Lambda, Method};
pub use geom::{BoundingBox, Point};
pub use grid::{gauss_discretize, GridError, GridSpec, ImplicitShape, PixelSet};
pub use groundtruth::{catalog_shape, implicit_curvature, GroundTruthError, PolynomialShape, Rhombus, Term};
pub use harness::{run_experiment, run_sweep, ErrorReport, ErrorRow, HarnessError, Sweep};
pub use mdca::{compute_mdcas, Mdca, MdcaError, MdcaSet};
pub use separability::{is_circular_separable, smallest_separating_circle, Enclosed, SeparabilityError, SeparatingCircle};
